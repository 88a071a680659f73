use qtur_core::channel::{apply_channel, dpi_margin, fixed_point_bound, KrausChannel};
use qtur_core::montecarlo::sample_triple;
use qtur_core::random::{random_density, random_observable, substream};
use qtur_core::state::log_observable;
use qtur_core::thermo::{partial_swap, thermal_qubit};
use qtur_core::{
    entropy_production, flux_capacity_relation, qtur_check, relative_entropy, trajectory_dual, DensityMatrixF64,
    Error, Observable, Subsystem, ThermoProcessF64,
};

#[test]
fn data_processing_on_random_channels() {
    for k in 0..1000u64 {
        let mut rng = substream(51, k);
        let dim = 2 + (k % 3) as usize;
        let ch = KrausChannel::random(dim, 1 + (k % 4) as usize, &mut rng).unwrap();
        let rho = random_density(dim, &mut rng).unwrap();
        let sigma = random_density(dim, &mut rng).unwrap();
        let m = dpi_margin(&ch, &rho, &sigma).unwrap();
        assert!(m.margin() >= -1e-10, "draw {k}: {m:?}");
        assert!(m.holds(1e-10));
    }
}

#[test]
fn dephasing_strictly_contracts_sampled_pairs() {
    let ch = KrausChannel::dephasing(2);
    for k in 0..100u64 {
        let mut rng = substream(52, k);
        let t = sample_triple::<f64, _>(&mut rng);
        let m = dpi_margin(&ch, &t.rho, &t.sigma).unwrap();
        assert!(m.holds(1e-10));
        if t.params.abs_c_sq > 1e-6 {
            assert!(m.margin() > 0.0, "draw {k}: {m:?}");
        }
    }
}

#[test]
fn unitary_channel_preserves_divergence() {
    let mut rng = substream(53, 0);
    let u = qtur_core::random::random_unitary::<f64, _>(3, &mut rng);
    let ch = KrausChannel::unitary(u).unwrap();
    let rho = random_density(3, &mut rng).unwrap();
    let sigma = random_density(3, &mut rng).unwrap();
    let m = dpi_margin(&ch, &rho, &sigma).unwrap();
    assert!(m.margin().abs() <= 1e-10);
}

#[test]
fn fixed_point_bounds_along_iterations() {
    let mut rng = substream(54, 0);
    let theta = random_observable(2, &mut rng);
    let depol = KrausChannel::depolarizing(2, 0.05).unwrap();
    let mixed = DensityMatrixF64::maximally_mixed(2);
    let damp = KrausChannel::amplitude_damping(0.1).unwrap();
    let ground = DensityMatrixF64::diagonal(&[1.0, 0.0]).unwrap();
    for k in 0..20u64 {
        let mut rng = substream(54, k + 1);
        let rho0 = random_density(2, &mut rng).unwrap();
        let r = fixed_point_bound(&depol, &rho0, &mixed, &theta, 50).unwrap();
        assert!(r.holds(1e-9));
        let r = fixed_point_bound(&damp, &rho0, &ground, &theta, 50).unwrap();
        assert!(r.holds(1e-9));
    }
    let out = apply_channel(&damp, &ground).unwrap();
    assert!(out.matrix().max_abs_diff(ground.matrix()) < 1e-15);
}

#[test]
fn thermodynamics_on_random_processes() {
    for k in 0..100u64 {
        let mut rng = substream(55, k);
        let p = ThermoProcessF64::random(2, 2, &mut rng).unwrap();
        let ep = entropy_production(&p).unwrap();
        let (sigma, dual) = (ep.sigma.value().unwrap(), ep.sigma_dual.value().unwrap());
        assert!(sigma >= -1e-10 && dual >= -1e-10);
        assert!(ep.unitary_route_residual() <= 1e-10);

        let again = relative_entropy(p.rho(), p.sigma()).unwrap();
        assert!(ep.dual().dual().sigma.abs_diff(&again) <= 1e-10);

        let (_, mean) = trajectory_dual(&p).unwrap();
        assert!((mean - dual).abs() <= 1e-8);

        let theta = random_observable(4, &mut rng);
        match qtur_check(&p, &theta) {
            Ok(q) => assert!(q.holds(1e-9), "draw {k}: {q:?}"),
            Err(Error::EqualMeans { .. }) => {}
            Err(e) => panic!("draw {k}: {e}"),
        }

        match flux_capacity_relation(&p) {
            Ok(f) => assert!(f.holds(1e-9), "draw {k}: {f:?}"),
            Err(Error::ZeroFlux { .. }) => {}
            Err(e) => panic!("draw {k}: {e}"),
        }
    }
}

#[test]
fn partial_swaps_between_thermal_qubits() {
    for k in 0..200u64 {
        let mut rng = substream(56, k);
        let angle = qtur_core::random::uniform::<f64, _>(&mut rng, 0.01, std::f64::consts::FRAC_PI_2);
        let bs = qtur_core::random::uniform::<f64, _>(&mut rng, 0.1, 3.0);
        // equal temperatures give zero flux; stay clear of that limit
        let be = bs + qtur_core::random::uniform::<f64, _>(&mut rng, 0.2, 2.0);
        let p = ThermoProcessF64::new(thermal_qubit(bs), thermal_qubit(be), partial_swap(2, angle)).unwrap();
        match flux_capacity_relation(&p) {
            Ok(f) => assert!(f.holds(1e-9), "draw {k}: {f:?}"),
            Err(Error::ZeroFlux { .. }) => {}
            Err(e) => panic!("draw {k}: {e}"),
        }
        let theta = log_observable(p.rho_e()).embed(2, Subsystem::Second);
        if let Ok(q) = qtur_check(&p, &theta) {
            assert!(q.holds(1e-9));
        }
    }
}

#[test]
fn identity_process_is_degenerate() {
    let p = ThermoProcessF64::new(thermal_qubit(0.5), thermal_qubit(1.5), qtur_core::ComplexMatrixF64::identity(4))
        .unwrap();
    let theta = Observable::pauli_z().embed(2, Subsystem::First);
    assert!(matches!(qtur_check(&p, &theta), Err(Error::EqualMeans { .. })));
    assert!(matches!(flux_capacity_relation(&p), Err(Error::ZeroFlux { .. })));
}
