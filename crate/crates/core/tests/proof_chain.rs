use qtur_core::random::{random_density, random_observable, substream};
use qtur_core::{
    build_surrogate, expectation, full_report, relative_entropy, surrogate_kl, symmetric_relative_entropy,
};

#[test]
fn surrogate_reproduces_means_moments_and_divergences() {
    for k in 0..1000 {
        let mut rng = substream(31, k);
        let dim = 2 + (k % 3) as usize;
        let rho = random_density::<f64, _>(dim, &mut rng).unwrap();
        let sigma = random_density::<f64, _>(dim, &mut rng).unwrap();
        let theta = random_observable(dim, &mut rng);
        let s = build_surrogate(&rho, &sigma, &theta).unwrap();

        let mp = s.mean_p();
        let mq = s.mean_q();
        assert!((mp.re - expectation(&rho, &theta).unwrap()).abs() <= 1e-10 && mp.im.abs() <= 1e-10);
        assert!((mq.re - expectation(&sigma, &theta).unwrap()).abs() <= 1e-10 && mq.im.abs() <= 1e-10);

        let sq = theta.squared();
        assert!(expectation(&rho, &sq).unwrap() >= s.second_moment_p() - 1e-9);
        assert!(expectation(&sigma, &sq).unwrap() >= s.second_moment_q() - 1e-9);

        let (pq, qp) = surrogate_kl(&s);
        let fwd = relative_entropy(&rho, &sigma).unwrap();
        let bwd = relative_entropy(&sigma, &rho).unwrap();
        assert!(pq.abs_diff(&fwd) <= 1e-10, "draw {k}: {pq} vs {fwd}");
        assert!(qp.abs_diff(&bwd) <= 1e-10);
        let mean = qtur_core::ExtendedReal::mean(pq, qp);
        assert!(mean.abs_diff(&symmetric_relative_entropy(&rho, &sigma).unwrap()) <= 1e-10);

        let report = full_report(&rho, &sigma, &theta).unwrap();
        assert!(report.chain_holds(), "draw {k}: {report:?}");
    }
}

#[test]
fn rank_deficient_states_keep_the_chain() {
    for k in 0..200 {
        let mut rng = substream(32, k);
        let g = random_density::<f64, _>(3, &mut rng).unwrap();
        let v = g.spectrum().vector(2);
        let rho = qtur_core::DensityMatrixF64::pure(&v).unwrap();
        let sigma = random_density::<f64, _>(3, &mut rng).unwrap();
        let theta = random_observable(3, &mut rng);
        let report = full_report(&rho, &sigma, &theta).unwrap();
        assert!(report.chain_holds(), "draw {k}: {report:?}");
        let (pq, _) = surrogate_kl(&build_surrogate(&rho, &sigma, &theta).unwrap());
        assert!(pq.abs_diff(&relative_entropy(&rho, &sigma).unwrap()) <= 1e-10);
    }
}
