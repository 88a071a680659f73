use qtur_core::random::{random_density, random_unitary, substream};
use qtur_core::{
    classical_symmetric, coherence, dephase, relative_entropy, symmetric_relative_entropy, von_neumann_entropy,
    DensityMatrixF64,
};

fn pairs(seed: u64, n: u64) -> impl Iterator<Item = (DensityMatrixF64, DensityMatrixF64)> {
    (0..n).map(move |k| {
        let mut rng = substream(seed, k);
        let dim = 2 + (k % 3) as usize;
        (random_density(dim, &mut rng).unwrap(), random_density(dim, &mut rng).unwrap())
    })
}

fn finite(x: qtur_core::ExtendedReal<f64>) -> f64 {
    x.value().expect("full-support pairs have finite divergences")
}

#[test]
fn coherence_splits_relative_entropy() {
    for (rho, sigma) in pairs(21, 1000) {
        let dephased = dephase(&rho, sigma.spectrum()).unwrap();
        let total = finite(relative_entropy(&rho, &sigma).unwrap());
        let classical = finite(relative_entropy(&dephased, &sigma).unwrap());
        let c = coherence(&rho, &sigma).unwrap();
        assert!(c >= 0.0);
        assert!((total - classical - c).abs() <= 1e-10, "{total} vs {classical} + {c}");
        assert!((von_neumann_entropy(&dephased) - von_neumann_entropy(&rho) - c).abs() <= 1e-12);
    }
}

#[test]
fn symmetric_divergence_decomposes() {
    for (rho, sigma) in pairs(22, 1000) {
        let s = finite(symmetric_relative_entropy(&rho, &sigma).unwrap());
        let s_cl = finite(classical_symmetric(&rho, &sigma).unwrap());
        let extra = (coherence(&sigma, &rho).unwrap() + coherence(&rho, &sigma).unwrap()) / 2.0;
        assert!((s - s_cl - extra).abs() <= 1e-10);
        assert!(s_cl <= s + 1e-12);
        assert_eq!(
            symmetric_relative_entropy(&sigma, &rho).unwrap().value().map(|v| (v - s).abs() < 1e-14),
            Some(true)
        );
    }
}

#[test]
fn unitary_invariance() {
    for (k, (rho, sigma)) in pairs(23, 300).enumerate() {
        let mut rng = substream(230, k as u64);
        let u = random_unitary(rho.dim(), &mut rng);
        let before = finite(relative_entropy(&rho, &sigma).unwrap());
        let after = finite(relative_entropy(&rho.evolve(&u).unwrap(), &sigma.evolve(&u).unwrap()).unwrap());
        assert!((before - after).abs() <= 1e-10);
    }
}

#[test]
fn dephasing_is_diagonal_and_trace_preserving() {
    for (rho, sigma) in pairs(24, 200) {
        let d = dephase(&rho, sigma.spectrum()).unwrap();
        assert!((d.matrix().trace().re - 1.0).abs() < 1e-12);
        let v = sigma.spectrum().eigenvectors();
        let n = rho.dim();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let z = d.matrix().sandwich(&v.column(i), &v.column(j));
                    assert!(z.norm() < 1e-13);
                }
            }
        }
    }
}
