//! Seeded random states, observables, unitaries and ensembles.
//!
//! All sampling goes through [`Stream`], ChaCha8 keyed by a 64-bit seed.
//! Record `k` of an experiment draws from stream `k` of that key
//! ([`substream`]), so records can be generated in any order or in parallel
//! and still reproduce bit for bit.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::classical::ClassicalEnsemble;
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::state::{validate_density, DensityMatrix, Observable};

/// Random stream used everywhere in the crate.
pub type Stream = ChaCha8Rng;

/// Stream `index` of the generator keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw on `[lo, hi)`.
pub fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    T::lit(lo + (hi - lo) * rng.random::<f64>())
}

/// Standard complex Gaussian (independent `N(0,1)` real and imaginary parts).
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Full-rank state `G G† / tr(G G†)` with `G` complex Gaussian.
pub fn random_density<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix<T>> {
    let g = gaussian_matrix::<T, R>(dim, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    validate_density(w.scale_real(T::one() / tr).hermitian_part())
}

/// Hermitian `(G + G†)/2` with `G` complex Gaussian.
pub fn random_observable<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Observable<T> {
    let g = gaussian_matrix::<T, R>(dim, rng);
    Observable::new(g.hermitian_part()).expect("hermitian part is Hermitian")
}

/// Unitary from Gram–Schmidt orthonormalization of a complex Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    loop {
        let g = gaussian_matrix::<T, R>(dim, rng);
        if let Some(u) = orthonormalize_columns(&g) {
            return u;
        }
    }
}

/// Modified Gram–Schmidt on the columns, applied twice for accuracy.
/// `None` if the columns are numerically dependent.
pub fn orthonormalize_columns<T: Real>(m: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let n = m.dim();
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
                let basis = cols[k].clone();
                for (x, b) in cols[j].iter_mut().zip(&basis) {
                    *x = *x - *b * proj;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::tol(1e-8)) {
            return None;
        }
        for x in cols[j].iter_mut() {
            *x = *x / norm;
        }
    }
    Some(ComplexMatrix::from_fn(n, |i, j| cols[j][i]))
}

/// `P` and `Q` from normalized uniform draws, `θ` with real and imaginary
/// parts uniform on `[-1, 1]`.
pub fn random_ensemble<T: Real, R: Rng + ?Sized>(size: usize, rng: &mut R) -> ClassicalEnsemble<T> {
    let draw_probabilities = |rng: &mut R| {
        let raw: Vec<f64> = (0..size).map(|_| rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| T::lit(x / total)).collect::<Vec<T>>()
    };
    let p = draw_probabilities(rng);
    let q = draw_probabilities(rng);
    let theta = (0..size)
        .map(|_| Complex::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)))
        .collect();
    ClassicalEnsemble::new(p, q, theta).expect("normalized draws form a valid ensemble")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| substream(7, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| substream(7, 3).random()).collect();
        assert_eq!(a, b);
        let mut s3 = substream(7, 3);
        let mut s4 = substream(7, 4);
        assert_ne!(s3.random::<u64>(), s4.random::<u64>());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = substream(1, 0);
        for dim in [2, 3, 4, 8] {
            let u = random_unitary::<f64, _>(dim, &mut rng);
            assert!(u.unitarity_residual() < 1e-13);
        }
    }

    #[test]
    fn random_density_has_full_support() {
        let mut rng = substream(2, 0);
        let rho = random_density::<f64, _>(4, &mut rng).unwrap();
        assert!(rho.has_full_support());
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
    }
}
