//! Quantum entropies, relative entropies and the coherence split of the
//! symmetric relative entropy.
//!
//! All logarithms are natural.

use num_traits::Zero;

use crate::eigen::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::scalar::Real;
use crate::state::DensityMatrix;
use crate::tolerance;

/// `S(ρ) = -Σ λ ln λ` over eigenvalues above the support cutoff.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    let cutoff = T::tol(tolerance::SUPPORT_CUTOFF);
    let s = rho
        .eigenvalues()
        .iter()
        .filter(|&&l| l > cutoff)
        .fold(T::zero(), |acc, &l| acc - l * l.ln());
    s.max(T::zero())
}

/// `|⟨b_j|a_i⟩|²` for all eigenvector pairs.
pub(crate) fn overlap_weights<T: Real>(
    a: &SpectralDecomposition<T>,
    b: &SpectralDecomposition<T>,
) -> Vec<Vec<T>> {
    let n = a.dim();
    let va = a.eigenvectors();
    let vb = b.eigenvectors();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .fold(num_complex::Complex::zero(), |acc, k| {
                            acc + vb[(k, j)].conj() * va[(k, i)]
                        })
                        .norm_sqr()
                })
                .collect()
        })
        .collect()
}

fn check_dims<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

/// `S(ρ‖σ) = Σ_i p_i ln p_i - Σ_ij |⟨q_j|p_i⟩|² p_i ln q_j`, evaluated in the
/// two eigenbases.
///
/// Infinite when some `p_i > 1e-12` has more than `1e-9` of its overlap mass
/// on eigenvectors of `σ` with `q_j ≤ 1e-12`.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<ExtendedReal<T>> {
    check_dims(rho, sigma)?;
    let cutoff = T::tol(tolerance::SUPPORT_CUTOFF);
    let leak_tol = T::tol(tolerance::SUPPORT_LEAK);
    let p = rho.eigenvalues();
    let q = sigma.eigenvalues();
    let overlap = overlap_weights(rho.spectrum(), sigma.spectrum());

    let mut value = T::zero();
    for (i, &pi) in p.iter().enumerate() {
        if pi <= cutoff {
            continue;
        }
        let mut covered = T::zero();
        let mut cross = T::zero();
        for (j, &qj) in q.iter().enumerate() {
            if qj > cutoff {
                covered = covered + overlap[i][j];
                cross = cross + overlap[i][j] * qj.ln();
            }
        }
        if T::one() - covered > leak_tol {
            return Ok(ExtendedReal::Infinite);
        }
        value = value + pi * pi.ln() - pi * cross;
    }
    Ok(ExtendedReal::finite(value))
}

/// `S̃(ρ,σ) = (S(ρ‖σ) + S(σ‖ρ)) / 2`.
pub fn symmetric_relative_entropy<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
) -> Result<ExtendedReal<T>> {
    Ok(ExtendedReal::mean(
        relative_entropy(rho, sigma)?,
        relative_entropy(sigma, rho)?,
    ))
}

/// `Δ(ρ) = Σ_j |b_j⟩⟨b_j| ⟨b_j|ρ|b_j⟩` in the eigenbasis `b` of `basis`.
///
/// The returned state carries `basis`'s eigenvectors as its own spectral
/// decomposition, so it is exactly diagonal there.
pub fn dephase<T: Real>(rho: &DensityMatrix<T>, basis: &SpectralDecomposition<T>) -> Result<DensityMatrix<T>> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    let weights: Vec<T> = (0..basis.dim())
        .map(|j| {
            let v = basis.vector(j);
            rho.matrix().sandwich(&v, &v).re.max(T::zero())
        })
        .collect();
    let spectrum = SpectralDecomposition::from_parts(weights, basis.eigenvectors().clone())?;
    DensityMatrix::from_spectrum(spectrum)
}

/// Relative entropy of coherence `C_σ(ρ) = S(Δ_σ(ρ)) - S(ρ)`.
pub fn coherence<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let dephased = dephase(rho, sigma.spectrum())?;
    let c = von_neumann_entropy(&dephased) - von_neumann_entropy(rho);
    Ok(ExtendedReal::finite(c).value().unwrap_or(c))
}

/// Classical component `S̃_cl(ρ,σ) = [S(Δ_σ ρ‖σ) + S(Δ_ρ σ‖ρ)] / 2`.
pub fn classical_symmetric<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
) -> Result<ExtendedReal<T>> {
    check_dims(rho, sigma)?;
    let forward = relative_entropy(&dephase(rho, sigma.spectrum())?, sigma)?;
    let backward = relative_entropy(&dephase(sigma, rho.spectrum())?, rho)?;
    Ok(ExtendedReal::mean(forward, backward))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex;

    use super::*;
    use crate::matrix::ComplexMatrix;

    type Rho = DensityMatrix<f64>;

    fn fin(x: ExtendedReal<f64>) -> f64 {
        x.value().expect("finite")
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&Rho::diagonal(&[1.0, 0.0]).unwrap()), 0.0);
        let ln2 = std::f64::consts::LN_2;
        assert!((von_neumann_entropy(&Rho::maximally_mixed(2)) - ln2).abs() < 1e-15);
        // scalar oracle: -(0.7 ln 0.7 + 0.3 ln 0.3)
        let oracle = -(0.7f64 * 0.7f64.ln() + 0.3 * 0.3f64.ln());
        let s = von_neumann_entropy(&Rho::diagonal(&[0.7, 0.3]).unwrap());
        assert!((s - oracle).abs() < 1e-15);
        assert!((s - 0.610864).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = Rho::diagonal(&[0.7, 0.3]).unwrap();
        assert_eq!(fin(relative_entropy(&rho, &rho).unwrap()), 0.0);

        let oracle = 0.7 * 1.4f64.ln() + 0.3 * 0.6f64.ln();
        let s = fin(relative_entropy(&rho, &Rho::maximally_mixed(2)).unwrap());
        assert!((s - oracle).abs() < 1e-15);
        assert!((s - 0.082283).abs() < 1e-6);

        let a = Rho::diagonal(&[1.0, 0.0]).unwrap();
        let b = Rho::diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(relative_entropy(&a, &b).unwrap(), ExtendedReal::Infinite);
    }

    #[test]
    fn pure_state_against_itself_is_zero() {
        let s = 0.6f64.sqrt();
        let psi = [Complex::new(s, 0.0), Complex::new(0.0, (1.0 - s * s).sqrt())];
        let rho = Rho::pure(&psi).unwrap();
        assert_eq!(fin(relative_entropy(&rho, &rho).unwrap()), 0.0);
        assert_eq!(
            relative_entropy(&Rho::maximally_mixed(2), &rho).unwrap(),
            ExtendedReal::Infinite
        );
        assert!(relative_entropy(&rho, &Rho::maximally_mixed(2)).unwrap().is_finite());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            relative_entropy(&Rho::maximally_mixed(2), &Rho::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dephasing_in_own_basis_is_identity() {
        let rho = Rho::diagonal(&[0.2, 0.8]).unwrap();
        let d = dephase(&rho, rho.spectrum()).unwrap();
        assert!(d.matrix().max_abs_diff(rho.matrix()) < 1e-16);
    }

    #[test]
    fn coherence_of_plus_state() {
        // |+⟩⟨+| dephased in the standard basis is I/2: C = ln 2 - 0
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Rho::pure(&[Complex::new(s, 0.0), Complex::new(s, 0.0)]).unwrap();
        let sigma = Rho::diagonal(&[0.25, 0.75]).unwrap();
        let c = coherence(&plus, &sigma).unwrap();
        assert!((c - std::f64::consts::LN_2).abs() < 1e-12);
        let deph = dephase(&plus, sigma.spectrum()).unwrap();
        assert!(deph.matrix().max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn commuting_states_have_no_coherence() {
        let rho = Rho::diagonal(&[0.1, 0.9]).unwrap();
        let sigma = Rho::diagonal(&[0.6, 0.4]).unwrap();
        assert!(coherence(&rho, &sigma).unwrap().abs() < 1e-15);
        let total = fin(symmetric_relative_entropy(&rho, &sigma).unwrap());
        let cl = fin(classical_symmetric(&rho, &sigma).unwrap());
        assert!((total - cl).abs() < 1e-15);
    }
}
