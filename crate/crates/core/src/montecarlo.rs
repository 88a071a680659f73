//! Random qubit experiment and the saturating two-level family.
//!
//! Each run draws
//!
//! ```text
//! ρ = diag(1 - p₁, p₁)
//! σ = [[1 - q₁, C], [C*, q₁]],   C = |C| e^{iφ₁}
//! θ = ω(|1⟩⟨1| - |0⟩⟨0|) + D|0⟩⟨1| + D*|1⟩⟨0|,   D = |D| e^{iφ₂}
//! ```
//!
//! with `p₁, q₁, ω ~ U[0,1]`, `|C|² ~ U[0, q₁(1-q₁)]`, `|D|² ~ U[0,1]` and
//! phases `~ U[0, 2π)`. Runs whose two means coincide within `1e-9` leave the
//! uncertainty undefined; they are redrawn from the same substream and
//! counted.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bound;
use crate::divergence::{classical_symmetric, symmetric_relative_entropy};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::random::{substream, uniform};
use crate::scalar::Real;
use crate::state::{expectation, DensityMatrix, Observable};
use crate::surrogate::uncertainty_u;
use crate::tolerance;

const MAX_REDRAWS: u32 = 1_000_000;

/// Parameters of one sampled triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleParams<T> {
    pub p1: T,
    pub q1: T,
    pub abs_c_sq: T,
    pub phi1: T,
    pub omega: T,
    pub abs_d_sq: T,
    pub phi2: T,
}

/// `(ρ, σ, θ)` with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple<T> {
    pub params: SampleParams<T>,
    pub rho: DensityMatrix<T>,
    pub sigma: DensityMatrix<T>,
    pub theta: Observable<T>,
}

impl<T: Real> SampleParams<T> {
    /// Draws parameters in the ranges of the qubit experiment.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let two_pi = std::f64::consts::TAU;
        let p1 = uniform(rng, 0.0, 1.0);
        let q1: T = uniform(rng, 0.0, 1.0);
        let c_max = (q1 * (T::one() - q1)).as_f64();
        Self {
            p1,
            q1,
            abs_c_sq: uniform(rng, 0.0, c_max),
            phi1: uniform(rng, 0.0, two_pi),
            omega: uniform(rng, 0.0, 1.0),
            abs_d_sq: uniform(rng, 0.0, 1.0),
            phi2: uniform(rng, 0.0, two_pi),
        }
    }

    /// Builds the matrices; fails if `σ` is not a valid state.
    pub fn build(&self) -> Result<Triple<T>> {
        let zero = T::zero();
        let re = |x: T| Complex::new(x, zero);
        let rho = DensityMatrix::diagonal(&[T::one() - self.p1, self.p1])?;
        let c = Complex::from_polar(self.abs_c_sq.max(zero).sqrt(), self.phi1);
        let sigma = DensityMatrix::new(ComplexMatrix::from_rows(&[
            vec![re(T::one() - self.q1), c],
            vec![c.conj(), re(self.q1)],
        ])?)?;
        let d = Complex::from_polar(self.abs_d_sq.max(zero).sqrt(), self.phi2);
        let theta = Observable::new(ComplexMatrix::from_rows(&[
            vec![re(-self.omega), d],
            vec![d.conj(), re(self.omega)],
        ])?)?;
        Ok(Triple {
            params: *self,
            rho,
            sigma,
            theta,
        })
    }
}

/// Draws a valid triple, resampling if `σ` fails validation.
pub fn sample_triple<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Triple<T> {
    loop {
        if let Ok(t) = SampleParams::draw(rng).build() {
            return t;
        }
    }
}

/// One retained run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord<T> {
    pub index: u64,
    pub params: SampleParams<T>,
    /// `U(θ;ρ,σ)`.
    pub u: T,
    /// `S̃(ρ,σ)`, possibly `+∞`.
    pub s_tilde: T,
    /// `S̃_cl(ρ,σ)`, possibly `+∞`.
    pub s_cl: T,
    /// `f(S̃)`.
    pub bound: T,
    /// `f(S̃_cl)`.
    pub bound_cl: T,
    /// `U ≥ f(S̃) - 1e-9`.
    pub satisfied: bool,
    /// `U < f(S̃_cl) - 1e-9`.
    pub classical_violated: bool,
    /// Master seed; the record used substream `index`.
    pub seed: u64,
    /// Draws discarded for coinciding means before this record.
    pub redraws: u32,
}

/// Evaluates a triple; `EqualMeans` if the uncertainty is undefined.
pub fn evaluate<T: Real>(triple: &Triple<T>, index: u64, seed: u64) -> Result<RunRecord<T>> {
    let Triple { rho, sigma, theta, .. } = triple;
    let u = uncertainty_u(rho, sigma, theta)?;
    let s_tilde = symmetric_relative_entropy(rho, sigma)?;
    let s_cl = classical_symmetric(rho, sigma)?;
    let bound = bound::f(s_tilde)?.to_scalar();
    let bound_cl = bound::f(s_cl)?.to_scalar();
    let slack = T::tol(tolerance::INEQUALITY);
    Ok(RunRecord {
        index,
        params: triple.params,
        u,
        s_tilde: s_tilde.to_scalar(),
        s_cl: s_cl.to_scalar(),
        bound,
        bound_cl,
        satisfied: u >= bound - slack,
        classical_violated: u < bound_cl - slack,
        seed,
        redraws: 0,
    })
}

fn run_one<T: Real>(index: u64, seed: u64) -> Result<RunRecord<T>> {
    let mut rng = substream(seed, index);
    let mut redraws = 0;
    loop {
        let triple = sample_triple::<T, _>(&mut rng);
        let gap = expectation(&triple.rho, &triple.theta)? - expectation(&triple.sigma, &triple.theta)?;
        if gap.abs() > T::tol(tolerance::MEAN_GAP) {
            let mut record = evaluate(&triple, index, seed)?;
            record.redraws = redraws;
            return Ok(record);
        }
        redraws += 1;
        if redraws == MAX_REDRAWS {
            return Err(Error::EqualMeans { gap: gap.as_f64() });
        }
    }
}

/// Outcome of [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment<T> {
    pub seed: u64,
    pub records: Vec<RunRecord<T>>,
}

impl<T: Real> Experiment<T> {
    /// Draws discarded because the two means coincided.
    pub fn redraws(&self) -> u64 {
        self.records.iter().map(|r| u64::from(r.redraws)).sum()
    }

    /// Records with `U < f(S̃) - 1e-9`.
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|r| !r.satisfied).count()
    }

    /// Records with `U < f(S̃_cl) - 1e-9`.
    pub fn classical_violations(&self) -> usize {
        self.records.iter().filter(|r| r.classical_violated).count()
    }

    /// Mean of `U - f(S̃)` over records with a finite bound.
    pub fn mean_gap(&self) -> T {
        let gaps: Vec<T> = self
            .records
            .iter()
            .filter(|r| r.bound.is_finite())
            .map(|r| r.u - r.bound)
            .collect();
        let n = T::from_usize(gaps.len().max(1)).expect("count fits scalar");
        gaps.into_iter().sum::<T>() / n
    }
}

/// Runs `n` records in parallel; record `k` draws from substream `k` of
/// `seed`, so the result does not depend on the thread count.
pub fn run_experiment<T: Real>(n: usize, seed: u64) -> Result<Experiment<T>> {
    let records = (0..n as u64)
        .into_par_iter()
        .map(|k| run_one(k, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(Experiment { seed, records })
}

/// One point of the saturating family.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturationPoint<T> {
    pub epsilon: T,
    pub record: RunRecord<T>,
    /// `h(ε) = ε tanh(ε/2)`.
    pub h_epsilon: T,
    /// `sinh⁻²(ε/2)`.
    pub closed_form: T,
    pub mean_rho: T,
    pub mean_sigma: T,
}

impl<T: Real> SaturationPoint<T> {
    /// `U - f(S̃)`.
    pub fn gap(&self) -> T {
        self.record.u - self.record.bound
    }

    /// `|U - f(S̃)| ≤ 1e-8` and `|S̃ - h(ε)| ≤ 1e-10`.
    pub fn saturates(&self) -> bool {
        self.gap().abs() <= T::tol(1e-8) && (self.record.s_tilde - self.h_epsilon).abs() <= T::tol(1e-10)
    }
}

/// Parameters of the saturating pair: `ρ ∝ e^{ε/2}|1⟩⟨1| + e^{-ε/2}|0⟩⟨0|`,
/// `σ` with the weights swapped (both normalized by `2cosh(ε/2)`),
/// `θ = ω(|1⟩⟨1| - |0⟩⟨0|)`.
pub fn saturating_params<T: Real>(epsilon: T, omega: T) -> Result<SampleParams<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::NonPositiveEpsilon {
            value: epsilon.as_f64(),
        });
    }
    if !(omega > T::zero()) {
        return Err(Error::NonPositiveInput { value: omega.as_f64() });
    }
    let half = epsilon * T::lit(0.5);
    let z = T::lit(2.0) * half.cosh();
    Ok(SampleParams {
        p1: half.exp() / z,
        q1: (-half).exp() / z,
        abs_c_sq: T::zero(),
        phi1: T::zero(),
        omega,
        abs_d_sq: T::zero(),
        phi2: T::zero(),
    })
}

/// Evaluates the saturating family on `eps_grid`.
pub fn saturation_family<T: Real>(eps_grid: &[T], omega: T) -> Result<Vec<SaturationPoint<T>>> {
    eps_grid
        .iter()
        .enumerate()
        .map(|(k, &epsilon)| {
            let triple = saturating_params(epsilon, omega)?.build()?;
            let record = evaluate(&triple, k as u64, 0)?;
            Ok(SaturationPoint {
                epsilon,
                h_epsilon: bound::h(epsilon)?,
                closed_form: bound::saturation_value(epsilon)?.to_scalar(),
                mean_rho: expectation(&triple.rho, &triple.theta)?,
                mean_sigma: expectation(&triple.sigma, &triple.theta)?,
                record,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coherence_corner_gives_commuting_pair() {
        let params = SampleParams {
            p1: 0.3,
            q1: 0.3,
            abs_c_sq: 0.0,
            phi1: 1.0,
            omega: 0.5,
            abs_d_sq: 0.2,
            phi2: 0.4,
        };
        let t = params.build().unwrap();
        assert!(t.rho.matrix().max_abs_diff(t.sigma.matrix()) < 1e-16);
    }

    #[test]
    fn sampled_sigma_is_positive() {
        let mut rng = substream(11, 0);
        for _ in 0..2000 {
            let t = sample_triple::<f64, _>(&mut rng);
            assert!(t.sigma.min_eigenvalue() >= -1e-12);
            let p = t.params;
            assert!(p.abs_c_sq <= p.q1 * (1.0 - p.q1));
            assert!((0.0..std::f64::consts::TAU).contains(&p.phi1));
        }
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let a = sample_triple::<f64, _>(&mut substream(5, 9));
        let b = sample_triple::<f64, _>(&mut substream(5, 9));
        assert_eq!(a, b);
        let e1 = run_experiment::<f64>(1, 42).unwrap();
        let e2 = run_experiment::<f64>(1, 42).unwrap();
        assert_eq!(e1, e2);
        assert_eq!(e1.records.len(), 1);
    }

    #[test]
    fn saturation_spot_values() {
        let pts = saturation_family(&[2.0f64, 1.0], 1.0).unwrap();
        assert!((pts[0].record.u - 0.724062).abs() < 1e-6);
        assert!((pts[0].record.s_tilde - 1.523188).abs() < 1e-6);
        assert!((pts[1].record.u - 3.682694).abs() < 1e-6);
        assert!((pts[1].record.s_tilde - 0.462117).abs() < 1e-6);
        for p in &pts {
            assert!(p.saturates());
            let t = (p.epsilon / 2.0).tanh();
            assert!((p.mean_rho - t).abs() < 1e-15);
            assert!((p.mean_sigma + t).abs() < 1e-15);
        }
    }

    #[test]
    fn saturation_rejects_non_positive_epsilon() {
        assert!(matches!(
            saturation_family(&[1.0f64, -1.0], 1.0),
            Err(Error::NonPositiveEpsilon { .. })
        ));
    }

    #[test]
    fn small_experiment_satisfies_bound() {
        let e = run_experiment::<f64>(500, 3).unwrap();
        assert_eq!(e.records.len(), 500);
        assert_eq!(e.violations(), 0);
        assert!(e.mean_gap() > 0.0);
        for (k, r) in e.records.iter().enumerate() {
            assert_eq!(r.index, k as u64);
        }
    }

    #[test]
    fn single_precision_experiment_runs() {
        let e = run_experiment::<f32>(50, 3).unwrap();
        assert_eq!(e.records.len(), 50);
    }
}
