//! Kraus-form quantum channels and the data-processing consequences of the
//! bound: `f(S̃(E(ρ),E(σ))) ≥ f(S̃(ρ,σ))`, and a time-independent bound
//! relative to a fixed point.

use num_complex::Complex;
use rand::Rng;

use crate::bound;
use crate::divergence::symmetric_relative_entropy;
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::extended::{BoundValue, ExtendedReal};
use crate::matrix::ComplexMatrix;
use crate::random::gaussian_matrix;
use crate::scalar::Real;
use crate::state::{expectation, validate_density, DensityMatrix, Observable};
use crate::surrogate::uncertainty_u;
use crate::tolerance;

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T> {
    operators: Vec<ComplexMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Checks shared dimensions and `Σ K†K = I` within `1e-10`.
    pub fn new(operators: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let dim = operators.first().map(ComplexMatrix::dim).ok_or(Error::IncompleteKraus {
            residual: 1.0,
        })?;
        let mut sum = ComplexMatrix::zeros(dim);
        for k in &operators {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.dim(),
                });
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if residual > T::tol(tolerance::KRAUS_COMPLETENESS) {
            return Err(Error::IncompleteKraus {
                residual: residual.as_f64(),
            });
        }
        Ok(Self { operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: ComplexMatrix<T>) -> Result<Self> {
        let residual = u.unitarity_residual();
        if residual > T::tol(tolerance::UNITARY) {
            return Err(Error::NotUnitary {
                residual: residual.as_f64(),
            });
        }
        Ok(Self { operators: vec![u] })
    }

    /// Full dephasing in the computational basis, Kraus `{|k⟩⟨k|}`.
    pub fn dephasing(dim: usize) -> Self {
        let operators = (0..dim)
            .map(|k| {
                let mut e = vec![T::zero(); dim];
                e[k] = T::one();
                ComplexMatrix::diag(&e)
            })
            .collect();
        Self { operators }
    }

    /// `ρ ↦ (1-p) ρ + p I/d`, Kraus `{√(1-p) I} ∪ {√(p/d) |i⟩⟨j|}`.
    pub fn depolarizing(dim: usize, p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::NonPositiveInput { value: p.as_f64() });
        }
        let d = T::from_usize(dim).expect("dimension fits scalar");
        let mut operators = vec![ComplexMatrix::identity(dim).scale_real((T::one() - p).sqrt())];
        let w = Complex::new((p / d).sqrt(), T::zero());
        for i in 0..dim {
            for j in 0..dim {
                let mut m = ComplexMatrix::zeros(dim);
                m[(i, j)] = w;
                operators.push(m);
            }
        }
        Ok(Self { operators })
    }

    /// Qubit amplitude damping with decay probability `gamma`; fixed point `|0⟩⟨0|`.
    pub fn amplitude_damping(gamma: T) -> Result<Self> {
        if !(gamma >= T::zero() && gamma <= T::one()) {
            return Err(Error::NonPositiveInput {
                value: gamma.as_f64(),
            });
        }
        let re = |x: T| Complex::new(x, T::zero());
        let z = re(T::zero());
        let k0 = ComplexMatrix::from_rows(&[vec![re(T::one()), z], vec![z, re((T::one() - gamma).sqrt())]])?;
        let k1 = ComplexMatrix::from_rows(&[vec![z, re(gamma.sqrt())], vec![z, z]])?;
        Self::new(vec![k0, k1])
    }

    /// Random channel `K_a = G_a S^{-1/2}`, `S = Σ G_a†G_a`, with complex
    /// Gaussian `G_a`.
    pub fn random<R: Rng + ?Sized>(dim: usize, n_ops: usize, rng: &mut R) -> Result<Self> {
        let gs: Vec<ComplexMatrix<T>> = (0..n_ops.max(1)).map(|_| gaussian_matrix(dim, rng)).collect();
        let mut s = ComplexMatrix::zeros(dim);
        for g in &gs {
            s = &s + &(&g.adjoint() * g);
        }
        let inv_sqrt = eig_hermitian(&s.hermitian_part())?.map_eigenvalues(|l| l.sqrt().recip());
        Self::new(gs.iter().map(|g| g * &inv_sqrt).collect())
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    /// `Σ K ρ K†`.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim());
        for k in &self.operators {
            out = &out + &rho.matrix().conjugate_by(k);
        }
        validate_density(out.hermitian_part())
    }
}

/// `Σ K ρ K†`.
pub fn apply_channel<T: Real>(ch: &KrausChannel<T>, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    ch.apply(rho)
}

/// Symmetric relative entropy before and after a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpiMargin<T> {
    pub before: ExtendedReal<T>,
    pub after: ExtendedReal<T>,
}

impl<T: Real> DpiMargin<T> {
    /// `S̃ before - S̃ after` (`+∞` when only `before` is infinite).
    pub fn margin(&self) -> T {
        match (self.before, self.after) {
            (ExtendedReal::Finite(b), ExtendedReal::Finite(a)) => b - a,
            (ExtendedReal::Infinite, ExtendedReal::Finite(_)) => T::infinity(),
            (ExtendedReal::Infinite, ExtendedReal::Infinite) => T::zero(),
            (ExtendedReal::Finite(_), ExtendedReal::Infinite) => T::neg_infinity(),
        }
    }

    /// `after ≤ before + slack`, and hence `f(after) ≥ f(before)`.
    pub fn holds(&self, slack: T) -> bool {
        self.after.le_with_slack(&self.before, slack)
    }
}

/// `(S̃(ρ,σ), S̃(E(ρ),E(σ)))`.
pub fn dpi_margin<T: Real>(
    ch: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
) -> Result<DpiMargin<T>> {
    let before = symmetric_relative_entropy(rho, sigma)?;
    let after = symmetric_relative_entropy(&ch.apply(rho)?, &ch.apply(sigma)?)?;
    Ok(DpiMargin { before, after })
}

/// One iterate of [`fixed_point_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointStep<T> {
    pub step: usize,
    /// `U(θ;ρ(t),ρ*)`, `None` where the means coincide.
    pub u: Option<T>,
    /// `f(S̃(ρ(t),ρ*))`, the tighter time-dependent bound.
    pub bound_now: BoundValue<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointReport<T> {
    /// `f(S̃(ρ(0),ρ*))`, constant in time.
    pub bound: BoundValue<T>,
    pub steps: Vec<FixedPointStep<T>>,
}

impl<T: Real> FixedPointReport<T> {
    /// At every step with a defined uncertainty,
    /// `U ≥ f(S̃(ρ(t),ρ*)) ≥ f(S̃(ρ(0),ρ*))` up to `slack`.
    pub fn holds(&self, slack: T) -> bool {
        self.steps.iter().all(|s| {
            let monotone = self.bound.le_with_slack(&s.bound_now, slack);
            let bounded = match (s.u, s.bound_now) {
                (Some(u), ExtendedReal::Finite(b)) => u >= b - slack,
                (Some(_), ExtendedReal::Infinite) => false,
                (None, _) => true,
            };
            monotone && bounded
        })
    }

    /// Steps where the uncertainty was defined.
    pub fn evaluated_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.u.is_some()).count()
    }
}

/// Iterates `ρ(t+1) = E(ρ(t))` from `rho0` for `steps` steps and compares
/// `U(θ;ρ(t),ρ*)` with the constant bound `f(S̃(ρ(0),ρ*))`.
pub fn fixed_point_bound<T: Real>(
    ch: &KrausChannel<T>,
    rho0: &DensityMatrix<T>,
    rho_star: &DensityMatrix<T>,
    theta: &Observable<T>,
    steps: usize,
) -> Result<FixedPointReport<T>> {
    let image = ch.apply(rho_star)?;
    let residual = image.matrix().max_abs_diff(rho_star.matrix());
    if residual > T::tol(tolerance::FIXED_POINT) {
        return Err(Error::NotFixedPoint {
            residual: residual.as_f64(),
        });
    }
    let bound = bound::f(symmetric_relative_entropy(rho0, rho_star)?)?;
    let mut rho = rho0.clone();
    let mut out = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        let gap = (expectation(&rho, theta)? - expectation(rho_star, theta)?).abs();
        let u = if gap > T::tol(tolerance::MEAN_GAP) {
            Some(uncertainty_u(&rho, rho_star, theta)?)
        } else {
            None
        };
        let bound_now = bound::f(symmetric_relative_entropy(&rho, rho_star)?)?;
        out.push(FixedPointStep { step, u, bound_now });
        if step < steps {
            rho = ch.apply(&rho)?;
        }
    }
    Ok(FixedPointReport { bound, steps: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, substream};

    type Rho = DensityMatrix<f64>;

    fn coherent() -> Rho {
        let c = Complex::from_polar(0.3, 0.9);
        Rho::new(
            ComplexMatrix::from_rows(&[vec![Complex::new(0.6, 0.0), c], vec![c.conj(), Complex::new(0.4, 0.0)]])
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn incomplete_kraus_is_rejected() {
        let k = ComplexMatrix::<f64>::identity(2).scale_real(0.9);
        assert!(matches!(KrausChannel::new(vec![k]), Err(Error::IncompleteKraus { .. })));
    }

    #[test]
    fn identity_channel_keeps_state() {
        let rho = coherent();
        let out = apply_channel(&KrausChannel::identity(2), &rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-16);
    }

    #[test]
    fn dephasing_keeps_diagonal() {
        let sigma = coherent();
        let out = KrausChannel::dephasing(2).apply(&sigma).unwrap();
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::diag(&[0.6, 0.4])) < 1e-16);
    }

    #[test]
    fn full_depolarizing_reaches_maximally_mixed() {
        for d in [2, 3] {
            let ch = KrausChannel::<f64>::depolarizing(d, 1.0).unwrap();
            let mut rng = substream(3, d as u64);
            let rho = random_density(d, &mut rng).unwrap();
            let out = ch.apply(&rho).unwrap();
            assert!(out.matrix().max_abs_diff(Rho::maximally_mixed(d).matrix()) < 1e-15);
        }
    }

    #[test]
    fn apply_rejects_mismatched_dimension() {
        assert!(matches!(
            KrausChannel::identity(3).apply(&coherent()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dpi_identity_and_dephasing() {
        let rho = Rho::diagonal(&[0.8, 0.2]).unwrap();
        let sigma = coherent();
        let m = dpi_margin(&KrausChannel::identity(2), &rho, &sigma).unwrap();
        assert_eq!(m.before, m.after);
        let m = dpi_margin(&KrausChannel::dephasing(2), &rho, &sigma).unwrap();
        assert!(m.margin() > 1e-3);
        assert!(m.holds(1e-10));
    }

    #[test]
    fn random_channel_is_complete() {
        let mut rng = substream(9, 0);
        let ch = KrausChannel::<f64>::random(3, 4, &mut rng).unwrap();
        assert_eq!(ch.operators().len(), 4);
    }

    #[test]
    fn depolarizing_fixed_point_bound() {
        let ch = KrausChannel::depolarizing(2, 0.1).unwrap();
        let star = Rho::maximally_mixed(2);
        let z = Observable::pauli_z();
        // pure start: S̃ is infinite, so the constant bound is 0
        let r = fixed_point_bound(&ch, &Rho::diagonal(&[1.0, 0.0]).unwrap(), &star, &z, 50).unwrap();
        assert_eq!(r.bound, ExtendedReal::Finite(0.0));
        assert!(r.holds(1e-9));
        // closed form: ⟨z⟩_t = 0.8 (0.9)^t, ⟨z²⟩ = 1, so U = 2(2 - m²)/m²
        let r = fixed_point_bound(&ch, &Rho::diagonal(&[0.9, 0.1]).unwrap(), &star, &z, 50).unwrap();
        for s in &r.steps {
            let m = 0.8 * 0.9f64.powi(s.step as i32);
            let u = 2.0 * (2.0 - m * m) / (m * m);
            assert!((s.u.unwrap() - u).abs() < 1e-9 * u, "step {}", s.step);
        }
        assert!(r.holds(1e-9));
        assert!(r.bound.value().unwrap() > 0.0);
    }

    #[test]
    fn start_at_fixed_point_skips_undefined_steps() {
        let ch = KrausChannel::depolarizing(2, 0.3).unwrap();
        let star = Rho::maximally_mixed(2);
        let r = fixed_point_bound(&ch, &star, &star, &Observable::pauli_z(), 5).unwrap();
        assert_eq!(r.evaluated_steps(), 0);
        assert!(r.holds(1e-9));
    }

    #[test]
    fn amplitude_damping_fixed_point() {
        let ch = KrausChannel::amplitude_damping(0.2).unwrap();
        let star = Rho::diagonal(&[1.0, 0.0]).unwrap();
        let rho0 = coherent();
        let r = fixed_point_bound(&ch, &rho0, &star, &Observable::pauli_x(), 50).unwrap();
        assert!(r.holds(1e-9));
        assert!(matches!(
            fixed_point_bound(&ch, &rho0, &Rho::maximally_mixed(2), &Observable::pauli_z(), 3),
            Err(Error::NotFixedPoint { .. })
        ));
    }
}
