//! Uncertainty relation for a complex random variable under two
//! distributions `P` and `Q`:
//!
//! ```text
//! (Var_P θ + Var_Q θ) / ((1/2)|θ̄_P - θ̄_Q|²) ≥ f(D̃(P,Q))
//! ```
//!
//! with `Var_X θ = ⟨|θ|²⟩_X - |θ̄_X|²`. The pieces are exposed separately:
//! the Cauchy–Schwarz step on the mixture `P̃ = (P+Q)/2`, the contrast bound
//! `⟨((P-Q)/(P+Q))²⟩_P̃ ≤ tanh²(g(D̃)/2)` and the variance decomposition
//! identity that glues them together.

use num_complex::Complex;
use num_traits::Zero;

use crate::bound;
use crate::error::{Error, Result};
use crate::extended::{BoundValue, ExtendedReal};
use crate::scalar::Real;
use crate::tolerance;

/// Two distributions on a common finite support and a complex variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEnsemble<T> {
    p: Vec<T>,
    q: Vec<T>,
    theta: Vec<Complex<T>>,
}

impl<T: Real> ClassicalEnsemble<T> {
    pub fn new(p: Vec<T>, q: Vec<T>, theta: Vec<Complex<T>>) -> Result<Self> {
        if p.len() != q.len() || p.len() != theta.len() || p.is_empty() {
            return Err(Error::InvalidEnsemble(format!(
                "lengths differ: |P| = {}, |Q| = {}, |θ| = {}",
                p.len(),
                q.len(),
                theta.len()
            )));
        }
        for (name, dist) in [("P", &p), ("Q", &q)] {
            if dist.iter().any(|&x| !(x >= T::zero()) || !x.is_finite()) {
                return Err(Error::InvalidEnsemble(format!("{name} has a negative or non-finite entry")));
            }
            let sum: T = dist.iter().copied().sum();
            if (sum - T::one()).abs() > T::tol(tolerance::PROBABILITY_SUM) {
                return Err(Error::InvalidEnsemble(format!("{name} sums to {sum}")));
            }
        }
        Ok(Self { p, q, theta })
    }

    /// Real-valued variable.
    pub fn real(p: Vec<T>, q: Vec<T>, theta: &[T]) -> Result<Self> {
        Self::new(p, q, theta.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    /// Two-outcome exchange family `P = (e^{ε/2}, e^{-ε/2}) / (2cosh(ε/2))`,
    /// `Q` reversed, `θ = (+1, -1)`, which saturates the relation.
    pub fn exchange_family(epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero()) {
            return Err(Error::NonPositiveEpsilon {
                value: epsilon.as_f64(),
            });
        }
        let half = epsilon * T::lit(0.5);
        let z = T::lit(2.0) * half.cosh();
        let (a, b) = (half.exp() / z, (-half).exp() / z);
        Self::real(vec![a, b], vec![b, a], &[T::one(), -T::one()])
    }

    pub fn support_size(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[T] {
        &self.p
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn theta(&self) -> &[Complex<T>] {
        &self.theta
    }

    /// `P(s) = 0 ⇔ Q(s) = 0` for every `s`.
    pub fn mutually_absolutely_continuous(&self) -> bool {
        self.p
            .iter()
            .zip(&self.q)
            .all(|(&a, &b)| (a == T::zero()) == (b == T::zero()))
    }

    fn mean(&self, w: &[T]) -> Complex<T> {
        w.iter().zip(&self.theta).fold(Complex::zero(), |acc, (&w, &x)| acc + x * w)
    }

    fn variance(&self, w: &[T]) -> T {
        let m = self.mean(w);
        let second = w.iter().zip(&self.theta).fold(T::zero(), |acc, (&w, x)| acc + w * x.norm_sqr());
        second - m.norm_sqr()
    }

    /// `Var_P θ + Var_Q θ` over `(1/2)|θ̄_P - θ̄_Q|²`.
    pub fn uncertainty(&self) -> Result<T> {
        let gap = (self.mean(&self.p) - self.mean(&self.q)).norm();
        if !(gap > T::tol(tolerance::MEAN_GAP)) {
            return Err(Error::EqualMeans { gap: gap.as_f64() });
        }
        Ok((self.variance(&self.p) + self.variance(&self.q)) / (T::lit(0.5) * gap * gap))
    }
}

/// `D(P|Q) = Σ P ln(P/Q)`; `+∞` when some `P(s) > 0` has `Q(s) = 0`.
pub fn kl_divergence<T: Real>(p: &[T], q: &[T]) -> ExtendedReal<T> {
    let mut total = T::zero();
    for (&a, &b) in p.iter().zip(q) {
        if a == T::zero() {
            continue;
        }
        if b == T::zero() {
            return ExtendedReal::Infinite;
        }
        total = total + a * (a / b).ln();
    }
    ExtendedReal::finite(total)
}

/// `D̃(P,Q) = (D(P|Q) + D(Q|P)) / 2`.
pub fn symmetric_kl<T: Real>(p: &[T], q: &[T]) -> ExtendedReal<T> {
    ExtendedReal::mean(kl_divergence(p, q), kl_divergence(q, p))
}

/// Statistics of the mixture `P̃ = (P+Q)/2` on `S' = {s : P(s)+Q(s) > 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureStats<T> {
    /// Indices of `S'`.
    pub support: Vec<usize>,
    /// `P̃` restricted to `S'`.
    pub p_tilde: Vec<T>,
    pub mean_p: Complex<T>,
    pub mean_q: Complex<T>,
    pub mean_mixture: Complex<T>,
    /// `⟨|θ - θ̄_P̃|²⟩_P̃`.
    pub mixture_variance: T,
    /// `⟨((P-Q)/(P+Q))²⟩_P̃`, in `[0, 1]`.
    pub contrast: T,
}

pub fn mixture_stats<T: Real>(e: &ClassicalEnsemble<T>) -> MixtureStats<T> {
    let half = T::lit(0.5);
    let support: Vec<usize> = (0..e.support_size())
        .filter(|&s| e.p[s] + e.q[s] > T::zero())
        .collect();
    let p_tilde: Vec<T> = support.iter().map(|&s| (e.p[s] + e.q[s]) * half).collect();
    let mean_mixture = support
        .iter()
        .zip(&p_tilde)
        .fold(Complex::zero(), |acc, (&s, &w)| acc + e.theta[s] * w);
    let mixture_variance = support
        .iter()
        .zip(&p_tilde)
        .fold(T::zero(), |acc, (&s, &w)| acc + w * (e.theta[s] - mean_mixture).norm_sqr());
    let contrast = support.iter().zip(&p_tilde).fold(T::zero(), |acc, (&s, &w)| {
        let r = (e.p[s] - e.q[s]) / (e.p[s] + e.q[s]);
        acc + w * r * r
    });
    MixtureStats {
        support,
        p_tilde,
        mean_p: e.mean(&e.p),
        mean_q: e.mean(&e.q),
        mean_mixture,
        mixture_variance,
        contrast,
    }
}

/// The Cauchy–Schwarz step, evaluated at several shifts `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport<T> {
    /// `|θ̄_P - θ̄_Q|² / 4`.
    pub lhs: T,
    /// `⟨|θ - θ̄_P̃|²⟩_P̃ · ⟨((P-Q)/(P+Q))²⟩_P̃`.
    pub rhs: T,
    /// Shifts `c` used for the rewriting `|Σ (θ - c)(P-Q)/2|²`.
    pub shifts: Vec<Complex<T>>,
    /// `|Σ_{S'} (θ - c)(P-Q)/2|²` for each shift.
    pub shifted_forms: Vec<T>,
    /// `⟨|θ - c|²⟩_P̃ · contrast` for each shift.
    pub shifted_bounds: Vec<T>,
    /// Largest deviation of `shifted_forms` from `lhs`.
    pub spread: T,
}

impl<T: Real> ChainReport<T> {
    pub fn holds(&self, slack: T) -> bool {
        self.lhs <= self.rhs + slack
            && self
                .shifted_forms
                .iter()
                .zip(&self.shifted_bounds)
                .all(|(&a, &b)| a <= b + slack)
    }
}

/// Evaluates `|θ̄_P - θ̄_Q|²/4 ≤ ⟨|θ - θ̄_P̃|²⟩_P̃ ⟨((P-Q)/(P+Q))²⟩_P̃`, and
/// the shift invariance of the left side for `c ∈ {0, θ̄_P̃, 1+2i}`.
pub fn cauchy_schwarz_chain<T: Real>(e: &ClassicalEnsemble<T>) -> ChainReport<T> {
    let stats = mixture_stats(e);
    let half = T::lit(0.5);
    let lhs = (stats.mean_p - stats.mean_q).norm_sqr() * T::lit(0.25);
    let shifts = vec![
        Complex::zero(),
        stats.mean_mixture,
        Complex::new(T::one(), T::lit(2.0)),
    ];
    let mut shifted_forms: Vec<T> = Vec::with_capacity(shifts.len());
    let mut shifted_bounds = Vec::with_capacity(shifts.len());
    for &c in &shifts {
        let sum = stats.support.iter().fold(Complex::zero(), |acc, &s| {
            acc + (e.theta[s] - c) * ((e.p[s] - e.q[s]) * half)
        });
        shifted_forms.push(sum.norm_sqr());
        let spread_c = stats
            .support
            .iter()
            .zip(&stats.p_tilde)
            .fold(T::zero(), |acc, (&s, &w)| acc + w * (e.theta[s] - c).norm_sqr());
        shifted_bounds.push(spread_c * stats.contrast);
    }
    let spread = shifted_forms.iter().fold(T::zero(), |m, &v| m.max((v - lhs).abs()));
    ChainReport {
        lhs,
        rhs: stats.mixture_variance * stats.contrast,
        shifts,
        shifted_forms,
        shifted_bounds,
        spread,
    }
}

/// `(contrast, tanh²(g(D̃(P,Q))/2))`.
///
/// Without mutual absolute continuity the second entry is `1`, and the
/// inequality holds trivially since the contrast never exceeds one.
pub fn tanh_bound<T: Real>(e: &ClassicalEnsemble<T>) -> Result<(T, T)> {
    let contrast = mixture_stats(e).contrast;
    match symmetric_kl(&e.p, &e.q) {
        ExtendedReal::Infinite => Ok((contrast, T::one())),
        ExtendedReal::Finite(d) => {
            let t = (bound::g(d)? * T::lit(0.5)).tanh();
            Ok((contrast, t * t))
        }
    }
}

/// Both sides of
/// `4⟨|θ-θ̄_P̃|²⟩_P̃ = 2 Var_P θ + 2 Var_Q θ + |θ̄_P - θ̄_Q|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

pub fn variance_decomposition<T: Real>(e: &ClassicalEnsemble<T>) -> IdentityReport<T> {
    let stats = mixture_stats(e);
    let two = T::lit(2.0);
    let lhs = T::lit(4.0) * stats.mixture_variance;
    let rhs = two * e.variance(&e.p) + two * e.variance(&e.q) + (stats.mean_p - stats.mean_q).norm_sqr();
    IdentityReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    }
}

/// `(uncertainty, f(D̃(P,Q)))`; the bound is `0` when `D̃ = ∞`.
pub fn classical_tur<T: Real>(e: &ClassicalEnsemble<T>) -> Result<(T, BoundValue<T>)> {
    let u = e.uncertainty()?;
    let b = bound::f(symmetric_kl(&e.p, &e.q))?;
    Ok((u, b))
}
