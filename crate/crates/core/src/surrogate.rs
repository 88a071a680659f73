//! Classical surrogate `(P, Q, Θ)` of a pair of states and an observable.
//!
//! With `ρ = Σ p_i |p_i⟩⟨p_i|` and `σ = Σ q_j |q_j⟩⟨q_j|`:
//!
//! ```text
//! P_ij = p_i |⟨q_j|p_i⟩|²
//! Q_ij = q_j |⟨q_j|p_i⟩|²
//! Θ_ij = ⟨p_i|θ|q_j⟩ / ⟨p_i|q_j⟩   (0 when |⟨p_i|q_j⟩| ≤ 1e-10)
//! ```
//!
//! The means of `Θ` under `P` and `Q` reproduce `tr(ρθ)` and `tr(σθ)`, its
//! second moments are dominated by `tr(ρθ²)` and `tr(σθ²)`, and the KL
//! divergences of `P` and `Q` equal the quantum relative entropies. This makes
//! each link of the chain `U ≥ U_cl ≥ f(D̃(P,Q)) = f(S̃(ρ,σ))` checkable.
//!
//! Inside degenerate eigenspaces `P`, `Q` and `Θ` depend on the eigenbasis the
//! solver returns, so `u_classical` is convention-dependent; `U`, `S̃` and the
//! bound are not.

use num_complex::Complex;
use num_traits::Zero;

use crate::bound;
use crate::divergence::symmetric_relative_entropy;
use crate::error::{Error, Result};
use crate::extended::{BoundValue, ExtendedReal};
use crate::scalar::Real;
use crate::state::{expectation, DensityMatrix, Observable};
use crate::tolerance;

/// Joint classical description on index pairs `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateDistribution<T> {
    dim: usize,
    p: Vec<T>,
    q: Vec<T>,
    theta: Vec<Complex<T>>,
}

impl<T: Real> SurrogateDistribution<T> {
    /// Number of values of `i` (and of `j`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self, i: usize, j: usize) -> T {
        self.p[i * self.dim + j]
    }

    pub fn q(&self, i: usize, j: usize) -> T {
        self.q[i * self.dim + j]
    }

    pub fn theta(&self, i: usize, j: usize) -> Complex<T> {
        self.theta[i * self.dim + j]
    }

    /// `P` flattened row-major over `(i, j)`.
    pub fn p_flat(&self) -> &[T] {
        &self.p
    }

    pub fn q_flat(&self) -> &[T] {
        &self.q
    }

    pub fn theta_flat(&self) -> &[Complex<T>] {
        &self.theta
    }

    /// `⟨Θ⟩_P`.
    pub fn mean_p(&self) -> Complex<T> {
        weighted_mean(&self.p, &self.theta)
    }

    /// `⟨Θ⟩_Q`.
    pub fn mean_q(&self) -> Complex<T> {
        weighted_mean(&self.q, &self.theta)
    }

    /// `⟨|Θ|²⟩_P`.
    pub fn second_moment_p(&self) -> T {
        weighted_second_moment(&self.p, &self.theta)
    }

    /// `⟨|Θ|²⟩_Q`.
    pub fn second_moment_q(&self) -> T {
        weighted_second_moment(&self.q, &self.theta)
    }
}

fn weighted_mean<T: Real>(w: &[T], x: &[Complex<T>]) -> Complex<T> {
    w.iter().zip(x).fold(Complex::zero(), |acc, (&w, &x)| acc + x * w)
}

fn weighted_second_moment<T: Real>(w: &[T], x: &[Complex<T>]) -> T {
    w.iter().zip(x).fold(T::zero(), |acc, (&w, x)| acc + w * x.norm_sqr())
}

fn check_dims<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>, theta: &Observable<T>) -> Result<()> {
    for found in [sigma.dim(), theta.dim()] {
        if found != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found,
            });
        }
    }
    Ok(())
}

/// Builds `(P, Q, Θ)` from the eigendecompositions of `ρ` and `σ`.
///
/// Eigenvalues at or below the support cutoff enter as exact zeros, so that
/// `P_ij = 0` exactly outside the support of `ρ` (likewise for `Q`).
pub fn build_surrogate<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    theta: &Observable<T>,
) -> Result<SurrogateDistribution<T>> {
    check_dims(rho, sigma, theta)?;
    let n = rho.dim();
    let cutoff = T::tol(tolerance::SUPPORT_CUTOFF);
    let overlap_cutoff = T::tol(tolerance::OVERLAP_CUTOFF);
    let snap = |l: T| if l > cutoff { l } else { T::zero() };

    let rs = rho.spectrum();
    let ss = sigma.spectrum();
    let p_vecs: Vec<_> = (0..n).map(|i| rs.vector(i)).collect();
    let q_vecs: Vec<_> = (0..n).map(|j| ss.vector(j)).collect();
    let theta_q: Vec<_> = q_vecs.iter().map(|v| theta.matrix().mul_vec(v)).collect();

    let mut p = Vec::with_capacity(n * n);
    let mut q = Vec::with_capacity(n * n);
    let mut th = Vec::with_capacity(n * n);
    for (i, pv) in p_vecs.iter().enumerate() {
        let pi = snap(rs.eigenvalues()[i]);
        for (j, qv) in q_vecs.iter().enumerate() {
            let qj = snap(ss.eigenvalues()[j]);
            let inner = inner(pv, qv); // ⟨p_i|q_j⟩
            let w = inner.norm_sqr();
            p.push(pi * w);
            q.push(qj * w);
            if inner.norm() > overlap_cutoff {
                th.push(inner_conj_first(pv, &theta_q[j]) / inner);
            } else {
                th.push(Complex::zero());
            }
        }
    }
    Ok(SurrogateDistribution { dim: n, p, q, theta: th })
}

fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    inner_conj_first(u, v)
}

/// `⟨u|v⟩ = Σ conj(u_k) v_k`.
fn inner_conj_first<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter().zip(v).fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b)
}

fn mean_gap_error<T: Real>(gap: T) -> Result<()> {
    if gap > T::tol(tolerance::MEAN_GAP) {
        Ok(())
    } else {
        Err(Error::EqualMeans { gap: gap.as_f64() })
    }
}

fn clamp_variance<T: Real>(var: T, scale: T) -> T {
    if var < T::zero() && var >= -T::tol(tolerance::VARIANCE_CLAMP) * (T::one() + scale) {
        T::zero()
    } else {
        var
    }
}

/// `U(θ;ρ,σ) = (Var_ρ θ + Var_σ θ) / ((1/2)(⟨θ⟩_ρ - ⟨θ⟩_σ)²)`, from direct traces.
pub fn uncertainty_u<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>, theta: &Observable<T>) -> Result<T> {
    check_dims(rho, sigma, theta)?;
    let sq = theta.squared();
    let (m_r, m_s) = (expectation(rho, theta)?, expectation(sigma, theta)?);
    let (s_r, s_s) = (expectation(rho, &sq)?, expectation(sigma, &sq)?);
    let gap = m_r - m_s;
    mean_gap_error(gap.abs())?;
    let var_r = clamp_variance(s_r - m_r * m_r, s_r);
    let var_s = clamp_variance(s_s - m_s * m_s, s_s);
    Ok((var_r + var_s) / (T::lit(0.5) * gap * gap))
}

/// Uncertainty of the complex variable `Θ` under `P` and `Q`.
pub fn classical_uncertainty<T: Real>(s: &SurrogateDistribution<T>) -> Result<T> {
    let (mp, mq) = (s.mean_p(), s.mean_q());
    let gap = (mp - mq).norm();
    mean_gap_error(gap)?;
    let (sp, sq) = (s.second_moment_p(), s.second_moment_q());
    let var_p = clamp_variance(sp - mp.norm_sqr(), sp);
    let var_q = clamp_variance(sq - mq.norm_sqr(), sq);
    Ok((var_p + var_q) / (T::lit(0.5) * gap * gap))
}

/// KL divergence `Σ a ln(a/b)` over the index pairs.
///
/// The row masses `m_i = Σ_j a_ij` act as the marginal of `a`. A row is
/// absolutely continuous when at most `1e-9` of its mass sits on cells with
/// `b = 0`; otherwise the divergence is infinite.
fn kl_rows<T: Real>(dim: usize, a: impl Fn(usize, usize) -> T, b: impl Fn(usize, usize) -> T) -> ExtendedReal<T> {
    let leak_tol = T::tol(tolerance::SUPPORT_LEAK);
    let mut total = T::zero();
    for i in 0..dim {
        let mass: T = (0..dim).map(|j| a(i, j)).sum();
        if mass == T::zero() {
            continue;
        }
        let mut leaked = T::zero();
        for j in 0..dim {
            let (x, y) = (a(i, j), b(i, j));
            if x == T::zero() {
                continue;
            }
            if y == T::zero() {
                leaked = leaked + x;
            } else {
                total = total + x * (x / y).ln();
            }
        }
        if leaked > leak_tol * mass {
            return ExtendedReal::Infinite;
        }
    }
    ExtendedReal::finite(total)
}

/// `(D(P|Q), D(Q|P))` with `0 ln(0/·) = 0`.
pub fn surrogate_kl<T: Real>(s: &SurrogateDistribution<T>) -> (ExtendedReal<T>, ExtendedReal<T>) {
    let n = s.dim;
    let pq = kl_rows(n, |i, j| s.p(i, j), |i, j| s.q(i, j));
    // Q's marginal runs over j, so iterate columns as rows
    let qp = kl_rows(n, |j, i| s.q(i, j), |j, i| s.p(i, j));
    (pq, qp)
}

/// Every quantity of the chain `U ≥ U_cl ≥ f(S̃)` for one triple.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport<T> {
    /// `U(θ;ρ,σ)` from direct traces.
    pub u_quantum: T,
    /// Surrogate uncertainty; `None` when the surrogate means coincide.
    pub u_classical: Option<T>,
    pub s_tilde: ExtendedReal<T>,
    pub kl_pq: ExtendedReal<T>,
    pub kl_qp: ExtendedReal<T>,
    /// `f(S̃(ρ,σ))`.
    pub bound: BoundValue<T>,
}

impl<T: Real> UncertaintyReport<T> {
    /// `U - f(S̃)`, or `-∞` when the bound is infinite.
    pub fn gap(&self) -> T {
        match self.bound {
            ExtendedReal::Finite(b) => self.u_quantum - b,
            ExtendedReal::Infinite => T::neg_infinity(),
        }
    }

    /// `U ≥ U_cl - slack`.
    pub fn quantum_dominates_classical(&self, slack: T) -> bool {
        self.u_classical.is_none_or(|c| self.u_quantum >= c - slack)
    }

    /// `U_cl ≥ f(S̃) - slack`.
    pub fn classical_dominates_bound(&self, slack: T) -> bool {
        match (self.u_classical, self.bound) {
            (None, _) => true,
            (Some(c), ExtendedReal::Finite(b)) => c >= b - slack,
            (Some(_), ExtendedReal::Infinite) => false,
        }
    }

    /// `U ≥ f(S̃) - slack`.
    pub fn bound_holds(&self, slack: T) -> bool {
        self.gap() >= -slack
    }

    /// Every link with a slack of `1e-9` relative to `max(1, |value|)`.
    pub fn chain_holds(&self) -> bool {
        let slack = T::tol(tolerance::INEQUALITY) * T::one().max(self.u_quantum.abs());
        self.quantum_dominates_classical(slack)
            && self.classical_dominates_bound(slack)
            && self.bound_holds(slack)
    }
}

/// Evaluates the whole chain for `(ρ, σ, θ)`.
pub fn full_report<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    theta: &Observable<T>,
) -> Result<UncertaintyReport<T>> {
    let u_quantum = uncertainty_u(rho, sigma, theta)?;
    let surrogate = build_surrogate(rho, sigma, theta)?;
    let u_classical = match classical_uncertainty(&surrogate) {
        Ok(u) => Some(u),
        Err(Error::EqualMeans { .. }) => None,
        Err(e) => return Err(e),
    };
    let (kl_pq, kl_qp) = surrogate_kl(&surrogate);
    let s_tilde = symmetric_relative_entropy(rho, sigma)?;
    let bound = bound::f(s_tilde)?;
    Ok(UncertaintyReport {
        u_quantum,
        u_classical,
        s_tilde,
        kl_pq,
        kl_qp,
        bound,
    })
}
