//! Numerical thresholds, expressed for double precision.
//!
//! Routines convert these with [`crate::Real::tol`], which floors them at a
//! few machine epsilons for lower-precision scalars.

/// Entrywise `|M - M†|` allowed for Hermitian input.
pub const HERMITIAN: f64 = 1e-12;
/// Smallest eigenvalue accepted for a positive semidefinite state.
pub const POSITIVITY: f64 = 1e-10;
/// `|tr(ρ) - 1|` allowed for a state.
pub const TRACE: f64 = 1e-10;
/// Eigenvalues at or below this are outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Overlap mass leaking outside the support before a divergence is infinite.
pub const SUPPORT_LEAK: f64 = 1e-9;
/// `|⟨p_i|q_j⟩|` at or below this counts as orthogonal.
pub const OVERLAP_CUTOFF: f64 = 1e-10;
/// Minimal `|⟨θ⟩_ρ - ⟨θ⟩_σ|` for the uncertainty to be defined.
pub const MEAN_GAP: f64 = 1e-9;
/// Jacobi sweeps stop once the off-diagonal Frobenius norm, relative to
/// `max(1, ‖M‖_F)`, is at or below this.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;
/// Negative variances of this magnitude are roundoff and clamp to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;
/// Negative divergences of this magnitude are roundoff and clamp to zero.
pub const DIVERGENCE_CLAMP: f64 = 1e-10;
/// Relative bracket width at which the bisection for `g` hands over to the
/// secant polish.
pub const ROOT_WIDTH: f64 = 1e-14;
/// Arguments of `f` at or below this map to `+∞`.
pub const BOUND_ZERO: f64 = 1e-300;
/// Slack allowed when checking a proved inequality numerically.
pub const INEQUALITY: f64 = 1e-9;
/// `|U†U - I|` allowed for a unitary.
pub const UNITARY: f64 = 1e-10;
/// `|Σ K†K - I|` allowed for a Kraus set.
pub const KRAUS_COMPLETENESS: f64 = 1e-10;
/// `|E(ρ*) - ρ*|` allowed for a fixed point.
pub const FIXED_POINT: f64 = 1e-8;
/// Probability vectors must sum to one within this.
pub const PROBABILITY_SUM: f64 = 1e-12;
