use thiserror::Error;

/// Failures raised by state validation and by the bound machinery.
///
/// Residuals are reported in `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows for {len} entries")]
    NotSquare { rows: usize, len: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: max |M - M†| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is not one: |tr - 1| = {residual:e}")]
    TraceNotOne { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("negative input {value}")]
    NegativeInput { value: f64 },

    #[error("non-positive input {value}")]
    NonPositiveInput { value: f64 },

    #[error("non-positive epsilon {value}")]
    NonPositiveEpsilon { value: f64 },

    #[error("means coincide: |⟨θ⟩_ρ - ⟨θ⟩_σ| = {gap:e}")]
    EqualMeans { gap: f64 },

    #[error("Kraus operators incomplete: max |Σ K†K - I| = {residual:e}")]
    IncompleteKraus { residual: f64 },

    #[error("not a unitary: max |U†U - I| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("state is not a fixed point: max |E(ρ*) - ρ*| = {residual:e}")]
    NotFixedPoint { residual: f64 },

    #[error("entropy flux vanishes: |Φ| = {flux:e}")]
    ZeroFlux { flux: f64 },

    #[error("support condition violated: {0}")]
    SupportFailure(String),

    #[error("invalid probability ensemble: {0}")]
    InvalidEnsemble(String),
}

pub type Result<T> = std::result::Result<T, Error>;
