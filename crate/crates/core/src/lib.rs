//! Numerics for the relative-entropy uncertainty bound
//! `U(θ;ρ,σ) ≥ f(S̃(ρ,σ))` on finite-dimensional density matrices.
//!
//! Everything is generic over a [`Real`] scalar (`f32` or `f64`); the
//! `*F64` / `*F32` aliases at the crate root fix the precision.
//!
//! ```
//! use qtur_core::{bound, full_report, DensityMatrixF64, ObservableF64};
//!
//! let rho = DensityMatrixF64::diagonal(&[0.8, 0.2]).unwrap();
//! let sigma = DensityMatrixF64::diagonal(&[0.3, 0.7]).unwrap();
//! let report = full_report(&rho, &sigma, &ObservableF64::pauli_z()).unwrap();
//! assert!(report.chain_holds());
//! assert!(bound::h(2.0).unwrap() > 1.5);
//! ```

pub mod bound;
pub mod channel;
pub mod classical;
pub mod divergence;
pub mod eigen;
pub mod error;
pub mod extended;
pub mod matrix;
pub mod montecarlo;
pub mod random;
pub mod scalar;
pub mod state;
pub mod surrogate;
pub mod thermo;
pub mod tolerance;

pub use channel::{apply_channel, dpi_margin, fixed_point_bound, DpiMargin, FixedPointReport, KrausChannel};
pub use classical::{
    cauchy_schwarz_chain, classical_tur, kl_divergence, mixture_stats, symmetric_kl, tanh_bound,
    variance_decomposition, ClassicalEnsemble,
};
pub use divergence::{
    classical_symmetric, coherence, dephase, relative_entropy, symmetric_relative_entropy, von_neumann_entropy,
};
pub use eigen::{eig_hermitian, SpectralDecomposition};
pub use error::{Error, Result};
pub use extended::{BoundValue, ExtendedReal};
pub use matrix::{partial_trace, tensor, ComplexMatrix, Subsystem};
pub use montecarlo::{run_experiment, saturation_family, Experiment, RunRecord, SampleParams};
pub use scalar::Real;
pub use state::{expectation, log_observable, log_on_support, variance, DensityMatrix, Observable};
pub use surrogate::{
    build_surrogate, classical_uncertainty, full_report, surrogate_kl, uncertainty_u, SurrogateDistribution,
    UncertaintyReport,
};
pub use thermo::{
    entropy_production, flux_capacity_relation, qtur_check, trajectory_dual, EntropyProduction, FluxReport,
    ThermoProcess, TrajectoryEnsemble,
};

/// Version of this crate, recorded in experiment metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type ComplexMatrixF64 = ComplexMatrix<f64>;
pub type DensityMatrixF64 = DensityMatrix<f64>;
pub type ObservableF64 = Observable<f64>;
pub type ExtendedRealF64 = ExtendedReal<f64>;
pub type KrausChannelF64 = KrausChannel<f64>;
pub type ThermoProcessF64 = ThermoProcess<f64>;

pub type ComplexMatrixF32 = ComplexMatrix<f32>;
pub type DensityMatrixF32 = DensityMatrix<f32>;
pub type ObservableF32 = Observable<f32>;
pub type ExtendedRealF32 = ExtendedReal<f32>;
pub type KrausChannelF32 = KrausChannel<f32>;
pub type ThermoProcessF32 = ThermoProcess<f32>;
