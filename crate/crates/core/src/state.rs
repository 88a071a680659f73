//! Validated density matrices and observables.

use num_complex::Complex;

use crate::eigen::{eig_hermitian, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Subsystem};
use crate::scalar::Real;
use crate::tolerance;

/// Hermitian, positive semidefinite, unit-trace matrix together with its
/// spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
    spectrum: SpectralDecomposition<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `m` as a state. See [`validate_density`].
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        validate_density(m)
    }

    /// Real diagonal state.
    pub fn diagonal(probabilities: &[T]) -> Result<Self> {
        validate_density(ComplexMatrix::diag(probabilities))
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let p = T::one() / T::from_usize(dim).expect("dimension fits scalar");
        Self::diagonal(&vec![p; dim]).expect("maximally mixed state is valid")
    }

    /// Pure state `|ψ⟩⟨ψ|` from a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let unit: Vec<_> = psi.iter().map(|z| z / norm).collect();
        validate_density(ComplexMatrix::outer(&unit))
    }

    /// Builds the state `V diag(λ) V†` from a decomposition whose eigenvalues
    /// are already a probability vector, keeping that exact decomposition.
    pub fn from_spectrum(spectrum: SpectralDecomposition<T>) -> Result<Self> {
        check_spectrum(spectrum.eigenvalues())?;
        let matrix = spectrum.reconstruct().hermitian_part();
        Ok(Self { matrix, spectrum })
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition<T> {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[T] {
        self.spectrum.eigenvalues()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `ρ ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        validate_density(self.matrix.kron(&other.matrix))
    }

    /// Reduced state on the `keep` factor of a `dim_s * dim_e` state.
    pub fn reduce(&self, dim_s: usize, dim_e: usize, keep: Subsystem) -> Result<Self> {
        validate_density(self.matrix.partial_trace(dim_s, dim_e, keep)?.hermitian_part())
    }

    /// `U ρ U†`.
    pub fn evolve(&self, unitary: &ComplexMatrix<T>) -> Result<Self> {
        self.matrix.check_same_dim(unitary)?;
        validate_density(self.matrix.conjugate_by(unitary).hermitian_part())
    }

    /// Smallest eigenvalue above which the state has full support.
    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    pub fn has_full_support(&self) -> bool {
        self.min_eigenvalue() > T::tol(tolerance::SUPPORT_CUTOFF)
    }
}

fn check_spectrum<T: Real>(eigenvalues: &[T]) -> Result<()> {
    let min = eigenvalues.iter().copied().fold(T::infinity(), T::min);
    if min < -T::tol(tolerance::POSITIVITY) {
        return Err(Error::NotPositive {
            min_eigenvalue: min.as_f64(),
        });
    }
    let sum: T = eigenvalues.iter().copied().sum();
    let residual = (sum - T::one()).abs();
    if residual > T::tol(tolerance::TRACE) {
        return Err(Error::TraceNotOne {
            residual: residual.as_f64(),
        });
    }
    Ok(())
}

/// Accepts `m` as a density matrix when it is Hermitian within `1e-12`, has
/// smallest eigenvalue at least `-1e-10` and trace within `1e-10` of one.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero and the state is rebuilt
/// with its trace renormalized; otherwise the input entries are kept as given.
pub fn validate_density<T: Real>(m: ComplexMatrix<T>) -> Result<DensityMatrix<T>> {
    let residual = m.hermitian_residual();
    if residual > T::tol(tolerance::HERMITIAN) {
        return Err(Error::NotHermitian {
            residual: residual.as_f64(),
        });
    }
    let trace_residual = (m.trace().re - T::one()).abs();
    if trace_residual > T::tol(tolerance::TRACE) {
        return Err(Error::TraceNotOne {
            residual: trace_residual.as_f64(),
        });
    }
    let spectrum = eig_hermitian(&m)?;
    check_spectrum(spectrum.eigenvalues())?;

    if spectrum.eigenvalues().iter().all(|&l| l >= T::zero()) {
        return Ok(DensityMatrix { matrix: m, spectrum });
    }
    let clamped: Vec<T> = spectrum.eigenvalues().iter().map(|&l| l.max(T::zero())).collect();
    let total: T = clamped.iter().copied().sum();
    let normalized = clamped.into_iter().map(|l| l / total).collect();
    let spectrum = SpectralDecomposition::from_parts(normalized, spectrum.eigenvectors().clone())?;
    let matrix = spectrum.reconstruct().hermitian_part();
    Ok(DensityMatrix { matrix, spectrum })
}

/// Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> Observable<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let residual = m.hermitian_residual();
        if residual > T::tol(tolerance::HERMITIAN) {
            return Err(Error::NotHermitian {
                residual: residual.as_f64(),
            });
        }
        Ok(Self { matrix: m })
    }

    pub fn diagonal(values: &[T]) -> Self {
        Self {
            matrix: ComplexMatrix::diag(values),
        }
    }

    /// Pauli `z = diag(1, -1)`.
    pub fn pauli_z() -> Self {
        Self::diagonal(&[T::one(), -T::one()])
    }

    /// Pauli `x`.
    pub fn pauli_x() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Self {
            matrix: ComplexMatrix::from_rows(&[vec![z, o], vec![o, z]]).expect("2x2"),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `θ²`.
    pub fn squared(&self) -> Self {
        Self {
            matrix: (&self.matrix * &self.matrix).hermitian_part(),
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            matrix: self.matrix.scale_real(c),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.matrix.check_same_dim(&other.matrix)?;
        Ok(Self {
            matrix: &self.matrix.scale_real(a) + &other.matrix.scale_real(b),
        })
    }

    /// `θ ⊗ I` or `I ⊗ θ` on a bipartite space.
    pub fn embed(&self, other_dim: usize, position: Subsystem) -> Self {
        let id = ComplexMatrix::identity(other_dim);
        let matrix = match position {
            Subsystem::First => self.matrix.kron(&id),
            Subsystem::Second => id.kron(&self.matrix),
        };
        Self { matrix }
    }
}

/// `Σ_k ln(λ_k) |v_k⟩⟨v_k|` over eigenvalues above the support cutoff `1e-12`;
/// directions outside the support contribute zero.
pub fn log_on_support<T: Real>(rho: &DensityMatrix<T>) -> ComplexMatrix<T> {
    let cutoff = T::tol(tolerance::SUPPORT_CUTOFF);
    rho.spectrum()
        .map_eigenvalues(|l| if l > cutoff { l.ln() } else { T::zero() })
}

/// `ln ρ` on its support, as an observable.
pub fn log_observable<T: Real>(rho: &DensityMatrix<T>) -> Observable<T> {
    Observable {
        matrix: log_on_support(rho).hermitian_part(),
    }
}

/// `Re tr(ρ θ)`.
pub fn expectation<T: Real>(state: &DensityMatrix<T>, obs: &Observable<T>) -> Result<T> {
    state.matrix().check_same_dim(obs.matrix())?;
    let m = state.matrix();
    let o = obs.matrix();
    let n = m.dim();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            acc = acc + m[(i, k)] * o[(k, i)];
        }
    }
    debug_assert!(
        acc.im.abs() <= T::tol(1e-10) * (T::one() + o.frobenius_norm()),
        "imaginary expectation residual {}",
        acc.im
    );
    Ok(acc.re)
}

/// `⟨θ²⟩ - ⟨θ⟩²`, with roundoff negatives of magnitude `≤ 1e-12` clamped.
pub fn variance<T: Real>(state: &DensityMatrix<T>, obs: &Observable<T>) -> Result<T> {
    let mean = expectation(state, obs)?;
    let second = expectation(state, &obs.squared())?;
    let var = second - mean * mean;
    if var < T::zero() && var >= -T::tol(tolerance::VARIANCE_CLAMP) * (T::one() + second) {
        return Ok(T::zero());
    }
    Ok(var)
}
