//! Cyclic Jacobi eigensolver for small dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies a
//! real Givens rotation that annihilates it. Sweeps run over pairs
//! `(p, q)`, `p < q`, in lexicographic order until the off-diagonal
//! Frobenius norm is at most `1e-14 * max(1, ‖A‖_F)`.
//!
//! Output is deterministic: eigenvalues ascending (stable with respect to the
//! rotation order for ties), and every eigenvector is phase-fixed so that its
//! first non-negligible component is real and positive.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::tolerance;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    /// Assembles a decomposition from parts, sorting the pairs ascending.
    ///
    /// The caller guarantees that the columns of `eigenvectors` are
    /// orthonormal.
    pub fn from_parts(eigenvalues: Vec<T>, eigenvectors: ComplexMatrix<T>) -> Result<Self> {
        if eigenvalues.len() != eigenvectors.dim() {
            return Err(Error::DimensionMismatch {
                expected: eigenvectors.dim(),
                found: eigenvalues.len(),
            });
        }
        Ok(sorted(eigenvalues, eigenvectors))
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    /// Eigenvector `k` as a column.
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    /// `V diag(φ(λ)) V†`.
    pub fn map_eigenvalues(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mapped: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * mapped[k]
            })
        })
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_eigenvalues(|l| l)
    }

    /// Largest entrywise modulus of `V†V - I`.
    pub fn orthonormality_residual(&self) -> T {
        self.eigenvectors.unitarity_residual()
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let residual = m.hermitian_residual();
    if residual > T::tol(tolerance::HERMITIAN) {
        return Err(Error::NotHermitian {
            residual: residual.as_f64(),
        });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = T::tol(tolerance::JACOBI_OFF_DIAGONAL) * a.frobenius_norm().max(T::one());

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off.as_f64(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let eigenvalues = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(sorted(eigenvalues, v))
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating `a[(p, q)]`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // negligible pivot relative to both diagonal entries
    let tiny = T::epsilon() * T::lit(1e-2);
    if r <= tiny * app.abs() && r <= tiny * aqq.abs() {
        a[(p, q)] = Complex::zero();
        a[(q, p)] = Complex::zero();
        return;
    }

    let phase = apq / r; // e^{iφ}
    let theta = (aqq - app) / (T::lit(2.0) * r);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // G restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = phase.conj() * (-s);
    let g_qq = phase.conj() * c;

    let n = a.dim();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(app - t * r, T::zero());
    a[(q, q)] = Complex::new(aqq + t * r, T::zero());
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn sorted<T: Real>(eigenvalues: Vec<T>, vectors: ComplexMatrix<T>) -> SpectralDecomposition<T> {
    let n = eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).expect("finite eigenvalues"));

    let phase_floor = T::tol(1e-10);
    let mut out = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let pivot = (0..n)
            .map(|i| vectors[(i, src)])
            .find(|z| z.norm() > phase_floor)
            .unwrap_or(Complex::one());
        let fix = pivot.conj() / pivot.norm();
        for i in 0..n {
            out[(i, col)] = vectors[(i, src)] * fix;
        }
        // the pivot is exactly real after the fix
        if let Some(i) = (0..n).find(|&i| vectors[(i, src)].norm() > phase_floor) {
            out[(i, col)] = Complex::new(out[(i, col)].re, T::zero());
        }
    }
    SpectralDecomposition {
        eigenvalues: order.iter().map(|&i| eigenvalues[i]).collect(),
        eigenvectors: out,
    }
}
