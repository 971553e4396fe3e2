//! Hermitian eigendecomposition and spectral functions.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ONE};
use crate::states::{DensityMatrix, ToleranceSpec};

fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come out sorted descending; each eigenvector's first component
/// of magnitude above 1e-12 is rotated to the positive real axis, making the
/// output deterministic for non-degenerate spectra.
pub fn hermitian_spectral(
    m: &ComplexMatrix,
    tol: &ToleranceSpec,
) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::Dimension("spectral input must be square".into()));
    }
    let herm = m.hermiticity_residual();
    let scale = m.frobenius_norm().max(1.0);
    if herm > 1e-8 * scale {
        return Err(Error::NotHermitian {
            residual: herm,
            tol: tol.abs_tol,
        });
    }
    let n = m.rows();
    // symmetrize to wash out the allowed sub-tolerance asymmetry
    let sym = (m + &m.adjoint()).scale(C64::new(0.5, 0.0));
    let eig = SymmetricEigen::new(to_dmatrix(&sym));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        values.push(eig.eigenvalues[k]);
        let v = eig.eigenvectors.column(k);
        let mut phase = ONE;
        for i in 0..n {
            if v[i].norm() > 1e-12 {
                phase = v[i].conj() / v[i].norm();
                break;
            }
        }
        for i in 0..n {
            vectors[(i, col)] = v[i] * phase;
        }
    }
    Ok((values, vectors))
}

/// Apply a scalar function to the spectrum: V f(Λ) V†.
/// `f` receives each eigenvalue and may return any complex number.
pub fn spectral_map(
    m: &ComplexMatrix,
    tol: &ToleranceSpec,
    f: impl Fn(f64) -> C64,
) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_spectral(m, tol)?;
    let n = m.rows();
    let mut diag = ComplexMatrix::zeros(n, n);
    for (i, &lam) in values.iter().enumerate() {
        diag[(i, i)] = f(lam);
    }
    Ok(&(&vectors * &diag) * &vectors.adjoint())
}

/// Projector onto the eigenspaces with eigenvalue above gap·λ_max.
pub fn support_projector(m: &ComplexMatrix, tol: &ToleranceSpec) -> Result<ComplexMatrix> {
    let (values, _) = hermitian_spectral(m, tol)?;
    let cutoff = tol.degeneracy_gap * values.first().copied().unwrap_or(0.0).max(0.0);
    spectral_map(m, tol, |lam| if lam > cutoff { ONE } else { C64::new(0.0, 0.0) })
}

/// ω^{it} on the support of ω; eigenvalues below gap·λ_max contribute 0.
pub fn matrix_power_it(omega: &DensityMatrix, t: f64, tol: &ToleranceSpec) -> Result<ComplexMatrix> {
    let (values, _) = hermitian_spectral(omega.matrix(), tol)?;
    let cutoff = tol.degeneracy_gap * values.first().copied().unwrap_or(0.0).max(0.0);
    spectral_map(omega.matrix(), tol, |lam| {
        if lam > cutoff {
            // λ^{it} = e^{i t ln λ}
            let theta = t * lam.ln();
            C64::new(theta.cos(), theta.sin())
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// log(ω) on the support; kernel eigenvalues contribute 0 (the caller is
/// responsible for support bookkeeping).
pub fn support_log(m: &ComplexMatrix, tol: &ToleranceSpec) -> Result<ComplexMatrix> {
    let (values, _) = hermitian_spectral(m, tol)?;
    let cutoff = tol.degeneracy_gap * values.first().copied().unwrap_or(0.0).max(0.0);
    spectral_map(m, tol, |lam| {
        if lam > cutoff {
            C64::new(lam.ln(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}
