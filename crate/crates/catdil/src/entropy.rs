//! Entropic quantities, all in nats.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::{hermitian_spectral, support_log, support_projector};
use crate::states::{DensityMatrix, ToleranceSpec};
use crate::tensor::{partial_trace, FactoredDims};

/// H(ρ) = −Σ λ_i ln λ_i over eigenvalues above the degeneracy gap.
pub fn von_neumann_entropy(rho: &DensityMatrix, tol: &ToleranceSpec) -> Result<f64> {
    let (values, _) = hermitian_spectral(rho.matrix(), tol)?;
    let cutoff = tol.degeneracy_gap * values.first().copied().unwrap_or(0.0).max(0.0);
    Ok(values
        .iter()
        .filter(|&&lam| lam > cutoff)
        .map(|&lam| -lam * lam.ln())
        .sum())
}

/// I(A : B) = H(A) + H(B) − H(AB) for a bipartite state.
pub fn mutual_information(
    rho_ab: &DensityMatrix,
    dims: &FactoredDims,
    tol: &ToleranceSpec,
) -> Result<f64> {
    if dims.len() != 2 {
        return Err(Error::Dimension("mutual information needs two parties".into()));
    }
    if dims.total() != rho_ab.dim() {
        return Err(Error::Dimension("dims inconsistent with state".into()));
    }
    let rho_a = DensityMatrix::new_unchecked(partial_trace(rho_ab.matrix(), dims, &[0])?);
    let rho_b = DensityMatrix::new_unchecked(partial_trace(rho_ab.matrix(), dims, &[1])?);
    Ok(von_neumann_entropy(&rho_a, tol)? + von_neumann_entropy(&rho_b, tol)?
        - von_neumann_entropy(rho_ab, tol)?)
}

/// Relative entropy D(ρ‖σ); `Infinite` when supp(ρ) ⊄ supp(σ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RelEntropy {
    Finite(f64),
    Infinite,
}

impl RelEntropy {
    pub fn is_finite(&self) -> bool {
        matches!(self, RelEntropy::Finite(_))
    }

    pub fn value(&self) -> f64 {
        match self {
            RelEntropy::Finite(v) => *v,
            RelEntropy::Infinite => f64::INFINITY,
        }
    }
}

/// D(ρ‖σ) = Tr(ρ log ρ − ρ log σ) on supports.
pub fn relative_entropy(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tol: &ToleranceSpec,
) -> Result<RelEntropy> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension("relative entropy needs equal dims".into()));
    }
    // support check: weight of ρ outside supp(σ)
    let proj = support_projector(sigma.matrix(), tol)?;
    let complement = &ComplexMatrix::identity(sigma.dim()) - &proj;
    let leak = (&complement * rho.matrix()).trace().re;
    if leak > tol.abs_tol.max(1e-12) * 10.0 {
        return Ok(RelEntropy::Infinite);
    }
    let log_rho = support_log(rho.matrix(), tol)?;
    let log_sigma = support_log(sigma.matrix(), tol)?;
    let d = (rho.matrix() * &(&log_rho - &log_sigma)).trace().re;
    Ok(RelEntropy::Finite(d))
}
