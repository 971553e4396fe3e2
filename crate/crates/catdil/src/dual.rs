//! Correspondence between catalytic unitaries (unitary partial transpose)
//! and dual-unitary operators (unitary reshuffle).

use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::states::{swap, ToleranceSpec, UnitaryMatrix};
use crate::tensor::{partial_transpose, reshuffle, FactoredDims};

fn bipartite(v: &UnitaryMatrix, dims: &FactoredDims) -> Result<()> {
    if dims.len() != 2 {
        return Err(Error::Dimension("expected a bipartite factorization".into()));
    }
    if dims.total() != v.dim() {
        return Err(Error::Dimension("factor dims do not match the operator".into()));
    }
    Ok(())
}

/// Dual-unitarity: the reshuffled operator must itself be unitary.
pub fn is_dual_unitary(
    v: &UnitaryMatrix,
    dims: &FactoredDims,
    tol: &ToleranceSpec,
) -> Result<VerificationReport> {
    bipartite(v, dims)?;
    let r = reshuffle(v.matrix(), dims)?;
    let mut rep = VerificationReport::new();
    rep.gate("reshuffle_unitarity_residual", r.unitarity_residual(), tol.abs_tol);
    Ok(rep)
}

/// V = U·S. Requires the partial transpose of U on the first factor to be
/// unitary (the catalytic-unitary condition) and a square bipartition.
pub fn catalytic_to_dual(
    u: &UnitaryMatrix,
    dims: &FactoredDims,
    tol: &ToleranceSpec,
) -> Result<UnitaryMatrix> {
    bipartite(u, dims)?;
    if dims.dim(0) != dims.dim(1) {
        return Err(Error::Dimension("swap conversion needs equal factors".into()));
    }
    let pt = partial_transpose(u.matrix(), dims, 0)?;
    let residual = pt.unitarity_residual();
    if residual >= tol.abs_tol {
        return Err(Error::NotCatalyticUnitary { residual });
    }
    let v = u.matrix() * &swap(dims.dim(0));
    Ok(UnitaryMatrix::new_unchecked(v))
}

/// U = V·S, the inverse conversion. Requires V dual-unitary.
pub fn dual_to_catalytic(
    v: &UnitaryMatrix,
    dims: &FactoredDims,
    tol: &ToleranceSpec,
) -> Result<UnitaryMatrix> {
    bipartite(v, dims)?;
    if dims.dim(0) != dims.dim(1) {
        return Err(Error::Dimension("swap conversion needs equal factors".into()));
    }
    let rep = is_dual_unitary(v, dims, tol)?;
    if !rep.pass {
        let residual = rep.residual("reshuffle_unitarity_residual").unwrap_or(f64::NAN);
        return Err(Error::NotDualUnitary { residual });
    }
    let u = v.matrix() * &swap(dims.dim(0));
    Ok(UnitaryMatrix::new_unchecked(u))
}
