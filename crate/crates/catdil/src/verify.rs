//! Verifiers for equilibrating and catalytic dilations, structural
//! characterizations, mixed-unitary extraction, entropy flow, and
//! multipartite equilibrium.

use crate::channel::{Dilation, MixedUnitaryDecomposition};
use crate::entropy::{mutual_information, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ONE};
use crate::spectral::hermitian_spectral;
use crate::states::{max_entangled_state, DensityMatrix, ToleranceSpec, UnitaryMatrix};
use crate::tensor::{partial_trace, partial_transpose, FactoredDims};

/// Residuals for the bipartite equilibrium conditions.
#[derive(Clone, Debug)]
pub struct EquilibriumReport {
    pub fixed_point_residual: f64,
    pub env_preservation_residual: f64,
    pub joint_product_residual: f64,
    pub commutator_residual: f64,
    pub mutual_info_out: f64,
    pub pass: bool,
}

/// Residuals for catalytic verification; structural fields are filled only
/// by `structural_catalytic_check`.
#[derive(Clone, Debug)]
pub struct CatalyticReport {
    pub marginal_residual: f64,
    pub structural_commutator_residual: f64,
    pub sector_pt_unitarity_residuals: Vec<f64>,
    pub pass: bool,
}

/// One eigenvalue sector of the environment state with its U-block.
#[derive(Clone, Debug)]
pub struct SectorBlock {
    pub eigenvalue: f64,
    pub env_dim: usize,
    pub block: ComplexMatrix,
}

/// U = ⊕_i U_i relative to the eigenvalue sectors of ω_env.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub sectors: Vec<SectorBlock>,
}

/// Per-party residuals for multipartite equilibrium.
#[derive(Clone, Debug)]
pub struct MultipartiteReport {
    pub marginal_residuals: Vec<f64>,
    pub joint_product_residual: f64,
    pub commutator_residual: f64,
    pub pass: bool,
}

/// Check the equilibrium conditions of a dilation with respect to a system
/// state: both marginals of U(ω_sys ⊗ ω_env)U† must reproduce the inputs.
/// The joint product residual and output mutual information are always
/// reported so the global-stationarity implication can be asserted.
pub fn equilibrating_check(
    dil: &Dilation,
    omega_sys: &DensityMatrix,
    tol: &ToleranceSpec,
) -> Result<EquilibriumReport> {
    if omega_sys.dim() != dil.dim_sys {
        return Err(Error::Dimension("system state does not match dilation".into()));
    }
    let dims = dil.dims();
    let joint_in = omega_sys.matrix().kron(dil.omega_env.matrix());
    let joint_out = dil.u.matrix().conjugate_with(&joint_in);

    let sys_out = partial_trace(&joint_out, &dims, &[0])?;
    let env_out = partial_trace(&joint_out, &dims, &[1])?;

    let fixed_point_residual = (&sys_out - omega_sys.matrix()).residual_norm();
    let env_preservation_residual = (&env_out - dil.omega_env.matrix()).residual_norm();
    let joint_product_residual = (&joint_out - &joint_in).residual_norm();
    let commutator_residual = dil.u.matrix().commutator(&joint_in).residual_norm();
    let mutual_info_out =
        mutual_information(&DensityMatrix::new_unchecked(joint_out), &dims, tol)?;

    let pass = fixed_point_residual < tol.abs_tol && env_preservation_residual < tol.abs_tol;
    Ok(EquilibriumReport {
        fixed_point_residual,
        env_preservation_residual,
        joint_product_residual,
        commutator_residual,
        mutual_info_out,
        pass,
    })
}

/// Environment marginal after coupling to half of a maximally entangled
/// state: Tr_sys((1_R ⊗ U)(|Ω⟩⟨Ω|_{R,sys} ⊗ ω_env)(1_R ⊗ U)†).
fn reference_coupled_marginal(dil: &Dilation) -> Result<ComplexMatrix> {
    let d = dil.dim_sys;
    let omega = max_entangled_state(d);
    let proj = ComplexMatrix::outer(&omega, &omega);
    let input = proj.kron(dil.omega_env.matrix());
    let big_u = ComplexMatrix::identity(d).kron(dil.u.matrix());
    let out = big_u.conjugate_with(&input);
    let dims = FactoredDims::new(vec![d, d, dil.dim_env])?;
    partial_trace(&out, &dims, &[0, 2])
}

/// Catalytic verification through the single maximally entangled input:
/// the reference-and-environment marginal must equal 1_R/d ⊗ ω_env. By
/// linearity this certifies environment preservation for every input.
pub fn catalytic_check(dil: &Dilation, tol: &ToleranceSpec) -> Result<CatalyticReport> {
    let d = dil.dim_sys;
    let marginal = reference_coupled_marginal(dil)?;
    let target = ComplexMatrix::identity(d)
        .scale(C64::new(1.0 / d as f64, 0.0))
        .kron(dil.omega_env.matrix());
    let marginal_residual = (&marginal - &target).residual_norm();
    Ok(CatalyticReport {
        marginal_residual,
        structural_commutator_residual: f64::NAN,
        sector_pt_unitarity_residuals: Vec::new(),
        pass: marginal_residual < tol.abs_tol,
    })
}

/// Eigenvalue sectors of a Hermitian matrix, clustered by the relative
/// degeneracy gap. Returns (sector eigenvalue, eigenvector columns).
pub fn eigenvalue_sectors(
    m: &ComplexMatrix,
    tol: &ToleranceSpec,
) -> Result<Vec<(f64, ComplexMatrix)>> {
    let (values, vectors) = hermitian_spectral(m, tol)?;
    let n = m.rows();
    let lam_max = values.first().copied().unwrap_or(0.0).abs().max(1e-300);
    let gap = tol.degeneracy_gap * lam_max;
    let mut sectors = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || (values[k - 1] - values[k]).abs() > gap {
            let cols = k - start;
            let iso = ComplexMatrix::from_fn(n, cols, |i, j| vectors[(i, start + j)]);
            sectors.push((values[start], iso));
            start = k;
        }
    }
    Ok(sectors)
}

/// Structural catalytic verification: the commutator [U, 1 ⊗ ω_env] must
/// vanish, and within each eigenvalue sector of ω_env the U-block must have
/// a unitary partial transpose on the system factor.
pub fn structural_catalytic_check(
    dil: &Dilation,
    tol: &ToleranceSpec,
) -> Result<(CatalyticReport, BlockDecomposition)> {
    let d_sys = dil.dim_sys;
    let one_env = ComplexMatrix::identity(d_sys).kron(dil.omega_env.matrix());
    let structural_commutator_residual = dil.u.matrix().commutator(&one_env).residual_norm();

    let sectors = eigenvalue_sectors(dil.omega_env.matrix(), tol)?;
    let mut blocks = Vec::new();
    let mut pt_residuals = Vec::new();
    for (eigenvalue, iso) in sectors {
        let m = iso.cols();
        let lift = ComplexMatrix::identity(d_sys).kron(&iso);
        let block = &(&lift.adjoint() * dil.u.matrix()) * &lift;
        let block_dims = FactoredDims::new(vec![d_sys, m])?;
        let pt = partial_transpose(&block, &block_dims, 0)?;
        pt_residuals.push(pt.unitarity_residual());
        blocks.push(SectorBlock {
            eigenvalue,
            env_dim: m,
            block,
        });
    }

    let pass = structural_commutator_residual < tol.abs_tol
        && pt_residuals.iter().all(|&r| r < tol.abs_tol);
    // the single-entangled-state marginal is still the defining residual
    let marginal_residual = catalytic_check(dil, tol)?.marginal_residual;
    Ok((
        CatalyticReport {
            marginal_residual,
            structural_commutator_residual,
            sector_pt_unitarity_residuals: pt_residuals,
            pass,
        },
        BlockDecomposition { sectors: blocks },
    ))
}

/// True iff all eigenvalue pairs differ by more than gap·λ_max.
pub fn nondegenerate_spectrum(omega: &DensityMatrix, degeneracy_gap: f64) -> Result<bool> {
    let tol = ToleranceSpec {
        degeneracy_gap,
        ..ToleranceSpec::default()
    };
    let (values, _) = hermitian_spectral(omega.matrix(), &tol)?;
    let lam_max = values.first().copied().unwrap_or(0.0).max(1e-300);
    let gap = degeneracy_gap * lam_max;
    Ok(values.windows(2).all(|w| (w[0] - w[1]).abs() > gap))
}

/// Read the mixed-unitary decomposition off a non-degenerate equilibrating
/// dilation: in the ω_env eigenbasis, U = Σ_i U_i ⊗ |i⟩⟨i| and
/// T = Σ_i p_i U_i · U_i†.
pub fn extract_mixed_unitary(
    dil: &Dilation,
    tol: &ToleranceSpec,
) -> Result<MixedUnitaryDecomposition> {
    if !nondegenerate_spectrum(&dil.omega_env, tol.degeneracy_gap)? {
        return Err(Error::Degeneracy {
            gap: tol.degeneracy_gap,
        });
    }
    let one_env = ComplexMatrix::identity(dil.dim_sys).kron(dil.omega_env.matrix());
    let comm = dil.u.matrix().commutator(&one_env).residual_norm();
    if comm >= tol.abs_tol {
        return Err(Error::NotEquilibrating { residual: comm });
    }
    let (values, vectors) = hermitian_spectral(dil.omega_env.matrix(), tol)?;
    let d_sys = dil.dim_sys;
    let d_env = dil.dim_env;
    let mut terms = Vec::with_capacity(d_env);
    for (k, &p) in values.iter().enumerate() {
        // U_k = (1 ⊗ ⟨v_k|) U (1 ⊗ |v_k⟩)
        let iso = ComplexMatrix::from_fn(d_env, 1, |i, _| vectors[(i, k)]);
        let lift = ComplexMatrix::identity(d_sys).kron(&iso);
        let uk = &(&lift.adjoint() * dil.u.matrix()) * &lift;
        terms.push((p.max(0.0), UnitaryMatrix::new(uk, tol)?));
    }
    MixedUnitaryDecomposition::new(terms, tol)
}

/// Environment entropy before and after the interaction with a maximally
/// mixed system input.
pub fn entropy_flow_check(dil: &Dilation, tol: &ToleranceSpec) -> Result<(f64, f64, f64)> {
    let s_before = von_neumann_entropy(&dil.omega_env, tol)?;
    let env_out = dil.env_marginal(&DensityMatrix::maximally_mixed(dil.dim_sys))?;
    let s_after = von_neumann_entropy(&DensityMatrix::new_unchecked(env_out), tol)?;
    Ok((s_before, s_after, (s_before - s_after).abs()))
}

/// Multipartite equilibrium: every party's marginal of
/// U(ω_1 ⊗ … ⊗ ω_n)U† must reproduce its input; the joint product residual
/// exposes the global-stationarity consequence.
pub fn multipartite_equilibrium_check(
    u: &UnitaryMatrix,
    states: &[DensityMatrix],
    tol: &ToleranceSpec,
) -> Result<MultipartiteReport> {
    if states.len() < 2 {
        return Err(Error::Dimension("need at least two parties".into()));
    }
    let dims = FactoredDims::new(states.iter().map(|s| s.dim()).collect())?;
    if dims.total() != u.dim() {
        return Err(Error::Dimension("state dims do not factor the unitary".into()));
    }
    let mut joint_in = states[0].matrix().clone();
    for s in &states[1..] {
        joint_in = joint_in.kron(s.matrix());
    }
    let joint_out = u.matrix().conjugate_with(&joint_in);
    let mut marginal_residuals = Vec::with_capacity(states.len());
    for (k, s) in states.iter().enumerate() {
        let marg = partial_trace(&joint_out, &dims, &[k])?;
        marginal_residuals.push((&marg - s.matrix()).residual_norm());
    }
    let joint_product_residual = (&joint_out - &joint_in).residual_norm();
    let commutator_residual = u.matrix().commutator(&joint_in).residual_norm();
    let pass = marginal_residuals.iter().all(|&r| r < tol.abs_tol);
    Ok(MultipartiteReport {
        marginal_residuals,
        joint_product_residual,
        commutator_residual,
        pass,
    })
}

/// Exhaustive catalytic verification over a full matrix-unit input basis of
/// the system; the independent oracle for the single-entangled-state test.
pub fn catalytic_check_exhaustive(dil: &Dilation, tol: &ToleranceSpec) -> Result<(f64, bool)> {
    let d = dil.dim_sys;
    let dims = dil.dims();
    let mut max_res: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(i, j)] = ONE;
            let joint = dil
                .u
                .matrix()
                .conjugate_with(&e.kron(dil.omega_env.matrix()));
            let env_out = partial_trace(&joint, &dims, &[1])?;
            // linearity: Tr_A(U(E_ij ⊗ ω)U†) must equal δ_ij ω
            let target = if i == j {
                dil.omega_env.matrix().clone()
            } else {
                ComplexMatrix::zeros(dil.dim_env, dil.dim_env)
            };
            max_res = max_res.max((&env_out - &target).residual_norm());
        }
    }
    Ok((max_res, max_res < tol.abs_tol))
}
