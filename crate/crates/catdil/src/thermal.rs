//! Gibbs states, emergent Hamiltonians, thermal-operation recognition, the
//! non-equilibrium witness, and the robust-catalysis reduction.

use crate::channel::{channel_distance, channel_of_dilation, ChannelChoi, Dilation};
use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ONE};
use crate::report::VerificationReport;
use crate::spectral::{hermitian_spectral, spectral_map, support_log};
use crate::states::{DensityMatrix, ToleranceSpec, UnitaryMatrix};
use crate::tensor::{partial_trace, FactoredDims};
use crate::verify::equilibrating_check;

/// A labelled Hermitian Hamiltonian.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    pub h: ComplexMatrix,
    pub label: String,
}

impl HamiltonianSpec {
    pub fn new(h: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::Dimension("Hamiltonian must be square".into()));
        }
        let r = h.hermiticity_residual();
        if r > 1e-9 * h.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian {
                residual: r,
                tol: 1e-9,
            });
        }
        Ok(Self {
            h,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }
}

/// Partition-function bookkeeping for a Gibbs state.
#[derive(Clone, Debug)]
pub struct GibbsSpec {
    pub hamiltonian: HamiltonianSpec,
    pub beta: f64,
    pub z: f64,
}

/// ω = e^{−βH}/Z with Z = Tr(e^{−βH}).
pub fn gibbs(h: &HamiltonianSpec, beta: f64, tol: &ToleranceSpec) -> Result<(DensityMatrix, GibbsSpec)> {
    if beta < 0.0 {
        return Err(Error::Invalid("beta must be nonnegative".into()));
    }
    // shift by the ground energy before exponentiating for stability
    let (eigs, _) = hermitian_spectral(&h.h, tol)?;
    let e_min = eigs.last().copied().unwrap_or(0.0);
    let shifted = spectral_map(&h.h, tol, |lam| {
        C64::new((-beta * (lam - e_min)).exp(), 0.0)
    })?;
    let z_shifted = shifted.trace().re;
    let z = z_shifted * (-beta * e_min).exp();
    let omega = DensityMatrix::new_unchecked(shifted.scale(C64::new(1.0 / z_shifted, 0.0)));
    Ok((
        omega,
        GibbsSpec {
            hamiltonian: h.clone(),
            beta,
            z,
        },
    ))
}

/// H = −β^{−1}(log ω + log(Z) 1); inverts `gibbs` for the supplied Z.
pub fn emergent_hamiltonian(
    omega: &DensityMatrix,
    beta: f64,
    z: f64,
    tol: &ToleranceSpec,
) -> Result<HamiltonianSpec> {
    if beta <= 0.0 {
        return Err(Error::Invalid("beta must be positive".into()));
    }
    if z <= 0.0 {
        return Err(Error::Invalid("partition function must be positive".into()));
    }
    let (eigs, _) = hermitian_spectral(omega.matrix(), tol)?;
    let lam_max = eigs.first().copied().unwrap_or(0.0);
    let min_eig = eigs.last().copied().unwrap_or(0.0);
    if min_eig <= tol.degeneracy_gap * lam_max {
        return Err(Error::Rank { min_eig });
    }
    let log_omega = support_log(omega.matrix(), tol)?;
    let offset = ComplexMatrix::identity(omega.dim()).scale(C64::new(z.ln(), 0.0));
    let h = (&log_omega + &offset).scale(C64::new(-1.0 / beta, 0.0));
    HamiltonianSpec::new(h, "emergent")
}

/// Thermal-operation recognition: the environment must be the Gibbs state of
/// H_env and U must conserve H_sys ⊗ 1 + 1 ⊗ H_env. The report additionally
/// records the equilibrium residuals with respect to gibbs(H_sys, β).
pub fn thermal_operation_check(
    dil: &Dilation,
    h_sys: &HamiltonianSpec,
    h_env: &HamiltonianSpec,
    beta: f64,
    tol: &ToleranceSpec,
) -> Result<VerificationReport> {
    if h_sys.dim() != dil.dim_sys || h_env.dim() != dil.dim_env {
        return Err(Error::Dimension("Hamiltonian dims do not match dilation".into()));
    }
    let (gibbs_env, _) = gibbs(h_env, beta, tol)?;
    let env_residual = (dil.omega_env.matrix() - gibbs_env.matrix()).residual_norm();

    let h_total = &h_sys.h.kron(&ComplexMatrix::identity(dil.dim_env))
        + &ComplexMatrix::identity(dil.dim_sys).kron(&h_env.h);
    let h_norm = h_total.frobenius_norm();
    let comm = dil.u.matrix().commutator(&h_total).frobenius_norm();
    let comm_residual = if h_norm > 0.0 { comm / h_norm } else { comm };

    let mut rep = VerificationReport::new();
    rep.gate("gibbs_env_residual", env_residual, tol.abs_tol);
    rep.gate("energy_conservation_residual", comm_residual, tol.abs_tol);

    // a thermal operation equilibrates with respect to the system Gibbs state
    let (gibbs_sys, _) = gibbs(h_sys, beta, tol)?;
    let eq = equilibrating_check(dil, &gibbs_sys, tol)?;
    rep.info("equilibrium_fixed_point_residual", eq.fixed_point_residual);
    rep.info(
        "equilibrium_env_preservation_residual",
        eq.env_preservation_residual,
    );
    Ok(rep)
}

/// Interpret a passing equilibrating dilation thermally: restrict the
/// environment to supp(ω_env) and read off the emergent Hamiltonians.
pub fn equilibrating_to_thermal(
    dil: &Dilation,
    omega_sys: &DensityMatrix,
    beta: f64,
    tol: &ToleranceSpec,
) -> Result<(HamiltonianSpec, HamiltonianSpec, Dilation)> {
    let eq = equilibrating_check(dil, omega_sys, tol)?;
    if !eq.pass {
        return Err(Error::NotEquilibrating {
            residual: eq
                .fixed_point_residual
                .max(eq.env_preservation_residual),
        });
    }
    let (sys_eigs, _) = hermitian_spectral(omega_sys.matrix(), tol)?;
    let sys_max = sys_eigs.first().copied().unwrap_or(0.0);
    let sys_min = sys_eigs.last().copied().unwrap_or(0.0);
    if sys_min <= tol.degeneracy_gap * sys_max {
        return Err(Error::Rank { min_eig: sys_min });
    }

    // environment support restriction
    let (env_eigs, env_vecs) = hermitian_spectral(dil.omega_env.matrix(), tol)?;
    let cutoff = tol.degeneracy_gap * env_eigs.first().copied().unwrap_or(0.0).max(0.0);
    let support: Vec<usize> = (0..dil.dim_env).filter(|&k| env_eigs[k] > cutoff).collect();
    let m = support.len();
    let iso = ComplexMatrix::from_fn(dil.dim_env, m, |i, j| env_vecs[(i, support[j])]);
    let lift = ComplexMatrix::identity(dil.dim_sys).kron(&iso);
    let u_restricted = &(&lift.adjoint() * dil.u.matrix()) * &lift;
    let ur = u_restricted.unitarity_residual();
    if ur >= tol.abs_tol * 100.0 {
        return Err(Error::Internal {
            context: "support-restricted unitary".into(),
            residual: ur,
        });
    }
    let weight: f64 = support.iter().map(|&k| env_eigs[k]).sum();
    let omega_env_restricted = ComplexMatrix::from_fn(m, m, |i, j| {
        if i == j {
            C64::new(env_eigs[support[i]] / weight, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let restricted = Dilation::new(
        UnitaryMatrix::new_unchecked(u_restricted),
        DensityMatrix::new_unchecked(omega_env_restricted),
        dil.dim_sys,
    )?;

    let h_sys = emergent_hamiltonian(omega_sys, beta, 1.0, tol)?;
    let h_env = emergent_hamiltonian(&restricted.omega_env, beta, 1.0, tol)?;
    Ok((h_sys, h_env, restricted))
}

/// ‖Tr_sys(U(ω_sys ⊗ ω_env)U†) − ω_env‖_F / √dim: how far the dilation is
/// from leaving the environment invariant on equilibrium input.
pub fn nonequilibrium_witness(dil: &Dilation, omega_sys: &DensityMatrix) -> Result<f64> {
    let env_out = dil.env_marginal(omega_sys)?;
    Ok((&env_out - dil.omega_env.matrix()).residual_norm())
}

/// Outcome of the robust-catalysis reduction.
#[derive(Debug)]
pub struct RobustReduction {
    /// The merged dilation (U, τ_C ⊗ ω_B) on system A with environment C·B.
    pub merged: Dilation,
    pub report: VerificationReport,
    /// The reduced channel on A.
    pub channel: ChannelChoi,
}

/// Reduce a robust catalytic thermal operation on A·C·B to a plain thermal
/// dilation of A with environment C·B.
///
/// Premise: [U, ω_A ⊗ ω_C ⊗ ω_B] = 0 for the supplied Gibbs triple.
/// Catalyst invariance (the C marginal fixed for every system input) is
/// certified exactly on a matrix-unit basis of A; the A and B marginals on
/// equilibrium input and the commutator with ω_A ⊗ τ_C ⊗ ω_B are verified
/// as consequences.
#[allow(clippy::too_many_arguments)]
pub fn robust_catalysis_reduce(
    u: &UnitaryMatrix,
    omega_a: &DensityMatrix,
    gibbs_c: &DensityMatrix,
    tau_c: &DensityMatrix,
    omega_b: &DensityMatrix,
    tol: &ToleranceSpec,
) -> Result<RobustReduction> {
    let (d_a, d_c, d_b) = (omega_a.dim(), tau_c.dim(), omega_b.dim());
    if gibbs_c.dim() != d_c || u.dim() != d_a * d_c * d_b {
        return Err(Error::Dimension("robust reduction dims mismatch".into()));
    }
    let dims = FactoredDims::new(vec![d_a, d_c, d_b])?;

    // thermal premise with the Gibbs catalyst
    let gibbs_joint = omega_a
        .matrix()
        .kron(&gibbs_c.matrix().kron(omega_b.matrix()));
    let premise = u.matrix().commutator(&gibbs_joint).residual_norm();
    if premise >= tol.abs_tol {
        return Err(Error::NotThermal { residual: premise });
    }

    // catalyst invariance on a matrix-unit basis of A
    let mut max_basis_residual: f64 = 0.0;
    for i in 0..d_a {
        for j in 0..d_a {
            let mut e = ComplexMatrix::zeros(d_a, d_a);
            e[(i, j)] = ONE;
            let joint = u
                .matrix()
                .conjugate_with(&e.kron(&tau_c.matrix().kron(omega_b.matrix())));
            let c_marg = partial_trace(&joint, &dims, &[1])?;
            let target = if i == j {
                tau_c.matrix().clone()
            } else {
                ComplexMatrix::zeros(d_c, d_c)
            };
            max_basis_residual = max_basis_residual.max((&c_marg - &target).residual_norm());
        }
    }
    if max_basis_residual >= tol.abs_tol {
        return Err(Error::NotRobust {
            witness: max_basis_residual,
        });
    }

    // consequences on equilibrium input
    let eq_joint = omega_a
        .matrix()
        .kron(&tau_c.matrix().kron(omega_b.matrix()));
    let eq_out = u.matrix().conjugate_with(&eq_joint);
    let a_residual = (&partial_trace(&eq_out, &dims, &[0])? - omega_a.matrix()).residual_norm();
    let b_residual = (&partial_trace(&eq_out, &dims, &[2])? - omega_b.matrix()).residual_norm();
    let tau_commutator = u.matrix().commutator(&eq_joint).residual_norm();

    let mut report = VerificationReport::new();
    report.gate("catalyst_basis_residual", max_basis_residual, tol.abs_tol);
    report.gate("system_marginal_residual", a_residual, tol.abs_tol);
    report.gate("bath_marginal_residual", b_residual, tol.abs_tol);
    report.gate("joint_commutator_residual", tau_commutator, tol.abs_tol);
    report.info("thermal_premise_residual", premise);

    // merged dilation on A with environment C·B
    let merged_env = DensityMatrix::new_unchecked(tau_c.matrix().kron(omega_b.matrix()));
    let merged = Dilation::new(u.clone(), merged_env, d_a)?;
    let channel = channel_of_dilation(&merged)?;

    // two-path consistency: the merged channel must reproduce the original
    // catalytic channel ρ ↦ Tr_C(B(ρ ⊗ τ_C))
    let original = ChannelChoi::from_action(d_a, d_a, |i, j| {
        let mut e = ComplexMatrix::zeros(d_a, d_a);
        e[(i, j)] = ONE;
        let joint = u
            .matrix()
            .conjugate_with(&e.kron(&tau_c.matrix().kron(omega_b.matrix())));
        partial_trace(&joint, &dims, &[0])
    })?;
    let dist = channel_distance(&channel, &original)?;
    report.gate("channel_agreement_residual", dist, tol.abs_tol);

    Ok(RobustReduction {
        merged,
        report,
        channel,
    })
}

/// Two-qubit partial-swap thermal unitary: rotation by θ inside the
/// degenerate span{|01⟩, |10⟩} energy eigenspace of diag(0,E) + diag(0,E).
pub fn partial_swap_unitary(theta: f64) -> UnitaryMatrix {
    let mut u = ComplexMatrix::identity(4);
    u[(1, 1)] = C64::new(theta.cos(), 0.0);
    u[(1, 2)] = C64::new(-theta.sin(), 0.0);
    u[(2, 1)] = C64::new(theta.sin(), 0.0);
    u[(2, 2)] = C64::new(theta.cos(), 0.0);
    UnitaryMatrix::new_unchecked(u)
}
