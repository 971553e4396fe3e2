//! Channel representations and channel-level predicates.
//!
//! The Choi matrix C = Σ_{ij} |i⟩⟨j| ⊗ T(|i⟩⟨j|) is the canonical channel
//! form, input factor first. Trace preservation reads Tr_out(C) = 1_in.

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ONE, ZERO};
use crate::report::VerificationReport;
use crate::spectral::{hermitian_spectral, matrix_power_it};
use crate::states::{DensityMatrix, ToleranceSpec, UnitaryMatrix};
use crate::tensor::{partial_trace, FactoredDims};

/// A unitary dilation (U, ω_env) of a channel, system factor first.
#[derive(Clone, Debug)]
pub struct Dilation {
    pub u: UnitaryMatrix,
    pub omega_env: DensityMatrix,
    pub dim_sys: usize,
    pub dim_env: usize,
}

impl Dilation {
    pub fn new(u: UnitaryMatrix, omega_env: DensityMatrix, dim_sys: usize) -> Result<Self> {
        let dim_env = omega_env.dim();
        if u.dim() != dim_sys * dim_env {
            return Err(Error::Dimension(format!(
                "unitary dim {} != dim_sys {} x dim_env {}",
                u.dim(),
                dim_sys,
                dim_env
            )));
        }
        Ok(Self {
            u,
            omega_env,
            dim_sys,
            dim_env,
        })
    }

    pub fn dims(&self) -> FactoredDims {
        FactoredDims::new(vec![self.dim_sys, self.dim_env]).expect("positive dims")
    }

    /// Act on a (not necessarily Hermitian) system operator:
    /// X ↦ Tr_env(U (X ⊗ ω_env) U†).
    pub fn act(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_sys || x.cols() != self.dim_sys {
            return Err(Error::Dimension("operator does not match system dim".into()));
        }
        let joint = self
            .u
            .matrix()
            .conjugate_with(&x.kron(self.omega_env.matrix()));
        partial_trace(&joint, &self.dims(), &[0])
    }

    /// Environment marginal after acting on a system state:
    /// ρ ↦ Tr_sys(U (ρ ⊗ ω_env) U†).
    pub fn env_marginal(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim_sys {
            return Err(Error::Dimension("state does not match system dim".into()));
        }
        let joint = self
            .u
            .matrix()
            .conjugate_with(&rho.matrix().kron(self.omega_env.matrix()));
        partial_trace(&joint, &self.dims(), &[1])
    }
}

/// A channel represented by its (unnormalized) Choi matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelChoi {
    pub dim_in: usize,
    pub dim_out: usize,
    pub choi: ComplexMatrix,
}

impl ChannelChoi {
    pub fn new(dim_in: usize, dim_out: usize, choi: ComplexMatrix) -> Result<Self> {
        if choi.rows() != dim_in * dim_out || !choi.is_square() {
            return Err(Error::Dimension(format!(
                "Choi matrix must be {0}x{0}",
                dim_in * dim_out
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            choi,
        })
    }

    /// Validate complete positivity and trace preservation.
    pub fn validate(&self, tol: &ToleranceSpec) -> Result<()> {
        let (eigs, _) = hermitian_spectral(&self.choi, tol)?;
        let min_eig = *eigs.last().unwrap();
        if min_eig <= -tol.abs_tol * 100.0 {
            return Err(Error::NotPositive { min_eig });
        }
        let dims = FactoredDims::new(vec![self.dim_in, self.dim_out])?;
        let marg = partial_trace(&self.choi, &dims, &[0])?;
        let r = (&marg - &ComplexMatrix::identity(self.dim_in)).residual_norm();
        if r >= tol.abs_tol * 100.0 {
            return Err(Error::Invalid(format!(
                "channel is not trace preserving: residual {r:.3e}"
            )));
        }
        Ok(())
    }

    pub fn identity(dim: usize) -> Self {
        let mut choi = ComplexMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                choi[(i * dim + i, j * dim + j)] = ONE;
            }
        }
        Self {
            dim_in: dim,
            dim_out: dim,
            choi,
        }
    }

    /// Assemble from the action on matrix units.
    pub fn from_action(
        dim_in: usize,
        dim_out: usize,
        mut action: impl FnMut(usize, usize) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        let mut choi = ComplexMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let t_ij = action(i, j)?;
                if t_ij.rows() != dim_out || t_ij.cols() != dim_out {
                    return Err(Error::Dimension("action output dim mismatch".into()));
                }
                for k in 0..dim_out {
                    for l in 0..dim_out {
                        choi[(i * dim_out + k, j * dim_out + l)] = t_ij[(k, l)];
                    }
                }
            }
        }
        Self::new(dim_in, dim_out, choi)
    }

    /// Apply to an arbitrary operator via Choi contraction:
    /// T(X)_{kl} = Σ_{ij} X_{ij} C_{(i,k),(j,l)}.
    pub fn act(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::Dimension("operator does not match channel input".into()));
        }
        let d_out = self.dim_out;
        let mut out = ComplexMatrix::zeros(d_out, d_out);
        for i in 0..self.dim_in {
            for j in 0..self.dim_in {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                for k in 0..d_out {
                    for l in 0..d_out {
                        out[(k, l)] += xij * self.choi[(i * d_out + k, j * d_out + l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// T(1), the image of the identity.
    pub fn unit_image(&self) -> Result<ComplexMatrix> {
        self.act(&ComplexMatrix::identity(self.dim_in))
    }
}

/// Convex combination Σ p_i U_i · U_i†.
#[derive(Clone, Debug)]
pub struct MixedUnitaryDecomposition {
    pub terms: Vec<(f64, UnitaryMatrix)>,
}

impl MixedUnitaryDecomposition {
    pub fn new(terms: Vec<(f64, UnitaryMatrix)>, tol: &ToleranceSpec) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Invalid("decomposition needs at least one term".into()));
        }
        let dim = terms[0].1.dim();
        if terms.iter().any(|(_, u)| u.dim() != dim) {
            return Err(Error::Dimension("unitaries must share a dimension".into()));
        }
        if terms.iter().any(|(p, _)| *p < -tol.abs_tol) {
            return Err(Error::Invalid("probabilities must be nonnegative".into()));
        }
        let total: f64 = terms.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() >= tol.abs_tol * 100.0 {
            return Err(Error::Invalid(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { terms })
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.dim()
    }

    /// The Choi matrix of Σ p_i U_i ρ U_i†.
    pub fn channel(&self) -> Result<ChannelChoi> {
        let d = self.dim();
        ChannelChoi::from_action(d, d, |i, j| {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(i, j)] = ONE;
            let mut acc = ComplexMatrix::zeros(d, d);
            for (p, u) in &self.terms {
                acc = &acc + &u.matrix().conjugate_with(&e).scale(C64::new(*p, 0.0));
            }
            Ok(acc)
        })
    }

    /// The controlled-unitary dilation U = Σ_i U_i ⊗ |i⟩⟨i|, ω_env = Σ p_i |i⟩⟨i|.
    pub fn to_dilation(&self) -> Result<Dilation> {
        let d = self.dim();
        let k = self.terms.len();
        let mut u = ComplexMatrix::zeros(d * k, d * k);
        for (idx, (_, ui)) in self.terms.iter().enumerate() {
            for a in 0..d {
                for b in 0..d {
                    u[(a * k + idx, b * k + idx)] = ui.matrix()[(a, b)];
                }
            }
        }
        let probs: Vec<f64> = self.terms.iter().map(|(p, _)| *p).collect();
        let omega = DensityMatrix::from_probabilities(&probs)?;
        Dilation::new(
            UnitaryMatrix::new_unchecked(u),
            omega,
            d,
        )
    }
}

/// The channel induced by a dilation, as a Choi matrix.
pub fn channel_of_dilation(dil: &Dilation) -> Result<ChannelChoi> {
    let d = dil.dim_sys;
    ChannelChoi::from_action(d, d, |i, j| {
        let mut e = ComplexMatrix::zeros(d, d);
        e[(i, j)] = ONE;
        dil.act(&e)
    })
}

/// Apply a channel to a density matrix.
pub fn apply(t: &ChannelChoi, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(t.act(rho.matrix())?))
}

/// ‖T(1) − 1‖_F / √dim against tol.
pub fn is_doubly_stochastic(t: &ChannelChoi, tol: f64) -> Result<VerificationReport> {
    if t.dim_in != t.dim_out {
        return Err(Error::Dimension("double stochasticity needs a square channel".into()));
    }
    let r = (&t.unit_image()? - &ComplexMatrix::identity(t.dim_out)).residual_norm();
    let mut rep = VerificationReport::new();
    rep.gate("unit_preservation_residual", r, tol);
    Ok(rep)
}

/// ‖T(ω) − ω‖_F / √dim against tol.
pub fn fixed_point_check(
    t: &ChannelChoi,
    omega: &DensityMatrix,
    tol: f64,
) -> Result<VerificationReport> {
    if t.dim_in != omega.dim() || t.dim_out != omega.dim() {
        return Err(Error::Dimension("fixed-point state does not match channel".into()));
    }
    let r = (&t.act(omega.matrix())? - omega.matrix()).residual_norm();
    let mut rep = VerificationReport::new();
    rep.gate("fixed_point_residual", r, tol);
    Ok(rep)
}

/// Default probe times for covariance checks.
pub fn default_t_samples() -> Vec<f64> {
    vec![
        0.0,
        0.5,
        -0.5,
        1.0,
        -1.0,
        std::f64::consts::PI,
        -std::f64::consts::PI,
    ]
}

/// Time-translation covariance: max over t and a matrix-unit basis of
/// ‖T(ω^{it} E ω^{-it}) − ω^{it} T(E) ω^{-it}‖_F / √dim.
pub fn covariance_check(
    t: &ChannelChoi,
    omega: &DensityMatrix,
    t_samples: &[f64],
    tol: &ToleranceSpec,
) -> Result<VerificationReport> {
    if t.dim_in != omega.dim() {
        return Err(Error::Dimension("covariance state does not match channel".into()));
    }
    let d = t.dim_in;
    let mut max_residual: f64 = 0.0;
    for &time in t_samples {
        let w = matrix_power_it(omega, time, tol)?;
        let w_dag = w.adjoint();
        for i in 0..d {
            for j in 0..d {
                let mut e = ComplexMatrix::zeros(d, d);
                e[(i, j)] = ONE;
                let lhs = t.act(&(&(&w * &e) * &w_dag))?;
                let rhs = &(&w * &t.act(&e)?) * &w_dag;
                max_residual = max_residual.max((&lhs - &rhs).residual_norm());
            }
        }
    }
    let mut rep = VerificationReport::new();
    rep.gate("covariance_residual", max_residual, tol.abs_tol);
    Ok(rep)
}

/// ‖C_1 − C_2‖_F / √dim.
pub fn channel_distance(t1: &ChannelChoi, t2: &ChannelChoi) -> Result<f64> {
    if t1.dim_in != t2.dim_in || t1.dim_out != t2.dim_out {
        return Err(Error::Dimension("channel distance needs matching dims".into()));
    }
    Ok((&t1.choi - &t2.choi).residual_norm())
}

/// The completely dephasing channel in the computational basis.
pub fn dephasing_channel(dim: usize) -> ChannelChoi {
    let mut choi = ComplexMatrix::zeros(dim * dim, dim * dim);
    for i in 0..dim {
        choi[(i * dim + i, i * dim + i)] = ONE;
    }
    ChannelChoi {
        dim_in: dim,
        dim_out: dim,
        choi,
    }
}
