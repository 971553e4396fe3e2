//! Validated state/operator types and the standard constructors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ONE, ZERO};
use crate::spectral::hermitian_spectral;

/// Tolerances shared by validators and verifiers.
#[derive(Clone, Copy, Debug)]
pub struct ToleranceSpec {
    /// Absolute residual threshold (Frobenius / √dim).
    pub abs_tol: f64,
    /// Relative gap under which eigenvalues count as degenerate / absent.
    pub degeneracy_gap: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            degeneracy_gap: 1e-8,
        }
    }
}

impl ToleranceSpec {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, tol: &ToleranceSpec) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        let herm = mat.hermiticity_residual();
        if herm >= tol.abs_tol * (mat.rows() as f64).sqrt().max(1.0) * 10.0 {
            return Err(Error::NotHermitian {
                residual: herm,
                tol: tol.abs_tol,
            });
        }
        let tr = (mat.trace() - ONE).norm();
        if tr >= tol.abs_tol * 10.0 {
            return Err(Error::NotUnitTrace {
                residual: tr,
                tol: tol.abs_tol,
            });
        }
        let (eigs, _) = hermitian_spectral(&mat, tol)?;
        let min_eig = *eigs.last().unwrap();
        if min_eig <= -tol.abs_tol * 10.0 {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(Self { mat })
    }

    /// Skip validation; for internal constructions known to be valid.
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        if p.iter().any(|&x| x < 0.0) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid("probabilities must be a distribution".into()));
        }
        Ok(Self {
            mat: ComplexMatrix::from_real_diag(p),
        })
    }

    pub fn pure(state: &[C64]) -> Result<Self> {
        let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid("pure state vector must be normalized".into()));
        }
        Ok(Self {
            mat: ComplexMatrix::outer(state, state),
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

/// Square matrix with U†U = 1 within tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    mat: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(mat: ComplexMatrix, tol: &ToleranceSpec) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Dimension("unitary must be square".into()));
        }
        let r = mat.unitarity_residual();
        if r >= tol.abs_tol * 10.0 {
            return Err(Error::NotUnitary {
                residual: r,
                tol: tol.abs_tol,
            });
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

/// Pauli matrix by label, one of 'I', 'X', 'Y', 'Z'.
pub fn pauli(label: char) -> ComplexMatrix {
    match label {
        'I' => ComplexMatrix::identity(2),
        'X' => ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO }),
        'Y' => ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => ZERO,
        }),
        'Z' => ComplexMatrix::from_real_diag(&[1.0, -1.0]),
        _ => panic!("unknown Pauli label {label}"),
    }
}

/// CNOT with the first factor as control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let (ic, it) = (i / 2, i % 2);
        let (jc, jt) = (j / 2, j % 2);
        if ic == jc && it == jt ^ ic { ONE } else { ZERO }
    })
}

/// Swap operator 𝕊 |a⟩|b⟩ = |b⟩|a⟩ on two d-dimensional factors.
pub fn swap(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |i, j| {
        let (ia, ib) = (i / d, i % d);
        let (ja, jb) = (j / d, j % d);
        if ia == jb && ib == ja { ONE } else { ZERO }
    })
}

/// Maximally entangled vector |Ω⟩ = d^{-1/2} Σ_i |ii⟩.
pub fn max_entangled_state(d: usize) -> Vec<C64> {
    let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = a;
    }
    v
}

/// |Ω⟩⟨Ω| as a density matrix.
pub fn max_entangled(d: usize) -> DensityMatrix {
    let v = max_entangled_state(d);
    DensityMatrix::new_unchecked(ComplexMatrix::outer(&v, &v))
}

fn gaussian_matrix(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut data = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        data.push(C64::new(re, im));
    }
    ComplexMatrix::new(d, d, data).expect("finite Gaussian samples")
}

fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn from_dmatrix(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// the R diagonal absorbed into Q. Deterministic per seed.
pub fn haar_random_unitary(d: usize, seed: u64) -> Result<UnitaryMatrix> {
    if d < 1 {
        return Err(Error::Dimension("dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(d, &mut rng);
    let qr = to_dmatrix(&g).qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = from_dmatrix(&q);
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    Ok(UnitaryMatrix::new_unchecked(u))
}

/// Random full-rank density matrix GG†/Tr(GG†). Deterministic per seed.
pub fn random_density(d: usize, seed: u64) -> Result<DensityMatrix> {
    if d < 1 {
        return Err(Error::Dimension("dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(d, &mut rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace();
    Ok(DensityMatrix::new_unchecked(gg.scale(ONE / tr)))
}
