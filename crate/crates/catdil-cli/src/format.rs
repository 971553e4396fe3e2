//! On-disk JSON formats. Matrices are row-major with complex entries stored
//! as [re, im] pairs; everything is bit-transparent and diffable.

use catdil::channel::{ChannelChoi, Dilation, MixedUnitaryDecomposition};
use catdil::matrix::{C64, ComplexMatrix};
use catdil::schur::SchurMatrix;
use catdil::states::{DensityMatrix, ToleranceSpec, UnitaryMatrix};
use catdil::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let data = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilationJson {
    pub dim_sys: usize,
    pub dim_env: usize,
    pub unitary: MatrixJson,
    pub env_state: MatrixJson,
}

impl DilationJson {
    pub fn from_dilation(d: &Dilation) -> Self {
        Self {
            dim_sys: d.dim_sys,
            dim_env: d.dim_env,
            unitary: MatrixJson::from_matrix(d.u.matrix()),
            env_state: MatrixJson::from_matrix(d.omega_env.matrix()),
        }
    }

    pub fn to_dilation(&self, tol: &ToleranceSpec) -> Result<Dilation> {
        let u = UnitaryMatrix::new(self.unitary.to_matrix()?, tol)?;
        let omega = DensityMatrix::new(self.env_state.to_matrix()?, tol)?;
        if omega.dim() != self.dim_env {
            return Err(Error::Dimension("env_state dim disagrees with dim_env".into()));
        }
        Dilation::new(u, omega, self.dim_sys)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchurJson {
    pub n: usize,
    pub x: Vec<Vec<f64>>,
}

impl SchurJson {
    pub fn from_schur(x: &SchurMatrix) -> Self {
        Self {
            n: x.n(),
            x: x.entries().to_vec(),
        }
    }

    pub fn to_schur(&self, tol: &ToleranceSpec) -> Result<SchurMatrix> {
        if self.x.len() != self.n {
            return Err(Error::Dimension("Schur matrix rows disagree with n".into()));
        }
        SchurMatrix::new(self.x.clone(), tol)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixedUnitaryTermJson {
    pub probability: f64,
    pub unitary: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixedUnitaryJson {
    pub terms: Vec<MixedUnitaryTermJson>,
}

impl MixedUnitaryJson {
    pub fn from_decomposition(d: &MixedUnitaryDecomposition) -> Self {
        Self {
            terms: d
                .terms
                .iter()
                .map(|(p, u)| MixedUnitaryTermJson {
                    probability: *p,
                    unitary: MatrixJson::from_matrix(u.matrix()),
                })
                .collect(),
        }
    }

    pub fn to_decomposition(&self, tol: &ToleranceSpec) -> Result<MixedUnitaryDecomposition> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.probability, UnitaryMatrix::new(t.unitary.to_matrix()?, tol)?)))
            .collect::<Result<Vec<_>>>()?;
        MixedUnitaryDecomposition::new(terms, tol)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChoiJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub choi: MatrixJson,
}

impl ChoiJson {
    pub fn from_channel(c: &ChannelChoi) -> Self {
        Self {
            dim_in: c.dim_in,
            dim_out: c.dim_out,
            choi: MatrixJson::from_matrix(&c.choi),
        }
    }

    pub fn to_channel(&self) -> Result<ChannelChoi> {
        ChannelChoi::new(self.dim_in, self.dim_out, self.choi.to_matrix()?)
    }
}

/// Witness emitted on verification failure: the worst residual plus the
/// offending block when small enough to be readable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<MatrixJson>,
}

impl WitnessJson {
    pub fn new(name: &str, value: f64, threshold: f64, block: Option<&ComplexMatrix>) -> Self {
        let block = block
            .filter(|m| m.rows() <= 8 && m.cols() <= 8)
            .map(MatrixJson::from_matrix);
        Self {
            name: name.to_string(),
            value,
            threshold,
            block,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use catdil::states::cnot;

    #[test]
    fn matrix_round_trip() {
        let m = cnot();
        let j = MatrixJson::from_matrix(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert!((&back.to_matrix().unwrap() - &m).frobenius_norm() == 0.0);
    }

    #[test]
    fn dilation_round_trip_and_validation() {
        let tol = ToleranceSpec::default();
        let dil = Dilation::new(
            UnitaryMatrix::new(cnot(), &tol).unwrap(),
            DensityMatrix::maximally_mixed(2),
            2,
        )
        .unwrap();
        let j = DilationJson::from_dilation(&dil);
        let back = j.to_dilation(&tol).unwrap();
        assert!((back.u.matrix() - dil.u.matrix()).frobenius_norm() == 0.0);

        // a non-unitary matrix is rejected on load
        let mut bad = j.clone();
        bad.unitary.data[0] = [2.0, 0.0];
        assert!(bad.to_dilation(&tol).is_err());
    }

    #[test]
    fn witness_block_size_guard() {
        let big = ComplexMatrix::identity(9);
        let w = WitnessJson::new("r", 1.0, 0.5, Some(&big));
        assert!(w.block.is_none());
        let small = ComplexMatrix::identity(2);
        let w = WitnessJson::new("r", 1.0, 0.5, Some(&small));
        assert!(w.block.is_some());
    }
}
