//! Tensor-structure manipulation: partial trace, partial transpose, reshuffling.
//!
//! Subsystem 0 is the slowest (leftmost) index; storage is row-major, so a
//! flat index decomposes as i = ((i_0 d_1 + i_1) d_2 + i_2) ...

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

/// Ordered subsystem dimensions annotating a tensor-product split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredDims(Vec<usize>);

impl FactoredDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(
                "factored dims must be nonempty and positive".into(),
            ));
        }
        Ok(Self(dims))
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self, k: usize) -> usize {
        self.0[k]
    }

    fn check_against(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::Dimension(format!(
                "dims {:?} (product {}) inconsistent with {}x{} matrix",
                self.0,
                self.total(),
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }

    /// Decompose flat index into a multi-index.
    fn split(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for k in (0..self.0.len()).rev() {
            out[k] = idx % self.0[k];
            idx /= self.0[k];
        }
        out
    }

    /// Flatten a multi-index.
    fn join(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

impl From<&[usize]> for FactoredDims {
    fn from(d: &[usize]) -> Self {
        FactoredDims::new(d.to_vec()).expect("valid dims")
    }
}

/// Trace over every subsystem not listed in `keep`; kept factors retain
/// their original order.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &FactoredDims,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    dims.check_against(m)?;
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension("keep index out of range".into()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims.dim(k)).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_dim: usize = traced.iter().map(|&k| dims.dim(k)).product();

    let kept_fd = FactoredDims(kept_dims);
    let traced_fd = FactoredDims(if traced.is_empty() {
        vec![1]
    } else {
        traced.iter().map(|&k| dims.dim(k)).collect()
    });

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let n_sub = dims.len();
    for r in 0..out_dim {
        let rk = kept_fd.split(r);
        for c in 0..out_dim {
            let ck = kept_fd.split(c);
            let mut acc = ZERO;
            for t in 0..traced_dim {
                let tt = traced_fd.split(t);
                let mut row_multi = vec![0; n_sub];
                let mut col_multi = vec![0; n_sub];
                for (a, &k) in keep.iter().enumerate() {
                    row_multi[k] = rk[a];
                    col_multi[k] = ck[a];
                }
                for (a, &k) in traced.iter().enumerate() {
                    row_multi[k] = tt[a];
                    col_multi[k] = tt[a];
                }
                acc += m[(dims.join(&row_multi), dims.join(&col_multi))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Transpose the indices of a single tensor factor.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: &FactoredDims,
    subsystem: usize,
) -> Result<ComplexMatrix> {
    dims.check_against(m)?;
    if subsystem >= dims.len() {
        return Err(Error::Dimension("subsystem index out of range".into()));
    }
    let n = dims.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        let mut rm = dims.split(r);
        for c in 0..n {
            let mut cm = dims.split(c);
            std::mem::swap(&mut rm[subsystem], &mut cm[subsystem]);
            let v = m[(dims.join(&rm), dims.join(&cm))];
            std::mem::swap(&mut rm[subsystem], &mut cm[subsystem]);
            out[(r, c)] = v;
        }
    }
    Ok(out)
}

/// Reshuffle with independent row/col bipartitions:
/// out_{(i,k),(j,l)} = in_{(i,j),(k,l)} where the input row splits as
/// (i, j) over `row_dims` and the input column as (k, l) over `col_dims`.
/// The output is (r1·c1) × (r2·c2). Applying the operation twice with the
/// induced splits returns the input exactly.
pub fn reshuffle_rect(
    m: &ComplexMatrix,
    row_dims: (usize, usize),
    col_dims: (usize, usize),
) -> Result<ComplexMatrix> {
    let (r1, r2) = row_dims;
    let (c1, c2) = col_dims;
    if m.rows() != r1 * r2 || m.cols() != c1 * c2 {
        return Err(Error::Dimension(format!(
            "reshuffle dims ({r1}x{r2}, {c1}x{c2}) inconsistent with {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(r1 * c1, r2 * c2);
    for i in 0..r1 {
        for k in 0..c1 {
            for j in 0..r2 {
                for l in 0..c2 {
                    out[(i * c1 + k, j * c2 + l)] = m[(i * r2 + j, k * c2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Reshuffle of a square operator on a bipartite split [d1, d2]:
/// R(V)_{(i,k),(j,l)} = V_{(i,j),(k,l)}.
pub fn reshuffle(m: &ComplexMatrix, dims: &FactoredDims) -> Result<ComplexMatrix> {
    if dims.len() != 2 {
        return Err(Error::Dimension("reshuffle needs a bipartite split".into()));
    }
    dims.check_against(m)?;
    let (d1, d2) = (dims.dim(0), dims.dim(1));
    reshuffle_rect(m, (d1, d2), (d1, d2))
}
