//! Constructive families of dilations used for testing and random
//! instance generation.
//!
//! Spectra are specified as integer weights so that eigenvalue products can
//! be grouped exactly; Haar-random blocks act within each degenerate product
//! sector, which makes the built unitary commute with ω_A ⊗ ω_B up to
//! floating-point rounding.

use std::collections::BTreeMap;

use crate::channel::Dilation;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::states::{haar_random_unitary, DensityMatrix, UnitaryMatrix};

fn normalized(weights: &[u32]) -> Result<Vec<f64>> {
    if weights.is_empty() || weights.contains(&0) {
        return Err(Error::Invalid("weights must be nonempty and positive".into()));
    }
    let total: u32 = weights.iter().sum();
    Ok(weights.iter().map(|&w| w as f64 / total as f64).collect())
}

/// Group flat indices of a product spectrum by the exact integer product of
/// the per-party weights.
fn product_groups(weight_lists: &[&[u32]]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let total: usize = weight_lists.iter().map(|w| w.len()).product();
    for flat in 0..total {
        let mut idx = flat;
        let mut product: u64 = 1;
        for w in weight_lists.iter().rev() {
            product *= w[idx % w.len()] as u64;
            idx /= w.len();
        }
        groups.entry(product).or_default().push(flat);
    }
    groups.into_values().collect()
}

/// Block unitary acting as an independent Haar-random unitary inside each
/// index group and as zero across groups.
fn block_unitary(groups: &[Vec<usize>], dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (g, idxs) in groups.iter().enumerate() {
        let blk = haar_random_unitary(idxs.len(), seed.wrapping_add(g as u64).wrapping_mul(0x9e3779b9))?;
        for (i, &row) in idxs.iter().enumerate() {
            for (j, &col) in idxs.iter().enumerate() {
                u[(row, col)] = blk.matrix()[(i, j)];
            }
        }
    }
    Ok(u)
}

/// An equilibrating dilation built from commuting blocks: returns the system
/// equilibrium state ω_A together with the dilation (U, ω_B), with
/// [U, ω_A ⊗ ω_B] = 0 by construction.
pub fn commuting_block_dilation(
    weights_sys: &[u32],
    weights_env: &[u32],
    seed: u64,
) -> Result<(DensityMatrix, Dilation)> {
    let d_sys = weights_sys.len();
    let d_env = weights_env.len();
    let p_sys = normalized(weights_sys)?;
    let p_env = normalized(weights_env)?;
    let groups = product_groups(&[weights_sys, weights_env]);
    let u_diag = block_unitary(&groups, d_sys * d_env, seed)?;

    let v_sys = haar_random_unitary(d_sys, seed.wrapping_add(101))?;
    let v_env = haar_random_unitary(d_env, seed.wrapping_add(202))?;
    let local = v_sys.matrix().kron(v_env.matrix());
    let u = local.conjugate_with(&u_diag);

    let omega_sys = DensityMatrix::new_unchecked(
        v_sys
            .matrix()
            .conjugate_with(&ComplexMatrix::from_real_diag(&p_sys)),
    );
    let omega_env = DensityMatrix::new_unchecked(
        v_env
            .matrix()
            .conjugate_with(&ComplexMatrix::from_real_diag(&p_env)),
    );
    let dil = Dilation::new(UnitaryMatrix::new_unchecked(u), omega_env, d_sys)?;
    Ok((omega_sys, dil))
}

/// Multipartite commuting-block construction: states ω_1 … ω_n and a global
/// unitary with [U, ω_1 ⊗ … ⊗ ω_n] = 0 by construction.
pub fn commuting_block_multipartite(
    weight_lists: &[&[u32]],
    seed: u64,
) -> Result<(Vec<DensityMatrix>, UnitaryMatrix)> {
    if weight_lists.len() < 2 {
        return Err(Error::Invalid("need at least two parties".into()));
    }
    let dims: Vec<usize> = weight_lists.iter().map(|w| w.len()).collect();
    let total: usize = dims.iter().product();
    let groups = product_groups(weight_lists);
    let u_diag = block_unitary(&groups, total, seed)?;

    let mut locals = Vec::new();
    for (k, &d) in dims.iter().enumerate() {
        locals.push(haar_random_unitary(d, seed.wrapping_add(101 + 97 * k as u64))?);
    }
    let mut local = locals[0].matrix().clone();
    for v in &locals[1..] {
        local = local.kron(v.matrix());
    }
    let u = local.conjugate_with(&u_diag);

    let mut states = Vec::new();
    for (k, w) in weight_lists.iter().enumerate() {
        let p = normalized(w)?;
        states.push(DensityMatrix::new_unchecked(
            locals[k]
                .matrix()
                .conjugate_with(&ComplexMatrix::from_real_diag(&p)),
        ));
    }
    Ok((states, UnitaryMatrix::new_unchecked(u)))
}

/// A robust-catalysis instance on A·C·B: the unitary is controlled on the
/// catalyst basis, with each branch a commuting-block unitary for
/// (ω_A, ω_B). The catalyst Gibbs state ω_C is diagonal in the control
/// basis, so [U, ω_A ⊗ ω_C ⊗ ω_B] = 0 and the C marginal is preserved for
/// every system input.
pub fn controlled_commuting_dilation(
    weights_sys: &[u32],
    weights_cat: &[u32],
    weights_env: &[u32],
    seed: u64,
) -> Result<(DensityMatrix, DensityMatrix, DensityMatrix, UnitaryMatrix)> {
    let d_a = weights_sys.len();
    let d_c = weights_cat.len();
    let d_b = weights_env.len();
    let p_a = normalized(weights_sys)?;
    let p_c = normalized(weights_cat)?;
    let p_b = normalized(weights_env)?;

    let groups = product_groups(&[weights_sys, weights_env]);
    let v_a = haar_random_unitary(d_a, seed.wrapping_add(11))?;
    let v_b = haar_random_unitary(d_b, seed.wrapping_add(22))?;
    let local_ab = v_a.matrix().kron(v_b.matrix());

    // per-branch AB unitaries, all commuting with ω_A ⊗ ω_B
    let mut branches = Vec::with_capacity(d_c);
    for c in 0..d_c {
        let u_diag = block_unitary(&groups, d_a * d_b, seed.wrapping_add(1000 + c as u64))?;
        branches.push(local_ab.conjugate_with(&u_diag));
    }

    // assemble on A ⊗ C ⊗ B ordering
    let total = d_a * d_c * d_b;
    let mut u = ComplexMatrix::zeros(total, total);
    for c in 0..d_c {
        for a in 0..d_a {
            for b in 0..d_b {
                for a2 in 0..d_a {
                    for b2 in 0..d_b {
                        u[((a * d_c + c) * d_b + b, (a2 * d_c + c) * d_b + b2)] =
                            branches[c][(a * d_b + b, a2 * d_b + b2)];
                    }
                }
            }
        }
    }

    let omega_a = DensityMatrix::new_unchecked(
        v_a.matrix()
            .conjugate_with(&ComplexMatrix::from_real_diag(&p_a)),
    );
    let omega_c = DensityMatrix::from_probabilities(&p_c)?;
    let omega_b = DensityMatrix::new_unchecked(
        v_b.matrix()
            .conjugate_with(&ComplexMatrix::from_real_diag(&p_b)),
    );
    Ok((omega_a, omega_c, omega_b, UnitaryMatrix::new_unchecked(u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::ToleranceSpec;
    use crate::tensor::FactoredDims;

    #[test]
    fn commuting_block_commutes() {
        let (omega_sys, dil) = commuting_block_dilation(&[2, 1, 1], &[1, 1], 7).unwrap();
        let joint = omega_sys.matrix().kron(dil.omega_env.matrix());
        assert!(dil.u.matrix().commutator(&joint).frobenius_norm() < 1e-12);
        assert!(dil.u.matrix().unitarity_residual() < 1e-13);
    }

    #[test]
    fn multipartite_commutes() {
        let (states, u) = commuting_block_multipartite(&[&[2, 1], &[1, 1], &[3, 1]], 5).unwrap();
        let mut joint = states[0].matrix().clone();
        for s in &states[1..] {
            joint = joint.kron(s.matrix());
        }
        assert!(u.matrix().commutator(&joint).frobenius_norm() < 1e-12);
    }

    #[test]
    fn controlled_family_commutes_and_preserves_catalyst() {
        let tol = ToleranceSpec::default();
        let (oa, oc, ob, u) = controlled_commuting_dilation(&[2, 1], &[3, 1], &[2, 1], 9).unwrap();
        let joint = oa.matrix().kron(&oc.matrix().kron(ob.matrix()));
        assert!(u.matrix().commutator(&joint).frobenius_norm() < 1e-12);

        // C marginal preserved for an arbitrary system input
        let rho = crate::states::random_density(2, 123).unwrap();
        let input = rho.matrix().kron(&oc.matrix().kron(ob.matrix()));
        let out = u.matrix().conjugate_with(&input);
        let dims = FactoredDims::new(vec![2, 2, 2]).unwrap();
        let c_marg = crate::tensor::partial_trace(&out, &dims, &[1]).unwrap();
        assert!((&c_marg - oc.matrix()).residual_norm() < tol.abs_tol);
    }
}
