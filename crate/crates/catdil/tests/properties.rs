//! Property-based invariants for the tensor and entropy layers.

use catdil::entropy::{mutual_information, von_neumann_entropy};
use catdil::matrix::{C64, ComplexMatrix};
use catdil::states::{haar_random_unitary, random_density, DensityMatrix, ToleranceSpec};
use catdil::tensor::{partial_trace, partial_transpose, reshuffle, FactoredDims};
use proptest::prelude::*;

fn tol() -> ToleranceSpec {
    ToleranceSpec::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn partial_trace_preserves_trace(seed in 0u64..10_000, da in 2usize..4, db in 2usize..4) {
        let rho = random_density(da * db, seed).unwrap();
        let dims = FactoredDims::new(vec![da, db]).unwrap();
        for keep in [&[0usize][..], &[1][..]] {
            let marg = partial_trace(rho.matrix(), &dims, keep).unwrap();
            prop_assert!((marg.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            prop_assert!(marg.hermiticity_residual() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product_factors(seed in 0u64..10_000, da in 2usize..4, db in 2usize..4) {
        let a = random_density(da, seed).unwrap();
        let b = random_density(db, seed.wrapping_add(7)).unwrap();
        let joint = a.matrix().kron(b.matrix());
        let dims = FactoredDims::new(vec![da, db]).unwrap();
        let ma = partial_trace(&joint, &dims, &[0]).unwrap();
        let mb = partial_trace(&joint, &dims, &[1]).unwrap();
        prop_assert!((&ma - a.matrix()).frobenius_norm() < 1e-12);
        prop_assert!((&mb - b.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn tensor_rearrangements_are_involutions(seed in 0u64..10_000, d in 2usize..4) {
        let u = haar_random_unitary(d * d, seed).unwrap();
        let dims = FactoredDims::new(vec![d, d]).unwrap();
        let m = u.matrix();
        let pt = partial_transpose(m, &dims, 0).unwrap();
        let ptpt = partial_transpose(&pt, &dims, 0).unwrap();
        prop_assert!((&ptpt - m).frobenius_norm() == 0.0);
        let r = reshuffle(m, &dims).unwrap();
        let rr = reshuffle(&r, &dims).unwrap();
        prop_assert!((&rr - m).frobenius_norm() == 0.0);
    }

    #[test]
    fn mutual_information_vanishes_iff_product(seed in 0u64..10_000, da in 2usize..4, db in 2usize..4) {
        let t = tol();
        let dims = FactoredDims::new(vec![da, db]).unwrap();
        // product direction: exactly zero mutual information
        let a = random_density(da, seed).unwrap();
        let b = random_density(db, seed.wrapping_add(11)).unwrap();
        let prod = DensityMatrix::new(a.matrix().kron(b.matrix()), &t).unwrap();
        prop_assert!(mutual_information(&prod, &dims, &t).unwrap().abs() < 1e-10);
        // generic correlated direction: strictly positive
        let rho = random_density(da * db, seed.wrapping_add(23)).unwrap();
        let mi = mutual_information(&rho, &dims, &t).unwrap();
        let ma = DensityMatrix::new(partial_trace(rho.matrix(), &dims, &[0]).unwrap(), &t).unwrap();
        let mb = DensityMatrix::new(partial_trace(rho.matrix(), &dims, &[1]).unwrap(), &t).unwrap();
        let product_residual = (rho.matrix() - &ma.matrix().kron(mb.matrix())).frobenius_norm();
        // zero mutual information must coincide with a product state
        if mi.abs() < 1e-10 {
            prop_assert!(product_residual < 1e-5);
        }
        if product_residual > 1e-3 {
            prop_assert!(mi > 1e-8);
        }
    }

    #[test]
    fn entropy_bounds(seed in 0u64..10_000, d in 2usize..6) {
        let t = tol();
        let rho = random_density(d, seed).unwrap();
        let s = von_neumann_entropy(&rho, &t).unwrap();
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= (d as f64).ln() + 1e-12);
        // unitary invariance
        let u = haar_random_unitary(d, seed.wrapping_add(3)).unwrap();
        let rotated = DensityMatrix::new(u.matrix().conjugate_with(rho.matrix()), &t).unwrap();
        let s2 = von_neumann_entropy(&rotated, &t).unwrap();
        prop_assert!((s - s2).abs() < 1e-9);
    }

    #[test]
    fn mutual_information_nonnegative_and_bounded(seed in 0u64..10_000, d in 2usize..4) {
        let t = tol();
        let dims = FactoredDims::new(vec![d, d]).unwrap();
        let rho = random_density(d * d, seed).unwrap();
        let mi = mutual_information(&rho, &dims, &t).unwrap();
        prop_assert!(mi >= -1e-9);
        prop_assert!(mi <= 2.0 * (d as f64).ln() + 1e-9);
    }
}

#[test]
fn subadditivity_of_entropy() {
    let t = tol();
    let dims = FactoredDims::new(vec![3, 2]).unwrap();
    for seed in 0..30 {
        let rho = random_density(6, seed).unwrap();
        let s_ab = von_neumann_entropy(&rho, &t).unwrap();
        let sa = von_neumann_entropy(
            &DensityMatrix::new(partial_trace(rho.matrix(), &dims, &[0]).unwrap(), &t).unwrap(),
            &t,
        )
        .unwrap();
        let sb = von_neumann_entropy(
            &DensityMatrix::new(partial_trace(rho.matrix(), &dims, &[1]).unwrap(), &t).unwrap(),
            &t,
        )
        .unwrap();
        assert!(s_ab <= sa + sb + 1e-9);
        assert!(s_ab >= (sa - sb).abs() - 1e-9);
    }
}

#[test]
fn kron_respects_trace_and_norm() {
    for seed in 0..20 {
        let a = random_density(3, seed).unwrap();
        let b = random_density(2, seed + 50).unwrap();
        let k = a.matrix().kron(b.matrix());
        assert!((k.trace() - a.matrix().trace() * b.matrix().trace()).norm() < 1e-12);
        let expect = a.matrix().frobenius_norm() * b.matrix().frobenius_norm();
        assert!((k.frobenius_norm() - expect).abs() < 1e-12);
    }
}

#[test]
fn reshuffle_transposes_blocks_consistently() {
    // R(A kron B) has entries A_ij B_kl arranged as |i k><j l| -> |i j><k l|;
    // check against the direct formula on a random product
    let a = ComplexMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, 1.0));
    let b = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(0.5 * i as f64, j as f64));
    let k = a.kron(&b);
    let dims = FactoredDims::new(vec![2, 2]).unwrap();
    let r = reshuffle(&k, &dims).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            for kk in 0..2 {
                for l in 0..2 {
                    let expect = a[(i, kk)] * b[(j, l)];
                    assert!((r[(2 * i + kk, 2 * j + l)] - expect).norm() == 0.0);
                }
            }
        }
    }
}
