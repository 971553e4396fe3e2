//! Schur multipliers, their fermionic catalytic dilations, and the
//! factorizable decomposition with its non-extremality witness search.

use crate::channel::{
    channel_distance, channel_of_dilation, is_doubly_stochastic, ChannelChoi, Dilation,
};
use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ONE, ZERO};
use crate::report::VerificationReport;
use crate::spectral::hermitian_spectral;
use crate::states::{haar_random_unitary, pauli, DensityMatrix, ToleranceSpec, UnitaryMatrix};
use crate::verify::catalytic_check;

/// A real symmetric positive semidefinite matrix with unit diagonal; the
/// symbol of an entrywise-multiplication channel.
#[derive(Clone, Debug)]
pub struct SchurMatrix {
    n: usize,
    x: Vec<Vec<f64>>,
}

impl SchurMatrix {
    pub fn new(x: Vec<Vec<f64>>, tol: &ToleranceSpec) -> Result<Self> {
        let n = x.len();
        if n == 0 || x.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("Schur matrix must be square".into()));
        }
        if x.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(0));
        }
        let mut sym = 0f64;
        let mut diag = 0f64;
        for (i, row) in x.iter().enumerate() {
            diag = diag.max((row[i] - 1.0).abs());
            for (j, &v) in row.iter().enumerate() {
                sym = sym.max((v - x[j][i]).abs());
            }
        }
        if sym > tol.abs_tol {
            return Err(Error::NotHermitian {
                residual: sym,
                tol: tol.abs_tol,
            });
        }
        if diag > tol.abs_tol {
            return Err(Error::Invalid(format!(
                "Schur matrix diagonal deviates from 1 by {diag:.3e}"
            )));
        }
        let m = Self { n, x };
        let (eigs, _) = hermitian_spectral(&m.to_complex(), tol)?;
        let min_eig = eigs.last().copied().unwrap_or(0.0);
        if min_eig < -tol.abs_tol {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |i, j| C64::new(self.x[i][j], 0.0))
    }
}

/// Gram factorization X_ij = g_i · g_j with unit vectors g_i in rank d, plus
/// the diagonal coefficient matrices a_k with (a_k)_ii = (g_i)_k.
#[derive(Clone, Debug)]
pub struct GramFactorization {
    pub d: usize,
    pub g: Vec<Vec<f64>>,
    pub a: Vec<ComplexMatrix>,
    /// Largest renormalization applied to enforce unit length.
    pub renormalization: f64,
}

/// Spectral Gram factorization; rank threshold 1e-10 relative to the largest
/// eigenvalue. Vectors are renormalized to unit length; a deviation beyond
/// 1e-6 indicates the input violates its own unit-diagonal invariant.
pub fn gram_factorize(x: &SchurMatrix, tol: &ToleranceSpec) -> Result<GramFactorization> {
    let n = x.n();
    let (eigs, vecs) = hermitian_spectral(&x.to_complex(), tol)?;
    let lam_max = eigs.first().copied().unwrap_or(0.0).max(0.0);
    let kept: Vec<usize> = (0..n).filter(|&k| eigs[k] > 1e-10 * lam_max).collect();
    let d = kept.len();

    let mut g = vec![vec![0.0; d]; n];
    for (col, &k) in kept.iter().enumerate() {
        let s = eigs[k].sqrt();
        for i in 0..n {
            g[i][col] = s * vecs[(i, k)].re;
        }
    }
    let mut renorm = 0f64;
    for gi in &mut g {
        let len = gi.iter().map(|v| v * v).sum::<f64>().sqrt();
        renorm = renorm.max((len - 1.0).abs());
        for v in gi.iter_mut() {
            *v /= len;
        }
    }
    let a = (0..d)
        .map(|k| {
            ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(g[i][k], 0.0)
                } else {
                    ZERO
                }
            })
        })
        .collect();
    Ok(GramFactorization {
        d,
        g,
        a,
        renormalization: renorm,
    })
}

/// A set of pairwise anticommuting Hermitian unitaries on 2^d dimensions.
#[derive(Clone, Debug)]
pub struct MajoranaSet {
    pub d: usize,
    pub v: Vec<ComplexMatrix>,
}

/// Jordan-Wigner representation v_i = Z^{⊗(i−1)} ⊗ X ⊗ 1^{⊗(d−i)}.
pub fn majorana_ops(d: usize) -> Result<MajoranaSet> {
    if d == 0 {
        return Err(Error::Invalid("mode count must be positive".into()));
    }
    if d > 12 {
        return Err(Error::Resource(format!(
            "majorana representation dimension 2^{d} exceeds the 2^12 guard"
        )));
    }
    let (x, z) = (pauli('X'), pauli('Z'));
    let id = ComplexMatrix::identity(2);
    let mut v = Vec::with_capacity(d);
    for i in 1..=d {
        let mut m = ComplexMatrix::identity(1);
        for pos in 1..=d {
            let factor = if pos < i {
                &z
            } else if pos == i {
                &x
            } else {
                &id
            };
            m = m.kron(factor);
        }
        v.push(m);
    }
    Ok(MajoranaSet { d, v })
}

impl MajoranaSet {
    /// Max residual of the anticommutation relations and trace orthogonality.
    pub fn relation_residual(&self) -> f64 {
        let dim = 1usize << self.d;
        let two_id = ComplexMatrix::identity(dim).scale(C64::new(2.0, 0.0));
        let mut worst = 0f64;
        for i in 0..self.d {
            for j in 0..self.d {
                let anti = &(&self.v[i] * &self.v[j]) + &(&self.v[j] * &self.v[i]);
                let target = if i == j {
                    two_id.clone()
                } else {
                    ComplexMatrix::zeros(dim, dim)
                };
                worst = worst.max((&anti - &target).frobenius_norm());
                let tr = (&self.v[i] * &self.v[j]).trace();
                let expect = if i == j { dim as f64 } else { 0.0 };
                worst = worst.max((tr - C64::new(expect, 0.0)).norm());
            }
        }
        worst
    }
}

/// Choi matrix of entrywise multiplication by X in the computational basis.
pub fn schur_channel(x: &SchurMatrix) -> Result<ChannelChoi> {
    let n = x.n();
    ChannelChoi::from_action(n, n, |i, j| {
        let mut e = ComplexMatrix::zeros(n, n);
        e[(i, j)] = C64::new(x.entries()[i][j], 0.0);
        Ok(e)
    })
}

/// Build the fermionic catalytic dilation U = Σ_k a_k ⊗ v_k with maximally
/// mixed catalyst 1/2^d, and verify the construction end to end: the Gram
/// identity X_ij = 2^{−d} Tr(u_i u_j), channel agreement with the Schur
/// channel, catalytic invariance, and U self-adjoint unitary. Any residual
/// at or above tol is an internal-consistency failure, not an input error.
pub fn build_schur_dilation(
    x: &SchurMatrix,
    tol: &ToleranceSpec,
) -> Result<(Dilation, VerificationReport)> {
    let n = x.n();
    let gram = gram_factorize(x, tol)?;
    let maj = majorana_ops(gram.d)?;
    let dim_env = 1usize << gram.d;

    let mut u = ComplexMatrix::zeros(n * dim_env, n * dim_env);
    for k in 0..gram.d {
        u = &u + &gram.a[k].kron(&maj.v[k]);
    }

    let mut report = VerificationReport::new();
    report.info("gram_renormalization", gram.renormalization);
    if gram.renormalization > 1e-6 {
        report.gate("gram_renormalization_excess", gram.renormalization, 1e-6);
    }

    // block form U = Σ_i |i⟩⟨i| ⊗ u_i with u_i = Σ_k (g_i)_k v_k
    let mut gram_residual = 0f64;
    let blocks: Vec<ComplexMatrix> = (0..n)
        .map(|i| {
            let mut ui = ComplexMatrix::zeros(dim_env, dim_env);
            for k in 0..gram.d {
                ui = &ui + &maj.v[k].scale(C64::new(gram.g[i][k], 0.0));
            }
            ui
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            let tr = (&blocks[i] * &blocks[j]).trace() / C64::new(dim_env as f64, 0.0);
            gram_residual = gram_residual.max((tr - C64::new(x.entries()[i][j], 0.0)).norm());
        }
    }
    report.gate("gram_trace_identity_residual", gram_residual, tol.abs_tol);

    let self_adjoint = (&u - &u.adjoint()).frobenius_norm();
    let involution = (&(&u * &u) - &ComplexMatrix::identity(n * dim_env)).frobenius_norm();
    report.gate("self_adjoint_residual", self_adjoint, tol.abs_tol);
    report.gate("involution_residual", involution, tol.abs_tol);
    report.gate("unitarity_residual", u.unitarity_residual(), tol.abs_tol);

    let dil = Dilation::new(
        UnitaryMatrix::new_unchecked(u),
        DensityMatrix::maximally_mixed(dim_env),
        n,
    )?;
    let built = channel_of_dilation(&dil)?;
    let target = schur_channel(x)?;
    report.gate(
        "channel_agreement_residual",
        channel_distance(&built, &target)?,
        tol.abs_tol,
    );

    let cat = catalytic_check(&dil, tol)?;
    report.gate("catalytic_marginal_residual", cat.marginal_residual, tol.abs_tol);

    if !report.pass {
        let worst = report.worst().map(|c| c.value).unwrap_or(f64::NAN);
        return Err(Error::Internal {
            context: "schur dilation construction".into(),
            residual: worst,
        });
    }
    Ok((dil, report))
}

/// A seeded random unit-diagonal Gram matrix: X_ij = g_i · g_j for random
/// unit vectors g_i in dimension d.
pub fn random_schur(n: usize, d: usize, seed: u64, tol: &ToleranceSpec) -> Result<SchurMatrix> {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    if n == 0 || d == 0 {
        return Err(Error::Invalid("n and d must be positive".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= len;
        }
        g.push(v);
    }
    let x = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        1.0
                    } else {
                        g[i].iter().zip(&g[j]).map(|(a, b)| a * b).sum()
                    }
                })
                .collect()
        })
        .collect();
    SchurMatrix::new(x, tol)
}

/// Split a maximally-mixed-environment dilation into its per-basis-vector
/// component channels T_{|b_j⟩}(ρ) = Tr_env(U(ρ ⊗ |b_j⟩⟨b_j|)U†).
pub fn factorizable_decompose(
    dil: &Dilation,
    basis: &UnitaryMatrix,
    tol: &ToleranceSpec,
) -> Result<Vec<ChannelChoi>> {
    if basis.dim() != dil.dim_env {
        return Err(Error::Dimension("basis dim must match environment".into()));
    }
    let mm = DensityMatrix::maximally_mixed(dil.dim_env);
    let env_residual = (dil.omega_env.matrix() - mm.matrix()).residual_norm();
    if env_residual >= tol.abs_tol {
        return Err(Error::Invalid(format!(
            "environment deviates from maximally mixed by {env_residual:.3e}"
        )));
    }
    let (d_s, d_e) = (dil.dim_sys, dil.dim_env);
    let dims = dil.dims();
    let mut channels = Vec::with_capacity(d_e);
    for j in 0..d_e {
        let b: Vec<C64> = (0..d_e).map(|r| basis.matrix()[(r, j)]).collect();
        let proj = ComplexMatrix::outer(&b, &b);
        channels.push(ChannelChoi::from_action(d_s, d_s, |i, jj| {
            let mut e = ComplexMatrix::zeros(d_s, d_s);
            e[(i, jj)] = ONE;
            let joint = dil.u.matrix().conjugate_with(&e.kron(&proj));
            crate::tensor::partial_trace(&joint, &dims, &[0])
        })?);
    }
    Ok(channels)
}

/// A certified non-extremality witness: a basis whose component channels
/// differ, together with the convex decomposition.
#[derive(Debug)]
pub struct ExtremalityWitness {
    pub basis: UnitaryMatrix,
    pub trial: usize,
    pub indices: (usize, usize),
    pub distance: f64,
    pub components: Vec<ChannelChoi>,
}

/// One-sided non-extremality search over Haar-random environment bases.
/// Finding two distinct component channels certifies non-extremality in the
/// doubly-stochastic set; exhausting the trials proves nothing.
pub fn extremality_witness_search(
    dil: &Dilation,
    n_bases: usize,
    seed: u64,
    tol: &ToleranceSpec,
) -> Result<Option<ExtremalityWitness>> {
    let cat = catalytic_check(dil, tol)?;
    if !cat.pass {
        return Err(Error::NotCatalyticUnitary {
            residual: cat.marginal_residual,
        });
    }
    for trial in 0..n_bases {
        let basis = haar_random_unitary(
            dil.dim_env,
            seed.wrapping_add(trial as u64).wrapping_mul(0x9e3779b97f4a7c15),
        )?;
        let components = factorizable_decompose(dil, &basis, tol)?;
        let mut best: Option<(usize, usize, f64)> = None;
        for j in 0..components.len() {
            for k in (j + 1)..components.len() {
                let dist = channel_distance(&components[j], &components[k])?;
                if best.map(|(_, _, d)| dist > d).unwrap_or(true) {
                    best = Some((j, k, dist));
                }
            }
        }
        if let Some((j, k, dist)) = best {
            if dist > tol.abs_tol {
                return Ok(Some(ExtremalityWitness {
                    basis,
                    trial,
                    indices: (j, k),
                    distance: dist,
                    components,
                }));
            }
        }
    }
    Ok(None)
}

/// Sanity bundle for a decomposition: average reconstruction and per-
/// component double stochasticity (the latter only meaningful for catalytic
/// dilations).
pub fn decomposition_report(
    dil: &Dilation,
    components: &[ChannelChoi],
    tol: &ToleranceSpec,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    let original = channel_of_dilation(dil)?;
    let weight = 1.0 / components.len() as f64;
    let mut avg = ComplexMatrix::zeros(original.choi.rows(), original.choi.cols());
    for c in components {
        avg = &avg + &c.choi.scale(C64::new(weight, 0.0));
    }
    let avg = ChannelChoi::new(original.dim_in, original.dim_out, avg)?;
    report.gate(
        "average_reconstruction_residual",
        channel_distance(&avg, &original)?,
        tol.abs_tol,
    );
    for (j, c) in components.iter().enumerate() {
        let ds = is_doubly_stochastic(c, 1e-8)?;
        report.gate(
            &format!("component_{j}_unital_residual"),
            ds.worst().map(|w| w.value).unwrap_or(0.0),
            1e-8,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply, dephasing_channel};
    use crate::states::{cnot, random_density, swap};
    use crate::verify::structural_catalytic_check;

    fn tol() -> ToleranceSpec {
        ToleranceSpec::default()
    }

    fn ones_matrix(n: usize) -> SchurMatrix {
        SchurMatrix::new(vec![vec![1.0; n]; n], &tol()).unwrap()
    }

    fn identity_schur(n: usize) -> SchurMatrix {
        let x = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        SchurMatrix::new(x, &tol()).unwrap()
    }

    #[test]
    fn schur_matrix_validation() {
        let t = tol();
        assert!(SchurMatrix::new(vec![vec![1.0, 0.5], vec![0.5, 1.0]], &t).is_ok());
        // diagonal must be 1
        assert!(SchurMatrix::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]], &t).is_err());
        // symmetric
        assert!(SchurMatrix::new(vec![vec![1.0, 0.3], vec![0.4, 1.0]], &t).is_err());
        // PSD: [[1, 2],[2, 1]] has eigenvalue -1
        assert!(matches!(
            SchurMatrix::new(vec![vec![1.0, 2.0], vec![2.0, 1.0]], &t),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn schur_channel_anchors() {
        let t = tol();
        // all-ones is the identity channel
        let ch = schur_channel(&ones_matrix(3)).unwrap();
        assert!(channel_distance(&ch, &ChannelChoi::identity(3)).unwrap() < 1e-14);
        // the identity matrix is complete dephasing
        let ch = schur_channel(&identity_schur(2)).unwrap();
        assert!(channel_distance(&ch, &dephasing_channel(2)).unwrap() < 1e-14);
        // X_ij = <i|T(|i><j|)|j>
        let x = random_schur(4, 3, 42, &t).unwrap();
        let ch = schur_channel(&x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut e = ComplexMatrix::zeros(4, 4);
                e[(i, j)] = ONE;
                let out = ch.act(&e).unwrap();
                assert!((out[(i, j)] - C64::new(x.entries()[i][j], 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_factorize_anchors() {
        let t = tol();
        let f = gram_factorize(&identity_schur(2), &t).unwrap();
        assert_eq!(f.d, 2);
        let dot: f64 = f.g[0].iter().zip(&f.g[1]).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-12);

        let f = gram_factorize(&ones_matrix(3), &t).unwrap();
        assert_eq!(f.d, 1);
        assert!((f.g[0][0] - f.g[1][0]).abs() < 1e-12);

        let x = SchurMatrix::new(vec![vec![1.0, 0.5], vec![0.5, 1.0]], &t).unwrap();
        let f = gram_factorize(&x, &t).unwrap();
        assert_eq!(f.d, 2);
        let dot: f64 = f.g[0].iter().zip(&f.g[1]).map(|(a, b)| a * b).sum();
        assert!((dot - 0.5).abs() < 1e-12);
        // sum of squares of the diagonal coefficient matrices is the identity
        let mut s = ComplexMatrix::zeros(2, 2);
        for a in &f.a {
            s = &s + &(a * a);
        }
        assert!((&s - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn majorana_anchors() {
        let m = majorana_ops(1).unwrap();
        assert!((&m.v[0] - &pauli('X')).frobenius_norm() < 1e-15);

        let m = majorana_ops(2).unwrap();
        assert!((&m.v[0] - &pauli('X').kron(&ComplexMatrix::identity(2))).frobenius_norm() < 1e-15);
        assert!((&m.v[1] - &pauli('Z').kron(&pauli('X'))).frobenius_norm() < 1e-15);
        let anti = &(&m.v[0] * &m.v[1]) + &(&m.v[1] * &m.v[0]);
        assert!(anti.frobenius_norm() < 1e-15);

        for d in [3, 6] {
            assert!(majorana_ops(d).unwrap().relation_residual() < 1e-12);
        }
        assert!(matches!(majorana_ops(13), Err(Error::Resource(_))));
    }

    #[test]
    fn build_anchors() {
        let t = tol();
        // all-ones: d = 1, U = 1_n kron PauliX, identity channel
        let (dil, rep) = build_schur_dilation(&ones_matrix(3), &t).unwrap();
        assert!(rep.pass);
        assert_eq!(dil.dim_env, 2);
        let expect = ComplexMatrix::identity(3).kron(&pauli('X'));
        assert!((dil.u.matrix() - &expect).frobenius_norm() < 1e-12);

        // identity n = 2: 4-dim catalyst, complete dephasing
        let (dil, rep) = build_schur_dilation(&identity_schur(2), &t).unwrap();
        assert!(rep.pass);
        assert_eq!(dil.dim_env, 4);
        let ch = channel_of_dilation(&dil).unwrap();
        assert!(channel_distance(&ch, &dephasing_channel(2)).unwrap() < 1e-10);

        // the half-overlap case: u1 = v1, u2 = v1/2 + sqrt(3)/2 v2
        let x = SchurMatrix::new(vec![vec![1.0, 0.5], vec![0.5, 1.0]], &t).unwrap();
        let (dil, rep) = build_schur_dilation(&x, &t).unwrap();
        assert!(rep.pass);
        assert!(rep.residual("gram_trace_identity_residual").unwrap() < 1e-12);
        // U is self-adjoint and squares to 1
        assert!((dil.u.matrix() - &dil.u.matrix().adjoint()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn built_dilations_are_structurally_catalytic() {
        let t = tol();
        for seed in 0..6 {
            let x = random_schur(3, 2, 100 + seed, &t).unwrap();
            let (dil, rep) = build_schur_dilation(&x, &t).unwrap();
            assert!(rep.pass);
            let s = structural_catalytic_check(&dil, &t).unwrap();
            assert!(s.0.pass, "{s:?}");
        }
    }

    #[test]
    fn factorizable_cnot_bases() {
        let t = tol();
        let dil = Dilation::new(
            UnitaryMatrix::new_unchecked(cnot()),
            DensityMatrix::maximally_mixed(2),
            2,
        )
        .unwrap();
        // computational basis: both components dephase
        let comps = factorizable_decompose(&dil, &UnitaryMatrix::identity(2), &t).unwrap();
        for c in &comps {
            assert!(channel_distance(c, &dephasing_channel(2)).unwrap() < 1e-12);
        }
        // {|+>, |->} basis: identity and Z-conjugation
        let h = 1.0 / 2f64.sqrt();
        let had = UnitaryMatrix::new_unchecked(ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(-h, 0.0),
            ],
        )
        .unwrap());
        let comps = factorizable_decompose(&dil, &had, &t).unwrap();
        assert!(channel_distance(&comps[0], &ChannelChoi::identity(2)).unwrap() < 1e-12);
        let z_conj = ChannelChoi::from_action(2, 2, |i, j| {
            let mut e = ComplexMatrix::zeros(2, 2);
            e[(i, j)] = ONE;
            Ok(pauli('Z').conjugate_with(&e))
        })
        .unwrap();
        assert!(channel_distance(&comps[1], &z_conj).unwrap() < 1e-12);
        let rep = decomposition_report(&dil, &comps, &t).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn factorizable_swap_not_doubly_stochastic() {
        let t = tol();
        let dil = Dilation::new(
            UnitaryMatrix::new_unchecked(swap(2)),
            DensityMatrix::maximally_mixed(2),
            2,
        )
        .unwrap();
        let comps = factorizable_decompose(&dil, &UnitaryMatrix::identity(2), &t).unwrap();
        // T_{|j>}(rho) = |j><j| Tr(rho); unit image is 2|j><j|
        for (j, c) in comps.iter().enumerate() {
            let rho = random_density(2, 55 + j as u64).unwrap();
            let out = c.act(rho.matrix()).unwrap();
            let mut proj = ComplexMatrix::zeros(2, 2);
            proj[(j, j)] = ONE;
            assert!((&out - &proj).frobenius_norm() < 1e-12);
            assert!(!is_doubly_stochastic(c, 1e-8).unwrap().pass);
        }
        // non-maximally-mixed environment rejected
        let bad = Dilation::new(
            UnitaryMatrix::new_unchecked(swap(2)),
            DensityMatrix::from_probabilities(&[0.7, 0.3]).unwrap(),
            2,
        )
        .unwrap();
        assert!(factorizable_decompose(&bad, &UnitaryMatrix::identity(2), &t).is_err());
    }

    #[test]
    fn extremality_search_anchors() {
        let t = tol();
        let dil = Dilation::new(
            UnitaryMatrix::new_unchecked(cnot()),
            DensityMatrix::maximally_mixed(2),
            2,
        )
        .unwrap();
        let w = extremality_witness_search(&dil, 32, 0, &t).unwrap().unwrap();
        assert!(w.distance > 1e-3);

        // product unitary: every component equals conjugation by W
        let wl = haar_random_unitary(2, 9).unwrap();
        let vr = haar_random_unitary(2, 10).unwrap();
        let prod = Dilation::new(
            UnitaryMatrix::new_unchecked(wl.matrix().kron(vr.matrix())),
            DensityMatrix::maximally_mixed(2),
            2,
        )
        .unwrap();
        assert!(extremality_witness_search(&prod, 8, 1, &t).unwrap().is_none());

        // Schur dephasing dilation is not extremal
        let (dep, _) = build_schur_dilation(&identity_schur(2), &t).unwrap();
        assert!(extremality_witness_search(&dep, 32, 2, &t).unwrap().is_some());

        // non-catalytic input rejected
        let sw = Dilation::new(
            UnitaryMatrix::new_unchecked(swap(2)),
            DensityMatrix::maximally_mixed(2),
            2,
        )
        .unwrap();
        assert!(matches!(
            extremality_witness_search(&sw, 4, 3, &t),
            Err(Error::NotCatalyticUnitary { .. })
        ));
    }

    #[test]
    fn random_schur_channels_contract_offdiagonals() {
        let t = tol();
        let x = random_schur(3, 2, 7, &t).unwrap();
        let ch = schur_channel(&x).unwrap();
        let rho = random_density(3, 8).unwrap();
        let out = apply(&ch, &rho).unwrap();
        for i in 0..3 {
            // diagonal preserved
            assert!((out.matrix()[(i, i)] - rho.matrix()[(i, i)]).norm() < 1e-12);
        }
    }
}
