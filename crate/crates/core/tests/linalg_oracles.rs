use nalgebra::DMatrix;
use proptest::prelude::*;
use tensorlab_core::linalg::{orthonormality_defect, procrustes_rotation, symmetric_eigen, vector_alignment};
use tensorlab_core::rng::Rng;
use tensorlab_core::{
    dominant_left_subspace, full_gram_spectrum, haar_basis, mean_alignment, orthonormalize, principal_angles, Matrix,
};

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.standard_normal())
}

fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

#[test]
fn left_subspace_agrees_with_svd_oracle() {
    let mut rng = Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let m = gaussian_matrix(5, 40, &mut rng);
        let svd = to_na(&m).svd(true, false);
        let mut sv: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..).collect();
        sv.sort_by(|a, b| b.0.total_cmp(&a.0));
        let u = svd.u.unwrap();

        for r in 1..=5 {
            let res = dominant_left_subspace(&m, r).unwrap();
            for (q, val) in res.values.iter().enumerate() {
                let want = sv[q].0 * sv[q].0;
                assert!((val - want).abs() <= 1e-9 * want, "{val} vs {want}");
            }
            // Projectors agree (individual vectors are only defined up to sign).
            let mut oracle = DMatrix::<f64>::zeros(5, 5);
            for &(_, idx) in &sv[..r] {
                let c = u.column(idx);
                oracle += c * c.transpose();
            }
            let ours = to_na(&res.basis.projector());
            assert!((ours - oracle).abs().max() < 1e-9);
            assert!(orthonormality_defect(res.basis.matrix()) < 1e-12);

            // Eigen-residual: ‖M Mᵀ u − λ u‖ small relative to λ.
            let g = m.gram();
            let b = res.basis.matrix();
            for q in 0..r {
                let resid: f64 = (0..5)
                    .map(|i| {
                        let gu: f64 = (0..5).map(|j| g[(i, j)] * b[(j, q)]).sum();
                        (gu - res.values[q] * b[(i, q)]).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                assert!(resid <= 1e-10 * res.values[0]);
            }
        }
    }
}

#[test]
fn symmetric_eigen_agrees_with_oracle() {
    let mut rng = Rng::seed_from_u64(5);
    for n in [1usize, 2, 7, 30] {
        let a = gaussian_matrix(n, n, &mut rng);
        let s = Matrix::from_fn(n, n, |i, j| a[(i, j)] + a[(j, i)]);
        let (vals, vecs) = symmetric_eigen(&s).unwrap();
        let mut want: Vec<f64> = to_na(&s).symmetric_eigenvalues().iter().copied().collect();
        want.sort_by(|x, y| y.total_cmp(x));
        for (v, w) in vals.iter().zip(&want) {
            assert!((v - w).abs() < 1e-10 * (1.0 + w.abs()));
        }
        let recon = vecs
            .matmul(&Matrix::from_fn(n, n, |i, j| if i == j { vals[i] } else { 0.0 }))
            .unwrap()
            .matmul_t(&vecs)
            .unwrap();
        assert!(recon.sub(&s).unwrap().max_abs() < 1e-10 * (1.0 + want[0].abs()));
    }
}

#[test]
fn full_spectrum_sums_to_squared_norm() {
    let m = gaussian_matrix(12, 30, &mut Rng::seed_from_u64(9));
    let res = full_gram_spectrum(&m).unwrap();
    let total: f64 = res.values.iter().sum();
    assert!((total - m.frob_norm().powi(2)).abs() < 1e-10 * total);
    assert!(res.values.windows(2).all(|w| w[0] >= w[1]));
}

/// Classical Gram–Schmidt, written independently of the Householder path.
fn gram_schmidt(m: &Matrix) -> Matrix {
    let (n, r) = m.shape();
    let mut q = Matrix::zeros(n, r);
    for j in 0..r {
        let mut v = m.column(j);
        for p in 0..j {
            let dot: f64 = (0..n).map(|i| q[(i, p)] * m[(i, j)]).sum();
            for i in 0..n {
                v[i] -= dot * q[(i, p)];
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] = v[i] / norm;
        }
    }
    q
}

#[test]
fn orthonormalize_matches_gram_schmidt() {
    let mut rng = Rng::seed_from_u64(31);
    for (n, r) in [(6, 1), (6, 3), (10, 10), (40, 5)] {
        let m = gaussian_matrix(n, r, &mut rng);
        let q = orthonormalize(&m).unwrap();
        let oracle = gram_schmidt(&m);
        assert!(q.matrix().sub(&oracle).unwrap().max_abs() < 1e-10);
        // span(Q) = span(M): the projector onto Q fixes every column of M.
        let back = q.projector().matmul(&m).unwrap();
        assert!(back.sub(&m).unwrap().max_abs() < 1e-10 * m.max_abs());
    }
}

fn best_pair(m: &Matrix, steps: usize) -> (f64, f64, f64) {
    // max over unit a, b ∈ ℝ² of aᵀ M b, by exhaustive search over both angles.
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..steps {
        let alpha = std::f64::consts::PI * i as f64 / steps as f64;
        let (sa, ca) = alpha.sin_cos();
        for j in 0..2 * steps {
            let beta = std::f64::consts::PI * j as f64 / steps as f64;
            let (sb, cb) = beta.sin_cos();
            let v = ca * (m[(0, 0)] * cb + m[(0, 1)] * sb) + sa * (m[(1, 0)] * cb + m[(1, 1)] * sb);
            if v > best.0 {
                best = (v, alpha, beta);
            }
        }
    }
    best
}

#[test]
fn principal_angles_match_variational_oracle() {
    let mut rng = Rng::seed_from_u64(71);
    for _ in 0..5 {
        let x = haar_basis(5, 2, &mut rng).unwrap();
        let u = haar_basis(5, 2, &mut rng).unwrap();
        let m = x.matrix().t_matmul(u.matrix()).unwrap();
        let (c1, alpha, beta) = best_pair(&m, 1500);
        // Second angle: the directions orthogonal (within each plane) to the first maximizers.
        let (a2, b2) = ([-alpha.sin(), alpha.cos()], [-beta.sin(), beta.cos()]);
        let c2 = (0..2).map(|i| (0..2).map(|j| a2[i] * m[(i, j)] * b2[j]).sum::<f64>()).sum::<f64>().abs();
        let got = principal_angles(&x, &u).unwrap();
        assert!((got[0] - c1.clamp(-1.0, 1.0).acos()).abs() < 1e-3);
        assert!((got[1] - c2.clamp(-1.0, 1.0).acos()).abs() < 1e-3);
    }
}

#[test]
fn principal_angles_of_nested_and_orthogonal_spaces() {
    let e = |idx: &[usize]| {
        tensorlab_core::OrthonormalBasis::new(Matrix::from_fn(5, idx.len(), |i, j| if i == idx[j] { 1.0 } else { 0.0 }))
            .unwrap()
    };
    let a = principal_angles(&e(&[0, 1]), &e(&[1, 0])).unwrap();
    assert!(a.iter().all(|t| t.abs() < 1e-7));
    let b = principal_angles(&e(&[0, 1]), &e(&[2, 3])).unwrap();
    assert!(b.iter().all(|t| (t - std::f64::consts::FRAC_PI_2).abs() < 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alignment_is_mean_squared_cosine(seed in any::<u64>(), n in 3usize..12, r in 1usize..4) {
        prop_assume!(r <= n);
        let mut rng = Rng::seed_from_u64(seed);
        let x = haar_basis(n, r, &mut rng).unwrap();
        let u = haar_basis(n, r, &mut rng).unwrap();
        let angles = principal_angles(&x, &u).unwrap();
        let via_angles = angles.iter().map(|t| t.cos().powi(2)).sum::<f64>() / r as f64;
        let a = mean_alignment(&x, &u).unwrap();
        prop_assert!((a - via_angles).abs() < 1e-10);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
        // Symmetric in its arguments.
        prop_assert!((a - mean_alignment(&u, &x).unwrap()).abs() < 1e-12);
        // Sum of per-column alignments.
        let per_col: f64 = (0..r).map(|q| vector_alignment(&x, &u.matrix().column(q)).unwrap()).sum::<f64>() / r as f64;
        prop_assert!((a - per_col).abs() < 1e-10);
    }

    #[test]
    fn alignment_is_rotation_invariant(seed in any::<u64>(), n in 3usize..10, r in 1usize..4) {
        prop_assume!(r <= n);
        let mut rng = Rng::seed_from_u64(seed);
        let x = haar_basis(n, r, &mut rng).unwrap();
        let u = haar_basis(n, r, &mut rng).unwrap();
        let o1 = haar_basis(r, r, &mut rng).unwrap();
        let o2 = haar_basis(r, r, &mut rng).unwrap();
        let base = mean_alignment(&x, &u).unwrap();
        let rotated = mean_alignment(&x.rotate(o1.matrix()).unwrap(), &u.rotate(o2.matrix()).unwrap()).unwrap();
        prop_assert!((base - rotated).abs() < 1e-12);
        // A common ambient rotation also leaves it unchanged.
        let q = haar_basis(n, n, &mut rng).unwrap().into_matrix();
        let qx = tensorlab_core::OrthonormalBasis::new(q.matmul(x.matrix()).unwrap()).unwrap();
        let qu = tensorlab_core::OrthonormalBasis::new(q.matmul(u.matrix()).unwrap()).unwrap();
        prop_assert!((base - mean_alignment(&qx, &qu).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn procrustes_recovers_rotation(seed in any::<u64>(), r in 1usize..6) {
        let o = haar_basis(r, r, &mut Rng::seed_from_u64(seed)).unwrap().into_matrix();
        let got = procrustes_rotation(&o).unwrap();
        prop_assert!(got.sub(&o).unwrap().max_abs() < 1e-10);
    }
}
