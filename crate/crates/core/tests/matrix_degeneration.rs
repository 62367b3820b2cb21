//! With a single frontal slice every tensor method must agree with its
//! plain-matrix counterpart up to the spanned subspace.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use tmanifold::graph::WeightRule;
use tmanifold::manifold::{lme_fit, mlde_fit, mle_fit, LmeParams, MldeParams, MleParams};
use tmanifold::Tensor3;
use tmanifold_reference as reference;

const TOL: f64 = 1e-5;

fn gaussian(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
}

fn tensor(m: &DMatrix<f64>) -> Tensor3 {
    Tensor3::from_frontal_slices(std::slice::from_ref(m)).unwrap()
}

#[test]
fn mlde_matches_matrix_lde() {
    for seed in [1u64, 2, 3] {
        let (p, n) = (6, 36);
        let labels: Vec<usize> = (0..n).map(|j| 1 + j % 3).collect();
        let mut x = gaussian(p, n, seed);
        for j in 0..n {
            x[(labels[j] - 1, j)] += 3.0;
        }
        let params = MldeParams {
            d: 2,
            k1: 4,
            k2: 6,
            weight: WeightRule::HeatKernel { t: Some(8.0) },
            eps: 1e-12,
            max_iter: 200,
            seed,
        };
        let model = mlde_fit(&tensor(&x), &labels, &params).unwrap();
        let (v_ref, rho_ref) = reference::lde(&x, &labels, 2, 4, 6, Some(8.0));
        let dist = reference::projector_distance(&model.v.frontal(0), &v_ref);
        assert!(dist <= TOL, "seed {seed}: projector distance {dist}");
        assert!((model.rho_star - rho_ref).abs() <= 1e-8 * rho_ref.abs());
    }
}

#[test]
fn mle_matches_laplacian_eigenmaps() {
    for seed in [4u64, 5, 6] {
        let x = gaussian(40, 3, seed);
        let params = MleParams {
            d: 2,
            k: 6,
            weight: WeightRule::HeatKernel { t: Some(2.0) },
        };
        let e = mle_fit(&tensor(&x), &params).unwrap();
        let y_ref = reference::laplacian_eigenmaps(&x, 2, 6, Some(2.0));
        let dist = reference::projector_distance(&e.y.frontal(0), &y_ref);
        assert!(dist <= TOL, "seed {seed}: projector distance {dist}");
    }
}

#[test]
fn lme_matches_lle_on_s_curve() {
    let base = reference::s_curve(200);
    for seed in [0u64, 7, 8] {
        let x = if seed == 0 {
            base.clone()
        } else {
            &base + gaussian(200, 3, seed) * 0.01
        };
        let e = lme_fit(&tensor(&x), &LmeParams { d: 2, k: 10, reg_eps: 1e-3 }).unwrap();
        let y_ref = reference::lle(&x, 2, 10, 1e-3);
        let dist = reference::projector_distance(&e.y.frontal(0), &y_ref);
        assert!(dist <= TOL, "seed {seed}: projector distance {dist}");
    }
}

