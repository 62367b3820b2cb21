//! Quick numerical self-checks against the block-circulant oracle and the
//! plain-matrix reference methods.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tmanifold::graph::WeightRule;
use tmanifold::manifold::{lme_fit, mlde_fit, mle_fit, LmeParams, MldeParams, MleParams};
use tmanifold::tensor::{bcirc_oracle, t_product};
use tmanifold::trace_ratio::random_normal_tensor;
use tmanifold::Tensor3;
use tmanifold_reference as reference;

fn report(name: &str, ok: bool, detail: String) -> bool {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn oracle_equivalence() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n3 = [1, 2, 3, 4, 5, 8][rng.random_range(0..6)];
        let (n1, n2, m) = (rng.random_range(1..=8), rng.random_range(1..=8), rng.random_range(1..=8));
        let a = random_normal_tensor(n1, n2, n3, &mut rng);
        let b = random_normal_tensor(n2, m, n3, &mut rng);
        let fast = t_product(&a, &b).expect("conformable");
        let slow = bcirc_oracle(&a, &b).expect("small");
        worst = worst.max(fast.sub(&slow).expect("same shape").frobenius_norm() / slow.frobenius_norm().max(1e-300));
    }
    report(
        "t-product vs block-circulant oracle (200 pairs)",
        worst <= 1e-12,
        format!("max relative error {worst:.2e} in {:.0} ms", start.elapsed().as_secs_f64() * 1e3),
    )
}

fn single_slice(m: &DMatrix<f64>) -> Tensor3 {
    Tensor3::from_frontal_slices(std::slice::from_ref(m)).expect("finite matrix")
}

fn gaussian(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let t = random_normal_tensor(rows, cols, 1, &mut ChaCha8Rng::seed_from_u64(seed));
    t.frontal(0)
}

fn matrix_degeneration() -> bool {
    let mut ok = true;

    let (p, n) = (6, 36);
    let labels: Vec<usize> = (0..n).map(|j| 1 + j % 3).collect();
    let mut x = gaussian(p, n, 1);
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
        seed: 1,
    };
    let dist = match mlde_fit(&single_slice(&x), &labels, &params) {
        Ok(m) => reference::projector_distance(&m.v.frontal(0), &reference::lde(&x, &labels, 2, 4, 6, Some(8.0)).0),
        Err(_) => f64::INFINITY,
    };
    ok &= report("MLDE at n3 = 1 vs matrix LDE", dist <= 1e-5, format!("projector distance {dist:.2e}"));

    let x = gaussian(40, 3, 4);
    let params = MleParams {
        d: 2,
        k: 6,
        weight: WeightRule::HeatKernel { t: Some(2.0) },
    };
    let dist = match mle_fit(&single_slice(&x), &params) {
        Ok(e) => reference::projector_distance(&e.y.frontal(0), &reference::laplacian_eigenmaps(&x, 2, 6, Some(2.0))),
        Err(_) => f64::INFINITY,
    };
    ok &= report("MLE at n3 = 1 vs Laplacian eigenmaps", dist <= 1e-5, format!("projector distance {dist:.2e}"));

    let x = reference::s_curve(200);
    let dist = match lme_fit(&single_slice(&x), &LmeParams { d: 2, k: 10, reg_eps: 1e-3 }) {
        Ok(e) => reference::projector_distance(&e.y.frontal(0), &reference::lle(&x, 2, 10, 1e-3)),
        Err(_) => f64::INFINITY,
    };
    ok &= report("LME at n3 = 1 vs LLE (S-curve)", dist <= 1e-5, format!("projector distance {dist:.2e}"));
    ok
}

pub fn run_all() -> bool {
    let a = oracle_equivalence();
    let b = matrix_degeneration();
    a && b
}
