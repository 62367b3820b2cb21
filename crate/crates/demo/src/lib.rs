//! Browser bindings: every exported function takes plain numbers and returns
//! a JSON string that `www/index.html` draws on a canvas.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use tmanifold::harness::{run, split_indices, synth_gaussian_classes, RunConfig};
use tmanifold::manifold::Method;
use tmanifold::tensor::{identity_tensor, t_product, t_transpose};
use tmanifold::trace_ratio::{f_of_rho, initial_basis, newton_qr, random_normal_tensor, TraceRatioProblem};
use tmanifold::{Error, Result, Tensor3};
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
struct Point {
    x: f64,
    y: f64,
    label: usize,
    train: bool,
}

/// Tube means of the first two embedding coordinates (`n x d x n3`).
fn scatter(y: &Tensor3, labels: &[usize], train: &[usize]) -> Vec<Point> {
    let (n, d, n3) = y.shape();
    let mean = |i: usize, j: usize| (0..n3).map(|k| y.get(i, j, k)).sum::<f64>() / n3 as f64;
    let mut is_train = vec![false; n];
    for &i in train {
        is_train[i] = true;
    }
    (0..n)
        .map(|i| Point {
            x: mean(i, 0),
            y: if d > 1 { mean(i, 1) } else { 0.0 },
            label: labels[i],
            train: is_train[i],
        })
        .collect()
}

fn embed(config: RunConfig, classes: usize, per_class: usize, n3: usize, separation: f64) -> Result<Value> {
    if !(2..=6).contains(&classes) || per_class < 4 || per_class > 80 || n3 == 0 || n3 > 8 {
        return Err(Error::InvalidParameter(
            "demo limits: 2-6 classes, 4-80 samples per class, 1-8 slices".into(),
        ));
    }
    let ds = synth_gaussian_classes(classes, per_class, 8, n3, separation, config.seed);
    let report = run(&config, &ds, None)?;
    let labels = ds.labels.as_deref().expect("synthetic labels");
    let (train, _) = split_indices(ds.samples(), config.split_fraction, config.seed);
    Ok(json!({
        "method": config.method.name(),
        "points": scatter(&report.embedding, labels, &train),
        "accuracy": report.metrics.accuracy,
        "rho_star": report.metrics.rho_star,
        "iterations": report.metrics.iterations,
        "elapsed_ms": report.metrics.elapsed_ms,
    }))
}

pub fn mlde_scatter_value(classes: usize, per_class: usize, n3: usize, separation: f64, seed: u64) -> Result<Value> {
    let mut config = RunConfig::new(Method::Mlde, 2);
    config.k1 = Some(5.min(per_class - 1));
    config.k2 = Some(10);
    config.seed = seed;
    embed(config, classes, per_class, n3, separation)
}

pub fn mle_scatter_value(classes: usize, per_class: usize, n3: usize, k: usize, seed: u64) -> Result<Value> {
    let mut config = RunConfig::new(Method::Mle, 2);
    config.k = Some(k);
    config.seed = seed;
    embed(config, classes, per_class, n3, 6.0)
}

/// Newton iterates on a random well-conditioned problem plus samples of
/// `f(ρ)` around them for drawing the curve.
pub fn newton_trace_value(n: usize, d: usize, n3: usize, seed: u64) -> Result<Value> {
    if !(2..=16).contains(&n) || d == 0 || d >= n || n3 == 0 || n3 > 8 {
        return Err(Error::InvalidParameter("demo limits: 2 <= n <= 16, 1 <= d < n, 1-8 slices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_normal_tensor(n, n, n3, &mut rng);
    let a = g.add(&t_transpose(&g))?;
    let c = random_normal_tensor(n, n, n3, &mut rng);
    let b = t_product(&c, &t_transpose(&c))?.add(&identity_tensor(n, n3).scale(0.5))?.symmetrized()?;
    let p = TraceRatioProblem::new(a, b, d)?;
    let sol = newton_qr(&p, &initial_basis(n, d, n3, seed)?, 1e-12, 50)?;

    let rhos = &sol.trace.rho_history;
    let lo = rhos.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rhos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = 0.25 * (hi - lo).max(0.5);
    let curve = (0..=80)
        .map(|i| {
            let rho = lo - pad + (hi - lo + 2.0 * pad) * i as f64 / 80.0;
            f_of_rho(&p, rho).map(|e| [rho, e.value])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "rho_history": sol.trace.rho_history,
        "f_history": sol.trace.f_history,
        "iterations": sol.trace.iterations,
        "rho_star": sol.rho,
        "curve": curve,
    }))
}

fn to_js(v: Result<Value>) -> std::result::Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

/// MLDE projection of a synthetic Gaussian-classes dataset.
#[wasm_bindgen]
pub fn mlde_scatter(classes: usize, per_class: usize, n3: usize, separation: f64, seed: u32) -> std::result::Result<String, JsError> {
    to_js(mlde_scatter_value(classes, per_class, n3, separation, seed.into()))
}

/// MLE embedding of a synthetic Gaussian-classes dataset.
#[wasm_bindgen]
pub fn mle_scatter(classes: usize, per_class: usize, n3: usize, k: usize, seed: u32) -> std::result::Result<String, JsError> {
    to_js(mle_scatter_value(classes, per_class, n3, k, seed.into()))
}

#[wasm_bindgen]
pub fn newton_trace(n: usize, d: usize, n3: usize, seed: u32) -> std::result::Result<String, JsError> {
    to_js(newton_trace_value(n, d, n3, seed.into()))
}
