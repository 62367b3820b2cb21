use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::eval::{evaluate_1nn, split_indices};
use crate::error::{Error, Result};
use crate::graph::{build_graphs, GraphSpec, WeightRule};
use crate::manifold::{
    constraint_error, lme_fit, mlde_fit, mlde_project, mle_fit, LmeParams, Method, MldeParams, MleParams,
};
use crate::tensor::{write_t3b, Tensor3};
use crate::trace_ratio::SolverTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: Method,
    pub d: usize,
    /// Neighborhood size for MLE and LME.
    pub k: Option<usize>,
    /// Within-class neighborhood size for MLDE.
    pub k1: Option<usize>,
    /// Between-class neighborhood size for MLDE.
    pub k2: Option<usize>,
    /// Heat-kernel width; `None` uses the per-slice median squared
    /// distance, infinity selects binary weights.
    pub t: Option<f64>,
    /// Newton tolerance (MLDE).
    pub eps: f64,
    /// Gram regularization (LME).
    pub reg_eps: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Fraction of samples used for training.
    pub split_fraction: f64,
}

impl RunConfig {
    pub fn new(method: Method, d: usize) -> Self {
        Self {
            method,
            d,
            k: None,
            k1: None,
            k2: None,
            t: None,
            eps: 1e-10,
            reg_eps: 1e-3,
            max_iter: 100,
            seed: 0,
            split_fraction: 0.8,
        }
    }

    fn weight(&self) -> WeightRule {
        match self.t {
            Some(t) if t.is_infinite() => WeightRule::Binary,
            t => WeightRule::HeatKernel { t },
        }
    }

    /// Checks everything that can be checked without touching the numerics.
    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        let n = dataset.samples();
        let x = dataset.samples_mode1();
        let invalid = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return invalid(format!("split fraction {} must lie in (0, 1)", self.split_fraction));
        }
        if n < 2 {
            return invalid(format!("{n} samples cannot be split"));
        }
        if let Some(t) = self.t {
            if !(t > 0.0) {
                return invalid(format!("t = {t} must be positive"));
            }
        }
        if self.d == 0 {
            return invalid("d must be at least 1".into());
        }
        let n_train = ((n as f64 * self.split_fraction).round() as usize).clamp(1, n - 1);
        match self.method {
            Method::Mlde => {
                let p = x.n2();
                if self.d >= p {
                    return invalid(format!("d = {} must be below the feature count {p}", self.d));
                }
                if dataset.labels.is_none() {
                    return Err(Error::InvalidLabels("mlde requires labels".into()));
                }
                for (name, k) in [("k1", self.k1), ("k2", self.k2)] {
                    match k {
                        None => return invalid(format!("mlde requires {name}")),
                        Some(k) if k == 0 || k >= n_train => {
                            return Err(Error::BadK { k, samples: n_train })
                        }
                        _ => {}
                    }
                }
                if !(self.eps > 0.0) || self.max_iter == 0 {
                    return invalid("mlde requires eps > 0 and max_iter >= 1".into());
                }
            }
            Method::Mle | Method::Lme => {
                if self.d >= n {
                    return invalid(format!("d = {} must be below the sample count {n}", self.d));
                }
                match self.k {
                    None => return invalid(format!("{} requires k", self.method.name())),
                    Some(k) if k == 0 || k >= n => return Err(Error::BadK { k, samples: n }),
                    _ => {}
                }
                if self.method == Method::Lme && !(self.reg_eps >= 0.0) {
                    return invalid(format!("reg_eps = {} must be >= 0", self.reg_eps));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// Residual of the eigenproblem solved at the end of the fit.
    pub eigen: f64,
    /// Deviation of the imposed constraint from the identity.
    pub constraint: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub method: Method,
    pub params: RunConfig,
    pub dataset: String,
    /// `None` when the dataset has no labels.
    pub accuracy: Option<f64>,
    pub rho_star: Option<f64>,
    pub iterations: Option<usize>,
    pub residuals: Residuals,
    pub elapsed_ms: f64,
    pub seed: u64,
    /// `inductive` (fit on train, project test) or `transductive` (all
    /// samples embedded jointly, evaluated on the split).
    pub evaluation: String,
    pub train_size: usize,
    pub test_size: usize,
    pub solver_trace: Option<SolverTrace>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub metrics: Metrics,
    /// `n x d x n3`, every sample of the dataset in dataset order.
    pub embedding: Tensor3,
    /// MLDE projection `p x d x n3`.
    pub projection: Option<Tensor3>,
}

/// Fits, embeds and evaluates. When `out_dir` is given, writes
/// `embedding.t3b`, `projection.t3b` (MLDE) and `metrics.json` there.
pub fn run(config: &RunConfig, dataset: &Dataset, out_dir: Option<&Path>) -> Result<RunReport> {
    config.validate(dataset)?;
    let start = Instant::now();
    let x = dataset.samples_mode1();
    let n = x.n1();
    let (train, test) = split_indices(n, config.split_fraction, config.seed);
    let labels = dataset.labels.as_deref();
    let pick = |idx: &[usize]| labels.map(|l| idx.iter().map(|&i| l[i]).collect::<Vec<_>>());

    let mut rho_star = None;
    let mut iterations = None;
    let mut solver_trace = None;
    let mut projection = None;
    let (embedding, residuals, evaluation) = match config.method {
        Method::Mlde => {
            let params = MldeParams {
                d: config.d,
                k1: config.k1.expect("validated"),
                k2: config.k2.expect("validated"),
                weight: config.weight(),
                eps: config.eps,
                max_iter: config.max_iter,
                seed: config.seed,
            };
            let train_labels = pick(&train).expect("validated");
            let model = mlde_fit(&x.select_rows(&train).swap_modes12(), &train_labels, &params)?;
            let y = mlde_project(&model, &x.swap_modes12())?.swap_modes12();
            rho_star = Some(model.rho_star);
            iterations = Some(model.solver_trace.iterations);
            let residuals = Residuals {
                eigen: model.residual,
                constraint: constraint_error(&model.v, None, 1.0)?,
            };
            solver_trace = Some(model.solver_trace);
            projection = Some(model.v);
            (y, residuals, "inductive")
        }
        Method::Mle => {
            let params = MleParams {
                d: config.d,
                k: config.k.expect("validated"),
                weight: config.weight(),
            };
            let e = mle_fit(&x, &params)?;
            let spec = GraphSpec::knn(params.k).with_weight(params.weight);
            let deg = build_graphs(&x, None, &spec)?.graph.deg.to_tensor()?;
            let residuals = Residuals {
                eigen: e.residual,
                constraint: constraint_error(&e.y, Some(&deg), 1.0)?,
            };
            (e.y, residuals, "transductive")
        }
        Method::Lme => {
            let params = LmeParams {
                d: config.d,
                k: config.k.expect("validated"),
                reg_eps: config.reg_eps,
            };
            let e = lme_fit(&x, &params)?;
            let residuals = Residuals {
                eigen: e.residual,
                constraint: constraint_error(&e.y, None, 1.0 / n as f64)?,
            };
            (e.y, residuals, "transductive")
        }
    };

    let accuracy = match (pick(&train), pick(&test)) {
        (Some(lt), Some(ls)) => Some(evaluate_1nn(
            &embedding.select_rows(&train),
            &lt,
            &embedding.select_rows(&test),
            &ls,
        )?),
        _ => None,
    };
    let metrics = Metrics {
        method: config.method,
        params: config.clone(),
        dataset: dataset.name.clone(),
        accuracy,
        rho_star,
        iterations,
        residuals,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        seed: config.seed,
        evaluation: evaluation.into(),
        train_size: train.len(),
        test_size: test.len(),
        solver_trace,
    };
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        write_t3b(dir.join("embedding.t3b"), &embedding)?;
        if let Some(v) = &projection {
            write_t3b(dir.join("projection.t3b"), v)?;
        }
        fs::write(dir.join("metrics.json"), serde_json::to_string_pretty(&metrics)?)?;
    }
    Ok(RunReport {
        metrics,
        embedding,
        projection,
    })
}

/// Appends the metrics as one JSON line.
pub fn append_metrics_line(path: impl AsRef<Path>, metrics: &Metrics) -> Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(f, "{}", serde_json::to_string(metrics)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::synth_gaussian_classes;
    use crate::tensor::read_t3b;

    fn mlde_config(seed: u64) -> RunConfig {
        RunConfig {
            k1: Some(5),
            k2: Some(5),
            seed,
            ..RunConfig::new(Method::Mlde, 2)
        }
    }

    #[test]
    fn mlde_run_classifies_separated_classes() {
        let ds = synth_gaussian_classes(2, 50, 8, 3, 10.0, 1);
        let r = run(&mlde_config(1), &ds, None).unwrap();
        assert!(r.metrics.accuracy.unwrap() >= 0.95);
        assert_eq!(r.embedding.shape(), (100, 2, 3));
        assert_eq!(r.projection.unwrap().shape(), (8, 2, 3));
        assert!(r.metrics.residuals.constraint <= 1e-6);
    }

    #[test]
    fn writes_artifacts_and_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let ds = synth_gaussian_classes(2, 10, 4, 2, 6.0, 2);
        let a = run(&mlde_config(3), &ds, Some(dir.path())).unwrap();
        let b = run(&mlde_config(3), &ds, None).unwrap();
        assert_eq!(read_t3b(dir.path().join("embedding.t3b")).unwrap(), a.embedding);
        assert!(dir.path().join("projection.t3b").exists());
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("metrics.json")).unwrap()).unwrap();
        for key in ["method", "params", "accuracy", "rho_star", "iterations", "residuals", "elapsed_ms", "seed"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["method"], "mlde");
        assert_eq!(a.embedding, b.embedding);
        let mut ma = a.metrics.clone();
        let mut mb = b.metrics.clone();
        ma.elapsed_ms = 0.0;
        mb.elapsed_ms = 0.0;
        assert_eq!(ma, mb);
    }

    #[test]
    fn unsupervised_runs_are_transductive() {
        let ds = synth_gaussian_classes(2, 15, 4, 2, 10.0, 4);
        for method in [Method::Mle, Method::Lme] {
            let cfg = RunConfig {
                k: Some(6),
                ..RunConfig::new(method, 2)
            };
            let r = run(&cfg, &ds, None).unwrap();
            assert_eq!(r.metrics.evaluation, "transductive");
            assert!(r.metrics.residuals.constraint <= 1e-5);
            assert!(r.metrics.accuracy.is_some());
        }
    }

    #[test]
    fn validation_errors_come_first() {
        let ds = synth_gaussian_classes(2, 5, 3, 1, 1.0, 5);
        let cfg = RunConfig {
            k: Some(3),
            ..RunConfig::new(Method::Mle, 10)
        };
        let err = run(&cfg, &ds, None).unwrap_err();
        assert!(err.is_validation());
        let cfg = RunConfig::new(Method::Mlde, 2);
        assert!(run(&cfg, &ds, None).unwrap_err().is_validation());
        let cfg = RunConfig {
            k1: Some(8),
            k2: Some(2),
            ..RunConfig::new(Method::Mlde, 2)
        };
        assert!(matches!(run(&cfg, &ds, None), Err(Error::BadK { .. })));
    }

    #[test]
    fn appends_one_line_per_run() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let ds = synth_gaussian_classes(2, 8, 3, 1, 5.0, 6);
        let cfg = RunConfig {
            k: Some(3),
            ..RunConfig::new(Method::Mle, 1)
        };
        for _ in 0..2 {
            append_metrics_line(&path, &run(&cfg, &ds, None).unwrap().metrics).unwrap();
        }
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
    }
}
