use crate::error::{Error, Result};
use crate::graph::{build_discriminant_graphs, GraphSpec, WeightRule};
use crate::tensor::{t_product, t_transpose, Tensor3};
use crate::trace_ratio::{initial_basis, newton_qr, SolverTrace, TraceRatioProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MldeParams {
    pub d: usize,
    /// Within-class neighborhood size.
    pub k1: usize,
    /// Between-class neighborhood size.
    pub k2: usize,
    pub weight: WeightRule,
    /// Newton stopping tolerance on `|Δρ|`.
    pub eps: f64,
    pub max_iter: usize,
    /// Seed of the random starting basis.
    pub seed: u64,
}

impl Default for MldeParams {
    fn default() -> Self {
        Self {
            d: 2,
            k1: 5,
            k2: 5,
            weight: WeightRule::HeatKernel { t: None },
            eps: 1e-10,
            max_iter: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MldeModel {
    /// `p x d x n3` f-orthogonal projection.
    pub v: Tensor3,
    pub rho_star: f64,
    pub solver_trace: SolverTrace,
    /// `||(L′ − ρ*L)★V − V★Λ||_F` at the solution.
    pub residual: f64,
    /// Within-class scatter `X★(D − W)★Xᵀ`.
    pub within_scatter: Tensor3,
    /// Between-class scatter `X★(D′ − W′)★Xᵀ`.
    pub between_scatter: Tensor3,
}

fn scatter(x: &Tensor3, lap: &Tensor3) -> Result<Tensor3> {
    t_product(&t_product(x, lap)?, &t_transpose(x))?.symmetrized()
}

/// Fits a projection `V` (`p x d x n3`) from samples stored as the lateral
/// slices of `x` (`p x n x n3`).
pub fn mlde_fit(x: &Tensor3, labels: &[usize], params: &MldeParams) -> Result<MldeModel> {
    let (p, n, n3) = x.shape();
    if params.d == 0 || params.d >= p {
        return Err(Error::InvalidParameter(format!("d = {} must satisfy 1 <= d < {p}", params.d)));
    }
    if labels.len() != n {
        return Err(Error::LabelMismatch {
            expected: n,
            found: labels.len(),
        });
    }
    let samples = x.swap_modes12();
    let within = GraphSpec::knn(params.k1).with_weight(params.weight);
    let between = GraphSpec::knn(params.k2).with_weight(params.weight);
    let graphs = build_discriminant_graphs(&samples, labels, &within, &between)?;
    let between_graph = graphs.between.expect("discriminant graphs carry a between-class graph");
    if (0..n3).all(|k| between_graph.edge_count(k) == 0) {
        return Err(Error::IllPosed(
            "between-class graph is empty (all samples share one label)".into(),
        ));
    }
    let within_scatter = scatter(x, &graphs.graph.lap)?;
    let between_scatter = scatter(x, &between_graph.lap)?;
    let problem = TraceRatioProblem::new(between_scatter.clone(), within_scatter.clone(), params.d)?;
    let v0 = initial_basis(p, params.d, n3, params.seed)?;
    let sol = newton_qr(&problem, &v0, params.eps, params.max_iter).map_err(|e| match e {
        Error::IllPosed(why) => Error::IllPosed(format!(
            "{why}; the within-class scatter is too degenerate, try a larger k1"
        )),
        other => other,
    })?;
    Ok(MldeModel {
        v: sol.v,
        rho_star: sol.rho,
        solver_trace: sol.trace,
        residual: sol.at_optimum.residual,
        within_scatter,
        between_scatter,
    })
}

/// `Vᵀ★X`: `d x n x n3` for `x` of shape `p x n x n3`.
pub fn mlde_project(model: &MldeModel, x: &Tensor3) -> Result<Tensor3> {
    let (p, _, n3) = model.v.shape();
    if x.n1() != p || x.n3() != n3 {
        return Err(Error::ShapeMismatch(format!(
            "projection expects {p} x n x {n3} samples, got {:?}",
            x.shape()
        )));
    }
    t_product(&t_transpose(&model.v), x)
}
