use nalgebra::{DMatrix, DVector};

use super::{Embedding, Method};
use crate::error::{Error, Result};
use crate::graph::{nearest_neighbors, squared_distances};
use crate::par;
use crate::slice_linalg::{to_complex, CMat};
use crate::spectral::{generalized_eig_with_tol, Which, ROUNDING_ZERO_TOL};
use crate::tensor::{
    computed_slices, from_transform, identity_tensor, mirror_of, t_product, t_transpose, Tensor3,
    TransformTensor,
};

/// Gram matrices with a larger condition number are regularized.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmeParams {
    pub d: usize,
    pub k: usize,
    /// Relative regularization `ε` in `G + ε·trace(G)/k·I`.
    pub reg_eps: f64,
}

impl Default for LmeParams {
    fn default() -> Self {
        Self {
            d: 2,
            k: 5,
            reg_eps: 1e-3,
        }
    }
}

/// Reconstruction weights of every sample from its `k` nearest neighbors,
/// computed independently in each spatial slice.
#[derive(Debug, Clone)]
pub struct LmeWeights {
    pub k: usize,
    /// `neighbors[r][i]`: neighbor indices of sample `i` in slice `r`.
    pub neighbors: Vec<Vec<Vec<usize>>>,
    /// `weights[r][i]`: matching reconstruction weights, summing to one.
    pub weights: Vec<Vec<Vec<f64>>>,
    /// `true` where the Gram matrix had to be regularized.
    pub regularized: Vec<Vec<bool>>,
    /// Assembled `n x n x n3` affinity tensor.
    pub w: Tensor3,
}

impl LmeWeights {
    /// Dense `n x n` weight matrix of spatial slice `r`.
    pub fn slice_matrix(&self, r: usize) -> DMatrix<f64> {
        let n = self.neighbors[r].len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for (&j, &e) in self.neighbors[r][i].iter().zip(&self.weights[r][i]) {
                m[(i, j)] = e;
            }
        }
        m
    }
}

struct SliceWeights {
    neighbors: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
    regularized: Vec<bool>,
}

fn gram_condition(g: &DMatrix<f64>) -> f64 {
    let eig = g.clone().symmetric_eigen().eigenvalues;
    let max = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = eig.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn slice_weights(s: &DMatrix<f64>, k: usize, reg_eps: f64, slice: usize) -> Result<SliceWeights> {
    let n = s.nrows();
    let neighbors = nearest_neighbors(&squared_distances(&to_complex(s)), k, |i, j| i != j);
    let mut weights = Vec::with_capacity(n);
    let mut regularized = Vec::with_capacity(n);
    for (i, nb) in neighbors.iter().enumerate() {
        // columns: x_i − x_j for each neighbor j
        let diff = DMatrix::from_fn(s.ncols(), nb.len(), |f, a| s[(i, f)] - s[(nb[a], f)]);
        let mut g = diff.transpose() * &diff;
        let m = nb.len();
        let needs_reg = gram_condition(&g) > GRAM_CONDITION_LIMIT;
        if needs_reg {
            if !(reg_eps > 0.0) {
                return Err(Error::SingularGram { slice, sample: i });
            }
            let tr = g.trace();
            let delta = reg_eps * if tr > 0.0 { tr / m as f64 } else { 1.0 };
            for a in 0..m {
                g[(a, a)] += delta;
            }
        }
        let z = g
            .lu()
            .solve(&DVector::from_element(m, 1.0))
            .ok_or(Error::SingularGram { slice, sample: i })?;
        let total = z.sum();
        if !total.is_finite() || total == 0.0 {
            return Err(Error::SingularGram { slice, sample: i });
        }
        weights.push(z.iter().map(|v| v / total).collect());
        regularized.push(needs_reg);
    }
    Ok(SliceWeights {
        neighbors,
        weights,
        regularized,
    })
}

/// Reconstruction weights for the mode-1 samples of `x` (`n x p x n3`).
///
/// Transform slice `r` of the assembled affinity tensor is the average of
/// the spatial weight matrices of slices `r` and `n3 − r`, which keeps the
/// assembled tensor real; for `n3 = 1` it is the weight matrix itself.
pub fn lme_weights(x: &Tensor3, k: usize, reg_eps: f64) -> Result<LmeWeights> {
    let (n, _, n3) = x.shape();
    if k == 0 || k >= n {
        return Err(Error::BadK { k, samples: n });
    }
    if reg_eps < 0.0 || !reg_eps.is_finite() {
        return Err(Error::InvalidParameter(format!("reg_eps = {reg_eps} must be finite and >= 0")));
    }
    let per_slice = par::map_indices(n3, |r| slice_weights(&x.frontal(r), k, reg_eps, r))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut out = LmeWeights {
        k,
        neighbors: Vec::with_capacity(n3),
        weights: Vec::with_capacity(n3),
        regularized: Vec::with_capacity(n3),
        w: Tensor3::zeros(n, n, n3),
    };
    for s in per_slice {
        out.neighbors.push(s.neighbors);
        out.weights.push(s.weights);
        out.regularized.push(s.regularized);
    }
    let dense: Vec<DMatrix<f64>> = (0..n3).map(|r| out.slice_matrix(r)).collect();
    let half: Vec<CMat> = (0..computed_slices(n3))
        .map(|r| to_complex(&(&dense[r] + &dense[mirror_of(r, n3)]).scale(0.5)))
        .collect();
    out.w = from_transform(&TransformTensor::from_half_spectrum(n3, &half)?)?;
    Ok(out)
}

/// Embeds the mode-1 samples of `x` into `n x d x n3` with
/// `(1/n)Yᵀ★Y = I_d`, using the `d` smallest non-zero eigentubes of
/// `M = (I − W)ᵀ★(I − W)`.
///
/// The eigentubes are reported for `M★Y = (1/(n·n3)) Y★Λ`.
pub fn lme_fit(x: &Tensor3, params: &LmeParams) -> Result<Embedding> {
    let (n, _, n3) = x.shape();
    if params.d == 0 || params.d >= n {
        return Err(Error::InvalidParameter(format!("d = {} must satisfy 1 <= d < {n}", params.d)));
    }
    let weights = lme_weights(x, params.k, params.reg_eps)?;
    let m = reconstruction_cost(&weights.w)?;
    // The informative eigenvalues of M can sit far below 1e-8 of the largest
    // one on smooth manifolds, so only rounding-level values count as zero.
    let pairs = generalized_eig_with_tol(
        &m,
        &identity_tensor(n, n3),
        params.d,
        Which::SmallestNonzero,
        ROUNDING_ZERO_TOL,
    )?;
    Ok(Embedding {
        y: pairs.eigenslices.scale((n as f64).sqrt()),
        eigentubes: pairs.eigentubes.scaled((n * n3) as f64),
        method: Method::Lme,
        residual: pairs.residual,
    })
}

/// `(I − W)ᵀ★(I − W)`
pub fn reconstruction_cost(w: &Tensor3) -> Result<Tensor3> {
    let i_w = identity_tensor(w.n1(), w.n3()).sub(w)?;
    t_product(&t_transpose(&i_w), &i_w)?.symmetrized()
}
