//! Neighborhood graphs built slice by slice.
//!
//! Samples are the mode-1 slices (rows) of the input tensor. For every slice
//! the pairwise distances between sample rows decide the adjacency, the
//! weight rule turns adjacency into affinities, and the affinity slices are
//! assembled into a spatial-domain f-symmetric tensor `W` together with its
//! degree tensor `D` and Laplacian `L = D − W`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;
use crate::slice_linalg::{to_complex, CMat};
use crate::spectral::{require_f_symmetric, FDiagonal};
use crate::tensor::{computed_slices, from_transform, mirror_of, to_transform, Tensor3, TransformTensor};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NeighborRule {
    /// `k` nearest neighbors, symmetrized by OR.
    Knn(usize),
    /// Squared distance at most `ε`.
    Epsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightRule {
    /// `exp(−‖x_i − x_j‖² / t)`; `None` picks the median squared pairwise
    /// distance of each slice.
    HeatKernel { t: Option<f64> },
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    Unsupervised,
    /// Only pairs with equal labels are candidates.
    WithinClass,
    /// Only pairs with different labels are candidates.
    BetweenClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphDomain {
    /// Distances between rows of the transform slices `X̂^(r)`.
    Transform,
    /// Distances between rows of the spatial slices `X^(r)`; slice `r` of the
    /// result is averaged with its mirror so the assembled tensor is real.
    Spatial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSpec {
    pub neighbor: NeighborRule,
    pub weight: WeightRule,
    pub mode: GraphMode,
    pub domain: GraphDomain,
}

impl GraphSpec {
    pub fn knn(k: usize) -> Self {
        Self {
            neighbor: NeighborRule::Knn(k),
            weight: WeightRule::HeatKernel { t: None },
            mode: GraphMode::Unsupervised,
            domain: GraphDomain::Transform,
        }
    }

    pub fn with_weight(mut self, weight: WeightRule) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_mode(mut self, mode: GraphMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_domain(mut self, domain: GraphDomain) -> Self {
        self.domain = domain;
        self
    }

    fn validate(&self, samples: usize) -> Result<()> {
        match self.neighbor {
            NeighborRule::Knn(k) if k == 0 || k >= samples => return Err(Error::BadK { k, samples }),
            NeighborRule::Epsilon(eps) if !(eps > 0.0) => {
                return Err(Error::InvalidParameter(format!("epsilon = {eps} must be positive")))
            }
            _ => {}
        }
        if let WeightRule::HeatKernel { t: Some(t) } = self.weight {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter(format!("heat-kernel t = {t} must be positive")));
            }
        }
        Ok(())
    }
}

/// One graph: affinity, degrees and Laplacian, all f-symmetric.
#[derive(Debug, Clone)]
pub struct Graph {
    pub w: Tensor3,
    pub deg: FDiagonal,
    pub lap: Tensor3,
    /// `(slice, vertex)` pairs with zero degree.
    pub isolated: Vec<(usize, usize)>,
}

impl Graph {
    pub fn has_isolated(&self) -> bool {
        !self.isolated.is_empty()
    }

    /// Number of (undirected) edges in transform slice `k`.
    pub fn edge_count(&self, k: usize) -> usize {
        let fw = to_transform(&self.w);
        let s = fw.slice(k);
        let n = s.nrows();
        let scale = s.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if s[(i, j)].norm() > 1e-12 * scale {
                    count += 1;
                }
            }
        }
        count
    }
}

/// A graph and, for discriminant methods, its between-class counterpart.
#[derive(Debug, Clone)]
pub struct AffinityGraphs {
    pub graph: Graph,
    pub between: Option<Graph>,
}

/// Checks a label list against the sample count: labels start at 1.
pub fn validate_labels(labels: &[usize], samples: usize) -> Result<usize> {
    if labels.len() != samples {
        return Err(Error::LabelMismatch {
            expected: samples,
            found: labels.len(),
        });
    }
    if let Some(pos) = labels.iter().position(|&l| l == 0) {
        return Err(Error::InvalidLabels(format!("label at position {} is 0; labels start at 1", pos + 1)));
    }
    Ok(labels.iter().copied().max().unwrap_or(0))
}

/// Builds the graph described by `spec` on the rows of `x`.
pub fn build_graphs(x: &Tensor3, labels: Option<&[usize]>, spec: &GraphSpec) -> Result<AffinityGraphs> {
    Ok(AffinityGraphs {
        graph: build_one(x, labels, spec)?,
        between: None,
    })
}

/// Within-class graph from `within` and between-class graph from `between`.
pub fn build_discriminant_graphs(
    x: &Tensor3,
    labels: &[usize],
    within: &GraphSpec,
    between: &GraphSpec,
) -> Result<AffinityGraphs> {
    let within = GraphSpec {
        mode: GraphMode::WithinClass,
        ..*within
    };
    let between = GraphSpec {
        mode: GraphMode::BetweenClass,
        ..*between
    };
    Ok(AffinityGraphs {
        graph: build_one(x, Some(labels), &within)?,
        between: Some(build_one(x, Some(labels), &between)?),
    })
}

fn build_one(x: &Tensor3, labels: Option<&[usize]>, spec: &GraphSpec) -> Result<Graph> {
    let (n, _, n3) = x.shape();
    spec.validate(n)?;
    let labels = match (spec.mode, labels) {
        (GraphMode::Unsupervised, None) => None,
        (GraphMode::Unsupervised, Some(l)) => {
            validate_labels(l, n)?;
            None
        }
        (_, None) => return Err(Error::InvalidLabels("supervised graph requires labels".into())),
        (_, Some(l)) => {
            validate_labels(l, n)?;
            Some(l)
        }
    };
    let candidate = |i: usize, j: usize| -> bool {
        i != j
            && match (spec.mode, labels) {
                (GraphMode::WithinClass, Some(l)) => l[i] == l[j],
                (GraphMode::BetweenClass, Some(l)) => l[i] != l[j],
                _ => true,
            }
    };

    let slices: Vec<DMatrix<f64>> = match spec.domain {
        GraphDomain::Transform => {
            let fx = to_transform(x);
            par::map_indices(computed_slices(n3), |k| {
                slice_affinity(&fx.slice(k), spec, &candidate)
            })
        }
        GraphDomain::Spatial => {
            let all = par::map_indices(n3, |k| slice_affinity(&to_complex(&x.frontal(k)), spec, &candidate));
            (0..computed_slices(n3))
                .map(|k| (&all[k] + &all[mirror_of(k, n3)]).scale(0.5))
                .collect()
        }
    };
    let half: Vec<CMat> = slices.iter().map(to_complex).collect();
    let w = from_transform(&TransformTensor::from_half_spectrum(n3, &half)?)?;
    let (deg, lap) = degree_and_laplacian(&w)?;
    let mut isolated = Vec::new();
    for k in 0..n3 {
        let scale = (0..n).fold(0.0f64, |m, i| m.max(deg.value(i, k).norm()));
        for i in 0..n {
            if deg.value(i, k).norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
                isolated.push((k, i));
            }
        }
    }
    Ok(Graph { w, deg, lap, isolated })
}

/// Squared distances between the rows of `s`.
pub fn squared_distances(s: &CMat) -> DMatrix<f64> {
    let n = s.nrows();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = s
                .row(i)
                .iter()
                .zip(s.row(j).iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

/// Indices of the `k` nearest candidates of every row, nearest first; ties go
/// to the lower index. Rows with fewer than `k` candidates get all of them.
pub fn nearest_neighbors(d2: &DMatrix<f64>, k: usize, candidate: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let n = d2.nrows();
    (0..n)
        .map(|i| {
            let mut js: Vec<usize> = (0..n).filter(|&j| candidate(i, j)).collect();
            js.sort_by(|&a, &b| d2[(i, a)].total_cmp(&d2[(i, b)]).then(a.cmp(&b)));
            js.truncate(k);
            js
        })
        .collect()
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

fn slice_affinity(s: &CMat, spec: &GraphSpec, candidate: &impl Fn(usize, usize) -> bool) -> DMatrix<f64> {
    let n = s.nrows();
    let d2 = squared_distances(s);
    let mut adj = DMatrix::from_element(n, n, false);
    match spec.neighbor {
        NeighborRule::Knn(k) => {
            for (i, js) in nearest_neighbors(&d2, k, candidate).into_iter().enumerate() {
                for j in js {
                    adj[(i, j)] = true;
                    adj[(j, i)] = true;
                }
            }
        }
        NeighborRule::Epsilon(eps) => {
            for i in 0..n {
                for j in 0..n {
                    adj[(i, j)] = candidate(i, j) && d2[(i, j)] <= eps;
                }
            }
        }
    }
    let t = match spec.weight {
        WeightRule::Binary => None,
        WeightRule::HeatKernel { t: Some(t) } => Some(t),
        WeightRule::HeatKernel { t: None } => {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let m = median(pairs.map(|(i, j)| d2[(i, j)]).collect()).unwrap_or(1.0);
            Some(if m > 0.0 { m } else { 1.0 })
        }
    };
    DMatrix::from_fn(n, n, |i, j| match (adj[(i, j)], t) {
        (false, _) => 0.0,
        (true, None) => 1.0,
        (true, Some(t)) => (-d2[(i, j)] / t).exp(),
    })
}

/// Degree tensor (row sums of every transform slice) and Laplacian `D − W`.
pub fn degree_and_laplacian(w: &Tensor3) -> Result<(FDiagonal, Tensor3)> {
    require_f_symmetric(w)?;
    let (n, _, n3) = w.shape();
    let fw = to_transform(w);
    let mut values = vec![Complex64::new(0.0, 0.0); n * n3];
    for k in 0..n3 {
        for i in 0..n {
            values[i * n3 + k] = (0..n).map(|j| fw.get(i, j, k)).sum();
        }
    }
    let deg = FDiagonal::new(n, n3, values)?;
    let lap = deg.to_tensor()?.sub(w)?;
    Ok((deg, lap))
}
