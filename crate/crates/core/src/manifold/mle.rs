use super::{Embedding, Method};
use crate::error::{Error, Result};
use crate::graph::{build_graphs, GraphSpec, WeightRule};
use crate::spectral::{generalized_eig, Which};
use crate::tensor::Tensor3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleParams {
    pub d: usize,
    pub k: usize,
    pub weight: WeightRule,
}

impl Default for MleParams {
    fn default() -> Self {
        Self {
            d: 2,
            k: 5,
            weight: WeightRule::HeatKernel { t: None },
        }
    }
}

/// Embeds the mode-1 samples of `x` (`n x p x n3`) into `n x d x n3` with
/// `Yᵀ★D★Y = I_d`, taking the `d` smallest non-zero generalized eigentubes
/// of `(L, D)` in every transform slice.
///
/// The eigentubes are reported for `L★Y = (1/n3) D★Y★Λ`, i.e. scaled by
/// `n3` relative to the per-slice generalized eigenvalues.
pub fn mle_fit(x: &Tensor3, params: &MleParams) -> Result<Embedding> {
    let (n, _, n3) = x.shape();
    if params.d == 0 || params.d >= n {
        return Err(Error::InvalidParameter(format!("d = {} must satisfy 1 <= d < {n}", params.d)));
    }
    let spec = GraphSpec::knn(params.k).with_weight(params.weight);
    let graph = build_graphs(x, None, &spec)?.graph;
    if let Some(&(slice, vertex)) = graph.isolated.first() {
        return Err(Error::SingularDegree { slice, vertex });
    }
    let deg = graph.deg.to_tensor()?;
    let pairs = generalized_eig(&graph.lap, &deg, params.d, Which::SmallestNonzero)?;
    Ok(Embedding {
        y: pairs.eigenslices,
        eigentubes: pairs.eigentubes.scaled(n3 as f64),
        method: Method::Mle,
        residual: pairs.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::constraint_error;
    use crate::tensor::t_product;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn blobs(per: usize, p: usize, n3: usize, sep: f64, seed: u64) -> Tensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Tensor3::from_fn(2 * per, p, n3, |i, j, _| {
            let noise: f64 = StandardNormal.sample(&mut rng);
            noise + if j == 0 && i >= per { sep } else { 0.0 }
        })
    }

    #[test]
    fn constraint_and_residual() {
        let x = blobs(15, 4, 3, 3.0, 1);
        let e = mle_fit(&x, &MleParams { d: 2, k: 5, ..Default::default() }).unwrap();
        let graph = build_graphs(&x, None, &GraphSpec::knn(5)).unwrap().graph;
        let deg = graph.deg.to_tensor().unwrap();
        assert!(constraint_error(&e.y, Some(&deg), 1.0).unwrap() <= 1e-5);
        assert!(e.residual <= 1e-8 * graph.lap.frobenius_norm().max(1.0));
        // L★Y = (1/n3) D★Y★Λ with the reported scaling
        let lhs = t_product(&graph.lap, &e.y).unwrap();
        let rhs = t_product(&t_product(&deg, &e.y).unwrap(), &e.eigentubes.to_tensor().unwrap())
            .unwrap()
            .scale(1.0 / 3.0);
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() <= 1e-8);
    }

    fn locality_ratio(y: &Tensor3, per: usize) -> f64 {
        let y0 = y.frontal(0);
        let dist = |a: usize, b: usize| (y0.row(a) - y0.row(b)).norm();
        let (mut within, mut nw, mut between, mut nb) = (0.0, 0, 0.0, 0);
        for a in 0..2 * per {
            for b in a + 1..2 * per {
                if (a < per) == (b < per) {
                    within += dist(a, b);
                    nw += 1;
                } else {
                    between += dist(a, b);
                    nb += 1;
                }
            }
        }
        (within / nw as f64) / (between / nb as f64)
    }

    #[test]
    fn separated_clusters_stay_apart() {
        // k = per forces cross-cluster edges; with a disconnected graph the
        // cluster indicator falls in the skipped null space.
        let per = 20;
        let params = MleParams { d: 1, k: per, ..Default::default() };
        let x = blobs(per, 5, 1, 12.0, 2);
        assert!(locality_ratio(&mle_fit(&x, &params).unwrap().y, per) < 0.2);

        // The class offset sits in the first frontal slice only, so every
        // transform slice sees it.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = Tensor3::from_fn(2 * per, 5, 3, |i, j, k| {
            let noise: f64 = StandardNormal.sample(&mut rng);
            noise + if j == 0 && k == 0 && i >= per { 12.0 } else { 0.0 }
        });
        assert!(locality_ratio(&mle_fit(&x, &params).unwrap().y, per) < 0.2);
    }

    #[test]
    fn disconnected_graph_lacks_nonzero_eigentubes() {
        // three far-apart pairs: k = 1 gives three components
        let x = Tensor3::from_fn(6, 1, 1, |i, _, _| (i / 2) as f64 * 100.0 + (i % 2) as f64);
        let r = mle_fit(&x, &MleParams { d: 4, k: 1, weight: WeightRule::Binary });
        assert!(matches!(r, Err(Error::InsufficientNonzero { .. })));
    }

    #[test]
    fn rejects_d_not_below_sample_count() {
        let x = blobs(3, 2, 2, 1.0, 3);
        let r = mle_fit(&x, &MleParams { d: 6, ..Default::default() });
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }
}
