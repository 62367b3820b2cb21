use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dataset::{Dataset, Orientation};
use crate::tensor::Tensor3;

/// `c` Gaussian classes of `per_class` samples each, stored as mode-1
/// slices (`c·per_class x p x n3`) in class order.
///
/// Class means are `separation/√2 · e_class` when `c <= p`, so every pair of
/// means is exactly `separation` apart; otherwise they are spaced
/// `separation` apart along the first feature. The mean is the same in every
/// frontal slice and the unit-variance noise is independent per entry.
///
/// # Panics
///
/// If `c < 2`, `per_class == 0`, `p == 0` or `n3 == 0`.
pub fn synth_gaussian_classes(c: usize, per_class: usize, p: usize, n3: usize, separation: f64, seed: u64) -> Dataset {
    assert!(c >= 2, "need at least two classes");
    assert!(per_class > 0 && p > 0 && n3 > 0, "extents must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean = |class: usize, feature: usize| -> f64 {
        if c <= p {
            if feature == class {
                separation / std::f64::consts::SQRT_2
            } else {
                0.0
            }
        } else if feature == 0 {
            separation * class as f64
        } else {
            0.0
        }
    };
    let n = c * per_class;
    // draw in storage order so the stream does not depend on the layout code
    let mut data = Vec::with_capacity(n * p * n3);
    for _k in 0..n3 {
        for i in 0..n {
            for j in 0..p {
                let z: f64 = StandardNormal.sample(&mut rng);
                data.push(mean(i / per_class, j) + z);
            }
        }
    }
    let x = Tensor3::new(n, p, n3, data).expect("finite Gaussian samples");
    let labels = (0..n).map(|i| 1 + i / per_class).collect();
    Dataset::new(x, Some(labels), format!("gauss-c{c}-n{per_class}-p{p}-s{separation}"), Orientation::SamplesMode1)
        .expect("labels are contiguous by construction")
}
