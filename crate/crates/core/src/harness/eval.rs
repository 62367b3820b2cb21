use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

/// Seeded shuffle split: `round(n·train_fraction)` training indices (at
/// least one, leaving at least one for testing), each list sorted.
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    assert!(n >= 2, "need at least two samples to split");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((n as f64 * train_fraction).round() as usize).clamp(1, n - 1);
    let mut train = idx[..n_train].to_vec();
    let mut test = idx[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

fn row_distance_sq(a: &Tensor3, i: usize, b: &Tensor3, j: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..a.n3() {
        for c in 0..a.n2() {
            let d = a.get(i, c, k) - b.get(j, c, k);
            s += d * d;
        }
    }
    s
}

/// 1-NN accuracy: each mode-1 sample of `y_test` takes the label of the
/// nearest mode-1 sample of `y_train` under the Frobenius distance of the
/// `d x n3` blocks. Equidistant training samples resolve to the lower index.
pub fn evaluate_1nn(y_train: &Tensor3, labels_train: &[usize], y_test: &Tensor3, labels_test: &[usize]) -> Result<f64> {
    if y_train.n2() != y_test.n2() || y_train.n3() != y_test.n3() {
        return Err(Error::ShapeMismatch(format!(
            "train {:?} and test {:?} disagree in modes 2 and 3",
            y_train.shape(),
            y_test.shape()
        )));
    }
    if labels_train.len() != y_train.n1() {
        return Err(Error::LabelMismatch {
            expected: y_train.n1(),
            found: labels_train.len(),
        });
    }
    if labels_test.len() != y_test.n1() {
        return Err(Error::LabelMismatch {
            expected: y_test.n1(),
            found: labels_test.len(),
        });
    }
    let correct = (0..y_test.n1())
        .filter(|&t| {
            let mut best = (f64::INFINITY, 0);
            for s in 0..y_train.n1() {
                let d = row_distance_sq(y_test, t, y_train, s);
                if d < best.0 {
                    best = (d, s);
                }
            }
            labels_train[best.1] == labels_test[t]
        })
        .count();
    Ok(correct as f64 / y_test.n1() as f64)
}
