use nalgebra::DMatrix;

use super::transform::{computed_slices, to_transform, TransformTensor};
use super::{from_transform, Tensor3};
use crate::error::{Error, Result};
use crate::par;

/// Row limit (`n1 * n3`) for the materialized block-circulant oracle.
pub const BCIRC_ORACLE_MAX_ROWS: usize = 4096;

/// t-product `A ★ B` of an `n1 x q x n3` and a `q x n2 x n3` tensor.
///
/// Multiplies the independent transform slices and fills the remaining ones
/// by conjugation before transforming back.
pub fn t_product(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_product_shapes(a, b)?;
    let fa = to_transform(a);
    let fb = to_transform(b);
    let fc = transform_product(&fa, &fb);
    from_transform(&fc)
}

/// Slice-wise product of two conjugate-symmetric transforms over the
/// independent half of the spectrum, mirrored to a full transform.
pub(crate) fn transform_product(fa: &TransformTensor, fb: &TransformTensor) -> TransformTensor {
    let n3 = fa.shape().2;
    let half = par::map_indices(computed_slices(n3), |k| fa.slice(k) * fb.slice(k));
    TransformTensor::from_half_spectrum(n3, &half).expect("consistent half spectrum")
}

fn check_product_shapes(a: &Tensor3, b: &Tensor3) -> Result<()> {
    if a.n2() != b.n1() || a.n3() != b.n3() {
        return Err(Error::ShapeMismatch(format!(
            "t-product of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// `fold(bcirc(A) * unfold(B))` with the block-circulant matrix built
/// explicitly. Independent of the Fourier path; meant as a test oracle.
pub fn bcirc_oracle(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_product_shapes(a, b)?;
    let (n1, q, n3) = a.shape();
    let n2 = b.n2();
    let rows = n1 * n3;
    if rows > BCIRC_ORACLE_MAX_ROWS {
        return Err(Error::OracleTooLarge {
            rows,
            limit: BCIRC_ORACLE_MAX_ROWS,
        });
    }
    // block (r, c) of bcirc(A) is A^((r - c) mod n3)
    let bcirc = DMatrix::from_fn(rows, q * n3, |row, col| {
        let (r, i) = (row / n1, row % n1);
        let (c, j) = (col / q, col % q);
        a.get(i, j, (r + n3 - c) % n3)
    });
    let unfolded = DMatrix::from_fn(q * n3, n2, |row, col| b.get(row % q, col, row / q));
    let prod = bcirc * unfolded;
    Ok(Tensor3::from_fn(n1, n2, n3, |i, j, k| prod[(k * n1 + i, j)]))
}

/// Tensor transpose: every frontal slice transposed, slices `2..n3` reversed.
pub fn t_transpose(a: &Tensor3) -> Tensor3 {
    let (n1, n2, n3) = a.shape();
    Tensor3::from_fn(n2, n1, n3, |i, j, k| a.get(j, i, (n3 - k) % n3))
}

/// First frontal slice is the identity, the others are zero.
pub fn identity_tensor(n: usize, n3: usize) -> Tensor3 {
    Tensor3::from_fn(n, n, n3, |i, j, k| if k == 0 && i == j { 1.0 } else { 0.0 })
}

/// `(1/n3) * sum_k Trace(Â^(k))`.
pub fn trace(a: &Tensor3) -> Result<f64> {
    let (n1, n2, n3) = a.shape();
    if n1 != n2 {
        return Err(Error::ShapeMismatch(format!("trace of a {n1}x{n2}x{n3} tensor")));
    }
    let diag = Tensor3::from_fn(1, n1, n3, |_, j, k| a.get(j, j, k));
    let fd = to_transform(&diag);
    let mut acc = 0.0;
    for k in 0..n3 {
        for j in 0..n1 {
            acc += fd.get(0, j, k).re;
        }
    }
    Ok(acc / n3 as f64)
}

pub fn inner_product(a: &Tensor3, b: &Tensor3) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "inner product of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum())
}

/// `||A - A^T||_F <= tol * max(1, ||A||_F)`.
pub fn is_f_symmetric(a: &Tensor3, tol: f64) -> Result<bool> {
    Ok(f_asymmetry(a)? <= tol * a.frobenius_norm().max(1.0))
}

pub(crate) fn f_asymmetry(a: &Tensor3) -> Result<f64> {
    if a.n1() != a.n2() {
        return Err(Error::ShapeMismatch(format!(
            "symmetry test on {:?}",
            a.shape()
        )));
    }
    Ok(a.sub(&t_transpose(a))?.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n1: usize, n2: usize, n3: usize, seed: u64) -> Tensor3 {
        let mut s = seed;
        Tensor3::from_fn(n1, n2, n3, |_, _, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    fn rel(a: &Tensor3, b: &Tensor3) -> f64 {
        a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(1e-300)
    }

    #[test]
    fn matrix_product_when_n3_is_one() {
        let a = Tensor3::new(2, 2, 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = Tensor3::new(2, 1, 1, vec![1.0, 0.0]).unwrap();
        let c = t_product(&a, &b).unwrap();
        assert!((c.get(0, 0, 0) - 1.0).abs() < 1e-15);
        assert!((c.get(1, 0, 0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn right_identity() {
        let a = sample(3, 4, 5, 1);
        let c = t_product(&a, &identity_tensor(4, 5)).unwrap();
        assert!(rel(&c, &a) < 1e-14);
    }

    #[test]
    fn tube_identity_in_oracle() {
        let e = Tensor3::new(1, 1, 3, vec![1.0, 0.0, 0.0]).unwrap();
        let b = Tensor3::new(1, 1, 3, vec![2.0, -1.0, 7.0]).unwrap();
        assert_eq!(bcirc_oracle(&e, &b).unwrap(), b);
        let b = sample(2, 4, 3, 8);
        assert_eq!(bcirc_oracle(&identity_tensor(2, 3), &b).unwrap(), b);
    }

    #[test]
    fn product_agrees_with_oracle() {
        for (n3, seed) in [(1, 1), (2, 2), (3, 3), (4, 4), (8, 5)] {
            let a = sample(3, 3, n3, seed);
            let b = sample(3, 2, n3, seed + 100);
            let fast = t_product(&a, &b).unwrap();
            let slow = bcirc_oracle(&a, &b).unwrap();
            assert!(rel(&fast, &slow) < 1e-12, "n3 = {n3}");
        }
    }

    #[test]
    fn shape_mismatch() {
        let a = sample(2, 3, 2, 1);
        let b = sample(2, 3, 2, 2);
        assert!(matches!(t_product(&a, &b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(bcirc_oracle(&a, &b), Err(Error::ShapeMismatch(_))));
        let c = sample(3, 3, 3, 3);
        assert!(matches!(t_product(&a, &c), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn oracle_size_guard() {
        let a = Tensor3::zeros(1025, 1, 4);
        let b = Tensor3::zeros(1, 1, 4);
        assert!(matches!(bcirc_oracle(&a, &b), Err(Error::OracleTooLarge { .. })));
    }

    #[test]
    fn transpose_basics() {
        let a = sample(3, 4, 1, 9);
        let at = t_transpose(&a);
        for i in 0..3 {
            for j in 0..4 {
                assert_eq!(at.get(j, i, 0), a.get(i, j, 0));
            }
        }
        let b = sample(3, 4, 5, 10);
        assert_eq!(t_transpose(&t_transpose(&b)), b);
    }

    #[test]
    fn transpose_reverses_products() {
        let a = sample(3, 2, 4, 12);
        let b = sample(2, 5, 4, 13);
        let lhs = t_transpose(&bcirc_oracle(&a, &b).unwrap());
        let rhs = bcirc_oracle(&t_transpose(&b), &t_transpose(&a)).unwrap();
        assert!(rel(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn identity_properties() {
        assert!((trace(&identity_tensor(5, 3)).unwrap() - 5.0).abs() < 1e-14);
        let id = identity_tensor(3, 4);
        let a = sample(3, 2, 4, 3);
        assert!(rel(&t_product(&id, &a).unwrap(), &a) < 1e-14);
        let fi = to_transform(&id);
        for k in 0..4 {
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert_eq!(fi.get(i, j, k).re, expect);
                    assert_eq!(fi.get(i, j, k).im, 0.0);
                }
            }
        }
    }

    #[test]
    fn trace_equals_first_slice_trace() {
        let a = sample(4, 4, 3, 21);
        let direct: f64 = (0..4).map(|i| a.get(i, i, 0)).sum();
        assert!((trace(&a).unwrap() - direct).abs() < 1e-12);
        assert!(matches!(trace(&sample(2, 3, 2, 1)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn frobenius_via_trace() {
        let a = sample(3, 5, 4, 31);
        let n2 = a.frobenius_norm().powi(2);
        let t = trace(&t_product(&a, &t_transpose(&a)).unwrap()).unwrap();
        assert!((n2 - t).abs() / n2 <= 1e-10);
        let ones = Tensor3::from_fn(2, 2, 2, |_, _, _| 1.0);
        assert!((ones.frobenius_norm() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn inner_product_via_trace() {
        let a = sample(3, 3, 4, 41);
        let b = sample(3, 3, 4, 42);
        let ip = inner_product(&a, &b).unwrap();
        let t1 = trace(&t_product(&t_transpose(&a), &b).unwrap()).unwrap();
        let t2 = trace(&t_product(&a, &t_transpose(&b)).unwrap()).unwrap();
        assert!((ip - t1).abs() <= 1e-10 * ip.abs().max(1.0));
        assert!((ip - t2).abs() <= 1e-10 * ip.abs().max(1.0));
        assert!((inner_product(&a, &a).unwrap() - a.frobenius_norm().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn f_symmetry() {
        let a = sample(3, 3, 2, 51);
        let s = a.add(&t_transpose(&a)).unwrap();
        assert!(is_f_symmetric(&s, 1e-9).unwrap());
        assert!(is_f_symmetric(&identity_tensor(4, 3), 1e-9).unwrap());
        // direct ||A - A^T|| is far from zero for a generic tensor
        assert!(f_asymmetry(&a).unwrap() > 0.1);
        assert!(!is_f_symmetric(&a, 1e-9).unwrap());
    }
}
