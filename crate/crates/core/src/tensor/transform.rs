//! Fourier transform along the tubes of a tensor.
//!
//! The forward transform is unnormalized and the inverse carries the `1/n3`
//! factor, so `A^(1) = (1/n3) * sum_k Â^(k)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::Tensor3;
use crate::error::{Error, Result};

pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-9;

/// Number of leading transform slices that carry independent information for
/// real data: `n3/2 + 1`. The remaining slices are conjugates of these.
///
/// For odd `n3` this equals `(n3 + 1) / 2`; for even `n3` it also includes
/// the self-conjugate Nyquist slice `n3/2`.
#[inline]
pub fn computed_slices(n3: usize) -> usize {
    n3 / 2 + 1
}

/// Zero-based index of the slice whose conjugate equals slice `k`.
#[inline]
pub fn mirror_of(k: usize, n3: usize) -> usize {
    (n3 - k) % n3
}

/// Slices that are real for real data (the DC slice and, for even `n3`, the
/// Nyquist slice).
#[inline]
pub fn is_real_slice(k: usize, n3: usize) -> bool {
    mirror_of(k, n3) == k
}

/// A `1 x 1 x n3` tube.
#[derive(Debug, Clone, PartialEq)]
pub struct Tube {
    pub values: Vec<Complex64>,
}

impl Tube {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Inverse DFT of a transform-domain tube. Returns the real part and the
    /// largest imaginary residue.
    pub fn to_spatial(&self) -> (Vec<f64>, f64) {
        let n = self.values.len();
        let mut buf = self.values.clone();
        FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let residue = buf.iter().fold(0.0f64, |m, c| m.max((c.im * scale).abs()));
        (buf.iter().map(|c| c.re * scale).collect(), residue)
    }
}

/// Complex transform-domain image of a [`Tensor3`], same layout.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformTensor {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<Complex64>,
    real_origin: bool,
}

impl TransformTensor {
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        Self {
            n1,
            n2,
            n3,
            data: vec![Complex64::new(0.0, 0.0); n1 * n2 * n3],
            real_origin: false,
        }
    }

    /// Assembles a conjugate-symmetric transform from its first
    /// [`computed_slices`] slices; the rest are filled by conjugation.
    pub fn from_half_spectrum(n3: usize, half: &[DMatrix<Complex64>]) -> Result<Self> {
        if half.len() != computed_slices(n3) {
            return Err(Error::ShapeMismatch(format!(
                "{} half-spectrum slices for n3 = {n3}",
                half.len()
            )));
        }
        let (n1, n2) = half[0].shape();
        if half.iter().any(|s| s.shape() != (n1, n2)) {
            return Err(Error::ShapeMismatch("half-spectrum slices differ in shape".into()));
        }
        let mut t = Self::zeros(n1, n2, n3);
        for (k, s) in half.iter().enumerate() {
            t.set_slice(k, s);
        }
        for k in computed_slices(n3)..n3 {
            let m = half[mirror_of(k, n3)].map(|c| c.conj());
            t.set_slice(k, &m);
        }
        t.real_origin = true;
        Ok(t)
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    /// True when produced from real data (or assembled conjugate-symmetric).
    pub fn is_real_origin(&self) -> bool {
        self.real_origin
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.n1 + i) * self.n2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.data[self.offset(i, j, k)]
    }

    /// Marks the tensor as free (no symmetry guarantee).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Complex64) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
        self.real_origin = false;
    }

    pub fn slice(&self, k: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n1, self.n2, |i, j| self.get(i, j, k))
    }

    pub fn set_slice(&mut self, k: usize, m: &DMatrix<Complex64>) {
        assert_eq!(m.shape(), (self.n1, self.n2));
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let o = self.offset(i, j, k);
                self.data[o] = m[(i, j)];
            }
        }
        self.real_origin = false;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the departure from conjugate symmetry, i.e. of
    /// `Â^(k) - conj(Â^(mirror(k)))` over all `k`, halved.
    pub fn symmetry_deviation(&self) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.n3 {
            let m = mirror_of(k, self.n3);
            for i in 0..self.n1 {
                for j in 0..self.n2 {
                    acc += (self.get(i, j, k) - self.get(i, j, m).conj()).norm_sqr();
                }
            }
        }
        0.5 * acc.sqrt()
    }
}

fn fft_tubes(n1: usize, n2: usize, n3: usize, data: &mut [Complex64], inverse: bool) {
    if n3 == 1 {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n3)
    } else {
        planner.plan_fft_forward(n3)
    };
    let plane = n1 * n2;
    let mut tube = vec![Complex64::new(0.0, 0.0); n3];
    for p in 0..plane {
        for k in 0..n3 {
            tube[k] = data[k * plane + p];
        }
        fft.process(&mut tube);
        for k in 0..n3 {
            data[k * plane + p] = tube[k];
        }
    }
}

/// DFT along every mode-3 tube. The result is exactly conjugate-symmetric:
/// independent slices are taken from the FFT and the others are mirrored.
pub fn to_transform(t: &Tensor3) -> TransformTensor {
    let (n1, n2, n3) = t.shape();
    let mut data: Vec<Complex64> = t.as_slice().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_tubes(n1, n2, n3, &mut data, false);
    let plane = n1 * n2;
    for k in 0..computed_slices(n3) {
        if is_real_slice(k, n3) {
            for c in &mut data[k * plane..(k + 1) * plane] {
                c.im = 0.0;
            }
        }
    }
    for k in computed_slices(n3)..n3 {
        let m = mirror_of(k, n3);
        for p in 0..plane {
            data[k * plane + p] = data[m * plane + p].conj();
        }
    }
    TransformTensor {
        n1,
        n2,
        n3,
        data,
        real_origin: true,
    }
}

/// Inverse transform with the default symmetry tolerance.
pub fn from_transform(ft: &TransformTensor) -> Result<Tensor3> {
    from_transform_with_tol(ft, DEFAULT_SYMMETRY_TOL)
}

/// Inverse DFT along the tubes. Fails with [`Error::SymmetryViolation`] when
/// the input is not conjugate-symmetric to within `tol * ||ft||_F`; the
/// remaining imaginary residue is discarded.
pub fn from_transform_with_tol(ft: &TransformTensor, tol: f64) -> Result<Tensor3> {
    let deviation = ft.symmetry_deviation();
    let tolerance = tol * ft.frobenius_norm();
    if deviation > tolerance {
        return Err(Error::SymmetryViolation {
            deviation,
            tolerance,
        });
    }
    let (n1, n2, n3) = ft.shape();
    let mut data = ft.data.clone();
    fft_tubes(n1, n2, n3, &mut data, true);
    let scale = 1.0 / n3 as f64;
    Tensor3::new(n1, n2, n3, data.iter().map(|c| c.re * scale).collect())
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

    #[test]
    fn constant_tube_transforms_to_dc() {
        let t = Tensor3::from_fn(1, 1, 5, |_, _, _| 2.5);
        let ft = to_transform(&t);
        assert!((ft.get(0, 0, 0) - Complex64::new(12.5, 0.0)).norm() < 1e-12);
        for k in 1..5 {
            assert!(ft.get(0, 0, k).norm() < 1e-12);
        }
    }

    #[test]
    fn length_one_transform_is_identity() {
        let t = sample(3, 2, 1, 7);
        let ft = to_transform(&t);
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(ft.get(i, j, 0), Complex64::new(t.get(i, j, 0), 0.0));
            }
        }
    }

    #[test]
    fn transform_matches_direct_dft_and_is_conjugate_symmetric() {
        let t = sample(3, 2, 4, 11);
        let ft = to_transform(&t);
        for i in 0..3 {
            for j in 0..2 {
                for k in 0..4 {
                    // direct evaluation of the DFT sum
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in 0..4 {
                        let ang = -2.0 * std::f64::consts::PI * (k * m) as f64 / 4.0;
                        acc += Complex64::from_polar(t.get(i, j, m), ang);
                    }
                    assert!((acc - ft.get(i, j, k)).norm() < 1e-12);
                }
                assert_eq!(ft.get(i, j, 0).im, 0.0);
                assert_eq!(ft.get(i, j, 1).conj(), ft.get(i, j, 3));
            }
        }
    }

    #[test]
    fn round_trip() {
        let t = sample(4, 4, 5, 3);
        let back = from_transform(&to_transform(&t)).unwrap();
        let err = t.sub(&back).unwrap().max_abs();
        assert!(err <= 1e-12, "round trip error {err}");
    }

    #[test]
    fn zero_transform_gives_zero_tensor() {
        let ft = TransformTensor::zeros(2, 3, 4);
        let t = from_transform(&ft).unwrap();
        assert_eq!(t.max_abs(), 0.0);
    }

    #[test]
    fn broken_symmetry_is_rejected() {
        let t = sample(3, 3, 4, 5);
        let mut ft = to_transform(&t);
        let v = ft.get(0, 1, 1);
        ft.set(0, 1, 1, v + Complex64::new(1e-3, 0.0));
        assert!(matches!(
            from_transform(&ft),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn mirror_indices() {
        assert_eq!(computed_slices(4), 3);
        assert_eq!(computed_slices(5), 3);
        assert_eq!(mirror_of(0, 4), 0);
        assert_eq!(mirror_of(1, 4), 3);
        assert!(is_real_slice(2, 4));
        assert!(!is_real_slice(2, 5));
    }

    #[test]
    fn tube_inverse() {
        let tube = Tube {
            values: vec![Complex64::new(3.0, 0.0); 3],
        };
        let (re, residue) = tube.to_spatial();
        assert!((re[0] - 3.0).abs() < 1e-14 && re[1].abs() < 1e-14 && re[2].abs() < 1e-14);
        assert!(residue < 1e-14);
    }
}
