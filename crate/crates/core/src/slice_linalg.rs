//! Dense per-slice linear algebra used by the transform-domain solvers.
//!
//! Slices that are real for real data (DC and Nyquist) are handled with real
//! arithmetic so their eigenvectors and QR factors stay exactly real, which
//! keeps inverse transforms real.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) type CMat = DMatrix<Complex64>;

const EIG_MAX_ITER: usize = 10_000;

pub(crate) fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub(crate) fn re_part(m: &CMat) -> DMatrix<f64> {
    m.map(|c| c.re)
}

pub(crate) fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Eigen-decomposition of the Hermitian part of `m`. Eigenvalues are
/// returned unsorted together with unit eigenvectors as columns.
pub(crate) fn hermitian_eig(m: &CMat, real: bool, slice: usize) -> Result<(Vec<f64>, CMat)> {
    if real {
        let r = re_part(m);
        let sym = (&r + r.transpose()).scale(0.5);
        let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIG_MAX_ITER)
            .ok_or(Error::SliceEigFailure { slice })?;
        Ok((eig.eigenvalues.iter().copied().collect(), to_complex(&eig.eigenvectors)))
    } else {
        let eig = SymmetricEigen::try_new(hermitian_part(m), f64::EPSILON, EIG_MAX_ITER)
            .ok_or(Error::SliceEigFailure { slice })?;
        Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
    }
}

/// Rotates every column so that its first non-negligible component is real
/// and positive.
pub(crate) fn normalize_phase(v: &mut CMat) {
    for mut col in v.column_iter_mut() {
        let peak = col.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if peak == 0.0 {
            continue;
        }
        if let Some(lead) = col.iter().find(|c| c.norm() > 1e-6 * peak).copied() {
            let phase = lead.conj() / lead.norm();
            for c in col.iter_mut() {
                *c *= phase;
            }
        }
    }
}

/// Permutation of `vals` by the requested key, stable so ties keep the
/// solver's order.
pub(crate) fn sorted_order(vals: &[f64], key: impl Fn(f64) -> f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| key(vals[a]).total_cmp(&key(vals[b])));
    idx
}

pub(crate) fn select_columns(m: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}

/// Orthonormal basis of the column space of `m` (thin QR, `R` with
/// non-negative diagonal).
pub(crate) fn thin_q(m: &CMat, real: bool) -> CMat {
    if real {
        let qr = re_part(m).qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..q.ncols().min(r.nrows()) {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        to_complex(&q)
    } else {
        let qr = m.clone().qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..q.ncols().min(r.nrows()) {
            let d = r[(j, j)];
            if d.norm() > 0.0 {
                let phase = d / d.norm();
                for c in q.column_mut(j).iter_mut() {
                    *c *= phase;
                }
            }
        }
        q
    }
}

/// Lower Cholesky factor of the Hermitian part of `m`, `None` if it is not
/// positive definite.
pub(crate) fn cholesky_lower(m: &CMat, real: bool) -> Option<CMat> {
    if real {
        let r = re_part(m);
        let sym = (&r + r.transpose()).scale(0.5);
        sym.cholesky().map(|c| to_complex(&c.l()))
    } else {
        hermitian_part(m).cholesky().map(|c| c.l())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_normalization_makes_lead_positive() {
        let mut v = CMat::from_column_slice(
            2,
            1,
            &[Complex64::new(0.0, -0.6), Complex64::new(0.8, 0.0)],
        );
        normalize_phase(&mut v);
        assert!((v[(0, 0)] - Complex64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((v[(1, 0)] - Complex64::new(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn thin_q_is_orthonormal() {
        let m = CMat::from_fn(5, 2, |i, j| Complex64::new((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let q = thin_q(&m, false);
        let g = q.adjoint() * &q;
        assert!((g - CMat::identity(2, 2)).norm() < 1e-12);
    }
}
