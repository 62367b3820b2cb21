//! Eigentubes and eigenslices of f-symmetric tensors.
//!
//! Everything reduces to independent Hermitian problems on the transform
//! slices `Â^(k)`, `k < n3/2 + 1`; the other slices follow by conjugation.
//! Eigenvectors are phase-normalized (first significant component real and
//! positive) so results are deterministic.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;
use crate::slice_linalg::{
    cholesky_lower, hermitian_eig, normalize_phase, select_columns, sorted_order, CMat,
};
use crate::tensor::{
    computed_slices, from_transform, is_real_slice, mirror_of, t_product, to_transform, Tensor3,
    TransformTensor, Tube,
};

/// Tolerance used when an input is required to be f-symmetric.
pub const F_SYMMETRY_TOL: f64 = 1e-8;

/// How eigenvalues are ordered within each transform slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenOrdering {
    /// `|δ_l| >= |δ_{l+1}|`
    Magnitude,
    /// `δ_l >= δ_{l+1}`
    SignedDesc,
    /// `δ_l <= δ_{l+1}`
    SignedAsc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Largest,
    SmallestNonzero,
}

/// An f-diagonal tensor stored as an `n x n3` table of transform-domain
/// diagonal values: row `l` is the eigentube `μ_l`, column `k` the slice.
#[derive(Debug, Clone, PartialEq)]
pub struct FDiagonal {
    n: usize,
    n3: usize,
    values: Vec<Complex64>,
}

impl FDiagonal {
    pub fn new(n: usize, n3: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n * n3 {
            return Err(Error::ShapeMismatch(format!(
                "{} values for an {n}x{n3} tube table",
                values.len()
            )));
        }
        Ok(Self { n, n3, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    /// Transform-domain value `δ_{l,k}`.
    #[inline]
    pub fn value(&self, l: usize, k: usize) -> Complex64 {
        self.values[l * self.n3 + k]
    }

    pub fn tube(&self, l: usize) -> Tube {
        Tube {
            values: self.values[l * self.n3..(l + 1) * self.n3].to_vec(),
        }
    }

    /// First `m` rows.
    pub fn leading(&self, m: usize) -> FDiagonal {
        assert!(m <= self.n);
        Self {
            n: m,
            n3: self.n3,
            values: self.values[..m * self.n3].to_vec(),
        }
    }

    pub fn scaled(&self, s: f64) -> FDiagonal {
        Self {
            n: self.n,
            n3: self.n3,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// Spatial-domain tubes (inverse DFT of every row) and the largest
    /// imaginary residue discarded on the way.
    pub fn spatial_tubes(&self) -> (Vec<Vec<f64>>, f64) {
        let mut residue = 0.0f64;
        let rows = (0..self.n)
            .map(|l| {
                let (re, r) = self.tube(l).to_spatial();
                residue = residue.max(r);
                re
            })
            .collect();
        (rows, residue)
    }

    pub fn to_transform(&self) -> TransformTensor {
        let mut t = TransformTensor::zeros(self.n, self.n, self.n3);
        let half: Vec<CMat> = (0..computed_slices(self.n3))
            .map(|k| {
                let mut m = CMat::zeros(self.n, self.n);
                for l in 0..self.n {
                    m[(l, l)] = self.value(l, k);
                }
                m
            })
            .collect();
        if let Ok(full) = TransformTensor::from_half_spectrum(self.n3, &half) {
            t = full;
        }
        t
    }

    /// The `n x n x n3` f-diagonal tensor in the spatial domain.
    pub fn to_tensor(&self) -> Result<Tensor3> {
        from_transform(&self.to_transform())
    }
}

/// Eigenslices (lateral slices of `eigenslices`) with their eigentubes.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub eigenslices: Tensor3,
    pub eigentubes: FDiagonal,
    /// `||A★V - V★Λ||_F` (or `||A★U - B★U★Λ||_F` for generalized problems).
    pub residual: f64,
}

fn check_square(a: &Tensor3, what: &str) -> Result<()> {
    if a.n1() != a.n2() {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be square in modes 1 and 2, got {:?}",
            a.shape()
        )));
    }
    Ok(())
}

pub(crate) fn require_f_symmetric(a: &Tensor3) -> Result<()> {
    check_square(a, "tensor")?;
    let deviation = crate::tensor::t_transpose(a).sub(a)?.frobenius_norm();
    if deviation > F_SYMMETRY_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::NotFSymmetric { deviation });
    }
    Ok(())
}

struct SliceEig {
    values: Vec<f64>,
    vectors: CMat,
}

fn order_key(ordering: EigenOrdering) -> fn(f64) -> f64 {
    match ordering {
        EigenOrdering::Magnitude => |v: f64| -v.abs(),
        EigenOrdering::SignedDesc => |v: f64| -v,
        EigenOrdering::SignedAsc => |v: f64| v,
    }
}

fn sorted_slice_eig(m: &CMat, real: bool, slice: usize, ordering: EigenOrdering) -> Result<SliceEig> {
    let (vals, vecs) = hermitian_eig(m, real, slice)?;
    let idx = sorted_order(&vals, order_key(ordering));
    let mut vectors = select_columns(&vecs, &idx);
    normalize_phase(&mut vectors);
    Ok(SliceEig {
        values: idx.iter().map(|&i| vals[i]).collect(),
        vectors,
    })
}

/// Assembles eigen-pairs from per-slice results over the independent half of
/// the spectrum, keeping columns `cols[k]` of slice `k`.
fn assemble(n3: usize, half: &[SliceEig], cols: &[Vec<usize>]) -> Result<(Tensor3, FDiagonal)> {
    let m = cols[0].len();
    let vhalf: Vec<CMat> = half
        .iter()
        .zip(cols)
        .map(|(s, c)| select_columns(&s.vectors, c))
        .collect();
    let v = from_transform(&TransformTensor::from_half_spectrum(n3, &vhalf)?)?;
    let mut values = vec![Complex64::new(0.0, 0.0); m * n3];
    for k in 0..n3 {
        let src = mirror_of(k, n3).min(k);
        for (l, &c) in cols[src].iter().enumerate() {
            values[l * n3 + k] = Complex64::new(half[src].values[c], 0.0);
        }
    }
    Ok((v, FDiagonal::new(m, n3, values)?))
}

/// Full eigen-decomposition of an f-symmetric tensor, eigentubes ordered per
/// `ordering` within each transform slice.
pub fn eig_f_symmetric(a: &Tensor3, ordering: EigenOrdering) -> Result<EigenPairs> {
    require_f_symmetric(a)?;
    let (n, _, n3) = a.shape();
    let fa = to_transform(a);
    let half = par::map_indices(computed_slices(n3), |k| {
        sorted_slice_eig(&fa.slice(k), is_real_slice(k, n3), k, ordering)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let cols = vec![(0..n).collect::<Vec<_>>(); half.len()];
    let (v, lambda) = assemble(n3, &half, &cols)?;
    let residual = t_product(a, &v)?
        .sub(&t_product(&v, &lambda.to_tensor()?)?)?
        .frobenius_norm();
    Ok(EigenPairs {
        eigenslices: v,
        eigentubes: lambda,
        residual,
    })
}

impl EigenPairs {
    /// The first `m` eigen-pairs.
    pub fn leading(&self, m: usize) -> EigenPairs {
        EigenPairs {
            eigenslices: self.eigenslices.lateral_range(0, m),
            eigentubes: self.eigentubes.leading(m),
            residual: self.residual,
        }
    }
}

/// Default relative zero threshold for [`Which::SmallestNonzero`].
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

/// Threshold at the level of rounding error, for problems whose informative
/// eigenvalues can be many orders of magnitude below the largest one.
pub const ROUNDING_ZERO_TOL: f64 = 100.0 * f64::EPSILON;

/// Threshold below which a generalized eigenvalue counts as zero:
/// `1e-8 * n * max_k |λ_max^(k)|`.
pub fn zero_tolerance(n: usize, max_abs_eigenvalue: f64) -> f64 {
    DEFAULT_ZERO_TOL * n as f64 * max_abs_eigenvalue
}

/// Solves `Â^(k) u = λ B̂^(k) u` slice by slice and returns `d` eigen-pairs,
/// normalized so that `U^T ★ B ★ U = I_d`.
///
/// With [`Which::SmallestNonzero`] the eigenvalues with `|λ| <=`
/// [`zero_tolerance`] are skipped in every slice before the `d` smallest are
/// taken.
pub fn generalized_eig(a: &Tensor3, b: &Tensor3, d: usize, which: Which) -> Result<EigenPairs> {
    generalized_eig_with_tol(a, b, d, which, DEFAULT_ZERO_TOL)
}

/// [`generalized_eig`] with zero threshold `rel_zero_tol * n * max_k |λ_max^(k)|`.
pub fn generalized_eig_with_tol(a: &Tensor3, b: &Tensor3, d: usize, which: Which, rel_zero_tol: f64) -> Result<EigenPairs> {
    require_f_symmetric(a)?;
    require_f_symmetric(b)?;
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "generalized eigenproblem on {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let (n, _, n3) = a.shape();
    if d == 0 || d > n {
        return Err(Error::InvalidParameter(format!("d = {d} must lie in 1..={n}")));
    }
    let fa = to_transform(a);
    let fb = to_transform(b);
    let ordering = match which {
        Which::Largest => EigenOrdering::SignedDesc,
        Which::SmallestNonzero => EigenOrdering::SignedAsc,
    };
    let half = par::map_indices(computed_slices(n3), |k| -> Result<SliceEig> {
        let real = is_real_slice(k, n3);
        let l = cholesky_lower(&fb.slice(k), real).ok_or(Error::NotPositiveDefinite { slice: k })?;
        let ak = fa.slice(k);
        let x = l
            .solve_lower_triangular(&ak)
            .ok_or(Error::NotPositiveDefinite { slice: k })?;
        let c = l
            .solve_lower_triangular(&x.adjoint())
            .ok_or(Error::NotPositiveDefinite { slice: k })?;
        let (vals, ys) = hermitian_eig(&c, real, k)?;
        let us = l
            .adjoint()
            .solve_upper_triangular(&ys)
            .ok_or(Error::NotPositiveDefinite { slice: k })?;
        let idx = sorted_order(&vals, order_key(ordering));
        let mut vectors = select_columns(&us, &idx);
        normalize_phase(&mut vectors);
        Ok(SliceEig {
            values: idx.iter().map(|&i| vals[i]).collect(),
            vectors,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let max_abs = half
        .iter()
        .flat_map(|s| s.values.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let zero_tol = rel_zero_tol * n as f64 * max_abs;
    let cols = half
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let keep: Vec<usize> = match which {
                Which::Largest => (0..d).collect(),
                Which::SmallestNonzero => (0..n)
                    .filter(|&i| s.values[i].abs() > zero_tol)
                    .take(d)
                    .collect(),
            };
            if keep.len() < d {
                let found = s.values.iter().filter(|v| v.abs() > zero_tol).count();
                return Err(Error::InsufficientNonzero {
                    slice: k,
                    found,
                    needed: d,
                });
            }
            Ok(keep)
        })
        .collect::<Result<Vec<_>>>()?;
    let (u, lambda) = assemble(n3, &half, &cols)?;
    let residual = t_product(a, &u)?
        .sub(&t_product(&t_product(b, &u)?, &lambda.to_tensor()?)?)?
        .frobenius_norm();
    Ok(EigenPairs {
        eigenslices: u,
        eigentubes: lambda,
        residual,
    })
}

/// Ascending eigenvalues of every transform slice of an f-symmetric tensor
/// (all `n3` slices, mirrored ones included).
pub fn transform_eigenvalues(a: &Tensor3) -> Result<Vec<Vec<f64>>> {
    require_f_symmetric(a)?;
    let n3 = a.n3();
    let fa = to_transform(a);
    let half = par::map_indices(computed_slices(n3), |k| {
        sorted_slice_eig(&fa.slice(k), is_real_slice(k, n3), k, EigenOrdering::SignedAsc)
            .map(|s| s.values)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok((0..n3).map(|k| half[mirror_of(k, n3).min(k)].clone()).collect())
}

fn extreme_eigenvalues(a: &Tensor3) -> Result<(f64, f64)> {
    let eigs = transform_eigenvalues(a)?;
    let min = eigs.iter().map(|e| e[0]).fold(f64::INFINITY, f64::min);
    let max_abs = eigs
        .iter()
        .flat_map(|e| e.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((min, max_abs))
}

/// Every transform slice has minimum eigenvalue above `1e-10 * max|λ|`.
pub fn is_positive_definite(a: &Tensor3) -> Result<bool> {
    let (min, max_abs) = extreme_eigenvalues(a)?;
    Ok(max_abs > 0.0 && min > 1e-10 * max_abs)
}

/// Every transform slice has minimum eigenvalue at least `-1e-10 * max|λ|`.
pub fn is_positive_semidefinite(a: &Tensor3) -> Result<bool> {
    let (min, max_abs) = extreme_eigenvalues(a)?;
    Ok(min >= -1e-10 * max_abs)
}

/// Singular values of every transform slice, descending; `n3` rows.
pub fn transform_singular_values(a: &Tensor3) -> Vec<Vec<f64>> {
    let n3 = a.n3();
    let fa = to_transform(a);
    let half = par::map_indices(computed_slices(n3), |k| {
        let mut s: Vec<f64> = fa.slice(k).singular_values().iter().copied().collect();
        s.sort_by(|x, y| y.total_cmp(x));
        s
    });
    (0..n3).map(|k| half[mirror_of(k, n3).min(k)].clone()).collect()
}

/// Number of singular tubes `i` with `max_k σ_{i,k} > tol * max σ`.
pub fn tubal_rank(a: &Tensor3, tol: f64) -> usize {
    let sv = transform_singular_values(a);
    let r = sv[0].len();
    let top = sv.iter().map(|s| s[0]).fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    (0..r)
        .filter(|&i| sv.iter().map(|s| s[i]).fold(0.0f64, f64::max) > tol * top)
        .count()
}

/// Every transform slice is Hermitian with real non-positive off-diagonal
/// entries and zero row sums, all within `tol * max(1, max|Â|)`.
pub fn is_laplacian(a: &Tensor3, tol: f64) -> bool {
    let (n, n2, n3) = a.shape();
    if n != n2 {
        return false;
    }
    let fa = to_transform(a);
    (0..computed_slices(n3)).all(|k| {
        let s = fa.slice(k);
        let scale = s.iter().fold(1.0f64, |m, c| m.max(c.norm()));
        let eps = tol * scale;
        for i in 0..n {
            let row: Complex64 = (0..n).map(|j| s[(i, j)]).sum();
            if row.norm() > eps {
                return false;
            }
            for j in 0..n {
                if (s[(i, j)] - s[(j, i)].conj()).norm() > eps {
                    return false;
                }
                if i != j && (s[(i, j)].re > eps || s[(i, j)].im.abs() > eps) {
                    return false;
                }
            }
        }
        true
    })
}

/// Per-slice smallest singular value of `Â N`, where `N` spans the numerical
/// null space of `B̂` (eigenvalues below the zero tolerance). Returns the
/// minimum over slices of `σ_min(Â N) / ||Â||` and the largest per-slice
/// null-space dimension.
pub(crate) fn shared_null_measure(a: &Tensor3, b: &Tensor3) -> Result<(f64, usize)> {
    let (n, _, n3) = b.shape();
    let fa = to_transform(a);
    let fb = to_transform(b);
    let half = par::map_indices(computed_slices(n3), |k| {
        let real = is_real_slice(k, n3);
        sorted_slice_eig(&fb.slice(k), real, k, EigenOrdering::SignedAsc).map(|e| (k, e))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let max_abs = half
        .iter()
        .flat_map(|(_, e)| e.values.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let zero = zero_tolerance(n, max_abs).max(f64::MIN_POSITIVE);
    let mut closest = f64::INFINITY;
    let mut max_nullity = 0;
    for (k, e) in &half {
        let null: Vec<usize> = (0..n).filter(|&i| e.values[i].abs() <= zero).collect();
        max_nullity = max_nullity.max(null.len());
        if null.is_empty() {
            continue;
        }
        let basis = select_columns(&e.vectors, &null);
        let ak = fa.slice(*k);
        let norm = ak.norm().max(f64::MIN_POSITIVE);
        let s = (&ak * basis).singular_values();
        let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
        closest = closest.min(smin / norm);
    }
    Ok((closest, max_nullity))
}

/// Real diagonal matrix helper for tests and callers that build f-diagonal
/// tensors slice by slice.
pub fn f_diagonal_from_spatial(diag: &DMatrix<f64>) -> Tensor3 {
    let (n, n3) = diag.shape();
    Tensor3::from_fn(n, n, n3, |i, j, k| if i == j { diag[(i, k)] } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{identity_tensor, t_transpose};

    fn sample(n1: usize, n2: usize, n3: usize, seed: u64) -> Tensor3 {
        let mut s = seed;
        Tensor3::from_fn(n1, n2, n3, |_, _, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    fn sym(n: usize, n3: usize, seed: u64) -> Tensor3 {
        let a = sample(n, n, n3, seed);
        a.add(&t_transpose(&a)).unwrap()
    }

    fn gram_residual(v: &Tensor3) -> f64 {
        let g = t_product(&t_transpose(v), v).unwrap();
        g.sub(&identity_tensor(v.n2(), v.n3())).unwrap().frobenius_norm()
    }

    #[test]
    fn identity_eigentubes_are_unit_tubes() {
        let e = eig_f_symmetric(&identity_tensor(3, 4), EigenOrdering::Magnitude).unwrap();
        let (tubes, residue) = e.eigentubes.spatial_tubes();
        for t in tubes {
            assert!((t[0] - 1.0).abs() < 1e-14);
            assert!(t[1..].iter().all(|v| v.abs() < 1e-14));
        }
        assert!(residue < 1e-14);
        assert!(gram_residual(&e.eigenslices) < 1e-12);
    }

    #[test]
    fn f_diagonal_input() {
        let diag = DMatrix::from_fn(3, 3, |i, k| if k == 0 { 3.0 - i as f64 } else { 0.1 * (i + 1) as f64 });
        let a = f_diagonal_from_spatial(&diag);
        let e = eig_f_symmetric(&a, EigenOrdering::SignedDesc).unwrap();
        assert!(e.residual < 1e-10);
        let fa = to_transform(&a);
        for k in 0..3 {
            let mut expect: Vec<f64> = (0..3).map(|i| fa.get(i, i, k).re).collect();
            expect.sort_by(|x, y| y.total_cmp(x));
            for (l, ex) in expect.iter().enumerate() {
                assert!((e.eigentubes.value(l, k).re - ex).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_symmetric_residual_and_reconstruction() {
        let a = sym(6, 3, 17);
        let e = eig_f_symmetric(&a, EigenOrdering::SignedDesc).unwrap();
        assert!(e.residual <= 1e-8 * a.frobenius_norm());
        assert!(gram_residual(&e.eigenslices) <= 1e-8);
        let v = &e.eigenslices;
        let rec = t_product(&t_product(v, &e.eigentubes.to_tensor().unwrap()).unwrap(), &t_transpose(v)).unwrap();
        assert!(rec.sub(&a).unwrap().frobenius_norm() <= 1e-7 * a.frobenius_norm());
        // signed descending per slice
        for k in 0..3 {
            for l in 0..5 {
                assert!(e.eigentubes.value(l, k).re >= e.eigentubes.value(l + 1, k).re);
            }
        }
    }

    #[test]
    fn rejects_non_symmetric() {
        let a = sample(3, 3, 2, 4);
        assert!(matches!(
            eig_f_symmetric(&a, EigenOrdering::SignedAsc),
            Err(Error::NotFSymmetric { .. })
        ));
    }

    #[test]
    fn generalized_with_identity_matches_standard() {
        let a = sym(5, 3, 23);
        let g = generalized_eig(&a, &identity_tensor(5, 3), 2, Which::Largest).unwrap();
        let e = eig_f_symmetric(&a, EigenOrdering::SignedDesc).unwrap();
        for k in 0..3 {
            for l in 0..2 {
                assert!((g.eigentubes.value(l, k) - e.eigentubes.value(l, k)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn generalized_requires_definite_b() {
        let a = sym(3, 2, 1);
        let b = Tensor3::zeros(3, 3, 2);
        assert!(matches!(
            generalized_eig(&a, &b, 1, Which::Largest),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    fn path_laplacian(n3: usize) -> Tensor3 {
        // replicated 3-node path Laplacian in every transform slice means the
        // spatial tensor has it in slice 0 only
        let l = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        Tensor3::from_fn(3, 3, n3, |i, j, k| if k == 0 { l[i][j] } else { 0.0 })
    }

    #[test]
    fn laplacian_detection_and_definiteness() {
        let lap = path_laplacian(3);
        assert!(is_laplacian(&lap, 1e-10));
        assert!(!is_laplacian(&identity_tensor(3, 3), 1e-10));
        assert!(is_positive_semidefinite(&lap).unwrap());
        assert!(!is_positive_definite(&lap).unwrap());
        assert!(is_positive_definite(&identity_tensor(4, 2)).unwrap());
        let c = sample(4, 4, 3, 5);
        let pd = t_product(&c, &t_transpose(&c))
            .unwrap()
            .axpy(0.1, &identity_tensor(4, 3))
            .unwrap()
            .symmetrized()
            .unwrap();
        assert!(is_positive_definite(&pd).unwrap());
        let eigs = transform_eigenvalues(&pd).unwrap();
        assert!(eigs.iter().all(|e| e[0] > 0.0));
    }

    #[test]
    fn laplacian_smallest_nonzero_skips_null_vector() {
        let lap = path_laplacian(2);
        let deg = f_diagonal_from_spatial(&DMatrix::from_fn(3, 2, |i, k| {
            if k == 0 {
                [1.0, 2.0, 1.0][i]
            } else {
                0.0
            }
        }));
        let g = generalized_eig(&lap, &deg, 2, Which::SmallestNonzero).unwrap();
        for k in 0..2 {
            assert!(g.eigentubes.value(0, k).re > 1e-6);
        }
        let all = generalized_eig(&lap, &deg, 3, Which::Largest).unwrap();
        for k in 0..2 {
            assert!(all.eigentubes.value(2, k).re.abs() < 1e-12);
        }
        assert!(matches!(
            generalized_eig(&lap, &deg, 3, Which::SmallestNonzero),
            Err(Error::InsufficientNonzero { .. })
        ));
    }

    #[test]
    fn tubal_rank_cases() {
        assert_eq!(tubal_rank(&identity_tensor(4, 3), 1e-10), 4);
        assert_eq!(tubal_rank(&Tensor3::zeros(3, 3, 2), 1e-10), 0);
        let v = sample(5, 1, 3, 77);
        let outer = t_product(&v, &t_transpose(&v)).unwrap();
        assert_eq!(tubal_rank(&outer, 1e-10), 1);
    }
}
