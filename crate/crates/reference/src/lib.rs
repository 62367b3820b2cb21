//! Plain-matrix versions of local discriminant embedding, Laplacian
//! eigenmaps and locally linear embedding, used as test oracles for the
//! tensor methods at `n3 = 1`.
//!
//! Everything here is deliberately straightforward: dense `f64` matrices,
//! `O(n²)` neighbor search and textbook eigen-solves.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Heat-kernel width; `None` means binary weights.
pub type Width = Option<f64>;

fn sq_dist(x: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    (x.row(i) - x.row(j)).norm_squared()
}

/// `k` nearest allowed neighbors of every row of `x` (nearest first, ties to
/// the lower index).
pub fn knn(x: &DMatrix<f64>, k: usize, allowed: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let n = x.nrows();
    (0..n)
        .map(|i| {
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i && allowed(i, j))
                .map(|j| (sq_dist(x, i, j), j))
                .collect();
            cand.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            cand.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect()
}

/// Symmetric (OR) kNN affinity matrix of the rows of `x`.
pub fn knn_affinity(x: &DMatrix<f64>, k: usize, width: Width, allowed: &dyn Fn(usize, usize) -> bool) -> DMatrix<f64> {
    let n = x.nrows();
    let mut w = DMatrix::zeros(n, n);
    for (i, nb) in knn(x, k, allowed).into_iter().enumerate() {
        for j in nb {
            let v = match width {
                Some(t) => (-sq_dist(x, i, j) / t).exp(),
                None => 1.0,
            };
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    w
}

pub fn laplacian(w: &DMatrix<f64>) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&DVector::from_iterator(w.nrows(), w.row_iter().map(|r| r.sum())));
    d - w
}

/// Eigen-pairs of a symmetric matrix sorted by ascending eigenvalue.
fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].partial_cmp(&e.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), idx.len(), |r, c| e.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Top-`d` eigenvectors of a symmetric matrix.
fn top_eigenvectors(m: &DMatrix<f64>, d: usize) -> DMatrix<f64> {
    let (_, vecs) = sorted_eigen(m);
    let n = vecs.ncols();
    DMatrix::from_fn(m.nrows(), d, |r, c| vecs[(r, n - 1 - c)])
}

/// Maximizes `tr(VᵀAV)/tr(VᵀBV)` over orthonormal `n x d` matrices by the
/// Newton iteration on `ρ`. Returns `(V, ρ*, iterations)`.
pub fn trace_ratio(a: &DMatrix<f64>, b: &DMatrix<f64>, d: usize, eps: f64, max_iter: usize) -> (DMatrix<f64>, f64, usize) {
    let ratio = |v: &DMatrix<f64>| (v.transpose() * a * v).trace() / (v.transpose() * b * v).trace();
    let mut v = top_eigenvectors(a, d);
    let mut rho = ratio(&v);
    for it in 1..=max_iter {
        v = top_eigenvectors(&(a - b * rho), d);
        let next = ratio(&v);
        let done = (next - rho).abs() <= eps;
        rho = next;
        if done {
            return (v, rho, it);
        }
    }
    (v, rho, max_iter)
}

/// Local discriminant embedding. `x` holds samples as columns (`p x n`).
/// Returns the `p x d` projection and `ρ*`.
pub fn lde(x: &DMatrix<f64>, labels: &[usize], d: usize, k1: usize, k2: usize, width: Width) -> (DMatrix<f64>, f64) {
    let rows = x.transpose();
    let w = knn_affinity(&rows, k1, width, &|i, j| labels[i] == labels[j]);
    let wb = knn_affinity(&rows, k2, width, &|i, j| labels[i] != labels[j]);
    let within = x * laplacian(&w) * x.transpose();
    let between = x * laplacian(&wb) * x.transpose();
    let (v, rho, _) = trace_ratio(&between, &within, d, 1e-12, 200);
    (v, rho)
}

/// Laplacian eigenmaps on the rows of `x`: the `d` generalized eigenvectors
/// of `L y = λ D y` with the smallest non-zero eigenvalues.
pub fn laplacian_eigenmaps(x: &DMatrix<f64>, d: usize, k: usize, width: Width) -> DMatrix<f64> {
    let w = knn_affinity(x, k, width, &|_, _| true);
    let deg: Vec<f64> = w.row_iter().map(|r| r.sum()).collect();
    let s = DMatrix::from_fn(w.nrows(), w.ncols(), |i, j| {
        let lij = if i == j { deg[i] } else { 0.0 } - w[(i, j)];
        lij / (deg[i] * deg[j]).sqrt()
    });
    let (vals, vecs) = sorted_eigen(&s);
    let tol = 1e-9 * vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].abs() > tol).take(d).collect();
    DMatrix::from_fn(x.nrows(), keep.len(), |r, c| vecs[(r, keep[c])] / deg[r].sqrt())
}

/// Locally linear embedding of the rows of `x` with `k` neighbors. Gram
/// matrices with condition number above `1e12` get `reg·trace/k` added to
/// the diagonal. The bottom (constant) eigenvector is discarded and the
/// result is scaled so that `YᵀY = n·I`.
pub fn lle(x: &DMatrix<f64>, d: usize, k: usize, reg: f64) -> DMatrix<f64> {
    let n = x.nrows();
    let mut w = DMatrix::zeros(n, n);
    for (i, nb) in knn(x, k, &|_, _| true).into_iter().enumerate() {
        let z = DMatrix::from_fn(nb.len(), x.ncols(), |a, f| x[(nb[a], f)] - x[(i, f)]);
        let mut g = &z * z.transpose();
        let ev = SymmetricEigen::new(g.clone()).eigenvalues;
        let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v.abs())));
        if lo <= 0.0 || hi / lo > 1e12 {
            let tr = g.trace();
            let delta = reg * if tr > 0.0 { tr / nb.len() as f64 } else { 1.0 };
            for a in 0..nb.len() {
                g[(a, a)] += delta;
            }
        }
        let e = g.lu().solve(&DVector::from_element(nb.len(), 1.0)).expect("regularized Gram");
        let s = e.sum();
        for (a, &j) in nb.iter().enumerate() {
            w[(i, j)] = e[a] / s;
        }
    }
    let iw = DMatrix::identity(n, n) - w;
    let m = iw.transpose() * iw;
    let (_, vecs) = sorted_eigen(&m);
    DMatrix::from_fn(n, d, |r, c| vecs[(r, c + 1)] * (n as f64).sqrt())
}

/// Orthonormal basis of the column space.
pub fn orthonormal_basis(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().qr().q()
}

/// `‖P_a − P_b‖_F` for the orthogonal projectors onto the column spaces.
pub fn projector_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let qa = orthonormal_basis(a);
    let qb = orthonormal_basis(b);
    (&qa * qa.transpose() - &qb * qb.transpose()).norm()
}

/// Two-dimensional "S-curve" manifold embedded in 3-D, `n` points on a
/// deterministic grid-like sequence.
pub fn s_curve(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, 3, |i, c| {
        let u = i as f64 / n as f64;
        let t = 3.0 * std::f64::consts::PI * (u - 0.5);
        // golden-ratio sequence for the height
        let h = 2.0 * ((i as f64 * 0.618_033_988_749_895) % 1.0);
        match c {
            0 => t.sin(),
            1 => h,
            _ => t.signum() * (t.cos() - 1.0),
        }
    })
}
