//! The tensor trace-ratio problem
//!
//! ```text
//! maximize  Trace(Vᵀ★A★V) / Trace(Vᵀ★B★V)   subject to  Vᵀ★V = I_d
//! ```
//!
//! solved by Newton iteration on `f(ρ) = max Trace(Vᵀ★(A − ρB)★V)`, whose
//! derivative is `−Trace(V(ρ)ᵀ★B★V(ρ))`. Each step takes the eigenslices of
//! the `d` signed-largest eigentubes of `A − ρB` and updates `ρ` to the ratio
//! they attain.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::slice_linalg::{thin_q, CMat};
use crate::spectral::{
    eig_f_symmetric, is_positive_semidefinite, require_f_symmetric, shared_null_measure,
    tubal_rank, EigenOrdering, FDiagonal,
};
use crate::tensor::{
    computed_slices, from_transform, identity_tensor, is_real_slice, t_product, t_transpose,
    to_transform, trace, Tensor3, TransformTensor,
};

/// Tolerance on `||VᵀV − I||_F` accepted by [`objective`].
pub const F_ORTHOGONALITY_TOL: f64 = 1e-6;

const TUBAL_RANK_TOL: f64 = 1e-10;
const SHARED_NULL_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct TraceRatioProblem {
    a: Tensor3,
    b: Tensor3,
    d: usize,
}

impl TraceRatioProblem {
    /// `a` is the numerator and `b` the denominator tensor, both f-symmetric
    /// `n x n x n3`; `1 <= d < n`.
    pub fn new(a: Tensor3, b: Tensor3, d: usize) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::ShapeMismatch(format!(
                "numerator {:?} vs denominator {:?}",
                a.shape(),
                b.shape()
            )));
        }
        require_f_symmetric(&a)?;
        require_f_symmetric(&b)?;
        let n = a.n1();
        if d == 0 || d >= n {
            return Err(Error::InvalidParameter(format!("d = {d} must satisfy 1 <= d < {n}")));
        }
        Ok(Self { a, b, d })
    }

    pub fn a(&self) -> &Tensor3 {
        &self.a
    }

    pub fn b(&self) -> &Tensor3 {
        &self.b
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.a.n1()
    }

    pub fn n3(&self) -> usize {
        self.a.n3()
    }

    /// `A − ρB`
    pub fn shifted(&self, rho: f64) -> Tensor3 {
        self.a.axpy(-rho, &self.b).expect("shapes checked on construction")
    }
}

/// Diagnostics of a Newton run. `rho_history[i]` is the i-th iterate and
/// `f_history[i] = f(rho_history[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub rho_history: Vec<f64>,
    pub f_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Set when some slice had equal `d`-th and `(d+1)`-th eigenvalues at an
    /// evaluated `ρ`, so `V(ρ)` was picked by the deterministic ordering.
    pub degenerate: bool,
}

/// `Trace(VᵀAV)` for an `n x d x n3` basis.
fn quadratic_trace(m: &Tensor3, v: &Tensor3) -> Result<f64> {
    trace(&t_product(&t_transpose(v), &t_product(m, v)?)?)
}

/// `||VᵀV − I_d||_F`
pub fn f_orthogonality_error(v: &Tensor3) -> Result<f64> {
    let g = t_product(&t_transpose(v), v)?;
    Ok(g.sub(&identity_tensor(v.n2(), v.n3()))?.frobenius_norm())
}

/// `Trace(VᵀAV) / Trace(VᵀBV)` for an f-orthogonal `V`.
pub fn objective(p: &TraceRatioProblem, v: &Tensor3) -> Result<f64> {
    if v.shape() != (p.n(), p.d(), p.n3()) {
        return Err(Error::ShapeMismatch(format!(
            "basis {:?}, expected {:?}",
            v.shape(),
            (p.n(), p.d(), p.n3())
        )));
    }
    let deviation = f_orthogonality_error(v)?;
    if deviation > F_ORTHOGONALITY_TOL {
        return Err(Error::NotFOrthogonal { deviation });
    }
    ratio(p, v)
}

fn ratio(p: &TraceRatioProblem, v: &Tensor3) -> Result<f64> {
    let den = quadratic_trace(&p.b, v)?;
    if den <= 1e-12 * p.b.frobenius_norm() {
        return Err(Error::DegenerateDenominator { value: den });
    }
    Ok(quadratic_trace(&p.a, v)? / den)
}

/// `f(ρ)` together with its maximizer.
#[derive(Debug, Clone)]
pub struct RhoEvaluation {
    pub rho: f64,
    /// `f(ρ) = Trace(V(ρ)ᵀ★(A − ρB)★V(ρ))`
    pub value: f64,
    /// `V(ρ)`: eigenslices of the `d` signed-largest eigentubes of `A − ρB`.
    pub v: Tensor3,
    /// `D(ρ)` with `(A − ρB)★V(ρ) = V(ρ)★D(ρ)`.
    pub d_rho: FDiagonal,
    /// Smallest gap `δ_d − δ_{d+1}` over the transform slices.
    pub spectral_gap: f64,
    /// `||(A − ρB)★V(ρ) − V(ρ)★D(ρ)||_F`
    pub residual: f64,
}

impl RhoEvaluation {
    /// `f′(ρ) = −Trace(V(ρ)ᵀ★B★V(ρ))`
    pub fn derivative(&self, p: &TraceRatioProblem) -> Result<f64> {
        Ok(-quadratic_trace(&p.b, &self.v)?)
    }

    pub fn is_degenerate(&self, scale: f64) -> bool {
        self.spectral_gap <= 1e-10 * scale.max(1.0)
    }
}

pub fn f_of_rho(p: &TraceRatioProblem, rho: f64) -> Result<RhoEvaluation> {
    let shifted = p.shifted(rho);
    let eig = eig_f_symmetric(&shifted, EigenOrdering::SignedDesc)?;
    let d = p.d();
    let v = eig.eigenslices.lateral_range(0, d);
    let d_rho = eig.eigentubes.leading(d);
    let spectral_gap = (0..p.n3())
        .map(|k| eig.eigentubes.value(d - 1, k).re - eig.eigentubes.value(d, k).re)
        .fold(f64::INFINITY, f64::min);
    let value = quadratic_trace(&shifted, &v)?;
    let residual = t_product(&shifted, &v)?
        .sub(&t_product(&v, &d_rho.to_tensor()?)?)?
        .frobenius_norm();
    Ok(RhoEvaluation {
        rho,
        value,
        v,
        d_rho,
        spectral_gap,
        residual,
    })
}

/// Result of [`check_well_posed`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellPosedReport {
    pub tubal_rank_b: usize,
    /// `n − d + 1`
    pub required_rank: usize,
    /// Largest number of zero eigenvalues of `B̂^(k)` over the slices.
    pub max_slice_nullity: usize,
    pub b_psd: bool,
    /// `A` and `B` share a (numerically) common null direction in some slice.
    pub shared_null: bool,
    pub well_posed: bool,
}

impl WellPosedReport {
    pub fn reason(&self, d: usize) -> Option<String> {
        if self.well_posed {
            return None;
        }
        let mut why = Vec::new();
        if !self.b_psd {
            why.push("denominator is not positive semi-definite".to_string());
        }
        if self.tubal_rank_b < self.required_rank {
            why.push(format!(
                "denominator tubal rank {} < n - d + 1 = {}",
                self.tubal_rank_b, self.required_rank
            ));
        }
        if self.max_slice_nullity >= d {
            why.push(format!(
                "denominator has {} zero eigenvalues in a transform slice (d = {d})",
                self.max_slice_nullity
            ));
        }
        if self.shared_null {
            why.push("numerator and denominator share a null direction".to_string());
        }
        Some(why.join("; "))
    }
}

pub fn check_well_posed(p: &TraceRatioProblem) -> WellPosedReport {
    let n = p.n();
    let d = p.d();
    let tubal_rank_b = tubal_rank(&p.b, TUBAL_RANK_TOL);
    let required_rank = n - d + 1;
    let b_psd = is_positive_semidefinite(&p.b).unwrap_or(false);
    let (closest, max_slice_nullity) = if tubal_rank_b == 0 {
        (0.0, n)
    } else {
        shared_null_measure(&p.a, &p.b).unwrap_or((0.0, n))
    };
    let shared_null = closest <= SHARED_NULL_TOL;
    let well_posed =
        b_psd && tubal_rank_b >= required_rank && max_slice_nullity < d && !shared_null;
    WellPosedReport {
        tubal_rank_b,
        required_rank,
        max_slice_nullity,
        b_psd,
        shared_null,
        well_posed,
    }
}

/// Orthonormalizes the lateral slices of `v` (`n x d x n3`, `d <= n`) by a
/// thin QR of every transform slice.
pub fn f_orthogonalize(v: &Tensor3) -> Result<Tensor3> {
    let (n, d, n3) = v.shape();
    if d > n {
        return Err(Error::ShapeMismatch(format!(
            "cannot orthonormalize {d} lateral slices of length {n}"
        )));
    }
    let fv = to_transform(v);
    let half: Vec<CMat> = (0..computed_slices(n3))
        .map(|k| thin_q(&fv.slice(k), is_real_slice(k, n3)))
        .collect();
    from_transform(&TransformTensor::from_half_spectrum(n3, &half)?)
}

/// Tensor with i.i.d. standard normal entries.
pub fn random_normal_tensor(n1: usize, n2: usize, n3: usize, rng: &mut impl rand::Rng) -> Tensor3 {
    Tensor3::from_fn(n1, n2, n3, |_, _, _| StandardNormal.sample(rng))
}

/// Uniformly oriented f-orthogonal `n x d x n3` tensor.
pub fn random_f_orthogonal(n: usize, d: usize, n3: usize, rng: &mut impl rand::Rng) -> Result<Tensor3> {
    f_orthogonalize(&random_normal_tensor(n, d, n3, rng))
}

/// The default starting basis: f-orthogonalized seeded Gaussian tensor.
pub fn initial_basis(n: usize, d: usize, n3: usize, seed: u64) -> Result<Tensor3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_f_orthogonal(n, d, n3, &mut rng)
}

#[derive(Debug, Clone)]
pub struct NewtonSolution {
    /// `V(ρ*)`, f-orthogonal.
    pub v: Tensor3,
    pub rho: f64,
    /// Final evaluation at `ρ*`; `f(ρ*) ≈ 0` and `D(ρ*)` plays the role of
    /// `Λ*` in `(A − ρ*B)★V* = V*★Λ*`.
    pub at_optimum: RhoEvaluation,
    pub trace: SolverTrace,
}

/// Newton iteration `ρ ← Trace(V(ρ)ᵀAV(ρ)) / Trace(V(ρ)ᵀBV(ρ))`, stopped
/// when `|ρ − ρ_new| <= eps`.
pub fn newton_qr(p: &TraceRatioProblem, v0: &Tensor3, eps: f64, max_iter: usize) -> Result<NewtonSolution> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
    }
    let report = check_well_posed(p);
    if let Some(reason) = report.reason(p.d()) {
        return Err(Error::IllPosed(reason));
    }
    if v0.shape() != (p.n(), p.d(), p.n3()) {
        return Err(Error::ShapeMismatch(format!(
            "initial basis {:?}, expected {:?}",
            v0.shape(),
            (p.n(), p.d(), p.n3())
        )));
    }
    let v0 = if f_orthogonality_error(v0)? > 1e-10 {
        f_orthogonalize(v0)?
    } else {
        v0.clone()
    };
    let scale = p.a.frobenius_norm() + p.b.frobenius_norm();

    let mut rho = ratio(p, &v0)?;
    let mut trace = SolverTrace {
        rho_history: vec![rho],
        f_history: Vec::new(),
        iterations: 0,
        converged: false,
        degenerate: false,
    };
    for _ in 0..max_iter {
        let eval = f_of_rho(p, rho)?;
        trace.f_history.push(eval.value);
        trace.degenerate |= eval.is_degenerate(scale);
        let rho_new = ratio(p, &eval.v)?;
        trace.iterations += 1;
        trace.rho_history.push(rho_new);
        let step = (rho - rho_new).abs();
        rho = rho_new;
        if step <= eps {
            trace.converged = true;
            break;
        }
    }
    let at_optimum = f_of_rho(p, rho)?;
    trace.f_history.push(at_optimum.value);
    trace.degenerate |= at_optimum.is_degenerate(scale);
    if !trace.converged {
        return Err(Error::NotConverged {
            trace: Box::new(trace),
        });
    }
    Ok(NewtonSolution {
        v: at_optimum.v.clone(),
        rho,
        at_optimum,
        trace,
    })
}
