//! Tensor dimensionality reduction: discriminant embedding (supervised,
//! trace-ratio), Laplacian eigenmaps and locally linear embedding.
//!
//! Orientation: [`mlde_fit`] takes samples as lateral slices (`p x n x n3`)
//! and learns a projection; [`mle_fit`] and [`lme_fit`] take samples as
//! mode-1 slices (`n x p x n3`) and embed the training points only.

mod lme;
mod mle;
mod mlde;

pub use lme::{lme_fit, reconstruction_cost, lme_weights, LmeParams, LmeWeights, GRAM_CONDITION_LIMIT};
pub use mle::{mle_fit, MleParams};
pub use mlde::{mlde_fit, mlde_project, MldeModel, MldeParams};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::FDiagonal;
use crate::tensor::{identity_tensor, t_product, t_transpose, Tensor3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mlde,
    Mle,
    Lme,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mlde => "mlde",
            Method::Mle => "mle",
            Method::Lme => "lme",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mlde" => Ok(Method::Mlde),
            "mle" => Ok(Method::Mle),
            "lme" => Ok(Method::Lme),
            other => Err(format!("unknown method '{other}' (expected mlde, mle or lme)")),
        }
    }
}

/// Embedded coordinates of the training samples.
#[derive(Debug, Clone)]
pub struct Embedding {
    /// `n x d x n3`
    pub y: Tensor3,
    /// Selected eigentubes, scaled to the reported eigenproblem.
    pub eigentubes: FDiagonal,
    pub method: Method,
    /// Residual of the per-slice eigenproblem actually solved.
    pub residual: f64,
}

/// `||Yᵀ★B★Y − I||_F`; `b = None` means the identity.
pub fn constraint_error(y: &Tensor3, b: Option<&Tensor3>, scale: f64) -> Result<f64> {
    let by = match b {
        Some(b) => t_product(b, y)?,
        None => y.clone(),
    };
    let g = t_product(&t_transpose(y), &by)?.scale(scale);
    Ok(g.sub(&identity_tensor(y.n2(), y.n3()))?.frobenius_norm())
}
