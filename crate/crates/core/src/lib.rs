//! Third-order tensor algebra under the t-product, a Newton solver for the
//! tensor trace-ratio problem, and tensor versions of local discriminant
//! embedding, Laplacian eigenmaps and locally linear embedding.

pub mod error;
pub mod graph;
pub mod harness;
pub mod manifold;
pub mod spectral;
pub mod tensor;
pub mod trace_ratio;

mod par;
mod slice_linalg;

pub use error::{Error, Result};
pub use tensor::Tensor3;
