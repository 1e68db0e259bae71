//! The Euclidean geometric algebra G_n.

mod euler;
mod multivector;
pub(crate) mod text;

pub use euler::{euler_decompose, EulerForm, PARALLEL_EPS};
pub use multivector::{reorder_sign, Blade, Multivector, Signature, BLADE_EPS, MAX_DIM};
pub use text::parse_multivector;
