//! Exact word-metric growth in finitely generated nilpotent groups, and an
//! independent analytic prediction of that growth from Lie-algebra data.

pub mod balls;
pub mod bch;
pub mod error;
pub mod fiber;
pub mod groups;
pub mod growth_profile;
pub mod hall;
pub mod heisenberg_scaling;
pub mod lie_algebra;
pub mod linalg;
pub mod progression;

pub use error::{Error, Result};
pub use linalg::Q;

/// A finite-dimensional Lie algebra given by its bracket on coordinate
/// vectors.
pub trait LieBracket {
    fn dim(&self) -> usize;
    fn bracket(&self, a: &[Q], b: &[Q]) -> Vec<Q>;
}
