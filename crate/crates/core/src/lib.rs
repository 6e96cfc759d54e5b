//! Gluing equations of ideal triangulations over the algebras R + Rk with
//! k^2 = q, and geometric transitions from hyperbolic to anti-de Sitter
//! structures on punctured torus bundles.

pub mod algebra;
pub mod error;
pub mod projective;
pub mod real_variety;
pub mod transition;
pub mod triangulation;
pub mod word;

pub use algebra::{AlgebraTag, BNum, CliffordNum, SplitPair};
pub use error::{Error, Result};
