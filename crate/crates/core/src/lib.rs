//! Weighted mean-width bodies, entropy and affine surface area of convex bodies.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod affine;
pub mod convergence;
pub mod error;
pub mod gallery;
pub mod geometry;
pub mod meanwidth;
pub mod parse;
pub mod quad;
pub mod roots;
pub mod vec2;
pub mod weights;

pub use error::{Error, Result};
pub use geometry::{BoundaryPoint, ConeDensities, ConvexBody, Direction, Shape};
pub use meanwidth::{MeanWidth, StarBodyApprox};
pub use parse::{parse_body, parse_weight};
pub use vec2::Vec2;
pub use weights::Weight;
