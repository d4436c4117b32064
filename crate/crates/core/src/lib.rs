//! Evaluation, tracing and verification of the Erdős–Mordell curve of a
//! triangle: the zero set of
//!
//! ```text
//! g(M) = R_A + R_B + R_C − 2(r_a + r_b + r_c)
//! ```
//!
//! where `R_*` are the distances from `M` to the vertices and `r_*` the
//! distances to the side lines. The region `{g ≥ 0}` is the largest set on
//! which the Erdős–Mordell inequality holds; its area excess over the triangle
//! is the quantity ε computed by [`area`] and swept over triangle shapes by
//! [`sweep`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::should_implement_trait)]

pub mod algebraic;
pub mod area;
pub mod error;
pub mod geometry;
pub mod poly;
pub mod render;
pub mod roots;
pub mod sweep;
pub mod tracing;

pub use area::{epsilon0_equilateral, epsilon_pixel, epsilon_scanline, EpsilonResult, PixelGridSpec, EPSILON_0};
pub use error::{Error, Result};
pub use geometry::{CanonicalPlacement, DistanceSet, Point, Triangle};
pub use sweep::{load_field, save_field, sweep, verify_conjecture, ConjectureReport, EpsilonField, SweepConfig, SweepRecord};
pub use tracing::{Branch, Domain, IntersectionSet};
