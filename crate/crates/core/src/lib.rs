//! Numerical toolkit for rough-path phenomena at desk scale: p-variation
//! functionals, exact Lévy areas of piecewise-linear and trigonometric
//! paths, Riemann-Stieltjes integration with refinement diagnostics,
//! lacunary counterexample generators, and enhancibility probes.

// Guards are written `!(x > 0.0)` on purpose: unlike `x <= 0.0` they also
// reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod area;
pub mod enhance;
pub mod error;
pub mod lacunary;
pub mod path;
pub mod variation;
pub mod young;

pub use error::{Error, Result};
