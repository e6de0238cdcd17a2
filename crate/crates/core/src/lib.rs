//! One-sided extremal approximation toolkit.
//!
//! Builds entire majorants and minorants of exponential type for the truncated
//! Laplace transform `f_mu` and its odd counterpart in de Branges spaces, and the
//! matching extremal trigonometric polynomials for their periodizations with
//! respect to a circle measure.
//!
//! Layout, bottom-up:
//! - [`numerics`]: special functions, quadrature, root isolation, dense solves.
//! - [`measure`]: measures on the line, hypothesis checks, `f_mu`.
//! - [`lp`]: Laguerre–Pólya functions, frequency functions, interpolants.
//! - [`debranges`]: Paley–Wiener and homogeneous spaces, extremal entire pairs.
//! - [`opuc`]: orthonormal polynomials on the circle and their quadrature.
//! - [`periodic`]: periodizations and extremal trigonometric polynomials.

pub mod debranges;
pub mod error;
pub mod lp;
pub mod measure;
pub mod numerics;
pub mod opuc;
pub mod periodic;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
