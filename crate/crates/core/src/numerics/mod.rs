//! Shared numeric substrate: special functions, adaptive quadrature, root
//! isolation on the unit circle and dense linear solves.

mod linalg;
mod quad;
mod roots;
mod special;

pub use linalg::{solve_dense, solve_dense_complex};
pub use quad::{gauss_legendre, integrate, integrate_with_breaks, Quadrature};
pub use roots::{bisect, roots_on_circle};
pub use special::{bessel_j, bessel_j_seq, bessel_zero, bessel_zeros, gamma, hankel_j, homog_ab, homog_ab_series};

/// Accuracy request for adaptive procedures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative accuracy target.
    pub rel: f64,
    /// Absolute floor.
    pub abs: f64,
    /// Maximum number of interval bisections.
    pub max_subdiv: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12, max_subdiv: 2000 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_subdiv: usize) -> crate::Result<Self> {
        if !(rel > 0.0) || !(abs >= 0.0) || max_subdiv == 0 {
            return Err(crate::Error::Domain(format!(
                "tolerance needs rel > 0, abs >= 0, max_subdiv >= 1 (got {rel}, {abs}, {max_subdiv})"
            )));
        }
        Ok(Self { rel, abs, max_subdiv })
    }

    /// Error budget for a value of the given magnitude.
    pub fn budget(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// `e(x) = exp(2 pi i x)`.
pub fn e(x: f64) -> crate::C64 {
    let t = std::f64::consts::TAU * x;
    crate::C64::new(t.cos(), t.sin())
}
