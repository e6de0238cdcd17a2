use super::Tolerance;
use crate::{Error, Result};
use std::sync::OnceLock;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = nf * (z * p - p0) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const RULE_POINTS: usize = 15;

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(RULE_POINTS))
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * x.iter().zip(w).map(|(xi, wi)| wi * f(c + h * xi)).sum::<f64>()
}

struct Seg {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Seg {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64) -> Self {
        let m = 0.5 * (a + b);
        let left = panel(f, a, m);
        let right = panel(f, m, b);
        Seg { a, b, left, right, err: (left + right - whole).abs() }
    }
}

impl PartialEq for Seg {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seg {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: &Tolerance) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let first = Seg::new(f, a, b, panel(f, a, b));
    let (mut value, mut error) = (first.left + first.right, first.err);
    let mut heap = std::collections::BinaryHeap::from([first]);
    let mut splits = 0;
    loop {
        if !value.is_finite() {
            return Err(Error::NotIntegrable(format!("non-finite value on [{a}, {b}]")));
        }
        if error <= tol.budget(value) {
            // Re-sum to shed drift from the running updates.
            let value = heap.iter().map(|s| s.left + s.right).sum();
            return Ok(Quadrature { value, error });
        }
        if splits >= tol.max_subdiv {
            return Err(Error::Nonconvergence { estimate: value, error, iterations: splits });
        }
        let s = heap.pop().expect("segments are never empty");
        let m = 0.5 * (s.a + s.b);
        if m <= s.a || m >= s.b {
            return Err(Error::Nonconvergence { estimate: value, error, iterations: splits });
        }
        let l = Seg::new(f, s.a, m, s.left);
        let r = Seg::new(f, m, s.b, s.right);
        value += l.left + l.right + r.left + r.right - s.left - s.right;
        error += l.err + r.err - s.err;
        error = error.max(0.0);
        heap.push(l);
        heap.push(r);
        splits += 1;
    }
}

// [a, inf) as panels of doubling length, each integrated adaptively.
fn upper_tail<F: Fn(f64) -> f64>(f: &F, a: f64, tol: &Tolerance) -> Result<Quadrature> {
    let mut value = 0.0;
    let mut error = 0.0;
    let mut quiet = 0;
    let mut lo = a;
    let mut len = 1.0;
    for _ in 0..80 {
        let hi = lo + len;
        let local = Tolerance { rel: tol.rel, abs: 0.25 * tol.abs, ..*tol };
        let q = adaptive(f, lo, hi, &local)?;
        value += q.value;
        error += q.error;
        if q.value.abs() <= 0.1 * tol.budget(value) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(Quadrature { value, error: error + q.value.abs() });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        len *= 2.0;
    }
    Err(Error::Nonconvergence { estimate: value, error, iterations: 80 })
}

/// Adaptive integral of `f` over `[a, b]`, where either end may be infinite.
///
/// Finite ranges use globally adaptive bisection with a 15-point
/// Gauss–Legendre rule compared against its two halves. Infinite ranges are
/// cut into panels of doubling length until the contributions die out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Quadrature> {
    integrate_with_breaks(f, a, b, &[], tol)
}

/// As [`integrate`], additionally splitting at the given interior points
/// (kinks, jumps, near-singularities).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Quadrature> {
    if a > b {
        let q = integrate_with_breaks(f, b, a, breaks, tol)?;
        return Ok(Quadrature { value: -q.value, error: q.error });
    }
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|p| *p > a && *p < b && p.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if a == f64::NEG_INFINITY && b == f64::INFINITY && pts.is_empty() {
        pts.push(0.0);
    }
    let mut knots = vec![a];
    knots.extend(pts);
    knots.push(b);
    let pieces = knots.len() - 1;
    let share = Tolerance { abs: tol.abs / pieces as f64, ..tol };
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let q = if lo == f64::NEG_INFINITY {
            upper_tail(&|t: f64| f(-t), -hi, &share)?
        } else if hi == f64::INFINITY {
            upper_tail(&f, lo, &share)?
        } else {
            adaptive(&f, lo, hi, &share)?
        };
        total.value += q.value;
        total.error += q.error;
    }
    Ok(total)
}
