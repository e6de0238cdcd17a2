use super::e;
use crate::{Error, Result, C64};

/// Bisection on a bracket `[a, b]` with `fa = f(a)`, `fb = f(b)` of opposite sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64, fb: f64) -> f64 {
    debug_assert!(fa.signum() != fb.signum());
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    if fa.abs() <= fb.abs() { a } else { b }
}

fn horner(p: &[C64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Zeros on the unit circle of a self-inversive polynomial, as arguments in `[0, 1)`.
///
/// `p` holds coefficients in ascending order; its degree `m` is `p.len() - 1`.
/// The rotated function `x -> e(-m x / 2) p(e(x))` is real up to a constant
/// phase; it is sampled at `16 m` points and every sign change is bisected.
pub fn roots_on_circle(p: &[C64]) -> Result<Vec<f64>> {
    let m = p.len().saturating_sub(1);
    if m == 0 {
        return Ok(Vec::new());
    }
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let rotated = |x: f64| horner(p, e(x)) * e(-0.5 * m as f64 * x);
    let n = 16 * m;
    let grid: Vec<f64> = (0..=n).map(|j| (j as f64 + 0.5) / n as f64).collect();
    let samples: Vec<C64> = grid.iter().map(|&x| rotated(x)).collect();
    // Strip the constant phase using the largest sample.
    let big = samples.iter().copied().fold(C64::new(0.0, 0.0), |a, s| if s.norm() > a.norm() { s } else { a });
    let phase = if big.norm() > 0.0 { big.conj() / big.norm() } else { C64::new(1.0, 0.0) };
    let real = |x: f64| (rotated(x) * phase).re;
    let vals: Vec<f64> = samples.iter().map(|s| (s * phase).re).collect();
    let mut roots = Vec::with_capacity(m);
    for j in 0..n {
        let (a, b, fa, fb) = (grid[j], grid[j + 1], vals[j], vals[j + 1]);
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(real, a, b, fa, fb));
        }
    }
    let mut out: Vec<f64> = roots
        .into_iter()
        .map(|r| {
            let t = r.rem_euclid(1.0);
            if t > 1.0 - 1e-13 || t < 1e-13 { 0.0 } else { t }
        })
        .filter(|&t| horner(p, e(t)).norm() < 1e-10 * scale)
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if out.len() != m {
        return Err(Error::RootCount { found: out.len(), expected: m });
    }
    Ok(out)
}
