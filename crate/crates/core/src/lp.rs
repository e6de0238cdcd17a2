//! Laguerre–Pólya functions, the frequency functions `g_c` (inverse two-sided
//! Laplace transforms of `1/F`), and the interpolants `A(F, mu, .)`,
//! `L(F, mu, .)`, `M(F, mu, .)` built from them.
//!
//! The interpolants are evaluated through the contour form of the convolution
//! `g * d mu`: for `Re z < c < alpha_F`
//!
//! ```text
//! A(F, mu, z) = F(z) (1/2pi) int f_mu(c+iy) / (F(c+iy) (c+iy-z)) dy,
//! ```
//!
//! and for `0 < c < Re z` the same integral plus `f_mu(z)`. Both are the two
//! half-line Laplace integrals of `g * d mu` with the inversion integral
//! swapped in. For families of positive exponential type the integrand decays
//! exponentially, so a fixed Gauss–Legendre grid on the line is computed once
//! per `(F, mu)` and reused for every evaluation point.

use crate::measure::{distribution, f_mu, Measure};
use crate::numerics::{bessel_zeros, gauss_legendre, homog_ab, homog_ab_series, integrate, integrate_with_breaks, roots_on_circle, Tolerance};
use crate::{Error, Result, C64};
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, OnceLock};

/// Nonzero zeros of a Laguerre–Pólya function.
#[derive(Debug, Clone)]
pub enum Zeros {
    /// Explicit nonzero zeros with multiplicities.
    Finite(Vec<(f64, u32)>),
    /// `+-k pi / tau`, `k >= 1`, each of multiplicity `mult`.
    Sine { tau: f64, mult: u32 },
    /// `+-j_{nu+1,k}`, `k >= 1`, each of multiplicity `mult`.
    Bessel { nu: f64, mult: u32 },
    /// Double zeros at `nodes + Z` of `F(x) = sum_n coeffs[n] e(n x)`, where
    /// `coeffs` runs over `n = -d..=d`.
    Periodic { coeffs: Vec<C64>, nodes: Vec<f64> },
}

/// Laguerre–Pólya function in Hadamard form (Gaussian coefficient zero):
///
/// `F(z) = lead z^r e^{b z} prod_j (1 - z/x_j) e^{z/x_j}`.
///
/// For the symmetric families the convergence factors cancel in pairs.
#[derive(Debug, Clone)]
pub struct LpFunction {
    r: u32,
    b: f64,
    lead: f64,
    zeros: Zeros,
    bessel_cache: Arc<OnceLock<Vec<f64>>>,
}

const BESSEL_CACHE: usize = 600;
const MAX_TERMS: usize = 500;

impl LpFunction {
    /// Finitely many zeros: `lead z^r e^{b z} prod (1 - z/x_j)^{m_j} e^{m_j z/x_j}`.
    pub fn finite(r: u32, b: f64, lead: f64, zeros: Vec<(f64, u32)>) -> Result<Self> {
        if lead == 0.0 || !lead.is_finite() || !b.is_finite() {
            return Err(Error::Domain("leading coefficient must be finite and nonzero".into()));
        }
        if zeros.iter().any(|(x, m)| *x == 0.0 || !x.is_finite() || *m == 0) {
            return Err(Error::Domain("zeros must be finite, nonzero, with positive multiplicity".into()));
        }
        let mut zeros = zeros;
        zeros.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
        Ok(Self { r, b, lead, zeros: Zeros::Finite(zeros), bessel_cache: Default::default() })
    }

    /// `lead z^r e^{b z} (sin(tau z)/(tau z))^mult`.
    pub fn sine_family(r: u32, b: f64, lead: f64, tau: f64, mult: u32) -> Result<Self> {
        if !(tau > 0.0) || !(1..=2).contains(&mult) || r > 3 || lead == 0.0 {
            return Err(Error::Domain("sine family needs tau > 0, mult in {1,2}, r <= 3, lead != 0".into()));
        }
        Ok(Self { r, b, lead, zeros: Zeros::Sine { tau, mult }, bessel_cache: Default::default() })
    }

    /// `sin^2(tau z)`.
    pub fn sin_squared(tau: f64) -> Result<Self> {
        Self::sine_family(2, 0.0, tau * tau, tau, 2)
    }

    /// `lead z^r e^{b z} (2(nu+1) B_nu(z)/z)^mult`.
    pub fn bessel_family(r: u32, b: f64, lead: f64, nu: f64, mult: u32) -> Result<Self> {
        if !(nu > -1.0) || !(1..=2).contains(&mult) || r > 3 || lead == 0.0 {
            return Err(Error::Domain("Bessel family needs nu > -1, mult in {1,2}, r <= 3, lead != 0".into()));
        }
        Ok(Self { r, b, lead, zeros: Zeros::Bessel { nu, mult }, bessel_cache: Default::default() })
    }

    /// `B_nu(z)^2` for the homogeneous companion `B_nu`.
    pub fn bessel_b_squared(nu: f64) -> Result<Self> {
        Self::bessel_family(2, 0.0, 1.0 / (4.0 * (nu + 1.0).powi(2)), nu, 2)
    }

    /// `Q(e(z)) conj(Q(e(conj z)))` for a polynomial `Q` (ascending coefficients)
    /// whose zeros all lie on the unit circle, one of them at 1.
    pub fn periodic_square(q: &[C64]) -> Result<Self> {
        let d = q.len().saturating_sub(1);
        if d == 0 {
            return Err(Error::Domain("polynomial must have positive degree".into()));
        }
        let nodes = roots_on_circle(q)?;
        if nodes[0] != 0.0 {
            return Err(Error::Domain("polynomial must vanish at 1".into()));
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); 2 * d + 1];
        for (j, qj) in q.iter().enumerate() {
            for (k, qk) in q.iter().enumerate() {
                coeffs[j + d - k] += qj * qk.conj();
            }
        }
        let lead = -2.0 * PI * PI * coeffs.iter().enumerate().map(|(i, c)| (i as f64 - d as f64).powi(2) * c.re).sum::<f64>();
        if !(lead > 0.0) {
            return Err(Error::Domain("zero at the origin is not double".into()));
        }
        Ok(Self { r: 2, b: 0.0, lead, zeros: Zeros::Periodic { coeffs, nodes }, bessel_cache: Default::default() })
    }

    pub fn order_at_zero(&self) -> u32 {
        self.r
    }

    pub fn linear_exponent(&self) -> f64 {
        self.b
    }

    /// `F^{(r)}(0) / r!`.
    pub fn lead(&self) -> f64 {
        self.lead
    }

    pub fn zeros(&self) -> &Zeros {
        &self.zeros
    }

    /// Total number of zeros with multiplicity, `None` when infinite.
    pub fn n_zeros(&self) -> Option<usize> {
        match &self.zeros {
            Zeros::Finite(z) => Some(self.r as usize + z.iter().map(|(_, m)| *m as usize).sum::<usize>()),
            _ => None,
        }
    }

    /// Exponential type of the family, `None` for finitely many zeros.
    pub fn exp_type(&self) -> Option<f64> {
        match &self.zeros {
            Zeros::Finite(_) => None,
            Zeros::Sine { tau, mult } => Some(tau * *mult as f64),
            Zeros::Bessel { mult, .. } => Some(*mult as f64),
            Zeros::Periodic { coeffs, .. } => Some(TAU * ((coeffs.len() - 1) / 2) as f64),
        }
    }

    /// `F''(0)`.
    pub fn second_derivative_at_zero(&self) -> f64 {
        match self.r {
            2 => 2.0 * self.lead,
            r if r > 2 => 0.0,
            _ => {
                let h = 1e-4;
                (self.eval_real(h) - 2.0 * self.eval_real(0.0) + self.eval_real(-h)) / (h * h)
            }
        }
    }

    fn bessel_zeros(&self, nu: f64) -> &[f64] {
        self.bessel_cache.get_or_init(|| bessel_zeros(nu + 1.0, BESSEL_CACHE).unwrap_or_default())
    }

    /// The `k`-th positive zero (`k >= 1`) of a symmetric family, with multiplicity.
    fn family_zero(&self, k: usize) -> Option<(f64, u32)> {
        match &self.zeros {
            Zeros::Sine { tau, mult } => Some((k as f64 * PI / tau, *mult)),
            Zeros::Bessel { nu, mult } => self.bessel_zeros(*nu).get(k - 1).map(|z| (*z, *mult)),
            Zeros::Periodic { nodes, .. } => {
                let n = nodes.len();
                // Positive zeros: nodes[1..] + 0, then nodes + 1, nodes + 2, ...
                let idx = k - 1 + 1;
                Some((nodes[idx % n] + (idx / n) as f64, 2))
            }
            Zeros::Finite(_) => None,
        }
    }

    /// Positive real zeros in increasing order, at most `count` of them.
    pub fn positive_zeros(&self, count: usize) -> Vec<f64> {
        match &self.zeros {
            Zeros::Finite(z) => {
                let mut p: Vec<f64> = z.iter().map(|z| z.0).filter(|x| *x > 0.0).collect();
                p.sort_by(f64::total_cmp);
                p.truncate(count);
                p
            }
            _ => (1..=count).filter_map(|k| self.family_zero(k).map(|z| z.0)).collect(),
        }
    }

    /// Smallest positive zero, `inf` if there is none.
    pub fn alpha(&self) -> f64 {
        self.positive_zeros(1).first().copied().unwrap_or(f64::INFINITY)
    }

    fn b_eff(&self) -> f64 {
        match &self.zeros {
            Zeros::Finite(z) => self.b + z.iter().map(|(x, m)| *m as f64 / x).sum::<f64>(),
            _ => self.b,
        }
    }

    // Normalised product P(z) of the symmetric families (P(0) = 1).
    fn family_p(&self, z: C64) -> C64 {
        match &self.zeros {
            Zeros::Sine { tau, .. } => {
                let w = *tau * z;
                if w.norm() < 1e-3 {
                    let w2 = w * w;
                    1.0 - w2 / 6.0 + w2 * w2 / 120.0
                } else {
                    w.sin() / w
                }
            }
            Zeros::Bessel { nu, .. } => {
                if z.im == 0.0 {
                    let (_, _, bz) = homog_ab(*nu, z.re).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
                    C64::new(2.0 * (nu + 1.0) * bz, 0.0)
                } else {
                    2.0 * (nu + 1.0) * homog_ab_series(*nu, z).2
                }
            }
            _ => C64::new(f64::NAN, 0.0),
        }
    }

    fn periodic_eval(coeffs: &[C64], z: C64) -> C64 {
        let d = (coeffs.len() - 1) / 2;
        let w = (C64::new(0.0, TAU) * z).exp();
        let winv = 1.0 / w;
        // Horner in w for n >= 0 and in 1/w for n < 0.
        let pos = coeffs[d..].iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * w + c);
        let neg = coeffs[..d].iter().fold(C64::new(0.0, 0.0), |acc, c| (acc + c) * winv);
        pos + neg
    }

    /// `F(z) / z^k` for `k <= r`, stable near the origin.
    pub fn over_z_power(&self, z: C64, k: u32) -> C64 {
        debug_assert!(k <= self.r);
        match &self.zeros {
            Zeros::Periodic { coeffs, .. } => {
                if z.norm() < 1e-3 {
                    // Four-term local series from the Taylor coefficients at 0.
                    let d = (coeffs.len() - 1) as f64 / 2.0;
                    let mut acc = C64::new(0.0, 0.0);
                    let mut zp = C64::new(1.0, 0.0);
                    for p in k as i32..k as i32 + 4 {
                        let tp: C64 = coeffs
                            .iter()
                            .enumerate()
                            .map(|(i, c)| c * C64::new(0.0, TAU * (i as f64 - d)).powi(p))
                            .sum::<C64>()
                            / (1..=p).map(|q| q as f64).product::<f64>();
                        acc += tp * zp;
                        zp *= z;
                    }
                    acc
                } else {
                    Self::periodic_eval(coeffs, z) / z.powi(k as i32)
                }
            }
            _ => {
                let base = self.lead * z.powi((self.r - k) as i32) * (self.b * z).exp();
                match &self.zeros {
                    Zeros::Finite(zs) => zs.iter().fold(base, |acc, (x, m)| {
                        acc * ((1.0 - z / *x) * (z / *x).exp()).powi(*m as i32)
                    }),
                    Zeros::Sine { mult, .. } | Zeros::Bessel { mult, .. } => base * self.family_p(z).powi(*mult as i32),
                    Zeros::Periodic { .. } => unreachable!(),
                }
            }
        }
    }

    /// `F(z)`.
    pub fn eval(&self, z: C64) -> C64 {
        match &self.zeros {
            Zeros::Periodic { coeffs, .. } => {
                let v = Self::periodic_eval(coeffs, z);
                if z.im == 0.0 { C64::new(v.re, 0.0) } else { v }
            }
            _ => self.over_z_power(z, 0),
        }
    }

    /// `F(x)` for real `x`.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval(C64::new(x, 0.0)).re
    }

    /// Truncated Hadamard product over the first `n_terms` zeros (pairs for the
    /// symmetric families), with a bound on the relative error of the omitted
    /// tail: `sum_{k > n} mult |z|^2 / x_k^2`.
    pub fn eval_product(&self, z: C64, n_terms: usize) -> (C64, f64) {
        let head = self.lead * z.powi(self.r as i32) * (self.b * z).exp();
        match &self.zeros {
            Zeros::Finite(_) => (self.eval(z), 0.0),
            Zeros::Periodic { .. } => (self.eval(z), 0.0),
            _ => {
                let n = n_terms.max(1);
                let mut prod = head;
                let mut mult = 1;
                for k in 1..=n {
                    let (x, m) = self.family_zero(k).expect("family zero");
                    mult = m;
                    prod *= (1.0 - z * z / (x * x)).powi(m as i32);
                }
                let (xn, _) = self.family_zero(n).expect("family zero");
                // Zeros are spaced by at least ~pi/type; bound the tail sum by an integral.
                let spacing = xn / (n as f64 + 0.5);
                let tail = mult as f64 * z.norm_sqr() / (spacing * spacing * (n as f64 - 0.5).max(0.5));
                (prod, tail)
            }
        }
    }

    // Residue of s^extra e^{t s} / F(s) at the zero zeta of multiplicity m
    // (finite zero set), via the Taylor series of exp(log h).
    fn finite_residue(&self, zs: &[(f64, u32)], zeta: f64, m: u32, t: f64, extra: u32) -> f64 {
        let beff = self.b_eff();
        let r = self.r as f64 - extra as f64;
        let m_eff = if zeta == 0.0 { m - extra } else { m };
        if m_eff == 0 {
            return 0.0;
        }
        let h0 = if zeta == 0.0 {
            1.0 / self.lead
        } else {
            let mut den = self.lead * zeta.powf(r) * (beff * zeta).exp() * (-1.0 / zeta).powi(m as i32);
            for (x, mj) in zs {
                if *x != zeta {
                    den *= (1.0 - zeta / x).powi(*mj as i32);
                }
            }
            (t * zeta).exp() / den
        };
        let n = m_eff as usize;
        // Coefficients of phi' at zeta.
        let mut c = vec![0.0; n];
        for (k, ck) in c.iter_mut().enumerate() {
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut v = if k == 0 { t - beff } else { 0.0 };
            if zeta != 0.0 {
                v -= r * sgn / zeta.powi(k as i32 + 1);
            }
            for (x, mj) in zs {
                if *x != zeta {
                    v -= *mj as f64 * sgn / (zeta - x).powi(k as i32 + 1);
                }
            }
            *ck = v;
        }
        let phi: Vec<f64> = (0..=n).map(|j| if j == 0 { 0.0 } else { c[j - 1] / j as f64 }).collect();
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        for j in 1..n {
            e[j] = (1..=j).map(|k| k as f64 * phi[k] * e[j - k]).sum::<f64>() / j as f64;
        }
        h0 * e[n - 1]
    }

    // P'(zeta) and P''(zeta)/P'(zeta) at a nonzero zero of the family product.
    fn family_local(&self, zeta: f64) -> (f64, f64) {
        match &self.zeros {
            Zeros::Sine { tau, .. } => ((tau * zeta).cos() / zeta, -2.0 / zeta),
            Zeros::Bessel { nu, .. } => {
                let (a, _, _) = homog_ab(*nu, zeta).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
                (2.0 * (nu + 1.0) * a / zeta, -(2.0 * nu + 3.0) / zeta)
            }
            _ => (f64::NAN, f64::NAN),
        }
    }

    fn family_p2(&self) -> f64 {
        match &self.zeros {
            Zeros::Sine { tau, .. } => -tau * tau / 6.0,
            Zeros::Bessel { nu, .. } => -1.0 / (4.0 * (nu + 2.0)),
            _ => f64::NAN,
        }
    }

    // Residue of s^extra e^{t s}/F(s) at a zero of a symmetric family.
    fn family_residue(&self, zeta: f64, m: u32, t: f64, extra: u32) -> f64 {
        let tp = t - self.b;
        if zeta == 0.0 {
            let pm = self.family_p2() * match &self.zeros {
                Zeros::Sine { mult, .. } | Zeros::Bessel { mult, .. } => *mult as f64,
                _ => f64::NAN,
            };
            // Coefficient of s^{r-1-extra} in e^{t' s} P(s)^{-mult}.
            return match self.r as i64 - 1 - extra as i64 {
                0 => 1.0,
                1 => tp,
                2 => 0.5 * tp * tp - pm,
                _ => 0.0,
            } / self.lead;
        }
        let (p1, ratio) = self.family_local(zeta);
        let q = (tp * zeta).exp() * zeta.powi(extra as i32) / (self.lead * zeta.powi(self.r as i32));
        let dq = tp - (self.r as f64 - extra as f64) / zeta;
        match m {
            1 => q / p1,
            _ => q / (p1 * p1) * (dq - ratio),
        }
    }

    /// Residue sum for `(1/2 pi i) int_{Re s = c} s^extra e^{ts} / F(s) ds`.
    fn residue_sum(&self, c: f64, t: f64, extra: u32, rel: f64) -> Result<(f64, usize)> {
        let left = t - self.b_eff() >= 0.0;
        let sign = if left { 1.0 } else { -1.0 };
        let take = |z: f64| if left { z < c } else { z > c };
        match &self.zeros {
            Zeros::Finite(zs) => {
                let mut total = 0.0;
                let mut terms = 0;
                if self.r > 0 && take(0.0) {
                    total += self.finite_residue(zs, 0.0, self.r, t, extra);
                    terms += 1;
                }
                for (x, m) in zs {
                    if take(*x) {
                        total += self.finite_residue(zs, *x, *m, t, extra);
                        terms += 1;
                    }
                }
                Ok((sign * total, terms))
            }
            Zeros::Periodic { .. } => Err(Error::Domain("residues are not tabulated for periodic families".into())),
            _ => {
                let mut total = 0.0;
                if self.r > 0 && take(0.0) {
                    total += self.family_residue(0.0, self.r, t, extra);
                }
                let tp = (t - self.b).abs();
                let mut quiet = 0;
                for k in 1..=MAX_TERMS {
                    let (x, m) = self.family_zero(k).ok_or(Error::Nonconvergence { estimate: total, error: f64::NAN, iterations: k })?;
                    let mut step = 0.0;
                    for z in [x, -x] {
                        if take(z) {
                            step += self.family_residue(z, m, t, extra);
                        }
                    }
                    total += step;
                    if step.abs() <= rel * total.abs() && tp * x > 10.0 {
                        quiet += 1;
                        if quiet >= 2 {
                            return Ok((sign * total, k));
                        }
                    } else {
                        quiet = 0;
                    }
                }
                Err(Error::Nonconvergence { estimate: sign * total, error: f64::NAN, iterations: MAX_TERMS })
            }
        }
    }
}

/// Frequency function `g_c(t) = (1/2 pi i) int_{Re s = c} e^{ts}/F(s) ds` by residues.
///
/// Zero counts 0 and 1 use the closed forms; `g_c` for no zeros is the point
/// mass `delta(t - b)/F(0)` and is reported as a domain error. At a jump the
/// right limit is returned.
pub fn g_c(f: &LpFunction, c: f64, t: f64) -> Result<f64> {
    g_c_terms(f, c, t, 0).map(|v| v.0)
}

/// Derivative `g_c'(t)`.
pub fn g_c_prime(f: &LpFunction, c: f64, t: f64) -> Result<f64> {
    g_c_terms(f, c, t, 1).map(|v| v.0)
}

/// As [`g_c`] for `extra = 0` and `g_c'` for `extra = 1`, also returning the
/// number of residue terms used.
pub fn g_c_terms(f: &LpFunction, c: f64, t: f64, extra: u32) -> Result<(f64, usize)> {
    if f.eval_real(c) == 0.0 {
        return Err(Error::AbscissaOnZero(c));
    }
    match f.n_zeros() {
        Some(0) => Err(Error::Domain(format!("g_c is the point mass delta(t - {})/F(0)", f.b))),
        Some(1) => {
            if extra > 0 {
                return Ok((0.0, 0));
            }
            let Zeros::Finite(zs) = &f.zeros else { unreachable!() };
            let v = if f.r == 1 {
                let inv = 1.0 / f.lead;
                if c > 0.0 {
                    if t >= f.b { inv } else { 0.0 }
                } else if t < f.b {
                    -inv
                } else {
                    0.0
                }
            } else {
                let tau = zs[0].0;
                let f0 = f.eval_real(0.0);
                let edge = f.b + 1.0 / tau;
                let e = (tau * (t - f.b) - 1.0).exp();
                if c > tau {
                    if t >= edge { -tau / f0 * e } else { 0.0 }
                } else if t < edge {
                    tau / f0 * e
                } else {
                    0.0
                }
            };
            Ok((v, 1))
        }
        _ => f.residue_sum(c, t, extra, 1e-13),
    }
}

/// `g_c(t)` by direct numerical integration along `Re s = c`.
pub fn g_c_contour(f: &LpFunction, c: f64, t: f64) -> Result<f64> {
    if f.exp_type().is_some() {
        let nodes = line_nodes(f, c, |s| 1.0 / f.eval(s));
        return Ok(nodes.iter().map(|(s, w)| (w * (t * s).exp()).re).sum());
    }
    let tol = Tolerance { rel: 1e-11, abs: 1e-14, max_subdiv: 20000 };
    let q = integrate(|y| ((t * C64::new(c, y)).exp() / f.eval(C64::new(c, y))).re / TAU, f64::NEG_INFINITY, f64::INFINITY, tol)?;
    Ok(q.value)
}

// Gauss–Legendre nodes on the line Re s = c with weights (dy / 2pi) w(s),
// for families of positive exponential type. The half-length is chosen so
// that exp(-type |y|) is negligible, the panel width so that a pole one sixth
// of alpha away from the line is resolved.
fn line_nodes(f: &LpFunction, c: f64, w: impl FnMut(C64) -> C64) -> Vec<(C64, C64)> {
    line_nodes_within(f, c, f64::INFINITY, w)
}

/// As `line_nodes`, with panels no wider than `gap`, the distance from the
/// line to the nearest pole of the integrand.
fn line_nodes_within(f: &LpFunction, c: f64, gap: f64, mut w: impl FnMut(C64) -> C64) -> Vec<(C64, C64)> {
    let ty = f.exp_type().expect("family of positive type");
    let half = 50.0 / ty + 2.0;
    let alpha = f.alpha().min(1.0 / ty * 20.0);
    let width = (alpha / 6.0).min(0.5).min(gap);
    let panels = (half / width).ceil() as usize;
    let h = half / panels as f64;
    let (gx, gw) = gauss_legendre(20);
    let mut out = Vec::with_capacity(2 * panels * gx.len());
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, wt) in gx.iter().zip(&gw) {
            let y = mid + 0.5 * h * x;
            let dy = 0.5 * h * wt / TAU;
            for yy in [y, -y] {
                let s = C64::new(c, yy);
                out.push((s, dy * w(s)));
            }
        }
    }
    out
}

/// `g_{alpha_F/2}` (or `g_1` when `F` has no positive zero), with a contour
/// fallback near the switching point where the residue series is too slow.
#[derive(Debug, Clone)]
pub struct FreqFunction {
    f: LpFunction,
    c: f64,
    nodes: Option<Vec<(C64, C64)>>,
}

impl FreqFunction {
    pub fn new(f: &LpFunction) -> Result<Self> {
        let a = f.alpha();
        let c = if a.is_finite() { 0.5 * a } else { 1.0 };
        Self::with_abscissa(f, c)
    }

    pub fn with_abscissa(f: &LpFunction, c: f64) -> Result<Self> {
        if f.eval_real(c) == 0.0 {
            return Err(Error::AbscissaOnZero(c));
        }
        let nodes = f.exp_type().map(|_| line_nodes(f, c, |s| 1.0 / f.eval(s)));
        Ok(Self { f: f.clone(), c, nodes })
    }

    pub fn abscissa(&self) -> f64 {
        self.c
    }

    fn eval(&self, t: f64, extra: u32) -> Result<f64> {
        if let Some(nodes) = &self.nodes {
            let tp = (t - self.f.b).abs();
            // Residues need about 40/|t'| worth of zeros.
            let spacing = self.f.family_zero(2).map(|z| z.0).unwrap_or(f64::NAN) - self.f.family_zero(1).map(|z| z.0).unwrap_or(f64::NAN);
            let periodic = matches!(self.f.zeros, Zeros::Periodic { .. });
            if periodic || !(tp * spacing * (MAX_TERMS as f64 - 50.0) > 40.0) {
                return Ok(nodes.iter().map(|(s, w)| (w * s.powi(extra as i32) * (t * s).exp()).re).sum());
            }
        }
        g_c_terms(&self.f, self.c, t, extra).map(|v| v.0)
    }

    /// `g(t)`.
    pub fn value(&self, t: f64) -> Result<f64> {
        self.eval(t, 0)
    }

    /// `g'(t)`.
    pub fn deriv(&self, t: f64) -> Result<f64> {
        self.eval(t, 1)
    }
}

fn conv_tol() -> Tolerance {
    Tolerance { rel: 1e-11, abs: 1e-13, max_subdiv: 4000 }
}

/// `g * d mu (t) = int g(t - lambda) d mu(lambda)` in the time domain, with
/// `g = g_{alpha_F/2}`.
pub fn g_conv_dmu(g: &FreqFunction, m: &Measure, t: f64) -> Result<f64> {
    let mut v = 0.0;
    for (l, w) in m.atoms() {
        v += w * g.value(t - l)?;
    }
    if m.density().is_some() {
        let lo = m.support_lower_bound();
        let mut br = m.breakpoints();
        br.push(t - g.f.b_eff());
        let err = std::cell::Cell::new(None);
        let q = integrate_with_breaks(
            |l| {
                let p = m.pdf(l);
                if p == 0.0 {
                    return 0.0;
                }
                g.value(t - l).unwrap_or_else(|e| {
                    err.set(Some(e));
                    0.0
                }) * p
            },
            lo,
            f64::INFINITY,
            &br,
            conv_tol(),
        )?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        v += q.value;
    }
    Ok(v)
}

/// `g' * mu (t) = int g'(t - lambda) mu(lambda) d lambda`, the
/// integrated-by-parts form of [`g_conv_dmu`].
pub fn g_prime_conv_mu(g: &FreqFunction, m: &Measure, t: f64) -> Result<f64> {
    let lo = m.support_lower_bound();
    let mut br = m.breakpoints();
    br.push(t - g.f.b_eff());
    let err = std::cell::Cell::new(None);
    let q = integrate_with_breaks(
        |l| {
            g.deriv(t - l).unwrap_or_else(|e| {
                err.set(Some(e));
                0.0
            }) * distribution(m, l)
        },
        lo,
        f64::INFINITY,
        &br,
        conv_tol(),
    )?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(q.value)
}

enum Line {
    Nodes(Vec<(C64, C64)>),
    Adaptive,
}

struct Contour {
    c: f64,
    line: Line,
}

/// Interpolants `A`, `L`, `M` of `f_mu` at the zeros of `F`, with the contour
/// data for `(F, mu)` precomputed.
pub struct Interpolant {
    f: LpFunction,
    m: Measure,
    alpha: f64,
    lo: Contour,
    hi: Contour,
    g0: f64,
}

impl std::fmt::Debug for Interpolant {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("Interpolant").field("alpha", &self.alpha).field("g0", &self.g0).finish()
    }
}

impl Interpolant {
    /// Requires at least two zeros, `F(alpha/2) > 0` (or `F(1) > 0`) and a
    /// measure with support bounded below.
    pub fn new(f: &LpFunction, m: &Measure) -> Result<Self> {
        if matches!(f.n_zeros(), Some(n) if n < 2) {
            return Err(Error::Domain("interpolation needs at least two zeros".into()));
        }
        if !m.support_lower_bound().is_finite() {
            return Err(Error::Hypothesis { name: "H1", detail: "support unbounded below".into() });
        }
        let alpha = f.alpha();
        let scale = if alpha.is_finite() { alpha } else { 1.0 };
        let mid = if alpha.is_finite() { 0.5 * alpha } else { 1.0 };
        if !(f.eval_real(mid) > 0.0) {
            return Err(Error::Domain(format!("F must be positive at {mid}")));
        }
        let make = |c: f64| -> Result<Contour> {
            let line = if f.exp_type().is_some() {
                let mut bad = None;
                let nodes = line_nodes(f, c, |s| match m.laplace(s) {
                    Ok(v) => v / f.eval(s),
                    Err(e) => {
                        bad = Some(e);
                        C64::new(0.0, 0.0)
                    }
                });
                if let Some(e) = bad {
                    return Err(e);
                }
                Line::Nodes(nodes)
            } else {
                Line::Adaptive
            };
            Ok(Contour { c, line })
        };
        let lo = make(scale / 3.0)?;
        let hi = make(2.0 * scale / 3.0)?;
        let mut it = Self { f: f.clone(), m: m.clone(), alpha, lo, hi, g0: 0.0 };
        it.g0 = it.line_integral(&it.lo, None)?.re;
        Ok(it)
    }

    pub fn function(&self) -> &LpFunction {
        &self.f
    }

    pub fn measure(&self) -> &Measure {
        &self.m
    }

    /// `g * d mu (0)`.
    pub fn g_conv_at_zero(&self) -> f64 {
        self.g0
    }

    // (1/2pi) int Phi(y) / (s - z) dy, or (1/2pi) int Phi(y) dy when z is None.
    fn line_integral(&self, ct: &Contour, z: Option<C64>) -> Result<C64> {
        match &ct.line {
            Line::Nodes(nodes) => Ok(match z {
                Some(z) => nodes.iter().map(|(s, w)| w / (s - z)).sum(),
                None => nodes.iter().map(|(_, w)| *w).sum(),
            }),
            Line::Adaptive => {
                let c = ct.c;
                let phi = |y: f64| -> C64 {
                    let s = C64::new(c, y);
                    let v = self.m.laplace(s).unwrap_or(C64::new(f64::NAN, 0.0)) / self.f.eval(s) / TAU;
                    match z {
                        Some(z) => v / (s - z),
                        None => v,
                    }
                };
                let tol = Tolerance { rel: 1e-12, abs: 1e-15, max_subdiv: 20000 };
                let re = integrate(|y| phi(y).re, f64::NEG_INFINITY, f64::INFINITY, tol)?;
                let im = integrate(|y| phi(y).im, f64::NEG_INFINITY, f64::INFINITY, tol)?;
                Ok(C64::new(re.value, im.value))
            }
        }
    }

    /// Moment `(1/2pi) int Phi(c+iy) (c+iy)^k dy` of the contour density. For
    /// large real `x`, `A(x) = [x > 0] f_mu(x) - F(x) sum_k mu_k / x^{k+1}`.
    pub fn moment(&self, k: u32) -> Result<C64> {
        match &self.lo.line {
            Line::Nodes(nodes) => Ok(nodes.iter().map(|(s, w)| w * s.powi(k as i32)).sum()),
            Line::Adaptive => Err(Error::Domain("moments need a family of positive exponential type".into())),
        }
    }

    /// Abscissa and nodes `(s_j, w_j)` of the lower (`upper = false`) or upper
    /// contour, where `w_j` carries `dy / 2pi` times `Phi(s_j)`. `None` for
    /// functions of zero exponential type.
    pub fn contour(&self, upper: bool) -> Option<(f64, &[(C64, C64)])> {
        let ct = if upper { &self.hi } else { &self.lo };
        match &ct.line {
            Line::Nodes(n) => Some((ct.c, n.as_slice())),
            Line::Adaptive => None,
        }
    }

    fn a_on(&self, ct: &Contour, z: C64) -> Result<C64> {
        let j = self.line_integral(ct, Some(z))?;
        let mut v = self.f.eval(z) * j;
        if z.re > ct.c {
            v += f_mu(&self.m, z)?;
        }
        Ok(if z.im == 0.0 { C64::new(v.re, 0.0) } else { v })
    }

    /// `A(F, mu, z)`: entire, equal to `f_mu` at the real zeros of `F`.
    pub fn a(&self, z: C64) -> Result<C64> {
        let split = if self.alpha.is_finite() { 0.5 * self.alpha } else { 0.5 };
        if z.re <= split {
            self.a_on(&self.hi, z)
        } else {
            self.a_on(&self.lo, z)
        }
    }

    /// Both branches at `z` using contours on either side of `Re z`; requires
    /// `0 < Re z < alpha_F`. Returns `(A_1, A_2)`.
    pub fn a_branches(&self, z: C64) -> Result<(C64, C64)> {
        if !(z.re > 0.0 && z.re < self.alpha) {
            return Err(Error::Domain("branches overlap only on 0 < Re z < alpha".into()));
        }
        let top = if self.alpha.is_finite() { self.alpha } else { z.re + 2.0 };
        let mk = |c: f64| -> Result<Contour> {
            let gap = (c - z.re).abs().min(c).min(self.alpha - c);
            Ok(Contour {
                c,
                line: if self.f.exp_type().is_some() {
                    Line::Nodes(line_nodes_within(&self.f, c, gap, |s| self.m.laplace(s).unwrap_or(C64::new(f64::NAN, 0.0)) / self.f.eval(s)))
                } else {
                    Line::Adaptive
                },
            })
        };
        let c1 = mk(0.5 * (z.re + top))?;
        let c2 = mk(0.5 * z.re)?;
        Ok((self.a_on(&c1, z)?, self.a_on(&c2, z)?))
    }

    /// Minorant-type interpolant `L(F, mu, z) = A + (g * d mu)(0) F(z)/z`.
    pub fn l(&self, z: C64) -> Result<C64> {
        let fz = self.f.over_z_power(z, 1.min(self.f.r));
        let corr = if self.f.r >= 1 { self.g0 * fz } else { self.g0 * self.f.eval(z) / z };
        let v = self.a(z)? + corr;
        Ok(if z.im == 0.0 { C64::new(v.re, 0.0) } else { v })
    }

    /// Majorant-type interpolant `M = L + 2 F(z) / (F''(0) z^2)`; needs a double zero at 0.
    pub fn m(&self, z: C64) -> Result<C64> {
        if self.f.r != 2 {
            return Err(Error::Domain("majorant needs a double zero at the origin".into()));
        }
        let v = self.l(z)? + self.f.over_z_power(z, 2) / self.f.lead;
        Ok(if z.im == 0.0 { C64::new(v.re, 0.0) } else { v })
    }

    /// Real restrictions of `L` and `M`.
    pub fn l_real(&self, x: f64) -> Result<f64> {
        Ok(self.l(C64::new(x, 0.0))?.re)
    }

    pub fn m_real(&self, x: f64) -> Result<f64> {
        Ok(self.m(C64::new(x, 0.0))?.re)
    }

    /// `2 F(x) / (F''(0) x^2)`, the gap `M - L`.
    pub fn gap(&self, x: f64) -> f64 {
        (self.f.over_z_power(C64::new(x, 0.0), 2.min(self.f.r)) / self.f.lead).re
    }
}

/// One-off evaluation of `A(F, mu, z)`.
pub fn a_interp(f: &LpFunction, m: &Measure, z: C64) -> Result<C64> {
    Interpolant::new(f, m)?.a(z)
}

/// One-off evaluation of `L(F, mu, z)`.
pub fn l_of(f: &LpFunction, m: &Measure, z: C64) -> Result<C64> {
    Interpolant::new(f, m)?.l(z)
}

/// One-off evaluation of `M(F, mu, z)`.
pub fn m_of(f: &LpFunction, m: &Measure, z: C64) -> Result<C64> {
    Interpolant::new(f, m)?.m(z)
}

/// Smallest positive zero of `F`.
pub fn alpha_f(f: &LpFunction) -> f64 {
    f.alpha()
}

/// `F(z)` via the truncated product; see [`LpFunction::eval_product`].
pub fn eval_f(f: &LpFunction, z: C64, n_terms: usize) -> (C64, f64) {
    f.eval_product(z, n_terms)
}
