//! Periodizations of the truncated and odd Laplace transforms and the extremal
//! trigonometric polynomials on the circle.
//!
//! The extremals are built from their interpolation conditions: values at the
//! zeros of the companion polynomial `B_{N+1}` and derivatives at the nonzero
//! ones determine a real trigonometric polynomial of degree `N`. The Poisson
//! summation of the entire interpolants is kept as an independent check.

use crate::debranges::{Kind, Side};
use crate::lp::{Interpolant, LpFunction};
use crate::measure::{check_hypotheses, distribution, f_mu_real, Measure};
use crate::numerics::{e, integrate, integrate_with_breaks, solve_dense, Tolerance};
use crate::opuc::{opuc_basis, quadrature_rule, CircleMeasure, QuadratureRule, Which};
use crate::{Error, Result, C64};
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

/// `sum_{|k| <= N} a_k e(k x)` with coefficients stored from `a_{-N}` to `a_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    n: usize,
    coeffs: Vec<C64>,
}

impl TrigPoly {
    pub fn new(n: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != 2 * n + 1 {
            return Err(Error::Domain(format!("degree {n} needs {} coefficients, got {}", 2 * n + 1, coeffs.len())));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(Self { n, coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self { n: 0, coeffs: vec![C64::new(c, 0.0)] }
    }

    /// Real polynomial from `(a_0, Re a_1, Im a_1, ..., Re a_N, Im a_N)`.
    pub fn from_real_basis(v: &[f64]) -> Result<Self> {
        if v.len() % 2 != 1 {
            return Err(Error::Domain("real basis has odd length".into()));
        }
        let n = v.len() / 2;
        let mut coeffs = vec![C64::new(0.0, 0.0); 2 * n + 1];
        coeffs[n] = C64::new(v[0], 0.0);
        for k in 1..=n {
            let a = C64::new(v[2 * k - 1], v[2 * k]);
            coeffs[n + k] = a;
            coeffs[n - k] = a.conj();
        }
        Self::new(n, coeffs)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `a_k`, zero for `|k| > N`.
    pub fn coeff(&self, k: i64) -> C64 {
        if k.unsigned_abs() as usize > self.n {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.n as i64) as usize]
        }
    }

    /// Whether `a_{-k} = conj(a_k)` holds to the given tolerance.
    pub fn is_real(&self, tol: f64) -> bool {
        (0..=self.n as i64).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol)
    }

    pub fn eval_c(&self, x: f64) -> C64 {
        let w = e(x);
        let n = self.n;
        let pos = self.coeffs[n..].iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * w + c);
        let neg = self.coeffs[..n].iter().fold(C64::new(0.0, 0.0), |acc, c| (acc + c) * w.conj());
        pos + neg
    }

    /// Real part of the value; the full value for real polynomials.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_c(x).re
    }

    pub fn deriv_c(&self, x: f64) -> C64 {
        let w = e(x);
        let mut acc = C64::new(0.0, 0.0);
        let mut wk = C64::new(1.0, 0.0);
        for k in 1..=self.n as i64 {
            wk *= w;
            acc += C64::new(0.0, TAU * k as f64) * (self.coeff(k) * wk - self.coeff(-k) * wk.conj());
        }
        acc
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.deriv_c(x).re
    }

    /// `a_0`, the mean over `R/Z`.
    pub fn mean(&self) -> f64 {
        self.coeffs[self.n].re
    }

    /// `int P d theta = sum_k a_k int e(k x) d theta`.
    pub fn integral(&self, theta: &CircleMeasure) -> C64 {
        (-(self.n as i64)..=self.n as i64).map(|k| self.coeff(k) * theta.moment(-k)).sum()
    }

    /// CSV with header `k,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,re,im\n");
        for k in -(self.n as i64)..=self.n as i64 {
            let c = self.coeff(k);
            let _ = writeln!(s, "{k},{:e},{:e}", c.re, c.im);
        }
        s
    }
}

fn frac(x: f64) -> f64 {
    let u = x - x.floor();
    if u >= 1.0 {
        0.0
    } else {
        u
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lambda} must be positive")))
    }
}

// h on [0, 1): e^{-l u} (u (1 - E) + E) / (1 - E)^2 with E = e^{-l}. Every
// term is positive, so small l loses nothing.
fn h_frac(l: f64, u: f64) -> f64 {
    if l > 700.0 {
        return u * (-l * u).exp();
    }
    let om = -(-l).exp_m1();
    let em = (-l).exp();
    (-l * u).exp() * (u * om + em) / (om * om)
}

// 1 - e^{-l} (1 + l), by its series for small l.
fn p_small(l: f64) -> f64 {
    if l >= 0.1 {
        return -(-l).exp_m1() - l * (-l).exp();
    }
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..30 {
        term *= -l / k as f64;
        if k >= 2 {
            let t = term * (k as f64 - 1.0);
            sum += t;
            if t.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
    }
    sum
}

fn h_frac_deriv(l: f64, u: f64) -> f64 {
    if l > 700.0 {
        return (-l * u).exp() * (1.0 - l * u);
    }
    let om = -(-l).exp_m1();
    (-l * u).exp() * (p_small(l) / (om * om) - l * u / om)
}

// h(l, u) - h(l, 1 - u) = ((u - 1) sinh(l u) + u sinh(l (1 - u))) / (2 sinh^2(l/2)).
// The linear terms of the sinh series cancel, so small l uses the series.
fn h_tilde_frac(l: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    if l > 1.0 {
        return h_frac(l, u) - h_frac(l, 1.0 - u);
    }
    let (mut num, mut fact, mut lk) = (0.0, 1.0, l);
    let (mut up, mut vp) = (u, 1.0 - u);
    for k in 2..40 {
        fact *= k as f64;
        lk *= l;
        up *= u;
        vp *= 1.0 - u;
        if k % 2 == 1 {
            let t = lk / fact * ((u - 1.0) * up + u * vp);
            num += t;
            if lk / fact < 1e-19 * num.abs().max(1e-300) {
                break;
            }
        }
    }
    let s = (0.5 * l).sinh();
    0.5 * num / (s * s)
}

fn h_tilde_frac_deriv(l: f64, u: f64) -> f64 {
    if l > 1.0 {
        return h_frac_deriv(l, u) + h_frac_deriv(l, 1.0 - u);
    }
    let v = 1.0 - u;
    let mut num = 0.0;
    for k in (3..40).step_by(2) {
        let kf = k as f64;
        let c = l.powi(k) / (1..=k).map(|q| q as f64).product::<f64>();
        let t = c * (u.powi(k) + kf * (u - 1.0) * u.powi(k - 1) + v.powi(k) - kf * u * v.powi(k - 1));
        num += t;
        if c < 1e-19 {
            break;
        }
    }
    let s = (0.5 * l).sinh();
    0.5 * num / (s * s)
}

/// The 1-periodic kernel `h(lambda, x) = sum_n v(lambda, x + n)` with
/// `v(lambda, y) = y e^{-lambda y}` for `y > 0`.
pub fn h(lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(h_frac(lambda, frac(x)))
}

/// The odd kernel `h~(lambda, x) = h(lambda, x) - h(lambda, -x)`.
pub fn h_tilde(lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(h_tilde_frac(lambda, frac(x)))
}

/// `d/dx h(lambda, x)` for `x` off the integers.
pub fn h_deriv(lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let u = off_integer(x)?;
    Ok(h_frac_deriv(lambda, u))
}

/// `d/dx h~(lambda, x)` for `x` off the integers.
pub fn h_tilde_deriv(lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let u = off_integer(x)?;
    Ok(h_tilde_frac_deriv(lambda, u))
}

fn off_integer(x: f64) -> Result<f64> {
    let u = frac(x);
    if u == 0.0 {
        Err(Error::Domain(format!("not differentiable at the integer {x}")))
    } else {
        Ok(u)
    }
}

const LAMBDA_TOL: Tolerance = Tolerance { rel: 1e-13, abs: 1e-15, max_subdiv: 20000 };

/// `F_mu` (truncated) or `F~_mu` (odd) for a measure that has been checked
/// once; atoms are summed in closed form, the density part by integrating the
/// kernel against its distribution function over `lambda > 0`.
#[derive(Debug, Clone)]
pub struct Periodization {
    m: Measure,
    kind: Kind,
    breaks: Vec<f64>,
}

impl Periodization {
    /// Truncated needs (H1'), (H2), (H4); odd needs (H1'), (H2).
    pub fn new(m: &Measure, kind: Kind) -> Result<Self> {
        let rep = check_hypotheses(m, None);
        match kind {
            Kind::Truncated => rep.require(&["H1'", "H2", "H4"])?,
            Kind::Odd => rep.require(&["H1'", "H2"])?,
        }
        let mut breaks: Vec<f64> = m.breakpoints().into_iter().filter(|b| *b > 0.0 && b.is_finite()).collect();
        breaks.push(1.0);
        Ok(Self { m: m.clone(), kind, breaks })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn measure(&self) -> &Measure {
        &self.m
    }

    fn atoms(&self, u: f64, deriv: bool) -> Result<f64> {
        let mut acc = 0.0;
        for &(l0, w) in self.m.atoms() {
            let v = match self.kind {
                Kind::Truncated => {
                    if l0 <= 0.0 {
                        return Err(Error::Hypothesis { name: "H4", detail: format!("atom at {l0}") });
                    }
                    let uu = if u == 0.0 { 1.0 } else { u };
                    let base = (-l0 * uu).exp() / -(-l0).exp_m1();
                    if deriv {
                        -l0 * base
                    } else {
                        base
                    }
                }
                Kind::Odd => {
                    if u == 0.0 && !deriv {
                        0.0
                    } else if l0 == 0.0 {
                        if deriv {
                            -2.0
                        } else {
                            1.0 - 2.0 * u
                        }
                    } else {
                        let om = -(-l0).exp_m1();
                        if deriv {
                            -l0 * ((-l0 * u).exp() + (-l0 * (1.0 - u)).exp()) / om
                        } else {
                            ((-l0 * u).exp_m1() - (-l0 * (1.0 - u)).exp_m1()) / om
                        }
                    }
                }
            };
            acc += w * v;
        }
        Ok(acc)
    }

    fn density(&self, kernel: impl Fn(f64) -> f64) -> Result<f64> {
        if self.m.density().is_none() {
            return Ok(0.0);
        }
        let atoms = self.m.atoms();
        let mu_ac = |l: f64| distribution(&self.m, l) - atoms.iter().filter(|a| a.0 <= l).map(|a| a.1).sum::<f64>();
        Ok(integrate_with_breaks(|l| kernel(l) * mu_ac(l), 0.0, f64::INFINITY, &self.breaks, LAMBDA_TOL)?.value)
    }

    /// Value at `x`; at the integers this is `F_mu(0)` (truncated) or 0 (odd).
    pub fn value(&self, x: f64) -> Result<f64> {
        let u = frac(x);
        let d = match self.kind {
            Kind::Truncated => self.density(|l| h_frac(l, u))?,
            Kind::Odd => self.density(|l| h_tilde_frac(l, u))?,
        };
        Ok(self.atoms(u, false)? + d)
    }

    /// Derivative at `x` off the integers.
    pub fn deriv(&self, x: f64) -> Result<f64> {
        let u = off_integer(x)?;
        let d = match self.kind {
            Kind::Truncated => self.density(|l| h_frac_deriv(l, u))?,
            Kind::Odd => self.density(|l| h_tilde_frac_deriv(l, u))?,
        };
        Ok(self.atoms(u, true)? + d)
    }
}

/// `F_mu(x) = int_0^inf h(lambda, x) mu(lambda) d lambda`.
pub fn f_mu_periodic(m: &Measure, x: f64) -> Result<f64> {
    Periodization::new(m, Kind::Truncated)?.value(x)
}

/// `F~_mu(x) = int_0^inf h~(lambda, x) mu(lambda) d lambda`.
pub fn f_mu_periodic_tilde(m: &Measure, x: f64) -> Result<f64> {
    Periodization::new(m, Kind::Odd)?.value(x)
}

pub fn f_mu_periodic_deriv(m: &Measure, x: f64) -> Result<f64> {
    Periodization::new(m, Kind::Truncated)?.deriv(x)
}

pub fn f_mu_periodic_tilde_deriv(m: &Measure, x: f64) -> Result<f64> {
    Periodization::new(m, Kind::Odd)?.deriv(x)
}

/// Worst one-sided gaps found on the verification grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCheck {
    /// `min (F - L)`.
    pub lower: f64,
    /// `min (M - F)`.
    pub upper: f64,
    pub points: usize,
}

/// The extremal minorant and majorant of degree `N` for `(theta, mu, kind)`.
#[derive(Debug, Clone)]
pub struct PeriodicExtremalPair {
    pub minorant: TrigPoly,
    pub majorant: TrigPoly,
    pub kind: Kind,
    pub theta: CircleMeasure,
    pub measure: Measure,
    pub rule: QuadratureRule,
    /// Shift `1/n` applied to the measure by [`approx_general`].
    pub shift: Option<f64>,
    pub check: GridCheck,
    target: Periodization,
}

impl PeriodicExtremalPair {
    /// The approximated function `F_mu` or `F~_mu`.
    pub fn target(&self, x: f64) -> Result<f64> {
        self.target.value(x)
    }

    pub fn side(&self, side: Side) -> &TrigPoly {
        match side {
            Side::Minorant => &self.minorant,
            Side::Majorant => &self.majorant,
        }
    }

    /// `int P d theta` computed from the moments of `theta`.
    pub fn integral(&self, side: Side) -> f64 {
        self.side(side).integral(&self.theta).re
    }

    /// The quadrature sum over the nodes of `B_{N+1}`.
    pub fn optimal_value(&self, side: Side) -> f64 {
        let p = self.side(side);
        self.rule.nodes.iter().zip(&self.rule.weights).map(|(x, w)| w * p.eval(*x)).sum()
    }

    /// CSV `x,F,L,M` on `points` equally spaced points of `[0, 1)`.
    pub fn dump_csv(&self, points: usize) -> Result<String> {
        let mut s = String::from("x,F,L,M\n");
        for i in 0..points {
            let x = i as f64 / points as f64;
            let _ = writeln!(s, "{x:e},{:e},{:e},{:e}", self.target(x)?, self.minorant.eval(x), self.majorant.eval(x));
        }
        Ok(s)
    }
}

fn node_rule(theta: &CircleMeasure, n: usize) -> Result<QuadratureRule> {
    let basis = opuc_basis(theta, n)?;
    let rule = quadrature_rule(&basis, Which::B)?;
    if rule.nodes.len() != n + 1 || rule.nodes[0].abs() > 1e-12 {
        return Err(Error::RootCount { found: rule.nodes.len(), expected: n + 1 });
    }
    Ok(rule)
}

fn node_zero_values(t: &Periodization) -> Result<(f64, f64)> {
    Ok(match t.kind {
        Kind::Truncated => {
            let f0 = t.value(0.0)?;
            (f0, f0 + 1.0)
        }
        Kind::Odd => (-1.0, 1.0),
    })
}

fn requirements(kind: Kind, side: Option<Side>) -> &'static [&'static str] {
    match (kind, side) {
        (Kind::Truncated, Some(Side::Minorant)) => &["H1'", "H2", "H4"],
        (Kind::Truncated, _) => &["H1'", "H2", "H3", "H4"],
        (Kind::Odd, _) => &["H1'", "H2", "H3"],
    }
}

// Real trigonometric polynomial of degree N = nodes.len() - 1 with the given
// value at node 0 and values and slopes at the others.
fn hermite(nodes: &[f64], v0: f64, vals: &[f64], ders: &[f64]) -> Result<TrigPoly> {
    let n = nodes.len() - 1;
    let dim = 2 * n + 1;
    let scale = 1.0 / (TAU * n.max(1) as f64);
    let mut a = Vec::with_capacity(dim);
    let mut b = Vec::with_capacity(dim);
    for (j, &x) in nodes.iter().enumerate() {
        let mut row = vec![0.0; dim];
        row[0] = 1.0;
        for k in 1..=n {
            let (s, c) = (TAU * k as f64 * x).sin_cos();
            row[2 * k - 1] = 2.0 * c;
            row[2 * k] = -2.0 * s;
        }
        a.push(row);
        b.push(if j == 0 { v0 } else { vals[j - 1] });
    }
    for (j, &x) in nodes.iter().enumerate().skip(1) {
        let mut row = vec![0.0; dim];
        for k in 1..=n {
            let kk = TAU * k as f64;
            let (s, c) = (kk * x).sin_cos();
            row[2 * k - 1] = -2.0 * kk * s * scale;
            row[2 * k] = -2.0 * kk * c * scale;
        }
        a.push(row);
        b.push(ders[j - 1] * scale);
    }
    TrigPoly::from_real_basis(&solve_dense(&a, &b)?)
}

fn verification_points(nodes: &[f64], grid: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
    for &xi in nodes {
        for j in 0..16 {
            let d = 1e-3 * 0.5f64.powi(j);
            pts.push(frac(xi + d));
            pts.push(frac(xi - d));
        }
    }
    pts
}

// Evaluates `f` on all points on the rayon pool.
fn par_map(pts: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    pts.par_iter().map(|x| f(*x)).collect()
}

const GRID: usize = 10_000;
const ONE_SIDED_TOL: f64 = 1e-8;

/// Extremal pair of degree `N`. Truncated needs (H1'), (H2), (H3), (H4); odd
/// needs (H1'), (H2), (H3). One-sidedness is verified on a grid of `10^4`
/// points refined near every node; a violation beyond `1e-8` is an error.
pub fn periodic_extremal(theta: &CircleMeasure, m: &Measure, n: usize, kind: Kind) -> Result<PeriodicExtremalPair> {
    build_pair(theta, m, n, kind, None)
}

fn build_pair(theta: &CircleMeasure, m: &Measure, n: usize, kind: Kind, shift: Option<f64>) -> Result<PeriodicExtremalPair> {
    check_hypotheses(m, None).require(requirements(kind, None))?;
    let target = Periodization::new(m, kind)?;
    let rule = node_rule(theta, n)?;
    let inner = &rule.nodes[1..];
    let vals = inner.iter().map(|x| target.value(*x)).collect::<Result<Vec<_>>>()?;
    let ders = inner.iter().map(|x| target.deriv(*x)).collect::<Result<Vec<_>>>()?;
    let (lo0, hi0) = node_zero_values(&target)?;
    let minorant = hermite(&rule.nodes, lo0, &vals, &ders)?;
    let majorant = hermite(&rule.nodes, hi0, &vals, &ders)?;

    let pts = verification_points(&rule.nodes, GRID);
    let fs = par_map(&pts, |x| target.value(x))?;
    let mut check = GridCheck { lower: f64::INFINITY, upper: f64::INFINITY, points: pts.len() };
    let mut worst = (0.0, 0.0, "");
    for (&x, &f) in pts.iter().zip(&fs) {
        let lo = (f - minorant.eval(x)) / (1.0 + f.abs());
        let hi = (majorant.eval(x) - f) / (1.0 + f.abs());
        if lo < check.lower {
            check.lower = lo;
            if lo < worst.0 {
                worst = (lo, x, "minorant");
            }
        }
        if hi < check.upper {
            check.upper = hi;
            if hi < worst.0 {
                worst = (hi, x, "majorant");
            }
        }
    }
    if worst.0 < -ONE_SIDED_TOL {
        return Err(Error::Verification(format!("{} crosses the target by {:e} at x = {}", worst.2, -worst.0, worst.1)));
    }
    let pair =
        PeriodicExtremalPair { minorant, majorant, kind, theta: theta.clone(), measure: m.clone(), rule, shift, check, target };
    for side in [Side::Minorant, Side::Majorant] {
        let (a, b) = (pair.integral(side), pair.optimal_value(side));
        if (a - b).abs() > 1e-8 * (1.0 + b.abs()) {
            return Err(Error::Verification(format!("{side:?}: integral {a} differs from quadrature sum {b}")));
        }
    }
    Ok(pair)
}

/// The optimal value as the quadrature sum of node values:
/// `F(0)/K_N(1,1) + sum_{xi != 0} F(xi)/K_N(e(xi), e(xi))`, with `F(0)` replaced
/// by `F(0+)` for the majorant and by `-1`, `+1` for the odd kind.
pub fn periodic_optimal_value(theta: &CircleMeasure, m: &Measure, n: usize, kind: Kind, side: Side) -> Result<f64> {
    check_hypotheses(m, None).require(requirements(kind, Some(side)))?;
    let target = Periodization::new(m, kind)?;
    let rule = node_rule(theta, n)?;
    let (lo0, hi0) = node_zero_values(&target)?;
    let v0 = match side {
        Side::Minorant => lo0,
        Side::Majorant => hi0,
    };
    let mut acc = rule.weights[0] * v0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights).skip(1) {
        acc += w * target.value(*x)?;
    }
    Ok(acc)
}

/// Odd-kind pair for the shifted measure `mu_n(Omega) = mu(Omega - 1/n)`,
/// which satisfies (H4) whenever `mu` satisfies (H1'), (H2), (H3).
pub fn approx_general(theta: &CircleMeasure, m: &Measure, n: usize, shift_index: usize) -> Result<PeriodicExtremalPair> {
    if shift_index == 0 {
        return Err(Error::Domain("shift index must be positive".into()));
    }
    check_hypotheses(m, None).require(&["H1'", "H2", "H3"])?;
    let t = 1.0 / shift_index as f64;
    build_pair(theta, &m.shifted(t), n, Kind::Odd, Some(t))
}

/// Result of [`poisson_crosscheck`].
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonReport {
    /// Largest `|minorant (Poisson) - minorant (interpolation)|` on the grid.
    pub max_deviation: f64,
    /// The same for the majorants.
    pub max_deviation_majorant: f64,
    /// Largest `|L - F|` over the nonzero nodes, Poisson route.
    pub node_residual: f64,
    /// `M(0) - F(0+)` (truncated) or `M(0) - 1` (odd), Poisson route.
    pub zero_residual: f64,
    /// Estimate of the first neglected term of the tail sum of `f_mu`.
    pub tail_bound: f64,
    pub warning: Option<String>,
    pub grid: usize,
}

// sum_n L(F, mu, x + n) and sum_n M(F, mu, x + n) for a 1-periodic F. The
// partial fractions are summed in closed form:
//   sum_n 1/(s - x - n) = pi cot(pi (s - x)),  sum_n 1/(x + n)^2 = pi^2 / sin^2(pi x),
// and the samples of f_mu directly, with a midpoint Euler-Maclaurin tail.
struct PoissonSum<'a> {
    it: Interpolant,
    m: &'a Measure,
    taylor: Vec<f64>,
}

const DIRECT_TERMS: usize = 200;

impl<'a> PoissonSum<'a> {
    fn new(f: &LpFunction, m: &'a Measure, coeffs: &[C64]) -> Result<Self> {
        let it = Interpolant::new(f, m)?;
        let d = (coeffs.len() - 1) as f64 / 2.0;
        let mut taylor = Vec::new();
        let mut fact = 1.0;
        for p in 0..28 {
            if p > 0 {
                fact *= p as f64;
            }
            let t: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (c * C64::new(0.0, TAU * (i as f64 - d)).powi(p)).re)
                .sum::<f64>()
                / fact;
            taylor.push(t);
        }
        Ok(Self { it, m, taylor })
    }

    // F(d) / d^2 for the offset d of x from the nearest integer.
    fn f_over_d2(&self, d: f64) -> f64 {
        if d.abs() < 1e-2 {
            self.taylor[2..].iter().rev().fold(0.0, |acc, t| acc * d + t)
        } else {
            self.it.function().eval_real(d) / (d * d)
        }
    }

    fn tail(&self, a: f64) -> Result<(f64, f64)> {
        let f = |y: f64| f_mu_real(self.m, y).unwrap_or(f64::NAN);
        let int = integrate(f, a, f64::INFINITY, Tolerance { rel: 1e-12, abs: 1e-16, max_subdiv: 20000 })?.value;
        let h = 1e-2 * a;
        let d1 = (f(a + h) - f(a - h)) / (2.0 * h);
        Ok((int + d1 / 24.0, 7.0 / 5760.0 * 12.0 * d1.abs() / (a * a)))
    }

    fn eval(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (c, nodes) = [false, true]
            .into_iter()
            .filter_map(|u| self.it.contour(u))
            .max_by(|a, b| {
                let da = frac(a.0 - x).min(1.0 - frac(a.0 - x));
                let db = frac(b.0 - x).min(1.0 - frac(b.0 - x));
                da.total_cmp(&db)
            })
            .ok_or_else(|| Error::Domain("periodic function without contour nodes".into()))?;
        let k0 = (c - x).floor() as i64 + 1;
        let mut sf = 0.0;
        for k in 0..DIRECT_TERMS as i64 {
            sf += f_mu_real(self.m, x + (k0 + k) as f64)?;
        }
        let (tail, tail_err) = self.tail(x + (k0 + DIRECT_TERMS as i64) as f64 - 0.5)?;
        sf += tail;

        let d = x - x.round();
        let fx = self.it.function().eval_real(x);
        let j: C64 = nodes.iter().map(|(s, w)| w * PI / (PI * (s - x)).tan()).sum();
        let r = self.f_over_d2(d);
        let sc = if d == 0.0 { 1.0 } else { (PI * d).sin() / (PI * d) };
        let l = sf + fx * j.re + self.it.g_conv_at_zero() * r * d * (PI * d).cos() / sc;
        let m = l + r / (sc * sc * self.it.function().lead());
        Ok((l, m, tail_err))
    }
}

/// Rebuilds the extremal pair by Poisson summation of the entire interpolants
/// `L(B, mu, .)`, `M(B, mu, .)` with `B(z) = B_{N+1}(e(z)) conj(B_{N+1}(e(conj z)))`,
/// and compares with the interpolation route on `grid` equally spaced points.
/// Needs (H4) on top of the requirements of [`periodic_extremal`].
pub fn poisson_crosscheck(theta: &CircleMeasure, m: &Measure, n: usize, kind: Kind, grid: usize) -> Result<PoissonReport> {
    check_hypotheses(m, None).require(&["H4"])?;
    let pair = periodic_extremal(theta, m, n, kind)?;
    let (_, b) = opuc_basis(theta, n)?.companions();
    let fwd_f = LpFunction::periodic_square(&b)?;
    let fwd = PoissonSum::new(&fwd_f, m, &b_coeffs(&b))?;
    let bc: Vec<C64> = b.iter().map(|c| c.conj()).collect();
    let rev = match kind {
        Kind::Truncated => None,
        Kind::Odd => {
            let f = LpFunction::periodic_square(&bc)?;
            Some(PoissonSum::new(&f, m, &b_coeffs(&bc))?)
        }
    };
    let route = |x: f64| -> Result<(f64, f64, f64)> {
        let (l, mm, t) = fwd.eval(x)?;
        match &rev {
            None => Ok((l, mm, t)),
            Some(r) => {
                let (l2, m2, t2) = r.eval(-x)?;
                Ok((l - m2, mm - l2, t + t2))
            }
        }
    };
    let pts: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
    let vals = par_map(&pts, |x| route(x).map(|v| v.0))?;
    let valm = par_map(&pts, |x| route(x).map(|v| v.1))?;
    let mut report = PoissonReport {
        max_deviation: 0.0,
        max_deviation_majorant: 0.0,
        node_residual: 0.0,
        zero_residual: 0.0,
        tail_bound: 0.0,
        warning: None,
        grid,
    };
    for ((x, l), mm) in pts.iter().zip(&vals).zip(&valm) {
        report.max_deviation = report.max_deviation.max((l - pair.minorant.eval(*x)).abs());
        report.max_deviation_majorant = report.max_deviation_majorant.max((mm - pair.majorant.eval(*x)).abs());
    }
    for &xi in &pair.rule.nodes[1..] {
        let (l, _, t) = route(xi)?;
        report.node_residual = report.node_residual.max((l - pair.target(xi)?).abs());
        report.tail_bound = report.tail_bound.max(t);
    }
    let (_, m0, _) = route(0.0)?;
    let (_, hi0) = node_zero_values(&pair.target)?;
    report.zero_residual = m0 - hi0;
    if report.tail_bound > 1e-8 {
        report.warning = Some(format!("tail of the f_mu samples may dominate: estimate {:e}", report.tail_bound));
    }
    Ok(report)
}

// Coefficients of B(e(z)) conj(B(e(conj z))) from a_{-d} to a_d.
fn b_coeffs(q: &[C64]) -> Vec<C64> {
    let d = q.len() - 1;
    let mut coeffs = vec![C64::new(0.0, 0.0); 2 * d + 1];
    for (j, qj) in q.iter().enumerate() {
        for (k, qk) in q.iter().enumerate() {
            coeffs[j + d - k] += qj * qk.conj();
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(l: f64, y: f64) -> f64 {
        if y > 0.0 {
            y * (-l * y).exp()
        } else {
            0.0
        }
    }

    // Closed form with sinh and cosh of lambda/2, evaluated directly.
    fn h_tilde_hyperbolic(l: f64, x: f64) -> f64 {
        let w = frac(x) - 0.5;
        let s = (0.5 * l).sinh();
        (-0.5 * (0.5 * l).cosh() * (l * w).sinh() + w * s * (l * w).cosh()) / (s * s)
    }

    fn h_hyperbolic(l: f64, x: f64) -> f64 {
        let w = frac(x) - 0.5;
        let s = (0.5 * l).sinh();
        (-l * w).exp() * (2.0 * s * w + (0.5 * l).cosh()) / (4.0 * s * s)
    }

    // sum_n f_mu(x + n) for ramp(2), with the 2/y^2 tail summed by its integral.
    fn ramp2_periodized(x: f64) -> f64 {
        let m = Measure::ramp(2.0).unwrap();
        let k = 100_000;
        let mut s = 0.0;
        for n in 0..k {
            let y = frac(x) + n as f64;
            if y > 0.0 {
                s += f_mu_real(&m, y).unwrap();
            }
        }
        s + 2.0 / (frac(x) + k as f64 - 0.5)
    }

    #[test]
    fn kernel_matches_direct_periodization() {
        let (l, x) = (2.0, 0.3);
        let direct: f64 = (-30..=30).map(|n| v(l, x + n as f64)).sum();
        assert!((h(l, x).unwrap() - direct).abs() < 1e-12);
        for l in [0.01, 0.7, 3.0, 40.0] {
            for x in [0.0, 0.2, 0.5, 0.93, -1.4] {
                assert!((h(l, x).unwrap() - h_hyperbolic(l, x)).abs() < 1e-9 * (1.0 + h_hyperbolic(l, x).abs()));
            }
        }
        assert!(h(0.0, 0.5).is_err());
    }

    #[test]
    fn odd_kernel_forms_agree() {
        for l in [0.05, 0.5, 0.99, 1.01, 4.0, 30.0] {
            assert_eq!(h_tilde(l, 0.5).unwrap(), 0.0);
            for x in [0.1, 0.37, 0.8] {
                let a = h_tilde(l, x).unwrap();
                let b = h(l, x).unwrap() - h(l, 1.0 - x).unwrap();
                assert!((a - b).abs() < 1e-9, "l {l} x {x}: {a} vs {b}");
                if l >= 0.5 {
                    assert!((a - h_tilde_hyperbolic(l, x)).abs() < 1e-10);
                }
            }
        }
        // Small lambda: leading behaviour lambda (2 w^3/3 - w/6).
        let (l, x) = (1e-6, 0.3);
        let w: f64 = x - 0.5;
        assert!((h_tilde(l, x).unwrap() / l - (2.0 * w.powi(3) / 3.0 - w / 6.0)).abs() < 1e-9);
    }

    #[test]
    fn kernel_derivatives_match_differences() {
        let step = 1e-6;
        for l in [1e-3, 0.05, 0.5, 2.0, 25.0] {
            for x in [0.15, 0.5, 0.77] {
                // Rounding in the difference quotient scales with |h| / step.
                let round = 4.0 * f64::EPSILON * h(l, x).unwrap().abs() / step;
                let fd = (h(l, x + step).unwrap() - h(l, x - step).unwrap()) / (2.0 * step);
                assert!((h_deriv(l, x).unwrap() - fd).abs() < 1e-6 * (1.0 + fd.abs()) + round, "h' l {l} x {x}");
                let fd = (h_tilde(l, x + step).unwrap() - h_tilde(l, x - step).unwrap()) / (2.0 * step);
                assert!((h_tilde_deriv(l, x).unwrap() - fd).abs() < 1e-6 * (1.0 + fd.abs()), "h~' l {l} x {x}");
            }
        }
        assert!(h_deriv(1.0, 2.0).is_err());
    }

    #[test]
    fn truncated_periodization() {
        let m = Measure::ramp(2.0).unwrap();
        let p = Periodization::new(&m, Kind::Truncated).unwrap();
        for x in [0.25, 0.6] {
            let a = p.value(x).unwrap();
            assert!((a - ramp2_periodized(x)).abs() < 1e-9, "{a} vs {}", ramp2_periodized(x));
            assert!((p.value(x + 1.0).unwrap() - a).abs() < 1e-12);
        }
        let jump = p.value(1e-9).unwrap() - p.value(0.0).unwrap();
        assert!((jump - 1.0).abs() < 1e-6, "jump {jump}");
        let fd = (p.value(0.5 + 1e-6).unwrap() - p.value(0.5 - 1e-6).unwrap()) / 2e-6;
        assert!((p.deriv(0.5).unwrap() - fd).abs() < 1e-6);
        assert!(matches!(f_mu_periodic(&Measure::dirac(0.0), 0.3), Err(Error::Hypothesis { name: "H4", .. })));
        // Atom at lambda0 > 0: geometric series of e^{-lambda0 (x + n)}.
        let a = f_mu_periodic(&Measure::dirac(0.7), 0.4).unwrap();
        let direct: f64 = (0..200).map(|n| (-0.7 * (0.4 + n as f64)).exp()).sum();
        assert!((a - direct).abs() < 1e-12);
    }

    #[test]
    fn odd_periodization() {
        let saw = Periodization::new(&Measure::dirac(0.0), Kind::Odd).unwrap();
        for x in [0.1, 0.3, 0.5, 0.9, -0.3] {
            assert!((saw.value(x).unwrap() + 2.0 * (frac(x) - 0.5)).abs() < 1e-14);
            assert_eq!(saw.deriv(x).unwrap(), -2.0);
        }
        assert_eq!(saw.value(0.0).unwrap(), 0.0);
        let m = Measure::ramp(2.0).unwrap();
        let odd = Periodization::new(&m, Kind::Odd).unwrap();
        let tr = Periodization::new(&m, Kind::Truncated).unwrap();
        assert!(odd.value(0.5).unwrap().abs() < 1e-13);
        let want = tr.value(0.1).unwrap() - tr.value(-0.1).unwrap();
        assert!((odd.value(0.1).unwrap() - want).abs() < 1e-10);
        assert!((odd.deriv(0.3).unwrap() - odd.deriv(0.7).unwrap()).abs() < 1e-10);
        let fd = (odd.value(0.3 + 1e-6).unwrap() - odd.value(0.3 - 1e-6).unwrap()) / 2e-6;
        assert!((odd.deriv(0.3).unwrap() - fd).abs() < 1e-6);
        let lim = odd.value(1e-9).unwrap();
        assert!((lim - 1.0).abs() < 1e-6, "F~(0+) = {lim}");
    }

    #[test]
    fn trig_poly_basics() {
        let p = TrigPoly::new(1, vec![C64::new(1.0, -2.0), C64::new(0.5, 0.0), C64::new(1.0, 2.0)]).unwrap();
        assert!(p.is_real(0.0));
        let x: f64 = 0.17;
        let direct = 0.5 + 2.0 * ((TAU * x).cos() - 2.0 * (TAU * x).sin());
        assert!((p.eval(x) - direct).abs() < 1e-14);
        let dd = 2.0 * TAU * (-(TAU * x).sin() - 2.0 * (TAU * x).cos());
        assert!((p.deriv(x) - dd).abs() < 1e-13);
        assert_eq!(p.mean(), 0.5);
        assert_eq!(p.coeff(3), C64::new(0.0, 0.0));
        assert!(p.to_csv().starts_with("k,re,im\n-1,"));
        assert!(TrigPoly::new(2, vec![C64::new(0.0, 0.0); 3]).is_err());
        let q = TrigPoly::from_real_basis(&[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn sawtooth_pair() {
        let theta = CircleMeasure::lebesgue();
        for n in [1, 3, 6] {
            let pair = periodic_extremal(&theta, &Measure::dirac(0.0), n, Kind::Odd).unwrap();
            let inv = 1.0 / (n as f64 + 1.0);
            assert!((pair.majorant.mean() - inv).abs() < 1e-12);
            assert!((pair.minorant.mean() + inv).abs() < 1e-12);
            assert!((pair.majorant.eval(0.0) - pair.minorant.eval(0.0) - 2.0).abs() < 1e-12);
            assert!(pair.minorant.is_real(0.0));
            for &xi in &pair.rule.nodes[1..] {
                let gap = pair.majorant.eval(xi) - pair.minorant.eval(xi);
                let slope = pair.majorant.deriv(xi) - pair.minorant.deriv(xi);
                assert!(gap.abs() < 1e-12 && slope.abs() < 1e-9);
            }
            assert!(pair.check.lower >= -1e-8 && pair.check.upper >= -1e-8);
            let hi = periodic_optimal_value(&theta, &Measure::dirac(0.0), n, Kind::Odd, Side::Majorant).unwrap();
            let lo = periodic_optimal_value(&theta, &Measure::dirac(0.0), n, Kind::Odd, Side::Minorant).unwrap();
            assert!((hi - inv).abs() < 1e-12 && (lo + inv).abs() < 1e-12);
            assert!((hi - lo - 2.0 * pair.rule.weights[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn truncated_pair_under_jacobi_weight() {
        let theta = CircleMeasure::jacobi(1.0, 1.0).unwrap();
        let m = Measure::ramp(2.0).unwrap();
        let pair = periodic_extremal(&theta, &m, 4, Kind::Truncated).unwrap();
        let f0 = pair.target(0.0).unwrap();
        assert!((pair.minorant.eval(0.0) - f0).abs() < 1e-10);
        assert!((pair.majorant.eval(0.0) - f0 - 1.0).abs() < 1e-10);
        for &xi in &pair.rule.nodes[1..] {
            let f = pair.target(xi).unwrap();
            let fp = Periodization::new(&m, Kind::Truncated).unwrap().deriv(xi).unwrap();
            assert!((pair.minorant.eval(xi) - f).abs() < 1e-9);
            assert!((pair.minorant.deriv(xi) - fp).abs() < 1e-7);
        }
        for side in [Side::Minorant, Side::Majorant] {
            let direct = pair.integral(side);
            let sum = periodic_optimal_value(&theta, &m, 4, Kind::Truncated, side).unwrap();
            assert!((direct - sum).abs() < 1e-8);
        }
    }

    #[test]
    fn poisson_route_agrees_for_odd_kind() {
        let theta = CircleMeasure::lebesgue();
        let m = Measure::ramp(2.0).unwrap();
        let r = poisson_crosscheck(&theta, &m, 3, Kind::Odd, 400).unwrap();
        assert!(r.max_deviation < 1e-6 && r.max_deviation_majorant < 1e-6, "{r:?}");
        assert!(r.node_residual < 1e-8 && r.zero_residual.abs() < 1e-8);
        let t = poisson_crosscheck(&theta, &m, 3, Kind::Truncated, 400).unwrap();
        assert!(t.max_deviation_majorant < 1e-6 && t.zero_residual.abs() < 1e-8, "{t:?}");
    }

    #[test]
    fn shifted_approximants() {
        let theta = CircleMeasure::lebesgue();
        let dirac = Measure::dirac(0.0);
        let pair = approx_general(&theta, &dirac, 4, 10).unwrap();
        assert_eq!(pair.measure.atoms(), &[(0.1, 1.0)]);
        assert_eq!(pair.shift, Some(0.1));
        let mut sup: f64 = 0.0;
        let mut errs = Vec::new();
        for n in [1, 10, 100] {
            let p = approx_general(&theta, &dirac, 4, n).unwrap();
            for side in [&p.minorant, &p.majorant] {
                sup = sup.max(side.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max));
            }
            errs.push((p.target(0.3).unwrap() - 0.4).abs());
        }
        assert!(sup < 2.0, "coefficients {sup}");
        assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 1e-2, "{errs:?}");
        assert!(approx_general(&theta, &dirac, 4, 0).is_err());
    }

    proptest! {
        #[test]
        fn kernels_are_periodic_and_odd(l in 0.001f64..50.0, x in -3.0f64..3.0) {
            let a = h(l, x).unwrap();
            prop_assert!((h(l, x + 1.0).unwrap() - a).abs() <= 1e-9 * (1.0 + a.abs()));
            let t = h_tilde(l, x).unwrap();
            prop_assert!((h_tilde(l, -x).unwrap() + t).abs() <= 1e-9 * (1.0 + t.abs()));
        }
    }
}
