//! The invariant suite behind `verify`. Every check measures one number and
//! compares it with an expected value under a stated relation and tolerance.

use crate::commands::{self, exit_code, PeriodicArgs};
use crate::output::{g17, json, num};
use crate::spec;
use extremal_core::debranges::{c_nu, gap_integral, DeBrangesSpace, ExtremalPair, Kind, Side};
use extremal_core::lp::{FreqFunction, g_prime_conv_mu, Interpolant, LpFunction};
use extremal_core::measure::{distribution, f_mu, f_mu_by_parts, f_mu_tilde_real, Measure};
use extremal_core::numerics::{bessel_j, bessel_zero, e, gamma, gauss_legendre, integrate, integrate_with_breaks, roots_on_circle, Tolerance};
use extremal_core::opuc::{bernstein_szego, opuc_basis, poly_eval, quadrature_rule, CircleDensity, CircleMeasure, Which};
use extremal_core::periodic::{periodic_extremal, periodic_optimal_value, Periodization};
use extremal_core::{Error, Result, C64};
use rayon::prelude::*;
use serde_json::json;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `|value - expected| <= tolerance`.
    Close,
    /// `value >= expected - tolerance`.
    AtLeast,
    /// `value <= expected + tolerance`.
    AtMost,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Close => "==",
            Relation::AtLeast => ">=",
            Relation::AtMost => "<=",
        }
    }

    fn holds(self, value: f64, expected: f64, tol: f64) -> bool {
        match self {
            Relation::Close => (value - expected).abs() <= tol,
            Relation::AtLeast => value >= expected - tol,
            Relation::AtMost => value <= expected + tol,
        }
    }
}

/// One row of the report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub relation: Relation,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub exit_code: i32,
}

struct Measured {
    relation: Relation,
    value: f64,
    expected: f64,
    tolerance: f64,
    note: String,
}

fn close(value: f64, expected: f64, tolerance: f64, note: impl Into<String>) -> Result<Measured> {
    Ok(Measured { relation: Relation::Close, value, expected, tolerance, note: note.into() })
}

fn at_least(value: f64, expected: f64, tolerance: f64, note: impl Into<String>) -> Result<Measured> {
    Ok(Measured { relation: Relation::AtLeast, value, expected, tolerance, note: note.into() })
}

fn at_most(value: f64, expected: f64, tolerance: f64, note: impl Into<String>) -> Result<Measured> {
    Ok(Measured { relation: Relation::AtMost, value, expected, tolerance, note: note.into() })
}

type Runner = fn() -> Result<Measured>;

const CHECKS: &[(&str, Runner)] = &[
    ("numerics.additivity", numerics_additivity),
    ("numerics.circle_roots", numerics_circle_roots),
    ("numerics.bessel_zeros", numerics_bessel_zeros),
    ("measure.distribution_bounds", measure_distribution_bounds),
    ("measure.by_parts", measure_by_parts),
    ("measure.cauchy_riemann", measure_cauchy_riemann),
    ("measure.odd", measure_odd),
    ("lp.sign", lp_sign),
    ("lp.monotone", lp_monotone),
    ("lp.lipschitz", lp_lipschitz),
    ("lp.normalization", lp_normalization),
    ("lp.branches", lp_branches),
    ("lp.one_sided", lp_one_sided),
    ("lp.interpolation", lp_interpolation),
    ("debranges.reproducing", debranges_reproducing),
    ("debranges.isometry", debranges_isometry),
    ("debranges.equality", debranges_equality),
    ("debranges.optimal_value", debranges_optimal_value),
    ("debranges.one_sided", debranges_one_sided),
    ("opuc.orthonormality", opuc_orthonormality),
    ("opuc.parseval", opuc_parseval),
    ("opuc.interlacing", opuc_interlacing),
    ("opuc.bernstein_szego", opuc_bernstein_szego),
    ("opuc.ladder", opuc_ladder),
    ("periodic.one_sided", periodic_one_sided),
    ("periodic.tangency", periodic_tangency),
    ("periodic.tangency_slope", periodic_tangency_slope),
    ("periodic.optimality", periodic_optimality),
    ("periodic.dominance", periodic_dominance),
    ("periodic.sawtooth", periodic_sawtooth),
    ("cli.determinism", cli_determinism),
    ("cli.exit_codes", cli_exit_codes),
];

/// Names of all checks, in run order.
pub fn names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

fn selected(name: &str, only: &[String]) -> bool {
    only.is_empty() || only.iter().any(|o| name == o || name.strip_prefix(o.as_str()).is_some_and(|r| r.starts_with('.')))
}

/// Runs the checks matching `only` (exact names or module prefixes; all when
/// empty). Checks named in `corrupt` get an unattainable tolerance, which
/// exercises the failure path.
pub fn run(only: &[String], corrupt: &[String]) -> Result<VerifyReport> {
    if let Some(bad) = only.iter().chain(corrupt).find(|o| !CHECKS.iter().any(|c| selected(c.0, std::slice::from_ref(o)))) {
        return Err(Error::Parse(format!("no check matches '{bad}' (known: {})", names().join(", "))));
    }
    let mut checks = Vec::new();
    for (name, runner) in CHECKS {
        if !selected(name, only) {
            checks.push(Check {
                name,
                status: Status::Skip,
                relation: Relation::Close,
                value: f64::NAN,
                expected: f64::NAN,
                tolerance: f64::NAN,
                note: "not selected".into(),
            });
            continue;
        }
        let c = match runner() {
            Ok(mut m) => {
                if corrupt.iter().any(|c| c == name) {
                    m.tolerance = f64::NEG_INFINITY;
                    m.note = format!("tolerance corrupted; {}", m.note);
                }
                let ok = m.relation.holds(m.value, m.expected, m.tolerance);
                Check {
                    name,
                    status: if ok { Status::Pass } else { Status::Fail },
                    relation: m.relation,
                    value: m.value,
                    expected: m.expected,
                    tolerance: m.tolerance,
                    note: m.note,
                }
            }
            Err(e) => Check {
                name,
                status: Status::Fail,
                relation: Relation::Close,
                value: f64::NAN,
                expected: f64::NAN,
                tolerance: f64::NAN,
                note: format!("error: {e}"),
            },
        };
        checks.push(c);
    }
    let exit_code = if checks.iter().any(|c| c.status == Status::Fail) { 5 } else { 0 };
    Ok(VerifyReport { checks, exit_code })
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skip => "skip",
    }
}

pub fn table(r: &VerifyReport) -> String {
    let mut s = String::from("name,status,value,relation,expected,tolerance,note\n");
    for c in &r.checks {
        s.push_str(&format!(
            "{},{},{},{},{},{},\"{}\"\n",
            c.name,
            status_name(c.status),
            g17(c.value),
            c.relation.symbol(),
            g17(c.expected),
            g17(c.tolerance),
            c.note.replace('"', "'")
        ));
    }
    s
}

pub fn report_json(r: &VerifyReport) -> String {
    let checks: Vec<_> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "status": status_name(c.status),
                "value": num(c.value),
                "relation": c.relation.symbol(),
                "expected": num(c.expected),
                "tolerance": num(c.tolerance),
                "note": c.note,
            })
        })
        .collect();
    json(&json!({ "checks": checks, "exit_code": r.exit_code }))
}

fn tol(rel: f64, abs: f64) -> Tolerance {
    Tolerance { rel, abs, max_subdiv: 200_000 }
}

// Grid on [lo, hi] plus points at distances 1e-3 2^-j on both sides of each
// of the given centres.
fn refined_grid(n: usize, lo: f64, hi: f64, centres: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    for c in centres {
        for j in 0..16 {
            let d = 1e-3 * 0.5f64.powi(j);
            g.push(c + d);
            g.push(c - d);
        }
    }
    g
}

fn builtin_h2_measures() -> Result<Vec<(&'static str, Measure)>> {
    Ok(vec![
        ("dirac(0)", Measure::dirac(0.0)),
        ("dirac(0.5)", Measure::dirac(0.5)),
        ("ramp(2)", Measure::ramp(2.0)?),
        ("exponential", Measure::exponential()),
        ("sine(1)", Measure::sine(1.0)?),
    ])
}

fn numerics_additivity() -> Result<Measured> {
    let f = |x: f64| (3.0 * x).sin() * (-x).exp();
    let t = tol(1e-12, 1e-14);
    let whole = integrate(f, 0.0, 4.0, t)?;
    let a = integrate(f, 0.0, 1.3, t)?;
    let b = integrate(f, 1.3, 4.0, t)?;
    close(a.value + b.value, whole.value, whole.error + a.error + b.error + 1e-13, "int_0^4 = int_0^1.3 + int_1.3^4 for sin(3x) e^-x")
}

fn numerics_circle_roots() -> Result<Measured> {
    let want = [0.0, 0.3, 0.55, 0.8];
    let mut p = vec![C64::new(1.0, 0.0)];
    for x in want {
        let r = e(x);
        let mut q = vec![C64::new(0.0, 0.0); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            q[i + 1] += c;
            q[i] -= c * r;
        }
        p = q;
    }
    let got = roots_on_circle(&p)?;
    if got.len() != want.len() {
        return close(got.len() as f64, want.len() as f64, 0.0, "root count");
    }
    let dev = got.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    at_most(dev, 0.0, 1e-10, "max |argument - expected| for a product of four unimodular factors")
}

fn numerics_bessel_zeros() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for nu in [-0.5, 0.0, 0.5, 1.0] {
        for k in 1..=50 {
            worst = worst.max(bessel_j(nu, bessel_zero(nu, k)?)?.abs());
        }
    }
    at_most(worst, 0.0, 1e-12, "max |J_nu(j_nu,k)| over nu in {-1/2, 0, 1/2, 1}, k <= 50")
}

fn measure_distribution_bounds() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for (_, m) in builtin_h2_measures()? {
        for i in 0..10_000 {
            let x = -1.0 + 61.0 * i as f64 / 9999.0;
            let d = distribution(&m, x);
            worst = worst.max(-d).max(d - 1.0);
        }
    }
    at_most(worst, 0.0, 1e-12, "largest excursion of the distribution outside [0, 1], 10^4 points per built-in family")
}

fn measure_by_parts() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for (_, m) in builtin_h2_measures()? {
        for x in [0.1, 1.0, 10.0] {
            let a = f_mu(&m, C64::new(x, 0.0))?.re;
            let b = f_mu_by_parts(&m, C64::new(x, 0.0))?.re;
            worst = worst.max((a - b).abs() / a.abs().max(1e-300));
        }
    }
    at_most(worst, 0.0, 1e-9, "relative gap between the direct and integrated-by-parts transforms at x = 0.1, 1, 10")
}

fn measure_cauchy_riemann() -> Result<Measured> {
    let h = 1e-5;
    let z = C64::new(1.0, 1.0);
    let mut worst: f64 = 0.0;
    for (_, m) in builtin_h2_measures()? {
        let f = |w: C64| f_mu(&m, w);
        let dx = (f(z + h)? - f(z - h)?) / (2.0 * h);
        let dy = (f(z + C64::new(0.0, h))? - f(z - C64::new(0.0, h))?) / (2.0 * h);
        worst = worst.max((dx.re - dy.im).abs()).max((dx.im + dy.re).abs());
    }
    at_most(worst, 0.0, 1e-6, "Cauchy-Riemann residual of f_mu at 1 + i by central differences")
}

fn measure_odd() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for (_, m) in builtin_h2_measures()? {
        for i in 0..200 {
            let x = 0.05 + 0.1 * i as f64;
            worst = worst.max((f_mu_tilde_real(&m, x)? + f_mu_tilde_real(&m, -x)?).abs());
        }
    }
    close(worst, 0.0, 0.0, "max |f~(x) + f~(-x)|")
}

fn lp_families() -> Result<Vec<LpFunction>> {
    Ok(vec![LpFunction::sin_squared(1.0)?, LpFunction::bessel_b_squared(0.0)?])
}

fn grid_pm5(n: usize) -> Vec<f64> {
    (0..n).map(|i| -5.0 + 10.0 * i as f64 / (n - 1) as f64).collect()
}

fn lp_sign() -> Result<Measured> {
    let mut lo = f64::INFINITY;
    for f in lp_families()? {
        let g = FreqFunction::new(&f)?;
        let vals: Vec<f64> = grid_pm5(1000).par_iter().map(|t| g.value(*t)).collect::<Result<_>>()?;
        lo = vals.into_iter().fold(lo, f64::min);
    }
    at_least(lo, 0.0, 1e-12, "min of g on 10^3 points of [-5, 5] for sin^2 and B_0^2")
}

fn lp_monotone() -> Result<Measured> {
    let mut lo = f64::INFINITY;
    for f in lp_families()? {
        let g = FreqFunction::new(&f)?;
        let d: Vec<f64> = grid_pm5(1000).par_iter().map(|t| g.deriv(*t)).collect::<Result<_>>()?;
        lo = d.windows(2).map(|w| w[1] - w[0]).fold(lo, f64::min);
    }
    at_least(lo, 0.0, 1e-9, "min forward difference of g' on 10^3 points of [-5, 5]")
}

fn lp_lipschitz() -> Result<Measured> {
    let f = LpFunction::sin_squared(1.0)?;
    let g = FreqFunction::new(&f)?;
    let m = Measure::ramp(2.0)?;
    let f2 = f.second_derivative_at_zero();
    let at0 = g_prime_conv_mu(&g, &m, 0.0)?;
    let ex: Vec<f64> = grid_pm5(41)
        .par_iter()
        .map(|t| Ok((g_prime_conv_mu(&g, &m, *t)? - at0).abs() - 2.0 * t.abs() / f2))
        .collect::<Result<_>>()?;
    at_most(ex.into_iter().fold(f64::NEG_INFINITY, f64::max), 0.0, 1e-9, "max of |g'*mu(t) - g'*mu(0)| - 2|t|/F''(0), F = sin^2, mu = ramp(2)")
}

fn lp_normalization() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for f in lp_families()? {
        let g = FreqFunction::new(&f)?;
        let jump = g.deriv(40.0)? - g.deriv(-40.0)?;
        let want = 2.0 / f.second_derivative_at_zero();
        worst = worst.max((jump - want).abs());
    }
    close(worst, 0.0, 1e-8, "|g'(40) - g'(-40) - 2/F''(0)|, the integral of g''")
}

fn lp_interp() -> Result<(Interpolant, Measure)> {
    let m = Measure::ramp(2.0)?;
    Ok((Interpolant::new(&LpFunction::sin_squared(1.0)?, &m)?, m))
}

fn lp_branches() -> Result<Measured> {
    let (it, _) = lp_interp()?;
    let mut worst: f64 = 0.0;
    for j in 0..10 {
        for y in [0.0, 0.7] {
            let z = C64::new(PI * (j as f64 + 0.5) / 10.0, y);
            let (a1, a2) = it.a_branches(z)?;
            worst = worst.max((a1 - a2).norm() / (1.0 + a1.norm()));
        }
    }
    at_most(worst, 0.0, 1e-8, "max |A_1 - A_2| / (1 + |A_1|) at 20 points of the strip 0 < Re z < pi")
}

fn lp_one_sided() -> Result<Measured> {
    let (it, m) = lp_interp()?;
    let zeros: Vec<f64> = (-19..=19).map(|k| k as f64 * PI).collect();
    let pts = refined_grid(10_000, -60.0, 60.0, &zeros);
    let gaps: Vec<f64> = pts
        .par_iter()
        .map(|&x| {
            let f = extremal_core::measure::f_mu_real(&m, x)?;
            Ok((f - it.l_real(x)?).min(it.m_real(x)? - f))
        })
        .collect::<Result<_>>()?;
    at_least(gaps.into_iter().fold(f64::INFINITY, f64::min), 0.0, 1e-9, "min of f - L and M - f, F = sin^2, mu = ramp(2), refined grid on [-60, 60]")
}

fn lp_interpolation() -> Result<Measured> {
    let (it, m) = lp_interp()?;
    let mut worst: f64 = 0.0;
    for k in (-20..=20).filter(|k| *k != 0) {
        let x = k as f64 * PI;
        let f = extremal_core::measure::f_mu_real(&m, x)?;
        worst = worst.max((it.l_real(x)? - f).abs()).max((it.m_real(x)? - f).abs());
    }
    at_most(worst, 0.0, 1e-8, "max |L - f|, |M - f| at the nonzero zeros k pi, |k| <= 20")
}

fn debranges_reproducing() -> Result<Measured> {
    let space = DeBrangesSpace::paley_wiener(1.0)?;
    let (w0, w1) = (C64::new(0.3, 0.2), C64::new(-0.4, 0.1));
    let prod = |x: f64| {
        let z = C64::new(x, 0.0);
        space.kernel(w0, z) * space.kernel(w1, z).conj() * space.weight(x).unwrap_or(f64::NAN)
    };
    // Gauss panels of length pi on [-X, X]; beyond X the integrand is
    // P(x)/x^2 with P asymptotically pi-periodic, so each tail is
    // mean(P)/X up to O(X^-2).
    let (gx, gw) = gauss_legendre(24);
    let panel = |a: f64| -> C64 {
        gx.iter().zip(&gw).map(|(x, w)| prod(a + 0.5 * PI * (1.0 + x)) * (0.5 * PI * w)).sum()
    };
    let n = 6000i64;
    let x = n as f64 * PI;
    let body: C64 = (-n..n).into_par_iter().map(|k| panel(k as f64 * PI)).reduce(|| C64::new(0.0, 0.0), |a, b| a + b);
    let mean_p = |a: f64| -> C64 {
        gx.iter().zip(&gw).map(|(t, w)| {
            let y = a + 0.5 * PI * (1.0 + t);
            prod(y) * y * y * (0.5 * w)
        }).sum()
    };
    let tails = (mean_p(x) + mean_p(-x - PI)) / x;
    let want = space.kernel(w0, w1);
    close((body + tails - want).norm(), 0.0, 1e-6, "|<K(w0,.), K(w1,.)> - K(w0, w1)|, Paley-Wiener type 1, w0 = 0.3+0.2i, w1 = -0.4+0.1i")
}

fn debranges_isometry() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for nu in [0.0, 0.5] {
        let space = DeBrangesSpace::homogeneous(nu)?;
        let x_max = space.b_zero(600);
        let mut breaks = vec![0.0];
        for k in 1..600 {
            breaks.push(space.b_zero(k));
            breaks.push(-space.b_zero(k));
        }
        let kern = |x: f64| space.kernel(C64::new(0.0, 0.0), C64::new(x, 0.0)).re;
        let t = tol(1e-11, 1e-13);
        let left = integrate_with_breaks(|x| kern(x).powi(2) * space.weight(x).unwrap_or(f64::NAN), -x_max, x_max, &breaks, t)?;
        let right = integrate_with_breaks(|x| kern(x).powi(2) * x.abs().powf(2.0 * nu + 1.0), -x_max, x_max, &breaks, t)?;
        // Period-averaged tails of both integrands beyond x_max.
        let g = gamma(nu + 1.0)?;
        let lt = 1.0 / (PI * PI * x_max);
        let rt = g * g * 4f64.powf(nu) * (2.0 / PI) / (PI * PI * x_max);
        let ratio = (left.value + lt) / (right.value + rt);
        worst = worst.max((ratio - c_nu(nu)).abs() / c_nu(nu));
    }
    at_most(worst, 0.0, 1e-4, "relative deviation of int |F|^2 |E|^-2 / int |F|^2 |x|^(2nu+1) from c_nu, F = K(0,.), nu = 0, 1/2")
}

fn pair_set() -> Result<Vec<ExtremalPair>> {
    let m = Measure::ramp(2.0)?;
    let mut out = Vec::new();
    for space in [DeBrangesSpace::paley_wiener(1.0)?, DeBrangesSpace::homogeneous(0.0)?] {
        for kind in [Kind::Truncated, Kind::Odd] {
            out.push(ExtremalPair::new(&space, &m, kind)?);
        }
    }
    Ok(out)
}

fn debranges_equality() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for pair in pair_set()? {
        let xs: Vec<f64> = (0..1000).map(|i| -30.0 + 60.0 * i as f64 / 999.0).collect();
        let d: Vec<f64> = xs
            .par_iter()
            .map(|&x| {
                let (l, u) = pair.both(x)?;
                let k = pair.kernel_gap(x);
                Ok(((u - l) - k).abs() / (1.0 + k.abs()))
            })
            .collect::<Result<_>>()?;
        worst = d.into_iter().fold(worst, f64::max);
    }
    at_most(worst, 0.0, 1e-8, "max |(M - L) - kappa K(0,x)^2/K(0,0)^2| / (1 + |.|), both families and kinds")
}

fn debranges_optimal_value() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    let m = Measure::dirac(0.0);
    let spaces = [
        DeBrangesSpace::paley_wiener(1.0)?,
        DeBrangesSpace::homogeneous(-0.5)?,
        DeBrangesSpace::homogeneous(0.0)?,
        DeBrangesSpace::homogeneous(0.5)?,
    ];
    for space in spaces {
        let pair = ExtremalPair::new(&space, &m, Kind::Odd)?;
        let v = gap_integral(&pair, 500.0)?;
        worst = worst.max((v - pair.optimal_value()).abs() / pair.optimal_value());
    }
    at_most(worst, 0.0, 1e-6, "relative gap between int (M - L) |E|^-2 and kappa/K(0,0), Paley-Wiener and nu = -1/2, 0, 1/2")
}

fn debranges_one_sided() -> Result<Measured> {
    let mut lo = f64::INFINITY;
    for pair in pair_set()? {
        let zeros: Vec<f64> = (1..=12).flat_map(|k| [pair.space().b_zero(k), -pair.space().b_zero(k)]).collect();
        let pts = refined_grid(2000, -40.0, 40.0, &zeros);
        let g: Vec<f64> = pts
            .par_iter()
            .map(|&x| {
                let (l, u) = pair.both(x)?;
                let f = pair.target(x)?;
                Ok((f - l).min(u - f))
            })
            .collect::<Result<_>>()?;
        lo = g.into_iter().fold(lo, f64::min);
    }
    at_least(lo, 0.0, 1e-9, "min of f - L and M - f on refined grids, both families and kinds, mu = ramp(2)")
}

fn circle_measures() -> Result<Vec<(&'static str, CircleMeasure, usize)>> {
    Ok(vec![
        ("lebesgue", CircleMeasure::lebesgue(), 32),
        ("jacobi(1,1)", CircleMeasure::jacobi(1.0, 1.0)?, 32),
        ("atom + jacobi(0.5,1.5)", CircleMeasure::new(vec![(0.3, 0.25)], Some(CircleDensity::Jacobi { a: 0.5, b: 1.5 }))?, 12),
    ])
}

fn opuc_orthonormality() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for (_, theta, n) in circle_measures()? {
        worst = worst.max(opuc_basis(&theta, n)?.orthonormality_residual());
    }
    at_most(worst, 0.0, 1e-8, "max |<phi_j, phi_k> - delta_jk|, Lebesgue and Jacobi at N = 32, atom mixture at N = 12")
}

fn test_poly(n: usize, shift: f64) -> Vec<C64> {
    (0..=n).map(|j| C64::new((1.3 * j as f64 + shift).sin(), (0.7 * j as f64 + 0.2 + shift).cos())).collect()
}

fn opuc_parseval() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for (_, theta, _) in circle_measures()? {
        let n = 10;
        let basis = opuc_basis(&theta, n)?;
        let rule = quadrature_rule(&basis, Which::B)?;
        let q = test_poly(n, 0.0);
        let norm = theta.inner_poly(&q, &q).re;
        let sum: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * poly_eval(&q, e(*x)).norm_sqr()).sum();
        worst = worst.max((norm - sum).abs() / norm);
    }
    at_most(worst, 0.0, 1e-8, "relative gap between ||Q||^2 and its quadrature sum over the zeros of B_{N+1}, N = 10")
}

fn opuc_interlacing() -> Result<Measured> {
    let mut bad = 0usize;
    for (_, theta, _) in circle_measures()? {
        let basis = opuc_basis(&theta, 10)?;
        let a = quadrature_rule(&basis, Which::A)?.nodes;
        let b = quadrature_rule(&basis, Which::B)?.nodes;
        for (i, w) in b.iter().enumerate() {
            let next = b.get(i + 1).copied().unwrap_or(1.0 + b[0]);
            let inside = a.iter().filter(|x| (**x > *w && **x < next) || (**x + 1.0 > *w && **x + 1.0 < next)).count();
            if inside != 1 {
                bad += 1;
            }
        }
    }
    close(bad as f64, 0.0, 0.0, "gaps between consecutive zeros of B_{N+1} not holding exactly one zero of A_{N+1}, N = 10")
}

fn opuc_bernstein_szego() -> Result<Measured> {
    let theta = CircleMeasure::jacobi(1.0, 1.0)?;
    let n = 6;
    let basis = opuc_basis(&theta, n)?;
    let bs = bernstein_szego(&basis, n)?;
    let (q, r) = (test_poly(n, 0.0), test_poly(n, 1.1));
    let d = (theta.inner_poly(&q, &r) - bs.inner_poly(&q, &r)).norm();
    at_most(d, 0.0, 1e-8, "|<Q,R>_theta - <Q,R>_theta_n| for dx/|phi_n(e(x))|^2, Jacobi(1,1), n = 6")
}

fn opuc_ladder() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for (_, theta, _) in circle_measures()? {
        for n in [3, 8] {
            let rule = quadrature_rule(&opuc_basis(&theta, n)?, Which::B)?;
            for k in -(n as i64)..=n as i64 {
                let q: C64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| *w * e(k as f64 * x)).sum();
                worst = worst.max((q - theta.moment(-k)).norm());
            }
        }
    }
    at_most(worst, 0.0, 1e-8, "max quadrature error on e(kx), |k| <= N, N = 3, 8")
}

fn periodic_one_sided() -> Result<Measured> {
    let thetas = [CircleMeasure::lebesgue(), CircleMeasure::jacobi(1.0, 1.0)?];
    let cases: Vec<(Measure, Kind, Vec<usize>)> = vec![
        (Measure::dirac(0.0), Kind::Odd, vec![1, 8, 32]),
        (Measure::dirac(0.5), Kind::Truncated, vec![4, 16]),
        (Measure::ramp(2.0)?, Kind::Truncated, vec![2, 8]),
        (Measure::ramp(2.0)?, Kind::Odd, vec![2, 8]),
    ];
    let mut lo = f64::INFINITY;
    let mut count = 0;
    for theta in &thetas {
        for (m, kind, ns) in &cases {
            for &n in ns {
                let p = periodic_extremal(theta, m, n, *kind)?;
                lo = lo.min(p.check.lower).min(p.check.upper);
                count += 1;
            }
        }
    }
    at_least(lo, 0.0, 1e-8, format!("min of (F - L) and (M - F), over {count} built-in combinations"))
}

fn tangency_pair() -> Result<(extremal_core::periodic::PeriodicExtremalPair, Periodization)> {
    let m = Measure::ramp(2.0)?;
    let p = periodic_extremal(&CircleMeasure::jacobi(1.0, 1.0)?, &m, 6, Kind::Truncated)?;
    Ok((p, Periodization::new(&m, Kind::Truncated)?))
}

fn periodic_tangency() -> Result<Measured> {
    let (p, t) = tangency_pair()?;
    let mut worst: f64 = 0.0;
    for &xi in &p.rule.nodes[1..] {
        let f = t.value(xi)?;
        worst = worst.max((p.minorant.eval(xi) - f).abs()).max((p.majorant.eval(xi) - f).abs());
    }
    at_most(worst, 0.0, 1e-9, "value residual at nonzero nodes, Jacobi(1,1), ramp(2), truncated, N = 6")
}

fn periodic_tangency_slope() -> Result<Measured> {
    let (p, t) = tangency_pair()?;
    let mut worst: f64 = 0.0;
    for &xi in &p.rule.nodes[1..] {
        let d = t.deriv(xi)?;
        worst = worst.max((p.minorant.deriv(xi) - d).abs()).max((p.majorant.deriv(xi) - d).abs());
    }
    at_most(worst, 0.0, 1e-7, "derivative residual at nonzero nodes, Jacobi(1,1), ramp(2), truncated, N = 6")
}

fn periodic_optimality() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    let cases = [
        (CircleMeasure::jacobi(1.0, 1.0)?, Measure::ramp(2.0)?, Kind::Truncated, 6),
        (CircleMeasure::lebesgue(), Measure::dirac(0.0), Kind::Odd, 5),
        (CircleMeasure::jacobi(1.0, 1.0)?, Measure::ramp(2.0)?, Kind::Odd, 4),
    ];
    for (theta, m, kind, n) in cases {
        let p = periodic_extremal(&theta, &m, n, kind)?;
        for side in [Side::Minorant, Side::Majorant] {
            let sum = periodic_optimal_value(&theta, &m, n, kind, side)?;
            worst = worst.max((p.integral(side) - sum).abs());
        }
    }
    at_most(worst, 0.0, 1e-8, "|int P d theta - quadrature-sum value| for both sides of three constructions")
}

fn periodic_dominance() -> Result<Measured> {
    let mut worst: f64 = 0.0;
    let cases = [
        (CircleMeasure::jacobi(1.0, 1.0)?, Measure::ramp(2.0)?, Kind::Truncated, 1.0),
        (CircleMeasure::lebesgue(), Measure::ramp(2.0)?, Kind::Odd, 2.0),
    ];
    for (theta, m, kind, kappa) in cases {
        let p = periodic_extremal(&theta, &m, 5, kind)?;
        let gap = |x: f64| p.majorant.eval(x) - p.minorant.eval(x);
        worst = worst.max((gap(0.0) - kappa).abs());
        for &xi in &p.rule.nodes[1..] {
            worst = worst.max(gap(xi).abs());
        }
    }
    at_most(worst, 0.0, 1e-9, "|(M - L)(0) - kappa| and |(M - L)(xi)| at nonzero nodes, N = 5")
}

fn periodic_sawtooth() -> Result<Measured> {
    let theta = CircleMeasure::lebesgue();
    let mut worst: f64 = 0.0;
    for n in 1..=16 {
        let p = periodic_extremal(&theta, &Measure::dirac(0.0), n, Kind::Odd)?;
        worst = worst.max((p.integral(Side::Majorant) - 1.0 / (n as f64 + 1.0)).abs());
    }
    at_most(worst, 0.0, 1e-10, "|int M~ d theta - 1/(N+1)| for the sawtooth, Lebesgue, N = 1..16")
}

fn cli_determinism() -> Result<Measured> {
    let render = || -> Result<String> {
        let q = commands::quadrature("jacobi:1,1", 8)?;
        let p = commands::periodic(&PeriodicArgs {
            theta: "lebesgue".into(),
            measure: "dirac:0".into(),
            kind: Kind::Odd,
            degree: 3,
            grid: 64,
        })?;
        let mut s = json(&q.summary) + &json(&p.summary);
        for (_, t) in q.tables.iter().chain(&p.tables) {
            s += t;
        }
        Ok(s)
    };
    let (a, b) = (render()?, render()?);
    close(if a == b { 0.0 } else { 1.0 }, 0.0, 0.0, "byte differences between two identical quadrature and periodic runs")
}

fn cli_exit_codes() -> Result<Measured> {
    let cases: Vec<(Error, i32)> = vec![
        (spec::measure("bogus").err().unwrap_or(Error::Parse(String::new())), 2),
        (Error::Hypothesis { name: "H3", detail: String::new() }, 3),
        (Error::Nonconvergence { estimate: 0.0, error: 1.0, iterations: 1 }, 4),
        (Error::Verification(String::new()), 5),
    ];
    let wrong = cases.iter().filter(|(e, c)| exit_code(e) != *c).count();
    close(wrong as f64, 0.0, 0.0, "errors mapped to the wrong exit code")
}
