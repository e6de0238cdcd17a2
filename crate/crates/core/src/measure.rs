//! Signed measures on the line, their distribution functions, the hypothesis
//! checks (H1)–(H4), and the truncated and odd Laplace transforms.
//!
//! A [`Measure`] is a finite list of atoms plus at most one density drawn from
//! a small set of families (or a user closure). Everything is immutable once
//! built, so all evaluations are safe to share across threads.

use crate::numerics::{integrate_with_breaks, Tolerance};
use crate::{Error, Result, C64};
use std::fmt;
use std::sync::Arc;

/// Density families with known closed forms.
#[derive(Clone)]
pub enum Density {
    /// `e^{-lambda}` on `[0, inf)`.
    Exponential,
    /// `p lambda^{p-1}` on `[0, 1]`, i.e. distribution `min(lambda^p, 1)`.
    Ramp { p: f64 },
    /// `(a/2) sin(a lambda)` on `(0, inf)`, distribution `(1 - cos a lambda)/2`.
    Sine { a: f64 },
    /// Arbitrary density on `[lo, hi]` with declared kinks.
    Custom { f: Arc<dyn Fn(f64) -> f64 + Send + Sync>, lo: f64, hi: f64, breaks: Vec<f64> },
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Exponential => write!(f, "Exponential"),
            Density::Ramp { p } => write!(f, "Ramp {{ p: {p} }}"),
            Density::Sine { a } => write!(f, "Sine {{ a: {a} }}"),
            Density::Custom { lo, hi, .. } => write!(f, "Custom {{ lo: {lo}, hi: {hi} }}"),
        }
    }
}

impl Density {
    fn support(&self) -> (f64, f64) {
        match self {
            Density::Exponential | Density::Sine { .. } => (0.0, f64::INFINITY),
            Density::Ramp { .. } => (0.0, 1.0),
            Density::Custom { lo, hi, .. } => (*lo, *hi),
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        match self {
            Density::Exponential => (-x).exp(),
            Density::Ramp { p } => p * x.powf(p - 1.0),
            Density::Sine { a } => 0.5 * a * (a * x).sin(),
            Density::Custom { f, .. } => f(x),
        }
    }

    fn breaks(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        let mut b = vec![lo];
        if hi.is_finite() {
            b.push(hi);
        }
        if let Density::Custom { breaks, .. } = self {
            b.extend(breaks);
        }
        b
    }

    /// Mass of `(-inf, x]`.
    fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        match self {
            Density::Exponential => -(-x).exp_m1(),
            Density::Ramp { p } => x.min(1.0).powf(*p),
            Density::Sine { a } => 0.5 * (1.0 - (a * x).cos()),
            Density::Custom { .. } => {
                let q = integrate_with_breaks(|t| self.pdf(t), lo, x.min(hi), &self.breaks(), fine());
                q.map(|q| q.value).unwrap_or(f64::NAN)
            }
        }
    }

    /// `int_lo^x cdf`.
    fn cdf_integral(&self, x: f64) -> f64 {
        let (lo, _) = self.support();
        if x <= lo {
            return 0.0;
        }
        match self {
            Density::Exponential => x + (-x).exp_m1(),
            Density::Ramp { p } => {
                if x <= 1.0 {
                    x.powf(p + 1.0) / (p + 1.0)
                } else {
                    1.0 / (p + 1.0) + (x - 1.0)
                }
            }
            Density::Sine { a } => 0.5 * x - (a * x).sin() / (2.0 * a),
            Density::Custom { .. } => {
                let q = integrate_with_breaks(|t| self.cdf(t), lo, x, &self.breaks(), fine());
                q.map(|q| q.value).unwrap_or(f64::NAN)
            }
        }
    }

    /// `int e^{-lambda s} pdf(lambda) d lambda` for `Re s > 0`.
    fn laplace(&self, s: C64) -> Result<C64> {
        Ok(match self {
            Density::Exponential => 1.0 / (1.0 + s),
            Density::Sine { a } => 0.5 * a * a / (s * s + a * a),
            Density::Ramp { p } if *p == 1.0 => {
                if s.norm() < 1e-3 {
                    series(|k| 1.0 / (k as f64 + 1.0), s)
                } else {
                    (1.0 - (-s).exp()) / s
                }
            }
            Density::Ramp { p } if *p == 2.0 => {
                if s.norm() < 0.5 {
                    series(|k| 2.0 / (k as f64 + 2.0), s)
                } else {
                    2.0 * (1.0 - (-s).exp() * (1.0 + s)) / (s * s)
                }
            }
            Density::Ramp { p } if s.norm() < 4.0 => series(|k| p / (p + k as f64), s),
            _ => {
                let (lo, hi) = self.support();
                let b = self.breaks();
                let re = integrate_with_breaks(|t| self.pdf(t) * (C64::new(-t, 0.0) * s).exp().re, lo, hi, &b, fine())?;
                let im = integrate_with_breaks(|t| self.pdf(t) * (C64::new(-t, 0.0) * s).exp().im, lo, hi, &b, fine())?;
                C64::new(re.value, im.value)
            }
        })
    }
}

// sum_k coef(k) (-s)^k / k!
fn series(coef: impl Fn(usize) -> f64, s: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = coef(0) * term;
    for k in 1..60 {
        term *= -s / k as f64;
        let add = coef(k) * term;
        sum += add;
        if add.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn fine() -> Tolerance {
    Tolerance { rel: 1e-12, abs: 1e-14, max_subdiv: 4000 }
}

/// Signed Borel measure: atoms plus an optional (shifted) density.
#[derive(Debug, Clone)]
pub struct Measure {
    atoms: Vec<(f64, f64)>,
    density: Option<(Density, f64)>,
    support_lower_bound: f64,
}

/// Three-valued hypothesis verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Holds,
    Fails,
    Undetermined,
}

/// Outcome of [`check_hypotheses`].
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub h1: Flag,
    pub h1_prime: Flag,
    pub h2: Flag,
    pub h3: Flag,
    pub h4: Flag,
    /// `supp(mu)` inside `[-bound, inf)` for the requested bound, if any.
    pub support: Option<Flag>,
    /// Counterexamples `(hypothesis, x, value)`.
    pub witnesses: Vec<(&'static str, f64, f64)>,
}

impl HypothesisReport {
    /// First failing hypothesis among those named, as an error.
    pub fn require(&self, names: &[&'static str]) -> Result<()> {
        for &n in names {
            let flag = match n {
                "H1" => self.h1,
                "H1'" => self.h1_prime,
                "H2" => self.h2,
                "H3" => self.h3,
                "H4" => self.h4,
                _ => continue,
            };
            if flag != Flag::Holds {
                let detail = self
                    .witnesses
                    .iter()
                    .find(|w| w.0 == n)
                    .map(|w| format!("{flag:?} (at x = {}, value {})", w.1, w.2))
                    .unwrap_or_else(|| format!("{flag:?}"));
                return Err(Error::Hypothesis { name: n, detail });
            }
        }
        Ok(())
    }
}

impl Measure {
    /// General constructor. Atoms must lie at or above the density support.
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<Density>) -> Result<Self> {
        if atoms.iter().any(|(l, m)| !l.is_finite() || !m.is_finite()) {
            return Err(Error::Domain("atoms need finite location and mass".into()));
        }
        if let Some(Density::Ramp { p }) = &density {
            if !(*p > 0.0) {
                return Err(Error::Domain(format!("ramp exponent {p} must be positive")));
            }
        }
        if let Some(Density::Sine { a }) = &density {
            if !(*a > 0.0) {
                return Err(Error::Domain(format!("sine frequency {a} must be positive")));
            }
        }
        let mut m = Measure { atoms, density: density.map(|d| (d, 0.0)), support_lower_bound: f64::INFINITY };
        m.atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        m.support_lower_bound = m.lower_bound();
        Ok(m)
    }

    fn lower_bound(&self) -> f64 {
        let a = self.atoms.iter().map(|a| a.0).fold(f64::INFINITY, f64::min);
        let d = self.density.as_ref().map(|(d, s)| d.support().0 + s).unwrap_or(f64::INFINITY);
        a.min(d)
    }

    /// Unit point mass at `lambda0`.
    pub fn dirac(lambda0: f64) -> Self {
        Self::new(vec![(lambda0, 1.0)], None).expect("finite atom")
    }

    /// Density `e^{-lambda}` on `[0, inf)`.
    pub fn exponential() -> Self {
        Self::new(vec![], Some(Density::Exponential)).expect("valid family")
    }

    /// Distribution `min(lambda^p, 1)` for `lambda >= 0`.
    pub fn ramp(p: f64) -> Result<Self> {
        Self::new(vec![], Some(Density::Ramp { p }))
    }

    /// Density `(a/2) sin(a lambda)` on `(0, inf)`: satisfies (H1)–(H2) but not (H3).
    pub fn sine(a: f64) -> Result<Self> {
        Self::new(vec![], Some(Density::Sine { a }))
    }

    /// Translate by `t`: the result assigns to `Omega` the mass of `Omega - t`.
    pub fn shifted(&self, t: f64) -> Self {
        let atoms = self.atoms.iter().map(|(l, m)| (l + t, *m)).collect();
        let density = self.density.clone().map(|(d, s)| (d, s + t));
        let mut m = Measure { atoms, density, support_lower_bound: 0.0 };
        m.support_lower_bound = m.lower_bound();
        m
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref().map(|d| &d.0)
    }

    /// Lower end of the support; `+inf` for the zero measure.
    pub fn support_lower_bound(&self) -> f64 {
        self.support_lower_bound
    }

    /// Points where the distribution function jumps or has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.atoms.iter().map(|a| a.0).collect();
        if let Some((d, s)) = &self.density {
            b.extend(d.breaks().into_iter().map(|x| x + s));
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// Density value at `x` (zero without a density).
    pub fn pdf(&self, x: f64) -> f64 {
        self.density.as_ref().map(|(d, s)| d.pdf(x - s)).unwrap_or(0.0)
    }

    /// `mu^{(-1)}(x) = int_{-inf}^x mu(t) dt`.
    pub fn distribution_integral(&self, x: f64) -> f64 {
        let a: f64 = self.atoms.iter().filter(|a| a.0 < x).map(|(l, m)| m * (x - l)).sum();
        a + self.density.as_ref().map(|(d, s)| d.cdf_integral(x - s)).unwrap_or(0.0)
    }

    /// Full Laplace transform `int e^{-lambda s} d mu(lambda)`, `Re s > 0`.
    pub fn laplace(&self, s: C64) -> Result<C64> {
        if !self.support_lower_bound.is_finite() && !self.atoms.is_empty() {
            return Err(Error::NotIntegrable("support unbounded below".into()));
        }
        let mut v: C64 = self.atoms.iter().map(|(l, m)| *m * (-*l * s).exp()).sum();
        if let Some((d, shift)) = &self.density {
            v += (-*shift * s).exp() * d.laplace(s)?;
        }
        Ok(v)
    }
}

/// Distribution function `mu((-inf, x])`, right-continuous.
pub fn distribution(m: &Measure, x: f64) -> f64 {
    let a: f64 = m.atoms.iter().filter(|a| a.0 <= x).map(|a| a.1).sum();
    a + m.density.as_ref().map(|(d, s)| d.cdf(x - s)).unwrap_or(0.0)
}

/// Truncated Laplace transform: `int e^{-lambda z} d mu` for `Re z > 0`, else 0.
pub fn f_mu(m: &Measure, z: C64) -> Result<C64> {
    if z.re <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    if m.support_lower_bound == f64::NEG_INFINITY {
        return Err(Error::NotIntegrable("support unbounded below".into()));
    }
    m.laplace(z)
}

/// Real restriction of [`f_mu`].
pub fn f_mu_real(m: &Measure, x: f64) -> Result<f64> {
    Ok(f_mu(m, C64::new(x, 0.0))?.re)
}

/// `f_mu` through the integration-by-parts form `int z e^{-lambda z} mu(lambda) d lambda`.
pub fn f_mu_by_parts(m: &Measure, z: C64) -> Result<C64> {
    if z.re <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let lo = m.support_lower_bound;
    if !lo.is_finite() {
        return Ok(C64::new(0.0, 0.0));
    }
    let b = m.breakpoints();
    let g = |t: f64| z * (C64::new(-t, 0.0) * z).exp() * distribution(m, t);
    let tol = Tolerance { rel: 1e-12, abs: 1e-14, max_subdiv: 8000 };
    let re = integrate_with_breaks(|t| g(t).re, lo, f64::INFINITY, &b, tol)?;
    let im = integrate_with_breaks(|t| g(t).im, lo, f64::INFINITY, &b, tol)?;
    Ok(C64::new(re.value, im.value))
}

/// Odd transform `f_mu(z) - f_mu(-z)`.
pub fn f_mu_tilde(m: &Measure, z: C64) -> Result<C64> {
    Ok(f_mu(m, z)? - f_mu(m, -z)?)
}

/// Real restriction of [`f_mu_tilde`].
pub fn f_mu_tilde_real(m: &Measure, x: f64) -> Result<f64> {
    Ok(f_mu_tilde(m, C64::new(x, 0.0))?.re)
}

/// Numerical value of `f_mu(0+)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitAtZero {
    pub value: f64,
    /// `Holds` when the value agrees with 1, `Fails` when it settles elsewhere.
    pub equals_one: Flag,
}

/// `lim_{x -> 0+} f_mu(x)`, extrapolated along `x = 2^{-k}`.
pub fn f_mu_limit_at_zero(m: &Measure) -> Result<LimitAtZero> {
    let xs: Vec<f64> = (14..=30).map(|k| 2f64.powi(-k)).collect();
    let vals = xs.iter().map(|&x| f_mu_real(m, x)).collect::<Result<Vec<_>>>()?;
    // f(x) = f(0+) + c x + ...: one Richardson step.
    let n = vals.len();
    let value = 2.0 * vals[n - 1] - vals[n - 2];
    let prev = 2.0 * vals[n - 2] - vals[n - 3];
    let equals_one = if (value - prev).abs() > 1e-6 {
        Flag::Undetermined
    } else if (value - 1.0).abs() < 1e-6 {
        Flag::Holds
    } else {
        Flag::Fails
    };
    Ok(LimitAtZero { value, equals_one })
}

/// Checks (H1), (H1'), (H2), (H3), (H4) and, if given, `supp(mu) in [-bound, inf)`.
pub fn check_hypotheses(m: &Measure, e_type_bound: Option<f64>) -> HypothesisReport {
    let mut w = Vec::new();
    let lo = m.support_lower_bound;
    let h1 = if lo > f64::NEG_INFINITY { Flag::Holds } else { Flag::Fails };
    if h1 == Flag::Fails {
        w.push(("H1", lo, 0.0));
    }
    let h1_prime = if lo >= 0.0 {
        Flag::Holds
    } else {
        w.push(("H1'", lo, 0.0));
        Flag::Fails
    };

    // H2 on a grid spanning the breakpoints, plus the breakpoints themselves
    // and, for the oscillating family, its analytic extrema.
    let start = if lo.is_finite() { lo } else { -1e3 };
    let breaks = m.breakpoints();
    let last = breaks.iter().copied().filter(|b| b.is_finite()).fold(start, f64::max);
    let span = (last - start).max(1.0) * 4.0 + 50.0;
    let mut probes: Vec<f64> = (0..=10_000).map(|k| start - 1.0 + span * k as f64 / 10_000.0).collect();
    probes.extend(breaks.iter().copied().filter(|b| b.is_finite()));
    if let Some((Density::Sine { a }, s)) = &m.density {
        probes.extend((0..64).map(|k| s + (2 * k + 1) as f64 * std::f64::consts::PI / a));
    }
    let mut h2 = Flag::Holds;
    for x in probes {
        let v = distribution(m, x);
        if !(-1e-12..=1.0 + 1e-12).contains(&v) {
            h2 = Flag::Fails;
            w.push(("H2", x, v));
            break;
        }
    }

    // H3 via (1/y) mu^{(-1)}(y) at y = 2^4 .. 2^14 with Richardson steps.
    let h3 = if !lo.is_finite() {
        Flag::Undetermined
    } else {
        let ys: Vec<f64> = (4..=14).map(|k| 2f64.powi(k)).collect();
        let avg: Vec<f64> = ys.iter().map(|&y| m.distribution_integral(y) / y).collect();
        let rich: Vec<f64> = avg.windows(2).map(|p| 2.0 * p[1] - p[0]).collect();
        let tail = &rich[rich.len() - 4..];
        let spread = tail.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - tail.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let last = *rich.last().expect("non-empty");
        if (last - 1.0).abs() < 1e-6 && spread < 1e-6 {
            Flag::Holds
        } else if spread > 1e-3 {
            w.push(("H3", *ys.last().expect("non-empty"), *avg.last().expect("non-empty")));
            Flag::Undetermined
        } else {
            w.push(("H3", *ys.last().expect("non-empty"), last));
            Flag::Fails
        }
    };

    // H4: the integral of mu / lambda^2 near 0 converges iff mu decays faster
    // than lambda; estimate the local exponent.
    let h4 = if h1_prime != Flag::Holds {
        Flag::Fails
    } else {
        let (e1, e2) = (1e-6, 1e-8);
        let (m1, m2) = (distribution(m, e1), distribution(m, e2));
        if m2 == 0.0 && m1 == 0.0 {
            Flag::Holds
        } else if m2 == 0.0 || m1 == 0.0 {
            Flag::Undetermined
        } else {
            let p = (m1.abs() / m2.abs()).ln() / (e1 / e2).ln();
            if p > 1.01 {
                Flag::Holds
            } else {
                w.push(("H4", e2, m2 / (e2 * e2)));
                Flag::Fails
            }
        }
    };

    let support = e_type_bound.map(|b| {
        if lo >= -b {
            Flag::Holds
        } else {
            w.push(("support", lo, -b));
            Flag::Fails
        }
    });
    HypothesisReport { h1, h1_prime, h2, h3, h4, support, witnesses: w }
}

/// Parses the line-oriented measure description.
///
/// ```text
/// dirac <loc> <mass>
/// density exponential <lo> <hi>
/// density ramp <p> <lo> <hi>
/// density sine <a> <lo> <hi>
/// ```
/// Density families are translated so that their support starts at `lo`;
/// `hi` must match the family's own support length.
pub fn parse_measure(text: &str) -> Result<Measure> {
    let mut atoms = Vec::new();
    let mut density: Option<(Density, f64)> = None;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<f64> {
            match s {
                "inf" | "+inf" => Ok(f64::INFINITY),
                _ => s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{s}` in `{line}`"))),
            }
        };
        match tok.as_slice() {
            ["dirac", loc, mass] => atoms.push((num(loc)?, num(mass)?)),
            ["density", fam, rest @ ..] => {
                if density.is_some() {
                    return Err(Error::Parse("at most one density line".into()));
                }
                let (d, lo, hi) = match (*fam, rest) {
                    ("exponential", [lo, hi]) => (Density::Exponential, num(lo)?, num(hi)?),
                    ("ramp", [p, lo, hi]) => (Density::Ramp { p: num(p)? }, num(lo)?, num(hi)?),
                    ("sine", [a, lo, hi]) => (Density::Sine { a: num(a)? }, num(lo)?, num(hi)?),
                    _ => return Err(Error::Parse(format!("unknown density line `{line}`"))),
                };
                let (dlo, dhi) = d.support();
                if ((hi - lo) - (dhi - dlo)).abs() > 1e-12 && !(hi.is_infinite() && dhi.is_infinite()) {
                    return Err(Error::Parse(format!("support [{lo}, {hi}] does not fit `{fam}`")));
                }
                density = Some((d, lo));
            }
            _ => return Err(Error::Parse(format!("unrecognised line `{line}`"))),
        }
    }
    let shift = density.as_ref().map(|d| d.1).unwrap_or(0.0);
    let m = Measure::new(atoms, density.map(|d| d.0))?;
    // Re-apply the density translation without moving the atoms.
    let mut out = m.clone();
    if let Some((d, _)) = m.density {
        out.density = Some((d, shift));
    }
    out.support_lower_bound = out.lower_bound();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn distribution_examples() {
        let d = Measure::dirac(0.0);
        assert_eq!(distribution(&d, -1.0), 0.0);
        assert_eq!(distribution(&d, 0.0), 1.0);
        let e = Measure::exponential();
        assert!((distribution(&e, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn hypothesis_examples() {
        let r = check_hypotheses(&Measure::dirac(0.0), None);
        assert_eq!((r.h1, r.h1_prime, r.h2, r.h3), (Flag::Holds, Flag::Holds, Flag::Holds, Flag::Holds));
        // mu = 1 near 0: the integral of mu / lambda^2 diverges.
        assert_eq!(r.h4, Flag::Fails);
        let r = check_hypotheses(&Measure::dirac(0.5), None);
        assert_eq!(r.h4, Flag::Holds);
        let r = check_hypotheses(&Measure::sine(1.0).unwrap(), None);
        assert_eq!((r.h1, r.h2), (Flag::Holds, Flag::Holds));
        assert_eq!(r.h3, Flag::Fails);
        assert!(r.witnesses.iter().any(|w| w.0 == "H3"));
        let r = check_hypotheses(&Measure::ramp(2.0).unwrap(), None);
        assert_eq!((r.h1_prime, r.h2, r.h3, r.h4), (Flag::Holds, Flag::Holds, Flag::Holds, Flag::Holds));
        let r = check_hypotheses(&Measure::exponential(), None);
        assert_eq!((r.h2, r.h3, r.h4), (Flag::Holds, Flag::Holds, Flag::Fails));
    }

    #[test]
    fn h2_violation_has_witness() {
        let m = Measure::new(vec![(0.0, 1.0), (1.0, 0.5)], None).unwrap();
        let r = check_hypotheses(&m, None);
        assert_eq!(r.h2, Flag::Fails);
        assert!(r.witnesses.iter().any(|w| w.0 == "H2" && w.2 > 1.0));
        assert!(r.require(&["H1", "H2"]).is_err());
    }

    #[test]
    fn support_bound_check() {
        let m = Measure::dirac(-3.0);
        assert_eq!(check_hypotheses(&m, Some(2.0)).support, Some(Flag::Fails));
        assert_eq!(check_hypotheses(&m, Some(3.0)).support, Some(Flag::Holds));
    }

    #[test]
    fn f_mu_examples() {
        let d = Measure::dirac(0.0);
        assert_eq!(f_mu_real(&d, 3.0).unwrap(), 1.0);
        assert_eq!(f_mu_real(&d, -1.0).unwrap(), 0.0);
        let e = Measure::exponential();
        for x in [0.1, 1.0, 7.0] {
            assert!((f_mu_real(&e, x).unwrap() - 1.0 / (1.0 + x)).abs() < 1e-15);
        }
    }

    #[test]
    fn f_mu_tilde_examples() {
        let d = Measure::dirac(0.0);
        assert_eq!(f_mu_tilde_real(&d, 2.0).unwrap(), 1.0);
        assert_eq!(f_mu_tilde_real(&d, -2.0).unwrap(), -1.0);
        assert_eq!(f_mu_tilde_real(&d, 0.0).unwrap(), 0.0);
        assert!((f_mu_tilde_real(&Measure::exponential(), 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn limit_at_zero() {
        let l = f_mu_limit_at_zero(&Measure::dirac(0.0)).unwrap();
        assert_eq!(l.equals_one, Flag::Holds);
        let l = f_mu_limit_at_zero(&Measure::ramp(2.0).unwrap()).unwrap();
        assert!((l.value - 1.0).abs() < 1e-9 && l.equals_one == Flag::Holds);
        let l = f_mu_limit_at_zero(&Measure::sine(1.0).unwrap()).unwrap();
        assert_eq!(l.equals_one, Flag::Fails);
        assert!((l.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_routes_agree() {
        let ms = [
            Measure::dirac(0.0),
            Measure::dirac(0.7),
            Measure::exponential(),
            Measure::ramp(2.0).unwrap(),
            Measure::ramp(1.5).unwrap(),
            Measure::sine(1.0).unwrap(),
        ];
        for m in &ms {
            for x in [0.1, 1.0, 10.0] {
                let a = f_mu(m, re(x)).unwrap();
                let b = f_mu_by_parts(m, re(x)).unwrap();
                assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-300), "{m:?} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn analytic_in_right_half_plane() {
        let h = 1e-5;
        let z = C64::new(1.0, 1.0);
        for m in [Measure::exponential(), Measure::ramp(2.0).unwrap(), Measure::ramp(0.5).unwrap()] {
            let dx = (f_mu(&m, z + h).unwrap() - f_mu(&m, z - h).unwrap()) / (2.0 * h);
            let dy = (f_mu(&m, z + C64::new(0.0, h)).unwrap() - f_mu(&m, z - C64::new(0.0, h)).unwrap()) / (2.0 * h);
            // Cauchy–Riemann: d/dy = i d/dx.
            assert!((dy - C64::new(0.0, 1.0) * dx).norm() < 1e-6);
        }
    }

    #[test]
    fn ramp_transform_regimes_meet() {
        let m = Measure::ramp(2.0).unwrap();
        for s in [C64::new(0.4999, 0.0), C64::new(0.5001, 0.0), C64::new(0.3, 0.39)] {
            let a = m.laplace(s).unwrap();
            let b = f_mu_by_parts(&m, s).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
        let m3 = Measure::ramp(3.0).unwrap();
        for s in [C64::new(3.9, 0.5), C64::new(4.1, 0.5)] {
            let a = m3.laplace(s).unwrap();
            let b = f_mu_by_parts(&m3, s).unwrap();
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn shift_moves_everything() {
        let m = Measure::ramp(2.0).unwrap().shifted(0.25);
        assert_eq!(m.support_lower_bound(), 0.25);
        assert!((distribution(&m, 0.75) - 0.25).abs() < 1e-15);
        let d = Measure::dirac(0.0).shifted(0.1);
        assert_eq!(d.atoms(), &[(0.1, 1.0)]);
    }

    #[test]
    fn text_format() {
        let m = parse_measure("dirac 0 0.5\ndensity ramp 2 0 1\n").unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert!((distribution(&m, 0.5) - 0.75).abs() < 1e-15);
        let m = parse_measure("density exponential 1 inf").unwrap();
        assert_eq!(m.support_lower_bound(), 1.0);
        assert!(parse_measure("density ramp 2 0 3").is_err());
        assert!(parse_measure("gauss 1").is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn f_mu_tilde_is_odd(x in -50.0f64..50.0, p in 0.5f64..4.0) {
                let m = Measure::ramp(p).unwrap();
                let a = f_mu_tilde_real(&m, x).unwrap();
                let b = f_mu_tilde_real(&m, -x).unwrap();
                prop_assert_eq!(a, -b);
            }

            #[test]
            fn builtin_distributions_stay_in_unit_interval(x in -5.0f64..200.0, p in 0.2f64..5.0, a in 0.1f64..5.0) {
                for m in [Measure::ramp(p).unwrap(), Measure::sine(a).unwrap(), Measure::exponential()] {
                    let v = distribution(&m, x);
                    prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
                }
            }
        }
    }
}
