//! Hermite–Biehler families, their reproducing kernels, and the extremal
//! majorant/minorant pairs of exponential type `2 tau(E)` built by
//! interpolating `f_mu` at the zeros of `B^2`.

use crate::lp::{Interpolant, LpFunction};
use crate::measure::{check_hypotheses, f_mu_real, Flag, Measure};
use crate::numerics::{bessel_zeros, gamma, gauss_legendre, homog_ab, homog_ab_series};
use rayon::prelude::*;
use crate::{Error, Result, C64};
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// The two instantiated Hermite–Biehler families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `E(z) = e^{-i tau z}`, `A = cos(tau z)`, `B = sin(tau z)`.
    PaleyWiener { tau: f64 },
    /// `E_nu = A_nu - i B_nu` built from Bessel functions.
    Homogeneous { nu: f64 },
}

/// A de Branges space `H(E)`.
#[derive(Debug, Clone)]
pub struct DeBrangesSpace {
    family: Family,
    zero_cache: Arc<OnceLock<Vec<f64>>>,
}

const ZERO_CACHE: usize = 600;

impl DeBrangesSpace {
    pub fn paley_wiener(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("type {tau} must be positive")));
        }
        Ok(Self { family: Family::PaleyWiener { tau }, zero_cache: Default::default() })
    }

    pub fn homogeneous(nu: f64) -> Result<Self> {
        if !(nu > -1.0) {
            return Err(Error::Domain(format!("order {nu} must exceed -1")));
        }
        Ok(Self { family: Family::Homogeneous { nu }, zero_cache: Default::default() })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Exponential type of `E`.
    pub fn tau(&self) -> f64 {
        match self.family {
            Family::PaleyWiener { tau } => tau,
            Family::Homogeneous { .. } => 1.0,
        }
    }

    /// `(A(z), B(z))`.
    pub fn ab(&self, z: C64) -> (C64, C64) {
        match self.family {
            Family::PaleyWiener { tau } => ((tau * z).cos(), (tau * z).sin()),
            Family::Homogeneous { nu } => {
                if z.im == 0.0 {
                    let (a, b, _) = homog_ab(nu, z.re).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
                    (C64::new(a, 0.0), C64::new(b, 0.0))
                } else {
                    let (a, b, _) = homog_ab_series(nu, z);
                    (a, b)
                }
            }
        }
    }

    /// `(A'(z), B'(z))`.
    pub fn ab_prime(&self, z: C64) -> (C64, C64) {
        match self.family {
            Family::PaleyWiener { tau } => (-tau * (tau * z).sin(), tau * (tau * z).cos()),
            Family::Homogeneous { nu } => {
                let (a, b, bz) = if z.im == 0.0 {
                    let (a, b, bz) = homog_ab(nu, z.re).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
                    (C64::new(a, 0.0), C64::new(b, 0.0), C64::new(bz, 0.0))
                } else {
                    homog_ab_series(nu, z)
                };
                (-b, a - (2.0 * nu + 1.0) * bz)
            }
        }
    }

    /// `E(z) = A(z) - i B(z)`.
    pub fn e(&self, z: C64) -> C64 {
        let (a, b) = self.ab(z);
        a - C64::i() * b
    }

    /// `E*(z) = conj(E(conj z))`.
    pub fn e_star(&self, z: C64) -> C64 {
        self.e(z.conj()).conj()
    }

    /// Reproducing kernel `K(w, z)`.
    pub fn kernel(&self, w: C64, z: C64) -> C64 {
        let wb = w.conj();
        let d = z - wb;
        if d.norm() <= 1e-7 * (1.0 + z.norm()) {
            // Diagonal form, with a first-order correction for the offset.
            let (a, b) = self.ab(wb);
            let (ap, bp) = self.ab_prime(wb);
            let k0 = (bp * a - ap * b) / PI;
            let h = 1e-4 * (1.0 + wb.norm());
            let (a2, b2) = self.ab(wb + h);
            let (ap2, bp2) = self.ab_prime(wb + h);
            let k1 = (bp2 * a2 - ap2 * b2) / PI;
            // d/dz K(w, z) at z = w-bar is half the derivative of the diagonal.
            return k0 + 0.5 * d * (k1 - k0) / h;
        }
        let (az, bz) = self.ab(z);
        let (aw, bw) = self.ab(wb);
        (bz * aw - az * bw) / (PI * d)
    }

    /// `K(x, x)` for real `x`.
    pub fn kernel_diag(&self, x: f64) -> f64 {
        let z = C64::new(x, 0.0);
        let (a, b) = self.ab(z);
        let (ap, bp) = self.ab_prime(z);
        ((bp * a - ap * b) / PI).re
    }

    /// `K(0, 0)`.
    pub fn k00(&self) -> f64 {
        match self.family {
            Family::PaleyWiener { tau } => tau / PI,
            Family::Homogeneous { nu } => 1.0 / (2.0 * PI * (nu + 1.0)),
        }
    }

    /// `B'(0)`.
    pub fn b_prime_zero(&self) -> f64 {
        match self.family {
            Family::PaleyWiener { tau } => tau,
            Family::Homogeneous { nu } => 1.0 / (2.0 * (nu + 1.0)),
        }
    }

    /// `|E(x)|^{-2}`.
    pub fn weight(&self, x: f64) -> Result<f64> {
        let e2 = self.e(C64::new(x, 0.0)).norm_sqr();
        if e2 == 0.0 {
            return Err(Error::Domain(format!("E vanishes at {x}")));
        }
        Ok(1.0 / e2)
    }

    /// `c_nu |x|^{2 nu + 1}`, the power weight `|E_nu|^{-2}` is comparable to.
    pub fn comparison_density(&self, x: f64) -> Option<f64> {
        match self.family {
            Family::Homogeneous { nu } => Some(c_nu(nu) * x.abs().powf(2.0 * nu + 1.0)),
            Family::PaleyWiener { .. } => None,
        }
    }

    /// The `k`-th positive zero of `B` (`k >= 1`).
    pub fn b_zero(&self, k: usize) -> f64 {
        match self.family {
            Family::PaleyWiener { tau } => k as f64 * PI / tau,
            Family::Homogeneous { nu } => {
                let cache = self.zero_cache.get_or_init(|| bessel_zeros(nu + 1.0, ZERO_CACHE).unwrap_or_default());
                cache.get(k - 1).copied().unwrap_or_else(|| mcmahon(nu + 1.0, k))
            }
        }
    }

    /// Whether `B` lies outside `H(E)`. Decided per family: `sin` is not square
    /// integrable, and `B_nu^2 |E_nu|^{-2}` does not decay.
    pub fn b_outside_space(&self) -> bool {
        true
    }

    /// `B^2` as a Laguerre–Pólya function.
    pub fn b_squared(&self) -> Result<LpFunction> {
        match self.family {
            Family::PaleyWiener { tau } => LpFunction::sin_squared(tau),
            Family::Homogeneous { nu } => LpFunction::bessel_b_squared(nu),
        }
    }
}

// McMahon's expansion for j_{mu,k}, used past the tabulated zeros.
fn mcmahon(mu: f64, k: usize) -> f64 {
    let b = (k as f64 + 0.5 * mu - 0.25) * PI;
    let m = 4.0 * mu * mu;
    b - (m - 1.0) / (8.0 * b) - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / (3.0 * (8.0 * b).powi(3))
}

/// `pi 2^{-2 nu - 1} Gamma(nu + 1)^{-2}`.
pub fn c_nu(nu: f64) -> f64 {
    PI * 2f64.powf(-2.0 * nu - 1.0) / gamma(nu + 1.0).unwrap_or(f64::NAN).powi(2)
}

/// Which one-sided problem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Approximate `f_mu` (zero on the negative axis).
    Truncated,
    /// Approximate the odd function `f_mu(x) - f_mu(-x)`.
    Odd,
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncated" => Ok(Kind::Truncated),
            "odd" => Ok(Kind::Odd),
            _ => Err(Error::Parse(format!("unknown kind '{s}'"))),
        }
    }
}

/// Which function of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minorant,
    Majorant,
}

/// `1/K(0,0)` (truncated) or `2/K(0,0)` (odd).
pub fn optimal_value(space: &DeBrangesSpace, kind: Kind) -> f64 {
    kappa(kind) / space.k00()
}

fn kappa(kind: Kind) -> f64 {
    match kind {
        Kind::Truncated => 1.0,
        Kind::Odd => 2.0,
    }
}

/// Optimal value for the power weight `|x|^{2 nu + 1}` and exponential type
/// `delta`: `Gamma(nu+1) Gamma(nu+2) (4/delta)^{2nu+2}`, doubled for the odd
/// kind, and infinite when the support of `mu` reaches below `-delta`.
pub fn delta_nu(nu: f64, delta: f64, m: &Measure, kind: Kind) -> Result<f64> {
    if !(nu > -1.0) || !(delta > 0.0) {
        return Err(Error::Domain("need nu > -1 and delta > 0".into()));
    }
    check_hypotheses(m, None).require(&["H1", "H2", "H3"])?;
    if m.support_lower_bound() < -delta {
        return Ok(f64::INFINITY);
    }
    Ok(kappa(kind) * gamma(nu + 1.0)? * gamma(nu + 2.0)? * (4.0 / delta).powf(2.0 * nu + 2.0))
}

/// The same value reconstructed from the space: rescale type 1 to `delta/2`
/// and divide the weighted optimum by `c_nu`.
pub fn delta_nu_from_kernel(nu: f64, delta: f64, kind: Kind) -> Result<f64> {
    let space = DeBrangesSpace::homogeneous(nu)?;
    Ok((2.0 / delta).powf(2.0 * nu + 2.0) * optimal_value(&space, kind) / c_nu(nu))
}

/// Extremal minorant/majorant of exponential type `2 tau(E)`.
#[derive(Debug)]
pub struct ExtremalPair {
    space: DeBrangesSpace,
    kind: Kind,
    interp: Interpolant,
    h3: bool,
}

impl ExtremalPair {
    /// Builds the pair from `L(B^2, mu, .)` and `M(B^2, mu, .)`.
    ///
    /// The odd kind and the truncated majorant need (H3); without it only the
    /// truncated minorant is available.
    pub fn new(space: &DeBrangesSpace, m: &Measure, kind: Kind) -> Result<Self> {
        let report = check_hypotheses(m, Some(2.0 * space.tau()));
        report.require(&["H1", "H2"])?;
        if report.support != Some(Flag::Holds) {
            return Err(Error::Support { bound: -2.0 * space.tau() });
        }
        let h3 = report.h3 == Flag::Holds;
        if kind == Kind::Odd && !h3 {
            report.require(&["H3"])?;
        }
        let interp = Interpolant::new(&space.b_squared()?, m)?;
        Ok(Self { space: space.clone(), kind, interp, h3 })
    }

    pub fn space(&self) -> &DeBrangesSpace {
        &self.space
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn measure(&self) -> &Measure {
        self.interp.measure()
    }

    pub fn has_majorant(&self) -> bool {
        self.h3
    }

    fn require_majorant(&self) -> Result<()> {
        if self.h3 {
            Ok(())
        } else {
            Err(Error::Hypothesis { name: "H3", detail: "majorant needs (H3); the minorant is still extremal".into() })
        }
    }

    /// Minorant at complex `z`.
    pub fn minorant_c(&self, z: C64) -> Result<C64> {
        match self.kind {
            Kind::Truncated => self.interp.l(z),
            Kind::Odd => Ok(self.interp.l(z)? - self.interp.m(-z)?),
        }
    }

    /// Majorant at complex `z`.
    pub fn majorant_c(&self, z: C64) -> Result<C64> {
        self.require_majorant()?;
        match self.kind {
            Kind::Truncated => self.interp.m(z),
            Kind::Odd => Ok(self.interp.m(z)? - self.interp.l(-z)?),
        }
    }

    pub fn minorant(&self, x: f64) -> Result<f64> {
        Ok(self.minorant_c(C64::new(x, 0.0))?.re)
    }

    pub fn majorant(&self, x: f64) -> Result<f64> {
        Ok(self.majorant_c(C64::new(x, 0.0))?.re)
    }

    /// `(minorant, majorant)` at `x`, sharing the interpolant evaluations.
    pub fn both(&self, x: f64) -> Result<(f64, f64)> {
        self.require_majorant()?;
        let gap = |t: f64| self.interp.gap(t);
        match self.kind {
            Kind::Truncated => {
                let l = self.interp.l_real(x)?;
                Ok((l, l + gap(x)))
            }
            Kind::Odd => {
                let lp = self.interp.l_real(x)?;
                let ln = self.interp.l_real(-x)?;
                // M(t) = L(t) + gap(t).
                Ok((lp - ln - gap(-x), lp + gap(x) - ln))
            }
        }
    }

    /// The approximated function: `f_mu` or `f_mu(x) - f_mu(-x)`.
    pub fn target(&self, x: f64) -> Result<f64> {
        let m = self.interp.measure();
        match self.kind {
            Kind::Truncated => f_mu_real(m, x),
            Kind::Odd => Ok(f_mu_real(m, x)? - f_mu_real(m, -x)?),
        }
    }

    /// `kappa K(0,x)^2 / K(0,0)^2`, which equals majorant minus minorant.
    pub fn kernel_gap(&self, x: f64) -> f64 {
        let k = self.space.kernel(C64::new(0.0, 0.0), C64::new(x, 0.0)).re / self.space.k00();
        kappa(self.kind) * k * k
    }

    pub fn optimal_value(&self) -> f64 {
        optimal_value(&self.space, self.kind)
    }
}

/// A truncated series `sum_k t_k` with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Estimated contribution of the omitted terms, already included in `value`.
    pub tail: f64,
    /// Bound on the error of `tail`.
    pub tail_error: f64,
    pub terms: usize,
}

// Power-law decay exponent of |g| between x and 10x.
fn decay_exponent(g: impl Fn(f64) -> f64, x: f64) -> f64 {
    let a = g(x).abs();
    let b = g(10.0 * x).abs();
    if b == 0.0 {
        return f64::INFINITY;
    }
    (a / b).ln() / 10f64.ln()
}

/// Checks `f_mu` (or its odd version) is in `L^1(|E|^{-2} dx)` by the decay
/// of `|f| w` at large `|x|`.
pub fn check_integrable(space: &DeBrangesSpace, m: &Measure, kind: Kind) -> Result<()> {
    let fw = |x: f64| -> f64 {
        let f = match kind {
            Kind::Truncated => f_mu_real(m, x).unwrap_or(f64::NAN),
            Kind::Odd => f_mu_real(m, x).unwrap_or(f64::NAN) - f_mu_real(m, -x).unwrap_or(f64::NAN),
        };
        // Average the weight over a period to remove the oscillation.
        let w: f64 = (0..8).map(|j| space.weight(x + j as f64 * PI / 8.0).unwrap_or(f64::NAN)).sum::<f64>() / 8.0;
        f * w
    };
    let p = decay_exponent(fw, 1e3).min(decay_exponent(|x| fw(-x), 1e3));
    if p.is_nan() || p <= 1.05 {
        return Err(Error::NotIntegrable(format!("|f_mu| |E|^-2 decays like |x|^-{p:.3}")));
    }
    Ok(())
}

// sum_{k>=1} t(k) to a tail tolerance, with the tail of a power law C k^{-p}
// fitted over the last decade and added by its Euler–Maclaurin integral.
fn power_series_sum(t: impl Fn(usize) -> f64, max_terms: usize, tol: f64) -> Result<SeriesSum> {
    let mut sum = 0.0;
    let mut k = 0;
    let mut next_check = 64;
    loop {
        k += 1;
        sum += t(k);
        if k == next_check || k == max_terms {
            let (a, b) = (t(k / 10).abs(), t(k).abs());
            let p = if b == 0.0 { f64::INFINITY } else { (a / b).ln() / 10f64.ln() };
            if p.is_finite() && p <= 1.0 {
                if k == max_terms {
                    return Err(Error::Nonconvergence { estimate: sum, error: f64::INFINITY, iterations: k });
                }
            } else {
                let sign = t(k).signum();
                let (tail, err) = if p.is_infinite() || b == 0.0 {
                    (0.0, 0.0)
                } else {
                    let c = b * (k as f64).powf(p);
                    let tail = sign * c * (k as f64 + 0.5).powf(1.0 - p) / (p - 1.0);
                    // Fit error: exponent drift over the last decade.
                    let p2 = (t(k / 2).abs() / b).ln() / 2f64.ln();
                    (tail, (tail * (p - p2).abs() * (k as f64).ln()).abs() + 1e-3 * tail.abs())
                };
                if err < tol || k == max_terms {
                    return Ok(SeriesSum { value: sum + tail, tail, tail_error: err, terms: k });
                }
            }
            next_check = (next_check * 2).min(max_terms);
        }
    }
}

fn quadrature_sum(space: &DeBrangesSpace, m: &Measure, kind: Kind) -> Result<SeriesSum> {
    check_hypotheses(m, Some(2.0 * space.tau())).require(&["H1", "H2"])?;
    check_integrable(space, m, kind)?;
    let max = match space.family() {
        Family::PaleyWiener { .. } => 1 << 20,
        Family::Homogeneous { .. } => ZERO_CACHE,
    };
    let term = |k: usize| -> f64 {
        let xi = space.b_zero(k);
        let f = match kind {
            Kind::Truncated => f_mu_real(m, xi).unwrap_or(f64::NAN),
            // Zeros and K(xi, xi) are symmetric, so the pair (xi, -xi) contributes
            // f~(xi) + f~(-xi) = 0; kept explicit for general spaces.
            Kind::Odd => {
                let fp = f_mu_real(m, xi).unwrap_or(f64::NAN) - f_mu_real(m, -xi).unwrap_or(f64::NAN);
                return fp / space.kernel_diag(xi) - fp / space.kernel_diag(-xi);
            }
        };
        f / space.kernel_diag(xi)
    };
    if kind == Kind::Odd {
        return Ok(SeriesSum { value: (1..=64).map(term).sum(), tail: 0.0, tail_error: 0.0, terms: 64 });
    }
    power_series_sum(term, max, 1e-10)
}

/// `int L_mu |E|^{-2} dx = sum_{xi > 0, B(xi) = 0} f_mu(xi) / K(xi, xi)`.
pub fn minorant_integral(space: &DeBrangesSpace, m: &Measure) -> Result<SeriesSum> {
    quadrature_sum(space, m, Kind::Truncated)
}

/// `int M_mu |E|^{-2} dx = 1/K(0,0) + sum_{xi > 0} f_mu(xi) / K(xi, xi)`; needs (H3).
pub fn majorant_integral(space: &DeBrangesSpace, m: &Measure) -> Result<SeriesSum> {
    check_hypotheses(m, None).require(&["H3"])?;
    let s = quadrature_sum(space, m, Kind::Truncated)?;
    Ok(SeriesSum { value: s.value + 1.0 / space.k00(), ..s })
}

/// `(int L~ |E|^{-2}, int M~ |E|^{-2}) = (-1/K(0,0) + S, 1/K(0,0) + S)` with
/// `S = sum_{xi != 0} f~_mu(xi)/K(xi, xi)`.
pub fn odd_integrals(space: &DeBrangesSpace, m: &Measure) -> Result<(f64, f64)> {
    check_hypotheses(m, None).require(&["H3"])?;
    let s = quadrature_sum(space, m, Kind::Odd)?;
    Ok((s.value - 1.0 / space.k00(), s.value + 1.0 / space.k00()))
}

/// `int (majorant - minorant) |E|^{-2} dx`. The computed pair is integrated
/// over `[-X, X]` with Gauss panels between consecutive zeros of `B`. Beyond
/// `X` the gap equals `kappa K(0,x)^2 / K(0,0)^2`, which is integrated the
/// same way out to a far cutoff, followed by the period-averaged tail.
pub fn gap_integral(pair: &ExtremalPair, half_width: f64) -> Result<f64> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::Domain(format!("half width must be positive, got {half_width}")));
    }
    let space = pair.space();
    let (gx, gw) = gauss_legendre(24);
    let far = (50.0 * half_width).max(2e4);
    // Panel endpoints on [0, far]: zeros of B plus X itself.
    let mut ends = vec![0.0];
    let mut k = 1;
    loop {
        let z = space.b_zero(k);
        if z >= far {
            break;
        }
        if z > half_width && *ends.last().unwrap_or(&0.0) < half_width {
            ends.push(half_width);
        }
        ends.push(z);
        k += 1;
    }
    ends.push(far);
    let panels: Vec<(f64, f64)> = ends.windows(2).map(|w| (w[0], w[1])).filter(|(a, b)| b > a).collect();
    let kap = kappa(pair.kind());
    let k00 = space.k00();
    let gauss = |a: f64, b: f64, f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = 0.0;
        for (x, w) in gx.iter().zip(&gw) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    };
    let direct = |x: f64| -> Result<f64> {
        let (l, m) = pair.both(x)?;
        Ok((m - l) * space.weight(x)?)
    };
    let kernel_form = |x: f64| -> Result<f64> {
        let k = space.kernel(C64::new(0.0, 0.0), C64::new(x, 0.0)).re / k00;
        Ok(kap * k * k * space.weight(x)?)
    };
    let parts: Vec<f64> = panels
        .par_iter()
        .map(|&(a, b)| {
            let f: &dyn Fn(f64) -> Result<f64> = if b <= half_width { &direct } else { &kernel_form };
            Ok(gauss(a, b, f)? + gauss(-b, -a, f)?)
        })
        .collect::<Result<_>>()?;
    let b1 = space.b_prime_zero();
    let tail = match space.family() {
        Family::PaleyWiener { tau } => {
            // int_X^inf sin^2(tau x)/(tau^2 x^2) dx, both sides.
            2.0 * (1.0 / (2.0 * far) + (2.0 * tau * far).sin() / (4.0 * tau * far * far)) / (tau * tau)
        }
        Family::Homogeneous { .. } => 1.0 / (b1 * b1 * far),
    };
    Ok(parts.iter().sum::<f64>() + kap * tail)
}
