//! Orthonormal polynomials on the unit circle, Christoffel–Darboux kernels,
//! the companion polynomials `A_{N+1}`, `B_{N+1}`, and the quadrature rule
//! with nodes at their zeros.
//!
//! Polynomials are coefficient vectors in ascending powers of `z`.

use crate::numerics::{e, integrate_with_breaks, roots_on_circle, solve_dense_complex, Tolerance};
use crate::periodic::TrigPoly;
use crate::{Error, Result, C64};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Absolutely continuous part of a circle measure, as a function on `[0, 1)`.
#[derive(Clone)]
pub enum CircleDensity {
    /// `dx`.
    Lebesgue,
    /// `(1 - cos 2 pi x)^a (1 + cos 2 pi x)^b`, normalised to total mass one.
    Jacobi { a: f64, b: f64 },
    /// Any nonnegative integrable density with total mass one.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for CircleDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CircleDensity::Lebesgue => write!(f, "Lebesgue"),
            CircleDensity::Jacobi { a, b } => write!(f, "Jacobi({a}, {b})"),
            CircleDensity::Custom(_) => write!(f, "Custom"),
        }
    }
}

fn jacobi_norm(a: f64, b: f64) -> f64 {
    use crate::numerics::gamma;
    // int_0^1 (1 - cos 2 pi x)^a (1 + cos 2 pi x)^b dx = 2^{a+b} B(a+1/2, b+1/2) / pi.
    let beta = gamma(a + 0.5).unwrap_or(f64::NAN) * gamma(b + 0.5).unwrap_or(f64::NAN) / gamma(a + b + 1.0).unwrap_or(f64::NAN);
    2f64.powf(a + b) * beta / PI
}

impl CircleDensity {
    /// Density value at `x` (period one).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CircleDensity::Lebesgue => 1.0,
            CircleDensity::Jacobi { a, b } => {
                let c = (TAU * x).cos();
                (1.0 - c).max(0.0).powf(*a) * (1.0 + c).max(0.0).powf(*b) / jacobi_norm(*a, *b)
            }
            CircleDensity::Custom(f) => f(x - x.floor()),
        }
    }
}

/// Probability measure on `R/Z`: atoms plus a scaled density.
#[derive(Debug, Clone)]
pub struct CircleMeasure {
    atoms: Vec<(f64, f64)>,
    density: Option<(CircleDensity, f64)>,
}

const MASS_TOL: f64 = 1e-10;

impl CircleMeasure {
    /// Atoms `(xi, mass)` with `xi` taken mod 1, plus an optional density
    /// carrying the remaining mass.
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<CircleDensity>) -> Result<Self> {
        if atoms.iter().any(|(x, m)| !x.is_finite() || !(*m > 0.0)) {
            return Err(Error::Domain("atoms need finite location and positive mass".into()));
        }
        let atom_mass: f64 = atoms.iter().map(|a| a.1).sum();
        let rest = 1.0 - atom_mass;
        let density = match density {
            Some(d) => {
                if !(rest > 0.0) {
                    return Err(Error::Domain(format!("atoms carry mass {atom_mass}, leaving none for the density")));
                }
                Some((d, rest))
            }
            None => {
                if rest.abs() > MASS_TOL {
                    return Err(Error::Domain(format!("total mass {atom_mass} is not one")));
                }
                None
            }
        };
        if let Some((CircleDensity::Jacobi { a, b }, _)) = &density {
            if !(*a > -0.5 && *b > -0.5) {
                return Err(Error::Domain("Jacobi exponents must exceed -1/2".into()));
            }
        }
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(x, m)| (x - x.floor(), m)).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { atoms, density })
    }

    pub fn lebesgue() -> Self {
        Self { atoms: vec![], density: Some((CircleDensity::Lebesgue, 1.0)) }
    }

    pub fn jacobi(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![], Some(CircleDensity::Jacobi { a, b }))
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<(&CircleDensity, f64)> {
        self.density.as_ref().map(|(d, m)| (d, *m))
    }

    /// Number of support points if the measure is purely atomic.
    pub fn support_size(&self) -> Option<usize> {
        if self.density.is_some() {
            None
        } else {
            Some(self.atoms.len())
        }
    }

    /// `int g d theta` for a real or complex periodic integrand, given as
    /// real and imaginary parts.
    pub fn integrate(&self, g: impl Fn(f64) -> C64) -> Result<C64> {
        let mut v: C64 = self.atoms.iter().map(|(x, m)| *m * g(*x)).sum();
        if let Some((d, mass)) = &self.density {
            let tol = Tolerance { rel: 1e-13, abs: 1e-14, max_subdiv: 20_000 };
            let br = [0.25, 0.5, 0.75];
            let re = integrate_with_breaks(|x| g(x).re * d.eval(x), 0.0, 1.0, &br, tol)?;
            let im = integrate_with_breaks(|x| g(x).im * d.eval(x), 0.0, 1.0, &br, tol)?;
            v += *mass * C64::new(re.value, im.value);
        }
        Ok(v)
    }

    /// Trigonometric moment `m_k = int e(-k x) d theta(x)`.
    pub fn moment(&self, k: i64) -> C64 {
        if let Some((CircleDensity::Lebesgue, mass)) = &self.density {
            let atoms: C64 = self.atoms.iter().map(|(x, m)| *m * e(-(k as f64) * x)).sum();
            return atoms + if k == 0 { *mass } else { 0.0 };
        }
        self.integrate(|x| e(-(k as f64) * x)).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    /// Moments `m_0 ..= m_n`.
    pub fn moments(&self, n: usize) -> Vec<C64> {
        (0..=n as i64).map(|k| self.moment(k)).collect()
    }

    /// `<p, q> = int p(e(x)) conj(q(e(x))) d theta(x)` for polynomials.
    pub fn inner_poly(&self, p: &[C64], q: &[C64]) -> C64 {
        let n = p.len().max(q.len());
        let m = self.moments(n);
        inner_with(&m, p, q)
    }
}

// <p, q> from moments: sum_{j,k} p_j conj(q_k) m_{k-j}, with m_{-k} = conj(m_k).
fn inner_with(m: &[C64], p: &[C64], q: &[C64]) -> C64 {
    let mom = |d: i64| if d >= 0 { m[d as usize] } else { m[(-d) as usize].conj() };
    let mut s = C64::new(0.0, 0.0);
    for (j, pj) in p.iter().enumerate() {
        for (k, qk) in q.iter().enumerate() {
            s += pj * qk.conj() * mom(k as i64 - j as i64);
        }
    }
    s
}

/// Evaluates a polynomial (ascending coefficients) at `z`.
pub fn poly_eval(p: &[C64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// `Q^{*,n}(z) = z^n conj(Q(1/conj z))`.
pub fn conjugate_poly(q: &[C64], n: usize) -> Result<Vec<C64>> {
    let deg = q.iter().rposition(|c| *c != C64::new(0.0, 0.0)).unwrap_or(0);
    if deg > n {
        return Err(Error::DegreeExceeded { got: deg, max: n });
    }
    Ok((0..=n).map(|k| q.get(n - k).copied().unwrap_or_default().conj()).collect())
}

/// Orthonormal polynomials `phi_0 ..= phi_{N+1}` with `phi_n(1) > 0`.
#[derive(Debug, Clone)]
pub struct OpucBasis {
    degree: usize,
    phi: Vec<Vec<C64>>,
    moments: Vec<C64>,
}

/// Builds `phi_0 ..= phi_{N+1}` by solving the Toeplitz moment systems for the
/// monic `Phi_n` and normalising.
pub fn opuc_basis(theta: &CircleMeasure, n: usize) -> Result<OpucBasis> {
    if let Some(s) = theta.support_size() {
        if s <= n + 1 {
            return Err(Error::TrivialMeasure(s));
        }
    }
    let top = n + 1;
    let m = theta.moments(top);
    let mom = |d: i64| if d >= 0 { m[d as usize] } else { m[(-d) as usize].conj() };
    let mut phi = Vec::with_capacity(top + 1);
    for deg in 0..=top {
        let mut monic = vec![C64::new(0.0, 0.0); deg + 1];
        monic[deg] = C64::new(1.0, 0.0);
        if deg > 0 {
            // <Phi, z^j> = 0: sum_i c_i m_{j-i} = -m_{j-deg}, j < deg.
            let a: Vec<Vec<C64>> = (0..deg).map(|j| (0..deg).map(|i| mom(j as i64 - i as i64)).collect()).collect();
            let b: Vec<C64> = (0..deg).map(|j| -mom(j as i64 - deg as i64)).collect();
            let c = solve_dense_complex(&a, &b).map_err(|e| match e {
                Error::Singular { .. } => Error::TrivialMeasure(deg),
                other => other,
            })?;
            monic[..deg].copy_from_slice(&c);
        }
        let norm2 = inner_with(&m, &monic, &monic).re;
        if !(norm2 > 1e-12) {
            return Err(Error::TrivialMeasure(deg));
        }
        let at1 = poly_eval(&monic, C64::new(1.0, 0.0));
        let phase = if at1.norm() > 0.0 { at1.conj() / at1.norm() } else { C64::new(1.0, 0.0) };
        let scale = phase / norm2.sqrt();
        phi.push(monic.iter().map(|c| c * scale).collect());
    }
    Ok(OpucBasis { degree: n, phi, moments: m })
}

impl OpucBasis {
    /// `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `phi_j`, `j <= N + 1`.
    pub fn phi(&self, j: usize) -> &[C64] {
        &self.phi[j]
    }

    pub fn eval(&self, j: usize, z: C64) -> C64 {
        poly_eval(&self.phi[j], z)
    }

    /// `<p, q>` under the underlying measure, for degrees up to `N + 1`.
    pub fn inner(&self, p: &[C64], q: &[C64]) -> C64 {
        inner_with(&self.moments, p, q)
    }

    /// `max_{j,k <= N+1} |<phi_j, phi_k> - delta_jk|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, pj) in self.phi.iter().enumerate() {
            for (k, pk) in self.phi.iter().enumerate() {
                let d = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((self.inner(pj, pk) - d).norm());
            }
        }
        worst
    }

    /// `(A_{N+1}, B_{N+1}) = ((phi* + phi)/2, i (phi* - phi)/2)` for `phi = phi_{N+1}`.
    pub fn companions(&self) -> (Vec<C64>, Vec<C64>) {
        let n1 = self.degree + 1;
        let p = &self.phi[n1];
        let ps = conjugate_poly(p, n1).expect("degree fits");
        let a = ps.iter().zip(p).map(|(s, q)| 0.5 * (s + q)).collect();
        let b = ps.iter().zip(p).map(|(s, q)| C64::new(0.0, 0.5) * (s - q)).collect();
        (a, b)
    }

    /// `K_N(w, z) = sum_{j <= N} phi_j(z) conj(phi_j(w))`.
    pub fn cd_kernel_sum(&self, w: C64, z: C64) -> C64 {
        (0..=self.degree).map(|j| self.eval(j, z) * self.eval(j, w).conj()).sum()
    }

    /// Christoffel–Darboux form of `K_N(w, z)`; on `conj(w) z = 1` the sum form
    /// is used.
    pub fn cd_kernel(&self, w: C64, z: C64) -> C64 {
        let den = 1.0 - w.conj() * z;
        if den.norm() < 1e-8 {
            return self.cd_kernel_sum(w, z);
        }
        let n1 = self.degree + 1;
        let p = &self.phi[n1];
        let ps = conjugate_poly(p, n1).expect("degree fits");
        (poly_eval(&ps, z) * poly_eval(&ps, w).conj() - poly_eval(p, z) * poly_eval(p, w).conj()) / den
    }
}

/// Free-function form of [`OpucBasis::cd_kernel`].
pub fn cd_kernel(basis: &OpucBasis, w: C64, z: C64) -> C64 {
    basis.cd_kernel(w, z)
}

/// Free-function form of [`OpucBasis::companions`].
pub fn companions(basis: &OpucBasis) -> (Vec<C64>, Vec<C64>) {
    basis.companions()
}

/// Which companion supplies the nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

/// Nodes in `[0, 1)` (ascending) and weights `1/K_N(e(xi), e(xi))`; exact for
/// trigonometric polynomials of degree at most `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub degree: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub fn quadrature_rule(basis: &OpucBasis, which: Which) -> Result<QuadratureRule> {
    let (a, b) = basis.companions();
    let poly = match which {
        Which::A => a,
        Which::B => b,
    };
    let nodes = roots_on_circle(&poly)?;
    let weights = nodes.iter().map(|x| 1.0 / basis.cd_kernel_sum(e(*x), e(*x)).re).collect();
    Ok(QuadratureRule { degree: basis.degree, nodes, weights })
}

/// `sum_j lambda_j W(xi_j)`.
pub fn quadrature_apply(rule: &QuadratureRule, w: &TrigPoly) -> Result<C64> {
    if w.degree() > rule.degree {
        return Err(Error::DegreeExceeded { got: w.degree(), max: rule.degree });
    }
    Ok(rule.nodes.iter().zip(&rule.weights).map(|(x, l)| *l * w.eval_c(*x)).sum())
}

/// The Bernstein–Szegő measure `dx / |phi_n(e(x))|^2`.
pub fn bernstein_szego(basis: &OpucBasis, n: usize) -> Result<CircleMeasure> {
    let p = basis.phi(n).to_vec();
    CircleMeasure::new(vec![], Some(CircleDensity::Custom(Arc::new(move |x| 1.0 / poly_eval(&p, e(x)).norm_sqr()))))
}

/// Parses the circle-measure text format: lines `atom <xi> <mass>`,
/// `density jacobi <a> <b>` or `density lebesgue`; `#` starts a comment.
pub fn parse_circle_measure(text: &str) -> Result<CircleMeasure> {
    let mut atoms = Vec::new();
    let mut density = None;
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("line {}: bad number '{s}'", no + 1)));
        match parts.as_slice() {
            ["atom", x, m] => atoms.push((num(x)?, num(m)?)),
            ["density", "lebesgue"] => density = Some(CircleDensity::Lebesgue),
            ["density", "jacobi", a, b] => density = Some(CircleDensity::Jacobi { a: num(a)?, b: num(b)? }),
            _ => return Err(Error::Parse(format!("line {}: unrecognised '{line}'", no + 1))),
        }
    }
    CircleMeasure::new(atoms, density)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> C64 {
        C64::new(x, y)
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_poly(&[c(1.0, 0.0)], 2).unwrap(), vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(conjugate_poly(&[c(0.0, 0.0), c(1.0, 0.0)], 1).unwrap(), vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(conjugate_poly(&[c(2.0, 0.0), c(0.0, 1.0)], 1).unwrap(), vec![c(0.0, -1.0), c(2.0, 0.0)]);
        assert!(conjugate_poly(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1).is_err());
    }

    #[test]
    fn lebesgue_basis_is_monomials() {
        let b = opuc_basis(&CircleMeasure::lebesgue(), 4).unwrap();
        for j in 0..=5 {
            for (k, cf) in b.phi(j).iter().enumerate() {
                let want = if k == j { 1.0 } else { 0.0 };
                assert!((cf - want).norm() < 1e-15);
            }
        }
        let (a, bb) = b.companions();
        assert!((a[0] - 0.5).norm() < 1e-15 && (a[5] - 0.5).norm() < 1e-15);
        assert!((bb[0] - c(0.0, 0.5)).norm() < 1e-15 && (bb[5] - c(0.0, -0.5)).norm() < 1e-15);
        let x = 0.37;
        assert!((b.cd_kernel(e(x), e(x)).re - 5.0).abs() < 1e-13);
    }

    #[test]
    fn half_atom_half_lebesgue_first_polynomial() {
        // Oracle: m_1 = 1/2, so Phi_1 = z - 1/2 and ||Phi_1||^2 = 1 - 1/4.
        let t = CircleMeasure::new(vec![(0.0, 0.5)], Some(CircleDensity::Lebesgue)).unwrap();
        let b = opuc_basis(&t, 1).unwrap();
        let s = (0.75f64).sqrt();
        assert!((b.phi(1)[1] - 1.0 / s).norm() < 1e-13);
        assert!((b.phi(1)[0] + 0.5 / s).norm() < 1e-13);
        assert!(b.orthonormality_residual() < 1e-12);
    }

    #[test]
    fn too_few_atoms_are_trivial() {
        let t = CircleMeasure::new(vec![(0.1, 0.5), (0.6, 0.5)], None).unwrap();
        assert!(matches!(opuc_basis(&t, 2), Err(Error::TrivialMeasure(_))));
        assert!(opuc_basis(&t, 0).is_ok());
    }

    #[test]
    fn lebesgue_rule() {
        let b = opuc_basis(&CircleMeasure::lebesgue(), 3).unwrap();
        let r = quadrature_rule(&b, Which::B).unwrap();
        assert_eq!(r.nodes.len(), 4);
        for (i, (x, w)) in r.nodes.iter().zip(&r.weights).enumerate() {
            assert!((x - i as f64 / 4.0).abs() < 1e-14);
            assert!((w - 0.25).abs() < 1e-14);
        }
        let ra = quadrature_rule(&b, Which::A).unwrap();
        assert!((ra.nodes[0] - 0.125).abs() < 1e-13);
        let one = TrigPoly::constant(1.0);
        assert!((quadrature_apply(&r, &one).unwrap() - 1.0).norm() < 1e-14);
        let ex = TrigPoly::new(1, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(quadrature_apply(&r, &ex).unwrap().norm() < 1e-14);
        let big = TrigPoly::new(4, vec![c(1.0, 0.0); 9]).unwrap();
        assert!(matches!(quadrature_apply(&r, &big), Err(Error::DegreeExceeded { .. })));
    }

    #[test]
    fn jacobi_normalisation_and_rule() {
        let t = CircleMeasure::jacobi(1.5, 0.5).unwrap();
        assert!((t.moment(0).re - 1.0).abs() < 1e-12);
        let b = opuc_basis(&t, 6).unwrap();
        assert!(b.orthonormality_residual() < 1e-10);
        let r = quadrature_rule(&b, Which::B).unwrap();
        assert_eq!(r.nodes[0], 0.0);
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for k in -6i64..=6 {
            let got: C64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| *w * e(k as f64 * x)).sum();
            assert!((got - t.moment(-k)).norm() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn reproducing_and_kernel_forms() {
        let t = CircleMeasure::new(vec![(0.3, 0.2)], Some(CircleDensity::Jacobi { a: 1.0, b: 2.0 })).unwrap();
        let b = opuc_basis(&t, 4).unwrap();
        let w = c(0.3, -0.4);
        let kw: Vec<C64> = {
            let mut v = vec![C64::new(0.0, 0.0); 5];
            for j in 0..=4 {
                let cj = b.eval(j, w).conj();
                for (i, p) in b.phi(j).iter().enumerate() {
                    v[i] += p * cj;
                }
            }
            v
        };
        for k in 0..=4 {
            let mut zk = vec![C64::new(0.0, 0.0); k + 1];
            zk[k] = C64::new(1.0, 0.0);
            assert!((b.inner(&zk, &kw) - w.powi(k as i32)).norm() < 1e-10);
        }
        for z in [c(0.5, 0.1), c(-0.2, 0.9), e(0.4)] {
            assert!((b.cd_kernel(w, z) - b.cd_kernel_sum(w, z)).norm() < 1e-10);
        }
        assert!(b.cd_kernel(c(0.0, 0.0), c(0.0, 0.0)).re > 0.0);
    }

    #[test]
    fn zeros_of_last_polynomial_inside_disc() {
        let t = CircleMeasure::jacobi(1.0, 1.0).unwrap();
        let b = opuc_basis(&t, 5).unwrap();
        // Power iteration on the companion matrix would do; instead check the
        // argument principle numerically: winding number of phi_{N+1} on |z|=1 is N+1.
        let p = b.phi(6);
        let n = 4000;
        let mut wind = 0.0;
        let mut prev = poly_eval(p, e(0.0)).arg();
        for j in 1..=n {
            let a = poly_eval(p, e(j as f64 / n as f64)).arg();
            let mut d = a - prev;
            if d > PI {
                d -= TAU;
            } else if d < -PI {
                d += TAU;
            }
            wind += d;
            prev = a;
        }
        assert!((wind / TAU - 6.0).abs() < 1e-6);
    }

    #[test]
    fn text_format() {
        let t = parse_circle_measure("# mix\natom 0.25 0.5\ndensity jacobi 1 1\n").unwrap();
        assert_eq!(t.atoms(), &[(0.25, 0.5)]);
        assert!((t.moment(0).re - 1.0).abs() < 1e-12);
        assert!(parse_circle_measure("atom 0.2 0.5\n").is_err());
        assert!(parse_circle_measure("blob").is_err());
    }
}
