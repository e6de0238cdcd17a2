use crate::{Error, Result};
use std::f64::consts::PI;

/// Euler gamma function.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::GammaPole(x));
    }
    Ok(statrs::function::gamma::gamma(x))
}

// Below this argument the power series is used; above `HANKEL_FROM` the
// asymptotic expansion; Miller's backward recurrence in between.
const SERIES_UP_TO: f64 = 2.0;
const HANKEL_FROM: f64 = 40.0;

/// Bessel function of the first kind `J_nu(x)` for `nu > -1`.
///
/// Negative arguments are accepted only for integer orders, where
/// `J_nu(-x) = (-1)^nu J_nu(x)`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_j_seq(nu, x, 1)?[0])
}

/// `[J_nu(x), J_{nu+1}(x), ..., J_{nu+count-1}(x)]` from a single sweep.
pub fn bessel_j_seq(nu: f64, x: f64, count: usize) -> Result<Vec<f64>> {
    if !(nu > -1.0) {
        return Err(Error::Domain(format!("Bessel order {nu} must exceed -1")));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    if x < 0.0 {
        if nu != nu.floor() {
            return Err(Error::Domain(format!(
                "J_{nu} is not real at negative argument {x}"
            )));
        }
        let mut v = bessel_j_seq(nu, -x, count)?;
        for (k, vk) in v.iter_mut().enumerate() {
            if (nu as i64 + k as i64) % 2 != 0 {
                *vk = -*vk;
            }
        }
        return Ok(v);
    }
    if x == 0.0 {
        return Ok((0..count)
            .map(|k| {
                let o = nu + k as f64;
                if o == 0.0 {
                    1.0
                } else if o > 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .collect());
    }
    if x <= SERIES_UP_TO {
        (0..count).map(|k| series_j(nu + k as f64, x)).collect()
    } else if x >= HANKEL_FROM {
        Ok((0..count).map(|k| hankel_j(nu + k as f64, x)).collect())
    } else {
        miller(nu, x, count)
    }
}

fn series_j(nu: f64, x: f64) -> Result<f64> {
    let q = -0.25 * x * x;
    let mut term = 1.0 / gamma(nu + 1.0)?;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    Ok((0.5 * x).powf(nu) * sum)
}

/// Hankel asymptotic expansion of `J_nu(x)`, accurate for large `x`.
pub fn hankel_j(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..(2.0 * x) as usize + 2 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        if a.abs() > prev || a.abs() < 1e-17 {
            break;
        }
        prev = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

// Backward recurrence normalised by (x/2)^nu = sum_k c_k J_{nu+2k}(x) with
// c_0 = Gamma(nu+1) and c_k = (nu+2k) Gamma(nu+k)/k!.
fn miller(nu: f64, x: f64, count: usize) -> Result<Vec<f64>> {
    let top = (x as usize + 40 + count + 20) & !1;
    let mut vals = vec![0.0; top + 2];
    vals[top + 1] = 0.0;
    vals[top] = 1e-30;
    for m in (1..=top).rev() {
        let mu = nu + m as f64;
        vals[m - 1] = 2.0 * mu / x * vals[m] - vals[m + 1];
        if vals[m - 1].abs() > 1e250 {
            for v in vals[m - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut r = gamma(nu + 1.0)?;
    let mut norm = r * vals[0];
    // r_k = Gamma(nu+k)/k!; r_1 = Gamma(nu+1).
    for k in 1..=top / 2 {
        if k > 1 {
            r *= (nu + (k - 1) as f64) / k as f64;
        }
        norm += (nu + 2.0 * k as f64) * r * vals[2 * k];
    }
    let scale = (0.5 * x).powf(nu) / norm;
    Ok(vals[..count].iter().map(|v| v * scale).collect())
}

/// The first `count` positive zeros of `J_nu`, ascending.
pub fn bessel_zeros(nu: f64, count: usize) -> Result<Vec<f64>> {
    if !(nu > -1.0) {
        return Err(Error::Domain(format!("Bessel order {nu} must exceed -1")));
    }
    let j = |x: f64| bessel_j(nu, x).unwrap_or(f64::NAN);
    let mut zeros = Vec::with_capacity(count);
    let step = 0.1;
    let mut a = 1e-8;
    let mut fa = j(a);
    while zeros.len() < count {
        let b = a + step;
        let fb = j(b);
        if fb == 0.0 {
            zeros.push(b);
        } else if fa.signum() != fb.signum() && fa != 0.0 {
            zeros.push(super::bisect(j, a, b, fa, fb));
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// The `k`-th positive zero `j_{nu,k}` of `J_nu`, `k >= 1`.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("zero index starts at 1".into()));
    }
    Ok(bessel_zeros(nu, k)?[k - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(4.0).unwrap() - 6.0).abs() < 1e-13);
        assert!(matches!(gamma(-2.0), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(0.0), Err(Error::GammaPole(_))));
        // Reflection region.
        let g = gamma(-0.5).unwrap();
        assert!((g + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn half_order_closed_form_across_regimes() {
        for &x in &[0.3, 1.7, 2.5, 7.0, 15.0, 33.0, 41.0, 120.0, 199.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x).unwrap();
            assert!((got - exact).abs() < 1e-13, "x={x}: {got} vs {exact}");
            let exact_m = (2.0 / (PI * x)).sqrt() * x.cos();
            let got_m = bessel_j(-0.5, x).unwrap();
            assert!((got_m - exact_m).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn trivial_origin_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn regimes_agree_at_boundaries() {
        for &nu in &[-0.5, 0.0, 0.5, 1.0, 2.3] {
            for &x in &[SERIES_UP_TO, HANKEL_FROM] {
                let lo = bessel_j(nu, x * (1.0 - 1e-12)).unwrap();
                let s = series_j(nu, x).unwrap();
                let m = miller(nu, x, 1).unwrap()[0];
                assert!((lo - m).abs() < 1e-10, "nu={nu} x={x}");
                if x == SERIES_UP_TO {
                    assert!((s - m).abs() < 1e-14);
                } else {
                    assert!((hankel_j(nu, x) - m).abs() < 1e-13, "nu={nu}");
                }
            }
        }
    }

    #[test]
    fn zeros_of_half_order_are_multiples_of_pi() {
        assert!((bessel_zero(0.5, 1).unwrap() - PI).abs() < 1e-13);
        assert!((bessel_zero(0.5, 3).unwrap() - 3.0 * PI).abs() < 1e-12);
        assert!((bessel_zero(0.0, 1).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_zero(1.0, 1).unwrap() - 3.831_705_970_207_512).abs() < 1e-12);
    }

    #[test]
    fn zero_residuals() {
        for &nu in &[-0.5, 0.0, 0.5, 1.0] {
            let zs = bessel_zeros(nu, 50).unwrap();
            for z in zs {
                assert!(bessel_j(nu, z).unwrap().abs() < 1e-12, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn integer_order_negative_argument() {
        let a = bessel_j(1.0, -3.0).unwrap();
        let b = bessel_j(1.0, 3.0).unwrap();
        assert_eq!(a, -b);
        assert!(bessel_j(0.5, -1.0).is_err());
    }
}

/// Companion functions of the homogeneous spaces:
/// `A_nu(z) = Gamma(nu+1) (z/2)^{-nu} J_nu(z)`, `B_nu(z) = Gamma(nu+1) (z/2)^{-nu} J_{nu+1}(z)`,
/// evaluated by their power series. Returns `(A, B, B/z)`.
///
/// Accurate where the series does not cancel badly, i.e. for moderate
/// `|Re z|`; real arguments should use [`homog_ab`].
pub fn homog_ab_series(nu: f64, z: crate::C64) -> (crate::C64, crate::C64, crate::C64) {
    let q = -0.25 * z * z;
    let one = crate::C64::new(1.0, 0.0);
    let (mut ta, mut tb) = (one, one / (2.0 * (nu + 1.0)));
    let (mut a, mut b) = (ta, tb);
    let (mut mag_a, mut mag_b) = (1.0, tb.norm());
    let need = z.norm() as usize + 5;
    for n in 1..400 {
        let nf = n as f64;
        ta *= q / (nf * (nu + nf));
        tb *= q / (nf * (nu + nf + 1.0));
        a += ta;
        b += tb;
        mag_a += ta.norm();
        mag_b += tb.norm();
        if n > need && ta.norm() < 1e-18 * mag_a && tb.norm() < 1e-18 * mag_b {
            break;
        }
    }
    (a, b * z, b)
}

/// Real `(A_nu(x), B_nu(x), B_nu(x)/x)`; `A` is even and `B` odd.
pub fn homog_ab(nu: f64, x: f64) -> Result<(f64, f64, f64)> {
    let ax = x.abs();
    if ax < SERIES_UP_TO {
        let (a, b, bz) = homog_ab_series(nu, crate::C64::new(x, 0.0));
        return Ok((a.re, b.re, bz.re));
    }
    let j = bessel_j_seq(nu, ax, 2)?;
    let pre = gamma(nu + 1.0)? * (0.5 * ax).powf(-nu);
    let (a, b) = (pre * j[0], pre * j[1] * x.signum());
    Ok((a, b, pre * j[1] / ax))
}
