//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use extremal_core::debranges::{
    c_nu, delta_nu, delta_nu_from_kernel, majorant_integral, minorant_integral, DeBrangesSpace, ExtremalPair, Kind,
};
use extremal_core::lp::{g_c, g_c_contour, Interpolant, LpFunction};
use extremal_core::measure::Measure;
use extremal_core::numerics::{integrate_with_breaks, Tolerance};
use extremal_core::opuc::{opuc_basis, quadrature_rule, CircleMeasure, Which};
use extremal_core::periodic::{periodic_extremal, poisson_crosscheck};
use extremal_core::C64;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tol(rel: f64, abs: f64) -> Tolerance {
    Tolerance { rel, abs, max_subdiv: 400_000 }
}

fn crit1() -> Outcome {
    let space = DeBrangesSpace::paley_wiener(1.0).map_err(|e| e.to_string())?;
    let pair = ExtremalPair::new(&space, &Measure::dirac(0.0), Kind::Odd).map_err(|e| e.to_string())?;
    let x_max = 1000.0;
    let breaks: Vec<f64> = (-318..=318).map(|k| k as f64 * PI).collect();
    let q = integrate_with_breaks(
        |x| {
            let (l, m) = pair.both(x).unwrap_or((f64::NAN, f64::NAN));
            m - l
        },
        -x_max,
        x_max,
        &breaks,
        tol(1e-10, 1e-10),
    )
    .map_err(|e| e.to_string())?;
    // Tail of 2 sin^2 x / x^2 beyond |x| = X on both sides.
    let tail = 2.0 * 2.0 * (1.0 / (2.0 * x_max) + (2.0 * x_max).sin() / (4.0 * x_max * x_max));
    let total = q.value + tail;
    let rel = (total - 2.0 * PI).abs() / (2.0 * PI);
    let closed = delta_nu(-0.5, 2.0, &Measure::dirac(0.0), Kind::Odd).map_err(|e| e.to_string())?;
    let crel = (closed - 2.0 * PI).abs() / (2.0 * PI);
    check(rel < 1e-5 && crel < 1e-12, format!("integral {total:.12} (rel {rel:.2e}); closed form {closed:.15} (rel {crel:.1e})"))
}

fn crit2() -> Outcome {
    let mut worst: f64 = 0.0;
    for nu in [-0.5, 0.0, 0.5, 1.0] {
        for delta in [1.0, 2.0, 2.0 * PI] {
            for kind in [Kind::Truncated, Kind::Odd] {
                let a = delta_nu(nu, delta, &Measure::dirac(0.0), kind).map_err(|e| e.to_string())?;
                let b = delta_nu_from_kernel(nu, delta, kind).map_err(|e| e.to_string())?;
                worst = worst.max((a - b).abs() / a);
            }
        }
    }
    check(worst < 1e-6, format!("max relative deviation {worst:.2e} over 24 cases"))
}

fn spaces() -> Vec<(&'static str, DeBrangesSpace)> {
    vec![("pw(1)", DeBrangesSpace::paley_wiener(1.0).unwrap()), ("homog(0)", DeBrangesSpace::homogeneous(0.0).unwrap())]
}

fn crit3() -> Outcome {
    let m = Measure::exponential();
    let mut worst: f64 = 0.0;
    for (_, space) in spaces() {
        for kind in [Kind::Truncated, Kind::Odd] {
            let pair = ExtremalPair::new(&space, &m, kind).map_err(|e| e.to_string())?;
            for i in 0..1000 {
                let x = -60.0 + 120.0 * (i as f64 + 0.5) / 1000.0;
                let d = pair.majorant(x).map_err(|e| e.to_string())? - pair.minorant(x).map_err(|e| e.to_string())?;
                let want = pair.kernel_gap(x);
                worst = worst.max((d - want).abs() / (1.0 + want.abs()));
            }
        }
    }
    check(worst < 1e-8, format!("max scaled deviation {worst:.2e}"))
}

fn crit4() -> Outcome {
    let measures = [("dirac(0)", Measure::dirac(0.0)), ("ramp(2)", Measure::ramp(2.0).unwrap()), ("exponential", Measure::exponential())];
    let mut min_gap = f64::INFINITY;
    let mut max_res: f64 = 0.0;
    for (_, space) in spaces() {
        let zeros: Vec<f64> = (1..=20).map(|k| space.b_zero(k)).collect();
        let mut grid: Vec<f64> = (0..=2000).map(|i| -70.0 + 140.0 * i as f64 / 2000.0).collect();
        for z in &zeros {
            for s in [1.0, -1.0] {
                for h in [1e-1, 1e-2, 1e-3, -1e-3, -1e-2, -1e-1] {
                    grid.push(s * z + h);
                }
            }
        }
        for (_, m) in &measures {
            for kind in [Kind::Truncated, Kind::Odd] {
                let pair = ExtremalPair::new(&space, m, kind).map_err(|e| e.to_string())?;
                for &x in &grid {
                    let (l, u) = pair.both(x).map_err(|e| e.to_string())?;
                    let f = pair.target(x).map_err(|e| e.to_string())?;
                    min_gap = min_gap.min(f - l).min(u - f);
                }
                for z in &zeros {
                    for x in [*z, -*z] {
                        let (l, u) = pair.both(x).map_err(|e| e.to_string())?;
                        let f = pair.target(x).map_err(|e| e.to_string())?;
                        max_res = max_res.max((l - f).abs()).max((u - f).abs());
                    }
                }
            }
        }
    }
    check(min_gap >= -1e-9 && max_res < 1e-8, format!("min gap {min_gap:.2e}, max node residual {max_res:.2e}"))
}

fn crit5() -> Outcome {
    let space = DeBrangesSpace::paley_wiener(1.0).map_err(|e| e.to_string())?;
    let m = Measure::ramp(2.0).map_err(|e| e.to_string())?;
    let lo = minorant_integral(&space, &m).map_err(|e| e.to_string())?;
    let hi = majorant_integral(&space, &m).map_err(|e| e.to_string())?;
    // Direct integral of the minorant over [-X, X] with X a multiple of pi,
    // plus asymptotic tails: L(x) = [x > 0] f(x) - sin^2(x) sum_{k >= 1} mu_k / x^{k+1}.
    let it = Interpolant::new(&space.b_squared().map_err(|e| e.to_string())?, &m).map_err(|e| e.to_string())?;
    let n = 400;
    let x_max = n as f64 * PI;
    let breaks: Vec<f64> = (-n..=n).map(|k| k as f64 * PI).collect();
    let q = integrate_with_breaks(|x| it.l_real(x).unwrap_or(f64::NAN), -x_max, x_max, &breaks, tol(1e-12, 1e-12))
        .map_err(|e| e.to_string())?;
    let mu: Vec<f64> = (0..5).map(|k| it.moment(k).map(|v| v.re).unwrap_or(f64::NAN)).collect();
    // int_X^inf sin^2 x / x^{k+1} dx ~ 1/(2k X^k) at X = n pi; the odd moments flip sign on the left.
    let mut tail_right = 2.0 / x_max - (1.0 + 1.0 / x_max) * (-x_max).exp() * 0.0;
    let mut tail_left = 0.0;
    for k in 1..5 {
        let s = 1.0 / (2.0 * k as f64 * x_max.powi(k as i32));
        tail_right -= mu[k] * s;
        tail_left -= mu[k] * s * if k % 2 == 1 { 1.0 } else { -1.0 };
    }
    let direct = q.value + tail_right + tail_left;
    let rel = (direct - lo.value).abs() / lo.value.abs();
    let diff = (hi.value - lo.value - PI).abs();
    check(
        rel < 1e-6 && diff < 1e-8,
        format!("sum {:.12}, direct {direct:.12} (rel {rel:.2e}); majorant - minorant - pi = {diff:.1e}", lo.value),
    )
}

fn crit6() -> Outcome {
    let mut worst: f64 = 0.0;
    for nu in [0.0, 0.5] {
        let space = DeBrangesSpace::homogeneous(nu).map_err(|e| e.to_string())?;
        let x_max = space.b_zero(600);
        let mut breaks = vec![0.0];
        for k in 1..600 {
            breaks.push(space.b_zero(k));
            breaks.push(-space.b_zero(k));
        }
        let kern = |x: f64| space.kernel(C64::new(0.0, 0.0), C64::new(x, 0.0)).re;
        let left = integrate_with_breaks(|x| kern(x).powi(2) * space.weight(x).unwrap(), -x_max, x_max, &breaks, tol(1e-11, 1e-13))
            .map_err(|e| e.to_string())?;
        let right = integrate_with_breaks(
            |x| kern(x).powi(2) * x.abs().powf(2.0 * nu + 1.0),
            -x_max,
            x_max,
            &breaks,
            tol(1e-11, 1e-13),
        )
        .map_err(|e| e.to_string())?;
        // Averaged tails: K(0,x)^2 |E|^-2 ~ sin^2/(pi x)^2 and
        // K(0,x)^2 |x|^{2nu+1} ~ Gamma(nu+1)^2 4^nu (2/pi) cos^2 / (pi x)^2.
        let g = extremal_core::numerics::gamma(nu + 1.0).unwrap();
        let lt = 1.0 / (PI * PI * x_max);
        let rt = g * g * 4f64.powf(nu) * (2.0 / PI) / (PI * PI * x_max);
        let ratio = (left.value + lt) / (right.value + rt);
        worst = worst.max((ratio - c_nu(nu)).abs() / c_nu(nu));
    }
    check(worst < 1e-4, format!("max relative deviation of the ratio from c_nu: {worst:.2e}"))
}

fn crit7() -> Outcome {
    let thetas = [("lebesgue", CircleMeasure::lebesgue()), ("jacobi(1,1)", CircleMeasure::jacobi(1.0, 1.0).unwrap())];
    let mut orth: f64 = 0.0;
    let mut pars: f64 = 0.0;
    let mut ladder: f64 = 0.0;
    let mut wsum: f64 = 0.0;
    let mut zero_node = true;
    let mut positive = true;
    for (_, theta) in &thetas {
        for n in [0usize, 1, 2, 5, 8, 16, 32] {
            let basis = opuc_basis(theta, n).map_err(|e| e.to_string())?;
            orth = orth.max(basis.orthonormality_residual());
            let rule = quadrature_rule(&basis, Which::B).map_err(|e| e.to_string())?;
            zero_node &= rule.nodes[0] == 0.0;
            positive &= rule.weights.iter().all(|w| *w > 0.0);
            wsum = wsum.max((rule.weights.iter().sum::<f64>() - 1.0).abs());
            for k in -(n as i64)..=(n as i64) {
                let got: C64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| *w * extremal_core::numerics::e(k as f64 * x)).sum();
                ladder = ladder.max((got - theta.moment(-k)).norm());
            }
            // Parseval on a fixed pseudo-random polynomial of degree n.
            let q: Vec<C64> = (0..=n).map(|j| C64::new(((j * 7 + 3) % 11) as f64 - 5.0, ((j * 5 + 1) % 7) as f64 - 3.0)).collect();
            let norm = theta.inner_poly(&q, &q).re;
            let via_nodes: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| {
                    let z = extremal_core::numerics::e(*x);
                    w * q.iter().rev().fold(C64::new(0.0, 0.0), |a, c| a * z + c).norm_sqr()
                })
                .sum();
            pars = pars.max((norm - via_nodes).abs() / norm);
        }
    }
    check(
        orth < 1e-8 && pars < 1e-8 && ladder < 1e-8 && zero_node && positive && wsum < 1e-9,
        format!("orthonormality {orth:.1e}, Parseval {pars:.1e}, ladder {ladder:.1e}, weight sum {wsum:.1e}, node 0 {zero_node}, positive {positive}"),
    )
}

fn crit8() -> Outcome {
    let theta = CircleMeasure::lebesgue();
    let mut worst: f64 = 0.0;
    for n in 1..=16 {
        let pair = periodic_extremal(&theta, &Measure::dirac(0.0), n, Kind::Odd).map_err(|e| e.to_string())?;
        let inv = 1.0 / (n as f64 + 1.0);
        let devs = [
            (pair.majorant.mean() - inv).abs(),
            (pair.minorant.mean() + inv).abs(),
            (pair.majorant.eval(0.0) - 1.0).abs(),
            (pair.minorant.eval(0.0) + 1.0).abs(),
        ];
        worst = devs.iter().fold(worst, |a, b| a.max(*b));
    }
    check(worst < 1e-10, format!("max deviation {worst:.2e} over N = 1..16"))
}

fn crit9() -> Outcome {
    let theta = CircleMeasure::lebesgue();
    let m = Measure::ramp(2.0).map_err(|e| e.to_string())?;
    let report = poisson_crosscheck(&theta, &m, 8, Kind::Truncated, 10_000).map_err(|e| e.to_string())?;
    check(report.max_deviation < 1e-6, format!("max deviation {:.2e} on {} points", report.max_deviation, report.grid))
}

fn crit10() -> Outcome {
    let mut worst: f64 = 0.0;
    for tau in [1.0, PI] {
        let f = LpFunction::sin_squared(tau).map_err(|e| e.to_string())?;
        let c = 0.5;
        for t in [0.25, -0.25, 1.0, -1.0, 2.0] {
            let r = g_c(&f, c, t).map_err(|e| e.to_string())?;
            let q = g_c_contour(&f, c, t).map_err(|e| e.to_string())?;
            worst = worst.max((r - q).abs() / r.abs().max(1e-300));
        }
    }
    // Closed forms for one and two zeros.
    let mut exact: f64 = 0.0;
    let lin = LpFunction::finite(1, 0.4, 2.5, vec![]).unwrap();
    let one = LpFunction::finite(0, -0.3, 1.7, vec![(0.8, 1)]).unwrap();
    let two = LpFunction::finite(2, 0.2, 3.0, vec![]).unwrap();
    for i in 0..1000 {
        let t = -5.0 + 10.0 * (i as f64 + 0.37) / 1000.0;
        let ind = |p: bool| if p { 1.0 } else { 0.0 };
        let pairs = [
            (g_c(&lin, 1.0, t).unwrap(), ind(t > 0.4) / 2.5),
            (g_c(&lin, -1.0, t).unwrap(), -ind(t < 0.4) / 2.5),
            (g_c(&one, 1.5, t).unwrap(), -0.8 / 1.7 * (0.8 * (t + 0.3) - 1.0).exp() * ind(t > -0.3 + 1.25)),
            (g_c(&one, 0.2, t).unwrap(), 0.8 / 1.7 * (0.8 * (t + 0.3) - 1.0).exp() * ind(t < -0.3 + 1.25)),
            (g_c(&two, 0.5, t).unwrap(), 2.0 / 6.0 * (t - 0.2) * ind(t > 0.2)),
        ];
        for (a, b) in pairs {
            exact = exact.max((a - b).abs());
        }
    }
    check(worst < 1e-6 && exact < 1e-13, format!("residue vs contour {worst:.2e}; closed forms {exact:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("1 classical Beurling-Selberg value", crit1, Duration::from_secs(10)),
        ("2 power-weight closed forms", crit2, Duration::from_secs(5)),
        ("3 equality condition", crit3, Duration::from_secs(30)),
        ("4 one-sidedness and interpolation", crit4, Duration::from_secs(120)),
        ("5 quadrature-sum integrals", crit5, Duration::from_secs(60)),
        ("6 homogeneous isometry", crit6, Duration::from_secs(30)),
        ("7 OPUC suite", crit7, Duration::from_secs(60)),
        ("8 sawtooth regression", crit8, Duration::from_secs(60)),
        ("9 periodic cross-route", crit9, Duration::from_secs(60)),
        ("10 frequency-function oracles", crit10, Duration::from_secs(60)),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run, budget) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(&format!("{o} "))) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time budget {budget:?}")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {name}: {status} ({:.2}s) {detail}", took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
