//! The `entire`, `periodic` and `quadrature` commands. Each returns the files
//! it produced; `main` writes them to the output directory or prints the
//! primary one.

use crate::output::{csv, num, nums};
use crate::spec;
use extremal_core::debranges::{
    delta_nu, delta_nu_from_kernel, gap_integral, majorant_integral, minorant_integral, odd_integrals, ExtremalPair, Family,
    Kind, Side,
};
use extremal_core::numerics::e;
use extremal_core::opuc::{opuc_basis, quadrature_rule, Which};
use extremal_core::periodic::{periodic_extremal, periodic_optimal_value};
use extremal_core::{Error, Result};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

/// Output of one command: the JSON summary and named CSV tables.
pub struct Emitted {
    pub summary: Value,
    pub tables: Vec<(String, String)>,
}

pub struct EntireArgs {
    pub space: String,
    pub measure: String,
    pub kind: Kind,
    pub grid: usize,
    pub x_max: f64,
    pub integral_width: f64,
    pub delta_check: Option<f64>,
    pub minorant_only: bool,
}

fn sourced(value: Result<f64>, source: &str) -> Value {
    match value {
        Ok(v) => json!({ "value": num(v), "source": source }),
        Err(e) => json!({ "error": e.to_string(), "source": source }),
    }
}

fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn entire(a: &EntireArgs) -> Result<Emitted> {
    let space = spec::space(&a.space)?;
    let m = spec::measure(&a.measure)?;
    let pair = ExtremalPair::new(&space, &m, a.kind)?;
    if !pair.has_majorant() && !a.minorant_only {
        return Err(Error::Hypothesis {
            name: "H3",
            detail: "the majorant needs (H3); the minorant alone is available with --minorant-only".into(),
        });
    }
    let with_majorant = pair.has_majorant() && !a.minorant_only;
    let xs = grid(a.grid, -a.x_max, a.x_max);
    let rows: Vec<Vec<Option<f64>>> = xs
        .par_iter()
        .map(|&x| -> Result<Vec<Option<f64>>> {
            let (l, u) = if with_majorant {
                let (l, u) = pair.both(x)?;
                (l, Some(u))
            } else {
                (pair.minorant(x)?, None)
            };
            Ok(vec![Some(x), Some(pair.target(x)?), Some(l), u, space.weight(x).ok()])
        })
        .collect::<Result<_>>()?;

    let mut s = Map::new();
    s.insert("command".into(), json!("entire"));
    s.insert("space".into(), json!(a.space));
    s.insert("measure".into(), json!(a.measure));
    s.insert("kind".into(), json!(kind_name(a.kind)));
    if with_majorant {
        s.insert("optimal_value".into(), sourced(Ok(pair.optimal_value()), "kappa / K(0,0), kappa = 1 (truncated) or 2 (odd)"));
        s.insert(
            "integral_numeric".into(),
            sourced(gap_integral(&pair, a.integral_width), "integral of (majorant - minorant) |E|^-2 over the line"),
        );
    }
    match a.kind {
        Kind::Truncated => {
            s.insert(
                "minorant_integral".into(),
                sourced(minorant_integral(&space, &m).map(|v| v.value), "sum over positive zeros xi of B of f_mu(xi) / K(xi, xi)"),
            );
            if with_majorant {
                s.insert(
                    "majorant_integral".into(),
                    sourced(majorant_integral(&space, &m).map(|v| v.value), "1/K(0,0) + sum over positive zeros xi of B of f_mu(xi) / K(xi, xi)"),
                );
            }
        }
        Kind::Odd => {
            let r = odd_integrals(&space, &m);
            s.insert("minorant_integral".into(), sourced(r.clone().map(|v| v.0), "-1/K(0,0) + sum over nonzero zeros of B"));
            s.insert("majorant_integral".into(), sourced(r.map(|v| v.1), "1/K(0,0) + sum over nonzero zeros of B"));
        }
    }
    if let Some(delta) = a.delta_check {
        match space.family() {
            Family::Homogeneous { nu } => {
                s.insert(
                    "closed_form".into(),
                    sourced(
                        delta_nu(nu, delta, &m, a.kind),
                        "power weight |x|^(2 nu + 1), type delta: Gamma(nu+1) Gamma(nu+2) (4/delta)^(2 nu + 2), doubled for the odd kind",
                    ),
                );
                s.insert(
                    "kernel_reconstruction".into(),
                    sourced(delta_nu_from_kernel(nu, delta, a.kind), "(2/delta)^(2 nu + 2) kappa / (K(0,0) c_nu)"),
                );
                s.insert("delta".into(), num(delta));
            }
            Family::PaleyWiener { .. } => {
                return Err(Error::Parse("--delta-check needs a homogeneous space".into()));
            }
        }
    }
    let table = csv(&["x", "f_mu", "minorant", "majorant", "weight"], &rows);
    Ok(Emitted { summary: Value::Object(s), tables: vec![("entire.csv".into(), table)] })
}

pub struct PeriodicArgs {
    pub theta: String,
    pub measure: String,
    pub kind: Kind,
    pub degree: usize,
    pub grid: usize,
}

pub fn periodic(a: &PeriodicArgs) -> Result<Emitted> {
    let theta = spec::theta(&a.theta)?;
    let m = spec::measure(&a.measure)?;
    let pair = periodic_extremal(&theta, &m, a.degree, a.kind)?;
    let xs: Vec<f64> = (0..a.grid.max(1)).map(|i| i as f64 / a.grid.max(1) as f64).collect();
    let rows: Vec<Vec<Option<f64>>> = xs
        .par_iter()
        .map(|&x| Ok(vec![Some(x), Some(pair.target(x)?), Some(pair.minorant.eval(x)), Some(pair.majorant.eval(x))]))
        .collect::<Result<_>>()?;
    let coeffs = |p: &extremal_core::periodic::TrigPoly| {
        let n = p.degree() as i64;
        let rows: Vec<Vec<Option<f64>>> =
            (-n..=n).map(|k| vec![Some(k as f64), Some(p.coeff(k).re), Some(p.coeff(k).im)]).collect();
        csv(&["k", "re", "im"], &rows)
    };
    let sums = |side| periodic_optimal_value(&theta, &m, a.degree, a.kind, side);
    let summary = json!({
        "command": "periodic",
        "theta": a.theta,
        "measure": a.measure,
        "kind": kind_name(a.kind),
        "degree": a.degree,
        "nodes": nums(&pair.rule.nodes),
        "weights": nums(&pair.rule.weights),
        "value_minorant": sourced(Ok(pair.integral(Side::Minorant)), "integral of the minorant against theta"),
        "value_majorant": sourced(Ok(pair.integral(Side::Majorant)), "integral of the majorant against theta"),
        "theorem_sums": {
            "minorant": sourced(sums(Side::Minorant), "F(0)/K_N(1,1) + sum over nonzero zeros xi of B_{N+1} of F(xi)/K_N(e(xi), e(xi)); -1/K_N(1,1) + ... for the odd kind"),
            "majorant": sourced(sums(Side::Majorant), "F(0+)/K_N(1,1) + sum over nonzero zeros xi of B_{N+1} of F(xi)/K_N(e(xi), e(xi)); 1/K_N(1,1) + ... for the odd kind"),
        },
        "grid_check": { "min_target_minus_minorant": num(pair.check.lower), "min_majorant_minus_target": num(pair.check.upper), "points": pair.check.points },
    });
    Ok(Emitted {
        summary,
        tables: vec![
            ("periodic.csv".into(), csv(&["x", "F", "L", "M"], &rows)),
            ("minorant_coeffs.csv".into(), coeffs(&pair.minorant)),
            ("majorant_coeffs.csv".into(), coeffs(&pair.majorant)),
        ],
    })
}

pub fn quadrature(theta_spec: &str, degree: usize) -> Result<Emitted> {
    let theta = spec::theta(theta_spec)?;
    let basis = opuc_basis(&theta, degree)?;
    let rule = quadrature_rule(&basis, Which::B)?;
    let mut ladder: f64 = 0.0;
    for k in -(degree as i64)..=degree as i64 {
        let q: extremal_core::C64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| *w * e(k as f64 * x)).sum();
        ladder = ladder.max((q - theta.moment(-k)).norm());
    }
    let rows: Vec<Vec<Option<f64>>> = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| vec![Some(*x), Some(*w)]).collect();
    let summary = json!({
        "command": "quadrature",
        "theta": theta_spec,
        "degree": degree,
        "nodes": nums(&rule.nodes),
        "weights": nums(&rule.weights),
        "weight_sum": num(rule.weights.iter().sum()),
        "ladder_residual": num(ladder),
        "ladder_note": format!("max over |k| <= {degree} of |sum_j w_j e(k xi_j) - integral of e(k x) d theta|"),
    });
    Ok(Emitted { summary, tables: vec![("quadrature.csv".into(), csv(&["node", "weight"], &rows))] })
}

pub fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Truncated => "truncated",
        Kind::Odd => "odd",
    }
}

/// Process exit status for an error: 2 for bad input, 3 for unmet
/// hypotheses, 4 for numerical failure, 5 for a failed verification.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Domain(_) | Error::TrivialMeasure(_) | Error::DegreeExceeded { .. } => 2,
        Error::Hypothesis { .. } | Error::Support { .. } | Error::NotIntegrable(_) => 3,
        Error::Nonconvergence { .. }
        | Error::Singular { .. }
        | Error::RootCount { .. }
        | Error::GammaPole(_)
        | Error::AbscissaOnZero(_) => 4,
        Error::Verification(_) => 5,
    }
}
