//! The spec mini-language for measures, spaces and circle measures.
//!
//! ```text
//! measure := term ('+' term)*
//! term    := dirac:<loc>[,<mass>] | ramp:<p> | sine:a=<a> | exponential | file:<path>
//! space   := pw:tau=<t> | homog:nu=<nu>
//! theta   := lebesgue | jacobi:<a>,<b> | file:<path>
//! number  := float | [float]pi
//! ```
//! A measure may hold any number of atoms but at most one density.

use extremal_core::debranges::DeBrangesSpace;
use extremal_core::measure::{parse_measure, Density, Measure};
use extremal_core::opuc::{parse_circle_measure, CircleMeasure};
use extremal_core::{Error, Result};
use std::f64::consts::PI;

/// Parses a float, optionally suffixed by `pi` (`pi`, `2pi`, `0.5pi`).
pub fn number(s: &str) -> Result<f64> {
    let t = s.trim();
    let v = match t.strip_suffix("pi") {
        Some("") => PI,
        Some("-") => -PI,
        Some(c) => c.parse::<f64>().map(|c| c * PI).map_err(|_| Error::Parse(format!("bad number '{t}'")))?,
        None => t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{t}'")))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("number '{t}' is not finite")))
    }
}

fn keyed(s: &str, key: &str) -> Result<f64> {
    let v = s.strip_prefix(key).and_then(|r| r.strip_prefix('=')).unwrap_or(s);
    number(v)
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read '{path}': {e}")))
}

pub fn measure(spec: &str) -> Result<Measure> {
    let mut atoms = Vec::new();
    let mut density: Option<Density> = None;
    let mut set_density = |d: Density| -> Result<()> {
        if density.replace(d).is_some() {
            return Err(Error::Parse("a measure holds at most one density".into()));
        }
        Ok(())
    };
    let terms: Vec<&str> = spec.split('+').map(str::trim).collect();
    if let [one] = terms.as_slice() {
        if let Some(path) = one.strip_prefix("file:") {
            return parse_measure(&read(path)?);
        }
    }
    for term in terms {
        let (name, arg) = term.split_once(':').unwrap_or((term, ""));
        match name {
            "dirac" => {
                let mut it = arg.split(',');
                let loc = number(it.next().unwrap_or(""))?;
                let mass = it.next().map(number).transpose()?.unwrap_or(1.0);
                if it.next().is_some() {
                    return Err(Error::Parse(format!("dirac takes a location and an optional mass: '{term}'")));
                }
                atoms.push((loc, mass));
            }
            "ramp" => set_density(Density::Ramp { p: keyed(arg, "p")? })?,
            "sine" => set_density(Density::Sine { a: keyed(arg, "a")? })?,
            "exponential" if arg.is_empty() => set_density(Density::Exponential)?,
            _ => return Err(Error::Parse(format!("unknown measure term '{term}'"))),
        }
    }
    Measure::new(atoms, density).map_err(|e| Error::Parse(e.to_string()))
}

pub fn space(spec: &str) -> Result<DeBrangesSpace> {
    let (name, arg) = spec.trim().split_once(':').ok_or_else(|| Error::Parse(format!("bad space '{spec}'")))?;
    let r = match name {
        "pw" => DeBrangesSpace::paley_wiener(keyed(arg, "tau")?),
        "homog" => DeBrangesSpace::homogeneous(keyed(arg, "nu")?),
        _ => return Err(Error::Parse(format!("unknown space '{name}'"))),
    };
    r.map_err(|e| Error::Parse(e.to_string()))
}

pub fn theta(spec: &str) -> Result<CircleMeasure> {
    let s = spec.trim();
    if s == "lebesgue" {
        return Ok(CircleMeasure::lebesgue());
    }
    if let Some(arg) = s.strip_prefix("jacobi:") {
        let (a, b) = arg.split_once(',').ok_or_else(|| Error::Parse(format!("jacobi needs two exponents: '{s}'")))?;
        return CircleMeasure::jacobi(number(a)?, number(b)?).map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(path) = s.strip_prefix("file:") {
        return parse_circle_measure(&read(path)?);
    }
    Err(Error::Parse(format!("unknown circle measure '{s}'")))
}
