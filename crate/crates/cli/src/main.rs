//! `extremal-kit`: one-sided bandlimited and trigonometric approximation of
//! Laplace-type transforms from the command line.

mod commands;
mod output;
mod spec;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{exit_code, Emitted, EntireArgs, PeriodicArgs};
use extremal_core::debranges::Kind;
use extremal_core::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "extremal-kit", version, about = "Extremal one-sided approximations of f_mu and their periodic analogues")]
struct Cli {
    /// Directory receiving summary.json and the CSV tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// What goes to stdout when --out is absent.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Truncated,
    Odd,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Truncated => Kind::Truncated,
            KindArg::Odd => Kind::Odd,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Extremal pair in a de Branges space (Paley-Wiener or homogeneous).
    Entire {
        /// `pw:tau=T` or `homog:nu=NU`.
        #[arg(long)]
        space: String,
        /// Measure spec, e.g. `dirac:0`, `ramp:2`, `dirac:0,0.5+exponential`.
        #[arg(long)]
        measure: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Number of sample points on [-x_max, x_max].
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[arg(long, default_value_t = 20.0)]
        x_max: f64,
        /// Half-width of the numerical integration of M - L.
        #[arg(long, default_value_t = 200.0)]
        integral_width: f64,
        /// Compare with the closed form for the Gaussian-type measure of this delta (homogeneous spaces).
        #[arg(long)]
        delta_check: Option<f64>,
        /// Build only the minorant when the majorant hypothesis fails.
        #[arg(long)]
        minorant_only: bool,
    },
    /// Extremal trigonometric pair for a circle measure.
    Periodic {
        /// `lebesgue`, `jacobi:a,b` or `file:PATH`.
        #[arg(long)]
        theta: String,
        #[arg(long)]
        measure: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Quadrature rule on the zeros of the companion polynomial B_{N+1}.
    Quadrature {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        degree: usize,
    },
    /// Run the invariant suite.
    Verify {
        /// Comma-separated check names or module prefixes.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Force the named checks to fail (exercises the failure path).
        #[arg(long, value_delimiter = ',', hide = true)]
        corrupt: Vec<String>,
    },
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("EXTREMAL_KIT_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Parse(format!("EXTREMAL_KIT_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn write_out(dir: &PathBuf, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Domain(format!("cannot create {}: {e}", dir.display())))?;
    for (name, body) in files {
        let p = dir.join(name);
        std::fs::write(&p, body).map_err(|e| Error::Domain(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn emit(cli: &Cli, e: Emitted) -> Result<()> {
    let summary = output::json(&e.summary);
    match &cli.out {
        Some(dir) => {
            let mut files = vec![("summary.json".to_string(), summary)];
            files.extend(e.tables);
            write_out(dir, &files)
        }
        None => {
            match cli.format {
                Format::Json => print!("{summary}"),
                Format::Csv => print!("{}", e.tables.first().map(|t| t.1.as_str()).unwrap_or("")),
            }
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    configure_threads()?;
    match &cli.command {
        Command::Entire { space, measure, kind, grid, x_max, integral_width, delta_check, minorant_only } => {
            let args = EntireArgs {
                space: space.clone(),
                measure: measure.clone(),
                kind: (*kind).into(),
                grid: *grid,
                x_max: *x_max,
                integral_width: *integral_width,
                delta_check: *delta_check,
                minorant_only: *minorant_only,
            };
            emit(cli, commands::entire(&args)?)?;
        }
        Command::Periodic { theta, measure, kind, degree, grid } => {
            let args = PeriodicArgs {
                theta: theta.clone(),
                measure: measure.clone(),
                kind: (*kind).into(),
                degree: *degree,
                grid: *grid,
            };
            emit(cli, commands::periodic(&args)?)?;
        }
        Command::Quadrature { theta, degree } => emit(cli, commands::quadrature(theta, *degree)?)?,
        Command::Verify { only, corrupt } => {
            let report = verify::run(only, corrupt)?;
            let table = verify::table(&report);
            let js = verify::report_json(&report);
            match &cli.out {
                Some(dir) => write_out(dir, &[("summary.json".into(), js), ("verify.csv".into(), table)])?,
                None => match cli.format {
                    Format::Json => print!("{js}"),
                    Format::Csv => print!("{table}"),
                },
            }
            return Ok(report.exit_code);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("extremal-kit: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
