//! Command-line front end. [`run`] parses arguments, dispatches to a
//! subcommand and maps failures to exit codes (0 ok, 1 internal or failed
//! verification, 2 invalid input).

pub mod random;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use superspace::basischange::{alpha_oracle, bound_report, AlphaTable, Dims};
use superspace::harmonics::{dim_super_harmonics, laplacian_kernel_dim};
use superspace::schrodinger::{lift_spectrum, radial_solve, spectrum_csv, Potential, RadialProblem};
use superspace::spectral::{divergence_demo, heisenberg_check, parseval_check, CoeffOp};
use superspace::{Error, Expansion64};

pub const SCHEMA: &str = "superspace/1";

#[derive(Parser, Debug)]
#[command(name = "superspace", version, about = "Harmonic analysis and Hermite expansions on R^{m|2n}")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exact <.|.>_2 Gram matrix of super Hermite functions.
    Gram {
        #[command(flatten)]
        c: Common,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Spherical-to-product coefficients with oracle agreement.
    AlphaTable {
        #[command(flatten)]
        c: Common,
        #[arg(long, default_value_t = 10)]
        jmax: usize,
        #[arg(long, default_value_t = 4)]
        pmax: usize,
    },
    /// Growth of the basis-change coefficients against the polynomial bound.
    BoundCheck {
        #[command(flatten)]
        c: Common,
        #[arg(long, default_value_t = 30)]
        jmax: usize,
        #[arg(long, default_value_t = 30)]
        pmax: usize,
    },
    /// Radial Schrodinger spectra per harmonic sector, lifted to superspace.
    Spectrum {
        #[command(flatten)]
        c: Common,
        /// `oscillator` or a potential JSON file.
        #[arg(long, default_value = "oscillator")]
        potential: String,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[arg(long, default_value_t = 12.0)]
        rmax: f64,
    },
    /// Heisenberg inequality for an expansion (file or seeded random).
    Heisenberg {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Fourier transform of an expansion and its Parseval residual.
    Fourier {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Partial norms of the series showing the product-basis L2 space is not
    /// continuously embedded.
    DivergenceDemo {
        #[command(flatten)]
        c: Common,
        /// Number of partial sums.
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
    },
    /// Run invariant suites.
    Verify {
        #[command(flatten)]
        c: Common,
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Dimensions of spherical harmonics: formula and kernel rank.
    Dims {
        #[command(flatten)]
        c: Common,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
}

enum Failure {
    Invalid(String),
    Internal(String),
    /// Report was produced but a verification failed.
    Failed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GridTooCoarse(_) | Error::BasisProjectionIncomplete { .. } | Error::PiExponentMismatch { .. } => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Out = std::result::Result<(), Failure>;

fn emit(c: &Common, text: &str) -> Out {
    match &c.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Internal(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn emit_json(c: &Common, command: &str, body: Value) -> Out {
    let mut v = json!({"schema": SCHEMA, "command": command, "m": c.m, "n": c.n});
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    emit(c, &(serde_json::to_string_pretty(&v).expect("json") + "\n"))
}

fn require_positive(c: &Common) -> std::result::Result<Dims, Failure> {
    Ok(Dims::new(c.m, c.n)?)
}

fn load_or_random(c: &Common, coeffs: &Option<PathBuf>, terms: usize) -> std::result::Result<Expansion64, Failure> {
    match coeffs {
        Some(p) => {
            let s = std::fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            let f = Expansion64::from_json(&s)?;
            if (f.m, f.n) != (c.m, c.n) {
                return Err(Failure::Invalid(format!("expansion is for ({}, {})", f.m, f.n)));
            }
            Ok(f)
        }
        None => {
            let mut r = random::rng(c.seed);
            Ok(random::expansion(&mut r, c.m, c.n, terms, 6, 4)?)
        }
    }
}

fn csv_only_json(c: &Common, command: &str) -> Out {
    if c.format == Format::Csv {
        return Err(Failure::Invalid(format!("{command} has no CSV output")));
    }
    Ok(())
}

fn dispatch(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Gram { c, jmax, kmax } => {
            require_positive(&c)?;
            let r = suites::gram_report(c.m, c.n, jmax, kmax)?;
            let ok = r.offdiag_nonzero == 0 && r.diag_mismatch == 0;
            if c.format == Format::Csv {
                let mut s = String::from("j,k,l,norm2,norm2_f64\n");
                for f in &r.functions {
                    s.push_str(&format!("{},{},{},{},{:e}\n", f.j, f.k, f.l, f.norm2, f.norm2_f64));
                }
                emit(&c, &s)?;
            } else {
                emit_json(&c, "gram", serde_json::to_value(&r).expect("json"))?;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Failed)
            }
        }
        Cmd::AlphaTable { c, jmax, pmax } => {
            let d = require_positive(&c)?;
            let t = AlphaTable::build(d, jmax, pmax)?;
            let oracle: Vec<f64> = t
                .entries
                .par_iter()
                .map(|e| alpha_oracle(d, e.j, e.k, e.p, e.q, e.s, 1).map(|o| o.alpha))
                .collect::<superspace::Result<_>>()?;
            let worst = t.entries.iter().zip(&oracle).map(|(e, o)| (e.alpha - o).abs()).fold(0.0, f64::max);
            if c.format == Format::Csv {
                let mut s = String::from("j,k,p,q,s,alpha,provenance,oracle,deviation\n");
                for (e, o) in t.entries.iter().zip(&oracle) {
                    let prov = serde_json::to_value(e.provenance).expect("json");
                    s.push_str(&format!(
                        "{},{},{},{},{},{:.15e},{},{:.15e},{:.3e}\n",
                        e.j,
                        e.k,
                        e.p,
                        e.q,
                        e.s,
                        e.alpha,
                        prov.as_str().unwrap_or(""),
                        o,
                        (e.alpha - o).abs()
                    ));
                }
                emit(&c, &s)?;
            } else {
                let rows: Vec<Value> = t
                    .entries
                    .iter()
                    .zip(&oracle)
                    .map(|(e, o)| json!({"j": e.j, "k": e.k, "p": e.p, "q": e.q, "s": e.s, "alpha": e.alpha,
                                         "provenance": e.provenance, "oracle": o}))
                    .collect();
                emit_json(&c, "alpha-table", json!({"jmax": jmax, "pmax": pmax, "max_deviation": worst, "entries": rows}))?;
            }
            if worst < 1e-9 {
                Ok(())
            } else {
                Err(Failure::Failed)
            }
        }
        Cmd::BoundCheck { c, jmax, pmax } => {
            csv_only_json(&c, "bound-check")?;
            let r = bound_report(require_positive(&c)?, jmax, pmax)?;
            emit_json(&c, "bound-check", json!({"report": r}))
        }
        Cmd::Spectrum { c, potential, kmax, count, grid, rmax } => {
            let d = require_positive(&c)?;
            let pot = if potential == "oscillator" {
                Potential::oscillator()
            } else {
                let s = std::fs::read_to_string(&potential).map_err(|e| Failure::Invalid(format!("{potential}: {e}")))?;
                Potential::from_json(&s)?
            };
            let sectors: Vec<_> = (0..=kmax)
                .into_par_iter()
                .map(|k| {
                    let p = RadialProblem::new(d.big_m(), k, pot.clone(), rmax, grid)?;
                    lift_spectrum(&radial_solve(&p, count)?, c.m, c.n, 40)
                })
                .collect::<superspace::Result<_>>()?;
            let states: Vec<_> = sectors.into_iter().flatten().collect();
            if c.format == Format::Csv {
                emit(&c, &spectrum_csv(&states))
            } else {
                let rows: Vec<Value> = states
                    .iter()
                    .map(|s| json!({"k": s.k, "j": s.j, "E": s.energy, "multiplicity": s.multiplicity,
                                    "residual": s.residual, "tail": s.tail}))
                    .collect();
                emit_json(&c, "spectrum", json!({"potential": pot, "grid": grid, "r_max": rmax, "states": rows}))
            }
        }
        Cmd::Heisenberg { c, coeffs, terms } => {
            csv_only_json(&c, "heisenberg")?;
            require_positive(&c)?;
            let f = load_or_random(&c, &coeffs, terms)?;
            let h = heisenberg_check(&f)?;
            emit_json(&c, "heisenberg", json!({"expansion": f.to_json(), "result": h}))
        }
        Cmd::Fourier { c, coeffs, terms } => {
            csv_only_json(&c, "fourier")?;
            require_positive(&c)?;
            let f = load_or_random(&c, &coeffs, terms)?;
            let ff = f.apply(CoeffOp::FourierPlus);
            let back = ff.apply(CoeffOp::FourierMinus);
            emit_json(
                &c,
                "fourier",
                json!({"input": f.to_json(), "transform": ff.to_json(),
                       "parseval_residual": parseval_check(&f, &f)?, "inverse_exact": back == f}),
            )
        }
        Cmd::DivergenceDemo { c, terms } => {
            let d = divergence_demo(c.m, c.n, terms)?;
            if c.format == Format::Csv {
                let mut s = String::from("r,partial,lower_bound\n");
                for i in 0..d.r.len() {
                    s.push_str(&format!("{},{:.12e},{:.12e}\n", d.r[i], d.partial[i], d.lower_bound[i]));
                }
                emit(&c, &s)
            } else {
                emit_json(&c, "divergence-demo", json!({"demo": d}))
            }
        }
        Cmd::Verify { c, suite } => {
            csv_only_json(&c, "verify")?;
            let names: Vec<&str> = if suite == "all" {
                suites::SUITES.to_vec()
            } else if suites::SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(Failure::Invalid(format!("unknown suite '{suite}'")));
            };
            let mut checks = Vec::new();
            for name in names {
                checks.extend(suites::run_suite(name, c.m, c.n, c.seed)?);
            }
            let passed = checks.iter().all(|k| k.passed);
            emit_json(&c, "verify", json!({"suite": suite, "seed": c.seed, "passed": passed, "checks": checks}))?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Failed)
            }
        }
        Cmd::Dims { c, kmax } => {
            let rows: Vec<(usize, u64, u64)> = (0..=kmax)
                .map(|k| Ok((k, dim_super_harmonics(c.m, c.n, k), laplacian_kernel_dim(c.m, c.n, k)?)))
                .collect::<superspace::Result<_>>()?;
            if c.format == Format::Csv {
                let mut s = String::from("k,formula,kernel_rank\n");
                for (k, f, o) in &rows {
                    s.push_str(&format!("{k},{f},{o}\n"));
                }
                emit(&c, &s)?;
            } else {
                let v: Vec<Value> = rows.iter().map(|(k, f, o)| json!({"k": k, "formula": f, "kernel_rank": o})).collect();
                emit_json(&c, "dims", json!({"rows": v}))?;
            }
            if rows.iter().all(|(_, f, o)| f == o) {
                Ok(())
            } else {
                Err(Failure::Failed)
            }
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("SUPERSPACE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            // a pool may already exist when called repeatedly in one process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return 2;
        }
    };
    configure_threads();
    match dispatch(cli.cmd) {
        Ok(()) => 0,
        Err(Failure::Failed) => 1,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            1
        }
    }
}
