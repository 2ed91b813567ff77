use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use igusa::frac::{parse_q, Q};
use igusa::padic::MeasureOptions;
use igusa::report::{self, ChiSpec, CommandError, MethodChoice};
use igusa::zeta::{FitOptions, GoldenCase, GoldenParams};

#[derive(Parser)]
#[command(
    name = "igusa",
    version,
    about = "Newton polygons, candidate poles and p-adic oracles for local zeta functions"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Prime.
    #[arg(long, global = true, default_value_t = 5)]
    p: u64,
    /// Truncation order of the zeta series.
    #[arg(long = "K", global = true, default_value_t = 8)]
    k: u32,
    /// Angular depth (largest conductor resolved).
    #[arg(long, global = true, default_value_t = 1)]
    c: u32,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report to this file (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Reject inputs with f(0, 0) != 0.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Polygons, fan, arithmetic data, non-degeneracy and candidate poles.
    Analyze { poly: String },
    /// Zeta series from the level-set oracle.
    Zeta {
        poly: String,
        /// `triv`, `all` or `c<c>k<k>`.
        #[arg(long, default_value = "triv")]
        chi: String,
    },
    /// Fit a rational function to the trivial-character series.
    Fit {
        poly: String,
        /// Factor pairs `A,B;A,B;…` (default: candidates, (1,1) and refinement rays).
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, default_value_t = 2)]
        m_max: u32,
    },
    /// Exponential sums mod p^m.
    Expsum {
        poly: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Units, comma separated (default: 1..p-1).
        #[arg(long)]
        u: Option<String>,
        /// `direct`, `denef` or `both`.
        #[arg(long, default_value = "both")]
        method: String,
        /// Also tabulate the decay of max |E| for m = 1..=DECAY.
        #[arg(long)]
        decay: Option<u32>,
    },
    /// Closed forms of the running example and their expansions.
    Golden {
        #[arg(long, default_value = "triv")]
        case: String,
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long = "T")]
        t: Option<String>,
        /// Value standing for the character factor of the chi12 display.
        #[arg(long = "S")]
        s: Option<String>,
        /// Compare the combined closed forms with the oracle through t^K.
        #[arg(long)]
        check: bool,
    },
    /// Quick end-to-end consistency checks.
    Selftest,
}

fn rational(s: &Option<String>, default: Q) -> Result<Q, CommandError> {
    match s {
        None => Ok(default),
        Some(t) => parse_q(t).ok_or_else(|| CommandError::Parse(format!("bad rational {t:?}"))),
    }
}

fn parse_basis(s: &str) -> Result<Vec<(u64, u64)>, CommandError> {
    s.split(';')
        .map(|pair| {
            let (a, b) = pair.split_once(',').ok_or_else(|| CommandError::Parse(format!("bad factor {pair:?}")))?;
            let a = a.trim().parse().map_err(|_| CommandError::Parse(format!("bad factor {pair:?}")))?;
            let b = b.trim().parse().map_err(|_| CommandError::Parse(format!("bad factor {pair:?}")))?;
            Ok((a, b))
        })
        .collect()
}

fn parse_units(s: &str) -> Result<Vec<u64>, CommandError> {
    s.split(',').map(|u| u.trim().parse().map_err(|_| CommandError::Parse(format!("bad unit {u:?}")))).collect()
}

/// Writes a line to stdout; a closed pipe is not an error.
fn out(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn emit<T: Serialize>(value: &T, json: &Option<PathBuf>, summary: impl FnOnce() -> String) -> Result<(), CommandError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    match json {
        Some(path) if path.as_os_str() == "-" => out(&text),
        Some(path) => {
            std::fs::write(path, text + "\n")
                .map_err(|e| CommandError::Resource(format!("cannot write {}: {e}", path.display())))?;
            out(&summary());
        }
        None => out(&text),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CommandError> {
    let c = &cli.common;
    let opts = MeasureOptions { threads: c.threads, ..Default::default() };
    match &cli.command {
        Command::Analyze { poly } => {
            let r = report::cmd_analyze(poly, c.p, c.strict)?;
            let values: Vec<String> = r.candidates.values.iter().map(ToString::to_string).collect();
            emit(&r, &c.json, || format!("candidate poles: {}; beta = {}", values.join(", "), r.beta))
        }
        Command::Zeta { poly, chi } => {
            let chi: ChiSpec = chi.parse()?;
            let r = report::cmd_zeta(poly, c.p, c.k, c.c, &chi, c.strict, &opts)?;
            emit(&r, &c.json, || format!("{} series to t^{}", r.series.len(), r.k_max))
        }
        Command::Fit { poly, basis, m_max } => {
            let basis = basis.as_deref().map(parse_basis).transpose()?;
            let fit = FitOptions { m_max: *m_max, num_degree: None };
            let r = report::cmd_fit(poly, c.p, c.k, basis, &fit, c.strict, &opts)?;
            let consistent = r.outcome.is_consistent();
            emit(&r, &c.json, || format!("consistent: {consistent}"))?;
            if !consistent {
                return Err(CommandError::Inconsistent("no denominator over the basis reproduces the series".into()));
            }
            Ok(())
        }
        Command::Expsum { poly, m, u, method, decay } => {
            let method: MethodChoice = method.parse()?;
            let units = u.as_deref().map(parse_units).transpose()?;
            let r = report::cmd_expsum(poly, c.p, *m, units, method, *decay, c.strict, &opts)?;
            emit(&r, &c.json, || format!("{} records", r.records.len()))
        }
        Command::Golden { case, n, t, s, check } => {
            let case: GoldenCase = case.parse().map_err(CommandError::Unsupported)?;
            let d = GoldenParams::default();
            let params = GoldenParams { n: rational(n, d.n)?, t: rational(t, d.t)?, s: rational(s, d.s)? };
            let r = report::cmd_golden(c.p, case, &params, c.k, *check, &opts)?;
            emit(&r, &c.json, || format!("{} expanded to t^{}", r.case, c.k))
        }
        Command::Selftest => {
            let r = report::cmd_selftest(&opts)?;
            for check in &r.checks {
                out(&format!("{} {}: {}", if check.pass { "PASS" } else { "FAIL" }, check.name, check.detail));
            }
            if c.json.is_some() {
                emit(&r, &c.json, String::new)?;
            }
            if !r.all_pass() {
                return Err(CommandError::Inconsistent("selftest failed".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("igusa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
