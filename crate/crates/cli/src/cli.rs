//! `qretro` argument parsing and subcommand dispatch.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qretro_core::checks::run_all;
use qretro_core::equivalence::{equivalent, oracle_equivalent, OracleConfig, DEFAULT_EQUIVALENCE_TOL, DEFAULT_ORACLE_SEED};
use qretro_core::retrodiction::{petz_extended_with, RetrodictOptions};
use qretro_core::scenarios::{fig1, table1, ChannelSpec, DEFAULT_FIG1_SAMPLES, TABLE1_TOL};
use qretro_core::{Belief, BuiltinBelief, DensityOperator, QuantumChannel};
use serde::Serialize;

use crate::curves;
use crate::error::{CliError, ExitCode};
use crate::json::{load_belief, load_channel, load_state};
use crate::report::{EquivReport, RetrodictInputs, RetrodictReport, Table1Report, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "qretro", version, about = "Quantum retrodiction with extended prior beliefs")]
pub struct Cli {
    /// Pass/fail tolerance (Frobenius norm).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized checks and the channel oracle.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Updated beliefs of four priors under z and x measurements.
    Table1,
    /// Depolarizing-error recovery curves on the x-z Bloch circle.
    Fig1 {
        #[arg(long, default_value_t = DEFAULT_FIG1_SAMPLES)]
        samples: usize,
    },
    /// Apply the retrodiction map to one piece of evidence.
    Retrodict {
        /// Built-in name (beta-s, beta-1, beta-2, beta-xyz, beta-sic) or JSON file.
        #[arg(long)]
        belief: String,
        /// identity[:d], measure-z, measure-x, depolarize:p, or JSON file.
        #[arg(long)]
        channel: String,
        /// Outcome label (0, 1, +, -, ...) or JSON density-matrix file.
        #[arg(long)]
        evidence: String,
        /// Drop evidence weight outside the predicted support instead of failing.
        #[arg(long)]
        project_support: bool,
        /// Rescale the update to unit trace after projection.
        #[arg(long)]
        renormalize: bool,
        /// Also print the updated joint state on S ⊗ R.
        #[arg(long)]
        joint: bool,
    },
    /// Decide whether two beliefs retrodict identically.
    Equiv {
        b1: String,
        b2: String,
        /// Cross-check with the brute-force channel oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 20)]
        random_channels: usize,
    },
    /// Run the seeded invariant suite.
    Verify,
}

/// Rendered report plus the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub exit: ExitCode,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self {
            body,
            exit: ExitCode::Success,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Unsupported(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

pub fn resolve_belief(arg: &str) -> Result<Belief, CliError> {
    if let Ok(b) = arg.parse::<BuiltinBelief>() {
        return Ok(b.belief());
    }
    let path = Path::new(arg);
    if path.exists() {
        return load_belief(path);
    }
    Err(CliError::parse(
        "belief",
        format!("{arg:?} is neither a built-in belief nor an existing file"),
    ))
}

pub fn resolve_channel(arg: &str) -> Result<(QuantumChannel, Option<ChannelSpec>), CliError> {
    if let Ok(spec) = arg.parse::<ChannelSpec>() {
        let ch = spec.channel().map_err(|e| CliError::engine("channel", e))?;
        return Ok((ch, Some(spec)));
    }
    let path = Path::new(arg);
    if path.exists() {
        return Ok((load_channel(path)?, None));
    }
    Err(CliError::parse(
        "channel",
        format!("{arg:?} is neither a built-in channel nor an existing file"),
    ))
}

pub fn resolve_evidence(arg: &str, spec: Option<ChannelSpec>) -> Result<DensityOperator, CliError> {
    let label_err = match spec.map(|s| s.evidence(arg)) {
        Some(Ok(rho)) => return Ok(rho),
        Some(Err(e)) => Some(e),
        None => None,
    };
    let path = Path::new(arg);
    if path.exists() {
        return load_state(path);
    }
    Err(CliError::parse(
        "evidence",
        match label_err {
            Some(e) => format!("{e}, and no such file"),
            None => format!("no such file {arg:?} (labels need a built-in channel)"),
        },
    ))
}

fn cmd_table1(tol: f64, format: Format) -> Result<Outcome, CliError> {
    let t = table1().map_err(|e| CliError::engine("table1", e))?;
    let report = Table1Report::new(&t, tol);
    let body = match format {
        Format::Json => to_json(&report),
        Format::Text => {
            let mut s = String::from("belief    channel    outcome  deviation\n");
            for c in &report.cells {
                let _ = writeln!(s, "{:<9} {:<10} {:<8} {:.3e}", c.belief, c.channel, c.outcome, c.deviation);
            }
            let _ = writeln!(
                s,
                "max deviation {:.3e} (tol {:.0e}): {}",
                report.max_deviation,
                tol,
                if report.passed { "PASS" } else { "FAIL" }
            );
            s
        }
        f => return Err(unsupported("table1", f)),
    };
    Ok(Outcome {
        body,
        exit: if report.passed { ExitCode::Success } else { ExitCode::Numerical },
    })
}

fn cmd_fig1(samples: usize, format: Format) -> Result<Outcome, CliError> {
    let curves = fig1(samples).map_err(|e| CliError::engine("fig1", e))?;
    let body = match format {
        Format::Csv => curves::to_csv(&curves),
        Format::Json => to_json(&curves::to_json_value(&curves)),
        Format::Svg => curves::to_svg(&curves),
        f => return Err(unsupported("fig1", f)),
    };
    Ok(Outcome::ok(body))
}

struct RetrodictArgs<'a> {
    belief: &'a str,
    channel: &'a str,
    evidence: &'a str,
    project_support: bool,
    renormalize: bool,
    joint: bool,
}

fn cmd_retrodict(a: RetrodictArgs<'_>, format: Format) -> Result<Outcome, CliError> {
    if format != Format::Json {
        return Err(unsupported("retrodict", format));
    }
    let belief = resolve_belief(a.belief)?;
    let (channel, spec) = resolve_channel(a.channel)?;
    let sigma = resolve_evidence(a.evidence, spec)?;
    let opts = RetrodictOptions {
        project_support: a.project_support,
        renormalize: a.renormalize,
    };
    let result = petz_extended_with(&channel, &belief, &sigma, opts).map_err(|e| CliError::engine("retrodict", e))?;
    let inputs = RetrodictInputs {
        belief: a.belief.into(),
        channel: a.channel.into(),
        evidence: a.evidence.into(),
        project_support: a.project_support,
        renormalize: a.renormalize,
    };
    Ok(Outcome::ok(to_json(&RetrodictReport::new(inputs, &result, a.joint))))
}

fn cmd_equiv(b1: &str, b2: &str, oracle: Option<OracleConfig>, tol: f64, format: Format) -> Result<Outcome, CliError> {
    if format != Format::Json {
        return Err(unsupported("equiv", format));
    }
    let (x, y) = (resolve_belief(b1)?, resolve_belief(b2)?);
    let r = equivalent(&x, &y, tol).map_err(|e| CliError::engine("equiv", e))?;
    let o = match oracle {
        Some(cfg) => Some(oracle_equivalent(&x, &y, &cfg).map_err(|e| CliError::engine("oracle", e))?),
        None => None,
    };
    let report = EquivReport::new(&r, tol, o.as_ref());
    if let Some(o) = o {
        if o.equivalent != r.equivalent {
            return Err(CliError::OracleDisagreement {
                signature_distance: r.signature_distance,
                oracle_deviation: o.max_deviation,
            });
        }
    }
    Ok(Outcome::ok(to_json(&report)))
}

fn cmd_verify(seed: u64, format: Format) -> Result<Outcome, CliError> {
    let checks = run_all(seed);
    let passed = checks.iter().all(|c| c.passed);
    let body = match format {
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let _ = writeln!(s, "seed {seed}: {}", if passed { "all checks passed" } else { "FAILURES" });
            s
        }
        Format::Json => to_json(&VerifyReport {
            seed,
            passed,
            checks: checks.iter().map(Into::into).collect(),
        }),
        f => return Err(unsupported("verify", f)),
    };
    Ok(Outcome {
        body,
        exit: if passed { ExitCode::Success } else { ExitCode::Numerical },
    })
}

/// Runs a parsed command without touching stdout or the filesystem.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::parse("--tol", "must be a non-negative number"));
        }
    }
    match &cli.command {
        Command::Table1 => cmd_table1(cli.tol.unwrap_or(TABLE1_TOL), cli.format.unwrap_or(Format::Text)),
        Command::Fig1 { samples } => cmd_fig1(*samples, cli.format.unwrap_or(Format::Csv)),
        Command::Retrodict {
            belief,
            channel,
            evidence,
            project_support,
            renormalize,
            joint,
        } => cmd_retrodict(
            RetrodictArgs {
                belief,
                channel,
                evidence,
                project_support: *project_support,
                renormalize: *renormalize,
                joint: *joint,
            },
            cli.format.unwrap_or(Format::Json),
        ),
        Command::Equiv {
            b1,
            b2,
            oracle,
            random_channels,
        } => {
            let cfg = oracle.then(|| OracleConfig {
                seed: cli.seed.unwrap_or(DEFAULT_ORACLE_SEED),
                random_channels: *random_channels,
                ..OracleConfig::default()
            });
            cmd_equiv(b1, b2, cfg, cli.tol.unwrap_or(DEFAULT_EQUIVALENCE_TOL), cli.format.unwrap_or(Format::Json))
        }
        Command::Verify => cmd_verify(cli.seed.unwrap_or(0), cli.format.unwrap_or(Format::Text)),
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(CliError::Output)
        }
    }
}

/// Parses, runs and writes; errors go to stderr.
pub fn main_with(cli: Cli) -> ExitCode {
    let result = run(&cli).and_then(|o| emit(cli.out.as_deref(), &o.body).map(|()| o.exit));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qretro: {e}");
            e.exit_code()
        }
    }
}
