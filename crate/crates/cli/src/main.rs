//! `hyperlap`: Laplace transforms of hyperfunctions from the command line.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 configuration or input
//! error, 3 numeric failure, 4 solvability failure.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperlap::Error;
use serde_json::Value;

use config::{JobConfig, OneOrMany, ProfileConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Lib(e) => match e {
                Error::SolvabilityFail(_) | Error::EmptyHpc => 4,
                Error::NoConvergence(_)
                | Error::GrowthCertificateFail(_)
                | Error::OutOfRegion(_)
                | Error::PoleOnChain(_)
                | Error::MarginViolation { .. }
                | Error::ConvergenceFail(_)
                | Error::GrowthMismatch(_)
                | Error::SupportLeak(_)
                | Error::MissingDampingCertificate
                | Error::Domain(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hyperlap", version, about = "Laplace transforms of hyperfunctions")]
struct Cli {
    /// JSON job file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Tolerance (default: $HYPERLAP_TOL, else 1e-6).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Write the CSV sample dump here.
    #[arg(long, global = true)]
    csv: Option<String>,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Args, Debug, Default)]
struct ChainArgs {
    /// Support set: "[a,inf)", "(-inf,b]", "[a,b]" or {"vertex":..,"generators":..}.
    #[arg(long = "K", allow_hyphen_values = true)]
    k: Option<String>,
    /// Chain profile "c0,c1,p" for ψ(t) = c0 + c1 (1+t)^p.
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Chain direction ξ₀, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    xi0: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate 𝓛(u) at points ζ.
    Transform {
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        /// A point, coordinates separated by commas ("1+i,2"); repeatable.
        #[arg(long, allow_hyphen_values = true)]
        zeta: Vec<String>,
        /// Ray-loop standoff.
        #[arg(long)]
        eps: Option<f64>,
        /// Skip the growth certificate.
        #[arg(long)]
        no_growth: bool,
    },
    /// Invert a function of ζ to a hyperfunction literal.
    Inverse {
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// 𝓛 after I𝓛 (given --f) or I𝓛 after 𝓛 (given --u).
    Roundtrip {
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        zeta: Vec<String>,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Solve P(D)u = f with supp u in K.
    Solve {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long = "K", allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
    },
    /// Characteristic directions at infinity of a system of operators.
    Char {
        /// Operator; repeat for a system.
        #[arg(long = "P", allow_hyphen_values = true)]
        p: Vec<String>,
        #[arg(long)]
        mesh: Option<f64>,
        #[arg(long)]
        char_tol: Option<f64>,
        /// Also check solvability of a single operator on HPC of K.
        #[arg(long = "K", allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Pair u with Gaussian test densities.
    Pair {
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        /// "center,width", or "c1,w1;c2,w2" in two variables; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        density: Vec<String>,
    },
    /// Run verification suites (all by default).
    Verify {
        suites: Vec<String>,
        #[arg(long)]
        list: bool,
    },
}

fn text(s: Option<String>) -> Option<Value> {
    s.map(Value::String)
}

fn nonempty(v: Vec<String>) -> Option<Vec<String>> {
    if v.is_empty() {
        None
    } else {
        Some(v)
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Config(format!("{what}: `{x}` is not a number"))))
        .collect()
}

fn parse_psi(s: Option<String>) -> Result<Option<ProfileConfig>, CliError> {
    let Some(s) = s else { return Ok(None) };
    match parse_list(&s, "psi")?[..] {
        [c0, c1, p] => Ok(Some(ProfileConfig { c0, c1, p })),
        _ => Err(CliError::Config(format!("psi needs three numbers c0,c1,p, got `{s}`"))),
    }
}

fn chain_fields(cfg: &mut JobConfig, chain: ChainArgs) -> Result<(), CliError> {
    cfg.k = text(chain.k);
    cfg.psi = parse_psi(chain.psi)?;
    cfg.xi0 = chain.xi0.map(|s| parse_list(&s, "xi0")).transpose()?;
    Ok(())
}

/// Flags as a partial config, plus whether --list was given.
fn flags(cli: Cli) -> Result<(JobConfig, Option<String>, bool), CliError> {
    let mut cfg = JobConfig { tol: cli.tol, out: cli.out, csv: cli.csv, ..Default::default() };
    let mut list = false;
    if let Some(cmd) = cli.cmd {
        let name = match cmd {
            Cmd::Transform { u, zeta, eps, no_growth } => {
                cfg.u = text(u);
                cfg.zeta = nonempty(zeta);
                cfg.eps = eps;
                cfg.growth = no_growth.then_some(false);
                "transform"
            }
            Cmd::Inverse { f, chain } => {
                cfg.f = text(f);
                chain_fields(&mut cfg, chain)?;
                "inverse"
            }
            Cmd::Roundtrip { f, u, zeta, chain } => {
                cfg.f = text(f);
                cfg.u = text(u);
                cfg.zeta = nonempty(zeta);
                chain_fields(&mut cfg, chain)?;
                "roundtrip"
            }
            Cmd::Solve { p, f, k, psi } => {
                cfg.p = p.map(OneOrMany::One);
                cfg.f = text(f);
                cfg.k = text(k);
                cfg.psi = parse_psi(psi)?;
                "solve"
            }
            Cmd::Char { p, mesh, char_tol, k } => {
                cfg.p = nonempty(p).map(OneOrMany::Many);
                cfg.mesh = mesh;
                cfg.char_tol = char_tol;
                cfg.k = text(k);
                "char"
            }
            Cmd::Pair { u, density } => {
                cfg.u = text(u);
                cfg.densities = nonempty(density);
                "pair"
            }
            Cmd::Verify { suites, list: l } => {
                cfg.suites = nonempty(suites);
                list = l;
                "verify"
            }
        };
        cfg.command = Some(name.into());
    }
    Ok((cfg, cli.config, list))
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let tol_from_flag = cli.tol.is_some();
    let (top, config_path, list) = flags(cli)?;
    let base = match &config_path {
        Some(p) => JobConfig::load(p)?,
        None => JobConfig::default(),
    };
    if let (Some(a), Some(b)) = (&base.command, &top.command) {
        if a != b {
            return Err(CliError::Config(format!("config command `{a}` conflicts with subcommand `{b}`")));
        }
    }
    let cfg = base.overlay(top).finish(tol_from_flag)?;
    if list {
        for s in hyperlap::verify::SUITES {
            println!("{}\t{}\t{}", s.name, s.criterion, s.summary);
        }
        return Ok(0);
    }
    let outcome = commands::run(cfg)?;
    output::emit(&outcome)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
