use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};

use schwarz_core::spaces::Space;
use schwarz_core::theorems::TheoremId;
use schwarz_lab::config::{ConfigError, RunConfig, SpaceSpec, TheoremSelection};
use schwarz_lab::run::run;

const CONFIG_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "schwarz-lab", version, about = "Seeded numerical checks of Schwarz-type bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a single tag on one pair of spaces.
    Check {
        #[arg(long)]
        theorem: String,
        /// Domain dimension; implied by `product:` norms.
        #[arg(long)]
        dim: Option<usize>,
        /// euclidean, sup, one, lp:P, product:N1,N2,..
        #[arg(long, default_value = "euclidean")]
        norm: String,
        /// Codomain norm; defaults to the domain's (real_euclidean for T3_8 tags).
        #[arg(long)]
        codom_norm: Option<String>,
        #[arg(long)]
        codom_dim: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

/// Builds a space from a CLI norm name and optional dimension.
fn cli_space(norm: &str, dim: Option<usize>) -> Result<Space<f64>, ConfigError> {
    let norm = norm.trim().to_ascii_lowercase();
    let need_dim = || dim.ok_or_else(|| invalid(format!("--dim is required for the {norm} norm")));
    let space = if let Some(blocks) = norm.strip_prefix("product:") {
        let blocks = blocks
            .split(',')
            .map(|b| b.trim().parse::<usize>().map_err(|_| invalid(format!("bad block size {b:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let space = Space::product(&blocks).map_err(|e| invalid(e.to_string()))?;
        if dim.is_some_and(|d| d != space.dim) {
            return Err(invalid(format!("--dim {} disagrees with {norm}", dim.unwrap())));
        }
        space
    } else if let Some(p) = norm.strip_prefix("lp:") {
        let p = p.parse::<f64>().map_err(|_| invalid(format!("bad exponent {p:?}")))?;
        Space::lp(need_dim()?, p).map_err(|e| invalid(e.to_string()))?
    } else {
        let d = need_dim()?;
        match norm.as_str() {
            "euclidean" => Space::euclidean(d),
            "sup" => Space::sup(d),
            "one" => Space::one(d),
            "real_euclidean" => Space::real_euclidean(d),
            _ => return Err(invalid(format!("unknown norm {norm:?}"))),
        }
    };
    if space.dim == 0 || space.dim > 64 {
        return Err(invalid(format!("dimension {} must lie in 1..=64", space.dim)));
    }
    Ok(space)
}

fn check_config(
    theorem: &str,
    dim: Option<usize>,
    norm: &str,
    codom_norm: Option<&str>,
    codom_dim: Option<usize>,
    samples: usize,
    seed: u64,
    tol: f64,
    degree: u32,
) -> Result<RunConfig, ConfigError> {
    let id = TheoremId::from_str(theorem).map_err(|e| invalid(e.to_string()))?;
    let dom = cli_space(norm, dim)?;
    let real_target = matches!(id, TheoremId::T3_8A | TheoremId::T3_8B);
    let codom = match (codom_norm, codom_dim) {
        (Some(n), d) => cli_space(n, d.or(dim))?,
        (None, Some(d)) if real_target => Space::real_euclidean(d),
        (None, None) if real_target => Space::real_euclidean(1),
        (None, Some(d)) => cli_space(norm, Some(d))?,
        (None, None) => dom.clone(),
    };
    let mut cfg = RunConfig::new(TheoremSelection::List(vec![id]));
    cfg.dom = Some(SpaceSpec::Space(dom));
    cfg.codom = Some(SpaceSpec::Space(codom));
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.tolerance = tol;
    cfg.degree = degree;
    cfg.validate()?;
    Ok(cfg)
}

fn write_report(text: &str, out: Option<&Path>) -> Result<(), ConfigError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<i32, ConfigError> {
    let cfg = match cli.command {
        Command::Run { config, out } => {
            let mut cfg = RunConfig::load(&config)?;
            if out.is_some() {
                cfg.output = out;
            }
            cfg
        }
        Command::Check { theorem, dim, norm, codom_norm, codom_dim, samples, seed, tol, degree, out } => {
            let mut cfg = check_config(&theorem, dim, &norm, codom_norm.as_deref(), codom_dim, samples, seed, tol, degree)?;
            cfg.output = out;
            cfg
        }
    };
    let start = Instant::now();
    let report = run(&cfg)?;
    write_report(&report.to_json(), cfg.output.as_deref())?;
    eprintln!(
        "schwarz-lab: {} checks, {} failures, {} unsatisfied, gates {} in {:.2?}",
        report.totals.checks,
        report.totals.failures,
        report.totals.unsatisfied,
        if report.gates_passed { "passed" } else { "FAILED" },
        start.elapsed()
    );
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(CONFIG_ERROR);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("schwarz-lab: {e}");
            ExitCode::from(CONFIG_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_from_the_command_line() {
        assert_eq!(cli_space("product:2,1", None).unwrap(), Space::product(&[2, 1]).unwrap());
        assert_eq!(cli_space("lp:3", Some(2)).unwrap(), Space::lp(2, 3.0).unwrap());
        assert!(cli_space("euclidean", None).is_err());
        assert!(cli_space("product:2,1", Some(2)).is_err());
        assert!(cli_space("frobenius", Some(2)).is_err());
    }

    #[test]
    fn real_codomain_for_real_valued_tags() {
        let cfg = check_config("T3_8A", Some(2), "euclidean", None, None, 10, 1, 1e-9, 3).unwrap();
        assert_eq!(cfg.codom, Some(SpaceSpec::Space(Space::real_euclidean(1))));
        let cfg = check_config("T2_4", Some(2), "sup", None, Some(3), 10, 1, 1e-9, 3).unwrap();
        assert_eq!(cfg.codom, Some(SpaceSpec::Space(Space::sup(3))));
    }
}
