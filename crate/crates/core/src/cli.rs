//! The `recaft` command line.
//!
//! Every subcommand is a thin wrapper over library calls: parse the file,
//! build [`Phi`], call into [`crate::aft`], and print a [`Report`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::aft::{
    enumerate_stable_fixpoints, least_stable_fixpoint, EnumerateOptions, DEFAULT_ENUMERATION_CAP,
};
use crate::atoms::AtomSet;
use crate::corpus;
use crate::error::Error as EngineError;
use crate::kb::{KnowledgeBase, UnknownAtom};
use crate::lattice::Bi;
use crate::phi::{FilterStrategy, Phi, PhiConfig};
use crate::textio::{parse_kb, print_report, Format, ParseError, Report};

#[derive(Debug, Parser)]
#[command(
    name = "recaft",
    version,
    about = "Fixpoint reasoning for hybrid knowledge bases"
)]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Candidate sets for negative inference: none, empty, singletons,
    /// subsets:K or powerset.
    #[arg(long, global = true, default_value = "singletons")]
    pub filter: FilterStrategy,

    /// Use the baseline operator without the new blocking inferences.
    #[arg(long, global = true)]
    pub legacy: bool,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Least stable fixpoint with its outer iterations.
    Lfp { kb: PathBuf },
    /// Like `lfp`, with the inner iteration chains of every step.
    Trace { kb: PathBuf },
    /// Every stable fixpoint, each with its model verdicts.
    Enumerate {
        kb: PathBuf,
        /// Refuse knowledge bases with more rule atoms than this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        /// Also try pairs whose lower bound is not below the upper bound.
        #[arg(long)]
        all_pairs: bool,
    },
    /// Model verdicts for one approximation.
    Check {
        kb: PathBuf,
        /// Comma-separated atoms known true.
        #[arg(long = "T", allow_hyphen_values = true, default_value = "")]
        t: String,
        /// Comma-separated atoms possibly true.
        #[arg(long = "P", allow_hyphen_values = true, default_value = "")]
        p: String,
    },
    /// Recompute the bundled examples.
    Selftest,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing {path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("resolving atoms: {0}")]
    UnknownAtom(#[from] UnknownAtom),
    #[error("computing: {0}")]
    Engine(#[from] EngineError),
    #[error("selftest: {failed} check(s) failed")]
    SelftestFailed { failed: usize, report: String },
}

impl CliError {
    /// 1 for engine failures, 2 for bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(_) | CliError::SelftestFailed { .. } => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::UnknownAtom(_) => 2,
        }
    }
}

fn load(path: &PathBuf) -> Result<KnowledgeBase, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    parse_kb(&text).map_err(|source| CliError::Parse {
        path: path.clone(),
        source,
    })
}

fn atom_list(kb: &KnowledgeBase, list: &str) -> Result<AtomSet, UnknownAtom> {
    let names: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    kb.ka_set(&names)
}

impl Options {
    fn phi_config(&self) -> PhiConfig {
        PhiConfig {
            filter: self.filter,
            legacy_mode: self.legacy,
        }
    }

    fn output(&self) -> Format {
        match self.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

/// Runs one command and returns what it prints on success.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let opts = &cli.options;
    match &cli.command {
        Command::Lfp { kb } | Command::Trace { kb } => {
            let kb = load(kb)?;
            let phi = Phi::new(&kb, opts.phi_config());
            let (fix, trace) = least_stable_fixpoint(&phi)?;
            let verdict = phi.check_model(&fix.t, &fix.p);
            let report = Report::Lfp {
                trace,
                verdict,
                inner: matches!(cli.command, Command::Trace { .. }),
            };
            Ok(print_report(&kb, &report, opts.output()))
        }
        Command::Enumerate { kb, cap, all_pairs } => {
            let kb = load(kb)?;
            let phi = Phi::new(&kb, opts.phi_config());
            let found = enumerate_stable_fixpoints(
                &phi,
                EnumerateOptions {
                    cap: *cap,
                    include_inconsistent: *all_pairs,
                },
            )?;
            let fixpoints = found
                .into_iter()
                .map(|ap| {
                    let v = phi.check_model(&ap.first, &ap.second);
                    (ap, v)
                })
                .collect();
            Ok(print_report(
                &kb,
                &Report::Enumerate { fixpoints },
                opts.output(),
            ))
        }
        Command::Check { kb, t, p } => {
            let kb = load(kb)?;
            let approximation = Bi::new(atom_list(&kb, t)?, atom_list(&kb, p)?);
            let phi = Phi::new(&kb, opts.phi_config());
            let verdict = phi.check_model(&approximation.first, &approximation.second);
            let report = Report::Check {
                approximation,
                verdict,
            };
            Ok(print_report(&kb, &report, opts.output()))
        }
        Command::Selftest => {
            let checks = corpus::selftest();
            let mut out = String::new();
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::SelftestFailed {
                    failed,
                    report: out,
                });
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("recaft").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_parse() {
        let cli = parse(&[
            "--filter",
            "subsets:3",
            "check",
            "k.kb",
            "--T=a,b",
            "--P=a,b,c",
        ]);
        assert_eq!(cli.options.filter, FilterStrategy::BoundedSubsets(3));
        match cli.command {
            Command::Check { t, p, .. } => {
                assert_eq!(t, "a,b");
                assert_eq!(p, "a,b,c");
            }
            other => panic!("{other:?}"),
        }
        let cli = parse(&["lfp", "k.kb", "--legacy", "--format", "json"]);
        assert!(cli.options.legacy);
        assert_eq!(cli.options.format, OutputFormat::Json);
        assert!(Cli::try_parse_from(["recaft", "--filter", "subsets:-1", "selftest"]).is_err());
    }

    #[test]
    fn atom_lists() {
        let kb = corpus::golden("ex1");
        assert_eq!(atom_list(&kb, "").unwrap(), AtomSet::new());
        assert_eq!(atom_list(&kb, "a, b").unwrap().len(), 2);
        assert_eq!(atom_list(&kb, "a,zz"), Err(UnknownAtom("zz".into())));
    }

    #[test]
    fn exit_codes() {
        let missing = parse(&["lfp", "/nonexistent/file.kb"]);
        assert_eq!(run(&missing).unwrap_err().exit_code(), 2);
        assert_eq!(
            CliError::Engine(EngineError::TooLarge { atoms: 13, cap: 12 }).exit_code(),
            1
        );
    }

    #[test]
    fn selftest_runs() {
        let out = run(&parse(&["selftest"])).unwrap();
        assert!(out.lines().all(|l| l.starts_with("PASS")));
    }
}
