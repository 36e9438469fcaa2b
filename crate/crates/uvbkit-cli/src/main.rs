//! Command-line front end for the uvbkit library.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad flags, parse errors,
//! exceeded budgets), 2 when a computation succeeds but reports a
//! mathematical deviation or flagged finding, so CI can tell bugs and
//! findings apart.

mod commands;
mod render;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Output format; text is for humans, json is the contract.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SearchOpts {
    /// Worker threads for partitionable searches. Output is byte-identical
    /// for every worker count.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Search node budget; exceeding it is a hard failure with no partial
    /// results. Defaults to UVBKIT_BUDGET or a built-in cap.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Include wall-time fields in reports (off by default so reruns are
    /// byte-identical).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "uvbkit",
    version,
    about = "Exact computation in the unrestricted virtual braid groups",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rewrite a generator word to its normal form (pure part + permutation).
    Reduce {
        #[arg(long)]
        n: usize,
        /// Word in the grammar `s<i>`, `r<i>`, `l<i>,<j>` with optional `^e`.
        word: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Decide equality of two words in UVB_n.
    Eq {
        #[arg(long)]
        n: usize,
        left: String,
        right: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Apply the index action of a permutation to a pure word.
    Act {
        #[arg(long)]
        n: usize,
        /// Permutation as one-line `[2,1,3]` or cycles `(1 2)(3 4)`.
        #[arg(long)]
        perm: String,
        word: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Abelianize a word: σ exponent sum and ρ parity, plus the pure vector
    /// when the element lies in UVP_n.
    Abelianize {
        #[arg(long)]
        n: usize,
        word: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Expand a pure generator λ_{i,j} into a σ/ρ word.
    Expand {
        #[arg(long)]
        n: usize,
        /// A single token `l<i>,<j>`.
        token: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Enumerate homomorphisms into a finite group, with optional dedup and
    /// classification.
    Census {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        n: usize,
        /// Target spec: `s<m>`, `z<m>`, or products like `z2xz2`.
        #[arg(long)]
        target: Option<String>,
        /// Load the target from a multiplication-table file instead.
        #[arg(long)]
        target_file: Option<std::path::PathBuf>,
        /// Group the results by simultaneous conjugation.
        #[arg(long)]
        dedup: bool,
        /// Classification to run: `theorem-a` or `theorem-b`.
        #[arg(long)]
        classify: Option<String>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Run a named verification suite.
    Verify {
        /// One of: relations, theorem-a, tss, autos, gamma-outer, hbar.
        suite: String,
        #[arg(long)]
        n: usize,
        /// Presentation for the relations suite: uvb (default) or wb.
        #[arg(long)]
        presentation: Option<String>,
        /// Relator engine: normal-form (UVB only) or syntactic.
        #[arg(long)]
        engine: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Endomorphism spec operations.
    Aut {
        #[command(subcommand)]
        action: AutAction,
    },
    /// Search for the exceptional outer automorphism of S_6 and verify it.
    S6Outer {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build and analyze the totally symmetric sets A_i.
    Tss {
        #[arg(long)]
        n: usize,
        /// Analyze one set only.
        #[arg(long)]
        i: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Debug, Subcommand)]
enum AutAction {
    /// Apply a spec-file endomorphism to an element.
    Apply {
        /// JSON spec: {"target": "uvp|uvb|wb", "n": N, "images": {token: word}}.
        #[arg(long)]
        spec: std::path::PathBuf,
        /// The element, as a word in the grammar.
        #[arg(long)]
        elem: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// A domain error: single machine-parsable line on stderr, exit 1.
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

/// Successful command output plus whether a flagged mathematical finding
/// should surface as exit code 2.
pub struct CmdOutput {
    pub stdout: String,
    pub finding: bool,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                std::process::exit(0);
            }
            eprintln!("error[EUSAGE]: {}", err.render().to_string().lines().next().unwrap_or(""));
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(output) => {
            print!("{}", output.stdout);
            std::process::exit(if output.finding { 2 } else { 0 });
        }
        Err(err) => {
            eprintln!("error[{}]: {}", err.code, err.message);
            std::process::exit(1);
        }
    }
}

fn check_n(n: usize) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::new("EDOMAIN", format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<CmdOutput, CliError> {
    match cli.command {
        Command::Reduce { n, word, common } => {
            check_n(n)?;
            commands::reduce(n, &word, common.format)
        }
        Command::Eq { n, left, right, common } => {
            check_n(n)?;
            commands::eq(n, &left, &right, common.format)
        }
        Command::Act { n, perm, word, common } => {
            check_n(n)?;
            commands::act(n, &perm, &word, common.format)
        }
        Command::Abelianize { n, word, common } => {
            check_n(n)?;
            commands::abelianize(n, &word, common.format)
        }
        Command::Expand { n, token, common } => {
            check_n(n)?;
            commands::expand(n, &token, common.format)
        }
        Command::Census {
            presentation,
            n,
            target,
            target_file,
            dedup,
            classify,
            out,
            common,
            search,
        } => {
            check_n(n)?;
            commands::census(commands::CensusArgs {
                presentation,
                n,
                target,
                target_file,
                dedup,
                classify,
                out,
                format: common.format,
                search,
            })
        }
        Command::Verify { suite, n, presentation, engine, common, search } => {
            check_n(n)?;
            commands::verify(
                &suite,
                n,
                presentation.as_deref(),
                engine.as_deref(),
                common.format,
                &search,
            )
        }
        Command::Aut { action } => match action {
            AutAction::Apply { spec, elem, common } => {
                commands::aut_apply(&spec, &elem, common.format)
            }
        },
        Command::S6Outer { common } => commands::s6_outer(common.format),
        Command::Tss { n, i, common } => {
            check_n(n)?;
            commands::tss(n, i, common.format)
        }
    }
}

impl SearchOpts {
    /// Budget precedence: flag, then UVBKIT_BUDGET, then the default.
    pub fn resolve_budget(&self) -> Result<u64, CliError> {
        if let Some(b) = self.budget {
            if b == 0 {
                return Err(CliError::new("EDOMAIN", "budget must be positive"));
            }
            return Ok(b);
        }
        match std::env::var("UVBKIT_BUDGET") {
            Ok(text) => text
                .parse::<u64>()
                .ok()
                .filter(|&b| b > 0)
                .ok_or_else(|| {
                    CliError::new("EDOMAIN", "UVBKIT_BUDGET must be a positive integer")
                }),
            Err(_) => Ok(uvbkit::census::DEFAULT_NODE_BUDGET),
        }
    }

    pub fn resolve_workers(&self) -> Result<usize, CliError> {
        if self.workers == 0 {
            return Err(CliError::new("EDOMAIN", "workers must be at least 1"));
        }
        Ok(self.workers)
    }
}
