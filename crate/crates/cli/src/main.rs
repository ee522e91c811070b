//! Command-line frontend: file I/O, subcommand dispatch, fixture corpus, and
//! machine-readable verification reports.
//!
//! Reports go to stdout as JSON; a human summary goes to stderr. Exit codes:
//! 0 all checks passed, 1 a check failed, 2 malformed input, violated
//! precondition, or exceeded budget.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliResult, Ctx};
use quantax_core::Tolerance;

#[derive(Parser)]
#[command(
    name = "quantax",
    about = "Numerical audits of quantum logic, state recovery, generalized measurement, operator algebras, and modular flow",
    version
)]
struct Cli {
    /// Absolute entrywise tolerance for equality checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Relative singular-value threshold for rank decisions
    #[arg(long, global = true, default_value_t = 1e-8)]
    rank_tol: f64,

    /// Suppress the human summary on stderr
    #[arg(long, global = true)]
    json_only: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a finite lattice from a JSON spec and audit its properties
    CheckLattice {
        /// Lattice JSON: {"elements": [...], "leq": [[x, y], ...], "ortho": {...}}
        file: PathBuf,
    },
    /// Close a family of subspaces under meet/join/ortho and audit the lattice
    SubspaceLattice {
        /// JSON array of subspaces ({"ambient_dim": d, "rows": .., "cols": .., "data": [...]})
        #[arg(long)]
        family: PathBuf,
        /// Closure size cap
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Cap on the number of enumerated subalgebras
        #[arg(long, default_value_t = 512)]
        max_subalgebras: usize,
    },
    /// Recover a density matrix from frame-function samples
    GleasonRecover {
        #[arg(long)]
        dim: usize,
        /// JSON array of {"projector": MatrixJSON, "value": x}
        #[arg(long)]
        samples: PathBuf,
    },
    /// Build the POVM induced by an ancilla measurement and verify it
    Povm {
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long)]
        ancilla_state: PathBuf,
        /// JSON array of projectors on the ancilla factor
        #[arg(long)]
        projectors: PathBuf,
        /// JSON array of system states for the probability-equivalence check
        #[arg(long)]
        test_states: Option<PathBuf>,
        /// Seed for sampling test states when none are supplied
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Matrix *-algebra audits
    Algebra {
        #[command(subcommand)]
        sub: AlgebraCmd,
    },
    /// Full modular audit of a faithful state
    Modular {
        #[arg(long)]
        state: PathBuf,
        /// Second faithful state; adds the inter-state cocycle check
        #[arg(long)]
        compare_state: Option<PathBuf>,
        /// Operator files; sampled from --seed when omitted
        #[arg(long, num_args = 0..)]
        ops: Vec<PathBuf>,
        /// Comma-separated list of times (default 0,0.5,1)
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        times: Vec<f64>,
        /// Seed for sampling operators when none are supplied
        #[arg(long)]
        seed: Option<u64>,
    },
    /// KMS boundary-condition residuals at a given inverse temperature
    Kms {
        #[arg(long)]
        state: PathBuf,
        /// Exactly two operator files A and B
        #[arg(long, num_args = 2)]
        ops: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Emit canonical fixtures (ghz, pauli, cbh-ef, o6, mo2, n5, chain2,
    /// cube2, cube3, swap, cnot, partial-swap, all)
    Fixtures {
        name: String,
        /// Write one JSON file per payload into this directory
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Commutant tower audit (dimensions, double commutant, center)
    Commutant {
        #[arg(long)]
        input: PathBuf,
    },
    /// Kinematic independence of two algebras
    Independence {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Joint-state extension with prescribed marginals
    Extend {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        rho1: PathBuf,
        #[arg(long)]
        rho2: PathBuf,
        #[arg(long, default_value_t = 4000)]
        max_iters: usize,
    },
}

fn run(cli: &Cli) -> CliResult<report::Report> {
    let ctx = Ctx {
        tol: Tolerance::new(cli.tol, cli.rank_tol)?,
    };
    match &cli.command {
        Cmd::CheckLattice { file } => commands::check_lattice(file),
        Cmd::SubspaceLattice {
            family,
            budget,
            max_subalgebras,
        } => commands::subspace_lattice(&ctx, family, *budget, *max_subalgebras),
        Cmd::GleasonRecover { dim, samples } => commands::gleason_recover(&ctx, *dim, samples),
        Cmd::Povm {
            unitary,
            ancilla_state,
            projectors,
            test_states,
            seed,
        } => commands::povm(
            &ctx,
            unitary,
            ancilla_state,
            projectors,
            test_states.as_deref(),
            *seed,
        ),
        Cmd::Algebra { sub } => match sub {
            AlgebraCmd::Commutant { input } => commands::algebra_commutant(&ctx, input),
            AlgebraCmd::Independence { a, b } => commands::algebra_independence(&ctx, a, b),
            AlgebraCmd::Extend {
                a,
                b,
                rho1,
                rho2,
                max_iters,
            } => commands::algebra_extend(&ctx, a, b, rho1, rho2, *max_iters),
        },
        Cmd::Modular {
            state,
            compare_state,
            ops,
            times,
            seed,
        } => commands::modular_audit(&ctx, state, compare_state.as_deref(), ops, times, *seed),
        Cmd::Kms {
            state,
            ops,
            times,
            beta,
        } => commands::kms(&ctx, state, &ops[0], &ops[1], times, *beta),
        Cmd::Fixtures { name, out_dir } => commands::fixtures_cmd(&ctx, name, out_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let json = serde_json::to_string_pretty(&report).expect("report serialization");
            println!("{json}");
            if !cli.json_only {
                eprint!("{}", report.human_summary());
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
