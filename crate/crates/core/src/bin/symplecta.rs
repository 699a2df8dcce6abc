use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use symplecta::verifier::{self, CheckSpec, Mode, Params, Status, DEFAULT_SEED};
use symplecta::{
    enumerate_base_subsets, enumerate_subspaces, Budget, Error, HkFamily, Prime, SymplecticSpace,
};

/// Exhaustive and seeded checks on symplectic spaces over GF(p).
#[derive(Parser)]
#[command(name = "symplecta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a finite object and print it as JSON.
    Enumerate(EnumerateArgs),
    /// Run one registered check.
    Verify(VerifyArgs),
    /// Run several checks and print their reports.
    Suite(SuiteArgs),
    /// List the registered checks.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Object {
    /// The members of H_k.
    Family,
    /// Every decomposition into orthogonal hyperbolic lines.
    BaseSubsets,
    /// |Sp(2n, p)| and |GSp(2n, p)|.
    GroupOrder,
    /// The d-dimensional subspaces of GF(p)^m.
    Subspaces,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(value_enum)]
    object: Object,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Ambient dimension for `subspaces`.
    #[arg(long)]
    m: Option<usize>,
    /// Subspace dimension for `subspaces`.
    #[arg(long)]
    d: Option<usize>,
    /// Print only the count.
    #[arg(long)]
    count: bool,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    check: String,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Run the default suite (the default when no names are given).
    #[arg(long, conflicts_with = "names")]
    all: bool,
    #[arg(long, num_args = 1..)]
    names: Vec<String>,
    /// Also write the reports to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    budget: Option<u64>,
}

fn budget(flag: Option<u64>) -> Budget {
    flag.map(Budget::new).unwrap_or_else(Budget::from_env)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str) -> io::Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    out.flush()
}

fn run(command: Command) -> Result<u8, Box<dyn std::error::Error>> {
    match command {
        Command::Enumerate(args) => {
            enumerate(&args)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let spec = CheckSpec::new(args.check)
                .with_params(Params {
                    p: args.p,
                    n: args.n,
                    k: args.k,
                    m: args.m,
                    samples: args.samples,
                    mode: args.mode.map(|m| match m {
                        ModeArg::Exhaustive => Mode::Exhaustive,
                        ModeArg::Sampled => Mode::Sampled,
                    }),
                })
                .with_seed(args.seed)
                .with_budget(budget(args.budget));
            let report = verifier::run_check(&spec)?;
            emit(&report.to_json())?;
            Ok(u8::from(report.status == Status::Fail))
        }
        Command::Suite(args) => {
            let names = (!args.all && !args.names.is_empty()).then_some(args.names.as_slice());
            let outcome = verifier::run_suite(names, args.seed, budget(args.budget))?;
            let json = outcome.to_json();
            if let Some(path) = &args.report {
                std::fs::write(path, format!("{json}\n"))?;
            }
            for r in outcome.refused() {
                eprintln!("refused: {}", r.check);
            }
            emit(&json)?;
            Ok(outcome.exit_code() as u8)
        }
        Command::List => {
            let lines: Vec<String> = verifier::registry()
                .iter()
                .map(|info| format!("{:<20} {}", info.name, info.summary))
                .collect();
            emit(&lines.join("\n"))?;
            Ok(0)
        }
    }
}

fn enumerate(args: &EnumerateArgs) -> Result<(), Box<dyn std::error::Error>> {
    let prime = Prime::new(args.p)?;
    let budget = budget(args.budget);
    let value = match args.object {
        Object::Family => {
            let family = HkFamily::build(&SymplecticSpace::new(prime, args.n)?, args.k, budget)?;
            if args.count {
                json!({ "count": family.len() })
            } else {
                json!({ "count": family.len(), "members": family })
            }
        }
        Object::BaseSubsets => {
            let bases = enumerate_base_subsets(&SymplecticSpace::new(prime, args.n)?, budget)?;
            if args.count {
                json!({ "count": bases.len() })
            } else {
                json!({ "count": bases.len(), "base_subsets": bases })
            }
        }
        Object::GroupOrder => {
            let space = SymplecticSpace::new(prime, args.n)?;
            json!({
                "sp": space.sp_order().to_string(),
                "gsp": space.gsp_order().to_string(),
            })
        }
        Object::Subspaces => {
            let m = args.m.unwrap_or(2 * args.n);
            let d = args
                .d
                .ok_or_else(|| Error::InvalidArgument("subspaces needs --d".into()))?;
            let subs: Vec<_> = enumerate_subspaces(prime, m, d, budget)?.collect();
            if args.count {
                json!({ "count": subs.len() })
            } else {
                let bases: Vec<_> = subs.iter().map(|s| s.basis().to_rows()).collect();
                json!({ "count": subs.len(), "subspaces": bases })
            }
        }
    };
    emit(&serde_json::to_string_pretty(&value)?)?;
    Ok(())
}
