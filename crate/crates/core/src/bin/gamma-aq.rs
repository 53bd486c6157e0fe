use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gamma_aq::cache::Cache;
use gamma_aq::commands::{
    cmd_cache_clear, cmd_cache_ls, cmd_classical, cmd_pi0, cmd_piy, cmd_verify, error_report, PiyArgs, WeightArg,
};
use gamma_aq::problem::parse_problem;
use gamma_aq::report::Report;
use gamma_aq::verify::Suite;

#[derive(Parser)]
#[command(name = "gamma-aq", version, about = "Relative Γ-module homology and low-degree André-Quillen checks")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Largest dimension a cover stage may reach.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// π₀ of the functor against Kähler differentials.
    Pi0 {
        file: PathBuf,
        #[arg(long = "trunc", short = 'N')]
        trunc: Option<usize>,
    },
    /// Relative derived functors π^𝒴_i up to a degree.
    Piy(PiyCli),
    /// Classical D₀ or D₁ from the presentation.
    Classical {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Run verification suites.
    Verify {
        suite: Option<Suite>,
        #[arg(long)]
        all: bool,
    },
    /// Inspect or empty the resolution cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args)]
struct PiyCli {
    file: PathBuf,
    #[arg(long, short = 'd')]
    degree: Option<usize>,
    #[arg(long = "trunc", short = 'N')]
    trunc: Option<usize>,
    #[arg(long, short = 'B')]
    bound: Option<usize>,
    /// Cover by representables instead of Γ(λ).
    #[arg(long)]
    absolute: bool,
    /// Contract with `t` or `lambda^n` instead of taking π₀.
    #[arg(long)]
    weight: Option<WeightArg>,
    /// Leave the empty partition out of the cover family.
    #[arg(long)]
    no_empty_partition: bool,
    /// Use every orbit-basis vector as a generator (slower, for cross-checks).
    #[arg(long)]
    basis_covers: bool,
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum CacheAction {
    Ls,
    Clear,
}

fn run(cli: &Cli) -> Report {
    let attempt = match &cli.command {
        Command::Pi0 { file, trunc } => parse_problem(file).and_then(|p| cmd_pi0(&p, *trunc)),
        Command::Classical { file, degree } => parse_problem(file).and_then(|p| cmd_classical(&p, *degree)),
        Command::Piy(a) => {
            let args = PiyArgs {
                degree: a.degree,
                trunc: a.trunc,
                bound: a.bound,
                absolute: a.absolute,
                weight: a.weight,
                no_empty_partition: a.no_empty_partition,
                cap: cli.cap,
                basis_strategy: a.basis_covers,
            };
            let cache = (!a.no_cache).then(Cache::from_env);
            parse_problem(&a.file).and_then(|p| cmd_piy(&p, &args, cache.as_ref()))
        }
        Command::Verify { suite, all } => {
            let suites = match (suite, all) {
                (Some(s), false) => vec![*s],
                _ => Suite::ALL.to_vec(),
            };
            Ok(cmd_verify(&suites))
        }
        Command::Cache { action } => {
            let cache = Cache::from_env();
            match action {
                CacheAction::Ls => cmd_cache_ls(&cache),
                CacheAction::Clear => cmd_cache_clear(&cache),
            }
        }
    };
    let name = match &cli.command {
        Command::Pi0 { .. } => "pi0",
        Command::Piy(_) => "piy",
        Command::Classical { .. } => "classical",
        Command::Verify { .. } => "verify",
        Command::Cache { .. } => "cache",
    };
    attempt.unwrap_or_else(|e| error_report(name, &e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    match cli.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("gamma-aq: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.failed() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
