use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use chevcheck::report::{run_suite, RunConfig, Suite};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Machine,
}

/// Exact checks of the rank-2 one-parameter subgroup classification.
/// Every flag can also be set through the matching CHEVCHECK_* variable;
/// flags win.
#[derive(Parser, Debug)]
#[command(name = "chevcheck", version)]
struct Args {
    /// Primes to instantiate at
    #[arg(long, env = "CHEVCHECK_PRIMES", value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
    /// Largest exponent f in q = p^f
    #[arg(long, env = "CHEVCHECK_F_MAX", default_value_t = 2)]
    f_max: u32,
    /// Bound on q for the search and the polynomial lemma (default p^2)
    #[arg(long, env = "CHEVCHECK_Q_MAX")]
    q_max: Option<u64>,
    /// Suite to run; repeat for several (default: all)
    #[arg(long = "suite", env = "CHEVCHECK_SUITE", value_delimiter = ',')]
    suites: Vec<String>,
    /// Wall-clock cap per suite
    #[arg(long, env = "CHEVCHECK_BUDGET_SECONDS", default_value_t = 1800)]
    budget_seconds: u64,
    /// Step cap for the exhaustive search and span saturation
    #[arg(long, env = "CHEVCHECK_STEP_BUDGET", default_value_t = 50_000_000)]
    step_budget: u64,
    /// Largest z in the polynomial lemma scans
    #[arg(long, env = "CHEVCHECK_Z_MAX", default_value_t = 200)]
    z_max: u64,
    /// Write the report here instead of stdout
    #[arg(long, env = "CHEVCHECK_OUT")]
    out: Option<PathBuf>,
    #[arg(long, env = "CHEVCHECK_FORMAT", value_enum, default_value = "text")]
    format: Format,
}

fn config(args: &Args) -> Result<RunConfig, chevcheck::Error> {
    let suites: BTreeSet<Suite> = if args.suites.is_empty() {
        Suite::ALL.into_iter().collect()
    } else {
        args.suites.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    Ok(RunConfig {
        primes: args.primes.clone(),
        f_max: args.f_max,
        q_max: args.q_max,
        suites,
        budget_seconds: args.budget_seconds,
        step_budget: args.step_budget,
        z_max: args.z_max,
        ..Default::default()
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = match config(&args).and_then(|c| run_suite(&c)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("chevcheck: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match args.format {
        Format::Text => report.text(),
        Format::Machine => report.machine(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("chevcheck: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            let s = &report.summary;
            eprintln!("pass {}  discrepant {}  fail {}", s.pass, s.discrepant, s.fail);
        }
        None => print!("{body}"),
    }
    if report.failed() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
