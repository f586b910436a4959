use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use prohecke::suite::{run_suite, SuiteConfig, CACHE_ENV, CHECKS};

/// Exact verification of pro-p Iwahori-Hecke and principal series
/// statements for GL_n over F_q((t)).
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Characteristic of the coefficient field, 0 for the rationals.
    #[arg(long = "char", default_value_t = 2)]
    char_ell: u32,
    #[arg(long, default_value_t = 1)]
    ext_degree: u32,
    /// Character, e.g. "z=[2,3];tame=[1,0]"; empty for the trivial one.
    #[arg(long, default_value = "")]
    chi: String,
    /// Length budget for the fiber sandwich and braid checks.
    #[arg(long = "budget-L", default_value_t = 4)]
    budget_l: usize,
    /// Tree ball radius (n = 2).
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated check names; all by default.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let a = Args::parse();
    let cfg = SuiteConfig {
        n: a.n,
        q: a.q,
        char_ell: a.char_ell,
        ext_degree: a.ext_degree,
        chi: a.chi,
        budget_l: a.budget_l,
        radius: a.radius,
        seed: a.seed,
        checks: if a.checks.is_empty() { CHECKS.iter().map(|s| s.to_string()).collect() } else { a.checks },
        cache_dir: a.cache_dir,
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match &a.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, json + "\n") {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
            print!("{}", report.summary());
        }
        None => println!("{json}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
