//! `mopuc --job job.json [--out DIR] [--seed N] [--threads N]`
//!
//! Exit codes: 0 when every check passes or skips, 1 when any fails, 2 on
//! input errors (malformed job, unavailable moment, unmet preconditions).

mod job;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mopuc_core::{ComplexFloat, GaussianRational};

use job::{parse_job, Field, InputError};

#[derive(Parser, Debug)]
#[command(name = "mopuc", version, about = "Laurent multiple orthogonal polynomials: batch jobs")]
struct Args {
    /// Job description (JSON).
    #[arg(long)]
    job: PathBuf,
    /// Directory for report.json; overrides the job's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random evaluation points; overrides the job's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(args: &Args) -> Result<bool, InputError> {
    let text = std::fs::read_to_string(&args.job)
        .map_err(|e| InputError(format!("cannot read {}: {e}", args.job.display())))?;
    let mut job = parse_job(&text)?;
    if let Some(seed) = args.seed {
        job.seed = seed;
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| InputError(format!("--threads: {e}")))?;
    }
    let outcome = match job.field {
        Field::Exact => run::run::<GaussianRational>(&job)?,
        Field::Float => run::run::<ComplexFloat>(&job)?,
    };
    print!("{}", outcome.text);
    if let Some(dir) = args.out.clone().or(job.output.clone()) {
        std::fs::create_dir_all(&dir).map_err(|e| InputError(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join("report.json");
        let mut body = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
        body.push('\n');
        std::fs::write(&path, body).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
        println!("report written to {}", path.display());
    }
    Ok(outcome.failed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("mopuc: at least one check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("mopuc: {e}");
            ExitCode::from(2)
        }
    }
}
