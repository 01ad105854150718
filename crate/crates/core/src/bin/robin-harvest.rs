use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use robin_harvest::cli::{run_from_args, Mode};

/// Principal eigenvalues, state and adjoint solves, and optimal harvesting
/// effort for the grazed logistic model with Robin boundary conditions.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// eigen | state | adjoint | optimize | oracle | verify | wellposed
    mode: Mode,
    /// Flat `key = value` configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for report.txt, fields.csv and trace.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors; exit 2 means "not converged"
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = run_from_args(
        args.mode,
        args.config.as_deref(),
        args.out.as_deref(),
        args.seed,
    );
    ExitCode::from(code as u8)
}
