use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orientcalc::cli::{run_config, Format, JobKind};

#[derive(Parser)]
#[command(name = "orient-calc", version, about = "Orientation groups, Euler forms, orientability verdicts and skeletons")]
struct Cli {
    #[command(subcommand)]
    job: Job,
}

#[derive(Subcommand)]
enum Job {
    /// Smith normal form of a presentation matrix.
    Group(Args),
    /// Euler form of an operator on witness K-classes.
    EulerForm(Args),
    /// Arithmetic in the orientation group.
    Omega(Args),
    /// Orientability verdict with its rule trail.
    Orientability(Args),
    /// Subdivision, skeleton and prism counts for a complex.
    Skeleton(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(ValueEnum, Clone, Copy)]
enum OutFormat {
    Text,
    Structured,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (kind, args) = match cli.job {
        Job::Group(a) => (JobKind::Group, a),
        Job::EulerForm(a) => (JobKind::EulerForm, a),
        Job::Omega(a) => (JobKind::Omega, a),
        Job::Orientability(a) => (JobKind::Orientability, a),
        Job::Skeleton(a) => (JobKind::Skeleton, a),
    };
    let format = match args.format {
        OutFormat::Text => Format::Text,
        OutFormat::Structured => Format::Structured,
    };
    match run_config(&args.config, Some(kind)) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(report.emit(format).as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
