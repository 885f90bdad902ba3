use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use srgeom::cli::{load_target, parse_tol, run, Command, GradingChoice, Options, EXIT_INVALID};
use srgeom::exactnum::Scalar;
use srgeom::report::Format;

/// Exact canonical-connection analysis of graded sub-Riemannian frames.
#[derive(Parser, Debug)]
#[command(name = "srgeom", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Catalog name or path to an input document.
    target: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Rational tolerance p/q for certificate searches.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<Scalar>,
    /// Comma-separated penalty parameters mu.
    #[arg(long, value_delimiter = ',', value_parser = parse_tol)]
    mu_grid: Option<Vec<Scalar>>,
    /// basic, full, or the number of blocks to keep.
    #[arg(long, default_value = "full")]
    grading: GradingChoice,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let mut opts = Options { grading: args.grading, ..Options::default() };
    if let Some(t) = args.tol {
        opts.tol = t;
    }
    if let Some(g) = args.mu_grid {
        opts.mu_grid = g;
    }
    let spec = match args.target.as_deref().map(load_target).transpose() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let outcome = run(args.command, spec.as_ref(), &opts);
    let text = outcome.report.render(args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.exit as u8)
}
