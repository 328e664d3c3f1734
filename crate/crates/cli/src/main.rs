use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, ValueEnum};
use tiltkit::text::parse_field;
use tiltkit_cli::{input_error, run_text, Command, Overrides};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// The full JSON report.
    Report,
    /// The one-line summary (plus the presentation for dual algebras).
    Summary,
}

/// Graded stratified algebras: stratification, tilting modules, Ringel and
/// Koszul duals.
#[derive(Debug, Parser)]
#[command(name = "tiltkit", version)]
struct Args {
    /// Presentation file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    command: Command,
    /// Truncation degree N (overrides the file; default 8).
    #[arg(long)]
    truncate: Option<usize>,
    /// Homological depth L (overrides the file; default 6).
    #[arg(long)]
    depth: Option<usize>,
    /// Ground field: Q or GF:p.
    #[arg(long)]
    field: Option<String>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "report")]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match real_main(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn real_main(args: &Args) -> anyhow::Result<i32> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let outcome = match args.field.as_deref().map(parse_field).transpose() {
        Ok(field) => {
            let ov = Overrides { truncation: args.truncate, depth: args.depth, field };
            run_text(&text, args.command, &ov)
        }
        Err(e) => input_error(Some(args.command), &e),
    };
    let rendered = match args.format {
        Format::Report => serde_json::to_string_pretty(&outcome.report)? + "\n",
        Format::Summary => {
            let mut s = format!("{}\n", outcome.summary);
            if let Some(p) = outcome.report.pointer("/result/presentation_text").and_then(|v| v.as_str()) {
                s.push_str(p);
            }
            s
        }
    };
    match &args.out {
        Some(path) => fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{rendered}"),
    }
    if outcome.exit_code() == 3 {
        eprintln!("{}", outcome.summary);
    }
    Ok(outcome.exit_code())
}
