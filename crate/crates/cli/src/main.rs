use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use ramlab::ramification_policy;
use ramlab::{parse_manifest, run_manifest, write_outputs, Format, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
    All,
}

/// Exact wild-ramification computations driven by a manifest.
#[derive(Parser, Debug)]
#[command(name = "ramlab", version)]
struct Args {
    /// Manifest file.
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "ramlab-out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::All)]
    format: FormatArg,
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, default_value_t = 0)]
    parallel: usize,
    /// Seed for randomized cross-checks (extra sampled slices and generic points).
    #[arg(long)]
    seed: Option<u64>,
    /// Extra series precision kept beyond the detected pole order.
    #[arg(long)]
    precision_guard: Option<i64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.manifest) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("ramlab: cannot read {}: {e}", args.manifest.display());
            return ExitCode::from(2);
        }
    };
    let manifest = match parse_manifest(&text) {
        Ok(m) => m,
        Err(diags) => {
            for d in diags {
                eprintln!("{}:{d}", args.manifest.display());
            }
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions { policy: ramification_policy(args.precision_guard), parallel: args.parallel != 1, seed: args.seed };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.parallel).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("ramlab: {e}");
            return ExitCode::from(2);
        }
    };
    let report = pool.install(|| run_manifest(&manifest, &opts));
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::All => Format::All,
    };
    match write_outputs(&report, &args.out, format) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("ramlab: cannot write to {}: {e}", args.out.display());
            return ExitCode::from(2);
        }
    }
    for t in report.tasks.iter().filter(|t| t.result.is_err()) {
        let e = t.result.as_ref().unwrap_err();
        eprintln!("task {} ({}) failed: {}: {}", t.index, t.kind.name(), e.code, e.message);
    }
    if report.any_error() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
