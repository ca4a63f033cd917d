//! CLI driver: scans moduli for realized L(1,χ) lower-bound constants, or
//! runs the aggregated verification suite.
//!
//! Exit codes: 0 on success, 1 on verification failure, 2 on usage or
//! configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use lchi_core::bounds::{emit_report, render_report, scan_theorem, ReportFormat, ScanOptions};
use lchi_core::verify::{verify_suite, Level};

#[derive(Debug, Parser)]
#[command(name = "lchi", version, about = "L(1,chi) lower-bound scanner and verifier")]
struct Args {
    /// Operating mode: "scan" moduli or "verify" the numbered checks.
    #[arg(long, default_value = "scan")]
    mode: String,

    /// Smallest modulus to scan.
    #[arg(long, default_value_t = 3)]
    q_min: u64,

    /// Largest modulus to scan.
    #[arg(long, default_value_t = 100)]
    q_max: u64,

    /// Exponent K in T = q^K for complex characters.
    #[arg(long, default_value_t = 2)]
    big_k: u32,

    /// Cap on T; rows clamped to it are flagged partial.
    #[arg(long, default_value_t = 20_000_000)]
    cap: u64,

    /// Base tolerance for quadrature-backed checks (reserved for scan use).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,

    /// Output format: csv, json, or markdown.
    #[arg(long, default_value = "csv")]
    format: String,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Seed for sampled group elements and grids in verification.
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,

    /// Verification grid size: quick or full.
    #[arg(long, default_value = "quick")]
    level: String,
}

fn run(args: &Args) -> Result<ExitCode, String> {
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    if args.tol <= 0.0 {
        return Err("tolerance must be positive".into());
    }
    match args.mode.as_str() {
        "scan" => {
            let format: ReportFormat = args.format.parse().map_err(|e| format!("{e}"))?;
            let options = ScanOptions { big_k: args.big_k, cap: args.cap };
            let rows = scan_theorem(args.q_min, args.q_max, &options)
                .map_err(|e| format!("scan: {e}"))?;
            match &args.out {
                Some(path) => emit_report(&rows, format, path).map_err(|e| format!("emit: {e}"))?,
                None => {
                    let text =
                        render_report(&rows, format).map_err(|e| format!("render: {e}"))?;
                    print!("{text}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        "verify" => {
            let level: Level = args.level.parse().map_err(|e| format!("{e}"))?;
            let report =
                verify_suite(level, args.seed, None).map_err(|e| format!("verify: {e}"))?;
            let lines = report.render_lines();
            match &args.out {
                Some(path) => {
                    let json = serde_json::to_string_pretty(&report)
                        .map_err(|e| format!("serialize: {e}"))?;
                    std::fs::write(path, json).map_err(|e| format!("write: {e}"))?;
                    print!("{lines}");
                }
                None => print!("{lines}"),
            }
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        other => Err(format!("unknown mode {other:?}; expected scan or verify")),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
