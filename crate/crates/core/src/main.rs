use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use feec4d::cli::{self, Command, Format, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Dims,
    Unisolvence,
    Exactness,
    Commute,
    Traceids,
    Pullback,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

/// Verification front end for conforming form spaces on the tesseract.
#[derive(Debug, Parser)]
#[command(name = "feec4d", version)]
struct Args {
    #[arg(value_enum)]
    command: CommandArg,
    /// Order range, `A..B` inclusive or a single value.
    #[arg(long, default_value = "1..3")]
    k: String,
    /// Form degrees, e.g. `0..4` or `1,3`.
    #[arg(long, default_value = "0..4")]
    s: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Pass threshold; each command has its own default.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run a single integration-by-parts identity (1A, 1C, 2A, 2C, 2D, 3).
    #[arg(long)]
    which: Option<String>,
    /// Use orientation-reversing maps in `pullback`.
    #[arg(long)]
    det_negative: bool,
}

fn config(args: Args) -> feec4d::Result<RunConfig> {
    let command = match args.command {
        CommandArg::Dims => Command::Dims,
        CommandArg::Unisolvence => Command::Unisolvence,
        CommandArg::Exactness => Command::Exactness,
        CommandArg::Commute => Command::Commute,
        CommandArg::Traceids => Command::Traceids,
        CommandArg::Pullback => Command::Pullback,
    };
    let mut cfg = RunConfig::new(command);
    cfg.k_range = cli::parse_k_range(&args.k)?;
    cfg.s_list = cli::parse_s_list(&args.s)?;
    cfg.seed = args.seed;
    if let Some(t) = args.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(feec4d::Error::InvalidArgument(format!("invalid tolerance {t}")));
        }
    }
    cfg.tol = args.tol;
    cfg.format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    cfg.out = args.out;
    cfg.which = args.which.as_deref().map(str::parse).transpose()?;
    cfg.det_negative = args.det_negative;
    Ok(cfg)
}

fn init_threads() {
    if let Ok(v) = std::env::var("FEEC4D_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    let cfg = match config(Args::parse()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    init_threads();
    let report = match cli::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = cli::render(&report, cfg.format);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
