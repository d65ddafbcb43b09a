use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affine_cli::{
    audit_table, config_hash, export_table, load_batch, load_config, run_scenario, CliError, Format, ScenarioConfig,
};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

const OUT_DIR_ENV: &str = "AFFINE_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "affine",
    version,
    about = "Run affine-body scenarios and export reproducible tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (0 picks one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its table.
    Run {
        config: PathBuf,
        /// Replaces the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; defaults to the config `output`, then $AFFINE_OUT_DIR/<name>.<ext>.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run a batch of `[[scenario]]` entries concurrently, one table each.
    Sweep {
        config: PathBuf,
        /// Base seed; scenario i runs with seed + i.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; defaults to $AFFINE_OUT_DIR, then the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Verify the config and data hashes embedded in a table.
    Audit {
        table: PathBuf,
        /// Also re-run the embedded config and compare the result.
        #[arg(long)]
        rerun: bool,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn env_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn pick_format(flag: Option<FormatArg>, path: Option<&Path>) -> Format {
    match flag {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => path.and_then(Format::from_path).unwrap_or(Format::Csv),
    }
}

fn with_seed(seed: u64) -> Result<u64, CliError> {
    if seed > i64::MAX as u64 {
        Err(CliError::validation("--seed", "must fit a signed 64-bit integer"))
    } else {
        Ok(seed)
    }
}

/// Runs and exports one scenario; returns the exit code of the run.
fn execute(cfg: &ScenarioConfig, path: &Path, format: Format) -> Result<u8, CliError> {
    let (table, code) = match run_scenario(cfg) {
        Ok(t) => (t, 0),
        Err(failed) => (failed, 3),
    };
    export_table(&table, path, format)?;
    let status = if code == 0 { "ok" } else { "failed" };
    println!(
        "{} rows={} config_hash={} status={status}",
        path.display(),
        table.rows.len(),
        config_hash(cfg)
    );
    if code != 0 {
        for row in &table.rows {
            eprintln!("error: {row:?}");
        }
    }
    Ok(code)
}

fn run(config: &Path, seed: Option<u64>, out: Option<PathBuf>, format: Option<FormatArg>) -> Result<u8, CliError> {
    let mut cfg = load_config(&read(config)?)?;
    if let Some(s) = seed {
        cfg.seed = with_seed(s)?;
    }
    let explicit = out.or_else(|| cfg.output.clone());
    let format = pick_format(format, explicit.as_deref());
    let path = explicit.unwrap_or_else(|| {
        env_dir()
            .unwrap_or_else(|| PathBuf::from("."))
            .join(format!("{}.{}", cfg.display_name(), format.extension()))
    });
    execute(&cfg, &path, format)
}

fn sweep(config: &Path, seed: Option<u64>, out: Option<PathBuf>, format: Option<FormatArg>) -> Result<u8, CliError> {
    let mut batch = load_batch(&read(config)?)?;
    let dir = out.or_else(env_dir).unwrap_or_else(|| PathBuf::from("."));
    let format = pick_format(format, None);
    let mut jobs = Vec::with_capacity(batch.len());
    for (i, cfg) in batch.iter_mut().enumerate() {
        if let Some(s) = seed {
            cfg.seed = with_seed(s.saturating_add(i as u64))?;
        }
        let path = match &cfg.output {
            Some(p) => dir.join(p),
            None => dir.join(format!(
                "{}.{}",
                cfg.name
                    .clone()
                    .unwrap_or_else(|| format!("{i:03}_{}", cfg.kind.as_str())),
                format.extension()
            )),
        };
        if jobs.iter().any(|(_, p): &(usize, PathBuf)| *p == path) {
            return Err(CliError::validation(
                format!("scenario[{i}].name"),
                format!("output {} is used twice", path.display()),
            ));
        }
        jobs.push((i, path));
    }
    let codes: Vec<Result<u8, CliError>> = jobs
        .par_iter()
        .map(|(i, path)| {
            let cfg = &batch[*i];
            execute(cfg, path, Format::from_path(path).unwrap_or(format))
        })
        .collect();
    let mut worst = 0;
    for c in codes {
        match c {
            Ok(code) => worst = worst.max(code),
            Err(e) => {
                eprintln!("error: {e}");
                worst = worst.max(e.exit_code());
            }
        }
    }
    Ok(worst)
}

fn audit(path: &Path, rerun: bool) -> Result<u8, CliError> {
    let report = audit_table(&read(path)?, rerun)?;
    let flag = |ok: bool| if ok { "ok" } else { "MISMATCH" };
    println!(
        "{}: kind={} rows={} config_hash={} data_hash={}{}",
        path.display(),
        report.kind,
        report.rows,
        flag(report.config_hash_ok),
        flag(report.data_hash_ok),
        report
            .rerun_matches
            .map_or(String::new(), |m| format!(" rerun={}", flag(m)))
    );
    Ok(if report.passed() { 0 } else { 2 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            out,
            format,
        } => run(&config, seed, out, format),
        Command::Sweep {
            config,
            seed,
            out,
            format,
        } => sweep(&config, seed, out, format),
        Command::Audit { table, rerun } => audit(&table, rerun),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
