//! Command-line front end for the matching harness.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mpdmatch::generators::write_edge_list;
use mpdmatch::harness::{
    generate_graph, run_analysis, run_experiment, run_selftest, snapshot_experiment,
    write_analysis, write_experiment, write_snapshot, AnalysisConfig, ExperimentConfig,
    HarnessError, OutputFormat, SnapshotConfig,
};

#[derive(Parser)]
#[command(
    name = "mpdmatch",
    version,
    about = "Online bipartite matching with degree predictions: experiments, analytics, oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Path to a key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Write results to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one instance from the configured generator and write it as an edge list
    Generate(CommonOpts),
    /// Run a seeded batch of online-matching trials against the exact oracles
    Run(CommonOpts),
    /// Evaluate the analytic engine over a parameter grid
    Analyze(CommonOpts),
    /// Score first-snapshot degree predictions on later snapshots
    Snapshot {
        #[command(flatten)]
        common: CommonOpts,
        /// First snapshot edge list, the predictor source
        #[arg(long)]
        first: Option<PathBuf>,
        /// Later snapshot edge lists (comma separated or repeated)
        #[arg(long, value_delimiter = ',')]
        later: Vec<PathBuf>,
    },
    /// Run oracle and analytic cross-checks
    Selftest,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn parse_format(opt: &Option<String>) -> Result<Option<OutputFormat>, HarnessError> {
    opt.as_deref()
        .map(|s| s.parse::<OutputFormat>().map_err(HarnessError::Config))
        .transpose()
}

fn load_experiment(opts: &CommonOpts) -> Result<ExperimentConfig, HarnessError> {
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| HarnessError::Config("this subcommand needs --config".to_string()))?;
    let mut cfg = ExperimentConfig::from_file(path)?;
    if let Some(seed) = opts.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = opts.trials {
        cfg.trials = trials;
    }
    if let Some(out) = &opts.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = parse_format(&opts.format)? {
        cfg.format = format;
    }
    Ok(cfg)
}

/// Streams results to `--out` when given, otherwise to stdout.
fn with_sink<F>(out: &Option<PathBuf>, write: F) -> Result<(), HarnessError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), HarnessError>,
{
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
            let mut sink = std::io::BufWriter::new(file);
            write(&mut sink)
        }
        None => {
            let mut sink = std::io::stdout().lock();
            write(&mut sink)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Generate(opts) => {
            let cfg = load_experiment(&opts)?;
            let out = cfg.out.clone().ok_or_else(|| {
                HarnessError::Config("generate needs an output path (--out or out =)".to_string())
            })?;
            let g = generate_graph(&cfg, 0)?;
            write_edge_list(&out, &g)?;
            eprintln!(
                "wrote {} ({} offline x {} online, {} edges)",
                out.display(),
                g.n_offline,
                g.m_online,
                g.edge_count()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Run(opts) => {
            let cfg = load_experiment(&opts)?;
            let summary = run_experiment(&cfg)?;
            if summary.edgeless_trials > 0 {
                eprintln!(
                    "warning: {} of {} trials were edgeless; their ratios default to 1",
                    summary.edgeless_trials, summary.trials
                );
            }
            for a in &summary.algorithms {
                eprintln!(
                    "{}: mean ratio {:.5} (std {:.5}), mean size {:.2}",
                    a.name, a.mean_ratio, a.std_ratio, a.mean_size
                );
            }
            with_sink(&cfg.out, |sink| write_experiment(sink, cfg.format, &summary))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze(opts) => {
            if opts.seed.is_some() || opts.trials.is_some() {
                return Err(HarnessError::Config(
                    "analyze is deterministic and takes no --seed or --trials".to_string(),
                ));
            }
            let mut cfg = match &opts.config {
                Some(path) => AnalysisConfig::from_file(path)?,
                None => AnalysisConfig::default(),
            };
            if let Some(out) = &opts.out {
                cfg.out = Some(out.clone());
            }
            if let Some(format) = parse_format(&opts.format)? {
                cfg.format = format;
            }
            let rows = run_analysis(&cfg.task)?;
            with_sink(&cfg.out, |sink| write_analysis(sink, cfg.format, &rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Snapshot { common, first, later } => {
            let mut cfg = match &common.config {
                Some(path) => SnapshotConfig::from_file(path)?,
                None => {
                    let first = first.clone().ok_or_else(|| {
                        HarnessError::Config(
                            "snapshot needs --first (or a config file)".to_string(),
                        )
                    })?;
                    if later.is_empty() {
                        return Err(HarnessError::Config(
                            "snapshot needs at least one --later file".to_string(),
                        ));
                    }
                    SnapshotConfig {
                        first,
                        later: later.clone(),
                        trials: 100,
                        master_seed: 0,
                        out: None,
                        format: OutputFormat::Csv,
                    }
                }
            };
            if common.config.is_some() {
                if let Some(first) = first {
                    cfg.first = first;
                }
                if !later.is_empty() {
                    cfg.later = later;
                }
            }
            if let Some(seed) = common.seed {
                cfg.master_seed = seed;
            }
            if let Some(trials) = common.trials {
                cfg.trials = trials;
            }
            if let Some(out) = &common.out {
                cfg.out = Some(out.clone());
            }
            if let Some(format) = parse_format(&common.format)? {
                cfg.format = format;
            }
            let rows = snapshot_experiment(&cfg)?;
            with_sink(&cfg.out, |sink| write_snapshot(sink, cfg.format, &rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let checks = run_selftest();
            let mut all_pass = true;
            for c in &checks {
                let tag = if c.pass { "[ok]" } else { "[FAIL]" };
                println!("{tag} {}: {}", c.name, c.detail);
                all_pass &= c.pass;
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
