//! Flat `key = value` configuration files for the CLI subcommands.
//!
//! One assignment per line. Blank lines and lines starting with `#` are
//! skipped. Keys may not repeat, and every key must be understood by the
//! subcommand that loads the file; anything left over is an error so typos
//! surface immediately instead of silently running defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::generators::{expcutoff_profile, zipf_profile, DegreeProfile};

use super::HarnessError;

/// Output encoding for every subcommand that writes results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format \"{other}\" (expected csv or json)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Degree profile selection shared by the generator specs.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    /// Per-node power law `d_i = c * (i + 1)^(-alpha)`.
    Zipf { c: f64, alpha: f64 },
    /// Grouped power law with exponential cutoff over integer degrees.
    ExpCutoff { alpha: f64, lambda: f64, tail_eps: f64 },
    /// Explicit grouped classes.
    Grouped { degrees: Vec<f64>, fractions: Vec<f64> },
}

impl ProfileSpec {
    pub fn build(&self, n: usize) -> Result<DegreeProfile, HarnessError> {
        match self {
            ProfileSpec::Zipf { c, alpha } => Ok(zipf_profile(n, *c, *alpha)?),
            ProfileSpec::ExpCutoff { alpha, lambda, tail_eps } => {
                Ok(expcutoff_profile(*alpha, *lambda, *tail_eps)?)
            }
            ProfileSpec::Grouped { degrees, fractions } => {
                if degrees.len() != fractions.len() {
                    return Err(HarnessError::Config(format!(
                        "grouped profile has {} degrees but {} fractions",
                        degrees.len(),
                        fractions.len()
                    )));
                }
                let classes = degrees.iter().copied().zip(fractions.iter().copied()).collect();
                let profile = DegreeProfile::Grouped(classes);
                profile.class_fractions()?;
                Ok(profile)
            }
        }
    }
}

/// Which random (or file-backed) graph source a trial batch samples from.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Clvb { profile: ProfileSpec, n: usize, m: usize },
    MolloyReed { profile: ProfileSpec, n: usize, m: usize, m_hat: usize },
    PrefAttachment { n: usize, m: usize, edges: usize, m_hat: usize },
    EdgeList { path: PathBuf },
    DoubleCover { path: PathBuf },
}

/// How the degree predictor handed to the algorithms is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictorSpec {
    /// Exact realized offline degrees.
    TrueDegrees,
    /// Expected degrees from the generator profile (Chung-Lu only).
    Expected,
    /// Degrees of an independent subsampled graph, scaled back up.
    Subsample { fraction: f64 },
    /// Predictor emitted by the generator itself (type-graph models).
    Generator,
}

/// Fully parsed `run`/`generate` configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub predictor: PredictorSpec,
    pub algorithms: Vec<String>,
    pub trials: usize,
    pub master_seed: u64,
    pub shuffle_arrivals: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Analytic-engine grid selection for `analyze`.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisTask {
    /// Asymptotic ratio over an (alpha, lambda) grid of cutoff power laws.
    AsymptoticGrid { alphas: Vec<f64>, lambdas: Vec<f64>, tail_eps: f64 },
    /// Finite expectations for Zipf profiles with `c = c_frac * n`, `m = n`.
    FiniteSweep { alphas: Vec<f64>, ns: Vec<usize>, c_frac: f64 },
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub task: AnalysisTask,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Snapshot-predictor pipeline configuration.
#[derive(Debug, Clone)]
pub struct SnapshotConfig {
    pub first: PathBuf,
    pub later: Vec<PathBuf>,
    pub trials: usize,
    pub master_seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl AnalysisTask {
    /// The default `analyze` grid: asymptotic ratios over the canonical
    /// alpha x lambda sweep.
    pub fn default_grid() -> Self {
        AnalysisTask::AsymptoticGrid {
            alphas: vec![0.5, 1.0, 1.5, 2.0],
            lambdas: vec![10.0, 100.0, 1_000.0, 10_000.0, 100_000.0],
            tail_eps: 1e-9,
        }
    }
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { task: AnalysisTask::default_grid(), out: None, format: OutputFormat::Csv }
    }
}

/// Raw assignments from one config file, consumed key by key.
struct Entries {
    values: BTreeMap<String, String>,
}

impl Entries {
    fn parse(text: &str, origin: &str) -> Result<Self, HarnessError> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(HarnessError::Config(format!(
                    "{origin}:{}: expected key = value, got \"{line}\"",
                    idx + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(HarnessError::Config(format!("{origin}:{}: empty key", idx + 1)));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(HarnessError::Config(format!(
                    "{origin}:{}: duplicate key \"{key}\"",
                    idx + 1
                )));
            }
        }
        Ok(Entries { values })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    fn take_parsed<T>(&mut self, key: &str) -> Result<Option<T>, HarnessError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        match self.values.remove(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                HarnessError::Config(format!("key \"{key}\": cannot parse \"{raw}\": {e}"))
            }),
        }
    }

    fn take_list<T>(&mut self, key: &str) -> Result<Option<Vec<T>>, HarnessError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        match self.values.remove(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|part| {
                    let part = part.trim();
                    part.parse::<T>().map_err(|e| {
                        HarnessError::Config(format!(
                            "key \"{key}\": cannot parse \"{part}\": {e}"
                        ))
                    })
                })
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }

    fn finish(self) -> Result<(), HarnessError> {
        if self.values.is_empty() {
            return Ok(());
        }
        let keys: Vec<&str> = self.values.keys().map(String::as_str).collect();
        Err(HarnessError::Config(format!("unknown keys: {}", keys.join(", "))))
    }
}

fn read_config(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn require<T>(value: Option<T>, key: &str, context: &str) -> Result<T, HarnessError> {
    value.ok_or_else(|| HarnessError::Config(format!("{context} requires key \"{key}\"")))
}

fn parse_profile(entries: &mut Entries, m: usize) -> Result<ProfileSpec, HarnessError> {
    let kind = entries.take("profile").unwrap_or_else(|| "zipf".to_string());
    match kind.as_str() {
        "zipf" => {
            let c = entries
                .take_parsed::<f64>("c")?
                .unwrap_or_else(|| (m as f64 / 2.0).max(1.0));
            let alpha = require(entries.take_parsed::<f64>("alpha")?, "alpha", "zipf profile")?;
            Ok(ProfileSpec::Zipf { c, alpha })
        }
        "expcutoff" => {
            let alpha =
                require(entries.take_parsed::<f64>("alpha")?, "alpha", "expcutoff profile")?;
            let lambda =
                require(entries.take_parsed::<f64>("lambda")?, "lambda", "expcutoff profile")?;
            let tail_eps = entries.take_parsed::<f64>("tail_eps")?.unwrap_or(1e-9);
            Ok(ProfileSpec::ExpCutoff { alpha, lambda, tail_eps })
        }
        "grouped" => {
            let degrees =
                require(entries.take_list::<f64>("degrees")?, "degrees", "grouped profile")?;
            let fractions =
                require(entries.take_list::<f64>("fractions")?, "fractions", "grouped profile")?;
            Ok(ProfileSpec::Grouped { degrees, fractions })
        }
        other => Err(HarnessError::Config(format!(
            "unknown profile \"{other}\" (expected zipf, expcutoff or grouped)"
        ))),
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        Self::from_text(&read_config(path)?, &path.display().to_string())
    }

    pub fn from_text(text: &str, origin: &str) -> Result<Self, HarnessError> {
        let mut entries = Entries::parse(text, origin)?;

        let generator_kind = entries.take("generator").unwrap_or_else(|| "clvb".to_string());
        let generator = match generator_kind.as_str() {
            "clvb" => {
                let n = require(entries.take_parsed::<usize>("n")?, "n", "clvb generator")?;
                let m = require(entries.take_parsed::<usize>("m")?, "m", "clvb generator")?;
                let profile = parse_profile(&mut entries, m)?;
                GeneratorSpec::Clvb { profile, n, m }
            }
            "molloy-reed" => {
                let n = require(entries.take_parsed::<usize>("n")?, "n", "molloy-reed generator")?;
                let m = require(entries.take_parsed::<usize>("m")?, "m", "molloy-reed generator")?;
                let m_hat = entries.take_parsed::<usize>("m_hat")?.unwrap_or(m);
                let profile = parse_profile(&mut entries, m)?;
                GeneratorSpec::MolloyReed { profile, n, m, m_hat }
            }
            "pref-attachment" => {
                let n =
                    require(entries.take_parsed::<usize>("n")?, "n", "pref-attachment generator")?;
                let m =
                    require(entries.take_parsed::<usize>("m")?, "m", "pref-attachment generator")?;
                let edges = require(
                    entries.take_parsed::<usize>("edges")?,
                    "edges",
                    "pref-attachment generator",
                )?;
                let m_hat = entries.take_parsed::<usize>("m_hat")?.unwrap_or(m);
                GeneratorSpec::PrefAttachment { n, m, edges, m_hat }
            }
            "edge-list" => {
                let path = require(
                    entries.take_parsed::<PathBuf>("path")?,
                    "path",
                    "edge-list generator",
                )?;
                GeneratorSpec::EdgeList { path }
            }
            "double-cover" => {
                let path = require(
                    entries.take_parsed::<PathBuf>("path")?,
                    "path",
                    "double-cover generator",
                )?;
                GeneratorSpec::DoubleCover { path }
            }
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown generator \"{other}\" (expected clvb, molloy-reed, pref-attachment, \
                     edge-list or double-cover)"
                )))
            }
        };

        let predictor_kind =
            entries.take("predictor").unwrap_or_else(|| "true-degrees".to_string());
        let predictor = match predictor_kind.as_str() {
            "true-degrees" => PredictorSpec::TrueDegrees,
            "expected" => PredictorSpec::Expected,
            "subsample" => {
                let fraction = require(
                    entries.take_parsed::<f64>("fraction")?,
                    "fraction",
                    "subsample predictor",
                )?;
                if !(fraction > 0.0 && fraction <= 1.0) {
                    return Err(HarnessError::Config(format!(
                        "subsample fraction must lie in (0, 1], got {fraction}"
                    )));
                }
                PredictorSpec::Subsample { fraction }
            }
            "generator" => PredictorSpec::Generator,
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown predictor \"{other}\" (expected true-degrees, expected, subsample \
                     or generator)"
                )))
            }
        };

        let algorithms = entries
            .take_list::<String>("algorithms")?
            .unwrap_or_else(|| {
                ["mpd", "mindegree", "ranking", "greedy"]
                    .into_iter()
                    .map(str::to_string)
                    .collect()
            });
        if algorithms.is_empty() {
            return Err(HarnessError::Config("algorithm list is empty".to_string()));
        }

        let trials = entries.take_parsed::<usize>("trials")?.unwrap_or(100);
        let master_seed = entries.take_parsed::<u64>("seed")?.unwrap_or(0);
        let shuffle_arrivals = entries.take_parsed::<bool>("shuffle")?.unwrap_or(true);
        let out = entries.take_parsed::<PathBuf>("out")?;
        let format = entries.take_parsed::<OutputFormat>("format")?.unwrap_or(OutputFormat::Csv);
        entries.finish()?;

        Ok(ExperimentConfig {
            generator,
            predictor,
            algorithms,
            trials,
            master_seed,
            shuffle_arrivals,
            out,
            format,
        })
    }
}

impl AnalysisConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        Self::from_text(&read_config(path)?, &path.display().to_string())
    }

    pub fn from_text(text: &str, origin: &str) -> Result<Self, HarnessError> {
        let mut entries = Entries::parse(text, origin)?;
        let kind = entries.take("analysis").unwrap_or_else(|| "table".to_string());
        let task = match kind.as_str() {
            "table" => {
                let AnalysisTask::AsymptoticGrid {
                    alphas: def_alphas,
                    lambdas: def_lambdas,
                    tail_eps: def_eps,
                } = AnalysisTask::default_grid()
                else {
                    unreachable!()
                };
                let alphas = entries.take_list::<f64>("alphas")?.unwrap_or(def_alphas);
                let lambdas = entries.take_list::<f64>("lambdas")?.unwrap_or(def_lambdas);
                let tail_eps = entries.take_parsed::<f64>("tail_eps")?.unwrap_or(def_eps);
                AnalysisTask::AsymptoticGrid { alphas, lambdas, tail_eps }
            }
            "sweep" => {
                let alphas = entries
                    .take_list::<f64>("alphas")?
                    .unwrap_or_else(|| vec![0.5, 0.8, 1.0, 1.5]);
                let ns = entries
                    .take_list::<usize>("ns")?
                    .unwrap_or_else(|| vec![10, 100, 1_000, 10_000]);
                let c_frac = entries.take_parsed::<f64>("c_frac")?.unwrap_or(0.5);
                AnalysisTask::FiniteSweep { alphas, ns, c_frac }
            }
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown analysis \"{other}\" (expected table or sweep)"
                )))
            }
        };
        let out = entries.take_parsed::<PathBuf>("out")?;
        let format = entries.take_parsed::<OutputFormat>("format")?.unwrap_or(OutputFormat::Csv);
        entries.finish()?;
        Ok(AnalysisConfig { task, out, format })
    }
}

impl SnapshotConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        Self::from_text(&read_config(path)?, &path.display().to_string())
    }

    pub fn from_text(text: &str, origin: &str) -> Result<Self, HarnessError> {
        let mut entries = Entries::parse(text, origin)?;
        let first =
            require(entries.take_parsed::<PathBuf>("first")?, "first", "snapshot pipeline")?;
        let later =
            require(entries.take_list::<PathBuf>("later")?, "later", "snapshot pipeline")?;
        if later.is_empty() {
            return Err(HarnessError::Config("snapshot needs at least one later file".into()));
        }
        let trials = entries.take_parsed::<usize>("trials")?.unwrap_or(100);
        let master_seed = entries.take_parsed::<u64>("seed")?.unwrap_or(0);
        let out = entries.take_parsed::<PathBuf>("out")?;
        let format = entries.take_parsed::<OutputFormat>("format")?.unwrap_or(OutputFormat::Csv);
        entries.finish()?;
        Ok(SnapshotConfig { first, later, trials, master_seed, out, format })
    }
}
