//! Experiment orchestration: load or generate an instance suite, optionally
//! tune each heuristic on a held-out split, benchmark the rest, and emit a
//! CSV of per-instance figures plus JSON summaries. All randomness derives
//! from the experiment seed, so repeated runs produce byte-identical output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{self, CnfFormula};
use crate::energy::{iteration_energy, latency_per_iteration, EnergyBreakdown, EnergyParams};
use crate::hyperopt::{self, TuneConfig, TuneOutcome};
use crate::metrics::{ets, lower_median, optimal_its, tts};
use crate::solvers::{
    heuristic_label, parse_heuristic_name, run_instance, Heuristic, NoiseConfig,
    NoiseDistribution, SolverConfig, TieBreak,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),
    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),
    #[error(transparent)]
    Cnf(#[from] cnf::CnfError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("tuning failed for {heuristic}: {message}")]
    Tune { heuristic: String, message: String },
}

fn io_err(path: &Path, source: std::io::Error) -> BenchError {
    BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Synthetic suite parameters. With `filter_satisfiable` each candidate is
/// probed with a generously budgeted walk solver and kept only if solved, so
/// the suite contains no (detected) unsatisfiable instances.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSpec {
    pub count: usize,
    pub num_vars: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    pub alpha: f64,
    #[serde(default = "default_true")]
    pub filter_satisfiable: bool,
    #[serde(default = "default_probe_flips")]
    pub probe_max_flips: usize,
    #[serde(default = "default_probe_tries")]
    pub probe_max_tries: usize,
}

fn default_k() -> usize {
    3
}
fn default_true() -> bool {
    true
}
fn default_probe_flips() -> usize {
    50_000
}
fn default_probe_tries() -> usize {
    10
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InstancesConfig {
    /// Directory of DIMACS `.cnf` files, loaded in filename order.
    pub dir: Option<PathBuf>,
    pub generate: Option<GenerateSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct TuneSection {
    pub enabled: bool,
    pub split_fraction: f64,
    pub samples: usize,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub max_flips: usize,
    pub max_tries: usize,
}

impl Default for TuneSection {
    fn default() -> Self {
        let t = TuneConfig::default();
        Self {
            enabled: true,
            split_fraction: t.split_fraction,
            samples: t.samples,
            sigma_lo: t.sigma_range.0,
            sigma_hi: t.sigma_range.1,
            max_flips: t.max_flips,
            max_tries: t.max_tries,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchmarkSection {
    pub max_tries: usize,
    /// 0 means "use the tuned recommendation" (or the fallback budget when
    /// tuning is disabled).
    pub max_flips: usize,
    pub fallback_max_flips: usize,
    pub sigma_rel: f64,
    pub walk_p: f64,
    pub gwsat_wp: f64,
}

impl Default for BenchmarkSection {
    fn default() -> Self {
        Self {
            max_tries: 1_000,
            max_flips: 0,
            fallback_max_flips: 10_000,
            sigma_rel: 0.2,
            walk_p: 0.5,
            gwsat_wp: 0.5,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub p_target: f64,
    pub heuristics: Vec<String>,
    pub instances: InstancesConfig,
    pub tune: TuneSection,
    pub benchmark: BenchmarkSection,
    /// Optional circuit parameter file (TOML), relative to the config file.
    pub energy_params: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            seed: 0,
            p_target: 0.99,
            heuristics: vec!["walksat-skc".into()],
            instances: InstancesConfig::default(),
            tune: TuneSection::default(),
            benchmark: BenchmarkSection::default(),
            energy_params: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.heuristics.is_empty() {
            return Err(BenchError::Config("no heuristics listed".into()));
        }
        for name in &self.heuristics {
            parse_heuristic_name(name).map_err(BenchError::Config)?;
        }
        match (&self.instances.dir, &self.instances.generate) {
            (Some(_), Some(_)) => Err(BenchError::Config(
                "instances.dir and instances.generate are mutually exclusive".into(),
            )),
            (None, None) => Err(BenchError::Config(
                "one of instances.dir or instances.generate is required".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// One line of the results CSV; one (heuristic, benchmark instance) pair.
/// Empty metric cells mean the instance was never solved in any try.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub instance_id: String,
    pub heuristic: String,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub order: usize,
    pub seed: u64,
    pub sigma_rel: f64,
    pub walk_p: f64,
    pub max_flips: usize,
    pub success_fraction: f64,
    pub opt_flips: Option<usize>,
    pub its: Option<f64>,
    pub tts_seconds: Option<f64>,
    pub energy_per_iteration_joules: f64,
    pub ets_joules: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeuristicSummary {
    pub heuristic: String,
    pub tuned: Option<TuneOutcome>,
    pub sigma_rel: f64,
    pub walk_p: f64,
    pub max_flips: usize,
    pub median_its: Option<f64>,
    pub median_tts_seconds: Option<f64>,
    pub median_ets_joules: Option<f64>,
    /// Suite-aggregate per-iteration energy split (activity merged across
    /// benchmark instances; geometry of the first instance).
    pub breakdown: Option<EnergyBreakdown>,
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: u64,
    pub p_target: f64,
    pub iteration_latency_seconds: f64,
    pub num_instances: usize,
    pub num_tuning_instances: usize,
    pub summaries: Vec<HeuristicSummary>,
    #[serde(skip)]
    pub rows: Vec<ResultRow>,
}

/// Load every `*.cnf` file under `dir`, sorted by filename for determinism.
pub fn load_instances_from_dir(dir: &Path) -> Result<Vec<(String, CnfFormula)>, BenchError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "cnf"))
        .collect();
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        let formula = cnf::parse_dimacs(&text)?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        out.push((id, formula));
    }
    if out.is_empty() {
        return Err(BenchError::Config(format!(
            "no .cnf files found in {}",
            dir.display()
        )));
    }
    Ok(out)
}

/// Generate a suite from `spec`, deterministically from `seed`.
pub fn generate_instances(
    spec: &GenerateSpec,
    seed: u64,
) -> Result<Vec<(String, CnfFormula)>, BenchError> {
    if spec.count == 0 {
        return Err(BenchError::Config("generate.count must be positive".into()));
    }
    let probe = SolverConfig {
        heuristic: Heuristic::WalksatSkc,
        walk_p: 0.5,
        max_flips: spec.probe_max_flips,
        max_tries: spec.probe_max_tries,
        seed: seed ^ 0xF117_E12F_1172_57A7,
        tie_break: TieBreak::Random,
        ..SolverConfig::default()
    };
    let mut out = Vec::with_capacity(spec.count);
    let mut candidate_seed = seed;
    let mut attempts = 0usize;
    while out.len() < spec.count {
        attempts += 1;
        if attempts > 100 * spec.count {
            return Err(BenchError::Config(format!(
                "gave up after {attempts} candidates; the satisfiable filter rejects \
                 nearly everything at num_vars = {}, alpha = {}",
                spec.num_vars, spec.alpha
            )));
        }
        let formula = cnf::generate_random_ksat(spec.num_vars, spec.k, spec.alpha, candidate_seed)?;
        candidate_seed = candidate_seed.wrapping_add(1);
        if spec.filter_satisfiable {
            let record = run_instance(&formula, &probe, "probe");
            if !record.tries.iter().any(|t| t.solved) {
                continue;
            }
        }
        let id = format!("gen-v{}-{:04}", spec.num_vars, out.len());
        out.push((id, formula));
    }
    Ok(out)
}

fn load_suite(config: &ExperimentConfig, base_dir: &Path) -> Result<Vec<(String, CnfFormula)>, BenchError> {
    if let Some(dir) = &config.instances.dir {
        load_instances_from_dir(&base_dir.join(dir))
    } else if let Some(spec) = &config.instances.generate {
        generate_instances(spec, config.seed)
    } else {
        Err(BenchError::Config("no instance source".into()))
    }
}

fn base_solver_config(
    config: &ExperimentConfig,
    heuristic: Heuristic,
    noise_override: Option<NoiseDistribution>,
) -> SolverConfig {
    let distribution = noise_override.unwrap_or(if heuristic.uses_noise() {
        NoiseDistribution::Uniform
    } else {
        NoiseDistribution::None
    });
    SolverConfig {
        heuristic,
        noise: NoiseConfig {
            distribution,
            sigma_rel: config.benchmark.sigma_rel,
            ..NoiseConfig::default()
        },
        max_flips: if config.benchmark.max_flips > 0 {
            config.benchmark.max_flips
        } else {
            config.benchmark.fallback_max_flips
        },
        max_tries: config.benchmark.max_tries,
        walk_p: config.benchmark.walk_p,
        gwsat_wp: config.benchmark.gwsat_wp,
        seed: config.seed,
        tie_break: TieBreak::Random,
    }
}

fn tune_config(config: &ExperimentConfig) -> TuneConfig {
    TuneConfig {
        split_fraction: config.tune.split_fraction,
        samples: config.tune.samples,
        sigma_range: (config.tune.sigma_lo, config.tune.sigma_hi),
        max_flips: config.tune.max_flips,
        max_tries: config.tune.max_tries,
        p_target: config.p_target,
        split_seed: config.seed,
        ..TuneConfig::default()
    }
}

/// Run the full experiment: load, split, tune, benchmark, aggregate.
pub fn run_experiment(
    config: &ExperimentConfig,
    base_dir: &Path,
) -> Result<ExperimentReport, BenchError> {
    config.validate()?;
    let params = match &config.energy_params {
        Some(path) => {
            let full = base_dir.join(path);
            let text = fs::read_to_string(&full).map_err(|e| io_err(&full, e))?;
            EnergyParams::from_toml_str(&text)
                .map_err(|e| BenchError::Config(format!("energy params: {e}")))?
        }
        None => EnergyParams::default(),
    };
    let suite = load_suite(config, base_dir)?;
    let do_tune = config.tune.enabled && suite.len() >= 2;
    let (tune_idx, bench_idx) = if do_tune {
        hyperopt::split_instances(suite.len(), config.tune.split_fraction, config.seed)
    } else {
        (Vec::new(), (0..suite.len()).collect())
    };
    let latency = latency_per_iteration(&params);
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for name in &config.heuristics {
        let (heuristic, noise_override) =
            parse_heuristic_name(name).map_err(BenchError::Config)?;
        let label = heuristic_label(heuristic, {
            let d = noise_override.unwrap_or(NoiseDistribution::None);
            if heuristic.uses_noise() && d == NoiseDistribution::None {
                NoiseDistribution::Uniform
            } else {
                d
            }
        });
        let mut solver = base_solver_config(config, heuristic, noise_override);
        let mut tuned = None;
        if do_tune {
            let tuning_refs: Vec<&CnfFormula> =
                tune_idx.iter().map(|&i| &suite[i].1).collect();
            let outcome = hyperopt::tune(&tuning_refs, &solver, &tune_config(config)).map_err(
                |message| BenchError::Tune {
                    heuristic: label.clone(),
                    message,
                },
            )?;
            match outcome.parameter {
                hyperopt::TunedParameter::SigmaRel => solver.noise.sigma_rel = outcome.best_value,
                hyperopt::TunedParameter::WalkP => solver.walk_p = outcome.best_value,
                hyperopt::TunedParameter::None => {}
            }
            if config.benchmark.max_flips == 0 {
                solver.max_flips = outcome.recommended_max_flips;
            }
            tuned = Some(outcome);
        }
        let mut its_values = Vec::new();
        let mut tts_values = Vec::new();
        let mut ets_values = Vec::new();
        let mut merged_activity = crate::energy::ActivityStats::default();
        let mut first_shape: Option<(usize, usize)> = None;
        for (slot, &idx) in bench_idx.iter().enumerate() {
            let (id, formula) = &suite[idx];
            let mut cfg = solver.clone();
            cfg.seed = hyperopt::instance_seed(config.seed, slot);
            let record = run_instance(formula, &cfg, id);
            let breakdown = iteration_energy(
                heuristic,
                cfg.noise.distribution,
                formula.num_clauses(),
                formula.num_vars(),
                &record.activity,
                &params,
            );
            merged_activity.merge(&record.activity);
            first_shape.get_or_insert((formula.num_clauses(), formula.num_vars()));
            let solved = record.tries.iter().filter(|t| t.solved).count();
            let optimum = optimal_its(&record.tries, config.p_target);
            let (opt_flips, its_v) = match optimum {
                Some((t, v)) => (Some(t), Some(v)),
                None => (None, None),
            };
            let tts_v = its_v.map(|v| tts(latency, v));
            let ets_v = its_v.map(|v| ets(breakdown.total, v));
            its_values.push(its_v);
            tts_values.push(tts_v);
            ets_values.push(ets_v);
            rows.push(ResultRow {
                instance_id: id.clone(),
                heuristic: label.clone(),
                num_vars: formula.num_vars(),
                num_clauses: formula.num_clauses(),
                order: formula.order(),
                seed: cfg.seed,
                sigma_rel: if heuristic.uses_noise() {
                    cfg.noise.sigma_rel
                } else {
                    0.0
                },
                walk_p: cfg.walk_p,
                max_flips: cfg.max_flips,
                success_fraction: solved as f64 / record.tries.len() as f64,
                opt_flips,
                its: its_v,
                tts_seconds: tts_v,
                energy_per_iteration_joules: breakdown.total,
                ets_joules: ets_v,
            });
        }
        let breakdown = first_shape.map(|(c, v)| {
            iteration_energy(
                heuristic,
                solver.noise.distribution,
                c,
                v,
                &merged_activity,
                &params,
            )
        });
        summaries.push(HeuristicSummary {
            heuristic: label,
            tuned,
            sigma_rel: solver.noise.sigma_rel,
            walk_p: solver.walk_p,
            max_flips: solver.max_flips,
            median_its: lower_median(&its_values),
            median_tts_seconds: lower_median(&tts_values),
            median_ets_joules: lower_median(&ets_values),
            breakdown,
        });
    }
    Ok(ExperimentReport {
        name: config.name.clone(),
        seed: config.seed,
        p_target: config.p_target,
        iteration_latency_seconds: latency,
        num_instances: suite.len(),
        num_tuning_instances: tune_idx.len(),
        summaries,
        rows,
    })
}

/// Serialize the per-instance rows as CSV (header + one line per row).
pub fn write_results_csv<W: Write>(rows: &[ResultRow], writer: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)
            .map_err(|e| BenchError::Config(format!("csv: {e}")))?;
    }
    w.flush()
        .map_err(|e| io_err(Path::new("<csv>"), e))?;
    Ok(())
}

pub fn results_csv_string(rows: &[ResultRow]) -> Result<String, BenchError> {
    let mut buf = Vec::new();
    write_results_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| BenchError::Config(format!("csv utf8: {e}")))
}

/// Per-heuristic energy split and medians as pretty JSON.
pub fn report_json(report: &ExperimentReport) -> Result<String, BenchError> {
    serde_json::to_string_pretty(report).map_err(|e| BenchError::Config(format!("json: {e}")))
}
