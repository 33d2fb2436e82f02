//! Hyperparameter tuning on a held-out instance split.
//!
//! A fraction of the benchmark instances is reserved for tuning. For noise
//! heuristics the relative noise scale `sigma_rel` is swept over a log-spaced
//! grid; for walk heuristics the walk probability is swept linearly over
//! `[0, 1]`. At each grid point every tuning instance is solved with a long
//! flip budget and scored by its optimal iterations-to-solution; the grid
//! point with the lowest median score wins, and the median optimal budget at
//! that point becomes the recommended `max_flips` for the benchmark split.

use serde::Serialize;

use crate::cnf::CnfFormula;
use crate::metrics::{lower_median, optimal_its};
use crate::rng::RngState;
use crate::solvers::{run_instance, Heuristic, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuneConfig {
    /// Fraction of instances held out for tuning.
    pub split_fraction: f64,
    /// Grid points per swept parameter.
    pub samples: usize,
    /// `sigma_rel` sweep bounds (log-spaced), for noise heuristics.
    pub sigma_range: (f64, f64),
    /// `walk_p` sweep bounds (linear), for walk heuristics.
    pub walk_p_range: (f64, f64),
    /// Flip budget per try while tuning.
    pub max_flips: usize,
    /// Tries per instance while tuning.
    pub max_tries: usize,
    /// Success-probability target for the ITS score.
    pub p_target: f64,
    /// Seed for the instance split shuffle.
    pub split_seed: u64,
}

impl Default for TuneConfig {
    fn default() -> Self {
        Self {
            split_fraction: 0.2,
            samples: 20,
            sigma_range: (0.01, 2.0),
            walk_p_range: (0.0, 1.0),
            max_flips: 50_000,
            max_tries: 100,
            p_target: 0.99,
            split_seed: 0,
        }
    }
}

impl TuneConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..1.0).contains(&self.split_fraction) || self.split_fraction <= 0.0 {
            return Err("split_fraction must lie in (0, 1)".into());
        }
        if self.samples < 2 {
            return Err("need at least 2 grid samples".into());
        }
        if !(self.sigma_range.0 > 0.0 && self.sigma_range.1 > self.sigma_range.0) {
            return Err("sigma_range must be positive and increasing".into());
        }
        if !(0.0..=1.0).contains(&self.walk_p_range.0)
            || !(self.walk_p_range.0..=1.0).contains(&self.walk_p_range.1)
        {
            return Err("walk_p_range must be increasing within [0, 1]".into());
        }
        Ok(())
    }
}

/// Which knob the sweep adjusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TunedParameter {
    SigmaRel,
    WalkP,
    /// Heuristic has no free parameter; only the flip budget was fit.
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub value: f64,
    /// Median optimal ITS across tuning instances; `None` when a majority of
    /// instances never solved at this grid point.
    pub median_its: Option<f64>,
    /// Median optimal restart budget across solved instances.
    pub median_opt_flips: Option<usize>,
    pub solved_instances: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TuneOutcome {
    pub parameter: TunedParameter,
    /// Winning grid value (`sigma_rel` or `walk_p`); 0 for `None`.
    pub best_value: f64,
    pub median_its: f64,
    pub recommended_max_flips: usize,
    pub grid: Vec<GridPoint>,
    pub warnings: Vec<String>,
}

/// Deterministic tune/benchmark split: Fisher–Yates shuffle of the indices,
/// first `round(n * fraction)` (at least 1, at most `n - 1`) go to tuning.
/// Both halves are returned sorted.
pub fn split_instances(n: usize, fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    assert!(n >= 2, "need at least 2 instances to split");
    assert!((0.0..1.0).contains(&fraction) && fraction > 0.0);
    let mut order: Vec<usize> = (0..n).collect();
    // dedicated stream id so the shuffle never aliases a solver try stream
    let mut rng = RngState::for_stream(seed, 0x5B17_5B17_5B17_5B17);
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        order.swap(i, j);
    }
    let take = ((n as f64 * fraction).round() as usize).clamp(1, n - 1);
    let mut tune: Vec<usize> = order[..take].to_vec();
    let mut bench: Vec<usize> = order[take..].to_vec();
    tune.sort_unstable();
    bench.sort_unstable();
    (tune, bench)
}

/// Log-spaced grid over `[lo, hi]`, inclusive.
pub fn log_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && samples >= 2);
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..samples)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (samples - 1) as f64).exp())
        .collect()
}

/// Linear grid over `[lo, hi]`, inclusive.
pub fn linear_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    assert!(hi >= lo && samples >= 2);
    (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect()
}

fn swept_parameter(heuristic: Heuristic) -> TunedParameter {
    if heuristic.uses_noise() {
        TunedParameter::SigmaRel
    } else {
        match heuristic {
            Heuristic::Walksat | Heuristic::WalksatSkc | Heuristic::Gwsat => TunedParameter::WalkP,
            _ => TunedParameter::None,
        }
    }
}

/// Per-instance solver seed so different instances in one sweep do not share
/// RNG streams.
pub fn instance_seed(base: u64, index: usize) -> u64 {
    base ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn evaluate_grid_point(
    instances: &[&CnfFormula],
    config: &SolverConfig,
    p_target: f64,
) -> (Option<f64>, Option<usize>, usize) {
    let mut scores: Vec<Option<f64>> = Vec::with_capacity(instances.len());
    let mut opt_budgets: Vec<Option<f64>> = Vec::with_capacity(instances.len());
    let mut solved = 0usize;
    for (idx, formula) in instances.iter().enumerate() {
        let mut cfg = config.clone();
        cfg.seed = instance_seed(config.seed, idx);
        let record = run_instance(formula, &cfg, &format!("tune-{idx}"));
        match optimal_its(&record.tries, p_target) {
            Some((t_opt, its)) => {
                solved += 1;
                scores.push(Some(its));
                opt_budgets.push(Some(t_opt as f64));
            }
            None => {
                scores.push(None);
                opt_budgets.push(None);
            }
        }
    }
    let median_its = lower_median(&scores);
    let median_flips = lower_median(&opt_budgets).map(|f| (f.round() as usize).max(1));
    (median_its, median_flips, solved)
}

/// Sweep the heuristic's free parameter over the tuning instances and return
/// the winning value plus a recommended benchmark flip budget.
pub fn tune(
    instances: &[&CnfFormula],
    base: &SolverConfig,
    tune_cfg: &TuneConfig,
) -> Result<TuneOutcome, String> {
    tune_cfg.validate()?;
    base.validate()?;
    if instances.is_empty() {
        return Err("no tuning instances".into());
    }
    let parameter = swept_parameter(base.heuristic);
    let values: Vec<f64> = match parameter {
        TunedParameter::SigmaRel => {
            log_grid(tune_cfg.sigma_range.0, tune_cfg.sigma_range.1, tune_cfg.samples)
        }
        TunedParameter::WalkP => {
            linear_grid(tune_cfg.walk_p_range.0, tune_cfg.walk_p_range.1, tune_cfg.samples)
        }
        TunedParameter::None => vec![0.0],
    };
    let mut warnings = Vec::new();
    let mut grid = Vec::with_capacity(values.len());
    for &value in &values {
        let mut cfg = base.clone();
        cfg.max_flips = tune_cfg.max_flips;
        cfg.max_tries = tune_cfg.max_tries;
        match parameter {
            TunedParameter::SigmaRel => cfg.noise.sigma_rel = value,
            TunedParameter::WalkP => cfg.walk_p = value,
            TunedParameter::None => {}
        }
        let (median_its, median_opt_flips, solved) =
            evaluate_grid_point(instances, &cfg, tune_cfg.p_target);
        if solved < instances.len() {
            warnings.push(format!(
                "grid value {value:.4}: {} of {} tuning instances never solved within \
                 {} flips; they count as unsolved in the median",
                instances.len() - solved,
                instances.len(),
                tune_cfg.max_flips
            ));
        }
        grid.push(GridPoint {
            value,
            median_its,
            median_opt_flips,
            solved_instances: solved,
        });
    }
    let best = grid
        .iter()
        .filter(|g| g.median_its.is_some())
        .min_by(|a, b| {
            a.median_its
                .partial_cmp(&b.median_its)
                .expect("ITS is never NaN")
        })
        .ok_or_else(|| {
            "tuning failed: no grid point solved a majority of the tuning instances".to_string()
        })?;
    Ok(TuneOutcome {
        parameter,
        best_value: best.value,
        median_its: best.median_its.expect("filtered to finite medians"),
        recommended_max_flips: best.median_opt_flips.expect("finite median implies solves"),
        grid,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::generate_random_ksat;
    use crate::solvers::{NoiseConfig, NoiseDistribution, TieBreak};

    /// Small satisfiable 3-SAT instances, filtered by actually solving them.
    fn satisfiable_suite(count: usize, num_vars: usize) -> Vec<CnfFormula> {
        let probe = SolverConfig {
            heuristic: Heuristic::WalksatSkc,
            walk_p: 0.5,
            max_flips: 20_000,
            max_tries: 8,
            seed: 99,
            tie_break: TieBreak::Random,
            ..SolverConfig::default()
        };
        let mut out = Vec::new();
        let mut seed = 1000u64;
        while out.len() < count {
            let f = generate_random_ksat(num_vars, 3, 4.0, seed).unwrap();
            seed += 1;
            let record = run_instance(&f, &probe, "probe");
            if record.tries.iter().any(|t| t.solved) {
                out.push(f);
            }
        }
        out
    }

    #[test]
    fn split_is_deterministic_and_disjoint() {
        let (t1, b1) = split_instances(50, 0.2, 7);
        let (t2, b2) = split_instances(50, 0.2, 7);
        assert_eq!(t1, t2);
        assert_eq!(b1, b2);
        assert_eq!(t1.len(), 10);
        assert_eq!(b1.len(), 40);
        let mut all: Vec<usize> = t1.iter().chain(&b1).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..50).collect::<Vec<_>>());
        let (t3, _) = split_instances(50, 0.2, 8);
        assert_ne!(t1, t3, "different seeds should pick different holdouts");
    }

    #[test]
    fn split_edge_sizes() {
        let (t, b) = split_instances(2, 0.2, 0);
        assert_eq!(t.len(), 1);
        assert_eq!(b.len(), 1);
        let (t, b) = split_instances(3, 0.9, 0);
        assert_eq!(t.len(), 2); // clamped to n - 1
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = log_grid(0.01, 2.0, 20);
        assert_eq!(g.len(), 20);
        assert!((g[0] - 0.01).abs() < 1e-12);
        assert!((g[19] - 2.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let l = linear_grid(0.0, 1.0, 5);
        assert_eq!(l, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn swept_parameter_per_heuristic() {
        assert_eq!(swept_parameter(Heuristic::Gnsat), TunedParameter::SigmaRel);
        assert_eq!(swept_parameter(Heuristic::Mnsat), TunedParameter::SigmaRel);
        assert_eq!(swept_parameter(Heuristic::Walksat), TunedParameter::WalkP);
        assert_eq!(swept_parameter(Heuristic::Gwsat), TunedParameter::WalkP);
        assert_eq!(swept_parameter(Heuristic::Gsat), TunedParameter::None);
    }

    #[test]
    fn tune_sigma_on_small_suite() {
        let suite = satisfiable_suite(4, 10);
        let refs: Vec<&CnfFormula> = suite.iter().collect();
        let base = SolverConfig {
            heuristic: Heuristic::Gnsat,
            noise: NoiseConfig {
                distribution: NoiseDistribution::Uniform,
                sigma_rel: 0.1,
                ..NoiseConfig::default()
            },
            seed: 42,
            ..SolverConfig::default()
        };
        let cfg = TuneConfig {
            samples: 4,
            sigma_range: (0.05, 1.0),
            max_flips: 2_000,
            max_tries: 30,
            ..TuneConfig::default()
        };
        let a = tune(&refs, &base, &cfg).unwrap();
        let b = tune(&refs, &base, &cfg).unwrap();
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.recommended_max_flips, b.recommended_max_flips);
        assert_eq!(a.parameter, TunedParameter::SigmaRel);
        assert!(a.best_value >= 0.05 && a.best_value <= 1.0);
        assert!(a.median_its.is_finite() && a.median_its >= 1.0);
        assert!(a.recommended_max_flips >= 1 && a.recommended_max_flips <= 2_000);
        assert_eq!(a.grid.len(), 4);
    }

    #[test]
    fn tune_walk_p_on_small_suite() {
        let suite = satisfiable_suite(3, 10);
        let refs: Vec<&CnfFormula> = suite.iter().collect();
        let base = SolverConfig {
            heuristic: Heuristic::WalksatSkc,
            seed: 7,
            ..SolverConfig::default()
        };
        let cfg = TuneConfig {
            samples: 3,
            max_flips: 2_000,
            max_tries: 20,
            ..TuneConfig::default()
        };
        let out = tune(&refs, &base, &cfg).unwrap();
        assert_eq!(out.parameter, TunedParameter::WalkP);
        assert!((0.0..=1.0).contains(&out.best_value));
        assert_eq!(
            out.grid.iter().map(|g| g.value).collect::<Vec<_>>(),
            vec![0.0, 0.5, 1.0]
        );
    }

    #[test]
    fn tune_gsat_fits_budget_only() {
        let suite = satisfiable_suite(3, 10);
        let refs: Vec<&CnfFormula> = suite.iter().collect();
        let base = SolverConfig {
            heuristic: Heuristic::Gsat,
            seed: 3,
            ..SolverConfig::default()
        };
        let cfg = TuneConfig {
            samples: 4,
            max_flips: 2_000,
            max_tries: 20,
            ..TuneConfig::default()
        };
        let out = tune(&refs, &base, &cfg).unwrap();
        assert_eq!(out.parameter, TunedParameter::None);
        assert_eq!(out.grid.len(), 1);
    }

    #[test]
    fn tune_rejects_bad_config() {
        let suite = satisfiable_suite(2, 8);
        let refs: Vec<&CnfFormula> = suite.iter().collect();
        let base = SolverConfig::default();
        let bad = TuneConfig {
            samples: 1,
            ..TuneConfig::default()
        };
        assert!(tune(&refs, &base, &bad).is_err());
        assert!(tune(&[], &base, &TuneConfig::default()).is_err());
    }
}
