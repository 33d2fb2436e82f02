//! Stochastic local search heuristics executed on the accelerator model:
//! GSAT, WalkSAT, WalkSAT-SKC, GWSAT, MNSAT and GNSAT, with try/restart
//! orchestration and winner-take-all selection.
//!
//! The `Stepper` keeps incremental match-line distances and make/break
//! counters so a flip costs O(occurrences of the flipped variable). Its state
//! is semantically equivalent to re-running the pure functions in
//! [`crate::accel`] from scratch; the test suite asserts that equivalence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accel::{self, AcceleratorImage};
use crate::cnf::{Assignment, CnfFormula};
use crate::energy::ActivityStats;
use crate::rng::{gaussian_alias_table, quantized_uniform_noise, AliasTable, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    Gsat,
    Walksat,
    WalksatSkc,
    Gwsat,
    Mnsat,
    Gnsat,
}

impl Heuristic {
    /// Whether the heuristic needs the break path (double-threshold sensing
    /// and a second gradient pass). Only the make-only heuristic does not.
    pub fn uses_break_path(self) -> bool {
        !matches!(self, Heuristic::Mnsat)
    }

    /// Whether per-variable analog noise is injected before selection.
    pub fn uses_noise(self) -> bool {
        matches!(self, Heuristic::Gnsat | Heuristic::Mnsat)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseDistribution {
    None,
    Uniform,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Uniform among maximal entries; models the analog WTA race.
    Random,
    /// Deterministic lowest index, for reproducible hand traces.
    LowestIndex,
}

/// Noise injection parameters. The absolute noise scale is
/// `sigma_n = sigma_rel * d_max` with `d_max` the largest clause fan-in of
/// any variable, i.e. the full-scale value of a gradient line. For the
/// uniform profile the DAC amplitude is `sigma_n * sqrt(3)` so both profiles
/// share the same standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub distribution: NoiseDistribution,
    pub sigma_rel: f64,
    pub dac_bits: u32,
    pub gaussian_levels: usize,
    pub gaussian_span_sigmas: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            distribution: NoiseDistribution::None,
            sigma_rel: 0.0,
            dac_bits: 4,
            gaussian_levels: 64,
            gaussian_span_sigmas: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub heuristic: Heuristic,
    pub noise: NoiseConfig,
    pub max_flips: usize,
    pub max_tries: usize,
    pub walk_p: f64,
    pub gwsat_wp: f64,
    pub seed: u64,
    pub tie_break: TieBreak,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            heuristic: Heuristic::Gsat,
            noise: NoiseConfig::default(),
            max_flips: 10_000,
            max_tries: 100,
            walk_p: 0.5,
            gwsat_wp: 0.5,
            seed: 0,
            tie_break: TieBreak::Random,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.walk_p) || !(0.0..=1.0).contains(&self.gwsat_wp) {
            return Err("walk probabilities must lie in [0, 1]".into());
        }
        if self.max_tries == 0 {
            return Err("max_tries must be at least 1".into());
        }
        if self.noise.sigma_rel < 0.0 {
            return Err("sigma_rel must be nonnegative".into());
        }
        Ok(())
    }
}

/// Parse a CLI heuristic name. `gnsat-n` / `gnsat-u` and `mnsat-n` /
/// `mnsat-u` select the noise profile; plain `gnsat` / `mnsat` keep whatever
/// the noise config says.
pub fn parse_heuristic_name(
    name: &str,
) -> Result<(Heuristic, Option<NoiseDistribution>), String> {
    match name.to_ascii_lowercase().as_str() {
        "gsat" => Ok((Heuristic::Gsat, Some(NoiseDistribution::None))),
        "walksat" => Ok((Heuristic::Walksat, Some(NoiseDistribution::None))),
        "walksat-skc" => Ok((Heuristic::WalksatSkc, Some(NoiseDistribution::None))),
        "gwsat" => Ok((Heuristic::Gwsat, Some(NoiseDistribution::None))),
        "mnsat" => Ok((Heuristic::Mnsat, None)),
        "mnsat-u" => Ok((Heuristic::Mnsat, Some(NoiseDistribution::Uniform))),
        "mnsat-n" => Ok((Heuristic::Mnsat, Some(NoiseDistribution::Normal))),
        "gnsat" => Ok((Heuristic::Gnsat, None)),
        "gnsat-u" => Ok((Heuristic::Gnsat, Some(NoiseDistribution::Uniform))),
        "gnsat-n" => Ok((Heuristic::Gnsat, Some(NoiseDistribution::Normal))),
        other => Err(format!(
            "unknown heuristic '{other}'; valid names: gsat, walksat, walksat-skc, \
             gwsat, mnsat, mnsat-u, mnsat-n, gnsat, gnsat-u, gnsat-n"
        )),
    }
}

pub fn heuristic_label(heuristic: Heuristic, noise: NoiseDistribution) -> String {
    match (heuristic, noise) {
        (Heuristic::Gnsat, NoiseDistribution::Uniform) => "gnsat-u".into(),
        (Heuristic::Gnsat, NoiseDistribution::Normal) => "gnsat-n".into(),
        (Heuristic::Gnsat, NoiseDistribution::None) => "gnsat".into(),
        (Heuristic::Mnsat, NoiseDistribution::Uniform) => "mnsat-u".into(),
        (Heuristic::Mnsat, NoiseDistribution::Normal) => "mnsat-n".into(),
        (Heuristic::Mnsat, NoiseDistribution::None) => "mnsat".into(),
        (Heuristic::Gsat, _) => "gsat".into(),
        (Heuristic::Walksat, _) => "walksat".into(),
        (Heuristic::WalksatSkc, _) => "walksat-skc".into(),
        (Heuristic::Gwsat, _) => "gwsat".into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TryResult {
    pub solved: bool,
    pub flips_used: usize,
    pub final_unsat: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub config: SolverConfig,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub order: usize,
    pub tries: Vec<TryResult>,
    pub activity: ActivityStats,
}

/// What one step did; enough to check the flip identity
/// `w_after = w_before - make + break` from outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepInfo {
    pub flipped: usize,
    pub w_before: usize,
    pub make_flipped: i32,
    pub break_flipped: i32,
}

/// Argmax with explicit tie policy. `Random` keeps a reservoir over maximal
/// entries so each is returned with equal probability.
pub fn wta_select(values: &[f64], tie_break: TieBreak, rng: &mut RngState) -> usize {
    assert!(!values.is_empty(), "wta_select needs at least one value");
    let mut best = 0usize;
    let mut best_val = values[0];
    let mut ties = 1u64;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > best_val {
            best = i;
            best_val = v;
            ties = 1;
        } else if v == best_val {
            match tie_break {
                TieBreak::LowestIndex => {}
                TieBreak::Random => {
                    ties += 1;
                    if rng.next_unit() < 1.0 / ties as f64 {
                        best = i;
                    }
                }
            }
        }
    }
    best
}

fn select_among<F: Fn(usize) -> f64>(
    candidates: &[usize],
    value: F,
    tie_break: TieBreak,
    rng: &mut RngState,
) -> usize {
    let vals: Vec<f64> = candidates.iter().map(|&i| value(i)).collect();
    candidates[wta_select(&vals, tie_break, rng)]
}

enum NoiseSource {
    None,
    Uniform { amplitude: f64, bits: u32 },
    Gaussian(AliasTable),
}

impl NoiseSource {
    fn build(noise: &NoiseConfig, d_max: usize) -> Self {
        let sigma_n = noise.sigma_rel * d_max as f64;
        if sigma_n <= 0.0 {
            return NoiseSource::None;
        }
        match noise.distribution {
            NoiseDistribution::None => NoiseSource::None,
            NoiseDistribution::Uniform => NoiseSource::Uniform {
                amplitude: sigma_n * 3f64.sqrt(),
                bits: noise.dac_bits,
            },
            NoiseDistribution::Normal => NoiseSource::Gaussian(
                gaussian_alias_table(noise.gaussian_levels, sigma_n, noise.gaussian_span_sigmas)
                    .expect("gaussian table parameters validated by NoiseConfig"),
            ),
        }
    }

    fn sample(&self, rng: &mut RngState) -> f64 {
        match self {
            NoiseSource::None => 0.0,
            NoiseSource::Uniform { amplitude, bits } => {
                quantized_uniform_noise(*bits, *amplitude, rng)
            }
            NoiseSource::Gaussian(table) => table.sample(rng),
        }
    }

    fn is_none(&self) -> bool {
        matches!(self, NoiseSource::None)
    }
}

/// Incremental accelerator state for one try.
pub struct Stepper<'a> {
    image: &'a AcceleratorImage,
    assignment: Assignment,
    /// Satisfied-literal count per clause (the match-line distance).
    delta: Vec<u32>,
    /// Sum of satisfied member variable indices per clause; when `delta == 1`
    /// this is the index of the clause's critical variable.
    critical: Vec<usize>,
    unsat: Vec<usize>,
    unsat_pos: Vec<usize>,
    make: Vec<i32>,
    brk: Vec<i32>,
    n_single: usize,
    total_delta: u64,
    sum_make: u64,
    sum_single_len: u64,
    noise: NoiseSource,
    scratch: Vec<f64>,
}

const NOT_IN_UNSAT: usize = usize::MAX;

impl<'a> Stepper<'a> {
    pub fn new(image: &'a AcceleratorImage, assignment: Assignment, noise: &NoiseConfig) -> Self {
        let c = image.num_clauses();
        let v = image.num_vars();
        assert_eq!(assignment.len(), v);
        let mut s = Self {
            image,
            assignment,
            delta: vec![0; c],
            critical: vec![0; c],
            unsat: Vec::with_capacity(c),
            unsat_pos: vec![NOT_IN_UNSAT; c],
            make: vec![0; v],
            brk: vec![0; v],
            n_single: 0,
            total_delta: 0,
            sum_make: 0,
            sum_single_len: 0,
            noise: NoiseSource::build(noise, image.max_occurrence()),
            scratch: vec![0.0; v],
        };
        s.rebuild();
        s
    }

    fn rebuild(&mut self) {
        let image = self.image;
        let bits = self.assignment.bits();
        for var in 0..image.num_vars() {
            for &(clause, negated) in image.occurrences(var) {
                if bits[var] != negated {
                    self.delta[clause] += 1;
                    self.critical[clause] += var;
                }
            }
        }
        for clause in 0..image.num_clauses() {
            let len = image.clause_len(clause) as u64;
            self.total_delta += self.delta[clause] as u64;
            match self.delta[clause] {
                0 => {
                    self.unsat_pos[clause] = self.unsat.len();
                    self.unsat.push(clause);
                    self.sum_make += len;
                    for &(u, _) in image.clause_literals(clause) {
                        self.make[u] += 1;
                    }
                }
                1 => {
                    self.n_single += 1;
                    self.sum_single_len += len;
                    self.brk[self.critical[clause]] += 1;
                }
                _ => {}
            }
        }
    }

    pub fn image(&self) -> &AcceleratorImage {
        self.image
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn unsat_count(&self) -> usize {
        self.unsat.len()
    }

    pub fn is_satisfied(&self) -> bool {
        self.unsat.is_empty()
    }

    pub fn make_of(&self, var: usize) -> i32 {
        self.make[var]
    }

    pub fn break_of(&self, var: usize) -> i32 {
        self.brk[var]
    }

    pub fn gain_of(&self, var: usize) -> i32 {
        self.make[var] - self.brk[var]
    }

    pub fn single_sat_count(&self) -> usize {
        self.n_single
    }

    fn remove_unsat(&mut self, clause: usize) {
        let pos = self.unsat_pos[clause];
        let last = *self.unsat.last().expect("clause is in the unsat list");
        self.unsat[pos] = last;
        self.unsat_pos[last] = pos;
        self.unsat.pop();
        self.unsat_pos[clause] = NOT_IN_UNSAT;
    }

    /// Flip one variable, updating all incremental counters.
    pub fn flip(&mut self, var: usize) {
        let image = self.image;
        let bit = self.assignment.bits()[var];
        for &(clause, negated) in image.occurrences(var) {
            let was_sat = bit != negated;
            let d0 = self.delta[clause];
            let len = image.clause_len(clause) as u64;
            // leave old category
            match d0 {
                0 => {
                    self.remove_unsat(clause);
                    self.sum_make -= len;
                    for &(u, _) in image.clause_literals(clause) {
                        self.make[u] -= 1;
                    }
                }
                1 => {
                    self.brk[self.critical[clause]] -= 1;
                    self.n_single -= 1;
                    self.sum_single_len -= len;
                }
                _ => {}
            }
            let d1 = if was_sat {
                self.critical[clause] -= var;
                self.total_delta -= 1;
                d0 - 1
            } else {
                self.critical[clause] += var;
                self.total_delta += 1;
                d0 + 1
            };
            self.delta[clause] = d1;
            // enter new category
            match d1 {
                0 => {
                    self.unsat_pos[clause] = self.unsat.len();
                    self.unsat.push(clause);
                    self.sum_make += len;
                    for &(u, _) in image.clause_literals(clause) {
                        self.make[u] += 1;
                    }
                }
                1 => {
                    self.brk[self.critical[clause]] += 1;
                    self.n_single += 1;
                    self.sum_single_len += len;
                }
                _ => {}
            }
        }
        self.assignment.flip(var);
    }

    /// One iteration of the configured heuristic. Requires at least one
    /// violated clause.
    pub fn step(&mut self, config: &SolverConfig, rng: &mut RngState) -> StepInfo {
        assert!(!self.unsat.is_empty(), "step requires an unsatisfied state");
        let var = match config.heuristic {
            Heuristic::Gsat => self.select_gsat(config, rng),
            Heuristic::Gnsat => self.select_noisy(config, rng, false),
            Heuristic::Mnsat => self.select_noisy(config, rng, true),
            Heuristic::Walksat => self.select_walksat(config.walk_p, config, rng),
            Heuristic::WalksatSkc => self.select_walksat_skc(config.walk_p, config, rng),
            Heuristic::Gwsat => {
                if rng.next_unit() < config.walk_p {
                    self.select_gsat(config, rng)
                } else {
                    self.select_walksat(config.gwsat_wp, config, rng)
                }
            }
        };
        let info = StepInfo {
            flipped: var,
            w_before: self.unsat.len(),
            make_flipped: self.make[var],
            break_flipped: self.brk[var],
        };
        self.flip(var);
        info
    }

    fn select_gsat(&mut self, config: &SolverConfig, rng: &mut RngState) -> usize {
        for v in 0..self.image.num_vars() {
            self.scratch[v] = (self.make[v] - self.brk[v]) as f64;
        }
        wta_select(&self.scratch, config.tie_break, rng)
    }

    /// GNSAT / MNSAT: metric plus per-variable noise, argmax over all
    /// variables.
    fn select_noisy(&mut self, config: &SolverConfig, rng: &mut RngState, make_only: bool) -> usize {
        for v in 0..self.image.num_vars() {
            let base = if make_only {
                self.make[v] as f64
            } else {
                (self.make[v] - self.brk[v]) as f64
            };
            self.scratch[v] = base + self.noise.sample(rng);
        }
        wta_select(&self.scratch, config.tie_break, rng)
    }

    fn pick_unsat_clause(&self, rng: &mut RngState) -> usize {
        self.unsat[rng.below(self.unsat.len())]
    }

    fn select_walksat(&mut self, p: f64, config: &SolverConfig, rng: &mut RngState) -> usize {
        let clause = self.pick_unsat_clause(rng);
        let members = self.image.clause_literals(clause);
        if rng.next_unit() > p {
            let idxs: Vec<usize> = members.iter().map(|&(v, _)| v).collect();
            select_among(
                &idxs,
                |v| (self.make[v] - self.brk[v]) as f64,
                config.tie_break,
                rng,
            )
        } else {
            members[rng.below(members.len())].0
        }
    }

    fn select_walksat_skc(&mut self, p: f64, config: &SolverConfig, rng: &mut RngState) -> usize {
        let clause = self.pick_unsat_clause(rng);
        let members: Vec<usize> = self
            .image
            .clause_literals(clause)
            .iter()
            .map(|&(v, _)| v)
            .collect();
        let freebies: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&v| self.brk[v] == 0)
            .collect();
        if !freebies.is_empty() {
            // zero-break flip, taken regardless of p
            return select_among(&freebies, |_| 0.0, config.tie_break, rng);
        }
        if rng.next_unit() < p {
            members[rng.below(members.len())]
        } else {
            select_among(&members, |v| -(self.brk[v] as f64), config.tie_break, rng)
        }
    }

    fn record_activity(&self, config: &SolverConfig, activity: &mut ActivityStats) {
        let c = self.image.num_clauses() as f64;
        let v = self.image.num_vars() as f64;
        activity.iterations += 1;
        activity.alpha_ml_sum += self.total_delta as f64 / (c * v);
        let (bl_conducting, passes) = if config.heuristic.uses_break_path() {
            ((self.sum_make + self.sum_single_len) as f64, 2.0)
        } else {
            (self.sum_make as f64, 1.0)
        };
        activity.alpha_bl_sum += bl_conducting / (passes * c * v);
        activity.comparator_fires += if config.heuristic.uses_break_path() {
            (self.unsat.len() + self.n_single) as u64
        } else {
            self.unsat.len() as u64
        };
        activity.wta_selections += 1;
        activity.register_writes += 1;
        if config.heuristic.uses_noise() && !self.noise.is_none() {
            activity.noise_samples += self.image.num_vars() as u64;
        }
    }
}

pub struct TryOutcome {
    pub result: TryResult,
    pub assignment: Assignment,
    pub activity: ActivityStats,
}

/// Run one try: random initial assignment from the try's own RNG stream,
/// then iterate the configured heuristic until satisfied or `max_flips`.
pub fn run_try(image: &AcceleratorImage, config: &SolverConfig, try_index: u64) -> TryOutcome {
    let mut rng = RngState::for_stream(config.seed, try_index);
    let assignment = Assignment::random(image.num_vars(), &mut rng);
    let mut stepper = Stepper::new(image, assignment, &config.noise);
    let mut activity = ActivityStats::default();
    let mut solved = stepper.is_satisfied();
    let mut flips_used = 0usize;
    if !solved {
        for t in 1..=config.max_flips {
            stepper.record_activity(config, &mut activity);
            stepper.step(config, &mut rng);
            if stepper.is_satisfied() {
                solved = true;
                flips_used = t;
                break;
            }
        }
        if !solved {
            flips_used = config.max_flips;
        }
    }
    TryOutcome {
        result: TryResult {
            solved,
            flips_used,
            final_unsat: stepper.unsat_count(),
        },
        assignment: stepper.assignment,
        activity,
    }
}

/// Run `max_tries` independent tries (in parallel) and aggregate. Every
/// reported solution is re-verified against the image before being counted.
pub fn run_instance(formula: &CnfFormula, config: &SolverConfig, instance_id: &str) -> RunRecord {
    let image = accel::compile(formula);
    let outcomes: Vec<TryOutcome> = (0..config.max_tries as u64)
        .into_par_iter()
        .map(|try_index| {
            let outcome = run_try(&image, config, try_index);
            if outcome.result.solved {
                let eval = formula
                    .evaluate(&outcome.assignment)
                    .expect("assignment length fixed by construction");
                assert_eq!(eval.unsat_count, 0, "solver reported an invalid solution");
            }
            outcome
        })
        .collect();
    let mut activity = ActivityStats::default();
    let mut tries = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        activity.merge(&outcome.activity);
        tries.push(outcome.result);
    }
    RunRecord {
        instance_id: instance_id.to_string(),
        config: config.clone(),
        num_vars: formula.num_vars(),
        num_clauses: formula.num_clauses(),
        order: formula.order(),
        tries,
        activity,
    }
}
