//! Benchmark figures of merit: iterations-to-solution (ITS), time- and
//! energy-to-solution, and the hardware mapping-cost comparison against a
//! dense Ising/Hopfield embedding.

use serde::Serialize;

use crate::solvers::TryResult;

/// Default target success probability for *-to-solution metrics.
pub const DEFAULT_P_TARGET: f64 = 0.99;

/// Fraction of tries that found a solution within `t` iterations.
pub fn success_probability(tries: &[TryResult], t: usize) -> f64 {
    if tries.is_empty() {
        return 0.0;
    }
    let hits = tries
        .iter()
        .filter(|r| r.solved && r.flips_used <= t)
        .count();
    hits as f64 / tries.len() as f64
}

/// Expected iterations for `p_target` confidence given per-try success
/// probability `p` at budget `t`:
/// `ITS = t * ln(1 - p_target) / ln(1 - p)`.
///
/// `p = 1` short-circuits to `t` (every try succeeds within budget);
/// `p = 0` yields `None` (the instance is unreachable at this budget).
pub fn its(t: usize, p: f64, p_target: f64) -> Option<f64> {
    assert!(t >= 1, "ITS is defined for budgets of at least one iteration");
    assert!(
        (0.0..1.0).contains(&p_target) && p_target > 0.0,
        "p_target must lie in (0, 1)"
    );
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
    if p <= 0.0 {
        None
    } else if p >= 1.0 {
        Some(t as f64)
    } else {
        Some(t as f64 * (1.0 - p_target).ln() / (1.0 - p).ln())
    }
}

/// ITS evaluated at every candidate restart budget. The per-try success
/// probability is a step function that only changes where some try solved,
/// and ITS grows linearly in `t` between steps, so the curve is sampled at
/// the distinct solve times.
#[derive(Debug, Clone, Serialize)]
pub struct ItsCurve {
    /// Distinct solve times, ascending.
    pub budgets: Vec<usize>,
    /// `ITS(budget)`; same length as `budgets`.
    pub its: Vec<f64>,
}

impl ItsCurve {
    pub fn from_tries(tries: &[TryResult], p_target: f64) -> Self {
        let mut budgets: Vec<usize> = tries
            .iter()
            .filter(|r| r.solved)
            .map(|r| r.flips_used.max(1))
            .collect();
        budgets.sort_unstable();
        budgets.dedup();
        let its_values = budgets
            .iter()
            .map(|&t| {
                its(t, success_probability(tries, t), p_target)
                    .expect("p > 0 at a solve time by construction")
            })
            .collect();
        Self {
            budgets,
            its: its_values,
        }
    }

    /// Restart budget minimizing ITS and the minimum value. Ties go to the
    /// smallest budget; `None` when no try ever solved.
    pub fn optimal(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (&t, &v) in self.budgets.iter().zip(&self.its) {
            match best {
                Some((_, bv)) if v >= bv => {}
                _ => best = Some((t, v)),
            }
        }
        best
    }
}

/// ITS at the curve's optimal budget, or `None` if the instance was never
/// solved.
pub fn optimal_its(tries: &[TryResult], p_target: f64) -> Option<(usize, f64)> {
    ItsCurve::from_tries(tries, p_target).optimal()
}

/// Time-to-solution in seconds: iteration latency times ITS.
pub fn tts(iteration_latency: f64, its: f64) -> f64 {
    iteration_latency * its
}

/// Energy-to-solution in joules: mean iteration energy times ITS.
pub fn ets(iteration_energy: f64, its: f64) -> f64 {
    iteration_energy * its
}

/// Physical cell count for the two-array (clause matrix + gradient matrix)
/// mapping of a `C x V` instance: `4 C V` devices.
pub fn coupling_count_tcam(num_vars: usize, num_clauses: usize) -> u64 {
    4 * num_clauses as u64 * num_vars as u64
}

/// Coupling count for a dense Hopfield/Ising embedding with one auxiliary
/// spin per clause beyond the first two literals: `2 (V + (k - 2) C)^2`.
pub fn coupling_count_dense(num_vars: usize, num_clauses: usize, k: usize) -> u64 {
    assert!(k >= 2);
    let n = num_vars as u64 + (k as u64 - 2) * num_clauses as u64;
    2 * n * n
}

/// Per-instance mapping advantage: dense coupling count over clause-matrix
/// cell count.
pub fn mapping_advantage(num_vars: usize, num_clauses: usize, k: usize) -> f64 {
    coupling_count_dense(num_vars, num_clauses, k) as f64
        / coupling_count_tcam(num_vars, num_clauses) as f64
}

/// Asymptotic mapping advantage at clause density `alpha = C / V`:
/// `(2/4) (1 + (k - 2) alpha)^2 / alpha`.
pub fn asymptotic_advantage(k: usize, alpha: f64) -> f64 {
    assert!(k >= 2 && alpha > 0.0);
    let b = 1.0 + (k as f64 - 2.0) * alpha;
    0.5 * b * b / alpha
}

/// Lower median: for even length the smaller of the two central elements.
/// `None` values (unsolved instances) order above every finite value, so a
/// majority of solved instances still yields a finite median.
pub fn lower_median(values: &[Option<f64>]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<Option<f64>> = values.to_vec();
    sorted.sort_by(|a, b| match (a, b) {
        (Some(x), Some(y)) => x.partial_cmp(y).expect("metric values are never NaN"),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    sorted[(sorted.len() - 1) / 2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(solved: bool, flips: usize) -> TryResult {
        TryResult {
            solved,
            flips_used: flips,
            final_unsat: usize::from(!solved),
        }
    }

    #[test]
    fn its_reference_value() {
        // t = 100, p = 0.5, target 0.99
        let v = its(100, 0.5, 0.99).unwrap();
        assert!((v - 664.3856189774724).abs() < 1e-9);
    }

    #[test]
    fn its_certain_success_is_budget() {
        assert_eq!(its(250, 1.0, 0.99), Some(250.0));
    }

    #[test]
    fn its_zero_probability_is_none() {
        assert_eq!(its(250, 0.0, 0.99), None);
    }

    #[test]
    fn its_monotone_in_probability() {
        let lo = its(100, 0.2, 0.99).unwrap();
        let hi = its(100, 0.8, 0.99).unwrap();
        assert!(hi < lo);
    }

    #[test]
    #[should_panic]
    fn its_rejects_bad_target() {
        its(10, 0.5, 1.0);
    }

    #[test]
    fn success_probability_steps() {
        let tries = vec![tr(true, 10), tr(true, 50), tr(false, 100), tr(true, 100)];
        assert_eq!(success_probability(&tries, 9), 0.0);
        assert_eq!(success_probability(&tries, 10), 0.25);
        assert_eq!(success_probability(&tries, 50), 0.5);
        assert_eq!(success_probability(&tries, 100), 0.75);
        assert_eq!(success_probability(&[], 10), 0.0);
    }

    #[test]
    fn curve_and_optimal() {
        // 4 tries: solves at 10, 10, 100; one failure at budget 100.
        let tries = vec![tr(true, 10), tr(true, 10), tr(true, 100), tr(false, 100)];
        let curve = ItsCurve::from_tries(&tries, 0.99);
        assert_eq!(curve.budgets, vec![10, 100]);
        // ITS(10): p = 0.5 -> 10 ln(0.01)/ln(0.5) = 66.43856
        assert!((curve.its[0] - 66.43856189774724).abs() < 1e-9);
        // ITS(100): p = 0.75 -> 100 ln(0.01)/ln(0.25) = 332.1928
        assert!((curve.its[1] - 332.1928094887362).abs() < 1e-9);
        let (t_opt, v_opt) = curve.optimal().unwrap();
        assert_eq!(t_opt, 10);
        assert!((v_opt - 66.43856189774724).abs() < 1e-9);
    }

    #[test]
    fn optimal_prefers_smaller_budget_on_tie() {
        // Construct equal ITS at two budgets is awkward; instead check the
        // strict-inequality rule keeps the first optimum found at smaller t.
        let tries = vec![tr(true, 5), tr(true, 5)];
        let (t_opt, v_opt) = optimal_its(&tries, 0.99).unwrap();
        assert_eq!(t_opt, 5);
        assert_eq!(v_opt, 5.0); // p = 1 convention
    }

    #[test]
    fn optimal_none_when_never_solved() {
        let tries = vec![tr(false, 100), tr(false, 100)];
        assert_eq!(optimal_its(&tries, 0.99), None);
    }

    #[test]
    fn zero_flip_solves_count_at_budget_one() {
        let tries = vec![tr(true, 0), tr(false, 50)];
        let curve = ItsCurve::from_tries(&tries, 0.99);
        assert_eq!(curve.budgets, vec![1]);
        assert!(curve.its[0].is_finite());
    }

    #[test]
    fn tts_and_ets_scale() {
        assert!((tts(6e-9, 1000.0) - 6e-6).abs() < 1e-18);
        assert!((ets(2e-12, 1000.0) - 2e-9).abs() < 1e-21);
    }

    #[test]
    fn coupling_counts_reference() {
        assert_eq!(coupling_count_tcam(20, 91), 7280);
        assert_eq!(coupling_count_dense(20, 91, 3), 24642); // 2 * (20 + 91)^2
        let adv = mapping_advantage(20, 91, 3);
        assert!((adv - 24642.0 / 7280.0).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_advantage_reference() {
        let v = asymptotic_advantage(3, 4.267);
        assert!((v - 3.250678345441763).abs() < 1e-12);
        // k = 4 at its phase-transition density is far larger
        assert!(asymptotic_advantage(4, 9.931) > v);
    }

    #[test]
    fn lower_median_conventions() {
        assert_eq!(lower_median(&[]), None);
        assert_eq!(lower_median(&[Some(3.0)]), Some(3.0));
        // even length: lower of the central pair
        assert_eq!(
            lower_median(&[Some(1.0), Some(2.0), Some(3.0), Some(4.0)]),
            Some(2.0)
        );
        // unsolved entries sort above all finite values
        assert_eq!(
            lower_median(&[None, Some(5.0), Some(1.0)]),
            Some(5.0)
        );
        // majority unsolved: median is None
        assert_eq!(lower_median(&[None, None, Some(1.0)]), None);
    }
}
