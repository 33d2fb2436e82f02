//! Shared fixtures for the integration tests: lazily built satisfiable
//! instance suites and a brute-force gradient oracle that never touches the
//! accelerator model.
#![allow(dead_code)] // each test binary uses a different subset

use std::sync::OnceLock;

use klima::bench::{generate_instances, GenerateSpec};
use klima::cnf::{Assignment, CnfFormula};

/// 100 satisfiable 3-SAT instances with 20 variables and 91 clauses
/// (clause ratio 4.55), mirroring the shape of the classic uniform
/// 20-variable benchmark suite. Built once per test binary.
pub fn uf20_suite() -> &'static [(String, CnfFormula)] {
    static SUITE: OnceLock<Vec<(String, CnfFormula)>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let spec = GenerateSpec {
            count: 100,
            num_vars: 20,
            k: 3,
            alpha: 4.55,
            filter_satisfiable: true,
            probe_max_flips: 20_000,
            probe_max_tries: 10,
        };
        generate_instances(&spec, 20_240_001).expect("suite generation")
    })
}

/// 100 satisfiable 3-SAT instances with 50 variables and 218 clauses
/// (clause ratio 4.36), the shape of the 50-variable benchmark suite. The
/// ordering criteria are statistical, so this uses a larger sample than the
/// 50-instance minimum to keep median estimates stable.
pub fn uf50_suite() -> &'static [(String, CnfFormula)] {
    static SUITE: OnceLock<Vec<(String, CnfFormula)>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let spec = GenerateSpec {
            count: 100,
            num_vars: 50,
            k: 3,
            alpha: 4.36,
            filter_satisfiable: true,
            probe_max_flips: 100_000,
            probe_max_tries: 10,
        };
        generate_instances(&spec, 555_000).expect("suite generation")
    })
}

/// Brute-force make/break/gain by flip enumeration: re-evaluate the whole
/// formula before and after each candidate flip, no incremental state.
pub fn brute_force_gradients(formula: &CnfFormula, x: &Assignment) -> (Vec<i32>, Vec<i32>, Vec<i32>) {
    let unsat_clauses = |bits: &[bool]| -> Vec<bool> {
        formula
            .clauses()
            .iter()
            .map(|c| !c.literals().iter().any(|l| l.satisfied_by(bits)))
            .collect()
    };
    let before = unsat_clauses(x.bits());
    let mut make = Vec::with_capacity(x.len());
    let mut brk = Vec::with_capacity(x.len());
    let mut gain = Vec::with_capacity(x.len());
    for var in 0..x.len() {
        let mut bits = x.bits().to_vec();
        bits[var] = !bits[var];
        let after = unsat_clauses(&bits);
        let m = before
            .iter()
            .zip(&after)
            .filter(|&(&was, &is)| was && !is)
            .count() as i32;
        let b = before
            .iter()
            .zip(&after)
            .filter(|&(&was, &is)| !was && is)
            .count() as i32;
        make.push(m);
        brk.push(b);
        gain.push(m - b);
    }
    (make, brk, gain)
}
