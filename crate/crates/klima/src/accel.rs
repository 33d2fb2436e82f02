//! Functional model of the accelerator datapath: ternary-match clause
//! evaluation, sense-amplifier thresholding, and make/break/gain computation.
//!
//! Each clause occupies one ternary row: a positive literal is stored as 0, a
//! negative literal as 1, an absent variable as a wildcard. The match-line
//! distance of a row then equals the number of satisfied literals of that
//! clause, so distance 0 flags a violated clause and distance 1 a clause held
//! up by a single literal. All functions here are pure; the compiled image is
//! immutable and shared read-only by concurrent workers.

use crate::cnf::{Assignment, CnfError, CnfFormula};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TernaryCell {
    Zero,
    One,
    Wild,
}

/// Per-clause match-line distances, each in `[0, clause length]`.
pub type MlVector = Vec<u32>;

/// Double-threshold window for the single-satisfied-literal sense amplifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thresholds {
    pub theta_l: u32,
    pub theta_h: u32,
}

impl Thresholds {
    pub fn new(theta_l: u32, theta_h: u32) -> Self {
        assert!(theta_l < theta_h, "theta_l must be below theta_h");
        Self { theta_l, theta_h }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            theta_l: 0,
            theta_h: 2,
        }
    }
}

/// Make, break and gain vectors for every variable; `gain = make - break`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientVectors {
    pub make: Vec<i32>,
    pub brk: Vec<i32>,
    pub gain: Vec<i32>,
}

/// Compiled ternary matrix plus membership matrices for one formula.
///
/// `membership[i][j]` is 1 iff clause `i` contains variable `j`;
/// `signed_membership` additionally carries the literal polarity (+1 positive,
/// -1 negative, 0 absent). Rows shorter than the formula order are padded
/// with wildcards, so the array shape is always `C x V` regardless of `k`.
#[derive(Debug, Clone)]
pub struct AcceleratorImage {
    num_clauses: usize,
    num_vars: usize,
    order: usize,
    tcam: Vec<TernaryCell>,
    membership: Vec<bool>,
    signed_membership: Vec<i8>,
    clause_lens: Vec<u32>,
    /// For each clause, its `(var, negated)` literals in input order.
    clause_literals: Vec<Vec<(usize, bool)>>,
    /// For each variable, the `(clause, negated)` pairs it appears in.
    occurrences: Vec<Vec<(usize, bool)>>,
}

impl AcceleratorImage {
    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tcam_cell(&self, clause: usize, var: usize) -> TernaryCell {
        self.tcam[clause * self.num_vars + var]
    }

    pub fn tcam_row(&self, clause: usize) -> &[TernaryCell] {
        let v = self.num_vars;
        &self.tcam[clause * v..(clause + 1) * v]
    }

    pub fn membership_row(&self, clause: usize) -> &[bool] {
        let v = self.num_vars;
        &self.membership[clause * v..(clause + 1) * v]
    }

    pub fn signed_membership_row(&self, clause: usize) -> &[i8] {
        let v = self.num_vars;
        &self.signed_membership[clause * v..(clause + 1) * v]
    }

    pub fn clause_len(&self, clause: usize) -> u32 {
        self.clause_lens[clause]
    }

    pub fn clause_literals(&self, clause: usize) -> &[(usize, bool)] {
        &self.clause_literals[clause]
    }

    pub fn occurrences(&self, var: usize) -> &[(usize, bool)] {
        &self.occurrences[var]
    }

    /// Largest number of clauses any single variable appears in. This is the
    /// full-scale fan-in of a gradient line and the reference for relative
    /// noise magnitudes.
    pub fn max_occurrence(&self) -> usize {
        self.occurrences.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Map every clause onto a ternary row and the membership matrices.
pub fn compile(formula: &CnfFormula) -> AcceleratorImage {
    let c = formula.num_clauses();
    let v = formula.num_vars();
    let mut tcam = vec![TernaryCell::Wild; c * v];
    let mut membership = vec![false; c * v];
    let mut signed_membership = vec![0i8; c * v];
    let mut occurrences = vec![Vec::new(); v];
    let mut clause_lens = Vec::with_capacity(c);
    let mut clause_literals = Vec::with_capacity(c);
    for (i, clause) in formula.clauses().iter().enumerate() {
        clause_lens.push(clause.len() as u32);
        clause_literals.push(
            clause
                .literals()
                .iter()
                .map(|l| (l.var, l.negated))
                .collect::<Vec<_>>(),
        );
        for lit in clause.literals() {
            let idx = i * v + lit.var;
            tcam[idx] = if lit.negated {
                TernaryCell::One
            } else {
                TernaryCell::Zero
            };
            membership[idx] = true;
            signed_membership[idx] = if lit.negated { -1 } else { 1 };
            occurrences[lit.var].push((i, lit.negated));
        }
    }
    AcceleratorImage {
        num_clauses: c,
        num_vars: v,
        order: formula.order(),
        tcam,
        membership,
        signed_membership,
        clause_lens,
        clause_literals,
        occurrences,
    }
}

/// Hamming distance of the input against every row, counting only non-wild
/// positions. Equals the satisfied-literal count of each clause.
pub fn match_distances(image: &AcceleratorImage, x: &Assignment) -> Result<MlVector, CnfError> {
    if x.len() != image.num_vars {
        return Err(CnfError::LengthMismatch {
            got: x.len(),
            want: image.num_vars,
        });
    }
    let bits = x.bits();
    let mut ml = Vec::with_capacity(image.num_clauses);
    for i in 0..image.num_clauses {
        let row = image.tcam_row(i);
        let mut d = 0u32;
        for (j, cell) in row.iter().enumerate() {
            let mismatch = match cell {
                TernaryCell::Zero => bits[j],
                TernaryCell::One => !bits[j],
                TernaryCell::Wild => false,
            };
            if mismatch {
                d += 1;
            }
        }
        ml.push(d);
    }
    Ok(ml)
}

/// Violated-clause mask: distance below `theta_h` (default 1, i.e. distance
/// zero).
pub fn violated_mask(ml: &[u32], theta_h: u32) -> Vec<bool> {
    ml.iter().map(|&d| d < theta_h).collect()
}

/// Single-satisfied-literal mask: distance strictly inside the threshold
/// window (default: exactly 1).
pub fn single_sat_mask(ml: &[u32], thresholds: Thresholds) -> Vec<bool> {
    ml.iter()
        .map(|&d| d > thresholds.theta_l && d < thresholds.theta_h)
        .collect()
}

/// Make values: for each variable, the number of active (violated) rows that
/// contain it.
pub fn make_values(image: &AcceleratorImage, mlm: &[bool]) -> Vec<i32> {
    assert_eq!(mlm.len(), image.num_clauses);
    let mut m = vec![0i32; image.num_vars];
    for (i, &active) in mlm.iter().enumerate() {
        if !active {
            continue;
        }
        for (j, &member) in image.membership_row(i).iter().enumerate() {
            if member {
                m[j] += 1;
            }
        }
    }
    m
}

/// Break values: for each variable, the number of active single-satisfied
/// rows whose satisfied literal is that variable's literal under `x`.
pub fn break_values(image: &AcceleratorImage, mlb: &[bool], x: &Assignment) -> Vec<i32> {
    assert_eq!(mlb.len(), image.num_clauses);
    assert_eq!(x.len(), image.num_vars);
    let bits = x.bits();
    let mut b = vec![0i32; image.num_vars];
    for (i, &active) in mlb.iter().enumerate() {
        if !active {
            continue;
        }
        for (j, &s) in image.signed_membership_row(i).iter().enumerate() {
            let literal_true = match s {
                1 => bits[j],
                -1 => !bits[j],
                _ => false,
            };
            if literal_true {
                b[j] += 1;
            }
        }
    }
    b
}

/// Elementwise gain `g = m - b`.
pub fn gain_values(make: &[i32], brk: &[i32]) -> Vec<i32> {
    assert_eq!(make.len(), brk.len());
    make.iter().zip(brk).map(|(m, b)| m - b).collect()
}

/// Full make/break/gain pass for one assignment, using the default
/// thresholds.
pub fn gradients(image: &AcceleratorImage, x: &Assignment) -> Result<GradientVectors, CnfError> {
    let ml = match_distances(image, x)?;
    let mlm = violated_mask(&ml, 1);
    let mlb = single_sat_mask(&ml, Thresholds::default());
    let make = make_values(image, &mlm);
    let brk = break_values(image, &mlb, x);
    let gain = gain_values(&make, &brk);
    Ok(GradientVectors { make, brk, gain })
}
