//! CNF problem representation, DIMACS I/O, random k-SAT generation and
//! ground-truth clause evaluation.
//!
//! Variables are 1-indexed in DIMACS text and 0-indexed everywhere else; the
//! conversion lives entirely in the parser and writer.

use std::fmt::Write as _;

use thiserror::Error;

use crate::rng::RngState;

#[derive(Debug, Error, PartialEq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause has no literals")]
    EmptyClause,
    #[error("clause mentions variable {var} more than once")]
    DuplicateVariable { var: usize },
    #[error("variable {var} out of range 1..={num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("formula must have at least one clause")]
    NoClauses,
    #[error("assignment has {got} bits, formula has {want} variables")]
    LengthMismatch { got: usize, want: usize },
    #[error("cannot draw {k} distinct variables from {num_vars}")]
    TooFewVariables { k: usize, num_vars: usize },
}

/// A possibly negated variable. `var` is the 0-based variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: usize, negated: bool) -> Self {
        Self { var, negated }
    }

    /// True under `bits` iff the variable value matches the polarity.
    #[inline]
    pub fn satisfied_by(&self, bits: &[bool]) -> bool {
        bits[self.var] != self.negated
    }

    fn to_dimacs(self) -> i64 {
        let v = (self.var + 1) as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// Disjunction of literals over distinct variables. Tautologies (`x ∨ ¬x`)
/// are rejected along with repeated literals because both would need two
/// states in a single ternary row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self, CnfError> {
        if literals.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        for (i, a) in literals.iter().enumerate() {
            for b in &literals[i + 1..] {
                if a.var == b.var {
                    return Err(CnfError::DuplicateVariable { var: a.var + 1 });
                }
            }
        }
        Ok(Self { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A CNF formula: `num_vars` variables, at least one clause, order `k` equal
/// to the longest clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
    order: usize,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        for clause in &clauses {
            for lit in clause.literals() {
                if lit.var >= num_vars {
                    return Err(CnfError::VariableOutOfRange {
                        var: lit.var + 1,
                        num_vars,
                    });
                }
            }
        }
        let order = clauses.iter().map(Clause::len).max().unwrap_or(0);
        Ok(Self {
            num_vars,
            clauses,
            order,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause_ratio(&self) -> f64 {
        self.clauses.len() as f64 / self.num_vars as f64
    }

    /// Number of violated clauses and the per-clause violation mask. A clause
    /// is unsatisfied iff every literal evaluates false.
    pub fn evaluate(&self, x: &Assignment) -> Result<EvalResult, CnfError> {
        if x.len() != self.num_vars {
            return Err(CnfError::LengthMismatch {
                got: x.len(),
                want: self.num_vars,
            });
        }
        let mut unsat_mask = Vec::with_capacity(self.clauses.len());
        let mut unsat_count = 0usize;
        for clause in &self.clauses {
            let violated = !clause.literals().iter().any(|l| l.satisfied_by(x.bits()));
            if violated {
                unsat_count += 1;
            }
            unsat_mask.push(violated);
        }
        Ok(EvalResult {
            unsat_count,
            unsat_mask,
        })
    }
}

/// One candidate solution: bit `i` is the value of variable `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn random(num_vars: usize, rng: &mut RngState) -> Self {
        Self {
            bits: (0..num_vars).map(|_| rng.next_bool()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn flip(&mut self, var: usize) {
        self.bits[var] = !self.bits[var];
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub unsat_count: usize,
    pub unsat_mask: Vec<bool>,
}

/// Parse standard DIMACS CNF text: `c` comment lines, a `p cnf V C` header,
/// then C clauses of nonzero integers terminated by `0`, possibly spanning
/// lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut header_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Parse {
                    line: line_no,
                    msg: "duplicate problem header".into(),
                });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(CnfError::Parse {
                    line: line_no,
                    msg: format!("malformed header '{line}', expected 'p cnf V C'"),
                });
            }
            let num_vars: usize = fields[2].parse().map_err(|_| CnfError::Parse {
                line: line_no,
                msg: format!("bad variable count '{}'", fields[2]),
            })?;
            let num_clauses: usize = fields[3].parse().map_err(|_| CnfError::Parse {
                line: line_no,
                msg: format!("bad clause count '{}'", fields[3]),
            })?;
            header = Some((num_vars, num_clauses));
            header_line = line_no;
            continue;
        }
        let (num_vars, _) = header.ok_or(CnfError::Parse {
            line: line_no,
            msg: "clause data before 'p cnf' header".into(),
        })?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| CnfError::Parse {
                line: line_no,
                msg: format!("unexpected token '{tok}'"),
            })?;
            if lit == 0 {
                let clause = Clause::new(std::mem::take(&mut pending)).map_err(|e| {
                    CnfError::Parse {
                        line: line_no,
                        msg: e.to_string(),
                    }
                })?;
                clauses.push(clause);
            } else {
                let var = lit.unsigned_abs() as usize;
                if var > num_vars {
                    return Err(CnfError::Parse {
                        line: line_no,
                        msg: format!("literal {lit} exceeds declared {num_vars} variables"),
                    });
                }
                pending.push(Literal::new(var - 1, lit < 0));
            }
        }
    }

    let (num_vars, num_clauses) = header.ok_or(CnfError::Parse {
        line: 1,
        msg: "missing 'p cnf' header".into(),
    })?;
    if !pending.is_empty() {
        return Err(CnfError::Parse {
            line: header_line,
            msg: "last clause is not terminated by 0".into(),
        });
    }
    if clauses.len() != num_clauses {
        return Err(CnfError::Parse {
            line: header_line,
            msg: format!(
                "header declares {num_clauses} clauses but file contains {}",
                clauses.len()
            ),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

/// Emit DIMACS text. `parse_dimacs(write_dimacs(f))` is the identity on valid
/// formulas.
pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p cnf {} {}",
        formula.num_vars(),
        formula.num_clauses()
    );
    for clause in formula.clauses() {
        for lit in clause.literals() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        let _ = writeln!(out, "0");
    }
    out
}

/// Uniform random k-SAT: `round(alpha * num_vars)` clauses, each over `k`
/// distinct variables with independent fair-coin polarities. Duplicate
/// clauses are permitted, matching the uniform random model.
pub fn generate_random_ksat(
    num_vars: usize,
    k: usize,
    alpha: f64,
    seed: u64,
) -> Result<CnfFormula, CnfError> {
    if k == 0 || num_vars < k {
        return Err(CnfError::TooFewVariables { k, num_vars });
    }
    assert!(alpha > 0.0, "clause ratio must be positive");
    let num_clauses = ((alpha * num_vars as f64).round() as usize).max(1);
    let mut rng = RngState::from_seed(seed);
    let mut clauses = Vec::with_capacity(num_clauses);
    let mut picked: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..num_clauses {
        picked.clear();
        while picked.len() < k {
            let var = rng.below(num_vars);
            if !picked.contains(&var) {
                picked.push(var);
            }
        }
        let literals = picked
            .iter()
            .map(|&var| Literal::new(var, rng.next_bool()))
            .collect();
        clauses.push(Clause::new(literals).expect("distinct variables by construction"));
    }
    CnfFormula::new(num_vars, clauses)
}
