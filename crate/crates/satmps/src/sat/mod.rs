//! Random 3-SAT instances.
//!
//! Variables are numbered `1..=n`. Basis index conventions follow the
//! statevector layout used everywhere else in the crate: variable 1 is the most
//! significant bit of an index, so bit `n - v` of an index holds variable `v`,
//! and a set bit means "true".

mod count;
mod dimacs;
mod generate;

pub use count::{
    count_dpll, count_exhaustive, count_solutions, count_solutions_with_limit, is_satisfiable,
    DEFAULT_EXACT_LIMIT,
};
pub use dimacs::{parse_dimacs, write_dimacs};
pub use generate::{
    generate_satisfiable, generate_satisfiable_with, random_clause, random_instance,
    unique_solution_filter, unique_solution_filter_with, DEFAULT_REJECTION_BUDGET,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    /// The `p cnf n m` line is missing or unreadable.
    #[error("malformed DIMACS header on line {line}: {text:?}")]
    MalformedHeader { line: usize, text: String },

    #[error("DIMACS input has no `p cnf` header")]
    MissingHeader,

    #[error("unreadable token {token:?} on line {line}")]
    BadToken { line: usize, token: String },

    #[error("clause {clause} has {found} literals, expected 3")]
    ClauseArity { clause: usize, found: usize },

    #[error("variable {variable} out of range 1..={n}")]
    VariableOutOfRange { variable: i64, n: usize },

    #[error("clause {clause} repeats variable {variable}")]
    DuplicateVariable { clause: usize, variable: u32 },

    #[error("header declares {expected} clauses but {found} were read")]
    ClauseCount { expected: usize, found: usize },

    #[error("assignment has length {found}, instance has {expected} variables")]
    LengthMismatch { expected: usize, found: usize },

    #[error("n = {n} exceeds the configured limit {limit}")]
    TooManyVariables { n: usize, limit: usize },

    #[error("instances need at least 3 variables, got {0}")]
    TooFewVariables(usize),

    /// Rejection sampling gave up; usually the clause density is deep in the
    /// UNSAT regime.
    #[error("rejection budget of {attempts} attempts exhausted at n = {n}, m = {m}")]
    BudgetExhausted { n: usize, m: usize, attempts: usize },

    #[error("no instance with n = {n}, m = 0 can have a unique solution")]
    NeverUnique { n: usize },
}

pub type SatResult<T> = Result<T, SatError>;

/// A possibly negated variable.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    variable: u32,
    negated: bool,
}

impl Literal {
    /// Panics if `variable == 0`.
    pub fn new(variable: u32, negated: bool) -> Self {
        assert!(variable >= 1, "variables are numbered from 1");
        Self { variable, negated }
    }

    pub fn pos(variable: u32) -> Self { Self::new(variable, false) }

    pub fn neg(variable: u32) -> Self { Self::new(variable, true) }

    /// Signed DIMACS form, e.g. `-3` for ¬x₃. Returns `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 || value.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Self::new(value.unsigned_abs() as u32, value < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated { -(self.variable as i64) } else { self.variable as i64 }
    }

    pub fn variable(self) -> u32 { self.variable }

    pub fn is_negated(self) -> bool { self.negated }

    /// Truth value of the literal when its variable takes `value`.
    pub fn eval(self, value: bool) -> bool { value != self.negated }

    /// The variable value that makes this literal false.
    pub fn falsifying_value(self) -> bool { self.negated }
}

/// Disjunction of three literals over distinct variables.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: [Literal; 3],
}

impl Clause {
    pub fn new(literals: [Literal; 3]) -> SatResult<Self> {
        let [a, b, c] = literals.map(Literal::variable);
        if a == b || a == c {
            return Err(SatError::DuplicateVariable { clause: 0, variable: a });
        }
        if b == c {
            return Err(SatError::DuplicateVariable { clause: 0, variable: b });
        }
        Ok(Self { literals })
    }

    /// Build from signed DIMACS literals.
    pub fn from_dimacs(values: [i64; 3]) -> SatResult<Self> {
        let mut lits = [Literal::pos(1); 3];
        for (slot, v) in lits.iter_mut().zip(values) {
            *slot = Literal::from_dimacs(v)
                .ok_or(SatError::VariableOutOfRange { variable: v, n: 0 })?;
        }
        Self::new(lits)
    }

    pub fn literals(&self) -> &[Literal; 3] { &self.literals }

    pub fn max_variable(&self) -> u32 {
        self.literals.iter().map(|l| l.variable).max().unwrap()
    }

    /// True iff all three literals are false under `assignment`.
    pub fn is_violated_by(&self, assignment: &Assignment) -> bool {
        self.literals.iter().all(|l| !l.eval(assignment.value(l.variable)))
    }

    /// Involved variables as 0-based sites, sorted, paired with the site value
    /// that falsifies the corresponding literal.
    pub fn violating_sites(&self) -> [(usize, bool); 3] {
        let mut out = self.literals.map(|l| (l.variable as usize - 1, l.falsifying_value()));
        out.sort_by_key(|&(s, _)| s);
        out
    }

    /// `(mask, pattern)` such that index `x` violates the clause iff
    /// `x & mask == pattern`.
    pub fn index_mask(&self, n: usize) -> (u64, u64) {
        let mut mask = 0u64;
        let mut pattern = 0u64;
        for l in &self.literals {
            let bit = 1u64 << (n - l.variable as usize);
            mask |= bit;
            if l.negated {
                pattern |= bit;
            }
        }
        (mask, pattern)
    }
}

/// A CNF formula over `n` variables with an ordered list of 3-clauses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfInstance {
    n: usize,
    clauses: Vec<Clause>,
}

impl CnfInstance {
    pub fn new(n: usize, clauses: Vec<Clause>) -> SatResult<Self> {
        for c in &clauses {
            let v = c.max_variable();
            if v as usize > n {
                return Err(SatError::VariableOutOfRange { variable: v as i64, n });
            }
        }
        Ok(Self { n, clauses })
    }

    pub fn empty(n: usize) -> Self { Self { n, clauses: Vec::new() } }

    pub fn n(&self) -> usize { self.n }

    pub fn m(&self) -> usize { self.clauses.len() }

    /// Clause density m/n.
    pub fn alpha(&self) -> f64 {
        if self.n == 0 { 0.0 } else { self.m() as f64 / self.n as f64 }
    }

    pub fn clauses(&self) -> &[Clause] { &self.clauses }

    /// The instance made of the first `k` clauses.
    pub fn prefix(&self, k: usize) -> Self {
        Self { n: self.n, clauses: self.clauses[..k.min(self.m())].to_vec() }
    }

    pub fn with_clause(&self, clause: Clause) -> SatResult<Self> {
        let mut clauses = self.clauses.clone();
        clauses.push(clause);
        Self::new(self.n, clauses)
    }

    /// Same clauses in a different order. `order` must be a permutation.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self { n: self.n, clauses: order.iter().map(|&i| self.clauses[i]).collect() }
    }

    pub(crate) fn index_masks(&self) -> Vec<(u64, u64)> {
        self.clauses.iter().map(|c| c.index_mask(self.n)).collect()
    }

    /// Violated-clause count for the basis index `x` (big-endian).
    pub fn violations_at(&self, x: u64) -> usize {
        self.clauses
            .iter()
            .filter(|c| {
                let (mask, pattern) = c.index_mask(self.n);
                x & mask == pattern
            })
            .count()
    }
}

/// Values of all `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self { Self { bits } }

    /// Decode a big-endian basis index.
    pub fn from_index(n: usize, index: u64) -> Self {
        Self { bits: (0..n).map(|i| index >> (n - 1 - i) & 1 == 1).collect() }
    }

    pub fn to_index(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| acc << 1 | b as u64)
    }

    pub fn len(&self) -> usize { self.bits.len() }

    pub fn is_empty(&self) -> bool { self.bits.is_empty() }

    pub fn bits(&self) -> &[bool] { &self.bits }

    /// Value of 1-based variable `v`.
    pub fn value(&self, v: u32) -> bool { self.bits[v as usize - 1] }
}

/// Number of violated clauses, `E(x)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ViolationCount(pub usize);

impl ViolationCount {
    pub fn get(self) -> usize { self.0 }

    pub fn is_satisfying(self) -> bool { self.0 == 0 }
}

pub fn violations(instance: &CnfInstance, assignment: &Assignment) -> SatResult<ViolationCount> {
    if assignment.len() != instance.n() {
        return Err(SatError::LengthMismatch { expected: instance.n(), found: assignment.len() });
    }
    Ok(ViolationCount(instance.clauses.iter().filter(|c| c.is_violated_by(assignment)).count()))
}
