use super::{CnfInstance, SatError, SatResult};

/// Largest `n` accepted by [`count_solutions`].
pub const DEFAULT_EXACT_LIMIT: usize = 26;

const UNSET: i8 = -1;

/// Exact model count with the default size limit.
pub fn count_solutions(instance: &CnfInstance) -> SatResult<u64> {
    count_solutions_with_limit(instance, DEFAULT_EXACT_LIMIT)
}

pub fn count_solutions_with_limit(instance: &CnfInstance, limit: usize) -> SatResult<u64> {
    if instance.n() > limit {
        return Err(SatError::TooManyVariables { n: instance.n(), limit });
    }
    Ok(count_dpll(instance))
}

/// Model count by enumerating all `2^n` assignments. Limited to `n <= 32`.
pub fn count_exhaustive(instance: &CnfInstance) -> SatResult<u64> {
    if instance.n() > 32 {
        return Err(SatError::TooManyVariables { n: instance.n(), limit: 32 });
    }
    let masks = instance.index_masks();
    Ok((0..1u64 << instance.n())
        .filter(|x| masks.iter().all(|&(mask, pat)| x & mask != pat))
        .count() as u64)
}

/// Model count by DPLL with unit propagation, branching on the lowest-index
/// unassigned variable that still occurs in an open clause.
///
/// Panics if `n > 63`.
pub fn count_dpll(instance: &CnfInstance) -> u64 {
    assert!(instance.n() <= 63, "model counts are held in a u64");
    let solver = Dpll::new(instance);
    let mut vals = vec![UNSET; instance.n()];
    solver.count(&mut vals)
}

/// Satisfiability by DPLL with unit propagation and pure-literal elimination.
pub fn is_satisfiable(instance: &CnfInstance) -> bool {
    let solver = Dpll::new(instance);
    let mut vals = vec![UNSET; instance.n()];
    solver.solve(&mut vals)
}

struct Dpll {
    /// `(site, negated)` triples.
    clauses: Vec<[(usize, bool); 3]>,
}

enum Status {
    Satisfied,
    Conflict,
    Unit(usize, bool),
    Open,
}

impl Dpll {
    fn new(instance: &CnfInstance) -> Self {
        let clauses = instance
            .clauses()
            .iter()
            .map(|c| c.literals().map(|l| (l.variable() as usize - 1, l.is_negated())))
            .collect();
        Self { clauses }
    }

    fn status(clause: &[(usize, bool); 3], vals: &[i8]) -> Status {
        let mut free = None;
        let mut nfree = 0;
        for &(v, neg) in clause {
            match vals[v] {
                UNSET => {
                    nfree += 1;
                    free = Some((v, !neg));
                }
                x => {
                    if (x == 1) != neg {
                        return Status::Satisfied;
                    }
                }
            }
        }
        match (nfree, free) {
            (0, _) => Status::Conflict,
            (1, Some((v, val))) => Status::Unit(v, val),
            _ => Status::Open,
        }
    }

    /// Assign forced literals until fixpoint; false on conflict.
    fn propagate(&self, vals: &mut [i8], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for c in &self.clauses {
                match Self::status(c, vals) {
                    Status::Conflict => return false,
                    Status::Unit(v, val) => {
                        vals[v] = val as i8;
                        trail.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn branch_variable(&self, vals: &[i8]) -> Option<usize> {
        self.clauses
            .iter()
            .filter(|c| matches!(Self::status(c, vals), Status::Open))
            .flat_map(|c| c.iter().map(|&(v, _)| v))
            .filter(|&v| vals[v] == UNSET)
            .min()
    }

    fn count(&self, vals: &mut [i8]) -> u64 {
        let mut trail = Vec::new();
        let total = if !self.propagate(vals, &mut trail) {
            0
        } else {
            match self.branch_variable(vals) {
                None => 1u64 << vals.iter().filter(|&&v| v == UNSET).count(),
                Some(v) => {
                    let mut total = 0;
                    for val in [0, 1] {
                        vals[v] = val;
                        total += self.count(vals);
                    }
                    vals[v] = UNSET;
                    total
                }
            }
        };
        for v in trail {
            vals[v] = UNSET;
        }
        total
    }

    /// Assign every pure literal among open clauses; returns whether any was set.
    fn eliminate_pure(&self, vals: &mut [i8], trail: &mut Vec<usize>) -> bool {
        // bit 0: seen positive, bit 1: seen negative
        let mut seen = vec![0u8; vals.len()];
        for c in &self.clauses {
            if matches!(Self::status(c, vals), Status::Satisfied) {
                continue;
            }
            for &(v, neg) in c {
                if vals[v] == UNSET {
                    seen[v] |= if neg { 2 } else { 1 };
                }
            }
        }
        let mut any = false;
        for (v, &s) in seen.iter().enumerate() {
            if s == 1 || s == 2 {
                vals[v] = (s == 1) as i8;
                trail.push(v);
                any = true;
            }
        }
        any
    }

    fn solve(&self, vals: &mut [i8]) -> bool {
        let mut trail = Vec::new();
        let mut ok = true;
        loop {
            if !self.propagate(vals, &mut trail) {
                ok = false;
                break;
            }
            if !self.eliminate_pure(vals, &mut trail) {
                break;
            }
        }
        let found = ok
            && match self.branch_variable(vals) {
                None => true,
                Some(v) => {
                    let hit = [1, 0].into_iter().any(|val| {
                        vals[v] = val;
                        self.solve(vals)
                    });
                    vals[v] = UNSET;
                    hit
                }
            };
        for v in trail {
            vals[v] = UNSET;
        }
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{generate_satisfiable, random_instance, Clause};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_counts() {
        let one = CnfInstance::new(3, vec![Clause::from_dimacs([1, 2, 3]).unwrap()]).unwrap();
        assert_eq!(count_solutions(&one).unwrap(), 7);
        assert_eq!(count_exhaustive(&one).unwrap(), 7);
        assert_eq!(count_solutions(&CnfInstance::empty(5)).unwrap(), 32);
        assert!(matches!(
            count_solutions(&CnfInstance::empty(27)),
            Err(SatError::TooManyVariables { n: 27, limit: 26 })
        ));
    }

    #[test]
    fn all_eight_sign_patterns_are_unsat() {
        let clauses = (0..8)
            .map(|s| {
                let sign = |b: i64, v: i64| if s >> b & 1 == 1 { -v } else { v };
                Clause::from_dimacs([sign(0, 1), sign(1, 2), sign(2, 3)]).unwrap()
            })
            .collect();
        let inst = CnfInstance::new(4, clauses).unwrap();
        assert_eq!(count_dpll(&inst), 0);
        assert!(!is_satisfiable(&inst));
    }

    #[test]
    fn dpll_matches_enumeration_at_n12_alpha3() {
        let inst = generate_satisfiable(12, 36, 7).unwrap();
        assert_eq!(count_dpll(&inst), count_exhaustive(&inst).unwrap());
    }

    #[test]
    fn satisfiability_agrees_with_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let inst = random_instance(8, 40, &mut rng);
            assert_eq!(is_satisfiable(&inst), count_exhaustive(&inst).unwrap() > 0);
        }
    }
}
