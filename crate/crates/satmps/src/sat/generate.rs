use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::count::{count_dpll, is_satisfiable, DEFAULT_EXACT_LIMIT};
use super::{Clause, CnfInstance, Literal, SatError, SatResult};

/// Attempts allowed before rejection sampling gives up.
pub const DEFAULT_REJECTION_BUDGET: usize = 10_000;

/// One clause: a uniform 3-subset of the variables with uniform polarities.
pub fn random_clause<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Clause {
    let mut vars = sample(rng, n, 3).into_vec();
    vars.sort_unstable();
    let lits = [0, 1, 2].map(|i| Literal::new(vars[i] as u32 + 1, rng.random_bool(0.5)));
    Clause::new(lits).expect("sampled variables are distinct")
}

/// `m` independent clauses. Duplicates are possible; satisfiability is not
/// checked.
pub fn random_instance<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> CnfInstance {
    let clauses = (0..m).map(|_| random_clause(n, rng)).collect();
    CnfInstance::new(n, clauses).expect("sampled variables are in range")
}

/// A uniformly random instance conditioned on being satisfiable.
pub fn generate_satisfiable(n: usize, m: usize, seed: u64) -> SatResult<CnfInstance> {
    generate_satisfiable_with(n, m, seed, DEFAULT_REJECTION_BUDGET)
}

pub fn generate_satisfiable_with(
    n: usize,
    m: usize,
    seed: u64,
    budget: usize,
) -> SatResult<CnfInstance> {
    if n < 3 {
        return Err(SatError::TooFewVariables(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let inst = random_instance(n, m, &mut rng);
        if is_satisfiable(&inst) {
            return Ok(inst);
        }
    }
    Err(SatError::BudgetExhausted { n, m, attempts: budget })
}

/// A uniformly random instance conditioned on having exactly one solution.
pub fn unique_solution_filter(n: usize, m: usize, seed: u64) -> SatResult<CnfInstance> {
    unique_solution_filter_with(n, m, seed, DEFAULT_REJECTION_BUDGET)
}

pub fn unique_solution_filter_with(
    n: usize,
    m: usize,
    seed: u64,
    budget: usize,
) -> SatResult<CnfInstance> {
    if n < 3 {
        return Err(SatError::TooFewVariables(n));
    }
    if m == 0 {
        return Err(SatError::NeverUnique { n });
    }
    if n > DEFAULT_EXACT_LIMIT {
        return Err(SatError::TooManyVariables { n, limit: DEFAULT_EXACT_LIMIT });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let inst = random_instance(n, m, &mut rng);
        if count_dpll(&inst) == 1 {
            return Ok(inst);
        }
    }
    Err(SatError::BudgetExhausted { n, m, attempts: budget })
}
