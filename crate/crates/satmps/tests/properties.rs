use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satmps::boolean::{boolean_basis, implies, BitMatrix};
use satmps::dense::{build_energy_diagonal, flat_protocol_dense, ite_evolve, schmidt};
use satmps::mps::{flat_run, read_snapshot, verify_certificate, write_snapshot, Mps, TruncationPolicy};
use satmps::sat::{count_dpll, count_exhaustive, parse_dimacs, random_instance, write_dimacs, CnfInstance};

fn instance(n: usize, m: usize, seed: u64) -> CnfInstance {
    random_instance(n, m, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dpll_matches_enumeration(n in 3usize..=12, alpha in 0.0f64..6.0, seed in any::<u64>()) {
        let inst = instance(n, (alpha * n as f64).round() as usize, seed);
        prop_assert_eq!(count_dpll(&inst), count_exhaustive(&inst).unwrap());
    }

    #[test]
    fn clause_order_does_not_matter(n in 3usize..=10, m in 0usize..40, seed in any::<u64>(), shift in 0usize..40) {
        let inst = instance(n, m, seed);
        let order: Vec<usize> = (0..m).map(|j| (j + shift) % m.max(1)).rev().collect();
        let shuffled = inst.permuted(&order);
        prop_assert_eq!(count_dpll(&inst), count_dpll(&shuffled));
        let a = build_energy_diagonal(&inst).unwrap();
        let b = build_energy_diagonal(&shuffled).unwrap();
        prop_assert_eq!(a.energies(), b.energies());
    }

    #[test]
    fn counts_never_grow_with_clauses(n in 3usize..=10, m in 1usize..40, seed in any::<u64>()) {
        let inst = instance(n, m, seed);
        let counts: Vec<u64> = (0..=m).map(|k| count_dpll(&inst.prefix(k))).collect();
        prop_assert!(counts.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn dimacs_round_trips(n in 3usize..=30, m in 0usize..60, seed in any::<u64>()) {
        let inst = instance(n, m, seed);
        let text = write_dimacs(&inst);
        let back = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_dimacs(&back), text);
    }

    #[test]
    fn ite_weight_is_monotone(n in 3usize..=9, m in 1usize..30, seed in any::<u64>()) {
        let inst = instance(n, m, seed);
        let diag = build_energy_diagonal(&inst).unwrap();
        let w: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&t| {
                let s = ite_evolve(&diag, t).unwrap();
                let p: f64 = s.amplitudes().iter().zip(diag.energies()).filter(|(_, &e)| e == diag.min_energy()).map(|(a, _)| a * a).sum();
                p / s.norm_sq()
            })
            .collect();
        prop_assert!(w.windows(2).all(|x| x[1] >= x[0] - 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn flat_mps_counts_and_certifies(n in 4usize..=10, alpha in 0.0f64..5.0, seed in any::<u64>()) {
        let inst = instance(n, (alpha * n as f64).round() as usize, seed);
        let exact = count_dpll(&inst);
        match flat_run(&inst, &TruncationPolicy::exact(), n / 2) {
            Ok((mps, _)) => {
                prop_assert_eq!((mps.norm_sq() * (1u64 << n) as f64).round() as u64, exact);
                prop_assert!(verify_certificate(&mps, &inst, 1e-9).unwrap().invariant);
                let dense = flat_protocol_dense(&inst, n / 2).unwrap();
                prop_assert!(mps.to_dense().unwrap().max_abs_diff(&dense.state) < 1e-9);
                let mut bytes = Vec::new();
                write_snapshot(&mps, &mut bytes).unwrap();
                prop_assert_eq!(read_snapshot(bytes.as_slice()).unwrap(), mps);
            }
            Err(_) => prop_assert_eq!(exact, 0),
        }
    }

    #[test]
    fn mps_from_dense_reproduces_spectra(n in 2usize..=10, m in 0usize..30, seed in any::<u64>(), tau in 0.0f64..3.0) {
        let inst = instance(n.max(3), m, seed);
        let state = ite_evolve(&build_energy_diagonal(&inst).unwrap(), tau).unwrap();
        let mps = Mps::from_dense(&state).unwrap();
        prop_assert!(mps.to_dense().unwrap().max_abs_diff(&state) < 1e-10);
        let cut = inst.n() / 2;
        let mut copy = mps.clone();
        let a = copy.schmidt_at(cut).unwrap();
        let b = schmidt(&state, cut).unwrap().values;
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn boolean_basis_spans_rows(rows in 1usize..24, cols in 1usize..80, seed in any::<u64>(), density in 0.05f64..0.95) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cells: Vec<bool> = (0..rows * cols).map(|_| rng.random_bool(density)).collect();
        let matrix = BitMatrix::from_fn(rows, cols, |r, c| cells[r * cols + c]);
        let basis = boolean_basis(&matrix);
        for r in 0..rows {
            let row = matrix.row(r);
            let mut acc = vec![0u64; row.len()];
            for b in basis.iter().filter(|b| implies(b, row)) {
                acc.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
            }
            prop_assert_eq!(acc.as_slice(), row);
        }
    }
}
