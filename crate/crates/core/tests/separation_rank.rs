use std::sync::Arc;

use orbitkit::groups;
use orbitkit::linalg::{rank, Vector};
use orbitkit::recovery::{random_generic_vector, recover_orbit, same_multiset, RecoveryInput, RecoveryOptions};
use orbitkit::representations::regular;
use orbitkit::scalar::Rational;
use orbitkit::separation::dihedral_cmf_counterexample;
use orbitkit::tensors::{as_matrix, invariant_tensor};
use orbitkit::transcendence::{conjecture_scan, jacobian_rank_at, TABLE1};

type Q = Rational;

#[test]
fn cmf_sample_is_recoverable_in_regular_representation() {
    for n in 3..=8 {
        let rep = regular::<Q>(Arc::new(groups::dihedral(n).unwrap())).unwrap();
        let mut recovered = 0;
        for seed in 1..=3 {
            let w = dihedral_cmf_counterexample(n, seed).unwrap();
            let mut coords = w.x.clone();
            coords.push(w.s0);
            coords.extend(w.s_minus1);
            let pad = random_generic_vector::<Q>(2 * n - coords.len(), seed, 50);
            let mut x = Vector::<Q>::from_i64(&coords);
            x.entries.extend(pad.entries);
            let t2 = invariant_tensor(&rep, &x, 2).unwrap();
            let t3 = invariant_tensor(&rep, &x, 3).unwrap();
            if rank(&as_matrix(&t2).unwrap()) < rep.order() {
                continue;
            }
            let input = RecoveryInput {
                rep: &rep,
                t2: &t2,
                t3: &t3,
            };
            let res = recover_orbit(&input, &RecoveryOptions::with_seed(seed)).unwrap();
            assert!(same_multiset(&res.recovered_orbit, &rep.orbit(&x).unwrap(), 0.0));
            recovered += 1;
        }
        assert!(recovered > 0, "no full-rank sample for n = {n}");
    }
}

#[test]
fn table_ranks_are_seed_stable() {
    for &(n, d, _) in &TABLE1 {
        let a = jacobian_rank_at(n, d, 3, 1, 2);
        let b = jacobian_rank_at(n, d, 3, 2, 2);
        assert_eq!(a.jacobian_rank, b.jacobian_rank, "n={n} d={d}");
    }
}

#[test]
fn single_column_rank_is_min_three_n() {
    for n in 1..=8 {
        assert_eq!(jacobian_rank_at(n, 1, 3, 5, 3).jacobian_rank, n.min(3), "n={n}");
    }
}

#[test]
fn basis_verdict_monotone_in_d() {
    let cells = conjecture_scan(7, 1, 3);
    for n in 2..=7 {
        let verdicts: Vec<bool> = cells.iter().filter(|c| c.n == n).map(|c| c.contains_basis).collect();
        let monotone = verdicts.windows(2).all(|w| !w[0] || w[1]);
        eprintln!("n={n} contains_basis by d: {verdicts:?} monotone={monotone}");
    }
    assert!(cells.iter().all(|c| c.agree));
}
