//! Property tests for the crate-wide invariants: checker agreement on
//! arbitrary table pairs, partition semantics, quotient laws, refinement
//! monotonicity, and the k-permutability implication chain.

use proptest::prelude::*;
use std::collections::HashSet;

use ybe_core::algebra::{BinaryAlgebra, CurrySide, OpTable};
use ybe_core::enumeration::{enumerate_solutions, sample_solutions};
use ybe_core::partition::Partition;
use ybe_core::permutational::{
    is_k_permutational, k_permutational_holds, k_permutational_nowords_holds, omega_eval,
    DEFAULT_MONOID_CAP,
};
use ybe_core::retraction::{max_congruence_below_sim, multipermutation_level, retract, sim, Mpl};
use ybe_core::solution::Solution;

fn table(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, n * n)
}

fn pair(n: usize) -> impl Strategy<Value = Solution> {
    (table(n), table(n)).prop_map(move |(sigma, tau)| Solution::new(n, sigma, tau).unwrap())
}

fn algebra(n: usize) -> impl Strategy<Value = BinaryAlgebra> {
    (table(n), table(n)).prop_map(move |(s, t)| {
        BinaryAlgebra::new(
            n,
            vec![
                OpTable::new("f", CurrySide::Left, n, s).unwrap(),
                OpTable::new("g", CurrySide::Right, n, t).unwrap(),
            ],
        )
        .unwrap()
    })
}

proptest! {
    // braid relation and the three identities agree on arbitrary tables,
    // valid solutions or not
    #[test]
    fn braid_equals_identity_conjunction(s in (2usize..=5).prop_flat_map(pair)) {
        prop_assert_eq!(s.check_braid(), s.check_braid_identities().all());
    }

    // two values are equal exactly when they encode the same equivalence
    #[test]
    fn partition_equality_is_semantic(raw1 in prop::collection::vec(0usize..4, 6),
                                      raw2 in prop::collection::vec(0usize..4, 6)) {
        let p = Partition::from_class_of(&raw1);
        let q = Partition::from_class_of(&raw2);
        let same_relation = (0..6).all(|x| (0..6).all(|y| {
            (raw1[x] == raw1[y]) == (raw2[x] == raw2[y])
        }));
        prop_assert_eq!(p == q, same_relation);
    }

    #[test]
    fn quotient_laws(a in (1usize..=4).prop_flat_map(algebra)) {
        let n = a.n();
        let by_identity = a.quotient(&Partition::identity(n)).unwrap();
        prop_assert!(a.is_isomorphic_to(&by_identity));
        prop_assert_eq!(a.quotient(&Partition::full(n)).unwrap().n(), 1);
    }

    #[test]
    fn refinement_basics(a in (1usize..=5).prop_flat_map(algebra)) {
        let (approx, trace) = max_congruence_below_sim(&a).unwrap();
        prop_assert!(approx.refines(&sim(&a)));
        prop_assert!(a.is_congruence(&approx).unwrap());
        prop_assert!(trace.rounds() + 1 <= a.n());
        for w in trace.steps().windows(2) {
            prop_assert!(w[1].refines(&w[0]));
        }
    }

    #[test]
    fn tower_decrement(a in (1usize..=4).prop_flat_map(algebra)) {
        if let Mpl::Level(k) = multipermutation_level(&a).unwrap() {
            if k >= 1 {
                let r = retract(&a).unwrap();
                prop_assert_eq!(multipermutation_level(&r).unwrap(), Mpl::Level(k - 1));
            }
        }
    }

    #[test]
    fn congruences_below_closed_under_join(a in (1usize..=4).prop_flat_map(algebra)) {
        let below = sim(&a);
        let all = a.all_congruences_below(&below, 8).unwrap();
        for p in &all {
            for q in &all {
                let j = p.join(q);
                prop_assert!(all.contains(&j));
            }
        }
        let max = all.iter().fold(Partition::identity(a.n()), |acc, c| acc.join(c));
        prop_assert!(all.contains(&max));
    }
}

#[test]
fn involutive_implies_bijective_on_census() {
    for n in 1..=3 {
        for s in enumerate_solutions(n, true).unwrap() {
            let c = s.classify();
            if c.involutive {
                assert!(c.bijective, "involutive but not bijective: {s:?}");
            }
        }
    }
}

#[test]
fn implication_chain_and_monotonicity() {
    // words ⟹ no-words, and k ⟹ k+1, across the small census corpus
    let mut corpus: Vec<Solution> = Vec::new();
    for n in 1..=3 {
        corpus.extend(enumerate_solutions(n, true).unwrap());
    }
    for s in &corpus {
        let a = s.as_algebra();
        let mut previous: Option<bool> = None;
        for k in 0..=4 {
            let with_words = k_permutational_holds(&a, k, DEFAULT_MONOID_CAP).unwrap();
            let without = k_permutational_nowords_holds(&a, k);
            assert!(
                !with_words || without,
                "words-permutational but not plain at k={k}: {s:?}"
            );
            if let Some(prev) = previous {
                assert!(
                    !prev || with_words,
                    "monotonicity violated between k={} and k={k}: {s:?}",
                    k - 1
                );
            }
            previous = Some(with_words);
        }
    }
}

#[test]
fn witnesses_replay_through_omega_eval() {
    let mut checked = 0;
    for s in sample_solutions(3, 40, 99).unwrap() {
        let a = s.as_algebra();
        for k in 0..=3 {
            if let Some(w) = is_k_permutational(&a, k, DEFAULT_MONOID_CAP)
                .unwrap()
                .witness()
                .cloned()
            {
                assert_eq!(omega_eval(&a, &w.spec, w.y, &w.args).unwrap(), w.omega_y);
                assert_eq!(omega_eval(&a, &w.spec, w.z, &w.args).unwrap(), w.omega_z);
                assert_ne!(w.omega_y, w.omega_z);
                checked += 1;
            }
        }
    }
    assert!(checked > 0, "expected at least one failing instance");
}

#[test]
fn sampled_solutions_are_distinct_and_verified() {
    let samples = sample_solutions(4, 50, 5).unwrap();
    let mut seen = HashSet::new();
    for s in &samples {
        assert!(s.check_braid());
        assert!(s.check_braid_identities().all());
        assert!(seen.insert((s.sigma_rows(), s.tau_rows())));
    }
}
