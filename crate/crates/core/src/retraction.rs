//! The coinciding-maps equivalence `~`, the refinement sequence `~_i`, the
//! maximal congruence `≈` below `~`, retract towers, and multipermutation
//! levels.
//!
//! The refinement engine is Moore-style: in each round every element gets the
//! signature of current classes of its images under all curried maps, and
//! elements are regrouped by (old class, signature). On a finite carrier the
//! sequence stabilizes after at most `n - 1` proper refinements, since every
//! proper step increases the class count.

use crate::algebra::{BinaryAlgebra, UnaryMap};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// The full refinement run: `~_0, ~_1, …` up to and including the first
/// repeated partition (the fixpoint witness).
#[derive(Debug, Clone)]
pub struct RefinementTrace {
    steps: Vec<Partition>,
}

impl RefinementTrace {
    /// All computed partitions; the last two entries are equal.
    pub fn steps(&self) -> &[Partition] {
        &self.steps
    }

    /// Number of proper refinements before stabilization.
    pub fn rounds(&self) -> usize {
        self.steps.len() - 2
    }

    pub fn fixpoint(&self) -> &Partition {
        self.steps.last().expect("trace is never empty")
    }
}

/// How a retract tower ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerStatus {
    /// Some level is a singleton; `level` is its index (= the
    /// multipermutation level).
    SingletonReached { level: usize },
    /// The tower stabilized at a non-singleton size: the last level is
    /// irretractable.
    StabilizedAboveOne { size: usize },
    /// The caller-supplied level bound ran out before the tower resolved.
    /// Never happens with the default bound.
    Truncated { size: usize },
}

/// The iterated retraction `Ret⁰, Ret¹, …` of an algebra.
#[derive(Debug, Clone)]
pub struct RetractTower {
    levels: Vec<BinaryAlgebra>,
    status: TowerStatus,
}

impl RetractTower {
    pub fn levels(&self) -> &[BinaryAlgebra] {
        &self.levels
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|a| a.n()).collect()
    }

    pub fn status(&self) -> TowerStatus {
        self.status
    }
}

/// Multipermutation level of an algebra: either the minimal `k` with a
/// singleton `k`-th retract, or the size at which the tower stabilized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mpl {
    Level(usize),
    Irretractable { size: usize },
}

impl Mpl {
    pub fn at_most(&self, k: usize) -> bool {
        match self {
            Mpl::Level(l) => *l <= k,
            Mpl::Irretractable { .. } => false,
        }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            Mpl::Level(l) => Some(*l),
            Mpl::Irretractable { .. } => None,
        }
    }
}

impl std::fmt::Display for Mpl {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mpl::Level(l) => write!(f, "{l}"),
            Mpl::Irretractable { size } => write!(f, "irretractable (size {size})"),
        }
    }
}

/// All curried maps of all ops, deduplicated. Equal maps impose identical
/// refinement constraints, so deduplication is sound and often collapses the
/// action set dramatically.
fn action_maps(a: &BinaryAlgebra) -> Vec<UnaryMap> {
    let mut maps: Vec<UnaryMap> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for op_index in 0..a.ops().len() {
        for x in 0..a.n() {
            let m = a.curried_map(op_index, x);
            if seen.insert(m.clone()) {
                maps.push(m);
            }
        }
    }
    maps
}

/// The equivalence `~`: `x ~ y` iff every curried map at `x` equals the one
/// at `y`, for every operation.
pub fn sim(a: &BinaryAlgebra) -> Partition {
    let keys: Vec<Vec<UnaryMap>> = (0..a.n())
        .map(|x| {
            (0..a.ops().len())
                .map(|op_index| a.curried_map(op_index, x))
                .collect()
        })
        .collect();
    Partition::group_by_key(a.n(), |x| keys[x].clone())
}

fn refine_with(a: &BinaryAlgebra, maps: &[UnaryMap], p: &Partition) -> Partition {
    let n = a.n();
    let signatures: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let mut sig = Vec::with_capacity(maps.len() + 1);
            sig.push(p.class_of(x));
            sig.extend(maps.iter().map(|m| p.class_of(m.apply(x))));
            sig
        })
        .collect();
    Partition::group_by_key(n, |x| signatures[x].clone())
}

/// One refinement round: `a` and `b` stay together iff they share a class of
/// `p` and every curried map sends them into a common class of `p`.
pub fn refine_step(a: &BinaryAlgebra, p: &Partition) -> Result<Partition> {
    if p.n() != a.n() {
        return Err(Error::SizeMismatch {
            expected: a.n(),
            got: p.n(),
        });
    }
    Ok(refine_with(a, &action_maps(a), p))
}

/// Iterates refinement from `~` to its fixpoint `≈`, the maximal congruence
/// below `~`. Returns the fixpoint and the full trace. The fixpoint is
/// re-verified to be a congruence; a failure there would be a bug, not bad
/// input.
pub fn max_congruence_below_sim(a: &BinaryAlgebra) -> Result<(Partition, RefinementTrace)> {
    let maps = action_maps(a);
    let mut steps = vec![sim(a)];
    loop {
        let prev = steps.last().unwrap();
        let next = refine_with(a, &maps, prev);
        debug_assert!(next.refines(prev), "refinement must be monotone");
        let done = &next == prev;
        steps.push(next);
        if done {
            break;
        }
        // each proper refinement adds at least one class
        debug_assert!(steps.len() <= a.n() + 1, "exceeded the n-1 round bound");
    }
    let trace = RefinementTrace { steps };
    let fixpoint = trace.fixpoint().clone();
    if !a.is_congruence(&fixpoint)? {
        return Err(Error::Internal(
            "refinement fixpoint is not a congruence".into(),
        ));
    }
    Ok((fixpoint, trace))
}

/// The retract: quotient by `≈`.
pub fn retract(a: &BinaryAlgebra) -> Result<BinaryAlgebra> {
    let (approx, _) = max_congruence_below_sim(a)?;
    a.quotient(&approx)
}

/// Iterates retraction until a singleton is reached or the size stops
/// shrinking. `max_levels` bounds the number of retraction steps; `None`
/// uses the carrier size, which always suffices.
pub fn retract_tower(a: &BinaryAlgebra, max_levels: Option<usize>) -> Result<RetractTower> {
    let bound = max_levels.unwrap_or(a.n()).max(1);
    let mut levels = vec![a.clone()];
    let status = loop {
        let current = levels.last().unwrap();
        if current.n() == 1 {
            break TowerStatus::SingletonReached {
                level: levels.len() - 1,
            };
        }
        if levels.len() > bound {
            break TowerStatus::Truncated { size: current.n() };
        }
        let next = retract(current)?;
        let stabilized = next.n() == current.n();
        levels.push(next);
        if stabilized {
            break TowerStatus::StabilizedAboveOne {
                size: levels.last().unwrap().n(),
            };
        }
    };
    Ok(RetractTower { levels, status })
}

/// The minimal `k` such that the `k`-th retract is a singleton, if the tower
/// reaches one; otherwise the size it stabilized at.
pub fn multipermutation_level(a: &BinaryAlgebra) -> Result<Mpl> {
    let tower = retract_tower(a, None)?;
    Ok(match tower.status() {
        TowerStatus::SingletonReached { level } => Mpl::Level(level),
        TowerStatus::StabilizedAboveOne { size } => Mpl::Irretractable { size },
        TowerStatus::Truncated { .. } => unreachable!("default bound always resolves"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::samples;

    #[test]
    fn sim_of_retractable5() {
        let a = samples::retractable5().as_algebra();
        assert_eq!(
            sim(&a),
            Partition::from_classes(5, &[vec![0, 2, 4], vec![1, 3]]).unwrap()
        );
    }

    #[test]
    fn sim_of_projection_is_full() {
        let a = samples::projection(4).unwrap().as_algebra();
        assert!(sim(&a).is_full());
    }

    #[test]
    fn sim_of_irretractable_merges_top_pair_only() {
        for n in 3..=5 {
            let a = samples::irretractable(n).unwrap().as_algebra();
            let p = sim(&a);
            assert_eq!(p.class_count(), n, "n={n}");
            assert!(p.same_class(n - 1, n));
        }
    }

    #[test]
    fn refine_steps_match_known_trace() {
        let a = samples::retractable5().as_algebra();
        let sim0 = sim(&a);
        let sim1 = refine_step(&a, &sim0).unwrap();
        assert_eq!(
            sim1,
            Partition::from_classes(5, &[vec![0, 4], vec![2], vec![1, 3]]).unwrap()
        );
        let sim2 = refine_step(&a, &sim1).unwrap();
        assert_eq!(
            sim2,
            Partition::from_classes(5, &[vec![0, 4], vec![1], vec![2], vec![3]]).unwrap()
        );
        assert_eq!(refine_step(&a, &sim2).unwrap(), sim2);
    }

    #[test]
    fn refine_step_of_identity_is_identity() {
        let a = samples::retractable5().as_algebra();
        let id = Partition::identity(5);
        assert_eq!(refine_step(&a, &id).unwrap(), id);
    }

    #[test]
    fn refine_step_size_mismatch() {
        let a = samples::retractable5().as_algebra();
        assert!(refine_step(&a, &Partition::identity(3)).is_err());
    }

    #[test]
    fn max_congruence_of_retractable5() {
        let a = samples::retractable5().as_algebra();
        let (approx, trace) = max_congruence_below_sim(&a).unwrap();
        assert_eq!(
            approx,
            Partition::from_classes(5, &[vec![0, 4], vec![1], vec![2], vec![3]]).unwrap()
        );
        assert_eq!(trace.rounds(), 2);
        let counts: Vec<usize> = trace.steps().iter().map(|p| p.class_count()).collect();
        assert_eq!(counts, vec![2, 3, 4, 4]);
    }

    #[test]
    fn max_congruence_of_projection_is_full_in_zero_rounds() {
        let a = samples::projection(4).unwrap().as_algebra();
        let (approx, trace) = max_congruence_below_sim(&a).unwrap();
        assert!(approx.is_full());
        assert_eq!(trace.rounds(), 0);
    }

    #[test]
    fn chain_fixpoint_matches_brute_force_maximum() {
        for big_n in 3..=6 {
            let a = samples::chain_with_twin(big_n).unwrap().as_algebra();
            let (approx, _) = max_congruence_below_sim(&a).unwrap();
            let all = a.all_congruences_below(&sim(&a), 8).unwrap();
            let max = all
                .iter()
                .fold(Partition::identity(a.n()), |acc, c| acc.join(c));
            assert_eq!(approx, max, "N={big_n}");
            // classes: {N-1, twin} plus singletons
            assert_eq!(approx.class_count(), a.n() - 1);
            assert!(approx.same_class(big_n - 1, big_n + 1));
        }
    }

    #[test]
    fn retract_sizes() {
        let a = samples::retractable5().as_algebra();
        assert_eq!(retract(&a).unwrap().n(), 4);

        let b = samples::irretractable(3).unwrap().as_algebra();
        let r = retract(&b).unwrap();
        assert_eq!(r.n(), 4);
        assert!(b.is_isomorphic_to(&r));

        let s = crate::algebra::BinaryAlgebra::new(
            1,
            vec![crate::algebra::OpTable::new("m", crate::algebra::CurrySide::Left, 1, vec![0]).unwrap()],
        )
        .unwrap();
        assert_eq!(retract(&s).unwrap().n(), 1);
    }

    #[test]
    fn tower_of_retractable5() {
        let a = samples::retractable5().as_algebra();
        let tower = retract_tower(&a, None).unwrap();
        assert_eq!(tower.sizes(), vec![5, 4, 1]);
        assert_eq!(tower.status(), TowerStatus::SingletonReached { level: 2 });
    }

    #[test]
    fn tower_of_irretractable_stabilizes() {
        let a = samples::irretractable(3).unwrap().as_algebra();
        let tower = retract_tower(&a, None).unwrap();
        assert_eq!(tower.sizes(), vec![4, 4]);
        assert_eq!(tower.status(), TowerStatus::StabilizedAboveOne { size: 4 });
    }

    #[test]
    fn tower_of_chain() {
        let a = samples::chain_with_twin(5).unwrap().as_algebra();
        let tower = retract_tower(&a, None).unwrap();
        assert_eq!(tower.sizes(), vec![7, 6, 1]);
    }

    #[test]
    fn mpl_examples() {
        assert_eq!(
            multipermutation_level(&samples::retractable5().as_algebra()).unwrap(),
            Mpl::Level(2)
        );
        assert_eq!(
            multipermutation_level(&samples::projection(4).unwrap().as_algebra()).unwrap(),
            Mpl::Level(1)
        );
        let singleton = samples::projection(1).unwrap().as_algebra();
        assert_eq!(
            multipermutation_level(&singleton).unwrap(),
            Mpl::Level(0)
        );
        assert_eq!(
            multipermutation_level(&samples::irretractable(4).unwrap().as_algebra()).unwrap(),
            Mpl::Irretractable { size: 5 }
        );
    }

    #[test]
    fn tower_decrement_property() {
        for a in [
            samples::retractable5().as_algebra(),
            samples::chain_with_twin(4).unwrap().as_algebra(),
            samples::projection(5).unwrap().as_algebra(),
        ] {
            if let Mpl::Level(k) = multipermutation_level(&a).unwrap() {
                if k >= 1 {
                    let r = retract(&a).unwrap();
                    assert_eq!(multipermutation_level(&r).unwrap(), Mpl::Level(k - 1));
                }
            }
        }
    }

    #[test]
    fn approx_refines_sim_and_trace_is_monotone() {
        for a in [
            samples::retractable5().as_algebra(),
            samples::irretractable(3).unwrap().as_algebra(),
            samples::chain_with_twin(4).unwrap().as_algebra(),
        ] {
            let (approx, trace) = max_congruence_below_sim(&a).unwrap();
            assert!(approx.refines(&sim(&a)));
            assert!(trace.rounds() + 1 <= a.n());
            for w in trace.steps().windows(2) {
                assert!(w[1].refines(&w[0]));
            }
            // every intermediate step that is not a congruence is properly refined
            for (i, step) in trace.steps()[..trace.steps().len() - 1].iter().enumerate() {
                if !a.is_congruence(step).unwrap() {
                    assert_ne!(&trace.steps()[i + 1], step);
                }
            }
        }
    }

    #[test]
    fn truncated_tower_reports_status() {
        let a = samples::retractable5().as_algebra();
        let tower = retract_tower(&a, Some(1)).unwrap();
        assert_eq!(tower.status(), TowerStatus::Truncated { size: 4 });
    }
}
