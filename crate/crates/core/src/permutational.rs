//! Word-closed families of curried maps and the tower equations that decide
//! `k`-permutability.
//!
//! A tower of depth `k` starts at an element, and at each level applies the
//! curried operation at the running value to the next argument and then a
//! word map drawn from the monoid generated by all curried maps. An algebra
//! is `k`-permutational when the depth-`k` value never depends on the start
//! element, whatever the operations, words and arguments.
//!
//! Words are quantified through their images in the transformation monoid:
//! a word acts only through its image map, so ranging over the finite closure
//! is an exact reduction, and the cap on the closure size only bounds memory.
//! The outermost word is fixed to the identity by default: the monoid
//! contains the identity, so equality under it implies equality under every
//! outermost word. A flag re-enables full quantification.

use std::collections::HashSet;

use crate::algebra::{BinaryAlgebra, CurrySide, UnaryMap};
use crate::error::{Error, Result};
use crate::solution::Solution;

/// Default cap on monoid closure size.
pub const DEFAULT_MONOID_CAP: usize = 1_000_000;

/// A set of self-maps closed under composition and containing the identity,
/// generated from a finite set of maps.
#[derive(Debug, Clone)]
pub struct TransformationMonoid {
    n: usize,
    elements: Vec<UnaryMap>,
    generators: Vec<UnaryMap>,
}

impl TransformationMonoid {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Elements in lexicographic image order. Always contains the identity.
    pub fn elements(&self) -> &[UnaryMap] {
        &self.elements
    }

    pub fn generators(&self) -> &[UnaryMap] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &UnaryMap) -> bool {
        self.elements.binary_search(m).is_ok()
    }
}

/// All curried maps of all operations, deduplicated in first-occurrence
/// order (ops outer, elements inner).
pub fn sigma_generators(a: &BinaryAlgebra) -> Vec<UnaryMap> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for op_index in 0..a.ops().len() {
        for x in 0..a.n() {
            let m = a.curried_map(op_index, x);
            if seen.insert(m.clone()) {
                out.push(m);
            }
        }
    }
    out
}

/// Closes `gens` under composition (breadth-first, composing on the right
/// with generators), adds the identity, and errors out when the closure
/// would exceed `cap` elements.
pub fn monoid_closure(n: usize, gens: &[UnaryMap], cap: usize) -> Result<TransformationMonoid> {
    if cap == 0 {
        return Err(Error::InvalidParameter("monoid cap must be at least 1".into()));
    }
    for g in gens {
        if g.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: g.n(),
            });
        }
    }
    let mut seen: HashSet<UnaryMap> = HashSet::new();
    let mut frontier: Vec<UnaryMap> = Vec::new();
    let identity = UnaryMap::identity(n);
    seen.insert(identity.clone());
    frontier.push(identity);
    while let Some(current) = frontier.pop() {
        for g in gens {
            let next = current.compose(g);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                frontier.push(next);
            }
        }
    }
    let mut elements: Vec<UnaryMap> = seen.into_iter().collect();
    elements.sort();
    Ok(TransformationMonoid {
        n,
        elements,
        generators: gens.to_vec(),
    })
}

/// One tower level: the operation applied at the running value, then a word
/// map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    pub op: usize,
    pub word: UnaryMap,
}

/// The syntactic data of a depth-`k` tower, innermost level first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSpec {
    pub levels: Vec<TowerLevel>,
}

impl TowerSpec {
    pub fn k(&self) -> usize {
        self.levels.len()
    }
}

/// Evaluates a tower: depth 0 is `start` itself; level `i` applies the
/// curried op at the previous value to `args[i-1]`, then the level's word.
pub fn omega_eval(a: &BinaryAlgebra, spec: &TowerSpec, start: usize, args: &[usize]) -> Result<usize> {
    if args.len() != spec.k() {
        return Err(Error::ArityMismatch {
            spec_levels: spec.k(),
            args: args.len(),
        });
    }
    let mut value = start;
    for (level, &arg) in spec.levels.iter().zip(args) {
        let applied = match a.op(level.op).curry() {
            CurrySide::Left => a.apply(level.op, value, arg),
            CurrySide::Right => a.apply(level.op, arg, value),
        };
        value = level.word.apply(applied);
    }
    Ok(value)
}

/// A counterexample to `k`-permutability: two start elements the tower tells
/// apart, with everything needed to replay it through [`omega_eval`].
#[derive(Debug, Clone)]
pub struct KPermWitness {
    pub spec: TowerSpec,
    pub args: Vec<usize>,
    pub y: usize,
    pub z: usize,
    pub omega_y: usize,
    pub omega_z: usize,
}

/// Outcome of a `k`-permutability check.
#[derive(Debug, Clone)]
pub enum KPermResult {
    Holds,
    Fails(KPermWitness),
}

impl KPermResult {
    pub fn holds(&self) -> bool {
        matches!(self, KPermResult::Holds)
    }

    pub fn witness(&self) -> Option<&KPermWitness> {
        match self {
            KPermResult::Holds => None,
            KPermResult::Fails(w) => Some(w),
        }
    }
}

/// Quantifier configuration for the `k`-permutability check.
#[derive(Debug, Clone, Copy)]
pub struct KPermOptions {
    /// Quantify word maps at each level. When false, every word is the
    /// identity (the plain variant).
    pub words: bool,
    /// Also range the outermost word over the whole monoid instead of
    /// pinning it to the identity. Redundant (word maps preserve equality),
    /// kept for the agreement test.
    pub quantify_outer_word: bool,
}

impl Default for KPermOptions {
    fn default() -> Self {
        KPermOptions {
            words: true,
            quantify_outer_word: false,
        }
    }
}

/// Applies one tower level to a whole start-to-value function at once.
fn level_image(a: &BinaryAlgebra, f: &UnaryMap, op: usize, arg: usize) -> UnaryMap {
    let table = a.op(op);
    let image = match table.curry() {
        CurrySide::Left => f.image().iter().map(|&v| table.get(v, arg)).collect(),
        CurrySide::Right => f.image().iter().map(|&v| table.get(arg, v)).collect(),
    };
    UnaryMap::new(image).expect("level image stays in range")
}

/// Fast decision: tracks the set of reachable start-to-value functions level
/// by level, deduplicated. The algebra is `k`-permutational iff every
/// depth-`k` function is constant.
fn decide_k_permutational(
    a: &BinaryAlgebra,
    k: usize,
    words: Option<&TransformationMonoid>,
    quantify_outer_word: bool,
) -> bool {
    let n = a.n();
    let op_count = a.ops().len();
    let mut current: Vec<UnaryMap> = vec![UnaryMap::identity(n)];
    for level in 1..=k {
        let mut next: HashSet<UnaryMap> = HashSet::new();
        for f in &current {
            for op in 0..op_count {
                for arg in 0..n {
                    let g = level_image(a, f, op, arg);
                    if let Some(monoid) = words {
                        if level < k || quantify_outer_word {
                            for w in monoid.elements() {
                                next.insert(w.compose(&g));
                            }
                        } else {
                            next.insert(g);
                        }
                    } else {
                        next.insert(g);
                    }
                }
            }
        }
        current = next.into_iter().collect();
    }
    current.iter().all(|f| f.is_constant())
}

/// Lexicographically-first witness search. Enumerates (ops, words, args,
/// y, z) with the innermost level's component varying slowest and scans
/// args depth-first, so the first failure found is the minimal one.
struct WitnessSearch<'a> {
    algebra: &'a BinaryAlgebra,
    k: usize,
    word_choices: Vec<UnaryMap>,
    quantify_outer_word: bool,
}

impl<'a> WitnessSearch<'a> {
    fn run(&self) -> Option<KPermWitness> {
        let op_count = self.algebra.ops().len();
        if self.k == 0 {
            let id = UnaryMap::identity(self.algebra.n());
            return self.check_function(&id, &[], &[], &[]);
        }
        if op_count == 0 {
            return None;
        }
        let mut ops = vec![0usize; self.k];
        loop {
            if let Some(w) = self.search_words(&ops) {
                return Some(w);
            }
            // odometer over op tuples, outermost level fastest
            let mut i = self.k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                ops[i] += 1;
                if ops[i] < op_count {
                    break;
                }
                ops[i] = 0;
            }
        }
    }

    fn search_words(&self, ops: &[usize]) -> Option<KPermWitness> {
        // per-level candidate word indices; the outermost level is pinned to
        // the identity element unless full quantification is requested
        let all: Vec<usize> = (0..self.word_choices.len()).collect();
        let identity_index = self
            .word_choices
            .iter()
            .position(|w| w.is_identity())
            .expect("monoid always contains the identity");
        let candidates = |level: usize| -> &[usize] {
            if level + 1 == self.k && !self.quantify_outer_word {
                std::slice::from_ref(&identity_index)
            } else {
                &all
            }
        };
        let mut positions = vec![0usize; self.k];
        loop {
            let words: Vec<usize> = positions
                .iter()
                .enumerate()
                .map(|(level, &pos)| candidates(level)[pos])
                .collect();
            if let Some(w) = self.search_args(ops, &words) {
                return Some(w);
            }
            let mut i = self.k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                positions[i] += 1;
                if positions[i] < candidates(i).len() {
                    break;
                }
                positions[i] = 0;
            }
        }
    }

    fn search_args(&self, ops: &[usize], words: &[usize]) -> Option<KPermWitness> {
        let id = UnaryMap::identity(self.algebra.n());
        self.recurse(ops, words, &id, &mut Vec::new())
    }

    fn recurse(
        &self,
        ops: &[usize],
        words: &[usize],
        f: &UnaryMap,
        args: &mut Vec<usize>,
    ) -> Option<KPermWitness> {
        let depth = args.len();
        if depth == self.k {
            return self.check_function(f, ops, words, args);
        }
        for arg in 0..self.algebra.n() {
            let applied = level_image(self.algebra, f, ops[depth], arg);
            let g = self.word_choices[words[depth]].compose(&applied);
            args.push(arg);
            if let Some(w) = self.recurse(ops, words, &g, args) {
                return Some(w);
            }
            args.pop();
        }
        None
    }

    fn check_function(
        &self,
        f: &UnaryMap,
        ops: &[usize],
        words: &[usize],
        args: &[usize],
    ) -> Option<KPermWitness> {
        let n = self.algebra.n();
        for y in 0..n {
            for z in 0..n {
                if f.apply(y) != f.apply(z) {
                    let spec = TowerSpec {
                        levels: ops
                            .iter()
                            .zip(words)
                            .map(|(&op, &w)| TowerLevel {
                                op,
                                word: self.word_choices[w].clone(),
                            })
                            .collect(),
                    };
                    return Some(KPermWitness {
                        spec,
                        args: args.to_vec(),
                        y,
                        z,
                        omega_y: f.apply(y),
                        omega_z: f.apply(z),
                    });
                }
            }
        }
        None
    }
}

fn k_permutational_impl(
    a: &BinaryAlgebra,
    k: usize,
    monoid: Option<TransformationMonoid>,
    options: KPermOptions,
) -> KPermResult {
    if decide_k_permutational(a, k, monoid.as_ref(), options.quantify_outer_word) {
        return KPermResult::Holds;
    }
    let word_choices = match &monoid {
        Some(m) => m.elements().to_vec(),
        None => vec![UnaryMap::identity(a.n())],
    };
    let search = WitnessSearch {
        algebra: a,
        k,
        word_choices,
        quantify_outer_word: options.quantify_outer_word,
    };
    let witness = search
        .run()
        .expect("decision said a witness exists, search must find it");
    debug_assert_ne!(
        omega_eval(a, &witness.spec, witness.y, &witness.args).unwrap(),
        omega_eval(a, &witness.spec, witness.z, &witness.args).unwrap(),
    );
    KPermResult::Fails(witness)
}

/// Decision only, skipping the witness search: cheap enough to sweep whole
/// censuses. Agrees with [`is_k_permutational`] by construction (the search
/// only runs after the same decision).
pub fn k_permutational_holds(a: &BinaryAlgebra, k: usize, monoid_cap: usize) -> Result<bool> {
    let monoid = monoid_closure(a.n(), &sigma_generators(a), monoid_cap)?;
    Ok(decide_k_permutational(a, k, Some(&monoid), false))
}

/// Decision only, words pinned to the identity.
pub fn k_permutational_nowords_holds(a: &BinaryAlgebra, k: usize) -> bool {
    decide_k_permutational(a, k, None, false)
}

/// Full quantifier control; `monoid_cap` is ignored in the no-words variant.
pub fn is_k_permutational_with(
    a: &BinaryAlgebra,
    k: usize,
    monoid_cap: usize,
    options: KPermOptions,
) -> Result<KPermResult> {
    let monoid = if options.words {
        Some(monoid_closure(a.n(), &sigma_generators(a), monoid_cap)?)
    } else {
        None
    };
    Ok(k_permutational_impl(a, k, monoid, options))
}

/// Decides whether every depth-`k` tower value is independent of the start
/// element, with words ranging over the full monoid closure. On failure the
/// result carries the lexicographically first witness.
pub fn is_k_permutational(a: &BinaryAlgebra, k: usize, monoid_cap: usize) -> Result<KPermResult> {
    is_k_permutational_with(a, k, monoid_cap, KPermOptions::default())
}

/// The plain variant: every word pinned to the identity.
pub fn is_k_permutational_nowords(a: &BinaryAlgebra, k: usize) -> Result<KPermResult> {
    is_k_permutational_with(
        a,
        k,
        DEFAULT_MONOID_CAP,
        KPermOptions {
            words: false,
            quantify_outer_word: false,
        },
    )
}

/// The four level-2 map equations for a solution `(X, σ, τ)`:
/// `σ_{σ_x(z)} = σ_{σ_y(z)}`, `τ_{τ_x(z)} = τ_{τ_y(z)}`,
/// `σ_{τ_x(z)} = σ_{τ_y(z)}`, `τ_{σ_x(z)} = τ_{σ_y(z)}`, for all `x, y, z`.
/// Holds iff the multipermutation level is at most 2.
///
/// The pair must actually be a solution; that precondition is checked.
pub fn mpl2_equations_hold(s: &Solution) -> Result<bool> {
    if !s.check_braid() {
        return Err(Error::NotASolution);
    }
    let n = s.n();
    // group σ rows and τ columns so map equality is an id comparison
    let mut row_ids = std::collections::HashMap::new();
    let sigma_id: Vec<usize> = (0..n)
        .map(|x| {
            let next = row_ids.len();
            *row_ids.entry(s.sigma_map(x)).or_insert(next)
        })
        .collect();
    let mut col_ids = std::collections::HashMap::new();
    let tau_id: Vec<usize> = (0..n)
        .map(|y| {
            let next = col_ids.len();
            *col_ids.entry(s.tau_map(y)).or_insert(next)
        })
        .collect();

    // each equation says the map id at γ_x(z) does not depend on x
    for z in 0..n {
        for x in 1..n {
            if sigma_id[s.sigma(x, z)] != sigma_id[s.sigma(0, z)] {
                return Ok(false);
            }
            if tau_id[s.tau(z, x)] != tau_id[s.tau(z, 0)] {
                return Ok(false);
            }
            if sigma_id[s.tau(z, x)] != sigma_id[s.tau(z, 0)] {
                return Ok(false);
            }
            if tau_id[s.sigma(x, z)] != tau_id[s.sigma(0, z)] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::samples;

    #[test]
    fn generators_of_projection_collapse_to_identity() {
        let a = samples::projection(4).unwrap().as_algebra();
        let gens = sigma_generators(&a);
        assert_eq!(gens.len(), 1);
        assert!(gens[0].is_identity());
    }

    #[test]
    fn generators_of_retractable5() {
        let a = samples::retractable5().as_algebra();
        let gens = sigma_generators(&a);
        // two distinct σ rows plus the identity coming from τ
        assert_eq!(gens.len(), 3);
        assert!(gens.iter().any(|m| m.is_identity()));
    }

    #[test]
    fn generators_of_irretractable3() {
        let a = samples::irretractable(3).unwrap().as_algebra();
        let gens = sigma_generators(&a);
        assert!(gens.contains(&UnaryMap::constant(4, 1)));
        assert!(gens.contains(&UnaryMap::new(vec![1, 1, 1, 2]).unwrap()));
    }

    #[test]
    fn closure_of_identity_is_trivial() {
        let m = monoid_closure(3, &[UnaryMap::identity(3)], 10).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn closure_matches_pairwise_fixpoint_oracle() {
        // oracle: saturate under all pairwise compositions
        let a = samples::irretractable(3).unwrap().as_algebra();
        let gens = sigma_generators(&a);
        let mut oracle: std::collections::BTreeSet<UnaryMap> =
            gens.iter().cloned().collect();
        oracle.insert(UnaryMap::identity(4));
        loop {
            let mut added = false;
            let snapshot: Vec<UnaryMap> = oracle.iter().cloned().collect();
            for f in &snapshot {
                for g in &snapshot {
                    added |= oracle.insert(f.compose(g));
                }
            }
            if !added {
                break;
            }
        }
        let m = monoid_closure(4, &gens, 1000).unwrap();
        let elements: std::collections::BTreeSet<UnaryMap> =
            m.elements().iter().cloned().collect();
        assert_eq!(elements, oracle);
        assert!(m.len() <= 4usize.pow(4));
        assert!(m.contains(&UnaryMap::constant(4, 1)));
    }

    #[test]
    fn closure_cap_is_enforced() {
        let a = samples::retractable5().as_algebra();
        let gens = sigma_generators(&a);
        assert!(matches!(
            monoid_closure(5, &gens, 2),
            Err(Error::CapExceeded { cap: 2 })
        ));
    }

    #[test]
    fn omega_depth_zero_is_start() {
        let a = samples::projection(3).unwrap().as_algebra();
        let spec = TowerSpec { levels: vec![] };
        assert_eq!(omega_eval(&a, &spec, 2, &[]).unwrap(), 2);
    }

    #[test]
    fn omega_arity_mismatch() {
        let a = samples::projection(3).unwrap().as_algebra();
        let spec = TowerSpec { levels: vec![] };
        assert!(matches!(
            omega_eval(&a, &spec, 0, &[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn omega_towers_on_irretractable3() {
        let a = samples::irretractable(3).unwrap().as_algebra();
        let id = UnaryMap::identity(4);
        // depth 2, both ops σ, no words
        let spec = TowerSpec {
            levels: vec![
                TowerLevel { op: 0, word: id.clone() },
                TowerLevel { op: 0, word: id.clone() },
            ],
        };
        assert_eq!(omega_eval(&a, &spec, 0, &[0, 0]).unwrap(), 2);
        assert_eq!(omega_eval(&a, &spec, 1, &[0, 0]).unwrap(), 3);

        // depth 3 with the word τ_0 at the middle level
        let tau0 = UnaryMap::new(vec![1, 1, 1, 2]).unwrap();
        let spec = TowerSpec {
            levels: vec![
                TowerLevel { op: 0, word: id.clone() },
                TowerLevel { op: 0, word: tau0 },
                TowerLevel { op: 0, word: id },
            ],
        };
        assert_eq!(omega_eval(&a, &spec, 0, &[0, 0, 0]).unwrap(), 2);
        assert_eq!(omega_eval(&a, &spec, 1, &[0, 0, 0]).unwrap(), 3);
    }

    #[test]
    fn irretractable3_depth2_fails_with_plain_witness() {
        let a = samples::irretractable(3).unwrap().as_algebra();
        let r = is_k_permutational(&a, 2, DEFAULT_MONOID_CAP).unwrap();
        let w = r.witness().expect("must fail at depth n-1");
        assert!(w.spec.levels.iter().all(|l| l.word.is_identity()));
        assert!(w.spec.levels.iter().all(|l| l.op == 0));
        assert_eq!(w.args, vec![0, 0]);
        assert_eq!((w.y, w.z), (0, 1));
        assert_eq!((w.omega_y, w.omega_z), (2, 3));
    }

    #[test]
    fn irretractable3_depth3_fails_only_through_words() {
        let a = samples::irretractable(3).unwrap().as_algebra();
        assert!(is_k_permutational_nowords(&a, 3).unwrap().holds());

        let r = is_k_permutational(&a, 3, DEFAULT_MONOID_CAP).unwrap();
        let w = r.witness().expect("must fail at depth n with words");
        let tau0 = UnaryMap::new(vec![1, 1, 1, 2]).unwrap();
        let nontrivial: Vec<&TowerLevel> = w
            .spec
            .levels
            .iter()
            .filter(|l| !l.word.is_identity())
            .collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].word, tau0);
        assert_eq!(nontrivial[0].op, 0);
        assert_eq!((w.omega_y, w.omega_z), (2, 3));
        // replay
        assert_eq!(omega_eval(&a, &w.spec, w.y, &w.args).unwrap(), 2);
        assert_eq!(omega_eval(&a, &w.spec, w.z, &w.args).unwrap(), 3);
    }

    #[test]
    fn irretractable3_depth2_nowords_also_fails() {
        let a = samples::irretractable(3).unwrap().as_algebra();
        let r = is_k_permutational_nowords(&a, 2).unwrap();
        assert!(!r.holds());
    }

    #[test]
    fn singleton_is_k_permutational_for_every_k() {
        let a = samples::projection(1).unwrap().as_algebra();
        for k in 0..5 {
            assert!(is_k_permutational(&a, k, DEFAULT_MONOID_CAP).unwrap().holds());
        }
    }

    #[test]
    fn depth_zero_requires_singleton() {
        let a = samples::projection(3).unwrap().as_algebra();
        let r = is_k_permutational(&a, 0, DEFAULT_MONOID_CAP).unwrap();
        let w = r.witness().unwrap();
        assert_eq!((w.y, w.z), (0, 1));
        assert_eq!(w.spec.k(), 0);
    }

    #[test]
    fn projection_is_1_permutational() {
        let a = samples::projection(4).unwrap().as_algebra();
        assert!(is_k_permutational(&a, 1, DEFAULT_MONOID_CAP).unwrap().holds());
    }

    #[test]
    fn outer_word_quantification_agrees() {
        for (a, k) in [
            (samples::retractable5().as_algebra(), 2),
            (samples::irretractable(3).unwrap().as_algebra(), 3),
            (samples::projection(3).unwrap().as_algebra(), 1),
        ] {
            let pinned = is_k_permutational(&a, k, DEFAULT_MONOID_CAP).unwrap();
            let full = is_k_permutational_with(
                &a,
                k,
                DEFAULT_MONOID_CAP,
                KPermOptions {
                    words: true,
                    quantify_outer_word: true,
                },
            )
            .unwrap();
            assert_eq!(pinned.holds(), full.holds());
        }
    }

    #[test]
    fn mpl2_equations_on_samples() {
        assert!(mpl2_equations_hold(&samples::retractable5()).unwrap());
        assert!(mpl2_equations_hold(&samples::projection(3).unwrap()).unwrap());
        assert!(!mpl2_equations_hold(&samples::irretractable(3).unwrap()).unwrap());
    }

    #[test]
    fn mpl2_rejects_non_solutions() {
        // find some 2-element pair that fails the braid relation
        let bad = (0..256u32)
            .map(|code| {
                let bits: Vec<usize> = (0..8).map(|i| ((code >> i) & 1) as usize).collect();
                Solution::new(2, bits[..4].to_vec(), bits[4..].to_vec()).unwrap()
            })
            .find(|s| !s.check_braid())
            .unwrap();
        assert!(matches!(mpl2_equations_hold(&bad), Err(Error::NotASolution)));
    }
}
