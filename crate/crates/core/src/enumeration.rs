//! Exhaustive and sampled enumeration of solution pairs on small carriers.
//!
//! The search fills σ row-major, then τ row-major. Once σ is complete, the
//! σ-composition law pins a candidate domain for every τ cell: the instance
//! at `(x, y)` mentions exactly the one τ cell `τ_y(x)`, so it becomes a
//! per-cell domain instead of a post-hoc check. The remaining two identities
//! are checked incrementally on every instance whose cells are all assigned.
//! Identities prune far earlier than a leaf-level braid check would.
//!
//! Exhaustive order is lexicographic over the flattened `(σ, τ)` pair, and
//! the tree shards cleanly on the first σ row: shard-major, in-shard
//! lexicographic merge order equals the sequential order.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::retraction::{max_congruence_below_sim, multipermutation_level, sim, Mpl};
use crate::solution::Solution;

/// Largest carrier for which exhaustive enumeration is allowed. `n = 2` is
/// instant and `n = 3` takes seconds; `n = 4` is supported but impractical
/// without sharding across many cores (the σ space alone has `4^16` tables).
pub const EXHAUSTIVE_LIMIT: usize = 4;

/// Number of `(σ, τ)` table pairs on a carrier of size `n`.
pub fn pair_space_size(n: usize) -> u128 {
    (n as u128).pow(2 * (n * n) as u32)
}

/// Properties a search can filter on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPredicate {
    IsSolution,
    Degenerate,
    Nondegenerate,
    Involutive,
    Irretractable,
    SimNotCongruence,
    MplEquals(usize),
    MplAtMost(usize),
}

impl SearchPredicate {
    pub fn evaluate(&self, s: &Solution) -> bool {
        match self {
            SearchPredicate::IsSolution => s.check_braid(),
            SearchPredicate::Degenerate => s.classify().degenerate,
            SearchPredicate::Nondegenerate => !s.classify().degenerate,
            SearchPredicate::Involutive => s.classify().involutive,
            SearchPredicate::Irretractable => {
                let a = s.as_algebra();
                let (approx, _) = max_congruence_below_sim(&a).expect("valid algebra");
                a.n() >= 2 && approx.is_identity()
            }
            SearchPredicate::SimNotCongruence => {
                let a = s.as_algebra();
                !a.is_congruence(&sim(&a)).expect("matching sizes")
            }
            SearchPredicate::MplEquals(k) => {
                multipermutation_level(&s.as_algebra()).expect("valid algebra")
                    == Mpl::Level(*k)
            }
            SearchPredicate::MplAtMost(k) => multipermutation_level(&s.as_algebra())
                .expect("valid algebra")
                .at_most(*k),
        }
    }

    /// The fixed vocabulary for a census over carriers of size `n`.
    pub fn vocabulary(n: usize) -> Vec<SearchPredicate> {
        let mut v = vec![
            SearchPredicate::IsSolution,
            SearchPredicate::Degenerate,
            SearchPredicate::Nondegenerate,
            SearchPredicate::Involutive,
            SearchPredicate::Irretractable,
            SearchPredicate::SimNotCongruence,
        ];
        for k in 0..=n {
            v.push(SearchPredicate::MplEquals(k));
        }
        for k in 0..=n {
            v.push(SearchPredicate::MplAtMost(k));
        }
        v
    }
}

impl std::fmt::Display for SearchPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchPredicate::IsSolution => write!(f, "is_solution"),
            SearchPredicate::Degenerate => write!(f, "degenerate"),
            SearchPredicate::Nondegenerate => write!(f, "nondegenerate"),
            SearchPredicate::Involutive => write!(f, "involutive"),
            SearchPredicate::Irretractable => write!(f, "irretractable"),
            SearchPredicate::SimNotCongruence => write!(f, "sim_not_congruence"),
            SearchPredicate::MplEquals(k) => write!(f, "mpl_equals({k})"),
            SearchPredicate::MplAtMost(k) => write!(f, "mpl_at_most({k})"),
        }
    }
}

impl FromStr for SearchPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_arg = |name: &str| -> Result<usize> {
            let inner = s
                .strip_prefix(name)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::InvalidParameter(format!("unknown predicate `{s}`")))?;
            inner
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad argument in `{s}`")))
        };
        match s {
            "is_solution" => Ok(SearchPredicate::IsSolution),
            "degenerate" => Ok(SearchPredicate::Degenerate),
            "nondegenerate" => Ok(SearchPredicate::Nondegenerate),
            "involutive" => Ok(SearchPredicate::Involutive),
            "irretractable" => Ok(SearchPredicate::Irretractable),
            "sim_not_congruence" => Ok(SearchPredicate::SimNotCongruence),
            _ if s.starts_with("mpl_equals") => Ok(SearchPredicate::MplEquals(parse_arg("mpl_equals")?)),
            _ if s.starts_with("mpl_at_most") => Ok(SearchPredicate::MplAtMost(parse_arg("mpl_at_most")?)),
            _ => Err(Error::InvalidParameter(format!("unknown predicate `{s}`"))),
        }
    }
}

/// Census statistics for one carrier size.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    /// Size of the `(σ, τ)` pair space the exhaustive run covers.
    pub total_pairs_examined: u128,
    pub solutions_found: u64,
    pub solutions_up_to_iso: u64,
    /// Counts over the isomorphism-class representatives, keyed by predicate
    /// name.
    pub predicate_counts: std::collections::BTreeMap<String, u64>,
}

// ---------------------------------------------------------------------------
// Backtracking search
// ---------------------------------------------------------------------------

/// Identity instances checked incrementally during the τ phase.
#[derive(Clone, Copy)]
enum Inst {
    /// cross law at (x, y, z)
    Cross { x: usize, y: usize, z: usize },
    /// τ-composition law at (x, y, z)
    TauComp { x: usize, y: usize, z: usize },
}

const UNSET: usize = usize::MAX;

struct Search<'v> {
    n: usize,
    sigma: Vec<usize>,
    tau: Vec<usize>,
    up_to_iso: bool,
    instances: Vec<Inst>,
    pending: Vec<usize>,
    rng: Option<ChaCha8Rng>,
    visitor: &'v mut dyn FnMut(&Solution) -> ControlFlow<()>,
}

impl<'v> Search<'v> {
    #[inline]
    fn sig(&self, x: usize, y: usize) -> usize {
        self.sigma[x * self.n + y]
    }

    #[inline]
    fn tau_cell(&self, x: usize, y: usize) -> usize {
        self.tau[x * self.n + y]
    }

    /// Evaluates one instance: `Some(ok)` when every needed cell is
    /// assigned, `None` otherwise.
    fn try_eval(&self, inst: Inst) -> Option<bool> {
        match inst {
            Inst::Cross { x, y, z } => {
                // τ_{σ_{τ_y(x)}(z)}(σ_x(y)) = σ_{τ_{σ_y(z)}(x)}(τ_z(y))
                let a = self.tau_cell(x, y);
                if a == UNSET {
                    return None;
                }
                let lhs = self.tau_cell(self.sig(x, y), self.sig(a, z));
                if lhs == UNSET {
                    return None;
                }
                let b = self.tau_cell(x, self.sig(y, z));
                if b == UNSET {
                    return None;
                }
                let c = self.tau_cell(y, z);
                if c == UNSET {
                    return None;
                }
                Some(lhs == self.sig(b, c))
            }
            Inst::TauComp { x, y, z } => {
                // τ_x(τ_y(z)) = τ_{τ_x(y)}(τ_{σ_y(x)}(z))
                let inner = self.tau_cell(z, y);
                if inner == UNSET {
                    return None;
                }
                let lhs = self.tau_cell(inner, x);
                if lhs == UNSET {
                    return None;
                }
                let yx = self.tau_cell(y, x);
                if yx == UNSET {
                    return None;
                }
                let r_inner = self.tau_cell(z, self.sig(y, x));
                if r_inner == UNSET {
                    return None;
                }
                let rhs = self.tau_cell(r_inner, yx);
                if rhs == UNSET {
                    return None;
                }
                Some(lhs == rhs)
            }
        }
    }

    fn fill_sigma(&mut self, cell: usize) -> ControlFlow<()> {
        if cell == self.n * self.n {
            return self.start_tau();
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        if let Some(rng) = &mut self.rng {
            order.shuffle(rng);
        }
        for v in order {
            self.sigma[cell] = v;
            self.fill_sigma(cell + 1)?;
        }
        ControlFlow::Continue(())
    }

    /// Candidate domain for the τ cell `(x, y)` from the σ-composition law:
    /// the instance at `(x, y)` holds iff `σ_{σ_x(y)} ∘ σ_t = σ_x ∘ σ_y`
    /// for `t = τ_y(x)`.
    fn sigma_law_domain(&self, x: usize, y: usize) -> Vec<usize> {
        let n = self.n;
        let s = self.sig(x, y);
        (0..n)
            .filter(|&t| (0..n).all(|z| self.sig(s, self.sig(t, z)) == self.sig(x, self.sig(y, z))))
            .collect()
    }

    fn start_tau(&mut self) -> ControlFlow<()> {
        let n = self.n;
        let mut domains = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut d = self.sigma_law_domain(x, y);
                if d.is_empty() {
                    return ControlFlow::Continue(());
                }
                if let Some(rng) = &mut self.rng {
                    d.shuffle(rng);
                }
                domains.push(d);
            }
        }
        self.pending = (0..self.instances.len()).collect();
        self.tau.fill(UNSET);
        self.fill_tau(0, &domains)
    }

    fn fill_tau(&mut self, cell: usize, domains: &[Vec<usize>]) -> ControlFlow<()> {
        let n = self.n;
        if cell == n * n {
            debug_assert!(self.pending.is_empty());
            let s = Solution::new(n, self.sigma.clone(), self.tau.clone())
                .expect("search keeps entries in range");
            debug_assert!(s.check_braid());
            if self.up_to_iso && !is_canonical(&s) {
                return ControlFlow::Continue(());
            }
            return (self.visitor)(&s);
        }
        for &v in &domains[cell] {
            self.tau[cell] = v;
            let mut verified = Vec::new();
            let mut contradiction = false;
            let mut i = 0;
            while i < self.pending.len() {
                match self.try_eval(self.instances[self.pending[i]]) {
                    Some(false) => {
                        contradiction = true;
                        break;
                    }
                    Some(true) => {
                        verified.push(self.pending.swap_remove(i));
                    }
                    None => i += 1,
                }
            }
            if !contradiction {
                self.fill_tau(cell + 1, domains)?;
            }
            self.pending.extend(verified);
            self.tau[cell] = UNSET;
        }
        ControlFlow::Continue(())
    }
}

fn make_instances(n: usize) -> Vec<Inst> {
    let mut out = Vec::with_capacity(2 * n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.push(Inst::Cross { x, y, z });
                out.push(Inst::TauComp { x, y, z });
            }
        }
    }
    out
}

/// Runs the backtracking enumerator, feeding each solution (in lexicographic
/// table order) to `visitor`. With `first_sigma_row` the search is confined
/// to one shard. Exhaustive for `n ≤` [`EXHAUSTIVE_LIMIT`].
pub fn enumerate_with(
    n: usize,
    up_to_iso: bool,
    first_sigma_row: Option<&[usize]>,
    visitor: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "carrier size must be at least 1".into(),
        ));
    }
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::CarrierTooLarge {
            n,
            cap: EXHAUSTIVE_LIMIT,
        });
    }
    let mut search = Search {
        n,
        sigma: vec![0; n * n],
        tau: vec![UNSET; n * n],
        up_to_iso,
        instances: make_instances(n),
        pending: Vec::new(),
        rng: None,
        visitor,
    };
    let start = match first_sigma_row {
        Some(row) => {
            if row.len() != n || row.iter().any(|&v| v >= n) {
                return Err(Error::InvalidParameter("bad shard prefix".into()));
            }
            search.sigma[..n].copy_from_slice(row);
            n
        }
        None => 0,
    };
    let _ = search.fill_sigma(start);
    Ok(())
}

fn check_exhaustive_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "carrier size must be at least 1".into(),
        ));
    }
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::CarrierTooLarge {
            n,
            cap: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

/// All solutions on a carrier of size `n`, optionally one canonical
/// representative per isomorphism class.
pub fn enumerate_solutions(n: usize, up_to_iso: bool) -> Result<Vec<Solution>> {
    check_exhaustive_size(n)?;
    // shard on the first σ row; concatenation in shard order equals the
    // sequential lexicographic order
    let shards = shard_prefixes(n);
    let results: Vec<Vec<Solution>> = shards
        .par_iter()
        .map(|row| {
            let mut out = Vec::new();
            enumerate_with(n, up_to_iso, Some(row), &mut |s| {
                out.push(s.clone());
                ControlFlow::Continue(())
            })
            .expect("validated above");
            out
        })
        .collect();
    Ok(results.concat())
}

/// First `limit` solutions, in enumeration order, satisfying `pred`.
pub fn search(n: usize, pred: SearchPredicate, limit: usize) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    enumerate_with(n, false, None, &mut |s| {
        if pred.evaluate(s) {
            out.push(s.clone());
            if out.len() >= limit {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn shard_prefixes(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut row = vec![0usize; n];
    loop {
        out.push(row.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            row[i] += 1;
            if row[i] < n {
                break;
            }
            row[i] = 0;
        }
    }
}

/// Exhaustive census over all `(σ, τ)` pairs of size `n`, with per-predicate
/// counts taken over the isomorphism-class representatives.
pub fn census(n: usize) -> Result<CensusReport> {
    check_exhaustive_size(n)?;
    let vocab = SearchPredicate::vocabulary(n);
    #[derive(Clone, Default)]
    struct Accum {
        found: u64,
        canonical: u64,
        preds: Vec<u64>,
    }
    let shards = shard_prefixes(n);
    let accum = shards
        .par_iter()
        .map(|row| {
            let mut acc = Accum {
                preds: vec![0; vocab.len()],
                ..Default::default()
            };
            enumerate_with(n, false, Some(row), &mut |s| {
                acc.found += 1;
                if is_canonical(s) {
                    acc.canonical += 1;
                    for (i, p) in vocab.iter().enumerate() {
                        if p.evaluate(s) {
                            acc.preds[i] += 1;
                        }
                    }
                }
                ControlFlow::Continue(())
            })
            .expect("size validated by caller");
            acc
        })
        .reduce(
            || Accum {
                preds: vec![0; vocab.len()],
                ..Default::default()
            },
            |mut a, b| {
                a.found += b.found;
                a.canonical += b.canonical;
                for (x, y) in a.preds.iter_mut().zip(&b.preds) {
                    *x += y;
                }
                a
            },
        );
    Ok(CensusReport {
        n,
        total_pairs_examined: pair_space_size(n),
        solutions_found: accum.found,
        solutions_up_to_iso: accum.canonical,
        predicate_counts: vocab
            .iter()
            .zip(&accum.preds)
            .map(|(p, &c)| (p.to_string(), c))
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

fn relabel(s: &Solution, perm: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = s.n();
    let mut sigma = vec![0; n * n];
    let mut tau = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            sigma[perm[x] * n + perm[y]] = perm[s.sigma(x, y)];
            tau[perm[x] * n + perm[y]] = perm[s.tau(x, y)];
        }
    }
    (sigma, tau)
}

fn flat_tables(s: &Solution) -> (Vec<usize>, Vec<usize>) {
    let n = s.n();
    let sigma = (0..n * n).map(|i| s.sigma(i / n, i % n)).collect();
    let tau = (0..n * n).map(|i| s.tau(i / n, i % n)).collect();
    (sigma, tau)
}

/// The lexicographically least relabeling of the table pair.
pub fn canonical_form(s: &Solution) -> Solution {
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    crate::algebra::permutations(s.n(), &mut |perm| {
        let cand = relabel(s, perm);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
        false
    });
    let (sigma, tau) = best.expect("at least the identity relabeling exists");
    Solution::new(s.n(), sigma, tau).expect("relabeling preserves validity")
}

/// True iff `s` equals its own canonical form.
pub fn is_canonical(s: &Solution) -> bool {
    let own = flat_tables(s);
    !crate::algebra::permutations(s.n(), &mut |perm| relabel(s, perm) < own)
}

/// Size of the relabeling orbit of `s`.
pub fn orbit_size(s: &Solution) -> usize {
    let mut seen = HashSet::new();
    crate::algebra::permutations(s.n(), &mut |perm| {
        seen.insert(relabel(s, perm));
        false
    });
    seen.len()
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Draws `count` distinct solutions, deterministically for a fixed seed.
///
/// Up to the exhaustive limit this runs the pruned search itself with
/// per-cell candidate orders shuffled, stopped at its first leaf: complete,
/// so every attempt yields a solution, and the shuffles provide diversity.
/// Above the limit the doomed-subtree cost of backtracking blows up, so
/// samples are drawn from the commuting-pair family instead — `σ_x = f`,
/// `τ_y = g` with `f ∘ g = g ∘ f` (powers of a common random map) — which
/// always satisfies the braid relation. Non-exhaustive either way; intended
/// for invariant fuzzing.
pub fn sample_solutions(n: usize, count: usize, seed: u64) -> Result<Vec<Solution>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "carrier size must be at least 1".into(),
        ));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let max_attempts = 100 * count as u64 + 100;
    for attempt in 0..max_attempts {
        if out.len() >= count {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let s = if n <= EXHAUSTIVE_LIMIT {
            random_backtrack_solution(n, rng)
        } else {
            random_commuting_solution(n, &mut rng)
        };
        if seen.insert(flat_tables(&s)) {
            out.push(s);
        }
    }
    if out.len() < count {
        return Err(Error::Internal(format!(
            "sampled only {} of {count} requested solutions",
            out.len()
        )));
    }
    Ok(out)
}

fn random_backtrack_solution(n: usize, rng: ChaCha8Rng) -> Solution {
    let mut found: Option<Solution> = None;
    let mut search = Search {
        n,
        sigma: vec![0; n * n],
        tau: vec![UNSET; n * n],
        up_to_iso: false,
        instances: make_instances(n),
        pending: Vec::new(),
        rng: Some(rng),
        visitor: &mut |s| {
            found = Some(s.clone());
            ControlFlow::Break(())
        },
    };
    let _ = search.fill_sigma(0);
    found.expect("complete search over a nonempty space")
}

fn random_commuting_solution(n: usize, rng: &mut ChaCha8Rng) -> Solution {
    use rand::Rng;
    let base: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let power = |e: usize| -> Vec<usize> {
        let mut m: Vec<usize> = (0..n).collect();
        for _ in 0..e {
            m = m.iter().map(|&v| base[v]).collect();
        }
        m
    };
    let f = power(rng.random_range(0..n));
    let g = power(rng.random_range(0..n));
    let mut sigma = vec![0usize; n * n];
    let mut tau = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            sigma[x * n + y] = f[y];
            tau[x * n + y] = g[x];
        }
    }
    let s = Solution::new(n, sigma, tau).expect("entries in range");
    debug_assert!(s.check_braid());
    s
}
