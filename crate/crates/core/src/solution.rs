//! Set-theoretic Yang-Baxter solution candidates `(X, σ, τ)` on a finite
//! carrier, with `r(x, y) = (σ_x(y), τ_y(x))`.
//!
//! Table orientation copies the usual printed form: `sigma[x][y] = σ_x(y)`
//! and `tau[x][y] = τ_y(x)`, i.e. rows are indexed by the first argument of
//! the binary map and `τ_y` is the *column* at `y`. Transcribing a printed
//! table row by row is therefore error-proof.

use serde::{Deserialize, Serialize};

use crate::algebra::{BinaryAlgebra, CurrySide, OpTable, UnaryMap};
use crate::error::{Error, Result};

/// A pair of `n × n` tables `(σ, τ)` on a common carrier.
///
/// Nothing about the braid relation is assumed at construction; call
/// [`check_braid`](Solution::check_braid) or
/// [`check_braid_identities`](Solution::check_braid_identities) to verify.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    n: usize,
    sigma: Vec<usize>,
    tau: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// Classification flags of a solution candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub left_nondegenerate: bool,
    pub right_nondegenerate: bool,
    pub bijective: bool,
    pub involutive: bool,
    pub degenerate: bool,
}

/// Outcome of the three componentwise braid identities.
///
/// `sigma_law`: σ_x σ_y = σ_{σ_x(y)} σ_{τ_y(x)};
/// `cross_law`: τ_{σ_{τ_y(x)}(z)}(σ_x(y)) = σ_{τ_{σ_y(z)}(x)}(τ_z(y));
/// `tau_law`:   τ_x τ_y = τ_{τ_x(y)} τ_{σ_y(x)}.
/// Their conjunction is equivalent to the braid relation on triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityChecks {
    pub sigma_law: bool,
    pub cross_law: bool,
    pub tau_law: bool,
}

impl IdentityChecks {
    pub fn all(&self) -> bool {
        self.sigma_law && self.cross_law && self.tau_law
    }
}

impl Solution {
    /// Builds a solution candidate from flat row-major tables.
    pub fn new(n: usize, sigma: Vec<usize>, tau: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "carrier size must be at least 1".into(),
            ));
        }
        for (name, t) in [("sigma", &sigma), ("tau", &tau)] {
            if t.len() != n * n {
                return Err(Error::InvalidTable(format!(
                    "{name}: table has {} entries, expected {}",
                    t.len(),
                    n * n
                )));
            }
            for (i, &v) in t.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidTable(format!(
                        "{name}: entry {v} at row {}, column {} out of range for carrier size {n}",
                        i / n,
                        i % n
                    )));
                }
            }
        }
        Ok(Solution {
            n,
            sigma,
            tau,
            labels: None,
        })
    }

    pub fn from_rows(sigma_rows: &[Vec<usize>], tau_rows: &[Vec<usize>]) -> Result<Self> {
        let n = sigma_rows.len();
        if tau_rows.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: tau_rows.len(),
            });
        }
        for (name, rows) in [("sigma", sigma_rows), ("tau", tau_rows)] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::InvalidTable(format!(
                        "{name}: row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
            }
        }
        Self::new(n, sigma_rows.concat(), tau_rows.concat())
    }

    /// Attaches display labels (must be `n` distinct strings).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "expected {} labels, got {}",
                self.n,
                labels.len()
            )));
        }
        for i in 0..labels.len() {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate label `{}`",
                        labels[i]
                    )));
                }
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `σ_x(y)`.
    #[inline]
    pub fn sigma(&self, x: usize, y: usize) -> usize {
        self.sigma[x * self.n + y]
    }

    /// `τ_y(x)`, stored at row `x`, column `y`.
    #[inline]
    pub fn tau(&self, x: usize, y: usize) -> usize {
        self.tau[x * self.n + y]
    }

    pub fn sigma_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| self.sigma[x * self.n..(x + 1) * self.n].to_vec())
            .collect()
    }

    pub fn tau_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| self.tau[x * self.n..(x + 1) * self.n].to_vec())
            .collect()
    }

    /// `r(x, y) = (σ_x(y), τ_y(x))`.
    #[inline]
    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma(x, y), self.tau(x, y))
    }

    /// Checks the braid relation by literal composition of `r` on every
    /// triple: `(id×r)(r×id)(id×r) = (r×id)(id×r)(r×id)`.
    pub fn check_braid(&self) -> bool {
        let id_r = |(x, y, z): (usize, usize, usize)| {
            let (u, v) = self.r(y, z);
            (x, u, v)
        };
        let r_id = |(x, y, z): (usize, usize, usize)| {
            let (u, v) = self.r(x, y);
            (u, v, z)
        };
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    let t = (x, y, z);
                    if id_r(r_id(id_r(t))) != r_id(id_r(r_id(t))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks the three componentwise braid identities over all triples,
    /// reporting each identity separately.
    pub fn check_braid_identities(&self) -> IdentityChecks {
        let mut out = IdentityChecks {
            sigma_law: true,
            cross_law: true,
            tau_law: true,
        };
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    if out.sigma_law {
                        let lhs = self.sigma(x, self.sigma(y, z));
                        let rhs = self.sigma(self.sigma(x, y), self.sigma(self.tau(x, y), z));
                        if lhs != rhs {
                            out.sigma_law = false;
                        }
                    }
                    if out.cross_law {
                        let lhs = self.tau(self.sigma(x, y), self.sigma(self.tau(x, y), z));
                        let rhs = self.sigma(self.tau(x, self.sigma(y, z)), self.tau(y, z));
                        if lhs != rhs {
                            out.cross_law = false;
                        }
                    }
                    if out.tau_law {
                        let lhs = self.tau(self.tau(z, y), x);
                        let rhs = self.tau(self.tau(z, self.sigma(y, x)), self.tau(y, x));
                        if lhs != rhs {
                            out.tau_law = false;
                        }
                    }
                    if !out.sigma_law && !out.cross_law && !out.tau_law {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Classification flags: non-degeneracy of the curried families,
    /// bijectivity and involutivity of `r`.
    pub fn classify(&self) -> Classification {
        let n = self.n;
        let left_nondegenerate = (0..n).all(|x| {
            let mut seen = vec![false; n];
            (0..n).all(|y| {
                let v = self.sigma(x, y);
                !std::mem::replace(&mut seen[v], true)
            })
        });
        let right_nondegenerate = (0..n).all(|y| {
            let mut seen = vec![false; n];
            (0..n).all(|x| {
                let v = self.tau(x, y);
                !std::mem::replace(&mut seen[v], true)
            })
        });
        let mut seen = vec![false; n * n];
        let bijective = (0..n * n).all(|i| {
            let (u, v) = self.r(i / n, i % n);
            !std::mem::replace(&mut seen[u * n + v], true)
        });
        let involutive = (0..n * n).all(|i| {
            let (u, v) = self.r(i / n, i % n);
            self.r(u, v) == (i / n, i % n)
        });
        Classification {
            left_nondegenerate,
            right_nondegenerate,
            bijective,
            involutive,
            degenerate: !(left_nondegenerate && right_nondegenerate),
        }
    }

    /// Views the pair as an algebra with two binary operations: `sigma`
    /// curried on the left, `tau` curried on the right. The curried families
    /// of the result are exactly `{σ_x}` and `{τ_y}`.
    pub fn as_algebra(&self) -> BinaryAlgebra {
        let sigma = OpTable::new("sigma", CurrySide::Left, self.n, self.sigma.clone())
            .expect("validated at construction");
        let tau = OpTable::new("tau", CurrySide::Right, self.n, self.tau.clone())
            .expect("validated at construction");
        BinaryAlgebra::new(self.n, vec![sigma, tau]).expect("validated at construction")
    }

    /// The curried map `σ_x`.
    pub fn sigma_map(&self, x: usize) -> UnaryMap {
        UnaryMap::new(self.sigma[x * self.n..(x + 1) * self.n].to_vec()).unwrap()
    }

    /// The curried map `τ_y` (a column of the stored table).
    pub fn tau_map(&self, y: usize) -> UnaryMap {
        UnaryMap::new((0..self.n).map(|x| self.tau(x, y)).collect()).unwrap()
    }
}

/// Built-in families used as fixtures and stress inputs throughout the crate.
pub mod samples {
    use super::*;

    /// A 5-element degenerate solution whose coinciding-maps equivalence is
    /// *not* a congruence; its multipermutation level is 2. σ rows repeat in
    /// the pattern a/b/a/b/a and τ is projection onto the first argument.
    pub fn retractable5() -> Solution {
        let sigma = vec![
            vec![0, 4, 3, 2, 0],
            vec![0, 0, 3, 2, 0],
            vec![0, 4, 3, 2, 0],
            vec![0, 0, 3, 2, 0],
            vec![0, 4, 3, 2, 0],
        ];
        let tau: Vec<Vec<usize>> = (0..5).map(|x| vec![x; 5]).collect();
        Solution::from_rows(&sigma, &tau)
            .unwrap()
            .with_labels(["a", "b", "c", "d", "e"].map(String::from).to_vec())
            .unwrap()
    }

    /// The irretractable family on carrier `{0, .., n}` (size `n + 1`),
    /// defined for `n > 2`:
    /// `σ_x(y) = min(n, x+1)` if `y = 0`, else `1`;
    /// `τ_y(x) = 2` if `x = n` and `y = 0`, else `1`.
    ///
    /// Exactly the pair `{n-1, n}` has coinciding curried maps, yet the
    /// maximal congruence below that relation is the identity, so the
    /// retract tower stabilizes at the input.
    pub fn irretractable(n: usize) -> Result<Solution> {
        if n <= 2 {
            return Err(Error::InvalidParameter(format!(
                "irretractable family needs n > 2, got {n}"
            )));
        }
        let size = n + 1;
        let mut sigma = vec![1usize; size * size];
        let mut tau = vec![1usize; size * size];
        for x in 0..size {
            sigma[x * size] = (x + 1).min(n);
        }
        tau[n * size] = 2;
        Solution::new(size, sigma, tau)
    }

    /// A finite descending chain `{0 < 1 < … < N}` plus a twin `t` of `N-1`,
    /// encoded at index `N + 1` (carrier size `N + 2`), for `N ≥ 3`:
    /// `σ ≡ 0`; `τ_y(x) = t` if `x = N` and `y = 0`, `N-2` if `x = t`,
    /// `max(0, x-1)` otherwise.
    ///
    /// Refinement below the coinciding-maps relation needs a number of rounds
    /// linear in `N` before it stabilizes (at `{N-1, t}` plus singletons).
    pub fn chain_with_twin(big_n: usize) -> Result<Solution> {
        if big_n < 3 {
            return Err(Error::InvalidParameter(format!(
                "chain_with_twin needs N ≥ 3, got {big_n}"
            )));
        }
        let twin = big_n + 1;
        let size = big_n + 2;
        let sigma = vec![0usize; size * size];
        let mut tau = vec![0usize; size * size];
        for x in 0..size {
            for y in 0..size {
                tau[x * size + y] = if x == big_n && y == 0 {
                    twin
                } else if x == twin {
                    big_n - 2
                } else {
                    x.saturating_sub(1)
                };
            }
        }
        let labels = (0..=big_n)
            .map(|i| i.to_string())
            .chain(std::iter::once("t".to_string()))
            .collect();
        Solution::new(size, sigma, tau)?.with_labels(labels)
    }

    /// The projection solution: `σ_x(y) = y`, `τ_y(x) = x`, so `r` is the
    /// swap `(x, y) ↦ (y, x)`.
    pub fn projection(n: usize) -> Result<Solution> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "carrier size must be at least 1".into(),
            ));
        }
        let mut sigma = vec![0usize; n * n];
        let mut tau = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                sigma[x * n + y] = y;
                tau[x * n + y] = x;
            }
        }
        Solution::new(n, sigma, tau)
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn retractable5_tables_as_printed() {
        let s = retractable5();
        assert_eq!(s.sigma_rows()[0], vec![0, 4, 3, 2, 0]);
        // τ_y(x) = x for all y: every row of the stored table is constant x
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(s.tau(x, y), x);
            }
        }
        assert!(s.check_braid());
        // σ(b, c) = d
        assert_eq!(s.sigma(1, 2), 3);
    }

    #[test]
    fn retractable5_tau_maps_are_identity() {
        let s = retractable5();
        for y in 0..5 {
            assert!(s.tau_map(y).is_identity());
        }
    }

    #[test]
    fn swap_solution_satisfies_braid_and_identities() {
        for n in 1..=5 {
            let s = projection(n).unwrap();
            assert!(s.check_braid());
            assert!(s.check_braid_identities().all());
        }
    }

    #[test]
    fn projection_classification() {
        let s = projection(3).unwrap();
        let c = s.classify();
        assert!(c.left_nondegenerate && c.right_nondegenerate);
        assert!(c.bijective && c.involutive);
        assert!(!c.degenerate);
    }

    #[test]
    fn retractable5_is_degenerate() {
        // σ_b = (a, a, d, c, a) is not a bijection
        let c = retractable5().classify();
        assert!(!c.left_nondegenerate);
        assert!(c.degenerate);
    }

    #[test]
    fn irretractable_family_tables() {
        let s = irretractable(3).unwrap();
        assert_eq!(s.n(), 4);
        // τ_0(3) = 2, τ_0(2) = 1
        assert_eq!(s.tau(3, 0), 2);
        assert_eq!(s.tau(2, 0), 1);
        // σ_3(0) clamps to 3
        assert_eq!(s.sigma(3, 0), 3);
        assert!(s.classify().degenerate);
        assert!(irretractable(2).is_err());
    }

    #[test]
    fn irretractable_family_is_a_solution() {
        for n in 3..=6 {
            let s = irretractable(n).unwrap();
            assert!(s.check_braid(), "braid fails for n={n}");
            let ids = s.check_braid_identities();
            assert!(ids.all(), "identities fail for n={n}: {ids:?}");
        }
    }

    #[test]
    fn chain_with_twin_basics() {
        assert!(chain_with_twin(2).is_err());
        let s = chain_with_twin(5).unwrap();
        assert_eq!(s.n(), 7);
        // τ_y(0) = 0 for all y
        for y in 0..7 {
            assert_eq!(s.tau(0, y), 0);
        }
        // τ_0(N) = t, τ_y(t) = N - 2
        assert_eq!(s.tau(5, 0), 6);
        assert_eq!(s.tau(6, 3), 3);
        for n in 3..=8 {
            assert!(chain_with_twin(n).unwrap().check_braid(), "N={n}");
        }
    }

    #[test]
    fn as_algebra_round_trips_curried_maps() {
        for s in [retractable5(), irretractable(4).unwrap(), projection(3).unwrap()] {
            let a = s.as_algebra();
            for x in 0..s.n() {
                assert_eq!(a.curried_map(0, x), s.sigma_map(x));
                assert_eq!(a.curried_map(1, x), s.tau_map(x));
            }
        }
    }

    #[test]
    fn braid_agrees_with_identities_on_all_two_element_tables() {
        // exhaustive over all 256 table pairs on a 2-element carrier
        for code in 0..256u32 {
            let bits: Vec<usize> = (0..8).map(|i| ((code >> i) & 1) as usize).collect();
            let s = Solution::new(2, bits[..4].to_vec(), bits[4..].to_vec()).unwrap();
            assert_eq!(
                s.check_braid(),
                s.check_braid_identities().all(),
                "disagreement at code {code}"
            );
        }
    }

    #[test]
    fn constant_tables_decided_consistently() {
        // σ(x,y) = x, τ(x,y) = x on a 2-element carrier
        let s = Solution::new(2, vec![0, 0, 1, 1], vec![0, 0, 1, 1]).unwrap();
        assert_eq!(s.check_braid(), s.check_braid_identities().all());
    }

    #[test]
    fn invalid_tables_are_rejected_with_position() {
        let err = Solution::new(2, vec![0, 2, 1, 1], vec![0, 0, 1, 1]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sigma"), "{msg}");
        assert!(msg.contains("row 0"), "{msg}");
        assert!(msg.contains("column 1"), "{msg}");
    }

    #[test]
    fn labels_must_be_distinct() {
        let s = projection(2).unwrap();
        assert!(s
            .clone()
            .with_labels(vec!["a".into(), "a".into()])
            .is_err());
        assert!(s.with_labels(vec!["a".into(), "b".into()]).is_ok());
    }
}
