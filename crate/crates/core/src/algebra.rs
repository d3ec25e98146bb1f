//! Finite algebras with binary operations stored as full tables.
//!
//! Tables are kept in printed orientation: `table[x][y]` is the value of the
//! operation at first argument `x` and second argument `y`, regardless of
//! which side the operation is curried on. Only [`BinaryAlgebra::curried_map`]
//! looks at the curry side, returning `y ↦ table[x][y]` for left-curried
//! operations and `z ↦ table[z][x]` for right-curried ones. This keeps file
//! I/O bit-stable with the printed tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Which argument a binary operation is curried on.
///
/// `Left`: the unary family is `γ_x = γ(x, _)`. `Right`: it is `γ_x = γ(_, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurrySide {
    Left,
    Right,
}

/// A self-map of `{0, .., n-1}` given by its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnaryMap {
    image: Vec<usize>,
}

impl UnaryMap {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if let Some(&bad) = image.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidTable(format!(
                "unary map image entry {bad} out of range for carrier size {n}"
            )));
        }
        Ok(UnaryMap { image })
    }

    pub fn identity(n: usize) -> Self {
        UnaryMap {
            image: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        debug_assert!(value < n);
        UnaryMap {
            image: vec![value; n],
        }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_constant(&self) -> bool {
        self.image.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        for &v in &self.image {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &UnaryMap) -> UnaryMap {
        debug_assert_eq!(self.n(), inner.n());
        UnaryMap {
            image: inner.image.iter().map(|&v| self.image[v]).collect(),
        }
    }
}

/// One named binary operation, as an `n × n` table in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    name: String,
    curry: CurrySide,
    n: usize,
    table: Vec<usize>,
}

impl OpTable {
    pub fn new(name: impl Into<String>, curry: CurrySide, n: usize, table: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if table.len() != n * n {
            return Err(Error::InvalidTable(format!(
                "op `{name}`: table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        for (i, &v) in table.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidTable(format!(
                    "op `{name}`: entry {v} at row {}, column {} out of range for carrier size {n}",
                    i / n,
                    i % n
                )));
            }
        }
        Ok(OpTable {
            name,
            curry,
            n,
            table,
        })
    }

    pub fn from_rows(name: impl Into<String>, curry: CurrySide, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        let name = name.into();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "op `{name}`: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        Self::new(name, curry, n, rows.concat())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn curry(&self) -> CurrySide {
        self.curry
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value at first argument `x`, second argument `y`.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }
}

/// A finite algebra `(X, Γ)`: a carrier `{0, .., n-1}` and a list of binary
/// operations. Immutable after construction; all operations on it are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryAlgebra {
    n: usize,
    ops: Vec<OpTable>,
}

impl BinaryAlgebra {
    pub fn new(n: usize, ops: Vec<OpTable>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "carrier size must be at least 1".into(),
            ));
        }
        for op in &ops {
            if op.n() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    got: op.n(),
                });
            }
        }
        for i in 0..ops.len() {
            for j in 0..i {
                if ops[i].name() == ops[j].name() {
                    return Err(Error::InvalidTable(format!(
                        "duplicate op name `{}`",
                        ops[i].name()
                    )));
                }
            }
        }
        Ok(BinaryAlgebra { n, ops })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn op(&self, op_index: usize) -> &OpTable {
        &self.ops[op_index]
    }

    /// Evaluates op `op_index` at `(x, y)`. Out-of-range indices are a caller
    /// bug and panic.
    #[inline]
    pub fn apply(&self, op_index: usize, x: usize, y: usize) -> usize {
        self.ops[op_index].get(x, y)
    }

    /// The curried unary map of op `op_index` at `x`: for a left-curried op
    /// `y ↦ table[x][y]`, for a right-curried op `z ↦ table[z][x]`.
    pub fn curried_map(&self, op_index: usize, x: usize) -> UnaryMap {
        let op = &self.ops[op_index];
        let image = match op.curry() {
            CurrySide::Left => op.row(x).to_vec(),
            CurrySide::Right => (0..self.n).map(|z| op.get(z, x)).collect(),
        };
        UnaryMap { image }
    }

    /// Checks compatibility of `p` with every operation, in both arguments.
    pub fn is_congruence(&self, p: &Partition) -> Result<bool> {
        self.check_congruence(p).map(|r| r.is_ok())
    }

    /// Like [`is_congruence`](Self::is_congruence) but reports the offending
    /// cells on failure.
    fn check_congruence(&self, p: &Partition) -> Result<std::result::Result<(), Error>> {
        if p.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: p.n(),
            });
        }
        let k = p.class_count();
        for op in &self.ops {
            // the class of γ(x,y) must be a function of (class(x), class(y))
            let mut quot = vec![usize::MAX; k * k];
            for x in 0..self.n {
                for y in 0..self.n {
                    let cell = p.class_of(x) * k + p.class_of(y);
                    let v = p.class_of(op.get(x, y));
                    if quot[cell] == usize::MAX {
                        quot[cell] = v;
                    } else if quot[cell] != v {
                        return Ok(Err(Error::NotACongruence {
                            op: op.name().to_string(),
                            left_class: p.class_of(x),
                            right_class: p.class_of(y),
                            first: quot[cell],
                            second: v,
                        }));
                    }
                }
            }
        }
        Ok(Ok(()))
    }

    /// The quotient algebra on the classes of `p`. The congruence property is
    /// checked, not assumed; well-definedness of every quotient cell is
    /// verified in the same pass.
    pub fn quotient(&self, p: &Partition) -> Result<BinaryAlgebra> {
        if let Err(e) = self.check_congruence(p)? {
            return Err(e);
        }
        let k = p.class_count();
        let ops = self
            .ops
            .iter()
            .map(|op| {
                let mut table = vec![usize::MAX; k * k];
                for x in 0..self.n {
                    for y in 0..self.n {
                        table[p.class_of(x) * k + p.class_of(y)] = p.class_of(op.get(x, y));
                    }
                }
                debug_assert!(table.iter().all(|&v| v < k));
                OpTable {
                    name: op.name().to_string(),
                    curry: op.curry(),
                    n: k,
                    table,
                }
            })
            .collect();
        Ok(BinaryAlgebra { n: k, ops })
    }

    /// All congruences of `self` that refine `p`, found by filtering every
    /// set partition of the carrier. A brute-force oracle: refuses carriers
    /// larger than `n_cap` (Bell numbers explode).
    pub fn all_congruences_below(&self, p: &Partition, n_cap: usize) -> Result<Vec<Partition>> {
        if self.n > n_cap {
            return Err(Error::CarrierTooLarge {
                n: self.n,
                cap: n_cap,
            });
        }
        if p.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: p.n(),
            });
        }
        let mut out = Vec::new();
        for cand in Partition::all_partitions(self.n) {
            if cand.refines(p) && self.is_congruence(&cand)? {
                out.push(cand);
            }
        }
        Ok(out)
    }

    /// True iff some relabeling of the carrier maps every op table of `self`
    /// onto the corresponding table of `other`. Requires matching op counts,
    /// names and curry sides.
    pub fn is_isomorphic_to(&self, other: &BinaryAlgebra) -> bool {
        if self.n != other.n || self.ops.len() != other.ops.len() {
            return false;
        }
        for (a, b) in self.ops.iter().zip(&other.ops) {
            if a.curry() != b.curry() {
                return false;
            }
        }
        permutations(self.n, &mut |perm| {
            for (a, b) in self.ops.iter().zip(&other.ops) {
                for x in 0..self.n {
                    for y in 0..self.n {
                        if perm[a.get(x, y)] != b.get(perm[x], perm[y]) {
                            return false;
                        }
                    }
                }
            }
            true
        })
    }
}

/// Calls `f` on each permutation of `0..n` (as an image array) until `f`
/// returns true; returns whether any call did. Heap's algorithm.
pub(crate) fn permutations(n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let mut perm: Vec<usize> = (0..n).collect();
    if f(&perm) {
        return true;
    }
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if f(&perm) {
                return true;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::samples;

    fn retractable5_algebra() -> BinaryAlgebra {
        samples::retractable5().as_algebra()
    }

    #[test]
    fn apply_reads_printed_tables() {
        let a = retractable5_algebra();
        // σ(b, c) = d
        assert_eq!(a.apply(0, 1, 2), 3);
        // τ(x, y) = x
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(a.apply(1, x, y), x);
            }
        }
    }

    #[test]
    fn apply_projection_returns_second_argument() {
        let a = samples::projection(4).unwrap().as_algebra();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(a.apply(0, x, y), y);
            }
        }
    }

    #[test]
    fn apply_irretractable_clamps() {
        // σ(2, 0) = min(3, 2+1) = 3
        let a = samples::irretractable(3).unwrap().as_algebra();
        assert_eq!(a.apply(0, 2, 0), 3);
        assert_eq!(a.apply(0, 3, 0), 3);
    }

    #[test]
    fn curried_map_respects_curry_side() {
        let a = retractable5_algebra();
        // every τ column is the identity
        for x in 0..5 {
            assert!(a.curried_map(1, x).is_identity());
        }
        // σ_a is the row (a, e, d, c, a)
        assert_eq!(a.curried_map(0, 0).image(), &[0, 4, 3, 2, 0]);

        let p = samples::projection(3).unwrap().as_algebra();
        for x in 0..3 {
            assert!(p.curried_map(0, x).is_identity());
        }

        // irretractable family, τ at 0: sends n ↦ 2 and everything else ↦ 1
        let b = samples::irretractable(3).unwrap().as_algebra();
        assert_eq!(b.curried_map(1, 0).image(), &[1, 1, 1, 2]);
    }

    #[test]
    fn is_congruence_examples() {
        let a = retractable5_algebra();
        let sim = Partition::from_classes(5, &[vec![0, 2, 4], vec![1, 3]]).unwrap();
        assert!(!a.is_congruence(&sim).unwrap());
        assert!(a.is_congruence(&Partition::identity(5)).unwrap());
        assert!(a.is_congruence(&Partition::full(5)).unwrap());
    }

    #[test]
    fn is_congruence_size_mismatch() {
        let a = retractable5_algebra();
        assert!(matches!(
            a.is_congruence(&Partition::identity(4)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn quotient_by_max_congruence_has_equal_sigma_rows() {
        let a = retractable5_algebra();
        let approx = Partition::from_classes(5, &[vec![0, 4], vec![1], vec![2], vec![3]]).unwrap();
        let q = a.quotient(&approx).unwrap();
        assert_eq!(q.n(), 4);
        let first = q.op(0).row(0).to_vec();
        for x in 1..4 {
            assert_eq!(q.op(0).row(x), &first[..]);
        }
    }

    #[test]
    fn quotient_rejects_non_congruence() {
        let a = retractable5_algebra();
        let sim = Partition::from_classes(5, &[vec![0, 2, 4], vec![1, 3]]).unwrap();
        assert!(matches!(
            a.quotient(&sim),
            Err(Error::NotACongruence { .. })
        ));
    }

    #[test]
    fn quotient_by_identity_is_isomorphic() {
        let a = retractable5_algebra();
        let q = a.quotient(&Partition::identity(5)).unwrap();
        assert!(a.is_isomorphic_to(&q));
    }

    #[test]
    fn quotient_by_full_is_singleton() {
        let a = retractable5_algebra();
        assert_eq!(a.quotient(&Partition::full(5)).unwrap().n(), 1);
    }

    #[test]
    fn all_congruences_below_identity_is_identity_only() {
        let a = retractable5_algebra();
        let list = a
            .all_congruences_below(&Partition::identity(5), 8)
            .unwrap();
        assert_eq!(list, vec![Partition::identity(5)]);
    }

    #[test]
    fn all_congruences_below_sim_has_expected_maximum() {
        let a = retractable5_algebra();
        let sim = Partition::from_classes(5, &[vec![0, 2, 4], vec![1, 3]]).unwrap();
        let list = a.all_congruences_below(&sim, 8).unwrap();
        let max = list
            .iter()
            .fold(Partition::identity(5), |acc, c| acc.join(c));
        assert_eq!(
            max,
            Partition::from_classes(5, &[vec![0, 4], vec![1], vec![2], vec![3]]).unwrap()
        );
        // the join-maximum is itself in the list (closure under join)
        assert!(list.contains(&max));
    }

    #[test]
    fn all_congruences_below_respects_cap() {
        let a = retractable5_algebra();
        assert!(matches!(
            a.all_congruences_below(&Partition::full(5), 4),
            Err(Error::CarrierTooLarge { .. })
        ));
    }

    #[test]
    fn isomorphism_to_self_and_relabelings() {
        let a = retractable5_algebra();
        assert!(a.is_isomorphic_to(&a));

        // relabel by the 5-cycle 0→1→2→3→4→0
        let perm = [1usize, 2, 3, 4, 0];
        let relabeled: Vec<OpTable> = a
            .ops()
            .iter()
            .map(|op| {
                let mut table = vec![0usize; 25];
                for x in 0..5 {
                    for y in 0..5 {
                        table[perm[x] * 5 + perm[y]] = perm[op.get(x, y)];
                    }
                }
                OpTable::new(op.name(), op.curry(), 5, table).unwrap()
            })
            .collect();
        let b = BinaryAlgebra::new(5, relabeled).unwrap();
        assert!(a.is_isomorphic_to(&b));

        let proj = samples::projection(5).unwrap().as_algebra();
        assert!(!a.is_isomorphic_to(&proj));
    }

    #[test]
    fn singleton_algebra_is_supported() {
        let op = OpTable::new("m", CurrySide::Left, 1, vec![0]).unwrap();
        let a = BinaryAlgebra::new(1, vec![op]).unwrap();
        assert!(a.is_congruence(&Partition::identity(1)).unwrap());
        assert_eq!(a.quotient(&Partition::full(1)).unwrap().n(), 1);
    }
}
