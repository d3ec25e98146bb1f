//! Partitions of a finite carrier `{0, .., n-1}`, stored as class-index arrays.
//!
//! The labeling is canonical: class indices are assigned in order of first
//! occurrence, so `class_of[0] == 0` and each new class gets the next free
//! index. Two `Partition` values compare equal exactly when they encode the
//! same equivalence relation, and `classes()` comes out ordered by least
//! element for free.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An equivalence relation on `{0, .., n-1}` as a canonical class-index array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    class_of: Vec<usize>,
    class_count: usize,
}

impl Partition {
    /// The identity (diagonal) partition: every element its own class.
    pub fn identity(n: usize) -> Self {
        Partition {
            class_of: (0..n).collect(),
            class_count: n,
        }
    }

    /// The full (one-class) partition.
    pub fn full(n: usize) -> Self {
        Partition {
            class_of: vec![0; n],
            class_count: if n == 0 { 0 } else { 1 },
        }
    }

    /// Builds a partition from an arbitrary class-index array, relabeling
    /// classes in first-occurrence order.
    pub fn from_class_of(raw: &[usize]) -> Self {
        let mut relabel: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(raw.len());
        for &c in raw {
            let next = relabel.len();
            class_of.push(*relabel.entry(c).or_insert(next));
        }
        Partition {
            class_count: relabel.len(),
            class_of,
        }
    }

    /// Builds a partition from explicit classes. The classes must be disjoint
    /// and cover `{0, .., n-1}`.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self, Error> {
        let mut raw = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            for &x in class {
                if x >= n {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} out of range for carrier size {n}"
                    )));
                }
                if raw[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} appears in more than one class"
                    )));
                }
                raw[x] = i;
            }
        }
        if let Some(x) = raw.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "element {x} is missing from the classes"
            )));
        }
        Ok(Self::from_class_of(&raw))
    }

    /// Groups elements by an arbitrary key; elements with equal keys share a class.
    pub fn group_by_key<K: Eq + std::hash::Hash>(n: usize, mut key: impl FnMut(usize) -> K) -> Self {
        let mut seen: std::collections::HashMap<K, usize> = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(n);
        for x in 0..n {
            let next = seen.len();
            let label = *seen.entry(key(x)).or_insert(next);
            class_of.push(label);
        }
        let class_count = seen.len();
        Partition {
            class_of,
            class_count,
        }
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Class index of element `x`.
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_indices(&self) -> &[usize] {
        &self.class_of
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn is_identity(&self) -> bool {
        self.class_count == self.n()
    }

    pub fn is_full(&self) -> bool {
        self.class_count <= 1
    }

    /// The classes as element lists. Canonical labeling orders them by least
    /// element, and elements within a class are ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// True iff every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        // self refines coarser iff the coarser class is constant on each self class
        let mut rep = vec![usize::MAX; self.class_count];
        for x in 0..self.n() {
            let c = self.class_of[x];
            let target = coarser.class_of[x];
            if rep[c] == usize::MAX {
                rep[c] = target;
            } else if rep[c] != target {
                return false;
            }
        }
        true
    }

    /// Join (smallest common coarsening) via union-find over classes.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.n(), other.n(), "join requires equal carriers");
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let ra = find(parent, a);
            let rb = find(parent, b);
            if ra != rb {
                parent[rb.max(ra)] = rb.min(ra);
            }
        };
        let mut first_in_class = vec![usize::MAX; self.class_count.max(other.class_count)];
        for x in 0..n {
            let c = self.class_of[x];
            if first_in_class[c] == usize::MAX {
                first_in_class[c] = x;
            } else {
                union(&mut parent, first_in_class[c], x);
            }
        }
        let mut first_in_class2 = vec![usize::MAX; other.class_count];
        for x in 0..n {
            let c = other.class_of[x];
            if first_in_class2[c] == usize::MAX {
                first_in_class2[c] = x;
            } else {
                union(&mut parent, first_in_class2[c], x);
            }
        }
        let raw: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        Partition::from_class_of(&raw)
    }

    /// Enumerates every partition of `{0, .., n-1}` via restricted-growth
    /// strings, in lexicographic RGS order (identity last, full first).
    pub fn all_partitions(n: usize) -> AllPartitions {
        AllPartitions {
            rgs: if n == 0 { None } else { Some(vec![0; n]) },
        }
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for class in self.classes() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{{")?;
            for (i, x) in class.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Iterator over all restricted-growth strings of length `n`.
pub struct AllPartitions {
    rgs: Option<Vec<usize>>,
}

impl Iterator for AllPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let rgs = self.rgs.as_mut()?;
        let out = Partition::from_class_of(rgs);
        // advance: rightmost position that can still grow
        let n = rgs.len();
        let mut i = n;
        loop {
            if i == 1 {
                self.rgs = None;
                break;
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
        Some(out)
    }
}
