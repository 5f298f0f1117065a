//! Finite sets and bijections: the skeletal model in which a path between
//! two types is a bijection between them.

use std::fmt;

use itertools::Itertools;

use crate::OracleError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSet {
    pub size: usize,
    pub label: String,
}

impl FinSet {
    pub fn new(size: usize, label: impl Into<String>) -> FinSet {
        FinSet {
            size,
            label: label.into(),
        }
    }

    /// The standard set `{0, .., size - 1}`, labelled by its size.
    pub fn of_size(size: usize) -> FinSet {
        FinSet::new(size, size.to_string())
    }

    pub fn two() -> FinSet {
        FinSet::new(2, "Two")
    }
}

/// A bijection `domain -> codomain`; `mapping[x]` is the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinBij {
    pub mapping: Vec<usize>,
}

impl FinBij {
    /// Validates that `mapping` is a bijection of `{0, .., n - 1}`.
    pub fn new(mapping: Vec<usize>) -> Option<FinBij> {
        let mut seen = vec![false; mapping.len()];
        for &y in &mapping {
            if y >= mapping.len() || std::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        Some(FinBij { mapping })
    }

    pub fn identity(n: usize) -> FinBij {
        FinBij {
            mapping: (0..n).collect(),
        }
    }

    /// The transposition of the first two elements.
    pub fn swap() -> FinBij {
        FinBij { mapping: vec![1, 0] }
    }

    pub fn size(&self) -> usize {
        self.mapping.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.mapping[x]
    }

    /// Diagrammatic composition: `self` first, then `then`.
    pub fn then(&self, then: &FinBij) -> FinBij {
        FinBij {
            mapping: self.mapping.iter().map(|&x| then.mapping[x]).collect(),
        }
    }

    pub fn inverse(&self) -> FinBij {
        let mut inv = vec![0; self.mapping.len()];
        for (x, &y) in self.mapping.iter().enumerate() {
            inv[y] = x;
        }
        FinBij { mapping: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(x, &y)| x == y)
    }
}

impl fmt::Display for FinBij {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.mapping.iter().join(" "))
    }
}

/// All bijections `a -> b` in lexicographic order of their tables. Empty
/// when the sizes differ.
pub fn enumerate_bijections(a: &FinSet, b: &FinSet, bound: usize) -> Result<Vec<FinBij>, OracleError> {
    for s in [a, b] {
        if s.size > bound {
            return Err(OracleError::SizeOverBound {
                label: s.label.clone(),
                size: s.size,
                bound,
            });
        }
    }
    if a.size != b.size {
        return Ok(Vec::new());
    }
    Ok((0..a.size)
        .permutations(a.size)
        .map(|mapping| FinBij { mapping })
        .collect())
}

/// Automorphisms of the standard set of size `n`.
pub fn automorphisms(n: usize, bound: usize) -> Result<Vec<FinBij>, OracleError> {
    let s = FinSet::of_size(n);
    enumerate_bijections(&s, &s, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(FinBij::new(vec![0, 0]).is_none());
        assert!(FinBij::new(vec![2, 0]).is_none());
        assert!(FinBij::new(vec![]).is_some());
    }

    #[test]
    fn composition_is_diagrammatic() {
        let p = FinBij::new(vec![1, 2, 0]).unwrap();
        let q = FinBij::new(vec![0, 2, 1]).unwrap();
        // x -> p -> q: 0 -> 1 -> 2
        assert_eq!(p.then(&q).apply(0), 2);
    }

    #[test]
    fn sizes_over_the_bound_are_refused() {
        let big = FinSet::of_size(5);
        assert!(enumerate_bijections(&big, &big, 4).is_err());
    }
}
