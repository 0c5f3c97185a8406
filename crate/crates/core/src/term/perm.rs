//! Finitely supported bijections of the positive naturals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("index 0 is not a positive natural")]
    ZeroIndex,
    #[error("source {0} is listed twice")]
    DuplicateSource(u32),
    #[error("target {0} is hit twice")]
    DuplicateTarget(u32),
    #[error("mapping is not a bijection: {0} is moved but nothing is sent to it")]
    NotBijective(u32),
}

/// A bijection of `{1, 2, ...}` that moves only finitely many points.
///
/// Stored canonically: fixed points are dropped and pairs are sorted by
/// source, so two equal permutations compare equal structurally.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    pairs: Vec<(u32, u32)>,
}

impl Perm {
    pub fn identity() -> Self {
        Perm { pairs: Vec::new() }
    }

    /// Builds a permutation from `(source, target)` pairs. Identity pairs are
    /// accepted and dropped; the listed moved points must map onto themselves.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, PermError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut map = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (src, dst) in pairs {
            if src == 0 || dst == 0 {
                return Err(PermError::ZeroIndex);
            }
            if map.insert(src, dst).is_some() {
                return Err(PermError::DuplicateSource(src));
            }
            if !targets.insert(dst) {
                return Err(PermError::DuplicateTarget(dst));
            }
        }
        // Listed fixed points still count as occupying their own target.
        let moved: BTreeSet<u32> = map.iter().filter(|(s, t)| s != t).map(|(s, _)| *s).collect();
        let hit: BTreeSet<u32> = map.iter().filter(|(s, t)| s != t).map(|(_, t)| *t).collect();
        if let Some(&x) = hit.difference(&moved).next() {
            // x is a target of some moved point but x itself is not moved,
            // so x would have two preimages.
            return Err(PermError::DuplicateTarget(x));
        }
        if let Some(&x) = moved.difference(&hit).next() {
            return Err(PermError::NotBijective(x));
        }
        Ok(Perm {
            pairs: map.into_iter().filter(|(s, t)| s != t).collect(),
        })
    }

    /// The transposition of `a` and `b`; the identity when `a == b`.
    pub fn swap(a: u32, b: u32) -> Self {
        if a == b {
            return Perm::identity();
        }
        Perm::from_pairs([(a, b), (b, a)]).expect("a transposition of positive indices")
    }

    /// The cycle `a0 -> a1 -> ... -> a0`.
    pub fn cycle(points: &[u32]) -> Result<Self, PermError> {
        let n = points.len();
        Perm::from_pairs((0..n).map(|i| (points[i], points[(i + 1) % n])))
    }

    pub fn apply(&self, x: u32) -> u32 {
        match self.pairs.binary_search_by_key(&x, |&(s, _)| s) {
            Ok(i) => self.pairs[i].1,
            Err(_) => x,
        }
    }

    pub fn apply_inverse(&self, x: u32) -> u32 {
        self.pairs
            .iter()
            .find(|&&(_, t)| t == x)
            .map(|&(s, _)| s)
            .unwrap_or(x)
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|&(s, _)| s)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        let points: BTreeSet<u32> = self.support().chain(other.support()).collect();
        let pairs = points
            .into_iter()
            .map(|x| (x, self.apply(other.apply(x))))
            .filter(|(s, t)| s != t)
            .collect();
        Perm { pairs }
    }

    pub fn inverse(&self) -> Perm {
        let mut pairs: Vec<(u32, u32)> = self.pairs.iter().map(|&(s, t)| (t, s)).collect();
        pairs.sort_unstable();
        Perm { pairs }
    }

    /// True when every point of `points` is fixed.
    pub fn fixes_all<I: IntoIterator<Item = u32>>(&self, points: I) -> bool {
        points.into_iter().all(|x| self.apply(x) == x)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (s, t)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}->{t}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
