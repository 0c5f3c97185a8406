//! Finite-rank elements of `V(𝒜)` and `V₁(𝒜)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::reduce::Engine;
use crate::stdlib::{numeral, numeral_value};
use crate::term::{Perm, Term};

/// A finite set of `(realizer, child)` pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RSet(Arc<BTreeSet<(Term, RSet)>>);

impl RSet {
    pub fn empty() -> RSet {
        RSet::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Term, RSet)>>(pairs: I) -> RSet {
        RSet(Arc::new(pairs.into_iter().collect()))
    }

    pub fn elements(&self) -> impl Iterator<Item = &(Term, RSet)> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, key: &Term, child: &RSet) -> bool {
        self.0.contains(&(key.clone(), child.clone()))
    }

    /// Children stored under `key`.
    pub fn children_of<'a>(&'a self, key: &'a Term) -> impl Iterator<Item = &'a RSet> + 'a {
        self.0.iter().filter(move |(k, _)| k == key).map(|(_, c)| c)
    }

    pub fn with(&self, key: Term, child: RSet) -> RSet {
        let mut s = (*self.0).clone();
        s.insert((key, child));
        RSet(Arc::new(s))
    }

    pub fn union(&self, other: &RSet) -> RSet {
        let mut s = (*self.0).clone();
        s.extend(other.0.iter().cloned());
        RSet(Arc::new(s))
    }

    /// `rk a = sup (rk b + 1)` over members `⟨e, b⟩`.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|(_, b)| b.rank() + 1).max().unwrap_or(0)
    }

    /// Keys determine children, hereditarily.
    pub fn is_injectively_presented(&self) -> bool {
        let mut prev: Option<&(Term, RSet)> = None;
        for pair in self.0.iter() {
            // Pairs are sorted by key first, so duplicates are adjacent.
            if let Some((k, _)) = prev {
                if *k == pair.0 {
                    return false;
                }
            }
            prev = Some(pair);
        }
        self.0.iter().all(|(_, c)| c.is_injectively_presented())
    }

    /// The lift of the automorphism induced by `perm`.
    pub fn permute(&self, perm: &Perm) -> RSet {
        RSet::from_pairs(self.0.iter().map(|(e, b)| (e.permute(perm), b.permute(perm))))
    }

    /// Atoms occurring hereditarily in realizers, or `None` when an oracle
    /// constant occurs. An oracle `ζ_F` is fixed only by the identity, so
    /// no finite atom set supports such a set.
    pub fn support(&self) -> Option<BTreeSet<u32>> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            for (e, b) in s.0.iter() {
                if e.has_oracle() {
                    return None;
                }
                out.extend(e.atoms().iter().copied());
                stack.push(b);
            }
        }
        Some(out)
    }

    /// Every realizer, hereditarily.
    pub fn realizers(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            for (e, b) in s.0.iter() {
                out.insert(e.clone());
                stack.push(b);
            }
        }
        out
    }

    /// Relabels every member with `label`, hereditarily.
    pub fn labeled(&self, label: Label) -> LabeledRSet {
        LabeledRSet::from_triples(self.0.iter().map(|(e, b)| (label, e.clone(), b.labeled(label))))
    }
}

/// A member label of `V₁(𝒜)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn from_bit(bit: u8) -> Option<Label> {
        match bit {
            0 => Some(Label::Zero),
            1 => Some(Label::One),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }
}

/// A finite set of `(label, realizer, child)` triples.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabeledRSet(Arc<BTreeSet<(Label, Term, LabeledRSet)>>);

impl LabeledRSet {
    pub fn empty() -> LabeledRSet {
        LabeledRSet::default()
    }

    pub fn from_triples<I: IntoIterator<Item = (Label, Term, LabeledRSet)>>(triples: I) -> LabeledRSet {
        LabeledRSet(Arc::new(triples.into_iter().collect()))
    }

    pub fn elements(&self) -> impl Iterator<Item = &(Label, Term, LabeledRSet)> + '_ {
        self.0.iter()
    }

    /// Members labelled `0`.
    pub fn zero_members(&self) -> impl Iterator<Item = (&Term, &LabeledRSet)> + '_ {
        self.0.iter().filter(|(l, _, _)| *l == Label::Zero).map(|(_, e, b)| (e, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|(_, _, b)| b.rank() + 1).max().unwrap_or(0)
    }

    /// `a° = {⟨e, b°⟩ | ⟨s, e, b⟩ ∈ a}`.
    pub fn project(&self) -> RSet {
        RSet::from_pairs(self.0.iter().map(|(_, e, b)| (e.clone(), b.project())))
    }

    /// `α(a) = {⟨s, α(e), α(b)⟩ | ⟨s, e, b⟩ ∈ a}`.
    pub fn lift_perm(&self, perm: &Perm) -> LabeledRSet {
        LabeledRSet::from_triples(self.0.iter().map(|(s, e, b)| (*s, e.permute(perm), b.lift_perm(perm))))
    }

    /// See [`RSet::support`].
    pub fn support(&self) -> Option<BTreeSet<u32>> {
        self.project().support()
    }

    /// Large stabiliser, and every `0`-labelled child partly symmetric.
    pub fn is_partly_symmetric(&self, gamma: &NormalFilterSpec) -> bool {
        gamma.contains(&Subgroup::stabiliser_bound(self.support()))
            && self.zero_members().all(|(_, b)| b.is_partly_symmetric(gamma))
    }

    /// Every member is `0`-labelled with a completely symmetric child.
    pub fn is_completely_symmetric(&self) -> bool {
        self.0.iter().all(|(l, _, b)| *l == Label::Zero && b.is_completely_symmetric())
    }
}

/// A subgroup of the automorphism group, as far as the finite-support
/// criterion can see it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subgroup {
    /// The pointwise stabiliser of a finite set of atoms.
    Fix(BTreeSet<u32>),
    /// A subgroup containing no pointwise stabiliser of a finite set
    /// (for example the stabiliser of an oracle constant, which is trivial).
    Small,
}

impl Subgroup {
    /// The largest subgroup the support analysis guarantees inside the
    /// stabiliser of a set with the given support.
    pub fn stabiliser_bound(support: Option<BTreeSet<u32>>) -> Subgroup {
        support.map(Subgroup::Fix).unwrap_or(Subgroup::Small)
    }

    pub fn whole() -> Subgroup {
        Subgroup::Fix(BTreeSet::new())
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        match (self, other) {
            (Subgroup::Fix(a), Subgroup::Fix(b)) => Subgroup::Fix(a.union(b).copied().collect()),
            _ => Subgroup::Small,
        }
    }

    /// `g H g⁻¹`; for `H = Fix(E)` this is `Fix(g(E))`.
    pub fn conjugate(&self, g: &Perm) -> Subgroup {
        match self {
            Subgroup::Fix(e) => Subgroup::Fix(e.iter().map(|&i| g.apply(i)).collect()),
            Subgroup::Small => Subgroup::Small,
        }
    }

    /// `self ⊆ other`, decided on the represented subgroups.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        match (self, other) {
            (Subgroup::Fix(a), Subgroup::Fix(b)) => b.is_subset(a),
            (Subgroup::Small, _) => true,
            (Subgroup::Fix(_), Subgroup::Small) => false,
        }
    }
}

/// The normal filter generated by `{Stab(ξ_n) : n ≤ M}`.
///
/// Closing under conjugation yields every `Stab(ξ_n)`, so the filter is the
/// one of finitely supported subgroups whatever `M` is; `generators` is kept
/// for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalFilterSpec {
    pub generators: u32,
}

impl Default for NormalFilterSpec {
    fn default() -> Self {
        NormalFilterSpec { generators: 1 }
    }
}

impl NormalFilterSpec {
    pub fn contains(&self, h: &Subgroup) -> bool {
        matches!(h, Subgroup::Fix(_))
    }
}

/// `n̄ = {⟨m̲, m̄⟩ | m < n}`.
pub fn canonical_numeral(n: u64) -> RSet {
    let mut acc = RSet::empty();
    for m in 0..n {
        acc = acc.with(numeral(m), acc.clone());
    }
    acc
}

/// `ω̄` restricted to indices `< limit`, which coincides with `limit̄`.
pub fn omega_truncation(limit: u64) -> RSet {
    canonical_numeral(limit)
}

/// `{⟨𝟎, a⟩, ⟨𝟏, b⟩}`.
pub fn unordered_pair(a: &RSet, b: &RSet) -> RSet {
    RSet::from_pairs([(numeral(0), a.clone()), (numeral(1), b.clone())])
}

/// The internal ordered pair `(a, b) = {{a, a}, {a, b}}` built from
/// [`unordered_pair`].
pub fn ordered_pair(a: &RSet, b: &RSet) -> RSet {
    unordered_pair(&unordered_pair(a, a), &unordered_pair(a, b))
}

pub fn labeled_unordered_pair(a: &LabeledRSet, b: &LabeledRSet) -> LabeledRSet {
    LabeledRSet::from_triples([(Label::Zero, numeral(0), a.clone()), (Label::Zero, numeral(1), b.clone())])
}

pub fn labeled_ordered_pair(a: &LabeledRSet, b: &LabeledRSet) -> LabeledRSet {
    labeled_unordered_pair(&labeled_unordered_pair(a, a), &labeled_unordered_pair(a, b))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("{f} applied to #{n} is not a numeral within the budget")]
    NotNumeral { f: Term, n: u64 },
}

/// Values `f n̲` for `n < limit`.
pub fn graph_values(f: &Term, limit: u64, cap: u32) -> Result<Vec<u64>, GraphError> {
    let engine = Engine::default();
    (0..limit)
        .map(|n| {
            engine
                .red(&Term::app(f.clone(), numeral(n)), cap)
                .value()
                .and_then(numeral_value)
                .ok_or_else(|| GraphError::NotNumeral { f: f.clone(), n })
        })
        .collect()
}

/// `f̄ = {⟨n̲, (n̄, \overline{f n})⟩ | n < limit}`.
pub fn graph_rset(f: &Term, limit: u64, cap: u32) -> Result<RSet, GraphError> {
    let values = graph_values(f, limit, cap)?;
    Ok(RSet::from_pairs(values.iter().enumerate().map(|(n, &v)| {
        let n = n as u64;
        (numeral(n), ordered_pair(&canonical_numeral(n), &canonical_numeral(v)))
    })))
}

impl fmt::Display for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(rset")?;
        for (e, b) in self.0.iter() {
            write!(f, " (pair \"{e}\" {b})")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LabeledRSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(lrset")?;
        for (s, e, b) in self.0.iter() {
            write!(f, " (labeled {} \"{e}\" {b})", s.bit())?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for LabeledRSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
