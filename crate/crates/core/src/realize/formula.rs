//! Formulas with set parameters, and three-valued verdicts.

use std::fmt;

use super::rset::{labeled_ordered_pair, ordered_pair, LabeledRSet, RSet};

/// Operations shared by the two kinds of parameter.
pub trait SetLike: Clone + Ord + fmt::Display {
    /// The internal ordered pair.
    fn opair(a: &Self, b: &Self) -> Self;
    fn rank(&self) -> usize;
}

impl SetLike for RSet {
    fn opair(a: &RSet, b: &RSet) -> RSet {
        ordered_pair(a, b)
    }

    fn rank(&self) -> usize {
        RSet::rank(self)
    }
}

impl SetLike for LabeledRSet {
    fn opair(a: &LabeledRSet, b: &LabeledRSet) -> LabeledRSet {
        labeled_ordered_pair(a, b)
    }

    fn rank(&self) -> usize {
        LabeledRSet::rank(self)
    }
}

/// A set-valued expression: a parameter, a bound variable (de Bruijn
/// index, 0 = innermost binder), or an internal ordered pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SetRef<S> {
    Param(S),
    Bound(u32),
    Pair(Box<SetRef<S>>, Box<SetRef<S>>),
}

impl<S> SetRef<S> {
    pub fn pair(a: SetRef<S>, b: SetRef<S>) -> SetRef<S> {
        SetRef::Pair(Box::new(a), Box::new(b))
    }
}

impl<S: SetLike> SetRef<S> {

    /// Evaluates against `env`, where the last entry is bound variable 0.
    pub fn resolve(&self, env: &[S]) -> Option<S> {
        match self {
            SetRef::Param(s) => Some(s.clone()),
            SetRef::Bound(i) => env.len().checked_sub(1 + *i as usize).map(|j| env[j].clone()),
            SetRef::Pair(a, b) => Some(S::opair(&a.resolve(env)?, &b.resolve(env)?)),
        }
    }

    pub fn map<T>(&self, f: &mut impl FnMut(&S) -> T) -> SetRef<T> {
        match self {
            SetRef::Param(s) => SetRef::Param(f(s)),
            SetRef::Bound(i) => SetRef::Bound(*i),
            SetRef::Pair(a, b) => SetRef::Pair(Box::new(a.map(f)), Box::new(b.map(f))),
        }
    }

    fn max_free(&self, depth: u32) -> Option<u32> {
        match self {
            SetRef::Param(_) => None,
            SetRef::Bound(i) => i.checked_sub(depth),
            SetRef::Pair(a, b) => a.max_free(depth).max(b.max_free(depth)),
        }
    }

    fn params<'a>(&'a self, out: &mut Vec<&'a S>) {
        match self {
            SetRef::Param(s) => out.push(s),
            SetRef::Bound(_) => {}
            SetRef::Pair(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }
}

/// First-order set-theoretic formulas. Quantifier bodies see the bound
/// element as `Bound(0)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula<S> {
    Mem(SetRef<S>, SetRef<S>),
    Eq(SetRef<S>, SetRef<S>),
    And(Box<Formula<S>>, Box<Formula<S>>),
    Or(Box<Formula<S>>, Box<Formula<S>>),
    Implies(Box<Formula<S>>, Box<Formula<S>>),
    Not(Box<Formula<S>>),
    BoundedExists(SetRef<S>, Box<Formula<S>>),
    BoundedForall(SetRef<S>, Box<Formula<S>>),
    Exists(Box<Formula<S>>),
    Forall(Box<Formula<S>>),
}

impl<S> Formula<S> {
    pub fn mem(a: S, b: S) -> Formula<S> {
        Formula::Mem(SetRef::Param(a), SetRef::Param(b))
    }

    pub fn eq(a: S, b: S) -> Formula<S> {
        Formula::Eq(SetRef::Param(a), SetRef::Param(b))
    }

    pub fn and(a: Formula<S>, b: Formula<S>) -> Formula<S> {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula<S>, b: Formula<S>) -> Formula<S> {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula<S>, b: Formula<S>) -> Formula<S> {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula<S>) -> Formula<S> {
        Formula::Not(Box::new(a))
    }

    pub fn bex(bound: SetRef<S>, body: Formula<S>) -> Formula<S> {
        Formula::BoundedExists(bound, Box::new(body))
    }

    pub fn ball(bound: SetRef<S>, body: Formula<S>) -> Formula<S> {
        Formula::BoundedForall(bound, Box::new(body))
    }

    pub fn ex(body: Formula<S>) -> Formula<S> {
        Formula::Exists(Box::new(body))
    }

    pub fn all(body: Formula<S>) -> Formula<S> {
        Formula::Forall(Box::new(body))
    }
}

impl<S: SetLike> Formula<S> {
    /// Built from `Mem`, `Eq`, `And`, `Or` and bounded quantifiers only.
    pub fn is_decidable(&self) -> bool {
        match self {
            Formula::Mem(..) | Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_decidable() && b.is_decidable(),
            Formula::BoundedExists(_, b) | Formula::BoundedForall(_, b) => b.is_decidable(),
            Formula::Implies(..) | Formula::Not(_) | Formula::Exists(_) | Formula::Forall(_) => false,
        }
    }

    /// No unbounded quantifier occurs.
    pub fn is_bounded(&self) -> bool {
        match self {
            Formula::Mem(..) | Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.is_bounded() && b.is_bounded(),
            Formula::Not(a) | Formula::BoundedExists(_, a) | Formula::BoundedForall(_, a) => a.is_bounded(),
            Formula::Exists(_) | Formula::Forall(_) => false,
        }
    }

    /// Every bound variable refers to an enclosing binder.
    pub fn is_closed(&self) -> bool {
        self.max_free(0).is_none()
    }

    fn max_free(&self, depth: u32) -> Option<u32> {
        match self {
            Formula::Mem(a, b) | Formula::Eq(a, b) => a.max_free(depth).max(b.max_free(depth)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.max_free(depth).max(b.max_free(depth))
            }
            Formula::Not(a) => a.max_free(depth),
            Formula::BoundedExists(s, a) | Formula::BoundedForall(s, a) => {
                s.max_free(depth).max(a.max_free(depth + 1))
            }
            Formula::Exists(a) | Formula::Forall(a) => a.max_free(depth + 1),
        }
    }

    pub fn map_params<T>(&self, f: &mut impl FnMut(&S) -> T) -> Formula<T> {
        let bx = |x: Formula<T>| Box::new(x);
        match self {
            Formula::Mem(a, b) => Formula::Mem(a.map(f), b.map(f)),
            Formula::Eq(a, b) => Formula::Eq(a.map(f), b.map(f)),
            Formula::And(a, b) => Formula::And(bx(a.map_params(f)), bx(b.map_params(f))),
            Formula::Or(a, b) => Formula::Or(bx(a.map_params(f)), bx(b.map_params(f))),
            Formula::Implies(a, b) => Formula::Implies(bx(a.map_params(f)), bx(b.map_params(f))),
            Formula::Not(a) => Formula::Not(bx(a.map_params(f))),
            Formula::BoundedExists(s, a) => Formula::BoundedExists(s.map(f), bx(a.map_params(f))),
            Formula::BoundedForall(s, a) => Formula::BoundedForall(s.map(f), bx(a.map_params(f))),
            Formula::Exists(a) => Formula::Exists(bx(a.map_params(f))),
            Formula::Forall(a) => Formula::Forall(bx(a.map_params(f))),
        }
    }

    /// Every parameter occurrence.
    pub fn params(&self) -> Vec<&S> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a S>) {
        match self {
            Formula::Mem(a, b) | Formula::Eq(a, b) => {
                a.params(out);
                b.params(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            Formula::Not(a) | Formula::Exists(a) | Formula::Forall(a) => a.collect_params(out),
            Formula::BoundedExists(s, a) | Formula::BoundedForall(s, a) => {
                s.params(out);
                a.collect_params(out);
            }
        }
    }

    /// Largest parameter rank, the measure the checker recurses on.
    pub fn max_rank(&self) -> usize {
        self.params().into_iter().map(SetLike::rank).max().unwrap_or(0)
    }
}

/// Why a verdict could not be decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    /// Some application did not reduce within the stage cap.
    Budget,
    /// The formula needs quantification over an infinite domain.
    ApproximateFragment,
}

impl UnknownReason {
    pub fn as_str(self) -> &'static str {
        match self {
            UnknownReason::Budget => "budget",
            UnknownReason::ApproximateFragment => "approximate-fragment",
        }
    }
}

/// The bounds a verdict was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Bounds {
    pub cap: u32,
    /// Number of candidate realizers tried for implication and negation.
    pub candidates: Option<usize>,
    /// Number of sets tried for unbounded quantifiers.
    pub universe: Option<usize>,
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cap={}", self.cap)?;
        if let Some(c) = self.candidates {
            write!(f, " candidates={c}")?;
        }
        if let Some(u) = self.universe {
            write!(f, " universe={u}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Realized,
    NotRealized,
    Unknown { reason: UnknownReason, bounds: Bounds },
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Realized
        } else {
            Verdict::NotRealized
        }
    }

    pub fn is_realized(&self) -> bool {
        matches!(self, Verdict::Realized)
    }

    pub fn is_not_realized(&self) -> bool {
        matches!(self, Verdict::NotRealized)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    /// Strong Kleene conjunction, evaluated lazily left to right.
    pub fn all<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        let mut unknown = None;
        for v in items {
            match v {
                Verdict::NotRealized => return Verdict::NotRealized,
                Verdict::Unknown { .. } => {
                    unknown.get_or_insert(v);
                }
                Verdict::Realized => {}
            }
        }
        unknown.unwrap_or(Verdict::Realized)
    }

    /// Strong Kleene disjunction, evaluated lazily left to right.
    pub fn any<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        let mut unknown = None;
        for v in items {
            match v {
                Verdict::Realized => return Verdict::Realized,
                Verdict::Unknown { .. } => {
                    unknown.get_or_insert(v);
                }
                Verdict::NotRealized => {}
            }
        }
        unknown.unwrap_or(Verdict::NotRealized)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Realized => f.write_str("REALIZED"),
            Verdict::NotRealized => f.write_str("NOT-REALIZED"),
            Verdict::Unknown { reason, bounds } => write!(f, "UNKNOWN({}, {})", reason.as_str(), bounds),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::rset::canonical_numeral;

    #[test]
    fn classification() {
        let a = canonical_numeral(1);
        let eq = Formula::eq(a.clone(), a.clone());
        assert!(eq.is_decidable() && eq.is_bounded());
        let body = Formula::Mem(SetRef::Bound(0), SetRef::Param(a.clone()));
        assert!(Formula::ball(SetRef::Param(a.clone()), body.clone()).is_decidable());
        assert!(!Formula::all(body.clone()).is_decidable());
        assert!(!Formula::implies(eq.clone(), eq.clone()).is_decidable());
        assert!(Formula::implies(eq.clone(), eq).is_bounded());
        assert!(!body.is_closed());
        assert!(Formula::ex(body).is_closed());
    }

    #[test]
    fn resolve_pairs_and_bound_variables() {
        let env = vec![canonical_numeral(1), canonical_numeral(2)];
        assert_eq!(SetRef::<RSet>::Bound(0).resolve(&env), Some(canonical_numeral(2)));
        assert_eq!(SetRef::<RSet>::Bound(1).resolve(&env), Some(canonical_numeral(1)));
        assert_eq!(SetRef::<RSet>::Bound(2).resolve(&env), None);
        let p = SetRef::pair(SetRef::Bound(1), SetRef::Param(canonical_numeral(0)));
        assert_eq!(p.resolve(&env), Some(ordered_pair(&canonical_numeral(1), &canonical_numeral(0))));
    }

    #[test]
    fn kleene_connectives() {
        let u = Verdict::Unknown { reason: UnknownReason::Budget, bounds: Bounds::default() };
        assert_eq!(Verdict::all([Verdict::Realized, u]), u);
        assert_eq!(Verdict::all([u, Verdict::NotRealized]), Verdict::NotRealized);
        assert_eq!(Verdict::any([u, Verdict::Realized]), Verdict::Realized);
        assert_eq!(Verdict::any([Verdict::NotRealized, u]), u);
        assert_eq!(Verdict::all([]), Verdict::Realized);
        assert_eq!(Verdict::any([]), Verdict::NotRealized);
    }

    #[test]
    fn verdict_rendering() {
        assert_eq!(Verdict::Realized.to_string(), "REALIZED");
        assert_eq!(Verdict::NotRealized.to_string(), "NOT-REALIZED");
        let u = Verdict::Unknown {
            reason: UnknownReason::ApproximateFragment,
            bounds: Bounds { cap: 10, candidates: Some(2), universe: None },
        };
        assert_eq!(u.to_string(), "UNKNOWN(approximate-fragment, cap=10 candidates=2)");
    }
}
