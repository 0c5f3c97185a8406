//! Clause-by-clause evaluation of `⊩` on `V(𝒜)`, `⊩₀` on `V_Γ(𝒜)` and
//! `⊩₀` on `V_ip(𝒜)`.
//!
//! The decidable fragment (membership, equality, conjunction, disjunction,
//! bounded quantifiers) is expanded literally over the finite parameters.
//! Implication, negation and unbounded quantifiers quantify over all of
//! `𝒜` or the whole model; without an explicit finite search space they
//! yield `Unknown`, and with one they can only ever refute.

use std::collections::HashMap;

use super::formula::{Bounds, Formula, SetLike, SetRef, UnknownReason, Verdict};
use super::rset::{LabeledRSet, NormalFilterSpec, RSet};
use crate::reduce::{Engine, ReductionOutcome};
use crate::stdlib::{numeral, std_env};
use crate::term::Term;

/// Finite search spaces for the clauses that quantify over infinite
/// domains.
#[derive(Debug, Clone, Default)]
pub struct Approx<S> {
    /// Realizers tried for implication and negation.
    pub candidates: Vec<Term>,
    /// Sets tried for unbounded quantifiers.
    pub universe: Vec<S>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckStats {
    /// Deepest nesting of `∈`/`=` clause expansions.
    pub max_depth: usize,
    /// Number of pca applications performed.
    pub applications: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error("parameter is not injectively presented: {0}")]
    NotInjectivelyPresented(RSet),
    #[error("formula has an unbound variable")]
    Unbound,
}

/// Strong Kleene fold that stops as soon as the result is decided.
struct Fold {
    conj: bool,
    unknown: Option<Verdict>,
}

impl Fold {
    fn all() -> Fold {
        Fold { conj: true, unknown: None }
    }

    fn any() -> Fold {
        Fold { conj: false, unknown: None }
    }

    /// Returns `Some` once the outcome is settled.
    fn push(&mut self, v: Verdict) -> Option<Verdict> {
        match (v, self.conj) {
            (Verdict::NotRealized, true) | (Verdict::Realized, false) => Some(v),
            (Verdict::Unknown { .. }, _) => {
                self.unknown.get_or_insert(v);
                None
            }
            _ => None,
        }
    }

    fn finish(self) -> Verdict {
        self.unknown.unwrap_or(Verdict::from_bool(self.conj))
    }
}

macro_rules! push {
    ($fold:expr, $v:expr) => {
        if let Some(done) = $fold.push($v) {
            return done;
        }
    };
}

macro_rules! tryv {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(verdict) => return verdict,
        }
    };
}

/// Evaluation of pca applications shared by the checkers.
struct Apply {
    cap: u32,
    engine: Engine,
    applications: u64,
    bounds: Bounds,
}

impl Apply {
    fn new(cap: u32, bounds: Bounds) -> Apply {
        Apply { cap, engine: Engine::default(), applications: 0, bounds }
    }

    fn unknown(&self, reason: UnknownReason) -> Verdict {
        Verdict::Unknown { reason, bounds: self.bounds }
    }

    /// `f.a`, or an `Unknown(budget)` verdict.
    fn app(&mut self, f: &Term, a: &Term) -> Result<Term, Verdict> {
        self.applications += 1;
        match self.engine.red(&Term::app(f.clone(), a.clone()), self.cap) {
            ReductionOutcome::Reduced { value, .. } => Ok(value),
            ReductionOutcome::BudgetExhausted { .. } => Err(self.unknown(UnknownReason::Budget)),
        }
    }

    fn fst(&mut self, e: &Term) -> Result<Term, Verdict> {
        self.app(&std_env().p0, e)
    }

    fn snd(&mut self, e: &Term) -> Result<Term, Verdict> {
        self.app(&std_env().p1, e)
    }
}

fn resolve<S: SetLike>(r: &SetRef<S>, env: &[S]) -> S {
    r.resolve(env).expect("formulas are checked for closedness before evaluation")
}

/// `⊩` on `V(𝒜)`.
pub struct VChecker<'a> {
    ap: Apply,
    approx: Option<&'a Approx<RSet>>,
    depth: usize,
    max_depth: usize,
}

impl<'a> VChecker<'a> {
    pub fn new(cap: u32, approx: Option<&'a Approx<RSet>>) -> VChecker<'a> {
        let bounds = Bounds {
            cap,
            candidates: approx.map(|a| a.candidates.len()),
            universe: approx.map(|a| a.universe.len()),
        };
        VChecker { ap: Apply::new(cap, bounds), approx, depth: 0, max_depth: 0 }
    }

    pub fn stats(&self) -> CheckStats {
        CheckStats { max_depth: self.max_depth, applications: self.ap.applications }
    }

    fn enter(&mut self) {
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
    }

    /// `e ⊩ a ∈ b  iff  (∃⟨(e)₀, c⟩ ∈ b) (e)₁ ⊩ a = c`.
    pub fn mem(&mut self, e: &Term, a: &RSet, b: &RSet) -> Verdict {
        self.enter();
        let v = self.mem_inner(e, a, b);
        self.depth -= 1;
        v
    }

    fn mem_inner(&mut self, e: &Term, a: &RSet, b: &RSet) -> Verdict {
        let key = tryv!(self.ap.fst(e));
        let mut cs = b.children_of(&key).peekable();
        if cs.peek().is_none() {
            return Verdict::NotRealized;
        }
        let e1 = tryv!(self.ap.snd(e));
        let mut fold = Fold::any();
        for c in cs {
            push!(fold, self.eq(&e1, a, c));
        }
        fold.finish()
    }

    /// `e ⊩ a = b  iff  (∀⟨f, c⟩ ∈ a) (e)₀ f ⊩ c ∈ b ∧ (∀⟨f, c⟩ ∈ b) (e)₁ f ⊩ c ∈ a`.
    pub fn eq(&mut self, e: &Term, a: &RSet, b: &RSet) -> Verdict {
        self.enter();
        let v = self.eq_inner(e, a, b);
        self.depth -= 1;
        v
    }

    fn eq_inner(&mut self, e: &Term, a: &RSet, b: &RSet) -> Verdict {
        let mut fold = Fold::all();
        if !a.is_empty() {
            let e0 = tryv!(self.ap.fst(e));
            for (f, c) in a.elements() {
                let v = match self.ap.app(&e0, f) {
                    Ok(h) => self.mem(&h, c, b),
                    Err(u) => u,
                };
                push!(fold, v);
            }
        }
        if !b.is_empty() {
            let e1 = tryv!(self.ap.snd(e));
            for (f, c) in b.elements() {
                let v = match self.ap.app(&e1, f) {
                    Ok(h) => self.mem(&h, c, a),
                    Err(u) => u,
                };
                push!(fold, v);
            }
        }
        fold.finish()
    }

    pub fn formula(&mut self, e: &Term, phi: &Formula<RSet>, env: &mut Vec<RSet>) -> Verdict {
        match phi {
            Formula::Mem(a, b) => {
                let (a, b) = (resolve(a, env), resolve(b, env));
                self.mem(e, &a, &b)
            }
            Formula::Eq(a, b) => {
                let (a, b) = (resolve(a, env), resolve(b, env));
                self.eq(e, &a, &b)
            }
            Formula::And(l, r) => {
                let mut fold = Fold::all();
                let e0 = tryv!(self.ap.fst(e));
                push!(fold, self.formula(&e0, l, env));
                let e1 = tryv!(self.ap.snd(e));
                push!(fold, self.formula(&e1, r, env));
                fold.finish()
            }
            Formula::Or(l, r) => {
                let tag = tryv!(self.ap.fst(e));
                let side = if tag == numeral(0) {
                    l
                } else if tag == numeral(1) {
                    r
                } else {
                    return Verdict::NotRealized;
                };
                let e1 = tryv!(self.ap.snd(e));
                self.formula(&e1, side, env)
            }
            Formula::BoundedExists(s, body) => {
                let set = resolve(s, env);
                let key = tryv!(self.ap.fst(e));
                let mut cs = set.children_of(&key).peekable();
                if cs.peek().is_none() {
                    return Verdict::NotRealized;
                }
                let e1 = tryv!(self.ap.snd(e));
                let mut fold = Fold::any();
                for c in cs {
                    env.push(c.clone());
                    let v = self.formula(&e1, body, env);
                    env.pop();
                    push!(fold, v);
                }
                fold.finish()
            }
            Formula::BoundedForall(s, body) => {
                let set = resolve(s, env);
                let mut fold = Fold::all();
                for (f, b) in set.elements() {
                    let v = match self.ap.app(e, f) {
                        Ok(h) => {
                            env.push(b.clone());
                            let v = self.formula(&h, body, env);
                            env.pop();
                            v
                        }
                        Err(u) => u,
                    };
                    push!(fold, v);
                }
                fold.finish()
            }
            Formula::Implies(l, r) => {
                let Some(approx) = self.approx else {
                    return self.ap.unknown(UnknownReason::ApproximateFragment);
                };
                for f in &approx.candidates {
                    if !self.formula(f, l, env).is_realized() {
                        continue;
                    }
                    if let Ok(h) = self.ap.app(e, f) {
                        if self.formula(&h, r, env).is_not_realized() {
                            return Verdict::NotRealized;
                        }
                    }
                }
                self.ap.unknown(UnknownReason::ApproximateFragment)
            }
            Formula::Not(body) => {
                let Some(approx) = self.approx else {
                    return self.ap.unknown(UnknownReason::ApproximateFragment);
                };
                for f in &approx.candidates {
                    if self.formula(f, body, env).is_realized() {
                        return Verdict::NotRealized;
                    }
                }
                self.ap.unknown(UnknownReason::ApproximateFragment)
            }
            Formula::Exists(_) => self.ap.unknown(UnknownReason::ApproximateFragment),
            Formula::Forall(body) => {
                let Some(approx) = self.approx else {
                    return self.ap.unknown(UnknownReason::ApproximateFragment);
                };
                for a in &approx.universe {
                    env.push(a.clone());
                    let v = self.formula(e, body, env);
                    env.pop();
                    if v.is_not_realized() {
                        return Verdict::NotRealized;
                    }
                }
                self.ap.unknown(UnknownReason::ApproximateFragment)
            }
        }
    }
}

/// `e ⊩ φ` in `V(𝒜)`. Implication, negation and unbounded quantifiers give
/// `Unknown(approximate-fragment)`.
pub fn check(e: &Term, phi: &Formula<RSet>, cap: u32) -> Verdict {
    check_with_stats(e, phi, cap).0
}

pub fn check_with_stats(e: &Term, phi: &Formula<RSet>, cap: u32) -> (Verdict, CheckStats) {
    assert!(phi.is_closed(), "formula has an unbound variable");
    let mut c = VChecker::new(cap, None);
    let v = c.formula(e, phi, &mut Vec::new());
    (v, c.stats())
}

/// `e ⊩ φ` with implication and negation tested against `candidates` and
/// unbounded quantifiers against `universe`. Never answers `Realized` for a
/// formula outside the decidable fragment at the top level of an
/// approximate clause.
pub fn check_bounded_approx(e: &Term, phi: &Formula<RSet>, candidates: &[Term], universe: &[RSet], cap: u32) -> Verdict {
    assert!(phi.is_closed(), "formula has an unbound variable");
    let approx = Approx { candidates: candidates.to_vec(), universe: universe.to_vec() };
    VChecker::new(cap, Some(&approx)).formula(e, phi, &mut Vec::new())
}

/// `⊩₀` on `V_Γ(𝒜)`, with the `⊩₁` conjuncts evaluated by [`VChecker`] on
/// projected parameters.
pub struct GammaChecker<'a> {
    ap: Apply,
    approx: Option<&'a Approx<LabeledRSet>>,
    v_approx: Option<Approx<RSet>>,
    gamma: NormalFilterSpec,
    projections: HashMap<LabeledRSet, RSet>,
    cap: u32,
}

impl<'a> GammaChecker<'a> {
    pub fn new(cap: u32, approx: Option<&'a Approx<LabeledRSet>>) -> GammaChecker<'a> {
        let bounds = Bounds {
            cap,
            candidates: approx.map(|a| a.candidates.len()),
            universe: approx.map(|a| a.universe.len()),
        };
        let v_approx = approx.map(|a| Approx {
            candidates: a.candidates.clone(),
            universe: a.universe.iter().map(LabeledRSet::project).collect(),
        });
        GammaChecker {
            ap: Apply::new(cap, bounds),
            approx,
            v_approx,
            gamma: NormalFilterSpec::default(),
            projections: HashMap::new(),
            cap,
        }
    }

    fn project(&mut self, a: &LabeledRSet) -> RSet {
        self.projections.entry(a.clone()).or_insert_with(|| a.project()).clone()
    }

    /// `e ⊩₁ φ` with the current bound variables.
    fn one(&mut self, e: &Term, phi: &Formula<LabeledRSet>, env: &[LabeledRSet]) -> Verdict {
        let phi = phi.map_params(&mut |a| self.project(a));
        let mut env: Vec<RSet> = env.iter().map(|a| self.project(a)).collect();
        let mut v = VChecker::new(self.cap, self.v_approx.as_ref());
        let out = v.formula(e, &phi, &mut env);
        self.ap.applications += v.stats().applications;
        out
    }

    /// `e ⊩₀ a ∈ b  iff  (∃⟨0, (e)₀, c⟩ ∈ b) (e)₁ ⊩₀ a = c`.
    pub fn mem(&mut self, e: &Term, a: &LabeledRSet, b: &LabeledRSet) -> Verdict {
        let key = tryv!(self.ap.fst(e));
        let cs: Vec<&LabeledRSet> = b.zero_members().filter(|(k, _)| **k == key).map(|(_, c)| c).collect();
        if cs.is_empty() {
            return Verdict::NotRealized;
        }
        let e1 = tryv!(self.ap.snd(e));
        let mut fold = Fold::any();
        for c in cs {
            push!(fold, self.eq(&e1, a, c));
        }
        fold.finish()
    }

    /// Both `0`-labelled halves of the `V` clause, and `e ⊩₁ a = b`.
    pub fn eq(&mut self, e: &Term, a: &LabeledRSet, b: &LabeledRSet) -> Verdict {
        let mut fold = Fold::all();
        if a.zero_members().next().is_some() {
            let e0 = tryv!(self.ap.fst(e));
            for (f, c) in a.zero_members() {
                let v = match self.ap.app(&e0, f) {
                    Ok(h) => self.mem(&h, c, b),
                    Err(u) => u,
                };
                push!(fold, v);
            }
        }
        if b.zero_members().next().is_some() {
            let e1 = tryv!(self.ap.snd(e));
            for (f, c) in b.zero_members() {
                let v = match self.ap.app(&e1, f) {
                    Ok(h) => self.mem(&h, c, a),
                    Err(u) => u,
                };
                push!(fold, v);
            }
        }
        let (pa, pb) = (self.project(a), self.project(b));
        let mut v = VChecker::new(self.cap, None);
        push!(fold, v.eq(e, &pa, &pb));
        self.ap.applications += v.stats().applications;
        fold.finish()
    }

    pub fn formula(&mut self, e: &Term, phi: &Formula<LabeledRSet>, env: &mut Vec<LabeledRSet>) -> Verdict {
        match phi {
            Formula::Mem(a, b) => {
                let (a, b) = (resolve(a, env), resolve(b, env));
                self.mem(e, &a, &b)
            }
            Formula::Eq(a, b) => {
                let (a, b) = (resolve(a, env), resolve(b, env));
                self.eq(e, &a, &b)
            }
            Formula::And(l, r) => {
                let mut fold = Fold::all();
                let e0 = tryv!(self.ap.fst(e));
                push!(fold, self.formula(&e0, l, env));
                let e1 = tryv!(self.ap.snd(e));
                push!(fold, self.formula(&e1, r, env));
                fold.finish()
            }
            Formula::Or(l, r) => {
                let tag = tryv!(self.ap.fst(e));
                let side = if tag == numeral(0) {
                    l
                } else if tag == numeral(1) {
                    r
                } else {
                    return Verdict::NotRealized;
                };
                let e1 = tryv!(self.ap.snd(e));
                self.formula(&e1, side, env)
            }
            Formula::BoundedExists(s, body) => {
                let set = resolve(s, env);
                let key = tryv!(self.ap.fst(e));
                let cs: Vec<LabeledRSet> =
                    set.zero_members().filter(|(k, _)| **k == key).map(|(_, c)| c.clone()).collect();
                if cs.is_empty() {
                    return Verdict::NotRealized;
                }
                let e1 = tryv!(self.ap.snd(e));
                let mut fold = Fold::any();
                for c in cs {
                    env.push(c);
                    let v = self.formula(&e1, body, env);
                    env.pop();
                    push!(fold, v);
                }
                fold.finish()
            }
            Formula::BoundedForall(s, body) => {
                let set = resolve(s, env);
                let mut fold = Fold::all();
                for (f, b) in set.zero_members() {
                    let v = match self.ap.app(e, f) {
                        Ok(h) => {
                            env.push(b.clone());
                            let v = self.formula(&h, body, env);
                            env.pop();
                            v
                        }
                        Err(u) => u,
                    };
                    push!(fold, v);
                }
                push!(fold, self.one(e, phi, env));
                fold.finish()
            }
            Formula::Implies(l, r) => {
                let Some(approx) = self.approx else {
                    return self.ap.unknown(UnknownReason::ApproximateFragment);
                };
                if self.one(e, phi, env).is_not_realized() {
                    return Verdict::NotRealized;
                }
                for f in &approx.candidates {
                    if !self.formula(f, l, env).is_realized() {
                        continue;
                    }
                    if let Ok(h) = self.ap.app(e, f) {
                        if self.formula(&h, r, env).is_not_realized() {
                            return Verdict::NotRealized;
                        }
                    }
                }
                self.ap.unknown(UnknownReason::ApproximateFragment)
            }
            Formula::Not(body) => {
                let Some(approx) = self.approx else {
                    return self.ap.unknown(UnknownReason::ApproximateFragment);
                };
                for f in &approx.candidates {
                    if self.one(f, body, env).is_realized() {
                        return Verdict::NotRealized;
                    }
                }
                self.ap.unknown(UnknownReason::ApproximateFragment)
            }
            Formula::Exists(_) => self.ap.unknown(UnknownReason::ApproximateFragment),
            Formula::Forall(body) => {
                let Some(approx) = self.approx else {
                    return self.ap.unknown(UnknownReason::ApproximateFragment);
                };
                for a in &approx.universe {
                    env.push(a.clone());
                    let refuted = (a.is_partly_symmetric(&self.gamma) && self.formula(e, body, env).is_not_realized())
                        || self.one(e, body, env).is_not_realized();
                    env.pop();
                    if refuted {
                        return Verdict::NotRealized;
                    }
                }
                self.ap.unknown(UnknownReason::ApproximateFragment)
            }
        }
    }
}

/// `e ⊩₀ φ` in `V_Γ(𝒜)` over labelled parameters.
pub fn check0_gamma(e: &Term, phi: &Formula<LabeledRSet>, cap: u32) -> Verdict {
    assert!(phi.is_closed(), "formula has an unbound variable");
    GammaChecker::new(cap, None).formula(e, phi, &mut Vec::new())
}

pub fn check0_gamma_approx(
    e: &Term,
    phi: &Formula<LabeledRSet>,
    candidates: &[Term],
    universe: &[LabeledRSet],
    cap: u32,
) -> Verdict {
    assert!(phi.is_closed(), "formula has an unbound variable");
    let approx = Approx { candidates: candidates.to_vec(), universe: universe.to_vec() };
    GammaChecker::new(cap, Some(&approx)).formula(e, phi, &mut Vec::new())
}

/// Every parameter is hereditarily injectively presented.
pub fn validate_injectively_presented(phi: &Formula<RSet>) -> Result<(), RealizeError> {
    match phi.params().into_iter().find(|a| !a.is_injectively_presented()) {
        Some(a) => Err(RealizeError::NotInjectivelyPresented(a.clone())),
        None => Ok(()),
    }
}

/// `e ⊩₀ φ` in `V_ip(𝒜)`. On bounded formulas the clauses coincide with
/// those of `V(𝒜)`; the parameters must be injectively presented.
pub fn check0_ip(e: &Term, phi: &Formula<RSet>, cap: u32) -> Result<Verdict, RealizeError> {
    if !phi.is_closed() {
        return Err(RealizeError::Unbound);
    }
    validate_injectively_presented(phi)?;
    Ok(check(e, phi, cap))
}

/// The approximate variant; the universe is restricted to injectively
/// presented sets.
pub fn check0_ip_approx(
    e: &Term,
    phi: &Formula<RSet>,
    candidates: &[Term],
    universe: &[RSet],
    cap: u32,
) -> Result<Verdict, RealizeError> {
    if !phi.is_closed() {
        return Err(RealizeError::Unbound);
    }
    validate_injectively_presented(phi)?;
    let universe: Vec<RSet> = universe.iter().filter(|a| a.is_injectively_presented()).cloned().collect();
    Ok(check_bounded_approx(e, phi, candidates, &universe, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::rset::{canonical_numeral as bar, Label};
    use crate::stdlib::pair;
    use crate::term::parse;

    const CAP: u32 = 10_000;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn value(term: Term) -> Term {
        crate::reduce::red(&term, CAP).into_value().unwrap()
    }

    #[test]
    fn v_examples() {
        assert_eq!(check(&t("K"), &Formula::eq(bar(0), bar(0)), CAP), Verdict::Realized);
        assert_eq!(check(&t("S I I (S I I)"), &Formula::eq(bar(0), bar(0)), CAP), Verdict::Realized);
        let e = value(pair(t("#0"), t("K")));
        assert_eq!(check(&e, &Formula::mem(bar(0), bar(1)), CAP), Verdict::Realized);
        let e = value(pair(t("#1"), t("K")));
        assert_eq!(check(&e, &Formula::mem(bar(0), bar(1)), CAP), Verdict::NotRealized);
    }

    #[test]
    fn divergent_projection_is_unknown() {
        // (e)₀ = e true diverges for e = λx. (S I I)(S I I).
        let omega = t("S (K (S I I)) (K (S I I))");
        let v = check(&omega, &Formula::eq(bar(1), bar(1)), 200);
        assert!(matches!(v, Verdict::Unknown { reason: UnknownReason::Budget, .. }), "{v}");
    }

    #[test]
    fn disjunction_tags() {
        let phi = Formula::or(Formula::mem(bar(0), bar(0)), Formula::eq(bar(0), bar(0)));
        assert_eq!(check(&value(pair(t("#1"), t("K"))), &phi, CAP), Verdict::Realized);
        assert_eq!(check(&value(pair(t("#0"), t("K"))), &phi, CAP), Verdict::NotRealized);
        assert_eq!(check(&value(pair(t("#2"), t("K"))), &phi, CAP), Verdict::NotRealized);
    }

    #[test]
    fn bounded_quantifiers() {
        // (∀x ∈ 2̄) x ∈ 2̄, realized by λf. p f i_r.
        let ir = crate::realize::equality_realizers().ir.clone();
        let e = crate::stdlib::lam(&[0], pair(Term::var(0), ir));
        let phi = Formula::ball(SetRef::Param(bar(2)), Formula::Mem(SetRef::Bound(0), SetRef::Param(bar(2))));
        assert_eq!(check(&e, &phi, CAP), Verdict::Realized);
        let phi = Formula::ball(SetRef::Param(bar(2)), Formula::Mem(SetRef::Bound(0), SetRef::Param(bar(1))));
        assert_eq!(check(&e, &phi, CAP), Verdict::NotRealized);
        // (∃x ∈ 2̄) x = 1̄, realized by p #1 i_r.
        let ir = crate::realize::equality_realizers().ir.clone();
        let e = value(pair(t("#1"), ir));
        let phi = Formula::bex(SetRef::Param(bar(2)), Formula::Eq(SetRef::Bound(0), SetRef::Param(bar(1))));
        assert_eq!(check(&e, &phi, CAP), Verdict::Realized);
    }

    #[test]
    fn approximate_examples() {
        let e00 = Formula::eq(bar(0), bar(0));
        let v = check_bounded_approx(&t("K"), &Formula::not(e00.clone()), &[t("K")], &[], CAP);
        assert_eq!(v, Verdict::NotRealized);
        let v = check_bounded_approx(&t("K"), &Formula::implies(e00.clone(), e00.clone()), &[t("K"), t("S")], &[], CAP);
        assert!(matches!(v, Verdict::Unknown { reason: UnknownReason::ApproximateFragment, .. }));
        let v = check_bounded_approx(&t("K"), &Formula::implies(e00.clone(), Formula::mem(bar(0), bar(0))), &[t("K")], &[], CAP);
        assert_eq!(v, Verdict::NotRealized);
        assert!(check(&t("K"), &Formula::not(e00), CAP).is_unknown());
    }

    #[test]
    fn approximate_mode_never_realizes_unbounded_existentials() {
        let ir = crate::realize::equality_realizers().ir.clone();
        let phi = Formula::ex(Formula::Eq(SetRef::Bound(0), SetRef::Bound(0)));
        let v = check_bounded_approx(&ir, &phi, &[], &[bar(0), bar(1)], CAP);
        assert!(v.is_unknown());
        let phi = Formula::all(Formula::Mem(SetRef::Bound(0), SetRef::Param(bar(0))));
        let v = check_bounded_approx(&ir, &phi, &[], &[bar(1)], CAP);
        assert_eq!(v, Verdict::NotRealized);
    }

    #[test]
    fn gamma_examples() {
        let l0 = bar(0).labeled(Label::Zero);
        assert_eq!(check0_gamma(&t("K"), &Formula::eq(l0.clone(), l0.clone()), CAP), Verdict::Realized);
        let e = value(pair(t("#0"), t("K")));
        let one = LabeledRSet::from_triples([(Label::One, t("#0"), l0.clone())]);
        assert_eq!(check0_gamma(&e, &Formula::mem(l0.clone(), one), CAP), Verdict::NotRealized);
        let zero = LabeledRSet::from_triples([(Label::Zero, t("#0"), l0.clone())]);
        assert_eq!(check0_gamma(&e, &Formula::mem(l0, zero), CAP), Verdict::Realized);
    }

    #[test]
    fn gamma_equality_keeps_the_projected_conjunct() {
        // ⊩₀ ignores 1-labelled members except through the ⊩₁ conjunct.
        let a = LabeledRSet::from_triples([(Label::One, t("K"), LabeledRSet::empty())]);
        let b = LabeledRSet::empty();
        assert_eq!(check(&t("K"), &Formula::eq(a.project(), b.project()), CAP), Verdict::NotRealized);
        assert_eq!(check0_gamma(&t("K"), &Formula::eq(a, b), CAP), Verdict::NotRealized);
    }

    #[test]
    fn ip_rejects_duplicate_keys() {
        let dup = RSet::from_pairs([(t("K"), bar(0)), (t("K"), bar(1))]);
        assert!(check0_ip(&t("K"), &Formula::eq(dup.clone(), dup), CAP).is_err());
        assert_eq!(check0_ip(&t("K"), &Formula::eq(bar(0), bar(0)), CAP), Ok(Verdict::Realized));
    }

    #[test]
    fn recursion_depth_is_bounded_by_rank() {
        let ir = crate::realize::equality_realizers().ir.clone();
        for n in 0..5 {
            let (v, stats) = check_with_stats(&ir, &Formula::eq(bar(n), bar(n)), CAP);
            assert!(v.is_realized());
            assert!(stats.max_depth <= 2 * n as usize + 1, "{n}: {}", stats.max_depth);
        }
    }
}
