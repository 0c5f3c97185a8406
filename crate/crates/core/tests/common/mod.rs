//! Independent oracles shared by the integration tests. None of them call
//! the reduction engine or the realizability checker.

#![allow(dead_code)]

use std::collections::HashMap;

use pca_forge::realize::{ordered_pair, Formula, RSet, SetRef};
use pca_forge::stdlib::{numeral, std_env};
use pca_forge::term::{Term, TermKind};

fn atoms_in(t: &Term, out: &mut Vec<u32>) {
    match t.kind() {
        TermKind::Atom(i) => out.push(*i),
        TermKind::App(l, r) => {
            atoms_in(l, out);
            atoms_in(r, out);
        }
        _ => {}
    }
}

fn closed(t: &Term) -> bool {
    match t.kind() {
        TermKind::Var(_) => false,
        TermKind::App(l, r) => closed(l) && closed(r),
        _ => true,
    }
}

/// The contractum if `t` itself is a redex (arguments not inspected).
fn contract(t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    match (head.kind(), args.as_slice()) {
        (TermKind::K, [r, _]) => Some((*r).clone()),
        (TermKind::S, [r, s, u]) => {
            Some(Term::app(Term::app((*r).clone(), (*u).clone()), Term::app((*s).clone(), (*u).clone())))
        }
        (TermKind::Oracle(f), [r]) if closed(r) => {
            let mut atoms = Vec::new();
            atoms_in(r, &mut atoms);
            Some(numeral(atoms.into_iter().map(|m| u64::from(f.apply(m))).max().unwrap_or(0)))
        }
        _ => None,
    }
}

/// No subterm is a redex.
pub fn is_nf(t: &Term) -> bool {
    match t.kind() {
        TermKind::App(l, r) => is_nf(l) && is_nf(r) && contract(t).is_none(),
        _ => true,
    }
}

/// `RED_n` transcribed clause by clause, memoised on `(n, t)`.
pub struct LiteralRed {
    memo: HashMap<(u32, Term), Option<Term>>,
}

impl LiteralRed {
    pub fn new() -> Self {
        LiteralRed { memo: HashMap::new() }
    }

    pub fn red_n(&mut self, n: u32, t: &Term) -> Option<Term> {
        if let Some(v) = self.memo.get(&(n, t.clone())) {
            return v.clone();
        }
        let v = self.compute(n, t);
        self.memo.insert((n, t.clone()), v.clone());
        v
    }

    fn compute(&mut self, n: u32, t: &Term) -> Option<Term> {
        if n == 0 {
            if is_nf(t) {
                return Some(t.clone());
            }
            let (head, args) = t.spine();
            return match (head.kind(), args.as_slice()) {
                (TermKind::K, [r, s]) if is_nf(r) && is_nf(s) => Some((*r).clone()),
                (TermKind::Oracle(_), [r]) if is_nf(r) && closed(r) => contract(t),
                _ => None,
            };
        }
        if let Some(v) = self.red_n(n - 1, t) {
            return Some(v);
        }
        let (head, args) = t.spine();
        if let (TermKind::S, [r, s, u]) = (head.kind(), args.as_slice()) {
            if is_nf(r) && is_nf(s) && is_nf(u) {
                let x = self.red_n(n - 1, &Term::app((*r).clone(), (*u).clone()))?;
                let y = self.red_n(n - 1, &Term::app((*s).clone(), (*u).clone()))?;
                return self.red_n(n - 1, &Term::app(x, y));
            }
        }
        let (l, r) = match t.kind() {
            TermKind::App(l, r) => (l.clone(), r.clone()),
            _ => return None,
        };
        let x = self.red_n(n - 1, &l)?;
        let y = self.red_n(n - 1, &r)?;
        self.red_n(n - 1, &Term::app(x, y))
    }

    /// Least stage `≤ max` at which `t` is defined, with its value.
    pub fn least(&mut self, t: &Term, max: u32) -> Option<(u32, Term)> {
        (0..=max).find_map(|n| self.red_n(n, t).map(|v| (n, v)))
    }
}

/// One leftmost-innermost rewriting step.
pub fn step(t: &Term) -> Option<Term> {
    match t.kind() {
        TermKind::App(l, r) => {
            if let Some(l2) = step(l) {
                return Some(Term::app(l2, r.clone()));
            }
            if let Some(r2) = step(r) {
                return Some(Term::app(l.clone(), r2));
            }
            contract(t)
        }
        _ => None,
    }
}

/// Terms beyond this many nodes count as divergent.
pub const NAIVE_SIZE_LIMIT: u64 = 20_000;

/// Small-step leftmost-innermost normalisation with a step limit.
pub fn naive_normalise(t: &Term, limit: u64) -> Option<Term> {
    let mut t = t.clone();
    for _ in 0..limit {
        if t.size() > NAIVE_SIZE_LIMIT {
            return None;
        }
        match step(&t) {
            Some(next) => t = next,
            None => return Some(t),
        }
    }
    None
}

/// A three-valued answer: `None` when the step limit was hit.
pub type Tri = Option<bool>;

fn tri_and(items: impl IntoIterator<Item = Tri>) -> Tri {
    let mut unknown = false;
    for v in items {
        match v {
            Some(false) => return Some(false),
            None => unknown = true,
            Some(true) => {}
        }
    }
    if unknown {
        None
    } else {
        Some(true)
    }
}

fn tri_or(items: impl IntoIterator<Item = Tri>) -> Tri {
    let mut unknown = false;
    for v in items {
        match v {
            Some(true) => return Some(true),
            None => unknown = true,
            Some(false) => {}
        }
    }
    if unknown {
        None
    } else {
        Some(false)
    }
}

/// The clauses of `⊩` on `V(𝒜)`, expanded by brute force over finite sets,
/// with application by [`naive_normalise`].
pub struct Expander {
    pub limit: u64,
}

impl Expander {
    fn app(&self, a: &Term, b: &Term) -> Option<Term> {
        naive_normalise(&Term::app(a.clone(), b.clone()), self.limit)
    }

    fn proj(&self, e: &Term, i: usize) -> Option<Term> {
        let env = std_env();
        let which = if i == 0 { &env.p0 } else { &env.p1 };
        self.app(which, e)
    }

    pub fn mem(&self, e: &Term, a: &RSet, b: &RSet) -> Tri {
        let (e0, e1) = match (self.proj(e, 0), self.proj(e, 1)) {
            (Some(x), Some(y)) => (x, y),
            _ => return None,
        };
        tri_or(b.elements().filter(|(k, _)| *k == e0).map(|(_, c)| self.eq(&e1, a, c)))
    }

    pub fn eq(&self, e: &Term, a: &RSet, b: &RSet) -> Tri {
        let left = || -> Tri {
            if a.is_empty() {
                return Some(true);
            }
            let e0 = self.proj(e, 0)?;
            tri_and(a.elements().map(|(f, c)| self.app(&e0, f).map_or(None, |x| self.mem(&x, c, b))))
        };
        let right = || -> Tri {
            if b.is_empty() {
                return Some(true);
            }
            let e1 = self.proj(e, 1)?;
            tri_and(b.elements().map(|(f, c)| self.app(&e1, f).map_or(None, |x| self.mem(&x, c, a))))
        };
        tri_and([left(), right()])
    }

    fn resolve(r: &SetRef<RSet>, env: &[RSet]) -> RSet {
        match r {
            SetRef::Param(a) => a.clone(),
            SetRef::Bound(i) => env[env.len() - 1 - *i as usize].clone(),
            SetRef::Pair(a, b) => ordered_pair(&Self::resolve(a, env), &Self::resolve(b, env)),
        }
    }

    pub fn formula(&self, e: &Term, phi: &Formula<RSet>, env: &mut Vec<RSet>) -> Tri {
        match phi {
            Formula::Mem(a, b) => self.mem(e, &Self::resolve(a, env), &Self::resolve(b, env)),
            Formula::Eq(a, b) => self.eq(e, &Self::resolve(a, env), &Self::resolve(b, env)),
            Formula::And(x, y) => {
                let (e0, e1) = (self.proj(e, 0)?, self.proj(e, 1)?);
                tri_and([self.formula(&e0, x, env), self.formula(&e1, y, env)])
            }
            Formula::Or(x, y) => {
                let (e0, e1) = (self.proj(e, 0)?, self.proj(e, 1)?);
                if e0 == numeral(0) {
                    self.formula(&e1, x, env)
                } else if e0 == numeral(1) {
                    self.formula(&e1, y, env)
                } else {
                    Some(false)
                }
            }
            Formula::BoundedExists(a, body) => {
                let a = Self::resolve(a, env);
                let (e0, e1) = (self.proj(e, 0)?, self.proj(e, 1)?);
                tri_or(a.elements().filter(|(k, _)| *k == e0).map(|(_, b)| {
                    env.push(b.clone());
                    let v = self.formula(&e1, body, env);
                    env.pop();
                    v
                }))
            }
            Formula::BoundedForall(a, body) => {
                let a = Self::resolve(a, env);
                tri_and(a.elements().map(|(f, b)| {
                    let ef = self.app(e, f)?;
                    env.push(b.clone());
                    let v = self.formula(&ef, body, env);
                    env.pop();
                    v
                }))
            }
            _ => panic!("expander covers the decidable fragment only"),
        }
    }
}
