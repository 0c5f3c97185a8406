//! The equality realizers `i_r`, `i_s`, `i_t`, `i_0`, `i_1` and the
//! realizer of the injective-presentation lemma.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::check::check;
use super::formula::{Formula, Verdict};
use super::rset::{canonical_numeral, RSet};
use crate::reduce::Engine;
use crate::stdlib::{case_table, fixpoint_yp, fst, identity, lam, numeral, pair, snd};
use crate::term::Term;

const BUILD_CAP: u32 = 10_000;

#[derive(Debug, Clone)]
pub struct EqualityRealizers {
    /// `((i_r)_j f)_0 = f` and `((i_r)_j f)_1 = i_r` for `j = 0, 1`.
    pub ir: Term,
    /// `λe. p (e)₁ (e)₀`.
    pub is: Term,
    /// Composes two equality realizers by recursion on rank.
    pub it: Term,
    /// `λe f. p (f)₀ (i_t e (f)₁)`.
    pub i0: Term,
    /// `λe f. p ((e)₀(f)₀)₀ (i_t (f)₁ ((e)₀(f)₀)₁)`.
    pub i1: Term,
}

fn x(i: u32) -> Term {
    Term::var(i)
}

fn ap(f: Term, a: Term) -> Term {
    Term::app(f, a)
}

fn eval(t: Term) -> Term {
    Engine::default()
        .red(&t, BUILD_CAP)
        .into_value()
        .unwrap_or_else(|| panic!("realizer construction {t} did not reduce"))
}

fn build() -> EqualityRealizers {
    let yp = fixpoint_yp();

    // i_r = y′ G I with G = λr d. p (λf. p f (r I)) (λf. p f (r I)).
    let (r, d, f) = (0, 1, 2);
    let half = lam(&[f], pair(x(f), ap(x(r), identity())));
    let g = lam(&[r, d], pair(half.clone(), half));
    let ir = eval(Term::apply(yp.clone(), [g, identity()]));

    let e = 0;
    let is = lam(&[e], pair(snd(x(e)), fst(x(e))));

    // i_t = y′ (λt f g. p (λh. p (k₀)₀ (t (j₀)₁ (k₀)₁)) (λh. p (k₁)₀ (t (j₁)₁ (k₁)₁)))
    // with j₀ = (f)₀ h, k₀ = (g)₀ (j₀)₀, j₁ = (g)₁ h, k₁ = (f)₁ (j₁)₀.
    let (t, f, g, h) = (0, 1, 2, 3);
    let j0 = ap(fst(x(f)), x(h));
    let k0 = ap(fst(x(g)), fst(j0.clone()));
    let left = lam(&[h], pair(fst(k0.clone()), Term::apply(x(t), [snd(j0), snd(k0)])));
    let j1 = ap(snd(x(g)), x(h));
    let k1 = ap(snd(x(f)), fst(j1.clone()));
    let right = lam(&[h], pair(fst(k1.clone()), Term::apply(x(t), [snd(j1), snd(k1)])));
    let it = eval(ap(yp, lam(&[t, f, g], pair(left, right))));

    let (e, f) = (0, 1);
    let i0 = lam(&[e, f], pair(fst(x(f)), Term::apply(it.clone(), [x(e), snd(x(f))])));
    let m = ap(fst(x(e)), fst(x(f)));
    let i1 = lam(&[e, f], pair(fst(m.clone()), Term::apply(it.clone(), [snd(x(f)), snd(m)])));

    EqualityRealizers { ir, is, it, i0, i1 }
}

pub fn equality_realizers() -> &'static EqualityRealizers {
    static R: OnceLock<EqualityRealizers> = OnceLock::new();
    R.get_or_init(build)
}

/// `λx y. i_t ((x)₁ y)₁ (i_s ((x)₁ y)₁)`.
pub fn iplemma_realizer() -> Term {
    static E: OnceLock<Term> = OnceLock::new();
    E.get_or_init(|| {
        let r = equality_realizers();
        let (xv, yv) = (0, 1);
        let w = snd(ap(snd(x(xv)), x(yv)));
        lam(&[xv, yv], Term::apply(r.it.clone(), [w.clone(), ap(r.is.clone(), w)]))
    })
    .clone()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IpLemmaError {
    #[error("a is not injectively presented")]
    NotInjectivelyPresented,
    #[error("f does not realize a = b (verdict {0})")]
    NotAnEqualityRealizer(Verdict),
    #[error("b has fewer than two members with key {0}")]
    NoSharedKey(Term),
}

/// Checks `e f g ⊩ c = c′` for every pair of distinct children `c`, `c′`
/// that `b` stores under `g`.
pub fn iplemma_check(a: &RSet, b: &RSet, f: &Term, g: &Term, cap: u32) -> Result<Verdict, IpLemmaError> {
    if !a.is_injectively_presented() {
        return Err(IpLemmaError::NotInjectivelyPresented);
    }
    let pre = check(f, &Formula::eq(a.clone(), b.clone()), cap);
    if !pre.is_realized() {
        return Err(IpLemmaError::NotAnEqualityRealizer(pre));
    }
    let children: Vec<&RSet> = b.children_of(g).collect();
    if children.len() < 2 {
        return Err(IpLemmaError::NoSharedKey(g.clone()));
    }
    let efg = match Engine::default().red(&Term::apply(iplemma_realizer(), [f.clone(), g.clone()]), cap).into_value() {
        Some(v) => v,
        None => {
            return Ok(Verdict::Unknown {
                reason: super::formula::UnknownReason::Budget,
                bounds: super::formula::Bounds { cap, ..Default::default() },
            })
        }
    };
    let mut verdicts = Vec::new();
    for (i, c) in children.iter().enumerate() {
        for c2 in &children[i + 1..] {
            verdicts.push(check(&efg, &Formula::eq((*c).clone(), (*c2).clone()), cap));
        }
    }
    Ok(Verdict::all(verdicts))
}

/// A hand-built instance of the lemma's hypotheses.
#[derive(Debug, Clone)]
pub struct IpInstance {
    pub a: RSet,
    pub b: RSet,
    pub f: Term,
    pub g: Term,
}

/// `a = n̄` and `b = n̄ ∪ {⟨j̲, j̄ ∪ {⟨P̲, r̄⟩}⟩}`, so that `b` stores two
/// distinct children under `j̲`. Requires `r < j < n < P`.
///
/// The equality realizer is `f = p (λk. p k i_r) (λk. p k q)` where
/// `q = p (λk. p (h k) i_r) (λk. p k i_r)` and `h` is the identity below
/// `n` and sends `P` to `r`.
pub fn padded_instance(n: u64, j: u64, r: u64, pad: u64) -> IpInstance {
    assert!(r < j && j < n && n < pad, "need r < j < n < pad");
    let ir = equality_realizers().ir.clone();
    let padded = canonical_numeral(j).with(numeral(pad), canonical_numeral(r));
    let a = canonical_numeral(n);
    let b = a.with(numeral(j), padded);

    let mut table: BTreeMap<u64, u64> = (0..n).map(|i| (i, i)).collect();
    table.insert(pad, r);
    let h = case_table(&table, 0);
    let k = 0;
    let q = pair(lam(&[k], pair(ap(h, x(k)), ir.clone())), lam(&[k], pair(x(k), ir.clone())));
    let q = eval(q);
    let f = pair(lam(&[k], pair(x(k), ir)), lam(&[k], pair(x(k), q)));
    IpInstance { a, b, f: eval(f), g: numeral(j) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::red;
    use crate::stdlib::std_env;
    use crate::term::parse;

    const CAP: u32 = 100_000;

    fn value(term: Term) -> Term {
        red(&term, CAP).into_value().expect("defined")
    }

    #[test]
    fn reflexivity_equations() {
        let r = equality_realizers();
        for f in ["K", "a3", "S K", "#2"] {
            let f = parse(f).unwrap();
            for proj in [fst(r.ir.clone()), snd(r.ir.clone())] {
                let h = ap(value(proj), f.clone());
                assert_eq!(value(fst(h.clone())), f);
                assert_eq!(value(snd(h)), r.ir);
            }
        }
    }

    #[test]
    fn realizers_are_closed_sk_normal_forms() {
        let r = equality_realizers();
        for t in [&r.ir, &r.is, &r.it, &r.i0, &r.i1] {
            assert!(t.is_normal() && t.is_closed() && t.atoms().is_empty() && !t.has_oracle());
        }
        assert!(iplemma_realizer().is_normal());
    }

    #[test]
    fn reflexivity_on_numerals() {
        let ir = &equality_realizers().ir;
        for n in 0..4 {
            let a = canonical_numeral(n);
            assert_eq!(check(ir, &Formula::eq(a.clone(), a), CAP), Verdict::Realized);
        }
    }

    #[test]
    fn symmetry_and_transitivity() {
        let r = equality_realizers();
        let inst = padded_instance(3, 1, 0, 9);
        let (a, b) = (inst.a.clone(), inst.b.clone());
        assert!(check(&inst.f, &Formula::eq(a.clone(), b.clone()), CAP).is_realized());
        let sym = value(ap(r.is.clone(), inst.f.clone()));
        assert!(check(&sym, &Formula::eq(b.clone(), a.clone()), CAP).is_realized());
        let trans = value(Term::apply(r.it.clone(), [inst.f.clone(), sym]));
        assert!(check(&trans, &Formula::eq(a.clone(), a), CAP).is_realized());
    }

    #[test]
    fn membership_transport() {
        let r = equality_realizers();
        let inst = padded_instance(3, 2, 1, 7);
        // f ⊩ a = b and p #1 i_r ⊩ 1̄ ∈ a, so i_1 f (p #1 i_r) ⊩ 1̄ ∈ b.
        let m = value(pair(numeral(1), r.ir.clone()));
        assert!(check(&m, &Formula::mem(canonical_numeral(1), inst.a.clone()), CAP).is_realized());
        let moved = value(Term::apply(r.i1.clone(), [inst.f.clone(), m.clone()]));
        assert!(check(&moved, &Formula::mem(canonical_numeral(1), inst.b.clone()), CAP).is_realized());
        // i_r ⊩ 1̄ = 1̄ and m ⊩ 1̄ ∈ a, so i_0 i_r m ⊩ 1̄ ∈ a.
        let moved = value(Term::apply(r.i0.clone(), [r.ir.clone(), m]));
        assert!(check(&moved, &Formula::mem(canonical_numeral(1), inst.a), CAP).is_realized());
    }

    #[test]
    fn iplemma_examples() {
        for (n, j, r, pad) in [(2, 1, 0, 5), (3, 2, 0, 8), (4, 3, 2, 11)] {
            let inst = padded_instance(n, j, r, pad);
            assert_eq!(iplemma_check(&inst.a, &inst.b, &inst.f, &inst.g, CAP), Ok(Verdict::Realized));
        }
        let inst = padded_instance(2, 1, 0, 5);
        let err = iplemma_check(&inst.a, &inst.b, &inst.f, &numeral(0), CAP);
        assert!(matches!(err, Err(IpLemmaError::NoSharedKey(_))));
        let err = iplemma_check(&inst.b, &inst.a, &inst.f, &inst.g, CAP);
        assert_eq!(err.unwrap_err(), IpLemmaError::NotInjectivelyPresented);
        let err = iplemma_check(&inst.a, &inst.b, &std_env().tru, &inst.g, CAP);
        assert!(matches!(err, Err(IpLemmaError::NotAnEqualityRealizer(_))));
    }
}
