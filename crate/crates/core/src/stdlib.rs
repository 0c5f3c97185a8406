//! Bracket abstraction and the closed `S`/`K` toolkit: booleans, pairing,
//! numerals, fixed points, and a compiler for primitive recursive functions.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::reduce::{self, Engine};
use crate::term::{Term, TermKind};

/// Stage cap used when the library evaluates its own closed constructions.
const BUILD_CAP: u32 = 10_000;

/// `λ*x.t`.
///
/// `λ*x.x = S K K`; `λ*x.t = K t` when `x` does not occur in `t` and `t` is a
/// variable or a closed normal form; otherwise `t = t1 t2` and
/// `λ*x.t = S (λ*x.t1) (λ*x.t2)`. Open applications are never placed under
/// `K`, so partial applications of nested abstractions stay defined.
pub fn bracket_abstract(var: u32, t: &Term) -> Term {
    if !t.has_var(var) {
        let inert = matches!(t.kind(), TermKind::Var(_)) || (t.is_closed() && t.is_normal());
        if inert {
            return Term::app(Term::k(), t.clone());
        }
    }
    match t.kind() {
        TermKind::Var(i) if *i == var => identity(),
        TermKind::App(l, r) => Term::apply(Term::s(), [bracket_abstract(var, l), bracket_abstract(var, r)]),
        // Leaves are variables (handled above) or closed normal constants.
        _ => Term::app(Term::k(), t.clone()),
    }
}

/// `λ*x1 x2 ... xn. t`.
pub fn lam(vars: &[u32], body: Term) -> Term {
    vars.iter().rev().fold(body, |acc, &v| bracket_abstract(v, &acc))
}

fn x(i: u32) -> Term {
    Term::var(i)
}

fn ap<const N: usize>(head: Term, args: [Term; N]) -> Term {
    Term::apply(head, args)
}

/// The value of a closed library term.
fn eval(t: Term) -> Term {
    match Engine::default().red(&t, BUILD_CAP) {
        reduce::ReductionOutcome::Reduced { value, .. } => value,
        other => panic!("library construction {t} did not reduce: {other}"),
    }
}

/// `S K K`.
pub fn identity() -> Term {
    static I: OnceLock<Term> = OnceLock::new();
    I.get_or_init(|| Term::apply(Term::s(), [Term::k(), Term::k()])).clone()
}

/// The named constants. Every member is a closed normal form built from
/// `S` and `K` only.
#[derive(Debug, Clone)]
pub struct StdEnv {
    pub i: Term,
    pub tru: Term,
    pub fls: Term,
    pub p: Term,
    pub p0: Term,
    pub p1: Term,
    pub y: Term,
    pub yp: Term,
    pub succ: Term,
    pub pred: Term,
    pub iszero: Term,
    pub eqnat: Term,
}

impl StdEnv {
    pub fn members(&self) -> [(&'static str, &Term); 12] {
        [
            ("I", &self.i),
            ("true", &self.tru),
            ("false", &self.fls),
            ("p", &self.p),
            ("p0", &self.p0),
            ("p1", &self.p1),
            ("y", &self.y),
            ("yp", &self.yp),
            ("succ", &self.succ),
            ("pred", &self.pred),
            ("iszero", &self.iszero),
            ("eqnat", &self.eqnat),
        ]
    }

    fn build() -> StdEnv {
        let i = identity();
        let tru = Term::k();
        let fls = lam(&[0, 1], x(1));
        let p = lam(&[0, 1, 2], ap(x(2), [x(0), x(1)]));
        let p0 = lam(&[0], ap(x(0), [tru.clone()]));
        let p1 = lam(&[0], ap(x(0), [fls.clone()]));

        // Curry's y: λf.(λx.f(xx))(λx.f(xx)).
        let half = lam(&[1], ap(x(0), [ap(x(1), [x(1)])]));
        let y = lam(&[0], ap(half.clone(), [half]));

        // y′ = λf.(λx.λe.f(xx)e)(λx.λe.f(xx)e); the inner λe delays xx.
        let half = lam(&[1, 2], ap(x(0), [ap(x(1), [x(1)]), x(2)]));
        let yp = lam(&[0], ap(half.clone(), [half]));

        let succ = lam(&[0], ap(p.clone(), [fls.clone(), x(0)]));
        let pred = p1.clone();
        let iszero = p0.clone();

        // eqnat = y′ (λr n m. iszero n (λd. iszero m) (λd. iszero m (λd. false) (λd. r (pred n) (pred m)) I) I)
        let (r, n, m, d) = (0, 1, 2, 3);
        let rec = ap(x(r), [ap(pred.clone(), [x(n)]), ap(pred.clone(), [x(m)])]);
        let nonzero = ap(
            iszero.clone(),
            [x(m), lam(&[d], fls.clone()), lam(&[d], rec), i.clone()],
        );
        let body = ap(
            iszero.clone(),
            [x(n), lam(&[d], ap(iszero.clone(), [x(m)])), lam(&[d], nonzero), i.clone()],
        );
        let eqnat = eval(ap(yp.clone(), [lam(&[r, n, m], body)]));

        StdEnv { i, tru, fls, p, p0, p1, y, yp, succ, pred, iszero, eqnat }
    }
}

pub fn std_env() -> &'static StdEnv {
    static ENV: OnceLock<StdEnv> = OnceLock::new();
    ENV.get_or_init(StdEnv::build)
}

/// Looks up `$name` sugar: the library members and the equality realizers.
pub fn named(name: &str) -> Option<Term> {
    let env = std_env();
    if let Some((_, t)) = env.members().into_iter().find(|(n, _)| *n == name) {
        return Some(t.clone());
    }
    crate::realize::named_realizer(name)
}

/// Every name accepted by [`named`].
pub fn names() -> Vec<&'static str> {
    let mut out: Vec<_> = std_env().members().iter().map(|(n, _)| *n).collect();
    out.extend(crate::realize::REALIZER_NAMES);
    out
}

/// `p a b`, unevaluated.
pub fn pair(a: Term, b: Term) -> Term {
    ap(std_env().p.clone(), [a, b])
}

/// `(e)₀`, unevaluated.
pub fn fst(e: Term) -> Term {
    ap(std_env().p0.clone(), [e])
}

/// `(e)₁`, unevaluated.
pub fn snd(e: Term) -> Term {
    ap(std_env().p1.clone(), [e])
}

/// The successor template `p false x0` in normal form; `(n+1)̲` is this
/// term with `n̲` in place of `x0`.
fn succ_template() -> &'static Term {
    static T: OnceLock<Term> = OnceLock::new();
    T.get_or_init(|| {
        let env = std_env();
        eval(ap(env.p.clone(), [env.fls.clone(), x(0)]))
    })
}

/// The numeral `n̲`: `0̲ = I`, `(n+1)̲ = p false n̲` in normal form.
pub fn numeral(n: u64) -> Term {
    static CACHE: OnceLock<Mutex<Vec<Term>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![identity()]));
    let mut v = cache.lock().unwrap_or_else(|e| e.into_inner());
    let n = usize::try_from(n).expect("numeral index fits in memory");
    while v.len() <= n {
        let next = succ_template().substitute(0, v.last().expect("cache is never empty"));
        v.push(next);
    }
    v[n].clone()
}

/// Matches `t` against `template`, returning what stands in place of `x0`.
fn match_hole<'a>(template: &Term, t: &'a Term) -> Option<&'a Term> {
    let mut hole = None;
    let mut stack = vec![(template, t)];
    while let Some((pat, t)) = stack.pop() {
        match (pat.kind(), t.kind()) {
            (TermKind::Var(0), _) => match hole {
                Some(h) if h != t => return None,
                _ => hole = Some(t),
            },
            (TermKind::App(a, b), TermKind::App(c, d)) => {
                stack.push((a, c));
                stack.push((b, d));
            }
            _ if pat == t => {}
            _ => return None,
        }
    }
    hole
}

/// Inverse of [`numeral`]; `None` for terms that are not numerals.
pub fn numeral_value(t: &Term) -> Option<u64> {
    if !t.is_closed() || !t.atoms().is_empty() || t.has_oracle() {
        return None;
    }
    let i = identity();
    let template = succ_template();
    let mut n = 0u64;
    let mut cur = t;
    loop {
        if *cur == i {
            return Some(n);
        }
        cur = match_hole(template, cur)?;
        n += 1;
    }
}

/// Curry's `y`. Under innermost evaluation `y f` is never defined, so
/// `y f ≃ f (y f)` holds only in the sense that both sides diverge.
pub fn fixpoint_y() -> Term {
    std_env().y.clone()
}

/// `y′`: `y′ f` is always defined and `y′ f e ≃ f (y′ f) e`.
pub fn fixpoint_yp() -> Term {
    std_env().yp.clone()
}

/// `λ*d. body` applied later to `I`; used to delay a branch.
fn thunk(d: u32, body: Term) -> Term {
    lam(&[d], body)
}

/// `c (λd.a) (λd.b) I`: evaluates only the selected branch.
fn branch(d: u32, cond: Term, then: Term, otherwise: Term) -> Term {
    ap(cond, [thunk(d, then), thunk(d, otherwise), identity()])
}

/// Primitive recursive function descriptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PRFun {
    /// The constant `0` of arity 0.
    Zero,
    Succ,
    /// `Proj { arity, index }` returns argument `index` (0-based).
    Proj { arity: usize, index: usize },
    Comp { outer: Box<PRFun>, inners: Vec<PRFun> },
    /// `f(0, xs) = base(xs)`, `f(n+1, xs) = step(n, f(n, xs), xs)`.
    PrimRec { base: Box<PRFun>, step: Box<PRFun> },
    /// Unary table lookup with a default.
    BoundedCase { table: BTreeMap<u64, u64>, default: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArityError {
    #[error("projection index {index} out of range for arity {arity}")]
    ProjectionOutOfRange { arity: usize, index: usize },
    #[error("outer function takes {expected} arguments but {found} were supplied")]
    OuterArity { expected: usize, found: usize },
    #[error("inner functions disagree on arity: {0} vs {1}")]
    InnerArity(usize, usize),
    #[error("recursion step has arity {found}, expected {expected}")]
    StepArity { expected: usize, found: usize },
}

impl PRFun {
    pub fn comp(outer: PRFun, inners: Vec<PRFun>) -> PRFun {
        PRFun::Comp { outer: Box::new(outer), inners }
    }

    pub fn primrec(base: PRFun, step: PRFun) -> PRFun {
        PRFun::PrimRec { base: Box::new(base), step: Box::new(step) }
    }

    pub fn case(table: impl IntoIterator<Item = (u64, u64)>, default: u64) -> PRFun {
        PRFun::BoundedCase { table: table.into_iter().collect(), default }
    }

    /// Addition, recursing on the first argument.
    pub fn add() -> PRFun {
        PRFun::primrec(
            PRFun::Proj { arity: 1, index: 0 },
            PRFun::comp(PRFun::Succ, vec![PRFun::Proj { arity: 3, index: 1 }]),
        )
    }

    pub fn arity(&self) -> Result<usize, ArityError> {
        match self {
            PRFun::Zero => Ok(0),
            PRFun::Succ | PRFun::BoundedCase { .. } => Ok(1),
            PRFun::Proj { arity, index } => {
                if index < arity {
                    Ok(*arity)
                } else {
                    Err(ArityError::ProjectionOutOfRange { arity: *arity, index: *index })
                }
            }
            PRFun::Comp { outer, inners } => {
                let expected = outer.arity()?;
                if expected != inners.len() {
                    return Err(ArityError::OuterArity { expected, found: inners.len() });
                }
                let mut arity = None;
                for g in inners {
                    let a = g.arity()?;
                    match arity {
                        Some(b) if a != b => return Err(ArityError::InnerArity(b, a)),
                        _ => arity = Some(a),
                    }
                }
                Ok(arity.unwrap_or(0))
            }
            PRFun::PrimRec { base, step } => {
                let k = base.arity()?;
                let found = step.arity()?;
                if found != k + 2 {
                    return Err(ArityError::StepArity { expected: k + 2, found });
                }
                Ok(k + 1)
            }
        }
    }

    /// Direct evaluation in the host.
    pub fn eval(&self, args: &[u64]) -> u64 {
        match self {
            PRFun::Zero => 0,
            PRFun::Succ => args[0] + 1,
            PRFun::Proj { index, .. } => args[*index],
            PRFun::Comp { outer, inners } => {
                let vals: Vec<u64> = inners.iter().map(|g| g.eval(args)).collect();
                outer.eval(&vals)
            }
            PRFun::PrimRec { base, step } => {
                let rest = &args[1..];
                let mut acc = base.eval(rest);
                for i in 0..args[0] {
                    let mut a = vec![i, acc];
                    a.extend_from_slice(rest);
                    acc = step.eval(&a);
                }
                acc
            }
            PRFun::BoundedCase { table, default } => *table.get(&args[0]).unwrap_or(default),
        }
    }
}

/// Compiles `f` to a closed `S`/`K` term `F` with
/// `F n̲1 ... n̲k ≃ f(n1, ..., nk)̲`.
pub fn compile_primrec(f: &PRFun) -> Result<Term, ArityError> {
    f.arity()?;
    Ok(compile(f))
}

fn compile(f: &PRFun) -> Term {
    let env = std_env();
    match f {
        PRFun::Zero => numeral(0),
        PRFun::Succ => env.succ.clone(),
        PRFun::Proj { arity, index } => {
            let vars: Vec<u32> = (0..*arity as u32).collect();
            lam(&vars, x(*index as u32))
        }
        PRFun::Comp { outer, inners } => {
            let h = compile(outer);
            if inners.is_empty() {
                return h;
            }
            let k = inners[0].arity().expect("checked") as u32;
            let vars: Vec<u32> = (0..k).collect();
            let args = inners.iter().map(|g| Term::apply(compile(g), vars.iter().map(|&v| x(v))));
            lam(&vars, Term::apply(h, args))
        }
        PRFun::PrimRec { base, step } => {
            let k = base.arity().expect("checked") as u32;
            // Variables: r = 0, n = 1, d = 2, xs = 3..3+k.
            let (r, n, d) = (0, 1, 2);
            let xs: Vec<Term> = (3..3 + k).map(x).collect();
            let pn = ap(env.pred.clone(), [x(n)]);
            let recur = Term::apply(ap(x(r), [pn.clone()]), xs.iter().cloned());
            let step_call = Term::apply(ap(compile(step), [pn, recur]), xs.iter().cloned());
            let base_call = Term::apply(compile(base), xs.iter().cloned());
            let body = branch(d, ap(env.iszero.clone(), [x(n)]), base_call, step_call);
            let mut vars = vec![r, n];
            vars.extend(3..3 + k);
            eval(ap(env.yp.clone(), [lam(&vars, body)]))
        }
        PRFun::BoundedCase { table, default } => case_table(table, *default),
    }
}

/// `λn.` a chain of `eqnat` tests over the table entries.
pub fn case_table(table: &BTreeMap<u64, u64>, default: u64) -> Term {
    let env = std_env();
    let (n, d) = (0, 1);
    let mut body = numeral(default);
    for (&key, &val) in table.iter().rev() {
        let cond = ap(env.eqnat.clone(), [x(n), numeral(key)]);
        body = branch(d, cond, numeral(val), body);
    }
    lam(&[n], body)
}
