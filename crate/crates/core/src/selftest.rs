//! Fixed-seed invariant suites behind `pca-forge selftest`.

use std::fmt;

use crate::gadgets::{probe_type1, Gadgets, HaltingProfile, Profile};
use crate::gen::Gen;
use crate::realize::{
    build_rn, check, check0_gamma, check0_ip, equality_realizers, iplemma_check, padded_instance, Formula,
    RnConfig, Verdict,
};
use crate::reduce::{red, ReductionOutcome};
use crate::stdlib::{compile_primrec, fixpoint_y, fixpoint_yp, lam, numeral, numeral_value, pair, std_env, PRFun};
use crate::term::{Perm, Term};

pub const SUITES: [&str; 6] = ["pca", "reduce", "equivariance", "stdlib", "gadgets", "realize"];

/// Deliberate faults for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The k-law check expects `K r s` to give `s`.
    KLaw,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub suites: Vec<String>,
    pub profile: Profile,
    pub seed: u64,
    pub cases: usize,
    pub fault: Option<Fault>,
}

impl Default for Options {
    fn default() -> Self {
        Options { suites: Vec::new(), profile: Profile::HaltsAt(3), seed: 0x5eed, cases: 200, fault: None }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: PASS ({} cases)", self.name, self.cases)
        } else {
            write!(f, "{}: FAIL ({} of {} cases; first: {})", self.name, self.failures.len(), self.cases, self.failures[0])
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown suite {0:?}; expected one of pca, reduce, equivariance, stdlib, gadgets, realize")]
pub struct UnknownSuite(pub String);

struct Tally {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn done(self) -> SuiteResult {
        SuiteResult { name: self.name, cases: self.cases, failures: self.failures }
    }
}

const CAP: u32 = 10_000;

/// `a ≃ b`: equal values if both reduce at `cap`; if only one does, the
/// other gets a larger cap before a mismatch is reported.
pub fn kleene_agree(a: &Term, b: &Term, cap: u32) -> bool {
    let (ra, rb) = (red(a, cap), red(b, cap));
    match (ra.value(), rb.value()) {
        (Some(x), Some(y)) => x == y,
        (None, None) => true,
        (Some(x), None) => red(b, cap.saturating_mul(4)).value() == Some(x),
        (None, Some(y)) => red(a, cap.saturating_mul(4)).value() == Some(y),
    }
}

pub fn run(opts: &Options) -> Result<Vec<SuiteResult>, UnknownSuite> {
    let chosen: Vec<&'static str> = if opts.suites.is_empty() {
        SUITES.to_vec()
    } else {
        opts.suites
            .iter()
            .map(|s| SUITES.iter().copied().find(|n| n == s).ok_or_else(|| UnknownSuite(s.clone())))
            .collect::<Result<_, _>>()?
    };
    Ok(chosen
        .into_iter()
        .map(|name| match name {
            "pca" => pca(opts),
            "reduce" => reduce(opts),
            "equivariance" => equivariance(opts),
            "stdlib" => stdlib(opts),
            "gadgets" => gadgets(opts),
            _ => realize(opts),
        })
        .collect())
}

fn pca(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("pca");
    let mut g = Gen::new(opts.seed);
    for _ in 0..opts.cases {
        let (r, s, u) = (g.normal(6), g.normal(6), g.normal(6));
        let k = red(&Term::apply(Term::k(), [r.clone(), s.clone()]), CAP);
        let want = if opts.fault == Some(Fault::KLaw) { &s } else { &r };
        t.check(k.value() == Some(want), || format!("K ({r}) ({s}) gave {k}"));
        let lhs = Term::apply(Term::s(), [r.clone(), s.clone(), u.clone()]);
        let rhs = Term::apply(r.clone(), [u.clone(), Term::app(s.clone(), u.clone())]);
        t.check(kleene_agree(&lhs, &rhs, CAP), || format!("S-law fails on {r}, {s}, {u}"));
        let partial = [Term::app(Term::s(), r.clone()), Term::apply(Term::s(), [r.clone(), s.clone()]), Term::app(Term::k(), r)];
        t.check(partial.iter().all(|p| red(p, CAP).is_reduced()), || "partial application undefined".into());
    }
    t.done()
}

fn reduce(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("reduce");
    let mut g = Gen::new(opts.seed ^ 1);
    for _ in 0..opts.cases {
        let term = g.term(14);
        let outs: Vec<ReductionOutcome> = [100, 1_000, 10_000].iter().map(|&c| red(&term, c)).collect();
        let first = outs.iter().find(|o| o.is_reduced());
        let stable = first.map_or(true, |f| outs.iter().skip_while(|o| !o.is_reduced()).all(|o| o == f));
        t.check(stable, || format!("cap monotonicity fails on {term}"));
        t.check(red(&term, 1_000) == red(&term, 1_000), || format!("nondeterministic on {term}"));
    }
    t.done()
}

fn equivariance(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("equivariance");
    let mut g = Gen::new(opts.seed ^ 2);
    for _ in 0..opts.cases {
        let (p, term) = (g.perm(), g.term(12));
        let a = red(&term.permute(&p), CAP);
        let b = red(&term, CAP).map_value(|v| v.permute(&p));
        t.check(a == b, || format!("red and {p} do not commute on {term}"));
    }
    for (name, m) in std_env().members() {
        let p = Perm::swap(1, 2);
        t.check(m.permute(&p) == *m, || format!("${name} moved by {p}"));
    }
    t.done()
}

fn stdlib(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("stdlib");
    let mut g = Gen::new(opts.seed ^ 3);
    g.oracles = false;
    for _ in 0..opts.cases {
        let body = g.open_term(8, 2);
        let (r0, r1) = (g.normal(4), g.normal(4));
        let abstracted = Term::apply(lam(&[0, 1], body.clone()), [r0.clone(), r1.clone()]);
        let direct = body.substitute(0, &r0).substitute(1, &r1);
        t.check(kleene_agree(&abstracted, &direct, CAP), || format!("λ* disagrees on {body} at {r0}, {r1}"));
    }
    let (y, yp) = (fixpoint_y(), fixpoint_yp());
    for _ in 0..opts.cases / 4 {
        let (f, e) = (g.normal(5), g.normal(4));
        let yf = Term::app(y.clone(), f.clone());
        t.check(kleene_agree(&yf, &Term::app(f.clone(), yf.clone()), 2_000), || format!("y {f} ≄ {f} (y {f})"));
        let ypf = Term::app(yp.clone(), f.clone());
        t.check(red(&ypf, CAP).is_reduced(), || format!("y′ {f} undefined"));
        let lhs = Term::app(ypf.clone(), e.clone());
        let rhs = Term::apply(f.clone(), [ypf, e.clone()]);
        t.check(kleene_agree(&lhs, &rhs, CAP), || format!("y′ {f} {e} ≄ {f} (y′ {f}) {e}"));
    }
    for n in 0..20 {
        t.check(numeral_value(&numeral(n)) == Some(n), || format!("numeral {n} does not decode"));
    }
    let add = PRFun::add();
    match compile_primrec(&add) {
        Ok(term) => {
            for (a, b) in [(0, 0), (2, 3), (4, 1)] {
                let out = red(&Term::apply(term.clone(), [numeral(a), numeral(b)]), 100_000);
                t.check(out.value().and_then(numeral_value) == Some(a + b), || format!("add {a} {b} gave {out}"));
            }
        }
        Err(e) => t.check(false, || format!("add does not compile: {e}")),
    }
    t.done()
}

fn gadgets(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("gadgets");
    let profile = &opts.profile;
    let gs = Gadgets::new(profile, 0);
    let v0 = Term::app(gs.v(), numeral(0));
    if profile.never_halts(0) {
        for cap in [1_000, 10_000] {
            t.check(!red(&v0, cap).is_reduced(), || format!("v #0 reduced at cap {cap} under {profile}"));
        }
    } else {
        let out = red(&v0, 1_000_000);
        t.check(out.value() == Some(&std_env().i), || format!("v #0 gave {out} under {profile}"));
    }
    for n in [5u32, 9] {
        t.check(gs.t_prime(n).map(|tp| tp.atoms() == [n]).unwrap_or(false), || format!("t′ atoms wrong for {n}"));
        for oracle in [Perm::identity(), Perm::swap(n, n + 1)] {
            let f = match gs.f(n, &oracle) {
                Ok(f) => f,
                Err(e) => {
                    t.check(false, || e.to_string());
                    continue;
                }
            };
            for l in 0..=12u64 {
                let want = if profile.halts_by(0, l) { u64::from(oracle.apply(n)) } else { 0 };
                let out = red(&Term::app(f.clone(), numeral(l)), 100_000);
                t.check(out.value().and_then(numeral_value) == Some(want), || format!("f #{l} gave {out}, want #{want}"));
            }
            let report = probe_type1(&f, 12, 100_000);
            t.check(report.is_consistent(), || format!("f not type 1: {report}"));
        }
    }
    t.done()
}

fn realize(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("realize");
    let mut g = Gen::new(opts.seed ^ 4);
    let r = equality_realizers();
    let cases = opts.cases / 4;
    for _ in 0..cases {
        let a = g.rset(3, 2);
        let v = check(&r.ir, &Formula::eq(a.clone(), a.clone()), CAP);
        t.check(v.is_realized(), || format!("i_r does not realize {a} = {a}: {v}"));
    }
    let pool = realizer_pool();
    for _ in 0..cases {
        let params = [g.lrset(2, 2, 0.3), g.lrset(2, 2, 0.3)];
        let phi = g.formula(&params, 3, 0);
        let e = g.pick(&pool).clone();
        let v0 = check0_gamma(&e, &phi, CAP);
        let v1 = check(&e, &phi.map_params(&mut |a| a.project()), CAP);
        t.check(!v0.is_realized() || v1.is_realized(), || format!("⊩₀ without ⊩₁ for {e}"));

        let params = [g.ip_rset(2, 3), g.ip_rset(2, 3)];
        let phi = g.formula(&params, 3, 0);
        let same = check0_ip(&e, &phi, CAP).ok() == Some(check(&e, &phi, CAP));
        t.check(same, || format!("V_ip and V differ for {e}"));
    }
    for (n, j, rr, pad) in [(2, 1, 0, 5), (3, 2, 1, 6), (4, 2, 0, 9)] {
        let inst = padded_instance(n, j, rr, pad);
        let v = iplemma_check(&inst.a, &inst.b, &inst.f, &inst.g, 100_000);
        t.check(v == Ok(Verdict::Realized), || format!("iplemma instance {n},{j},{rr},{pad}: {v:?}"));
    }
    let probes = [std_env().succ.clone(), lam(&[0], Term::apply(Term::k(), [Term::var(0), Term::atom(6)]))];
    match build_rn(&probes, RnConfig { n: 3, graph_limit: 2, n_limit: 6, cap: 100_000 }) {
        Ok(rn) => {
            t.check(rn.part_three_holds(), || "R_N part three fails".into());
            let (v0, v1) = rn.validate_mvf();
            t.check(v0.is_realized() && v1.is_realized(), || format!("R_N realizer: {v0}, {v1}"));
        }
        Err(e) => t.check(false, || e.to_string()),
    }
    t.done()
}

/// Realizers worth trying against random formulas.
pub fn realizer_pool() -> Vec<Term> {
    let ir = equality_realizers().ir.clone();
    let mut pool = vec![Term::k(), Term::s(), ir.clone()];
    for k in 0..3 {
        pool.push(pair(numeral(k), ir.clone()));
        pool.push(pair(numeral(k), pair(numeral(k), ir.clone())));
    }
    pool.push(pair(ir.clone(), ir));
    pool
}
