//! The halting gadgets: stage machines `u`, the fixed point `v`, `t`, `t′`,
//! the stage indicator `g` and the probe family `f`, all over a pluggable
//! halting profile. Also bounded type 1 and type 2 identity probes and the
//! atom preservation experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::reduce::{Engine, ReductionOutcome};
use crate::stdlib::{case_table, lam, numeral, numeral_value, std_env};
use crate::term::{Perm, Term};

/// The stage predicate "machine `m` halts by stage `k`". Must be monotone
/// in `k`.
pub trait HaltingProfile: fmt::Debug {
    fn halts_by(&self, m: u64, k: u64) -> bool;

    /// True when the profile knows machine `m` never halts, so stages past
    /// any horizon are settled.
    fn never_halts(&self, _m: u64) -> bool {
        false
    }
}

/// The built-in profiles, written `halts@k` and `never`. Every machine
/// index behaves the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    HaltsAt(u64),
    Never,
}

impl HaltingProfile for Profile {
    fn halts_by(&self, _m: u64, k: u64) -> bool {
        match *self {
            Profile::HaltsAt(k0) => k >= k0,
            Profile::Never => false,
        }
    }

    fn never_halts(&self, _m: u64) -> bool {
        matches!(self, Profile::Never)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::HaltsAt(k) => write!(f, "halts@{k}"),
            Profile::Never => f.write_str("never"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad profile {0:?}: expected halts@K or never")]
pub struct ProfileError(pub String);

impl FromStr for Profile {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "never" {
            return Ok(Profile::Never);
        }
        s.strip_prefix("halts@")
            .and_then(|k| k.parse().ok())
            .map(Profile::HaltsAt)
            .ok_or_else(|| ProfileError(s.to_string()))
    }
}

/// How the stage table was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// First halting stage.
    HaltsAt(u64),
    /// Never halts.
    Never,
    /// Not halted by the horizon; later stages are unknown.
    NotBy(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("stage {stage} is past the horizon {horizon} and the profile is unsettled there")]
    StageBeyondHorizon { stage: u64, horizon: u64 },
    #[error("atom index must be at least 1")]
    ZeroAtom,
    #[error("F({n}) = F'({n}) = {value}: the two oracles must differ at the atom")]
    SameValueAtAtom { n: u32, value: u32 },
    #[error("the oracle {0} already occurs in e")]
    OracleInSubject(Perm),
    #[error("probe {index} is not type 1: {report}")]
    ProbeNotTypeOne { index: usize, report: Box<ProbeReport> },
}

/// A machine index fixed against a profile, with the stage table padded to
/// `horizon`.
#[derive(Debug, Clone, Copy)]
pub struct Gadgets<'a> {
    profile: &'a dyn HaltingProfile,
    pub m: u64,
    pub horizon: u64,
    pub threshold: Threshold,
}

pub const DEFAULT_HORIZON: u64 = 64;

impl<'a> Gadgets<'a> {
    pub fn new(profile: &'a dyn HaltingProfile, m: u64) -> Self {
        Self::with_horizon(profile, m, DEFAULT_HORIZON)
    }

    pub fn with_horizon(profile: &'a dyn HaltingProfile, m: u64, horizon: u64) -> Self {
        let threshold = match (0..=horizon).find(|&k| profile.halts_by(m, k)) {
            Some(k) => Threshold::HaltsAt(k),
            None if profile.never_halts(m) => Threshold::Never,
            None => Threshold::NotBy(horizon),
        };
        Gadgets { profile, m, horizon, threshold }
    }

    pub fn profile(&self) -> &'a dyn HaltingProfile {
        self.profile
    }

    /// Errors if stage `l` is not settled by the table.
    pub fn check_stage(&self, l: u64) -> Result<(), GadgetError> {
        match self.threshold {
            Threshold::NotBy(h) if l > h => Err(GadgetError::StageBeyondHorizon { stage: l, horizon: h }),
            _ => Ok(()),
        }
    }

    /// `h l̲ = 1̲` if halted by stage `l`, else `0̲`.
    pub fn stage_table(&self) -> Term {
        let table: BTreeMap<u64, u64> = match self.threshold {
            Threshold::HaltsAt(k) => (0..k).map(|l| (l, 0)).collect(),
            _ => BTreeMap::new(),
        };
        let default = u64::from(matches!(self.threshold, Threshold::HaltsAt(_)));
        case_table(&table, default)
    }

    /// `g l̲ = k (k 0̲)` before halting and `I` after.
    pub fn g(&self) -> Term {
        let env = std_env();
        let l = 0;
        let kk0 = Term::app(Term::k(), Term::app(Term::k(), numeral(0)));
        let body = Term::apply(env.p0.clone(), [Term::app(self.stage_table(), Term::var(l)), kk0, env.i.clone()]);
        lam(&[l], body)
    }

    /// `u k̲ = k I` once halted by stage `k`, else `λz. z (k+1)̲`.
    pub fn u(&self) -> Term {
        let env = std_env();
        let (k, z) = (0, 1);
        let next = lam(&[z], Term::app(Term::var(z), Term::app(env.succ.clone(), Term::var(k))));
        let halted = Term::app(Term::k(), env.i.clone());
        let body = Term::apply(env.p0.clone(), [Term::app(self.stage_table(), Term::var(k)), next, halted]);
        lam(&[k], body)
    }

    /// `w = λx. λy. u y (x x)`.
    pub fn w(&self) -> Term {
        let (x, y) = (0, 1);
        let xx = Term::app(Term::var(x), Term::var(x));
        lam(&[x, y], Term::apply(self.u(), [Term::var(y), xx]))
    }

    /// `v = w w`, reduced once.
    pub fn v(&self) -> Term {
        let w = self.w();
        Engine::default()
            .red(&Term::app(w.clone(), w), 1_000)
            .into_value()
            .expect("w w is a single S-step from normal")
    }

    /// `t = s (k v) (k 0̲)`.
    pub fn t(&self) -> Term {
        Term::apply(Term::s(), [Term::app(Term::k(), self.v()), Term::app(Term::k(), numeral(0))])
    }

    /// `t′(x) = s (s t (k x)) (k ξ_n)` with `x` as variable 0.
    pub fn t_prime(&self, n: u32) -> Result<Term, GadgetError> {
        if n == 0 {
            return Err(GadgetError::ZeroAtom);
        }
        let inner = Term::apply(Term::s(), [self.t(), Term::app(Term::k(), Term::var(0))]);
        Ok(Term::apply(Term::s(), [inner, Term::app(Term::k(), Term::atom(n))]))
    }

    /// `t′(ζ_F)`.
    pub fn t_prime_at(&self, n: u32, f: &Perm) -> Result<Term, GadgetError> {
        Ok(self.t_prime(n)?.substitute(0, &Term::oracle(f.clone())))
    }

    /// `f(ζ_F) = s (s g (k t′(ζ_F))) I`.
    pub fn f(&self, n: u32, oracle: &Perm) -> Result<Term, GadgetError> {
        let tp = self.t_prime_at(n, oracle)?;
        let inner = Term::apply(Term::s(), [self.g(), Term::app(Term::k(), tp)]);
        Ok(Term::apply(Term::s(), [inner, std_env().i.clone()]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeVerdict {
    ConsistentUpTo,
    CounterexampleAt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Index into the probe list, for type 2 probes.
    pub probe: Option<usize>,
    pub input: u64,
    pub outcome: ReductionOutcome,
    /// What the outcome should have been, when it was defined.
    pub expected: Option<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub subject: Term,
    pub verdict: ProbeVerdict,
    /// Largest input checked without a failure.
    pub bound: u64,
    pub budget: u32,
    pub witness: Option<Witness>,
}

impl ProbeReport {
    pub fn is_consistent(&self) -> bool {
        self.verdict == ProbeVerdict::ConsistentUpTo
    }

    fn consistent(subject: &Term, bound: u64, budget: u32) -> ProbeReport {
        ProbeReport { subject: subject.clone(), verdict: ProbeVerdict::ConsistentUpTo, bound, budget, witness: None }
    }

    fn counterexample(subject: &Term, budget: u32, witness: Witness) -> ProbeReport {
        let bound = witness.input.saturating_sub(1);
        ProbeReport { subject: subject.clone(), verdict: ProbeVerdict::CounterexampleAt, bound, budget, witness: Some(witness) }
    }
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.verdict, &self.witness) {
            (ProbeVerdict::ConsistentUpTo, _) | (_, None) => {
                write!(f, "CONSISTENT-UP-TO {} (cap={})", self.bound, self.budget)
            }
            (ProbeVerdict::CounterexampleAt, Some(w)) => {
                write!(f, "COUNTEREXAMPLE-AT {}", w.input)?;
                if let Some(p) = w.probe {
                    write!(f, " probe={p}")?;
                }
                write!(f, " got {}", w.outcome)?;
                if let Some(e) = &w.expected {
                    write!(f, " expected {e}")?;
                }
                write!(f, " (cap={})", self.budget)
            }
        }
    }
}

/// Checks `t n̲` reduces to a numeral for each `n ≤ bound`.
pub fn probe_type1(t: &Term, bound: u64, cap: u32) -> ProbeReport {
    let engine = Engine::default();
    for n in 0..=bound {
        let out = engine.red(&Term::app(t.clone(), numeral(n)), cap);
        if out.value().and_then(numeral_value).is_none() {
            return ProbeReport::counterexample(t, cap, Witness { probe: None, input: n, outcome: out, expected: None });
        }
    }
    ProbeReport::consistent(t, bound, cap)
}

/// Checks `(e f) n̲ = f n̲` for every probe `f` and `n ≤ bound`. The probes
/// must pass [`probe_type1`] first.
pub fn probe_type2_identity(e: &Term, probes: &[Term], bound: u64, cap: u32) -> Result<ProbeReport, GadgetError> {
    for (index, f) in probes.iter().enumerate() {
        let report = probe_type1(f, bound, cap);
        if !report.is_consistent() {
            return Err(GadgetError::ProbeNotTypeOne { index, report: Box::new(report) });
        }
    }
    let engine = Engine::default();
    for n in 0..=bound {
        for (index, f) in probes.iter().enumerate() {
            let expected = engine.red(&Term::app(f.clone(), numeral(n)), cap).into_value();
            let out = engine.red(&Term::apply(e.clone(), [f.clone(), numeral(n)]), cap);
            if out.value() != expected.as_ref() {
                let witness = Witness { probe: Some(index), input: n, outcome: out, expected };
                return Ok(ProbeReport::counterexample(e, cap, witness));
            }
        }
    }
    Ok(ProbeReport::consistent(e, bound, cap))
}

/// The three facts the atom preservation argument splits on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomReport {
    /// `RED(e f(ζ_F))`.
    pub value: ReductionOutcome,
    /// `RED(e f(ζ_F′))`.
    pub value_prime: ReductionOutcome,
    pub atom: u32,
    pub atom_present: bool,
    pub variants_equal: bool,
    /// Atoms of the value above every atom of `e`.
    pub new_atoms: Vec<u32>,
}

impl AtomReport {
    pub fn reduced(&self) -> bool {
        self.value.is_reduced()
    }
}

impl fmt::Display for AtomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reduced: {}", self.reduced())?;
        writeln!(f, "value: {}", self.value)?;
        writeln!(f, "value': {}", self.value_prime)?;
        writeln!(f, "atom {} present: {}", self.atom, self.atom_present)?;
        writeln!(f, "variants equal: {}", self.variants_equal)?;
        let atoms: Vec<String> = self.new_atoms.iter().map(u32::to_string).collect();
        write!(f, "new atoms: {{{}}}", atoms.join(","))
    }
}

/// Reduces `e f(ζ_F)` and `e f(ζ_F′)` and inspects the atom `ξ_n`.
pub fn atom_preservation_probe(
    e: &Term,
    gadgets: &Gadgets<'_>,
    n: u32,
    oracle: &Perm,
    oracle_prime: &Perm,
    cap: u32,
) -> Result<AtomReport, GadgetError> {
    if n == 0 {
        return Err(GadgetError::ZeroAtom);
    }
    if oracle.apply(n) == oracle_prime.apply(n) {
        return Err(GadgetError::SameValueAtAtom { n, value: oracle.apply(n) });
    }
    let in_e = e.oracles();
    for p in [oracle, oracle_prime] {
        if in_e.contains(p) {
            return Err(GadgetError::OracleInSubject(p.clone()));
        }
    }
    let engine = Engine::default();
    let value = engine.red(&Term::app(e.clone(), gadgets.f(n, oracle)?), cap);
    let value_prime = engine.red(&Term::app(e.clone(), gadgets.f(n, oracle_prime)?), cap);
    let floor = e.atoms().iter().copied().max().unwrap_or(0);
    let (atom_present, new_atoms) = match value.value() {
        Some(v) => (v.contains_atom(n), v.atoms().iter().copied().filter(|&i| i > floor).collect()),
        None => (false, Vec::new()),
    };
    let variants_equal = value.is_reduced() && value == value_prime;
    Ok(AtomReport { value, value_prime, atom: n, atom_present, variants_equal, new_atoms })
}
