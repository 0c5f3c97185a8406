//! Budgeted leftmost-innermost evaluation.
//!
//! `RED_0` handles normal forms, `K r s` with `r`, `s` normal and `ζ_F r`
//! with `r` closed and normal. `RED_{n+1}` extends `RED_n`, contracts
//! `S r s u` (all normal) as `RED_n(RED_n(r u) RED_n(s u))`, and otherwise
//! evaluates an application `r s` as `RED_n(RED_n(r) RED_n(s))`.
//!
//! Because the operators are monotone, the least stage at which a term is
//! defined satisfies
//!
//! ```text
//! stage(t) = 0                                  for the RED_0 cases
//! stage(t) = 1 + max(stage(x), stage(y), stage(X Y))
//! ```
//!
//! where `(x, y)` is `(r u, s u)` for an `S`-redex and `(r, s)` otherwise,
//! and `X`, `Y` are their values. [`eval`] computes exactly this with an
//! explicit stack, failing as soon as some sub-evaluation would need a stage
//! beyond its remaining budget.

use std::fmt;

use crate::stdlib;
use crate::term::{Term, TermKind};

/// Default cap on the number of evaluation frames a single reduction may
/// open. Independent of the stage cap; it bounds wall-clock time on terms
/// whose size explodes within a small number of stages.
pub const DEFAULT_FUEL: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhaustion {
    /// The least defining stage exceeds the cap.
    Stage,
    /// The work limit ran out before the stage was determined.
    Fuel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOutcome {
    /// `value` is `RED_stage(t)`, and `stage` is the least such index.
    Reduced { value: Term, stage: u32 },
    /// No stage `<= cap` was found. This never asserts divergence.
    BudgetExhausted { cap: u32, kind: Exhaustion },
}

impl ReductionOutcome {
    pub fn value(&self) -> Option<&Term> {
        match self {
            ReductionOutcome::Reduced { value, .. } => Some(value),
            ReductionOutcome::BudgetExhausted { .. } => None,
        }
    }

    pub fn into_value(self) -> Option<Term> {
        match self {
            ReductionOutcome::Reduced { value, .. } => Some(value),
            ReductionOutcome::BudgetExhausted { .. } => None,
        }
    }

    pub fn stage(&self) -> Option<u32> {
        match self {
            ReductionOutcome::Reduced { stage, .. } => Some(*stage),
            ReductionOutcome::BudgetExhausted { .. } => None,
        }
    }

    pub fn is_reduced(&self) -> bool {
        matches!(self, ReductionOutcome::Reduced { .. })
    }

    /// Applies `f` to the value, leaving stage and exhaustion untouched.
    pub fn map_value(self, f: impl FnOnce(Term) -> Term) -> ReductionOutcome {
        match self {
            ReductionOutcome::Reduced { value, stage } => ReductionOutcome::Reduced { value: f(value), stage },
            other => other,
        }
    }
}

impl fmt::Display for ReductionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionOutcome::Reduced { value, .. } => write!(f, "{value}"),
            ReductionOutcome::BudgetExhausted { cap, .. } => write!(f, "BUDGET-EXHAUSTED({cap})"),
        }
    }
}

/// Which defining clause produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `RED_0(t) = t` for a normal form.
    Normal,
    /// `RED_0(K r s) = r`.
    K,
    /// `RED_0(ζ_F r)` for closed normal `r`.
    Zeta,
    /// `RED_{n+1}(S r s u)`.
    S,
    /// `RED_{n+1}(r s)` via evaluation of both sides.
    App,
}

impl Clause {
    pub fn tag(self) -> &'static str {
        match self {
            Clause::Normal => "RED0-NF",
            Clause::K => "RED0-K",
            Clause::Zeta => "RED0-ZETA",
            Clause::S => "REDn-S",
            Clause::App => "REDn-APP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub clause: Clause,
    pub redex: Term,
    pub contractum: Term,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} -> {}", self.clause.tag(), self.redex, self.contractum)
    }
}

/// The value of `ζ_F r`: the numeral of the largest `F(m)` over atoms `ξ_m`
/// in `r`, or `0` when no atom occurs.
pub fn zeta_value(oracle: &crate::term::Perm, arg: &Term) -> u64 {
    arg.atoms()
        .iter()
        .map(|&m| u64::from(oracle.apply(m)))
        .max()
        .unwrap_or(0)
}

/// The `RED_0` clauses. Returns the value and the clause that fired.
fn stage_zero(t: &Term) -> Option<(Term, Clause)> {
    if t.is_normal() {
        return Some((t.clone(), Clause::Normal));
    }
    let (l, r) = t.as_app()?;
    if !r.is_normal() {
        return None;
    }
    match l.kind() {
        TermKind::Oracle(f) if r.is_closed() => Some((stdlib::numeral(zeta_value(f, r)), Clause::Zeta)),
        TermKind::App(h, x) if matches!(h.kind(), TermKind::K) && x.is_normal() => Some((x.clone(), Clause::K)),
        _ => None,
    }
}

/// Matches `S r s u` with all three arguments normal.
fn s_redex(t: &Term) -> Option<(&Term, &Term, &Term)> {
    let (l, u) = t.as_app()?;
    let (l, s) = l.as_app()?;
    let (h, r) = l.as_app()?;
    (matches!(h.kind(), TermKind::S) && r.is_normal() && s.is_normal() && u.is_normal()).then_some((r, s, u))
}

enum Phase {
    First { second: Term },
    Second { first: Term, stage: u32 },
    Third { stage: u32 },
}

struct Frame {
    redex: Term,
    clause: Clause,
    sub: u32,
    phase: Phase,
}

/// Evaluation settings shared by a batch of reductions.
#[derive(Debug, Clone, Copy)]
pub struct Engine {
    pub fuel: u64,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { fuel: DEFAULT_FUEL }
    }
}

impl Engine {
    pub fn with_fuel(fuel: u64) -> Self {
        Engine { fuel }
    }

    /// Least stage `<= cap` at which `t` is defined, with its value.
    pub fn red(&self, t: &Term, cap: u32) -> ReductionOutcome {
        self.run(t, cap, None)
    }

    pub fn trace(&self, t: &Term, cap: u32) -> (Vec<TraceStep>, ReductionOutcome) {
        let mut steps = Vec::new();
        let out = self.run(t, cap, Some(&mut steps));
        (steps, out)
    }

    fn run(&self, t: &Term, cap: u32, mut trace: Option<&mut Vec<TraceStep>>) -> ReductionOutcome {
        enum Mode {
            Eval(Term, u32),
            Ret(Term, u32),
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut mode = Mode::Eval(t.clone(), cap);
        let mut fuel = self.fuel;
        loop {
            mode = match mode {
                Mode::Eval(t, budget) => {
                    if let Some((v, clause)) = stage_zero(&t) {
                        if let Some(tr) = trace.as_deref_mut() {
                            tr.push(TraceStep { clause, redex: t, contractum: v.clone() });
                        }
                        Mode::Ret(v, 0)
                    } else if budget == 0 {
                        return ReductionOutcome::BudgetExhausted { cap, kind: Exhaustion::Stage };
                    } else if fuel == 0 {
                        return ReductionOutcome::BudgetExhausted { cap, kind: Exhaustion::Fuel };
                    } else {
                        fuel -= 1;
                        let sub = budget - 1;
                        let (x, y, clause) = match s_redex(&t) {
                            Some((r, s, u)) => (Term::app(r.clone(), u.clone()), Term::app(s.clone(), u.clone()), Clause::S),
                            None => {
                                let (l, r) = t.as_app().expect("non-normal terms are applications");
                                (l.clone(), r.clone(), Clause::App)
                            }
                        };
                        stack.push(Frame { redex: t, clause, sub, phase: Phase::First { second: y } });
                        Mode::Eval(x, sub)
                    }
                }
                Mode::Ret(v, st) => {
                    let Some(mut frame) = stack.pop() else {
                        return ReductionOutcome::Reduced { value: v, stage: st };
                    };
                    match frame.phase {
                        Phase::First { second } => {
                            frame.phase = Phase::Second { first: v, stage: st };
                            let sub = frame.sub;
                            stack.push(frame);
                            Mode::Eval(second, sub)
                        }
                        Phase::Second { first, stage } => {
                            frame.phase = Phase::Third { stage: stage.max(st) };
                            let sub = frame.sub;
                            stack.push(frame);
                            Mode::Eval(Term::app(first, v), sub)
                        }
                        Phase::Third { stage } => {
                            if let Some(tr) = trace.as_deref_mut() {
                                tr.push(TraceStep { clause: frame.clause, redex: frame.redex, contractum: v.clone() });
                            }
                            Mode::Ret(v, 1 + stage.max(st))
                        }
                    }
                }
            };
        }
    }
}

/// `RED_n(t)`, or `None` when undefined at stage `n`.
pub fn red_n(n: u32, t: &Term) -> Option<Term> {
    Engine::default().red(t, n).into_value()
}

/// `RED` restricted to stages `<= cap`.
pub fn red(t: &Term, cap: u32) -> ReductionOutcome {
    Engine::default().red(t, cap)
}

/// Clause firings in completion order; the last step's contractum is the
/// value when the reduction succeeds.
pub fn trace(t: &Term, cap: u32) -> (Vec<TraceStep>, ReductionOutcome) {
    Engine::default().trace(t, cap)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApplyError {
    #[error("operand is not a normal form: {0}")]
    NotNormal(Term),
}

/// Application in the algebra of normal forms: `s.t := RED(s t)`.
pub fn pca_apply(s: &Term, t: &Term, cap: u32) -> Result<ReductionOutcome, ApplyError> {
    for x in [s, t] {
        if !x.is_normal() {
            return Err(ApplyError::NotNormal(x.clone()));
        }
    }
    Ok(red(&Term::app(s.clone(), t.clone()), cap))
}

/// An application tree whose leaves are elements of the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AppTree {
    Leaf(Term),
    Node(Box<AppTree>, Box<AppTree>),
}

impl AppTree {
    pub fn leaf(t: Term) -> AppTree {
        AppTree::Leaf(t)
    }

    pub fn node(l: AppTree, r: AppTree) -> AppTree {
        AppTree::Node(Box::new(l), Box::new(r))
    }

    /// The corresponding term of the rewriting system.
    pub fn flatten(&self) -> Term {
        match self {
            AppTree::Leaf(t) => t.clone(),
            AppTree::Node(l, r) => Term::app(l.flatten(), r.flatten()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            AppTree::Leaf(_) => 0,
            AppTree::Node(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn leaves_normal(&self) -> bool {
        match self {
            AppTree::Leaf(t) => t.is_normal(),
            AppTree::Node(l, r) => l.leaves_normal() && r.leaves_normal(),
        }
    }
}

/// Denotation: evaluate both subtrees, then apply in the algebra. Each
/// application gets the full `cap`; the reported stage is the largest stage
/// used by any single application.
pub fn denote(tree: &AppTree, cap: u32) -> ReductionOutcome {
    match tree {
        AppTree::Leaf(t) => {
            debug_assert!(t.is_normal(), "leaves must be normal forms");
            ReductionOutcome::Reduced { value: t.clone(), stage: 0 }
        }
        AppTree::Node(l, r) => {
            let (lv, ls) = match denote(l, cap) {
                ReductionOutcome::Reduced { value, stage } => (value, stage),
                other => return other,
            };
            let (rv, rs) = match denote(r, cap) {
                ReductionOutcome::Reduced { value, stage } => (value, stage),
                other => return other,
            };
            match red(&Term::app(lv, rv), cap) {
                ReductionOutcome::Reduced { value, stage } => ReductionOutcome::Reduced { value, stage: stage.max(ls).max(rs) },
                other => other,
            }
        }
    }
}
