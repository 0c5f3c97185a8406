//! Finite approximants of the sets `R_N` and their multivalued-function
//! realizer.
//!
//! `R_N` pairs each type 1 element `f` with `(f̄, n̄)` where `n̲ = ζ₁ f` if
//! `ζ₁ f ≤ N`, and with every `n > N` otherwise. Here the family of `f` is
//! an explicit finite list, `f̄` is cut at `graph_limit`, and the `n > N`
//! clause is cut at `n_limit`.

use std::sync::OnceLock;

use super::check::{check, check0_gamma};
use super::equality::equality_realizers;
use super::formula::{Formula, SetRef, Verdict};
use super::rset::{
    canonical_numeral, graph_rset, labeled_ordered_pair, GraphError, Label, LabeledRSet, RSet,
};
use crate::reduce::Engine;
use crate::stdlib::{lam, numeral_value, pair, fst};
use crate::term::{Perm, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RnConfig {
    pub n: u64,
    /// `f̄` keeps the arguments `< graph_limit`.
    pub graph_limit: u64,
    /// The `n > N` clause keeps `n ≤ n_limit`.
    pub n_limit: u64,
    pub cap: u32,
}

impl RnConfig {
    pub fn new(n: u64) -> RnConfig {
        RnConfig { n, graph_limit: 3, n_limit: n + 3, cap: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RnError {
    #[error(transparent)]
    NotTypeOne(#[from] GraphError),
    #[error("ζ₁ applied to {0} is not a numeral")]
    ZetaNotNumeral(Term),
    #[error("ζ₁ {f} = {zeta} exceeds the truncation n_limit = {limit}")]
    BeyondLimit { f: Term, zeta: u64, limit: u64 },
}

/// One member `⟨0, f, (f̄, n̄)⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnTriple {
    pub f: Term,
    /// The value of `ζ₁ f`.
    pub zeta: u64,
    pub n: u64,
    pub graph: RSet,
}

impl RnTriple {
    pub fn child(&self) -> LabeledRSet {
        labeled_ordered_pair(&self.graph.labeled(Label::Zero), &canonical_numeral(self.n).labeled(Label::Zero))
    }
}

/// `ζ₁ = ζ_id`.
pub fn zeta_one() -> Term {
    Term::oracle(Perm::identity())
}

/// The value of `ζ₁ f`.
pub fn zeta_one_value(f: &Term, cap: u32) -> Result<u64, RnError> {
    Engine::default()
        .red(&Term::app(zeta_one(), f.clone()), cap)
        .value()
        .and_then(numeral_value)
        .ok_or_else(|| RnError::ZetaNotNumeral(f.clone()))
}

#[derive(Debug, Clone)]
pub struct Rn {
    pub config: RnConfig,
    pub triples: Vec<RnTriple>,
}

impl Rn {
    pub fn set(&self) -> LabeledRSet {
        LabeledRSet::from_triples(self.triples.iter().map(|t| (Label::Zero, t.f.clone(), t.child())))
    }

    /// `{⟨0, f, f̄⟩}` over the probe family: the fragment of `ℕ^ℕ` the
    /// approximant is total on.
    pub fn domain(&self) -> LabeledRSet {
        LabeledRSet::from_triples(self.triples.iter().map(|t| (Label::Zero, t.f.clone(), t.graph.labeled(Label::Zero))))
    }

    /// `ω̄` cut just above every index used.
    pub fn codomain(&self) -> LabeledRSet {
        canonical_numeral(self.config.n_limit.max(self.config.n) + 1).labeled(Label::Zero)
    }

    /// `(∀y ∈ domain)(∃z ∈ codomain) (y, z) ∈ R_N`.
    pub fn totality_formula(&self) -> Formula<LabeledRSet> {
        Formula::ball(
            SetRef::Param(self.domain()),
            Formula::bex(
                SetRef::Param(self.codomain()),
                Formula::Mem(SetRef::pair(SetRef::Bound(1), SetRef::Bound(0)), SetRef::Param(self.set())),
            ),
        )
    }

    /// Checks the totality formula with the `ζ₁`-based realizer, under both
    /// `⊩₀` and `⊩` on the projections.
    pub fn validate_mvf(&self) -> (Verdict, Verdict) {
        let e = zeta_mvf_realizer();
        let phi = self.totality_formula();
        let v0 = check0_gamma(&e, &phi, self.config.cap);
        let v1 = check(&e, &phi.map_params(&mut LabeledRSet::project), self.config.cap);
        (v0, v1)
    }

    /// Whenever every atom of `f` is `≤ N`, the child is `(f̄, n̄)` with
    /// `n = ζ₁ f ≤ N`.
    pub fn part_three_holds(&self) -> bool {
        self.triples.iter().all(|t| {
            let small = t.f.atoms().iter().all(|&i| u64::from(i) <= self.config.n);
            !small || (t.n == t.zeta && t.n <= self.config.n)
        })
    }
}

/// Builds the approximant over `probes`, which must be type 1 up to
/// `graph_limit`.
pub fn build_rn(probes: &[Term], config: RnConfig) -> Result<Rn, RnError> {
    let mut triples = Vec::new();
    for f in probes {
        let graph = graph_rset(f, config.graph_limit, config.cap)?;
        let zeta = zeta_one_value(f, config.cap)?;
        if zeta <= config.n {
            triples.push(RnTriple { f: f.clone(), zeta, n: zeta, graph });
        } else {
            if zeta > config.n_limit {
                return Err(RnError::BeyondLimit { f: f.clone(), zeta, limit: config.n_limit });
            }
            for n in config.n + 1..=config.n_limit {
                triples.push(RnTriple { f: f.clone(), zeta, n, graph: graph.clone() });
            }
        }
    }
    Ok(Rn { config, triples })
}

/// `λf. p (ζ₁ f) (p f i_r)`: picks `n̲ = ζ₁ f` and witnesses
/// `(f̄, n̄) ∈ R_N` by the key `f` and reflexivity.
pub fn zeta_mvf_realizer() -> Term {
    static E: OnceLock<Term> = OnceLock::new();
    E.get_or_init(|| {
        let f = Term::var(0);
        lam(&[0], pair(Term::app(zeta_one(), f.clone()), pair(f, equality_realizers().ir.clone())))
    })
    .clone()
}

/// `λx. (e (f x)₀)₀`.
pub fn build_type2_composite(e: &Term, f: &Term) -> Term {
    let inner = fst(Term::app(f.clone(), Term::var(0)));
    lam(&[0], fst(Term::app(e.clone(), inner)))
}
