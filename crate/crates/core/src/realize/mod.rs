//! Finite-rank fragments of the realizability models `V(𝒜)`, `V_Γ(𝒜)` and
//! `V_ip(𝒜)` over the term pca.

mod check;
mod equality;
mod formula;
mod rn;
mod rset;
mod sexpr;

pub use check::{
    check, check0_gamma, check0_gamma_approx, check0_ip, check0_ip_approx, check_bounded_approx,
    check_with_stats, validate_injectively_presented, Approx, CheckStats, GammaChecker, RealizeError, VChecker,
};
pub use equality::{
    equality_realizers, iplemma_check, iplemma_realizer, padded_instance, EqualityRealizers, IpInstance,
    IpLemmaError,
};
pub use formula::{Bounds, Formula, SetLike, SetRef, UnknownReason, Verdict};
pub use rn::{
    build_rn, build_type2_composite, zeta_mvf_realizer, zeta_one, zeta_one_value, Rn, RnConfig, RnError,
    RnTriple,
};
pub use sexpr::{
    convert_formula, formula_to_value, lrset_to_value, parse_document, query_to_value, read_all, result_to_value,
    rset_to_value, set_to_value, verdict_from_value, verdict_to_value, Document, FileError, Query, SetValue,
};
pub use rset::{
    canonical_numeral, graph_rset, graph_values, labeled_ordered_pair, labeled_unordered_pair, omega_truncation,
    ordered_pair, unordered_pair, GraphError, Label, LabeledRSet, NormalFilterSpec, RSet, Subgroup,
};

use crate::term::Term;

/// Names of the realizers reachable through `$name`.
pub const REALIZER_NAMES: [&str; 7] = ["ir", "is", "it", "i0", "i1", "iplemma", "mvf"];

pub fn named_realizer(name: &str) -> Option<Term> {
    let r = equality_realizers();
    Some(match name {
        "ir" => r.ir.clone(),
        "is" => r.is.clone(),
        "it" => r.it.clone(),
        "i0" => r.i0.clone(),
        "i1" => r.i1.clone(),
        "iplemma" => iplemma_realizer(),
        "mvf" => zeta_mvf_realizer(),
        _ => return None,
    })
}
