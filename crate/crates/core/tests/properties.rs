mod common;

use common::{naive_normalise, LiteralRed};
use pca_forge::gen::Gen;
use pca_forge::reduce::{denote, red};
use pca_forge::stdlib::{lam, std_env};
use pca_forge::term::{parse, parse_perm, Perm, Term};
use proptest::prelude::*;

fn perm() -> impl Strategy<Value = Perm> {
    prop::collection::vec((1u32..=6, 1u32..=6), 0..4).prop_map(|swaps| {
        swaps.into_iter().fold(Perm::identity(), |p, (a, b)| p.compose(&Perm::swap(a, b)))
    })
}

fn leaf(vars: u32) -> BoxedStrategy<Term> {
    let mut options = vec![
        Just(Term::s()).boxed(),
        Just(Term::k()).boxed(),
        (1u32..=5).prop_map(Term::atom).boxed(),
        perm().prop_map(Term::oracle).boxed(),
    ];
    if vars > 0 {
        options.push((0..vars).prop_map(Term::var).boxed());
    }
    prop::strategy::Union::new(options).boxed()
}

fn term_over(vars: u32) -> impl Strategy<Value = Term> {
    leaf(vars).prop_recursive(5, 24, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Term::app(a, b)))
}

fn closed_term() -> impl Strategy<Value = Term> {
    term_over(0)
}

fn normal_term() -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(|seed| Gen::new(seed).normal(6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_identity(t in term_over(3)) {
        prop_assert_eq!(parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn perm_syntax_round_trips(p in perm()) {
        prop_assert_eq!(parse_perm(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn permutation_action_laws(t in term_over(2), p in perm(), q in perm()) {
        prop_assert_eq!(t.permute(&Perm::identity()), t.clone());
        prop_assert_eq!(t.permute(&q).permute(&p), t.permute(&p.compose(&q)));
        prop_assert_eq!(t.permute(&p).permute(&p.inverse()), t);
    }

    #[test]
    fn automorphisms_preserve_shape(t in term_over(2), p in perm()) {
        let u = t.permute(&p);
        prop_assert_eq!(u.is_normal(), t.is_normal());
        prop_assert_eq!(u.size(), t.size());
        prop_assert_eq!(u.is_closed(), t.is_closed());
    }

    #[test]
    fn reduction_is_monotone_in_the_cap(t in closed_term(), low in 0u32..50, extra in 0u32..500) {
        let first = red(&t, low);
        if first.is_reduced() {
            prop_assert_eq!(red(&t, low + extra), first);
        }
    }

    #[test]
    fn reduction_is_equivariant(t in closed_term(), p in perm()) {
        prop_assert_eq!(red(&t.permute(&p), 2_000), red(&t, 2_000).map_value(|v| v.permute(&p)));
    }

    #[test]
    fn engine_matches_the_literal_definition(t in closed_term()) {
        let mut lit = LiteralRed::new();
        let want = lit.least(&t, 4);
        let got = red(&t, 4);
        prop_assert_eq!(got.stage().zip(got.value().cloned()), want);
    }

    #[test]
    fn values_agree_with_small_step_reduction(t in closed_term()) {
        if let Some(v) = red(&t, 2_000).value() {
            prop_assert_eq!(naive_normalise(&t, 100_000), Some(v.clone()));
        }
    }

    #[test]
    fn abstraction_simulates_substitution(body in term_over(1), a in normal_term()) {
        let f = lam(&[0], body.clone());
        prop_assert!(f.is_normal() && !f.has_var(0));
        let (x, y) = (red(&Term::app(f, a.clone()), 2_000), red(&body.substitute(0, &a), 2_000));
        if let (Some(x), Some(y)) = (x.value(), y.value()) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn stdlib_members_are_fixed_by_automorphisms(p in perm()) {
        for (name, m) in std_env().members() {
            prop_assert_eq!(&m.permute(&p), m, "{} moved", name);
        }
    }

    #[test]
    fn tree_denotation_matches_flattening(seed in any::<u64>()) {
        let tree = Gen::new(seed).app_tree(4);
        let (d, r) = (denote(&tree, 2_000), red(&tree.flatten(), 8_000));
        if let Some(v) = d.value() {
            prop_assert_eq!(r.value(), Some(v));
        }
    }
}
