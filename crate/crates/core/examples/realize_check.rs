//! Check realizers against formulas over finite sets, from code and from an
//! s-expression file.

use pca_forge::realize::{canonical_numeral, check, equality_realizers, parse_document, Formula, SetRef};
use pca_forge::stdlib::{numeral, pair};

const FILE: &str = include_str!("data/numerals.sexp");

fn main() {
    let ir = equality_realizers().ir.clone();
    let (one, two) = (canonical_numeral(1), canonical_numeral(2));
    let e = pair(numeral(1), ir.clone());
    println!("p #1 i_r ⊩ 1 ∈ 2: {}", check(&e, &Formula::mem(one.clone(), two.clone()), 10_000));
    println!("i_r ⊩ 2 = 2:      {}", check(&ir, &Formula::eq(two.clone(), two.clone()), 10_000));
    let exists = Formula::bex(SetRef::Param(two), Formula::Eq(SetRef::Bound(0), SetRef::Param(one)));
    println!("p #1 i_r ⊩ ∃x∈2. x = 1: {}", check(&e, &exists, 10_000));

    let doc = parse_document(FILE, 10_000).unwrap();
    for (i, q) in doc.queries.iter().enumerate() {
        println!("query {i}: {}", check(&q.realizer, &q.plain().unwrap(), 10_000));
    }
}
