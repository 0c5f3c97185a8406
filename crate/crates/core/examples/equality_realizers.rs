//! The equality realizers and the injective presentation lemma on a padded
//! instance where `b` stores two children under one key.

use pca_forge::realize::{check, equality_realizers, iplemma_check, padded_instance, Formula};
use pca_forge::reduce::red;
use pca_forge::term::Term;

fn main() {
    let r = equality_realizers();
    let inst = padded_instance(3, 2, 1, 5);
    println!("a = 3̄ ({} members), b = a plus a second child under #2 ({} members)", inst.a.len(), inst.b.len());
    println!("f ⊩ a = b: {}", check(&inst.f, &Formula::eq(inst.a.clone(), inst.b.clone()), 100_000));
    let sym = red(&Term::app(r.is.clone(), inst.f.clone()), 100_000).into_value().unwrap();
    println!("i_s f ⊩ b = a: {}", check(&sym, &Formula::eq(inst.b.clone(), inst.a.clone()), 100_000));
    println!("iplemma: {}", iplemma_check(&inst.a, &inst.b, &inst.f, &inst.g, 100_000).unwrap());
}
