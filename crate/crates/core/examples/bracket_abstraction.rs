//! λ*-abstraction: compile a term with variables into S and K, then check
//! that application agrees with substitution.

use pca_forge::reduce::red;
use pca_forge::stdlib::{bracket_abstract, lam};
use pca_forge::term::{parse, Term};

fn main() {
    let body = parse("x1 (x0 a2) x0").unwrap();
    let f = lam(&[0, 1], body.clone());
    println!("λx0 x1. {body}\n  = {f}");
    println!("λ*x0 alone: {}", bracket_abstract(0, &body));

    let (a, b) = (parse("K a5").unwrap(), parse("S").unwrap());
    let applied = red(&Term::apply(f, [a.clone(), b.clone()]), 1_000);
    let direct = red(&body.substitute(0, &a).substitute(1, &b), 1_000);
    println!("applied:     {applied}\nsubstituted: {direct}");
}
