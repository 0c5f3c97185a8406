//! Reduce a few terms and print the clause-by-clause trace of one of them.

use pca_forge::reduce::{red, trace};
use pca_forge::term::parse;

fn main() {
    for src in ["K a1 a2", "S K K a3", "z[1->3,3->1] (a1 a2)", "#2", "S I I (S I I)"] {
        let t = parse(src).expect("valid term");
        match red(&t, 1_000).value() {
            Some(v) => println!("{src:<22} => {}", v.display_sugared()),
            None => println!("{src:<22} => {}", red(&t, 1_000)),
        }
    }

    let t = parse("S (K a1) I a2").unwrap();
    let (steps, outcome) = trace(&t, 100);
    for s in &steps {
        println!("  {s}");
    }
    println!("  = {outcome}");
}
