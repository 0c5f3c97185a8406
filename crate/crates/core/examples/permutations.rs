//! Permutations of the atoms act on terms, and reduction commutes with them.

use pca_forge::reduce::red;
use pca_forge::term::{parse, parse_perm};

fn main() {
    let p = parse_perm("[1->2,2->3,3->1]").unwrap();
    let q = parse_perm("[1->4,4->1]").unwrap();
    println!("p = {p}, q = {q}, p∘q = {}, p⁻¹ = {}", p.compose(&q), p.inverse());

    let t = parse("z[2->5,5->2] (a1 a2) (K a3 a1)").unwrap();
    let moved = t.permute(&p);
    println!("t      = {t}\np·t    = {moved}");
    println!("red(p·t) = {}", red(&moved, 100));
    println!("p·red(t) = {}", red(&t, 100).map_value(|v| v.permute(&p)));
}
