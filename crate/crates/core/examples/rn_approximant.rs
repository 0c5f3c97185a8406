//! Build a finite approximant of R_N from a few type 1 probes and validate
//! the ζ₁-based realizer on it.

use pca_forge::gadgets::{Gadgets, Profile};
use pca_forge::realize::{build_rn, RnConfig};
use pca_forge::stdlib::std_env;
use pca_forge::term::Perm;

fn main() {
    let profile = Profile::HaltsAt(1);
    let gs = Gadgets::new(&profile, 0);
    let probes = [std_env().succ.clone(), gs.f(2, &Perm::identity()).unwrap(), gs.f(4, &Perm::swap(4, 5)).unwrap()];
    let rn = build_rn(&probes, RnConfig::new(3)).unwrap();
    for t in &rn.triples {
        println!("ζ₁ f = {}, n = {}, graph with {} pairs", t.zeta, t.n, t.graph.len());
    }
    let (v0, v1) = rn.validate_mvf();
    println!("part three: {}\n⊩₀: {v0}\n⊩:  {v1}", rn.part_three_holds());
}
