//! Type 1 and type 2 probes, and the atom-preservation probe on λx.x.

use pca_forge::gadgets::{atom_preservation_probe, probe_type1, probe_type2_identity, Gadgets, Profile};
use pca_forge::stdlib::{lam, std_env};
use pca_forge::term::{parse, Perm, Term};

fn main() {
    let succ = std_env().succ.clone();
    println!("type1 succ:    {}", probe_type1(&succ, 10, 10_000));
    println!("type1 K:       {}", probe_type1(&Term::k(), 10, 10_000));

    let profile = Profile::HaltsAt(2);
    let gs = Gadgets::new(&profile, 0);
    let f = gs.f(3, &Perm::identity()).unwrap();
    let id = lam(&[0], Term::var(0));
    let probes = [succ, f];
    println!("type2 λx.x:    {}", probe_type2_identity(&id, &probes, 8, 100_000).unwrap());
    let bad = parse("K $succ").unwrap();
    println!("type2 K succ:  {}", probe_type2_identity(&bad, &probes, 8, 100_000).unwrap());

    let report = atom_preservation_probe(&id, &gs, 3, &Perm::identity(), &Perm::swap(3, 4), 100_000).unwrap();
    println!(
        "e f(ζ_F): reduced {}, atom 3 present {}, F/F′ variants equal {}, new atoms {:?}",
        report.reduced(),
        report.atom_present,
        report.variants_equal,
        report.new_atoms
    );
}
