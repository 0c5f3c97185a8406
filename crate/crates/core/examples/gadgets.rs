//! The halting gadgets for a machine that halts at stage 3 and for one that
//! never halts.

use pca_forge::gadgets::{Gadgets, Profile};
use pca_forge::reduce::red;
use pca_forge::stdlib::{numeral, numeral_value};
use pca_forge::term::{Perm, Term};

fn main() {
    for profile in [Profile::HaltsAt(3), Profile::Never] {
        let gs = Gadgets::new(&profile, 0);
        println!("profile {profile}");
        println!("  v #0 at cap 10⁴: {}", red(&Term::app(gs.v(), numeral(0)), 10_000));
        println!("  t′ atoms for n = 5: {:?}", gs.t_prime(5).unwrap().atoms());
        let f = gs.f(5, &Perm::swap(5, 6)).unwrap();
        let row: Vec<String> = (0..7)
            .map(|l| {
                let v = red(&Term::app(f.clone(), numeral(l)), 100_000);
                v.value().and_then(numeral_value).map_or("?".into(), |n| n.to_string())
            })
            .collect();
        println!("  f(ζ_[5↔6]) #0..#6 = {}", row.join(" "));
    }
}
