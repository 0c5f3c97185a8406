//! Numerals, pairing, fixed points and compiled primitive recursion.

use pca_forge::reduce::red;
use pca_forge::stdlib::{compile_primrec, numeral, numeral_value, pair, std_env, PRFun};
use pca_forge::term::Term;

fn value(t: Term) -> String {
    red(&t, 100_000).value().and_then(numeral_value).map_or("?".into(), |n| format!("#{n}"))
}

fn main() {
    let env = std_env();
    for (name, m) in env.members() {
        println!("{name:>6}: size {}", m.size());
    }
    println!("succ #4 = {}", value(Term::app(env.succ.clone(), numeral(4))));
    let pr = Term::app(env.p1.clone(), pair(numeral(1), numeral(7)));
    println!("p1 (p #1 #7) = {}", value(pr));

    let add = compile_primrec(&PRFun::add()).unwrap();
    println!("add #3 #4 = {}", value(Term::apply(add, [numeral(3), numeral(4)])));
    let table = compile_primrec(&PRFun::case([(0, 9), (2, 5)], 1)).unwrap();
    for n in 0..4 {
        print!("case #{n} = {}  ", value(Term::app(table.clone(), numeral(n))));
    }
    println!();
}
