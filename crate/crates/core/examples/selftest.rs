//! Run two of the self-test suites with a small number of cases.

use pca_forge::selftest::{run, Options};

fn main() {
    let opts = Options { suites: vec!["pca".into(), "equivariance".into()], cases: 50, ..Options::default() };
    for r in run(&opts).unwrap() {
        println!("{r}");
    }
}
