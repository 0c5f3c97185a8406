//! A term-model partial combinatory algebra with atoms and oracle
//! constants, budgeted leftmost-innermost evaluation, the halting gadgets
//! built on it, and finite-rank realizability checkers.

pub mod cli;
pub mod gadgets;
pub mod gen;
pub mod reduce;
pub mod selftest;
pub mod realize;
pub mod stdlib;
pub mod term;

pub use reduce::{red, red_n, ReductionOutcome};
pub use term::{parse, print, Perm, Term};
