//! Seeded random generators for terms, permutations, application trees,
//! realizability sets and formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::realize::{canonical_numeral, Formula, Label, LabeledRSet, RSet, SetRef};
use crate::reduce::AppTree;
use crate::stdlib::numeral;
use crate::term::{Perm, Term};

#[derive(Debug, Clone)]
pub struct Gen {
    rng: ChaCha8Rng,
    /// Atoms are drawn from `1..=atoms`.
    pub atoms: u32,
    /// Whether oracle constants appear.
    pub oracles: bool,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), atoms: 4, oracles: true }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n.max(1))
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A permutation moving a few points of `1..=atoms + 2`.
    pub fn perm(&mut self) -> Perm {
        let top = self.atoms + 2;
        let k = self.rng.gen_range(0..=3usize).min(top as usize);
        let mut points: Vec<u32> = (1..=top).collect();
        points.shuffle(&mut self.rng);
        let chosen = &points[..k];
        let mut image = chosen.to_vec();
        image.shuffle(&mut self.rng);
        Perm::from_pairs(chosen.iter().copied().zip(image)).expect("a shuffle is a bijection")
    }

    fn atom(&mut self) -> Term {
        Term::atom(self.rng.gen_range(1..=self.atoms.max(1)))
    }

    fn leaf(&mut self) -> Term {
        match self.rng.gen_range(0..if self.oracles { 6 } else { 5 }) {
            0 | 1 => Term::s(),
            2 | 3 => Term::k(),
            4 => self.atom(),
            _ => {
                let p = self.perm();
                Term::oracle(p)
            }
        }
    }

    /// A closed normal form of roughly `size` nodes.
    pub fn normal(&mut self, size: u32) -> Term {
        if size <= 1 {
            return self.leaf();
        }
        match self.rng.gen_range(0..8) {
            0 => Term::app(Term::s(), self.normal(size - 1)),
            1 | 2 => {
                let l = self.rng.gen_range(1..size.max(2));
                Term::apply(Term::s(), [self.normal(l), self.normal(size - l)])
            }
            3 | 4 => Term::app(Term::k(), self.normal(size - 1)),
            5 => {
                let head = self.atom();
                let n = self.rng.gen_range(1..=2u32);
                let args: Vec<Term> = (0..n).map(|_| self.normal((size - 1) / n)).collect();
                Term::apply(head, args)
            }
            6 => numeral(self.below(4)),
            _ => self.leaf(),
        }
    }

    /// A closed term of roughly `size` nodes, redexes allowed.
    pub fn term(&mut self, size: u32) -> Term {
        if size <= 2 || self.chance(0.2) {
            return self.normal(size.min(4));
        }
        let l = self.rng.gen_range(1..size);
        Term::app(self.term(l), self.term(size - l))
    }

    /// A term over variables `0..vars`, redexes allowed.
    pub fn open_term(&mut self, size: u32, vars: u32) -> Term {
        if size <= 1 || self.chance(0.15) {
            if vars > 0 && self.chance(0.5) {
                return Term::var(self.rng.gen_range(0..vars));
            }
            return self.normal(size.clamp(1, 3));
        }
        let l = self.rng.gen_range(1..size);
        Term::app(self.open_term(l, vars), self.open_term(size - l, vars))
    }

    /// An application tree of depth at most `depth` with normal leaves.
    pub fn app_tree(&mut self, depth: usize) -> AppTree {
        if depth == 0 || self.chance(0.3) {
            let size = self.rng.gen_range(1..=4);
            return AppTree::leaf(self.normal(size));
        }
        AppTree::node(self.app_tree(depth - 1), self.app_tree(depth - 1))
    }

    /// A realizer key from a small pool, so that keys collide often.
    pub fn key(&mut self) -> Term {
        match self.rng.gen_range(0..6) {
            0..=2 => numeral(self.below(3)),
            3 => Term::k(),
            4 => Term::s(),
            _ => self.atom(),
        }
    }

    /// A set of rank at most `rank` with at most `width` members.
    pub fn rset(&mut self, rank: usize, width: usize) -> RSet {
        if rank == 0 {
            return RSet::empty();
        }
        if self.chance(0.2) {
            return canonical_numeral(self.below(rank as u64 + 1));
        }
        let n = self.rng.gen_range(0..=width);
        let pairs: Vec<(Term, RSet)> = (0..n)
            .map(|_| {
                let r = self.rng.gen_range(0..rank);
                (self.key(), self.rset(r, width))
            })
            .collect();
        RSet::from_pairs(pairs)
    }

    /// An injectively presented set: keys are distinct at every level.
    pub fn ip_rset(&mut self, rank: usize, width: usize) -> RSet {
        if rank == 0 {
            return RSet::empty();
        }
        let mut keys: Vec<Term> = (0..4).map(numeral).chain([Term::k(), Term::s()]).collect();
        keys.shuffle(&mut self.rng);
        let n = self.rng.gen_range(0..=width.min(keys.len()));
        let pairs: Vec<(Term, RSet)> = keys[..n]
            .iter()
            .map(|k| {
                let r = self.rng.gen_range(0..rank);
                (k.clone(), self.ip_rset(r, width))
            })
            .collect();
        RSet::from_pairs(pairs)
    }

    /// A labelled set; label 1 appears with probability `ones`.
    pub fn lrset(&mut self, rank: usize, width: usize, ones: f64) -> LabeledRSet {
        if rank == 0 {
            return LabeledRSet::empty();
        }
        let n = self.rng.gen_range(0..=width);
        let triples: Vec<(Label, Term, LabeledRSet)> = (0..n)
            .map(|_| {
                let label = if self.chance(ones) { Label::One } else { Label::Zero };
                let r = self.rng.gen_range(0..rank);
                (label, self.key(), self.lrset(r, width, ones))
            })
            .collect();
        LabeledRSet::from_triples(triples)
    }

    fn set_ref<S: Clone>(&mut self, params: &[S], depth: u32) -> SetRef<S> {
        if depth > 0 && self.chance(0.6) {
            return SetRef::Bound(self.rng.gen_range(0..depth));
        }
        SetRef::Param(params.choose(&mut self.rng).expect("at least one parameter").clone())
    }

    /// A closed formula in the decidable fragment. `bound` is the number of
    /// enclosing binders.
    pub fn formula<S: Clone>(&mut self, params: &[S], size: u32, bound: u32) -> Formula<S> {
        if size <= 1 {
            let (a, b) = (self.set_ref(params, bound), self.set_ref(params, bound));
            return if self.chance(0.5) { Formula::Mem(a, b) } else { Formula::Eq(a, b) };
        }
        match self.rng.gen_range(0..4) {
            0 => Formula::and(self.formula(params, size / 2, bound), self.formula(params, size / 2, bound)),
            1 => Formula::or(self.formula(params, size / 2, bound), self.formula(params, size / 2, bound)),
            2 => {
                let a = self.set_ref(params, bound);
                Formula::bex(a, self.formula(params, size - 1, bound + 1))
            }
            _ => {
                let a = self.set_ref(params, bound);
                Formula::ball(a, self.formula(params, size - 1, bound + 1))
            }
        }
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("non-empty")
    }
}
