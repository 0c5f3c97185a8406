//! The term language: `S`, `K`, variables, atoms, oracle constants and
//! application.
//!
//! Terms are immutable and reference counted. Every node caches whether it
//! is closed, whether it is a normal form, its atom set and its size, so the
//! structural predicates the reducer needs at every step are O(1).

mod parse;
mod perm;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

pub use parse::{parse, parse_perm, ParseError};
pub use perm::{Perm, PermError};

/// The shape of a term node.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    S,
    K,
    Var(u32),
    /// The atom `ξ_i`, `i >= 1`.
    Atom(u32),
    /// The oracle constant `ζ_F`.
    Oracle(Perm),
    App(Term, Term),
}

struct Node {
    kind: TermKind,
    closed: bool,
    normal: bool,
    has_oracle: bool,
    size: u64,
    atoms: Arc<[u32]>,
}

#[derive(Clone)]
pub struct Term(Arc<Node>);

fn no_atoms() -> Arc<[u32]> {
    static EMPTY: OnceLock<Arc<[u32]>> = OnceLock::new();
    Arc::clone(EMPTY.get_or_init(|| Arc::from(Vec::new())))
}

fn union_atoms(a: &Arc<[u32]>, b: &Arc<[u32]>) -> Arc<[u32]> {
    if b.is_empty() || Arc::ptr_eq(a, b) {
        return Arc::clone(a);
    }
    if a.is_empty() {
        return Arc::clone(b);
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    if out.len() == a.len() {
        return Arc::clone(a);
    }
    Arc::from(out)
}

impl Term {
    fn leaf(kind: TermKind) -> Term {
        let closed = !matches!(kind, TermKind::Var(_));
        let has_oracle = matches!(kind, TermKind::Oracle(_));
        let atoms = match kind {
            TermKind::Atom(i) => Arc::from(vec![i]),
            _ => no_atoms(),
        };
        Term(Arc::new(Node {
            kind,
            closed,
            normal: true,
            has_oracle,
            size: 1,
            atoms,
        }))
    }

    pub fn s() -> Term {
        static S: OnceLock<Term> = OnceLock::new();
        S.get_or_init(|| Term::leaf(TermKind::S)).clone()
    }

    pub fn k() -> Term {
        static K: OnceLock<Term> = OnceLock::new();
        K.get_or_init(|| Term::leaf(TermKind::K)).clone()
    }

    pub fn var(index: u32) -> Term {
        Term::leaf(TermKind::Var(index))
    }

    /// The atom `ξ_index`.
    ///
    /// Panics when `index == 0`; atoms are indexed from 1.
    pub fn atom(index: u32) -> Term {
        assert!(index >= 1, "atom indices start at 1");
        Term::leaf(TermKind::Atom(index))
    }

    pub fn oracle(perm: Perm) -> Term {
        Term::leaf(TermKind::Oracle(perm))
    }

    pub fn app(left: Term, right: Term) -> Term {
        let closed = left.0.closed && right.0.closed;
        let normal = left.0.normal && right.0.normal && !is_redex_shape(&left, &right);
        let has_oracle = left.0.has_oracle || right.0.has_oracle;
        let size = left.0.size.saturating_add(right.0.size).saturating_add(1);
        let atoms = union_atoms(&left.0.atoms, &right.0.atoms);
        Term(Arc::new(Node {
            kind: TermKind::App(left, right),
            closed,
            normal,
            has_oracle,
            size,
            atoms,
        }))
    }

    /// Left-associated application `head a1 a2 ... an`.
    pub fn apply<I>(head: Term, args: I) -> Term
    where
        I: IntoIterator<Item = Term>,
    {
        args.into_iter().fold(head, Term::app)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn is_closed(&self) -> bool {
        self.0.closed
    }

    /// No subterm is of the shape `K r s`, `S r s u`, or `ζ_F r` with `r`
    /// closed.
    pub fn is_normal(&self) -> bool {
        self.0.normal
    }

    /// True when some oracle constant occurs in the term.
    pub fn has_oracle(&self) -> bool {
        self.0.has_oracle
    }

    /// Number of nodes, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Indices of the atoms occurring in the term, ascending. Oracle
    /// constants contribute nothing.
    pub fn atoms(&self) -> &[u32] {
        &self.0.atoms
    }

    pub fn atoms_of(&self) -> BTreeSet<u32> {
        self.atoms().iter().copied().collect()
    }

    pub fn contains_atom(&self, index: u32) -> bool {
        self.atoms().binary_search(&index).is_ok()
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            TermKind::App(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Splits `h a1 ... an` into `h` and `[a1, ..., an]`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let TermKind::App(l, r) = head.kind() {
            args.push(r);
            head = l;
        }
        args.reverse();
        (head, args)
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// True when variable `index` occurs free.
    pub fn has_var(&self, index: u32) -> bool {
        if self.is_closed() {
            return false;
        }
        match self.kind() {
            TermKind::Var(i) => *i == index,
            TermKind::App(l, r) => l.has_var(index) || r.has_var(index),
            _ => false,
        }
    }

    /// Replaces every occurrence of variable `index` by `value`.
    pub fn substitute(&self, index: u32, value: &Term) -> Term {
        if !self.has_var(index) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(_) => value.clone(),
            TermKind::App(l, r) => Term::app(l.substitute(index, value), r.substitute(index, value)),
            _ => self.clone(),
        }
    }

    /// The automorphism induced by `perm`: `ξ_n ↦ ξ_{π(n)}`,
    /// `ζ_F ↦ ζ_{F∘π⁻¹}`; `S`, `K` and variables are fixed.
    pub fn permute(&self, perm: &Perm) -> Term {
        if perm.is_identity() || (self.atoms().is_empty() && !self.has_oracle()) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Atom(n) => Term::atom(perm.apply(*n)),
            TermKind::Oracle(f) => Term::oracle(f.compose(&perm.inverse())),
            TermKind::App(l, r) => Term::app(l.permute(perm), r.permute(perm)),
            _ => self.clone(),
        }
    }

    /// Oracle constants occurring in the term.
    pub fn oracles(&self) -> BTreeSet<Perm> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if !t.has_oracle() {
                continue;
            }
            match t.kind() {
                TermKind::Oracle(f) => {
                    out.insert(f.clone());
                }
                TermKind::App(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
                _ => {}
            }
        }
        out
    }

    /// Renders the term with numerals shown as `#n` where recognised.
    pub fn display_sugared(&self) -> Sugared<'_> {
        Sugared(self)
    }
}

fn is_redex_shape(left: &Term, right: &Term) -> bool {
    match left.kind() {
        TermKind::Oracle(_) => right.is_closed(),
        TermKind::App(h, _) => match h.kind() {
            TermKind::K => true,
            TermKind::App(hh, _) => matches!(hh.kind(), TermKind::S),
            _ => false,
        },
        _ => false,
    }
}

impl Drop for Node {
    fn drop(&mut self) {
        // Unwind deep application chains without recursion.
        let mut stack = Vec::new();
        if let TermKind::App(l, r) = &mut self.kind {
            stack.push(std::mem::replace(l, Term::s()));
            stack.push(std::mem::replace(r, Term::s()));
        }
        while let Some(t) = stack.pop() {
            if let Some(mut node) = Arc::into_inner(t.0) {
                if let TermKind::App(l, r) = &mut node.kind {
                    stack.push(std::mem::replace(l, Term::s()));
                    stack.push(std::mem::replace(r, Term::s()));
                }
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.size != other.0.size || self.0.normal != other.0.normal {
            return false;
        }
        match (self.kind(), other.kind()) {
            (TermKind::App(a, b), TermKind::App(c, d)) => a == c && b == d,
            (x, y) => x == y,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind().hash(state)
    }
}

fn rank_of_kind(k: &TermKind) -> u8 {
    match k {
        TermKind::S => 0,
        TermKind::K => 1,
        TermKind::Var(_) => 2,
        TermKind::Atom(_) => 3,
        TermKind::Oracle(_) => 4,
        TermKind::App(..) => 5,
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Var(a), TermKind::Var(b)) => a.cmp(b),
            (TermKind::Atom(a), TermKind::Atom(b)) => a.cmp(b),
            (TermKind::Oracle(a), TermKind::Oracle(b)) => a.cmp(b),
            (TermKind::App(a, b), TermKind::App(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            (x, y) => rank_of_kind(x).cmp(&rank_of_kind(y)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_term(t: &Term, f: &mut fmt::Formatter<'_>, sugar: bool, nested: bool) -> fmt::Result {
    if sugar {
        if let Some(n) = crate::stdlib::numeral_value(t) {
            return write!(f, "#{n}");
        }
    }
    match t.kind() {
        TermKind::S => f.write_str("S"),
        TermKind::K => f.write_str("K"),
        TermKind::Var(i) => write!(f, "x{i}"),
        TermKind::Atom(i) => write!(f, "a{i}"),
        TermKind::Oracle(p) => write!(f, "z{p}"),
        TermKind::App(..) => {
            let (head, args) = t.spine();
            if nested {
                f.write_str("(")?;
            }
            write_term(head, f, sugar, true)?;
            for a in args {
                f.write_str(" ")?;
                write_term(a, f, sugar, true)?;
            }
            if nested {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

/// Minimal-parentheses, left-associative rendering.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, f, false, false)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

pub struct Sugared<'a>(&'a Term);

impl fmt::Display for Sugared<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self.0, f, true, false)
    }
}

/// Plain rendering; `parse(&print(t)) == t` for every term.
pub fn print(t: &Term) -> String {
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&Term::apply(Term::s(), [Term::k(), Term::k()])), "S K K");
        assert_eq!(print(&Term::atom(7)), "a7");
        assert_eq!(
            print(&Term::app(Term::k(), Term::app(Term::k(), Term::atom(1)))),
            "K (K a1)"
        );
    }

    #[test]
    fn normal_form_examples() {
        assert!(t("K a1").is_normal());
        assert!(!t("K a1 a2").is_normal());
        assert!(t("z[] x0").is_normal());
        assert!(!t("z[] a1").is_normal());
        assert!(!t("S a1 a2 a3").is_normal());
        assert!(t("S a1 a2").is_normal());
        assert!(!t("a1 (K a1 a2)").is_normal());
    }

    #[test]
    fn closed_examples() {
        assert!(t("S K K").is_closed());
        assert!(!t("x3").is_closed());
        assert!(!t("K (z[] a1) x0").is_closed());
    }

    #[test]
    fn atom_examples() {
        assert_eq!(t("K a1 (a3 a1)").atoms_of(), BTreeSet::from([1, 3]));
        assert!(t("z[5->6,6->5]").atoms_of().is_empty());
        assert!(t("S K K").atoms_of().is_empty());
    }

    #[test]
    fn automorphism_examples() {
        let sw = Perm::swap(1, 2);
        assert_eq!(t("a1 a2").permute(&sw), t("a2 a1"));
        assert_eq!(t("S K K").permute(&sw), t("S K K"));
        // F = (1 7), π = (1 2): F∘π⁻¹ sends 1 -> F(2) = 2, 2 -> F(1) = 7, 7 -> F(7) = 1.
        assert_eq!(t("z[1->7,7->1]").permute(&sw), t("z[1->2,2->7,7->1]"));
    }

    #[test]
    fn variables_are_fixed_by_automorphisms() {
        assert_eq!(t("x1 a1").permute(&Perm::swap(1, 2)), t("x1 a2"));
    }

    #[test]
    fn deep_terms_drop_without_overflow() {
        let mut acc = Term::k();
        for _ in 0..200_000 {
            acc = Term::app(Term::k(), acc);
        }
        assert_eq!(acc.size(), 400_001);
        drop(acc);
    }
}
