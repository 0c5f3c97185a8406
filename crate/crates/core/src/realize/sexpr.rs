//! The s-expression file format for realizability sets, formulas, queries
//! and verdicts.
//!
//! ```text
//! item    := (define NAME set) | (query "term" formula)
//!          | (candidates "term" ...) | (universe set ...)
//!          | (result (query "term" formula) verdict)
//! set     := NAME | (rset (pair "term" set) ...) | (lrset (labeled 0|1 "term" set) ...)
//!          | (num N) | (omega N) | (graph "term" T) | (opair set set) | (upair set set)
//!          | (label 0|1 set) | (project set) | (lift "perm" set)
//! formula := (mem ref ref) | (eq ref ref) | (and f f) | (or f f) | (implies f f)
//!          | (not f) | (bex ref f) | (ball ref f) | (ex f) | (all f)
//! ref     := set | %i | (opair ref ref)
//! verdict := REALIZED | NOT-REALIZED | (UNKNOWN reason (cap N) [(candidates N)] [(universe N)])
//! ```
//!
//! `%0` is the innermost bound variable. Comments start with `;`.

use std::collections::BTreeMap;
use std::fmt;

use lexpr::Value;

use super::formula::{Bounds, Formula, SetRef, UnknownReason, Verdict};
use super::rset::{
    canonical_numeral, graph_rset, labeled_ordered_pair, labeled_unordered_pair, omega_truncation, ordered_pair,
    unordered_pair, GraphError, Label, LabeledRSet, RSet,
};
use crate::term::{parse, parse_perm, ParseError, Term};

/// A parameter of either kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SetValue {
    Plain(RSet),
    Labeled(LabeledRSet),
}

impl SetValue {
    /// The plain set; labeled sets are rejected rather than projected.
    pub fn plain(&self) -> Result<RSet, FileError> {
        match self {
            SetValue::Plain(a) => Ok(a.clone()),
            SetValue::Labeled(a) => Err(FileError::Kind(format!("labeled set {a} where a plain set is needed; use (project ...)"))),
        }
    }

    /// The labeled set; plain sets are labeled 0 hereditarily.
    pub fn labeled(&self) -> LabeledRSet {
        match self {
            SetValue::Plain(a) => a.labeled(Label::Zero),
            SetValue::Labeled(a) => a.clone(),
        }
    }
}

impl fmt::Display for SetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetValue::Plain(a) => a.fmt(f),
            SetValue::Labeled(a) => a.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub realizer: Term,
    pub formula: Formula<SetValue>,
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub defines: BTreeMap<String, SetValue>,
    pub queries: Vec<Query>,
    pub candidates: Vec<Term>,
    pub universe: Vec<SetValue>,
    pub results: Vec<(Query, Verdict)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FileError {
    #[error("s-expression syntax: {0}")]
    Syntax(String),
    #[error("expected {expected}, found {found}")]
    Shape { expected: &'static str, found: String },
    #[error("bad term {text:?}: {source}")]
    Term { text: String, source: ParseError },
    #[error("undefined set name {0}")]
    Undefined(String),
    #[error("{0}")]
    Kind(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn shape(expected: &'static str, found: &Value) -> FileError {
    FileError::Shape { expected, found: found.to_string() }
}

/// Reads every top-level s-expression.
pub fn read_all(text: &str) -> Result<Vec<Value>, FileError> {
    let stripped: String = text
        .lines()
        .map(|l| strip_comment(l))
        .collect::<Vec<_>>()
        .join("\n");
    lexpr::Parser::from_str(&stripped)
        .value_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| FileError::Syntax(e.to_string()))
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_str => escaped = true,
            '"' => in_str = !in_str,
            ';' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn list(v: &Value) -> Option<(&str, Vec<&Value>)> {
    let items: Vec<&Value> = v.list_iter()?.collect();
    let (head, rest) = items.split_first()?;
    Some((head.as_symbol()?, rest.to_vec()))
}

fn term_of(v: &Value) -> Result<Term, FileError> {
    let text = v.as_str().ok_or_else(|| shape("a quoted term", v))?;
    parse(text).map_err(|source| FileError::Term { text: text.to_string(), source })
}

fn nat(v: &Value) -> Result<u64, FileError> {
    v.as_u64().ok_or_else(|| shape("a natural number", v))
}

fn label(v: &Value) -> Result<Label, FileError> {
    nat(v).ok().and_then(|b| u8::try_from(b).ok()).and_then(Label::from_bit).ok_or_else(|| shape("label 0 or 1", v))
}

fn arity<'a>(args: &[&'a Value], n: usize, expected: &'static str, whole: &Value) -> Result<(), FileError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(shape(expected, whole))
    }
}

fn pair_values(a: SetValue, b: SetValue, ordered: bool) -> SetValue {
    match (a, b) {
        (SetValue::Plain(a), SetValue::Plain(b)) if ordered => SetValue::Plain(ordered_pair(&a, &b)),
        (SetValue::Plain(a), SetValue::Plain(b)) => SetValue::Plain(unordered_pair(&a, &b)),
        (a, b) if ordered => SetValue::Labeled(labeled_ordered_pair(&a.labeled(), &b.labeled())),
        (a, b) => SetValue::Labeled(labeled_unordered_pair(&a.labeled(), &b.labeled())),
    }
}

struct Reader<'a> {
    defines: &'a BTreeMap<String, SetValue>,
    cap: u32,
}

impl Reader<'_> {
    fn set(&self, v: &Value) -> Result<SetValue, FileError> {
        if let Some(name) = v.as_symbol() {
            if name == "empty" {
                return Ok(SetValue::Plain(RSet::empty()));
            }
            return self.defines.get(name).cloned().ok_or_else(|| FileError::Undefined(name.to_string()));
        }
        let (head, args) = list(v).ok_or_else(|| shape("a set expression", v))?;
        match head {
            "rset" => {
                let mut pairs = Vec::new();
                for item in args {
                    match list(item) {
                        Some(("pair", a)) if a.len() == 2 => pairs.push((term_of(a[0])?, self.set(a[1])?.plain()?)),
                        _ => return Err(shape("(pair \"term\" set)", item)),
                    }
                }
                Ok(SetValue::Plain(RSet::from_pairs(pairs)))
            }
            "lrset" => {
                let mut triples = Vec::new();
                for item in args {
                    match list(item) {
                        Some(("labeled", a)) if a.len() == 3 => {
                            triples.push((label(a[0])?, term_of(a[1])?, self.set(a[2])?.labeled()))
                        }
                        _ => return Err(shape("(labeled 0|1 \"term\" set)", item)),
                    }
                }
                Ok(SetValue::Labeled(LabeledRSet::from_triples(triples)))
            }
            "num" => {
                arity(&args, 1, "(num N)", v)?;
                Ok(SetValue::Plain(canonical_numeral(nat(args[0])?)))
            }
            "omega" => {
                arity(&args, 1, "(omega N)", v)?;
                Ok(SetValue::Plain(omega_truncation(nat(args[0])?)))
            }
            "graph" => {
                arity(&args, 2, "(graph \"term\" T)", v)?;
                Ok(SetValue::Plain(graph_rset(&term_of(args[0])?, nat(args[1])?, self.cap)?))
            }
            "opair" | "upair" => {
                arity(&args, 2, "(opair set set)", v)?;
                Ok(pair_values(self.set(args[0])?, self.set(args[1])?, head == "opair"))
            }
            "label" => {
                arity(&args, 2, "(label 0|1 set)", v)?;
                Ok(SetValue::Labeled(self.set(args[1])?.plain()?.labeled(label(args[0])?)))
            }
            "project" => {
                arity(&args, 1, "(project set)", v)?;
                Ok(SetValue::Plain(self.set(args[0])?.labeled().project()))
            }
            "lift" => {
                arity(&args, 2, "(lift \"perm\" set)", v)?;
                let text = args[0].as_str().ok_or_else(|| shape("a quoted permutation", args[0]))?;
                let perm = parse_perm(text).map_err(|source| FileError::Term { text: text.to_string(), source })?;
                Ok(match self.set(args[1])? {
                    SetValue::Plain(a) => SetValue::Plain(a.permute(&perm)),
                    SetValue::Labeled(a) => SetValue::Labeled(a.lift_perm(&perm)),
                })
            }
            _ => Err(shape("a set expression", v)),
        }
    }

    fn set_ref(&self, v: &Value) -> Result<SetRef<SetValue>, FileError> {
        if let Some(i) = v.as_symbol().and_then(|s| s.strip_prefix('%')) {
            return i.parse().map(SetRef::Bound).map_err(|_| shape("a bound variable %i", v));
        }
        if let Some(("opair", args)) = list(v) {
            arity(&args, 2, "(opair ref ref)", v)?;
            return Ok(SetRef::pair(self.set_ref(args[0])?, self.set_ref(args[1])?));
        }
        self.set(v).map(SetRef::Param)
    }

    fn formula(&self, v: &Value) -> Result<Formula<SetValue>, FileError> {
        let (head, args) = list(v).ok_or_else(|| shape("a formula", v))?;
        let two = |expected| arity(&args, 2, expected, v);
        Ok(match head {
            "mem" | "eq" => {
                two("(mem ref ref)")?;
                let (a, b) = (self.set_ref(args[0])?, self.set_ref(args[1])?);
                if head == "mem" {
                    Formula::Mem(a, b)
                } else {
                    Formula::Eq(a, b)
                }
            }
            "and" | "or" | "implies" => {
                two("(and f f)")?;
                let (a, b) = (Box::new(self.formula(args[0])?), Box::new(self.formula(args[1])?));
                match head {
                    "and" => Formula::And(a, b),
                    "or" => Formula::Or(a, b),
                    _ => Formula::Implies(a, b),
                }
            }
            "not" => {
                arity(&args, 1, "(not f)", v)?;
                Formula::Not(Box::new(self.formula(args[0])?))
            }
            "bex" | "ball" => {
                two("(bex ref f)")?;
                let (a, body) = (self.set_ref(args[0])?, Box::new(self.formula(args[1])?));
                if head == "bex" {
                    Formula::BoundedExists(a, body)
                } else {
                    Formula::BoundedForall(a, body)
                }
            }
            "ex" | "all" => {
                arity(&args, 1, "(ex f)", v)?;
                let body = Box::new(self.formula(args[0])?);
                if head == "ex" {
                    Formula::Exists(body)
                } else {
                    Formula::Forall(body)
                }
            }
            _ => return Err(shape("a formula", v)),
        })
    }

    fn query(&self, args: &[&Value], whole: &Value) -> Result<Query, FileError> {
        arity(args, 2, "(query \"term\" formula)", whole)?;
        Ok(Query { realizer: term_of(args[0])?, formula: self.formula(args[1])? })
    }
}

/// Parses a file. `cap` is the budget for `(graph ...)` sets.
pub fn parse_document(text: &str, cap: u32) -> Result<Document, FileError> {
    let mut doc = Document::default();
    for item in read_all(text)? {
        let (head, args) = list(&item).ok_or_else(|| shape("a top-level item", &item))?;
        let reader = Reader { defines: &doc.defines, cap };
        match head {
            "define" => {
                arity(&args, 2, "(define NAME set)", &item)?;
                let name = args[0].as_symbol().ok_or_else(|| shape("a name", args[0]))?.to_string();
                let value = reader.set(args[1])?;
                doc.defines.insert(name, value);
            }
            "query" => {
                let q = reader.query(&args, &item)?;
                doc.queries.push(q);
            }
            "candidates" => {
                let terms = args.iter().map(|a| term_of(a)).collect::<Result<Vec<_>, _>>()?;
                doc.candidates.extend(terms);
            }
            "universe" => {
                let sets = args.iter().map(|a| reader.set(a)).collect::<Result<Vec<_>, _>>()?;
                doc.universe.extend(sets);
            }
            "result" => {
                arity(&args, 2, "(result query verdict)", &item)?;
                let q = match list(args[0]) {
                    Some(("query", qa)) => reader.query(&qa, args[0])?,
                    _ => return Err(shape("(query ...)", args[0])),
                };
                let v = verdict_from_value(args[1])?;
                doc.results.push((q, v));
            }
            _ => return Err(shape("define, query, candidates, universe or result", &item)),
        }
    }
    Ok(doc)
}

fn sym(s: &str) -> Value {
    Value::symbol(s)
}

fn term_value(t: &Term) -> Value {
    Value::string(t.to_string())
}

pub fn rset_to_value(a: &RSet) -> Value {
    let items = a.elements().map(|(e, b)| Value::list(vec![sym("pair"), term_value(e), rset_to_value(b)]));
    Value::list(std::iter::once(sym("rset")).chain(items).collect::<Vec<_>>())
}

pub fn lrset_to_value(a: &LabeledRSet) -> Value {
    let items = a.elements().map(|(s, e, b)| {
        Value::list(vec![sym("labeled"), Value::from(u64::from(s.bit())), term_value(e), lrset_to_value(b)])
    });
    Value::list(std::iter::once(sym("lrset")).chain(items).collect::<Vec<_>>())
}

pub fn set_to_value(a: &SetValue) -> Value {
    match a {
        SetValue::Plain(a) => rset_to_value(a),
        SetValue::Labeled(a) => lrset_to_value(a),
    }
}

fn ref_to_value<S>(r: &SetRef<S>, set: &impl Fn(&S) -> Value) -> Value {
    match r {
        SetRef::Param(s) => set(s),
        SetRef::Bound(i) => sym(&format!("%{i}")),
        SetRef::Pair(a, b) => Value::list(vec![sym("opair"), ref_to_value(a, set), ref_to_value(b, set)]),
    }
}

/// Prints a formula with parameters written by `set`.
pub fn formula_to_value<S>(phi: &Formula<S>, set: &impl Fn(&S) -> Value) -> Value {
    let r = |x: &SetRef<S>| ref_to_value(x, set);
    let f = |x: &Formula<S>| formula_to_value(x, set);
    let items = match phi {
        Formula::Mem(a, b) => vec![sym("mem"), r(a), r(b)],
        Formula::Eq(a, b) => vec![sym("eq"), r(a), r(b)],
        Formula::And(a, b) => vec![sym("and"), f(a), f(b)],
        Formula::Or(a, b) => vec![sym("or"), f(a), f(b)],
        Formula::Implies(a, b) => vec![sym("implies"), f(a), f(b)],
        Formula::Not(a) => vec![sym("not"), f(a)],
        Formula::BoundedExists(a, b) => vec![sym("bex"), r(a), f(b)],
        Formula::BoundedForall(a, b) => vec![sym("ball"), r(a), f(b)],
        Formula::Exists(a) => vec![sym("ex"), f(a)],
        Formula::Forall(a) => vec![sym("all"), f(a)],
    };
    Value::list(items)
}

pub fn query_to_value(q: &Query) -> Value {
    Value::list(vec![sym("query"), term_value(&q.realizer), formula_to_value(&q.formula, &set_to_value)])
}

pub fn verdict_to_value(v: &Verdict) -> Value {
    match v {
        Verdict::Realized => sym("REALIZED"),
        Verdict::NotRealized => sym("NOT-REALIZED"),
        Verdict::Unknown { reason, bounds } => {
            let mut items = vec![sym("UNKNOWN"), sym(reason.as_str())];
            items.push(Value::list(vec![sym("cap"), Value::from(u64::from(bounds.cap))]));
            if let Some(c) = bounds.candidates {
                items.push(Value::list(vec![sym("candidates"), Value::from(c as u64)]));
            }
            if let Some(u) = bounds.universe {
                items.push(Value::list(vec![sym("universe"), Value::from(u as u64)]));
            }
            Value::list(items)
        }
    }
}

pub fn verdict_from_value(v: &Value) -> Result<Verdict, FileError> {
    match v.as_symbol() {
        Some("REALIZED") => return Ok(Verdict::Realized),
        Some("NOT-REALIZED") => return Ok(Verdict::NotRealized),
        _ => {}
    }
    let (head, args) = list(v).ok_or_else(|| shape("a verdict", v))?;
    if head != "UNKNOWN" || args.is_empty() {
        return Err(shape("a verdict", v));
    }
    let reason = match args[0].as_symbol() {
        Some("budget") => UnknownReason::Budget,
        Some("approximate-fragment") => UnknownReason::ApproximateFragment,
        _ => return Err(shape("budget or approximate-fragment", args[0])),
    };
    let mut bounds = Bounds::default();
    for b in &args[1..] {
        let (key, val) = match list(b) {
            Some((key, val)) if val.len() == 1 => (key, nat(val[0])?),
            _ => return Err(shape("(cap N), (candidates N) or (universe N)", b)),
        };
        match key {
            "cap" => bounds.cap = u32::try_from(val).map_err(|_| shape("a cap below 2^32", b))?,
            "candidates" => bounds.candidates = Some(val as usize),
            "universe" => bounds.universe = Some(val as usize),
            _ => return Err(shape("(cap N), (candidates N) or (universe N)", b)),
        }
    }
    Ok(Verdict::Unknown { reason, bounds })
}

pub fn result_to_value(q: &Query, v: &Verdict) -> Value {
    Value::list(vec![sym("result"), query_to_value(q), verdict_to_value(v)])
}

/// Converts parameters, failing on the first rejected one.
pub fn convert_formula<S, T>(
    phi: &Formula<S>,
    conv: &impl Fn(&S) -> Result<T, FileError>,
) -> Result<Formula<T>, FileError> {
    fn r<S, T>(x: &SetRef<S>, conv: &impl Fn(&S) -> Result<T, FileError>) -> Result<SetRef<T>, FileError> {
        Ok(match x {
            SetRef::Param(s) => SetRef::Param(conv(s)?),
            SetRef::Bound(i) => SetRef::Bound(*i),
            SetRef::Pair(a, b) => SetRef::Pair(Box::new(r(a, conv)?), Box::new(r(b, conv)?)),
        })
    }
    let f = |x: &Formula<S>| convert_formula(x, conv).map(Box::new);
    Ok(match phi {
        Formula::Mem(a, b) => Formula::Mem(r(a, conv)?, r(b, conv)?),
        Formula::Eq(a, b) => Formula::Eq(r(a, conv)?, r(b, conv)?),
        Formula::And(a, b) => Formula::And(f(a)?, f(b)?),
        Formula::Or(a, b) => Formula::Or(f(a)?, f(b)?),
        Formula::Implies(a, b) => Formula::Implies(f(a)?, f(b)?),
        Formula::Not(a) => Formula::Not(f(a)?),
        Formula::BoundedExists(a, b) => Formula::BoundedExists(r(a, conv)?, f(b)?),
        Formula::BoundedForall(a, b) => Formula::BoundedForall(r(a, conv)?, f(b)?),
        Formula::Exists(a) => Formula::Exists(f(a)?),
        Formula::Forall(a) => Formula::Forall(f(a)?),
    })
}

impl Query {
    pub fn plain(&self) -> Result<Formula<RSet>, FileError> {
        convert_formula(&self.formula, &SetValue::plain)
    }

    pub fn labeled(&self) -> Formula<LabeledRSet> {
        convert_formula(&self.formula, &|s: &SetValue| Ok(s.labeled())).expect("labeling is total")
    }
}
