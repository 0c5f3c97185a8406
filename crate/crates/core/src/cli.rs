//! The `pca-forge` command line.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 unknown or budget
//! exhausted, 3 usage or parse error.

use std::fmt::Display;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexpr::Value;

use crate::gadgets::{atom_preservation_probe, probe_type1, probe_type2_identity, Gadgets, ProbeReport, Profile};
use crate::realize::{
    build_rn, check, check0_gamma, check0_gamma_approx, check0_ip, check0_ip_approx, check_bounded_approx,
    iplemma_check, padded_instance, parse_document, result_to_value, verdict_to_value, Document, Query, RSet,
    RnConfig, SetValue, Verdict,
};
use crate::reduce::{Engine, ReductionOutcome, TraceStep};
use crate::selftest::{self, Fault};
use crate::stdlib::lam;
use crate::term::{parse, parse_perm, Perm, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pca-forge", version, about = "Term-model pca with oracles, halting gadgets and realizability checkers")]
pub struct Cli {
    /// Stage budget for every reduction.
    #[arg(long, global = true, env = "PCA_FORGE_CAP", default_value_t = 100_000)]
    pub cap: u32,
    /// Print the reduction trace before the result.
    #[arg(long, global = true)]
    pub trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print numerals and stdlib terms by name.
    #[arg(long, global = true)]
    pub sugar: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One s-expression per result.
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a term.
    Eval { term: String },
    /// Bracket-abstract variables out of a term: `abstract --var 0 "x0 x0"`.
    Abstract {
        term: String,
        /// Variable indices, outermost first.
        #[arg(long = "var", required = true)]
        vars: Vec<u32>,
    },
    /// Permutation utilities.
    #[command(subcommand)]
    Perm(PermCommand),
    /// Halting gadgets and probes.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Realizability checks.
    #[command(subcommand)]
    Realize(RealizeCommand),
    /// Run the fixed-seed invariant suites.
    Selftest {
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, default_value = "halts@3")]
        profile: String,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PermCommand {
    /// Apply the automorphism of a permutation to a term.
    Apply { perm: String, term: String },
    /// `p ∘ q`, with q applied first.
    Compose { p: String, q: String },
    Invert { perm: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GadgetKind {
    G,
    U,
    V,
    T,
    Tprime,
    F,
}

#[derive(Debug, Args)]
pub struct GadgetSpecArgs {
    /// `halts@K` or `never`.
    #[arg(long, default_value = "never")]
    pub profile: String,
    #[arg(long, default_value_t = 0)]
    pub m: u64,
    #[arg(long, default_value_t = crate::gadgets::DEFAULT_HORIZON)]
    pub horizon: u64,
}

#[derive(Debug, Subcommand)]
pub enum GadgetCommand {
    /// Print one of the gadget terms.
    Build {
        #[arg(value_enum)]
        kind: GadgetKind,
        #[command(flatten)]
        spec: GadgetSpecArgs,
        #[arg(long, default_value_t = 1)]
        atom: u32,
        /// The oracle `F` of `ζ_F`.
        #[arg(long, default_value = "[]")]
        perm: String,
    },
    #[command(subcommand)]
    Probe(ProbeCommand),
    /// Same as `probe atoms`.
    Atoms(AtomsArgs),
}

#[derive(Debug, Args)]
pub struct AtomsArgs {
    /// The candidate type 2 identity `e`.
    pub term: String,
    #[command(flatten)]
    pub spec: GadgetSpecArgs,
    #[arg(long)]
    pub atom: u32,
    #[arg(long, default_value = "[]")]
    pub perm: String,
    #[arg(long)]
    pub perm_prime: String,
}

#[derive(Debug, Subcommand)]
pub enum ProbeCommand {
    /// Check `t n` is a numeral for every `n ≤ bound`.
    Type1 {
        term: String,
        #[arg(long, default_value_t = 20)]
        bound: u64,
    },
    /// Check `e f n = f n` over the given probes.
    Type2id {
        term: String,
        #[arg(long = "probe", required = true)]
        probes: Vec<String>,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Reduce `e f(ζ_F)` and `e f(ζ_F′)` and look for the atom.
    Atoms(AtomsArgs),
}

#[derive(Debug, Args)]
pub struct FileArgs {
    #[arg(long)]
    pub file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum RealizeCommand {
    /// `e ⊩ φ` in `V(𝒜)` for every query in the file.
    Check(FileArgs),
    /// `e ⊩₀ φ` in `V_Γ(𝒜)`; plain parameters are labelled 0.
    Check0g(FileArgs),
    /// `e ⊩₀ φ` in `V_ip(𝒜)`.
    Check0ip(FileArgs),
    /// The injective presentation lemma on one instance.
    Iplemma {
        /// A file defining the sets named by --a and --b.
        #[arg(long, conflicts_with = "padded")]
        file: Option<PathBuf>,
        #[arg(long, default_value = "a")]
        a: String,
        #[arg(long, default_value = "b")]
        b: String,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        /// Use the built-in instance `n,j,r,pad`.
        #[arg(long)]
        padded: Option<String>,
    },
    /// Build an `R_N` approximant and validate its realizer.
    Rn {
        #[arg(long)]
        n: u64,
        #[arg(long = "probe", required = true)]
        probes: Vec<String>,
        #[arg(long, default_value_t = 3)]
        graph_limit: u64,
        #[arg(long)]
        n_limit: Option<u64>,
    },
}

struct UsageError(String);

impl<E: Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<i32, UsageError>;

struct Ctx<'a> {
    cap: u32,
    trace: bool,
    machine: bool,
    sugar: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl Display) {
        let _ = writeln!(self.out, "{s}");
    }

    fn term(&self, t: &Term) -> String {
        if self.sugar {
            t.display_sugared().to_string()
        } else {
            t.to_string()
        }
    }

    fn emit(&mut self, text: impl Display, machine: impl FnOnce() -> Value) {
        if self.machine {
            let v = machine();
            self.line(v);
        } else {
            self.line(text);
        }
    }
}

fn sym(s: &str) -> Value {
    Value::symbol(s)
}

fn string(s: impl Display) -> Value {
    Value::string(s.to_string())
}

fn nat(n: u64) -> Value {
    Value::from(n)
}

pub fn outcome_to_value(o: &ReductionOutcome) -> Value {
    match o {
        ReductionOutcome::Reduced { value, stage } => {
            Value::list(vec![sym("reduced"), string(value), Value::list(vec![sym("stage"), nat(u64::from(*stage))])])
        }
        ReductionOutcome::BudgetExhausted { cap, .. } => Value::list(vec![sym("exhausted"), nat(u64::from(*cap))]),
    }
}

fn step_to_value(s: &TraceStep) -> Value {
    Value::list(vec![sym("step"), sym(s.clause.tag()), string(&s.redex), string(&s.contractum)])
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Realized => EXIT_OK,
        Verdict::NotRealized => EXIT_NEGATIVE,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    }
}

/// 1 if anything failed, else 2 if anything was undecided, else 0.
fn combine(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().fold(EXIT_OK, |acc, c| match (acc, c) {
        (EXIT_USAGE, _) | (_, EXIT_USAGE) => EXIT_USAGE,
        (EXIT_NEGATIVE, _) | (_, EXIT_NEGATIVE) => EXIT_NEGATIVE,
        (EXIT_UNKNOWN, _) | (_, EXIT_UNKNOWN) => EXIT_UNKNOWN,
        _ => EXIT_OK,
    })
}

fn term_arg(s: &str) -> Result<Term, UsageError> {
    parse(s).map_err(|e| UsageError(format!("bad term {s:?}: {e}")))
}

fn perm_arg(s: &str) -> Result<Perm, UsageError> {
    parse_perm(s).map_err(|e| UsageError(format!("bad permutation {s:?}: {e}")))
}

fn profile_arg(s: &str) -> Result<Profile, UsageError> {
    Ok(s.parse::<Profile>()?)
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let mut ctx = Ctx { cap: cli.cap, trace: cli.trace, machine: cli.format == Format::Machine, sugar: cli.sugar, out };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn main_exit_code() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: Command, ctx: &mut Ctx<'_>) -> CmdResult {
    match cmd {
        Command::Eval { term } => eval(&term, ctx),
        Command::Abstract { term, vars } => {
            let t = term_arg(&term)?;
            let out = lam(&vars, t);
            let text = ctx.term(&out);
            ctx.emit(&text, || Value::list(vec![sym("abstract"), string(&term), string(&out)]));
            Ok(EXIT_OK)
        }
        Command::Perm(p) => perm(p, ctx),
        Command::Gadget(g) => gadget(g, ctx),
        Command::Realize(r) => realize(r, ctx),
        Command::Selftest { suites, profile, seed, cases, inject_fault } => {
            let fault = match inject_fault.as_deref() {
                None => None,
                Some("k-law") => Some(Fault::KLaw),
                Some(other) => return Err(UsageError(format!("unknown fault {other:?}"))),
            };
            let opts = selftest::Options { suites, profile: profile_arg(&profile)?, seed, cases, fault };
            let results = selftest::run(&opts)?;
            for r in &results {
                ctx.emit(r, || {
                    let status = if r.passed() { "PASS" } else { "FAIL" };
                    let mut items = vec![sym("suite"), sym(r.name), sym(status), Value::list(vec![sym("cases"), nat(r.cases as u64)])];
                    if let Some(first) = r.failures.first() {
                        items.push(Value::list(vec![sym("first-failure"), string(first)]));
                    }
                    Value::list(items)
                });
            }
            Ok(if results.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn eval(text: &str, ctx: &mut Ctx<'_>) -> CmdResult {
    let t = term_arg(text)?;
    let engine = Engine::default();
    let out = if ctx.trace {
        let (steps, out) = engine.trace(&t, ctx.cap);
        for s in &steps {
            let line = format!("{} | {} -> {}", s.clause.tag(), ctx.term(&s.redex), ctx.term(&s.contractum));
            ctx.emit(line, || step_to_value(s));
        }
        out
    } else {
        engine.red(&t, ctx.cap)
    };
    let text_out = match &out {
        ReductionOutcome::Reduced { value, .. } => ctx.term(value),
        other => other.to_string(),
    };
    ctx.emit(text_out, || Value::list(vec![sym("eval"), string(&t), outcome_to_value(&out)]));
    Ok(if out.is_reduced() { EXIT_OK } else { EXIT_UNKNOWN })
}

fn perm(cmd: PermCommand, ctx: &mut Ctx<'_>) -> CmdResult {
    match cmd {
        PermCommand::Apply { perm, term } => {
            let (p, t) = (perm_arg(&perm)?, term_arg(&term)?);
            let out = t.permute(&p);
            let text = ctx.term(&out);
            ctx.emit(text, || Value::list(vec![sym("perm-apply"), string(&p), string(&t), string(&out)]));
        }
        PermCommand::Compose { p, q } => {
            let (p, q) = (perm_arg(&p)?, perm_arg(&q)?);
            let out = p.compose(&q);
            ctx.emit(&out, || Value::list(vec![sym("perm-compose"), string(&p), string(&q), string(&out)]));
        }
        PermCommand::Invert { perm } => {
            let p = perm_arg(&perm)?;
            let out = p.inverse();
            ctx.emit(&out, || Value::list(vec![sym("perm-invert"), string(&p), string(&out)]));
        }
    }
    Ok(EXIT_OK)
}

fn report_value(kind: &str, r: &ProbeReport) -> Value {
    let mut items = vec![sym("probe"), sym(kind), string(&r.subject)];
    match &r.witness {
        None => items.push(sym("CONSISTENT-UP-TO")),
        Some(_) => items.push(sym("COUNTEREXAMPLE-AT")),
    }
    items.push(Value::list(vec![sym("bound"), nat(r.bound)]));
    items.push(Value::list(vec![sym("cap"), nat(u64::from(r.budget))]));
    if let Some(w) = &r.witness {
        let mut wit = vec![sym("witness"), Value::list(vec![sym("input"), nat(w.input)])];
        if let Some(p) = w.probe {
            wit.push(Value::list(vec![sym("probe"), nat(p as u64)]));
        }
        wit.push(outcome_to_value(&w.outcome));
        if let Some(e) = &w.expected {
            wit.push(Value::list(vec![sym("expected"), string(e)]));
        }
        items.push(Value::list(wit));
    }
    Value::list(items)
}

fn probe_code(r: &ProbeReport) -> i32 {
    if r.is_consistent() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn gadget(cmd: GadgetCommand, ctx: &mut Ctx<'_>) -> CmdResult {
    match cmd {
        GadgetCommand::Build { kind, spec, atom, perm } => {
            let profile = profile_arg(&spec.profile)?;
            let gs = Gadgets::with_horizon(&profile, spec.m, spec.horizon);
            let oracle = perm_arg(&perm)?;
            let t = match kind {
                GadgetKind::G => gs.g(),
                GadgetKind::U => gs.u(),
                GadgetKind::V => gs.v(),
                GadgetKind::T => gs.t(),
                GadgetKind::Tprime => gs.t_prime_at(atom, &oracle)?,
                GadgetKind::F => gs.f(atom, &oracle)?,
            };
            let name = format!("{kind:?}").to_lowercase();
            let text = ctx.term(&t);
            ctx.emit(text, || Value::list(vec![sym("gadget"), sym(&name), string(&t)]));
            Ok(EXIT_OK)
        }
        GadgetCommand::Probe(ProbeCommand::Type1 { term, bound }) => {
            let r = probe_type1(&term_arg(&term)?, bound, ctx.cap);
            ctx.emit(&r, || report_value("type1", &r));
            Ok(probe_code(&r))
        }
        GadgetCommand::Probe(ProbeCommand::Type2id { term, probes, bound }) => {
            let e = term_arg(&term)?;
            let probes = probes.iter().map(|p| term_arg(p)).collect::<Result<Vec<_>, _>>()?;
            let r = probe_type2_identity(&e, &probes, bound, ctx.cap)?;
            ctx.emit(&r, || report_value("type2id", &r));
            Ok(probe_code(&r))
        }
        GadgetCommand::Probe(ProbeCommand::Atoms(a)) | GadgetCommand::Atoms(a) => {
            let profile = profile_arg(&a.spec.profile)?;
            let gs = Gadgets::with_horizon(&profile, a.spec.m, a.spec.horizon);
            let e = term_arg(&a.term)?;
            let (f, fp) = (perm_arg(&a.perm)?, perm_arg(&a.perm_prime)?);
            let r = atom_preservation_probe(&e, &gs, a.atom, &f, &fp, ctx.cap)?;
            ctx.emit(&r, || {
                let flag = |b: bool| sym(if b { "true" } else { "false" });
                Value::list(vec![
                    sym("atoms"),
                    string(&e),
                    Value::list(vec![sym("value"), outcome_to_value(&r.value)]),
                    Value::list(vec![sym("value-prime"), outcome_to_value(&r.value_prime)]),
                    Value::list(vec![sym("atom"), nat(u64::from(r.atom)), flag(r.atom_present)]),
                    Value::list(vec![sym("variants-equal"), flag(r.variants_equal)]),
                    Value::list(std::iter::once(sym("new-atoms")).chain(r.new_atoms.iter().map(|&i| nat(u64::from(i)))).collect::<Vec<_>>()),
                ])
            });
            Ok(if r.reduced() { EXIT_OK } else { EXIT_UNKNOWN })
        }
    }
}

fn load(path: &PathBuf, cap: u32) -> Result<Document, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let doc = parse_document(&text, cap).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    for q in &doc.queries {
        if !q.formula_is_closed() {
            return Err(UsageError(format!("{}: formula has an unbound variable", path.display())));
        }
    }
    Ok(doc)
}

impl Query {
    fn formula_is_closed(&self) -> bool {
        self.labeled().is_closed()
    }
}

#[derive(Clone, Copy)]
enum Relation {
    V,
    Gamma,
    Ip,
}

fn realize_file(path: &PathBuf, rel: Relation, ctx: &mut Ctx<'_>) -> CmdResult {
    let doc = load(path, ctx.cap)?;
    let approx = !doc.candidates.is_empty() || !doc.universe.is_empty();
    let mut codes = Vec::new();
    for q in &doc.queries {
        let e = &q.realizer;
        let verdict = match rel {
            Relation::V => {
                let phi = q.plain()?;
                if approx {
                    let universe = doc.universe.iter().map(SetValue::plain).collect::<Result<Vec<RSet>, _>>()?;
                    check_bounded_approx(e, &phi, &doc.candidates, &universe, ctx.cap)
                } else {
                    check(e, &phi, ctx.cap)
                }
            }
            Relation::Gamma => {
                let phi = q.labeled();
                if approx {
                    let universe: Vec<_> = doc.universe.iter().map(SetValue::labeled).collect();
                    check0_gamma_approx(e, &phi, &doc.candidates, &universe, ctx.cap)
                } else {
                    check0_gamma(e, &phi, ctx.cap)
                }
            }
            Relation::Ip => {
                let phi = q.plain()?;
                if approx {
                    let universe = doc.universe.iter().map(SetValue::plain).collect::<Result<Vec<RSet>, _>>()?;
                    check0_ip_approx(e, &phi, &doc.candidates, &universe, ctx.cap)?
                } else {
                    check0_ip(e, &phi, ctx.cap)?
                }
            }
        };
        ctx.emit(verdict, || result_to_value(q, &verdict));
        codes.push(verdict_code(&verdict));
    }
    Ok(combine(codes))
}

fn realize(cmd: RealizeCommand, ctx: &mut Ctx<'_>) -> CmdResult {
    match cmd {
        RealizeCommand::Check(f) => realize_file(&f.file, Relation::V, ctx),
        RealizeCommand::Check0g(f) => realize_file(&f.file, Relation::Gamma, ctx),
        RealizeCommand::Check0ip(f) => realize_file(&f.file, Relation::Ip, ctx),
        RealizeCommand::Iplemma { file, a, b, f, g, padded } => {
            let (a, b, f, g) = match (padded, file) {
                (Some(spec), _) => {
                    let nums: Vec<u64> = spec.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
                    let [n, j, r, pad] = nums[..] else {
                        return Err(UsageError("--padded takes n,j,r,pad".into()));
                    };
                    if !(r < j && j < n && n < pad) {
                        return Err(UsageError("--padded needs r < j < n < pad".into()));
                    }
                    let inst = padded_instance(n, j, r, pad);
                    (inst.a, inst.b, inst.f, inst.g)
                }
                (None, Some(path)) => {
                    let doc = load(&path, ctx.cap)?;
                    let get = |name: &str| {
                        doc.defines
                            .get(name)
                            .ok_or_else(|| UsageError(format!("{name} is not defined in the file")))
                            .and_then(|s| s.plain().map_err(UsageError::from))
                    };
                    let (Some(f), Some(g)) = (f, g) else {
                        return Err(UsageError("--f and --g are required with --file".into()));
                    };
                    (get(&a)?, get(&b)?, term_arg(&f)?, term_arg(&g)?)
                }
                (None, None) => return Err(UsageError("give --padded or --file".into())),
            };
            let verdict = iplemma_check(&a, &b, &f, &g, ctx.cap)?;
            ctx.emit(verdict, || Value::list(vec![sym("iplemma"), string(&f), string(&g), verdict_to_value(&verdict)]));
            Ok(verdict_code(&verdict))
        }
        RealizeCommand::Rn { n, probes, graph_limit, n_limit } => {
            let probes = probes.iter().map(|p| term_arg(p)).collect::<Result<Vec<_>, _>>()?;
            let config = RnConfig { n, graph_limit, n_limit: n_limit.unwrap_or(n + 3), cap: ctx.cap };
            let rn = build_rn(&probes, config)?;
            for t in &rn.triples {
                let text = format!("{} zeta={} n={}", ctx.term(&t.f), t.zeta, t.n);
                ctx.emit(text, || {
                    Value::list(vec![sym("triple"), string(&t.f), Value::list(vec![sym("zeta"), nat(t.zeta)]), Value::list(vec![sym("n"), nat(t.n)])])
                });
            }
            let part3 = rn.part_three_holds();
            let (v0, v1) = rn.validate_mvf();
            ctx.emit(format!("part-three: {part3}\nmvf ⊩₀: {v0}\nmvf ⊩: {v1}"), || {
                Value::list(vec![
                    sym("rn"),
                    Value::list(vec![sym("part-three"), sym(if part3 { "true" } else { "false" })]),
                    Value::list(vec![sym("check0g"), verdict_to_value(&v0)]),
                    Value::list(vec![sym("check"), verdict_to_value(&v1)]),
                ])
            });
            let code = combine([verdict_code(&v0), verdict_code(&v1)]);
            Ok(if part3 { code } else { EXIT_NEGATIVE })
        }
    }
}
