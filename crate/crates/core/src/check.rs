//! Bidirectional type checking and module-level declaration processing.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use crate::conv::Conv;
use crate::eval::{Machine, Signature};
use crate::print::print_with_globals;
use crate::syntax::{
    CoreDecl, DeclKind, Diagnostic, Hint, Level, Name, RcTerm, Span, Term, DEFAULT_MAX_LEVEL,
};
use crate::value::{Closure, Env, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Judgmental η for Σ-types.
    pub eta_sigma: bool,
    /// Largest universe index a term may mention or infer.
    pub max_level: u32,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            eta_sigma: true,
            max_level: DEFAULT_MAX_LEVEL,
        }
    }
}

/// Checking state for one term: the local context and the declaration span
/// that diagnostics point at.
pub struct Checker<'a> {
    m: Machine<'a>,
    opts: Options,
    names: Vec<Name>,
    tys: Vec<Value>,
    env: Env,
    saved: Vec<Env>,
    span: Span,
}

type CResult<T> = Result<T, Diagnostic>;

impl<'a> Checker<'a> {
    pub fn new(sig: &'a Signature, opts: Options, span: Span) -> Checker<'a> {
        Checker {
            m: Machine::new(sig),
            opts,
            names: Vec::new(),
            tys: Vec::new(),
            env: Env::new(),
            saved: Vec::new(),
            span,
        }
    }

    pub fn machine(&self) -> &Machine<'a> {
        &self.m
    }

    fn depth(&self) -> usize {
        self.tys.len()
    }

    fn push(&mut self, name: &str, ty: Value) -> Value {
        let v = Value::var(self.depth());
        self.names.push(Name::from(name));
        self.tys.push(ty);
        let inner = self.env.push(v.clone());
        self.saved.push(std::mem::replace(&mut self.env, inner));
        v
    }

    fn pop(&mut self, n: usize) {
        let d = self.depth() - n;
        self.names.truncate(d);
        self.tys.truncate(d);
        for _ in 0..n {
            self.env = self.saved.pop().expect("pop matches push");
        }
    }

    fn conv(&self) -> Conv<'_, 'a> {
        Conv::new(&self.m, self.opts.eta_sigma, self.tys.clone())
    }

    pub fn eval(&self, t: &Term) -> Value {
        self.m.eval(&self.env, t)
    }

    /// Renders a value for a diagnostic, keeping definitions folded.
    pub fn show(&self, v: &Value) -> String {
        let t = self.m.quote(self.depth(), v, false);
        self.show_term(&t)
    }

    fn show_term(&self, t: &Term) -> String {
        let sig = self.m.sig;
        let is_global = |s: &str| sig.def_value(s).is_some() || sig.axiom_type(s).is_some();
        print_with_globals(t, &self.names, &is_global)
    }

    fn err(&self, code: &'static str, msg: String) -> Diagnostic {
        Diagnostic::error(code, msg, self.span)
    }

    fn mismatch(&self, t: &Term, expected: &Value, found: &Value) -> Diagnostic {
        self.err(
            "type-mismatch",
            format!(
                "type mismatch in `{}`: expected `{}`, found `{}`",
                self.show_term(t),
                self.show(expected),
                self.show(found)
            ),
        )
    }

    /// Infers the universe a type lives in.
    pub fn infer_universe(&mut self, t: &Term) -> CResult<Level> {
        let ty = self.infer(t)?;
        match self.m.force(&ty) {
            Value::Universe(l) => Ok(l),
            _ => Err(self.err(
                "not-a-type",
                format!(
                    "expected a type, but `{}` has type `{}`",
                    self.show_term(t),
                    self.show(&ty)
                ),
            )),
        }
    }

    pub fn infer(&mut self, t: &Term) -> CResult<Value> {
        match t {
            Term::Var(i) => match self.depth().checked_sub(i + 1) {
                Some(l) => Ok(self.tys[l].clone()),
                None => Err(self.err("ill-scoped", format!("variable index {i} is not bound"))),
            },
            Term::Universe(l) => {
                if l.0 + 1 > self.opts.max_level {
                    return Err(self.err(
                        "level-overflow",
                        format!(
                            "U{} has no type below the level ceiling U{}",
                            l.0, self.opts.max_level
                        ),
                    ));
                }
                Ok(Value::Universe(l.succ()))
            }
            Term::Pi(a, b) | Term::Sigma(a, b) => {
                let i = self.infer_universe(a)?;
                let va = self.eval(a);
                self.push(b.hints[0].as_str(), va);
                let j = self.infer_universe(&b.body);
                self.pop(1);
                Ok(Value::Universe(i.max(j?)))
            }
            Term::IdType(a, x, y) => {
                let i = self.infer_universe(a)?;
                let va = self.eval(a);
                self.check(x, &va)?;
                self.check(y, &va)?;
                Ok(Value::Universe(i))
            }
            Term::App(f, a) => {
                let fty = self.infer(f)?;
                match self.m.force(&fty) {
                    Value::Pi(_, dom, cod) => {
                        self.check(a, &dom)?;
                        Ok(self.m.inst1(&cod, self.eval(a)))
                    }
                    _ => Err(self.err(
                        "not-a-function",
                        format!(
                            "`{}` is applied to an argument but has type `{}`",
                            self.show_term(f),
                            self.show(&fty)
                        ),
                    )),
                }
            }
            Term::Fst(p) | Term::Snd(p) => {
                let pty = self.infer(p)?;
                match self.m.force(&pty) {
                    Value::Sigma(_, a, b) => {
                        if matches!(t, Term::Fst(_)) {
                            Ok((*a).clone())
                        } else {
                            let first = self.m.fst(self.eval(p));
                            Ok(self.m.inst1(&b, first))
                        }
                    }
                    _ => Err(self.err(
                        "not-a-pair",
                        format!(
                            "`{}` is projected but has type `{}`",
                            self.show_term(p),
                            self.show(&pty)
                        ),
                    )),
                }
            }
            Term::Refl(a) => {
                let aty = self.infer(a)?;
                let va = self.eval(a).arc();
                Ok(Value::IdType(aty.arc(), va.clone(), va))
            }
            Term::J { motive, base, path } => {
                let pty = self.infer(path)?;
                let Value::IdType(aty, x, y) = self.m.force(&pty) else {
                    return Err(self.err(
                        "not-a-path",
                        format!(
                            "path induction on `{}` of non-identity type `{}`",
                            self.show_term(path),
                            self.show(&pty)
                        ),
                    ));
                };
                let [hx, hy, hp] = &motive.hints;
                let vx = self.push(hx.as_str(), (*aty).clone());
                let vy = self.push(hy.as_str(), (*aty).clone());
                self.push(hp.as_str(), Value::IdType(aty.clone(), vx.arc(), vy.arc()));
                let r = self.infer_universe(&motive.body);
                self.pop(3);
                r?;
                let mclo = Closure {
                    env: self.env.clone(),
                    body: motive.body.clone(),
                };
                let z = self.push(base.hints[0].as_str(), (*aty).clone());
                let bty = self
                    .m
                    .inst(&mclo, [z.clone(), z.clone(), Value::Refl(z.arc())]);
                let r = self.check(&base.body, &bty);
                self.pop(1);
                r?;
                Ok(self
                    .m
                    .inst(&mclo, [(*x).clone(), (*y).clone(), self.eval(path)]))
            }
            Term::NatType | Term::EmptyType | Term::UnitType | Term::TwoType => {
                Ok(Value::Universe(Level(0)))
            }
            Term::Zero => Ok(Value::NatType),
            Term::Suc(n) => {
                self.check(n, &Value::NatType)?;
                Ok(Value::NatType)
            }
            Term::Star => Ok(Value::UnitType),
            Term::ZeroTwo | Term::OneTwo => Ok(Value::TwoType),
            Term::NatElim {
                motive,
                base,
                step,
                target,
            } => {
                self.check(target, &Value::NatType)?;
                let mclo = self.motive(&motive.hints[0], &motive.body, Value::NatType)?;
                self.check(base, &self.m.inst1(&mclo, Value::Zero))?;
                let [hn, hih] = &step.hints;
                let n = self.push(hn.as_str(), Value::NatType);
                let ihty = self.m.inst1(&mclo, n.clone());
                self.push(hih.as_str(), ihty);
                let sty = self.m.inst1(&mclo, Value::Suc(n.arc()));
                let r = self.check(&step.body, &sty);
                self.pop(2);
                r?;
                Ok(self.m.inst1(&mclo, self.eval(target)))
            }
            Term::EmptyElim { motive, target } => {
                self.check(target, &Value::EmptyType)?;
                let mclo = self.motive(&motive.hints[0], &motive.body, Value::EmptyType)?;
                Ok(self.m.inst1(&mclo, self.eval(target)))
            }
            Term::TwoElim {
                motive,
                case0,
                case1,
                target,
            } => {
                self.check(target, &Value::TwoType)?;
                let mclo = self.motive(&motive.hints[0], &motive.body, Value::TwoType)?;
                self.check(case0, &self.m.inst1(&mclo, Value::ZeroTwo))?;
                self.check(case1, &self.m.inst1(&mclo, Value::OneTwo))?;
                Ok(self.m.inst1(&mclo, self.eval(target)))
            }
            Term::AxiomRef(n) => match self.m.sig.axiom_type(n) {
                Some(ty) => Ok(ty.clone()),
                None => Err(self.err(
                    "unregistered-axiom",
                    format!("axiom `{n}` is not registered"),
                )),
            },
            Term::Const(n) => match self.m.sig.def_type(n) {
                Some(ty) => Ok(ty.clone()),
                None => Err(self.err(
                    "unknown-definition",
                    format!("definition `{n}` is not available"),
                )),
            },
            Term::Ann(a, ty) => {
                self.infer_universe(ty)?;
                let vty = self.eval(ty);
                self.check(a, &vty)?;
                Ok(vty)
            }
            Term::Lam(_) | Term::Pair(..) => Err(self.err(
                "cannot-infer",
                format!(
                    "cannot infer a type for `{}`; add an annotation",
                    self.show_term(t)
                ),
            )),
        }
    }

    /// Checks a one-binder motive over `over` and closes it.
    fn motive(&mut self, hint: &Hint, body: &RcTerm, over: Value) -> CResult<Closure> {
        self.push(hint.as_str(), over);
        let r = self.infer_universe(body);
        self.pop(1);
        r?;
        Ok(Closure {
            env: self.env.clone(),
            body: body.clone(),
        })
    }

    pub fn check(&mut self, t: &Term, expected: &Value) -> CResult<()> {
        match t {
            Term::Lam(b) => match self.m.force(expected) {
                Value::Pi(_, dom, cod) => {
                    let x = self.push(b.hints[0].as_str(), (*dom).clone());
                    let cty = self.m.inst1(&cod, x);
                    let r = self.check(&b.body, &cty);
                    self.pop(1);
                    r
                }
                _ => Err(self.err(
                    "type-mismatch",
                    format!(
                        "function `{}` checked against non-function type `{}`",
                        self.show_term(t),
                        self.show(expected)
                    ),
                )),
            },
            Term::Pair(a, b) => match self.m.force(expected) {
                Value::Sigma(_, aty, bty) => {
                    self.check(a, &aty)?;
                    let va = self.eval(a);
                    self.check(b, &self.m.inst1(&bty, va))
                }
                _ => Err(self.err(
                    "type-mismatch",
                    format!(
                        "pair `{}` checked against non-pair type `{}`",
                        self.show_term(t),
                        self.show(expected)
                    ),
                )),
            },
            Term::Refl(a) => match self.m.force(expected) {
                Value::IdType(aty, x, y) => {
                    self.check(a, &aty)?;
                    let va = self.eval(a);
                    let mut c = self.conv();
                    if c.conv(&va, &x, &aty) && c.conv(&va, &y, &aty) {
                        Ok(())
                    } else {
                        Err(self.err(
                            "endpoint-mismatch",
                            format!(
                                "reflexivity at `{}` does not prove `{}`: endpoints `{}` and `{}` are not judgmentally equal",
                                self.show(&va),
                                self.show(expected),
                                self.show(&x),
                                self.show(&y)
                            ),
                        ))
                    }
                }
                _ => self.subsume(t, expected),
            },
            _ => self.subsume(t, expected),
        }
    }

    fn subsume(&mut self, t: &Term, expected: &Value) -> CResult<()> {
        let found = self.infer(t)?;
        if self.conv().subtype(&found, expected) {
            Ok(())
        } else {
            Err(self.mismatch(t, expected, &found))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Accepted,
    Rejected(Diagnostic),
}

#[derive(Clone, Debug)]
pub struct DeclOutcome {
    pub name: Name,
    pub kind: DeclKind,
    pub provenance: String,
    pub status: Status,
    pub ms: f64,
}

/// Which axioms the kernel will accept. An omitted axiom's declaration is
/// rejected, so everything that mentions it is rejected too.
#[derive(Clone, Debug, Default)]
pub struct AxiomPolicy {
    omitted: Vec<String>,
}

impl AxiomPolicy {
    /// Patterns are exact names, or prefixes when they end in `*`.
    pub fn omitting<I: IntoIterator<Item = S>, S: Into<String>>(patterns: I) -> AxiomPolicy {
        AxiomPolicy {
            omitted: patterns.into_iter().map(Into::into).collect(),
        }
    }

    pub fn allows(&self, name: &str) -> bool {
        !self.omitted.iter().any(|p| match p.strip_suffix('*') {
            Some(prefix) => name.starts_with(prefix),
            None => name == p,
        })
    }
}

/// Accumulated kernel state across declarations: the signature plus the
/// registry of axioms, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Kernel {
    pub opts: Options,
    pub policy: AxiomPolicy,
    sig: Signature,
    rejected: HashMap<Name, ()>,
    axioms: Vec<Name>,
    bodies: HashMap<Name, (Term, Term)>,
}

impl Kernel {
    pub fn new(opts: Options) -> Kernel {
        Kernel {
            opts,
            ..Kernel::default()
        }
    }

    pub fn with_policy(mut self, policy: AxiomPolicy) -> Kernel {
        self.policy = policy;
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Axiom names registered so far, in registration order.
    pub fn registry(&self) -> &[Name] {
        &self.axioms
    }

    pub fn is_rejected(&self, name: &str) -> bool {
        self.rejected.contains_key(name)
    }

    /// The stated type and body of an accepted definition or goal.
    pub fn definition(&self, name: &str) -> Option<&(Term, Term)> {
        self.bodies.get(name)
    }

    /// Records a declaration that failed before reaching the kernel, so that
    /// its dependents are rejected as well.
    pub fn mark_rejected(&mut self, name: Name) {
        self.rejected.insert(name, ());
    }

    pub fn check_module(&mut self, decls: &[CoreDecl]) -> Vec<DeclOutcome> {
        decls.iter().map(|d| self.check_decl(d)).collect()
    }

    pub fn check_decl(&mut self, d: &CoreDecl) -> DeclOutcome {
        let start = Instant::now();
        let result = match catch_unwind(AssertUnwindSafe(|| self.check_decl_inner(d))) {
            Ok(r) => r,
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "kernel panic".into());
                Err(Diagnostic::error("internal", msg, d.span))
            }
        };
        let status = match result {
            Ok(()) => Status::Accepted,
            Err(diag) => {
                if d.kind != DeclKind::Goal {
                    self.rejected.insert(d.name.clone(), ());
                }
                Status::Rejected(diag)
            }
        };
        DeclOutcome {
            name: d.name.clone(),
            kind: d.kind,
            provenance: d.provenance.clone(),
            status,
            ms: start.elapsed().as_secs_f64() * 1000.0,
        }
    }

    fn check_decl_inner(&mut self, d: &CoreDecl) -> Result<(), Diagnostic> {
        let mut blocked = None;
        let mut visit = |n: &Name| {
            if blocked.is_none() && self.rejected.contains_key(n) {
                blocked = Some(n.clone());
            }
        };
        d.ty.for_each_global(&mut visit);
        if let Some(b) = &d.body {
            b.for_each_global(&mut visit);
        }
        if let Some(dep) = blocked {
            return Err(Diagnostic::error(
                "rejected-dependency",
                format!("`{}` depends on rejected declaration `{dep}`", d.name),
                d.span,
            ));
        }
        if d.kind == DeclKind::Axiom && !self.policy.allows(&d.name) {
            return Err(Diagnostic::error(
                "axiom-omitted",
                format!("axiom `{}` is omitted from the registry", d.name),
                d.span,
            ));
        }

        let mut ck = Checker::new(&self.sig, self.opts, d.span);
        ck.infer_universe(&d.ty)?;
        let vty = ck.eval(&d.ty);
        match (&d.kind, &d.body) {
            (DeclKind::Axiom, None) => {
                self.sig.add_axiom(d.name.clone(), vty);
                self.axioms.push(d.name.clone());
                Ok(())
            }
            (DeclKind::Def | DeclKind::Goal, Some(body)) => {
                ck.check(body, &vty)?;
                let value = ck.eval(body);
                self.bodies
                    .insert(d.name.clone(), (d.ty.clone(), body.clone()));
                if d.kind == DeclKind::Def {
                    self.sig.add_def(d.name.clone(), vty, value);
                }
                Ok(())
            }
            _ => Err(Diagnostic::error(
                "malformed",
                format!("`{}` has the wrong shape for a {}", d.name, d.kind),
                d.span,
            )),
        }
    }

    /// Normal form of a checked definition's body, definitions unfolded.
    pub fn normalize(&self, name: &str) -> Option<Term> {
        let (_, body) = self.bodies.get(name)?;
        Some(Machine::new(&self.sig).normalize(&Env::new(), body))
    }

    /// Normal form of a closed term checked against a closed type.
    pub fn normalize_term(&self, t: &Term, ty: &Term) -> Result<Term, Diagnostic> {
        let mut ck = Checker::new(&self.sig, self.opts, Span::default());
        ck.infer_universe(ty)?;
        let vty = ck.eval(ty);
        ck.check(t, &vty)?;
        Ok(Machine::new(&self.sig).normalize(&Env::new(), t))
    }

    /// Checks a closed term against a closed type in the current signature.
    pub fn check_closed(&self, t: &Term, ty: &Term) -> Result<(), Diagnostic> {
        let mut ck = Checker::new(&self.sig, self.opts, Span::default());
        ck.infer_universe(ty)?;
        let vty = ck.eval(ty);
        ck.check(t, &vty)
    }

    /// Infers the type of a closed term, read back with definitions folded.
    pub fn infer_closed(&self, t: &Term) -> Result<Term, Diagnostic> {
        let mut ck = Checker::new(&self.sig, self.opts, Span::default());
        let ty = ck.infer(t)?;
        Ok(ck.machine().quote(0, &ty, false))
    }

    /// Judgmental equality of two closed terms at a closed type.
    pub fn convertible(&self, a: &Term, b: &Term, ty: &Term) -> bool {
        let m = Machine::new(&self.sig);
        let env = Env::new();
        let (va, vb, vt) = (m.eval(&env, a), m.eval(&env, b), m.eval(&env, ty));
        Conv::new(&m, self.opts.eta_sigma, Vec::new()).conv(&va, &vb, &vt)
    }

    /// Cumulative subtyping between two closed types.
    pub fn subtype(&self, a: &Term, b: &Term) -> bool {
        let m = Machine::new(&self.sig);
        let env = Env::new();
        let (va, vb) = (m.eval(&env, a), m.eval(&env, b));
        Conv::new(&m, self.opts.eta_sigma, Vec::new()).subtype(&va, &vb)
    }
}
