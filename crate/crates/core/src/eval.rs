//! Evaluation into the semantic domain and quotation back to normal forms.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::syntax::{Bind, Hint, Name, Term};
use crate::value::{Closure, Env, Frame, Glued, Head, Lazy, Thunk, Value};

/// The checked globals visible to evaluation and conversion.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    defs: HashMap<Name, (Value, Value)>,
    axioms: HashMap<Name, Value>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_def(&mut self, name: Name, ty: Value, value: Value) {
        self.defs.insert(name, (ty, value));
    }

    pub fn add_axiom(&mut self, name: Name, ty: Value) {
        self.axioms.insert(name, ty);
    }

    pub fn def_type(&self, name: &str) -> Option<&Value> {
        self.defs.get(name).map(|d| &d.0)
    }

    pub fn def_value(&self, name: &str) -> Option<&Value> {
        self.defs.get(name).map(|d| &d.1)
    }

    pub fn axiom_type(&self, name: &str) -> Option<&Value> {
        self.axioms.get(name)
    }
}

/// Internal invariant violation: only reachable on ill-scoped or ill-typed
/// input, which the checker never hands to the evaluator.
#[track_caller]
fn invariant(msg: &str) -> ! {
    panic!("internal invariant violation: {msg}")
}

pub struct Machine<'a> {
    pub sig: &'a Signature,
}

impl<'a> Machine<'a> {
    pub fn new(sig: &'a Signature) -> Machine<'a> {
        Machine { sig }
    }

    fn close<const N: usize>(env: &Env, b: &Bind<N>) -> Closure {
        Closure {
            env: env.clone(),
            body: b.body.clone(),
        }
    }

    pub fn eval(&self, env: &Env, t: &Term) -> Value {
        match t {
            Term::Var(i) => match env.get(*i) {
                Some(v) => v.clone(),
                None => invariant(&format!(
                    "index {i} escapes an environment of length {}",
                    env.len()
                )),
            },
            Term::Universe(l) => Value::Universe(*l),
            Term::Pi(a, b) => Value::Pi(
                b.hints[0].clone(),
                self.eval(env, a).arc(),
                Self::close(env, b),
            ),
            Term::Lam(b) => Value::Lam(b.hints[0].clone(), Self::close(env, b)),
            Term::App(f, a) => self.apply(self.eval(env, f), self.eval(env, a)),
            Term::Sigma(a, b) => Value::Sigma(
                b.hints[0].clone(),
                self.eval(env, a).arc(),
                Self::close(env, b),
            ),
            Term::Pair(a, b) => Value::Pair(self.eval(env, a).arc(), self.eval(env, b).arc()),
            Term::Fst(p) => self.fst(self.eval(env, p)),
            Term::Snd(p) => self.snd(self.eval(env, p)),
            Term::IdType(a, x, y) => Value::IdType(
                self.eval(env, a).arc(),
                self.eval(env, x).arc(),
                self.eval(env, y).arc(),
            ),
            Term::Refl(a) => Value::Refl(self.eval(env, a).arc()),
            Term::J { motive, base, path } => self.j(
                Self::close(env, motive),
                motive.hints.clone(),
                Self::close(env, base),
                base.hints[0].clone(),
                self.eval(env, path),
            ),
            Term::NatType => Value::NatType,
            Term::Zero => Value::Zero,
            Term::Suc(n) => Value::Suc(self.eval(env, n).arc()),
            Term::NatElim {
                motive,
                base,
                step,
                target,
            } => {
                let frame = Frame::NatElim {
                    motive: Self::close(env, motive),
                    mhint: motive.hints[0].clone(),
                    base: self.eval(env, base),
                    step: Self::close(env, step),
                    shints: step.hints.clone(),
                };
                self.eliminate(self.eval(env, target), frame)
            }
            Term::EmptyType => Value::EmptyType,
            Term::EmptyElim { motive, target } => {
                let frame = Frame::EmptyElim {
                    motive: Self::close(env, motive),
                    mhint: motive.hints[0].clone(),
                };
                self.eliminate(self.eval(env, target), frame)
            }
            Term::UnitType => Value::UnitType,
            Term::Star => Value::Star,
            Term::TwoType => Value::TwoType,
            Term::ZeroTwo => Value::ZeroTwo,
            Term::OneTwo => Value::OneTwo,
            Term::TwoElim {
                motive,
                case0,
                case1,
                target,
            } => {
                let frame = Frame::TwoElim {
                    motive: Self::close(env, motive),
                    mhint: motive.hints[0].clone(),
                    case0: self.eval(env, case0),
                    case1: self.eval(env, case1),
                };
                self.eliminate(self.eval(env, target), frame)
            }
            Term::AxiomRef(n) => Value::Neutral(Head::Axiom(n.clone()), Vec::new()),
            Term::Const(n) => {
                if self.sig.def_value(n).is_none() {
                    invariant(&format!("definition `{n}` is not in scope"));
                }
                Value::glued(n.clone())
            }
            Term::Ann(t, _) => self.eval(env, t),
        }
    }

    /// Instantiates a closure with values for its binders, outermost first.
    pub fn inst(&self, c: &Closure, args: impl IntoIterator<Item = Value>) -> Value {
        let env = args.into_iter().fold(c.env.clone(), |e, v| e.push(v));
        self.eval(&env, &c.body)
    }

    pub fn inst1(&self, c: &Closure, v: Value) -> Value {
        self.eval(&c.env.push(v), &c.body)
    }

    /// Strips glued layers, unfolding definitions until the head is not one.
    pub fn force(&self, v: &Value) -> Value {
        let mut cur = v.clone();
        while let Value::Glued(g) = &cur {
            cur = self.unfold(&g.lazy);
        }
        cur
    }

    fn unfold(&self, lazy: &Arc<Lazy>) -> Value {
        lazy.cell
            .get_or_init(|| match &lazy.thunk {
                Thunk::Def(name) => match self.sig.def_value(name) {
                    Some(v) => v.clone(),
                    None => invariant(&format!("definition `{name}` is not in scope")),
                },
                Thunk::Apply(prev, arg) => {
                    let f = self.unfold(prev);
                    self.apply(f, arg.clone())
                }
            })
            .clone()
    }

    pub fn apply(&self, f: Value, a: Value) -> Value {
        match f {
            Value::Lam(_, c) => self.inst1(&c, a),
            Value::Neutral(h, mut sp) => {
                sp.push(Frame::App(a));
                Value::Neutral(h, sp)
            }
            Value::Glued(g) => {
                let mut args = g.args.clone();
                args.push(a.clone());
                Value::Glued(Glued {
                    name: g.name,
                    args,
                    lazy: Arc::new(Lazy {
                        cell: OnceLock::new(),
                        thunk: Thunk::Apply(g.lazy, a),
                    }),
                })
            }
            _ => invariant("application of a non-function"),
        }
    }

    pub fn fst(&self, p: Value) -> Value {
        match self.force(&p) {
            Value::Pair(a, _) => (*a).clone(),
            Value::Neutral(h, mut sp) => {
                sp.push(Frame::Fst);
                Value::Neutral(h, sp)
            }
            _ => invariant("first projection of a non-pair"),
        }
    }

    pub fn snd(&self, p: Value) -> Value {
        match self.force(&p) {
            Value::Pair(_, b) => (*b).clone(),
            Value::Neutral(h, mut sp) => {
                sp.push(Frame::Snd);
                Value::Neutral(h, sp)
            }
            _ => invariant("second projection of a non-pair"),
        }
    }

    pub fn j(
        &self,
        motive: Closure,
        mhints: [Hint; 3],
        base: Closure,
        bhint: Hint,
        path: Value,
    ) -> Value {
        match self.force(&path) {
            Value::Refl(a) => self.inst1(&base, (*a).clone()),
            Value::Neutral(h, mut sp) => {
                sp.push(Frame::J {
                    motive,
                    mhints,
                    base,
                    bhint,
                });
                Value::Neutral(h, sp)
            }
            _ => invariant("path induction on a non-path"),
        }
    }

    /// Applies a non-application elimination frame to a scrutinee.
    pub fn eliminate(&self, target: Value, frame: Frame) -> Value {
        match (self.force(&target), frame) {
            (Value::Neutral(h, mut sp), frame) => {
                sp.push(frame);
                Value::Neutral(h, sp)
            }
            (Value::Zero, Frame::NatElim { base, .. }) => base,
            (Value::Suc(n), frame @ Frame::NatElim { .. }) => {
                let prev = (*n).clone();
                let ih = self.eliminate(prev.clone(), frame.clone());
                match frame {
                    Frame::NatElim { step, .. } => self.inst(&step, [prev, ih]),
                    _ => unreachable!(),
                }
            }
            (Value::ZeroTwo, Frame::TwoElim { case0, .. }) => case0,
            (Value::OneTwo, Frame::TwoElim { case1, .. }) => case1,
            (Value::Pair(a, _), Frame::Fst) => (*a).clone(),
            (Value::Pair(_, b), Frame::Snd) => (*b).clone(),
            (f @ (Value::Lam(..) | Value::Glued(_)), Frame::App(a)) => self.apply(f, a),
            (Value::Refl(a), Frame::J { base, .. }) => self.inst1(&base, (*a).clone()),
            _ => invariant("eliminator applied to a value of the wrong shape"),
        }
    }

    fn fresh_vars(depth: usize, n: usize) -> impl Iterator<Item = Value> {
        (depth..depth + n).map(Value::var)
    }

    fn quote_bind<const N: usize>(
        &self,
        depth: usize,
        c: &Closure,
        hints: &[Hint; N],
        unfold: bool,
    ) -> Bind<N> {
        let body = self.inst(c, Self::fresh_vars(depth, N));
        Bind {
            hints: hints.clone(),
            body: self.quote(depth + N, &body, unfold).rc(),
        }
    }

    /// Reads a value back as a term under `depth` binders. With `unfold`
    /// off, definitions stay folded as named references.
    pub fn quote(&self, depth: usize, v: &Value, unfold: bool) -> Term {
        match v {
            Value::Universe(l) => Term::Universe(*l),
            Value::Pi(h, a, c) => Term::Pi(
                self.quote(depth, a, unfold).rc(),
                self.quote_bind(depth, c, &[h.clone()], unfold),
            ),
            Value::Lam(h, c) => Term::Lam(self.quote_bind(depth, c, &[h.clone()], unfold)),
            Value::Sigma(h, a, c) => Term::Sigma(
                self.quote(depth, a, unfold).rc(),
                self.quote_bind(depth, c, &[h.clone()], unfold),
            ),
            Value::Pair(a, b) => Term::Pair(
                self.quote(depth, a, unfold).rc(),
                self.quote(depth, b, unfold).rc(),
            ),
            Value::IdType(a, x, y) => Term::IdType(
                self.quote(depth, a, unfold).rc(),
                self.quote(depth, x, unfold).rc(),
                self.quote(depth, y, unfold).rc(),
            ),
            Value::Refl(a) => Term::Refl(self.quote(depth, a, unfold).rc()),
            Value::NatType => Term::NatType,
            Value::Zero => Term::Zero,
            Value::Suc(n) => Term::Suc(self.quote(depth, n, unfold).rc()),
            Value::EmptyType => Term::EmptyType,
            Value::UnitType => Term::UnitType,
            Value::Star => Term::Star,
            Value::TwoType => Term::TwoType,
            Value::ZeroTwo => Term::ZeroTwo,
            Value::OneTwo => Term::OneTwo,
            Value::Glued(g) => {
                if unfold {
                    self.quote(depth, &self.force(v), unfold)
                } else {
                    let args = g.args.iter().map(|a| self.quote(depth, a, unfold));
                    Term::apps(Term::Const(g.name.clone()), args.collect::<Vec<_>>())
                }
            }
            Value::Neutral(h, sp) => {
                let head = match h {
                    Head::Var(l) => match depth.checked_sub(l + 1) {
                        Some(ix) => Term::Var(ix),
                        None => invariant(&format!("level {l} escapes depth {depth}")),
                    },
                    Head::Axiom(n) => Term::AxiomRef(n.clone()),
                };
                sp.iter()
                    .fold(head, |t, f| self.quote_frame(depth, t, f, unfold))
            }
        }
    }

    fn quote_frame(&self, depth: usize, t: Term, f: &Frame, unfold: bool) -> Term {
        match f {
            Frame::App(a) => Term::App(t.rc(), self.quote(depth, a, unfold).rc()),
            Frame::Fst => Term::Fst(t.rc()),
            Frame::Snd => Term::Snd(t.rc()),
            Frame::J {
                motive,
                mhints,
                base,
                bhint,
            } => Term::J {
                motive: self.quote_bind(depth, motive, mhints, unfold),
                base: self.quote_bind(depth, base, &[bhint.clone()], unfold),
                path: t.rc(),
            },
            Frame::NatElim {
                motive,
                mhint,
                base,
                step,
                shints,
            } => Term::NatElim {
                motive: self.quote_bind(depth, motive, &[mhint.clone()], unfold),
                base: self.quote(depth, base, unfold).rc(),
                step: self.quote_bind(depth, step, shints, unfold),
                target: t.rc(),
            },
            Frame::TwoElim {
                motive,
                mhint,
                case0,
                case1,
            } => Term::TwoElim {
                motive: self.quote_bind(depth, motive, &[mhint.clone()], unfold),
                case0: self.quote(depth, case0, unfold).rc(),
                case1: self.quote(depth, case1, unfold).rc(),
                target: t.rc(),
            },
            Frame::EmptyElim { motive, mhint } => Term::EmptyElim {
                motive: self.quote_bind(depth, motive, &[mhint.clone()], unfold),
                target: t.rc(),
            },
        }
    }

    /// Full normal form of a term evaluated in `env`, definitions unfolded.
    pub fn normalize(&self, env: &Env, t: &Term) -> Term {
        self.quote(env.len(), &self.eval(env, t), true)
    }
}

/// An environment of fresh variables for a context of the given depth.
pub fn identity_env(depth: usize) -> Env {
    (0..depth).fold(Env::new(), |e, l| e.push(Value::var(l)))
}
