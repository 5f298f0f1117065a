//! Surface and core syntax, source spans and diagnostics.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// Default ceiling for universe indices.
pub const DEFAULT_MAX_LEVEL: u32 = 8;

/// A universe index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Level(pub u32);

impl Level {
    pub fn succ(self) -> Level {
        Level(self.0 + 1)
    }

    pub fn max(self, other: Level) -> Level {
        Level(self.0.max(other.0))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}", self.0)
    }
}

/// Byte range into a source file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn merge(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(code: &'static str, message: impl Into<String>, span: Span) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    /// Renders `file:line:col: error[code]: message` against the given source.
    pub fn render(&self, file: &str, source: &str) -> String {
        let (line, col) = line_col(source, self.span.start);
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        format!(
            "{file}:{line}:{col}: {sev}[{}]: {}",
            self.code, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} (at {}..{})",
            self.code, self.message, self.span.start, self.span.end
        )
    }
}

pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
    (line, col)
}

pub type Name = Arc<str>;

/// A binder's display name. Hints never take part in term equality: two
/// core terms that differ only in hints are the same de Bruijn term.
#[derive(Clone, Debug)]
pub struct Hint(pub Name);

impl Hint {
    pub fn new(s: &str) -> Hint {
        Hint(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

/// A de Bruijn index (0 = innermost binder).
pub type Ix = usize;

pub type RcTerm = Arc<Term>;

/// A term under `N` binders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bind<const N: usize> {
    pub hints: [Hint; N],
    pub body: RcTerm,
}

impl<const N: usize> Bind<N> {
    pub fn new(hints: [Hint; N], body: Term) -> Bind<N> {
        Bind {
            hints,
            body: Arc::new(body),
        }
    }
}

/// Core terms in de Bruijn form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(Ix),
    Universe(Level),
    Pi(RcTerm, Bind<1>),
    Lam(Bind<1>),
    App(RcTerm, RcTerm),
    Sigma(RcTerm, Bind<1>),
    Pair(RcTerm, RcTerm),
    Fst(RcTerm),
    Snd(RcTerm),
    IdType(RcTerm, RcTerm, RcTerm),
    Refl(RcTerm),
    /// Unbased path induction: the motive binds `x y p`, the base case binds `x`.
    J {
        motive: Bind<3>,
        base: Bind<1>,
        path: RcTerm,
    },
    NatType,
    Zero,
    Suc(RcTerm),
    /// The step binds the predecessor and the recursive result.
    NatElim {
        motive: Bind<1>,
        base: RcTerm,
        step: Bind<2>,
        target: RcTerm,
    },
    EmptyType,
    EmptyElim {
        motive: Bind<1>,
        target: RcTerm,
    },
    UnitType,
    Star,
    TwoType,
    ZeroTwo,
    OneTwo,
    TwoElim {
        motive: Bind<1>,
        case0: RcTerm,
        case1: RcTerm,
        target: RcTerm,
    },
    AxiomRef(Name),
    /// Reference to a top-level `def` (unfolded transparently).
    Const(Name),
    Ann(RcTerm, RcTerm),
}

impl Term {
    pub fn rc(self) -> RcTerm {
        Arc::new(self)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(f.rc(), a.rc())
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(hint: &str, body: Term) -> Term {
        Term::Lam(Bind::new([Hint::new(hint)], body))
    }

    pub fn pi(hint: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(dom.rc(), Bind::new([Hint::new(hint)], cod))
    }

    pub fn sigma(hint: &str, fst: Term, snd: Term) -> Term {
        Term::Sigma(fst.rc(), Bind::new([Hint::new(hint)], snd))
    }

    pub fn id(ty: Term, lhs: Term, rhs: Term) -> Term {
        Term::IdType(ty.rc(), lhs.rc(), rhs.rc())
    }

    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::Suc(t.rc()))
    }

    /// `Some(n)` when the term is a literal `suc^n zero` chain.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Suc(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    /// True when every de Bruijn index is bound within `depth` enclosing binders.
    pub fn is_scoped(&self, depth: usize) -> bool {
        match self {
            Term::Var(i) => *i < depth,
            Term::Universe(_)
            | Term::NatType
            | Term::Zero
            | Term::EmptyType
            | Term::UnitType
            | Term::Star
            | Term::TwoType
            | Term::ZeroTwo
            | Term::OneTwo
            | Term::AxiomRef(_)
            | Term::Const(_) => true,
            Term::Pi(a, b) | Term::Sigma(a, b) => a.is_scoped(depth) && b.body.is_scoped(depth + 1),
            Term::Lam(b) => b.body.is_scoped(depth + 1),
            Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => {
                a.is_scoped(depth) && b.is_scoped(depth)
            }
            Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Suc(a) => a.is_scoped(depth),
            Term::IdType(a, b, c) => a.is_scoped(depth) && b.is_scoped(depth) && c.is_scoped(depth),
            Term::J { motive, base, path } => {
                motive.body.is_scoped(depth + 3)
                    && base.body.is_scoped(depth + 1)
                    && path.is_scoped(depth)
            }
            Term::NatElim {
                motive,
                base,
                step,
                target,
            } => {
                motive.body.is_scoped(depth + 1)
                    && base.is_scoped(depth)
                    && step.body.is_scoped(depth + 2)
                    && target.is_scoped(depth)
            }
            Term::EmptyElim { motive, target } => {
                motive.body.is_scoped(depth + 1) && target.is_scoped(depth)
            }
            Term::TwoElim {
                motive,
                case0,
                case1,
                target,
            } => {
                motive.body.is_scoped(depth + 1)
                    && case0.is_scoped(depth)
                    && case1.is_scoped(depth)
                    && target.is_scoped(depth)
            }
        }
    }

    /// Visits every global name (axiom or definition) referenced by the term.
    pub fn for_each_global(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Term::AxiomRef(n) | Term::Const(n) => f(n),
            Term::Var(_)
            | Term::Universe(_)
            | Term::NatType
            | Term::Zero
            | Term::EmptyType
            | Term::UnitType
            | Term::Star
            | Term::TwoType
            | Term::ZeroTwo
            | Term::OneTwo => {}
            Term::Pi(a, b) | Term::Sigma(a, b) => {
                a.for_each_global(f);
                b.body.for_each_global(f);
            }
            Term::Lam(b) => b.body.for_each_global(f),
            Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => {
                a.for_each_global(f);
                b.for_each_global(f);
            }
            Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Suc(a) => a.for_each_global(f),
            Term::IdType(a, b, c) => {
                a.for_each_global(f);
                b.for_each_global(f);
                c.for_each_global(f);
            }
            Term::J { motive, base, path } => {
                motive.body.for_each_global(f);
                base.body.for_each_global(f);
                path.for_each_global(f);
            }
            Term::NatElim {
                motive,
                base,
                step,
                target,
            } => {
                motive.body.for_each_global(f);
                base.for_each_global(f);
                step.body.for_each_global(f);
                target.for_each_global(f);
            }
            Term::EmptyElim { motive, target } => {
                motive.body.for_each_global(f);
                target.for_each_global(f);
            }
            Term::TwoElim {
                motive,
                case0,
                case1,
                target,
            } => {
                motive.body.for_each_global(f);
                case0.for_each_global(f);
                case1.for_each_global(f);
                target.for_each_global(f);
            }
        }
    }

    /// Removes every annotation node, keeping the annotated term.
    pub fn erase_annotations(&self) -> Term {
        self.map_children(&|t| t.erase_annotations(), true)
    }

    fn map_children(&self, f: &dyn Fn(&Term) -> Term, strip_ann: bool) -> Term {
        let g = |t: &RcTerm| f(t).rc();
        let b1 = |b: &Bind<1>| Bind {
            hints: b.hints.clone(),
            body: g(&b.body),
        };
        match self {
            Term::Ann(t, ty) => {
                if strip_ann {
                    f(t)
                } else {
                    Term::Ann(g(t), g(ty))
                }
            }
            Term::Pi(a, b) => Term::Pi(g(a), b1(b)),
            Term::Sigma(a, b) => Term::Sigma(g(a), b1(b)),
            Term::Lam(b) => Term::Lam(b1(b)),
            Term::App(a, b) => Term::App(g(a), g(b)),
            Term::Pair(a, b) => Term::Pair(g(a), g(b)),
            Term::Fst(a) => Term::Fst(g(a)),
            Term::Snd(a) => Term::Snd(g(a)),
            Term::Refl(a) => Term::Refl(g(a)),
            Term::Suc(a) => Term::Suc(g(a)),
            Term::IdType(a, b, c) => Term::IdType(g(a), g(b), g(c)),
            Term::J { motive, base, path } => Term::J {
                motive: Bind {
                    hints: motive.hints.clone(),
                    body: g(&motive.body),
                },
                base: b1(base),
                path: g(path),
            },
            Term::NatElim {
                motive,
                base,
                step,
                target,
            } => Term::NatElim {
                motive: b1(motive),
                base: g(base),
                step: Bind {
                    hints: step.hints.clone(),
                    body: g(&step.body),
                },
                target: g(target),
            },
            Term::EmptyElim { motive, target } => Term::EmptyElim {
                motive: b1(motive),
                target: g(target),
            },
            Term::TwoElim {
                motive,
                case0,
                case1,
                target,
            } => Term::TwoElim {
                motive: b1(motive),
                case0: g(case0),
                case1: g(case1),
                target: g(target),
            },
            other => other.clone(),
        }
    }

    /// Replaces every universe index `i` by `i + by`.
    pub fn raise_universes(&self, by: u32) -> Term {
        match self {
            Term::Universe(l) => Term::Universe(Level(l.0 + by)),
            other => other.map_children(&|t| t.raise_universes(by), false),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeclKind {
    Def,
    Axiom,
    Goal,
}

impl fmt::Display for DeclKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeclKind::Def => "def",
            DeclKind::Axiom => "axiom",
            DeclKind::Goal => "goal",
        })
    }
}

/// A top-level declaration, generic over the term representation so the
/// same shape serves both surface and core syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration<T> {
    pub kind: DeclKind,
    pub name: Name,
    pub ty: T,
    pub body: Option<T>,
    /// Free-text provenance tag taken from a `--|` comment line.
    pub provenance: String,
    pub span: Span,
}

pub type CoreDecl = Declaration<Term>;
pub type SurfaceDecl = Declaration<SurfaceTerm>;

/// Surface terms use names; every node carries its source span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceTerm {
    pub node: Surface,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBinder {
    pub names: Vec<(Name, Span)>,
    pub ty: Box<SurfaceTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surface {
    Name(Name),
    Universe(u32),
    Pi(Vec<SBinder>, Box<SurfaceTerm>),
    Arrow(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Lam(Vec<(Name, Span)>, Box<SurfaceTerm>),
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Sigma(Vec<SBinder>, Box<SurfaceTerm>),
    Product(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Pair(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Fst(Box<SurfaceTerm>),
    Snd(Box<SurfaceTerm>),
    IdType(Box<SurfaceTerm>, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Refl(Box<SurfaceTerm>),
    J {
        motive: (Vec<(Name, Span)>, Box<SurfaceTerm>),
        base: (Vec<(Name, Span)>, Box<SurfaceTerm>),
        path: Box<SurfaceTerm>,
    },
    NatType,
    Numeral(u64),
    Suc(Box<SurfaceTerm>),
    NatElim {
        motive: (Vec<(Name, Span)>, Box<SurfaceTerm>),
        base: Box<SurfaceTerm>,
        step: (Vec<(Name, Span)>, Box<SurfaceTerm>),
        target: Box<SurfaceTerm>,
    },
    EmptyType,
    EmptyElim {
        motive: (Vec<(Name, Span)>, Box<SurfaceTerm>),
        target: Box<SurfaceTerm>,
    },
    UnitType,
    Star,
    TwoType,
    ZeroTwo,
    OneTwo,
    TwoElim {
        motive: (Vec<(Name, Span)>, Box<SurfaceTerm>),
        case0: Box<SurfaceTerm>,
        case1: Box<SurfaceTerm>,
        target: Box<SurfaceTerm>,
    },
    Ann(Box<SurfaceTerm>, Box<SurfaceTerm>),
}
