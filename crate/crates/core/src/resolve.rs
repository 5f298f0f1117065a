//! Scope resolution from named surface syntax to de Bruijn core terms.

use std::collections::HashMap;

use crate::syntax::{
    Bind, CoreDecl, DeclKind, Declaration, Diagnostic, Hint, Level, Name, SBinder, Span, Surface,
    SurfaceDecl, SurfaceTerm, Term,
};

/// Top-level names visible to later declarations, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct GlobalScope {
    kinds: HashMap<Name, DeclKind>,
    order: Vec<Name>,
}

impl GlobalScope {
    pub fn new() -> GlobalScope {
        GlobalScope::default()
    }

    pub fn kind(&self, name: &str) -> Option<DeclKind> {
        self.kinds.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.kinds.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.order.iter()
    }

    pub fn insert(&mut self, name: Name, kind: DeclKind) {
        self.order.push(name.clone());
        self.kinds.insert(name, kind);
    }
}

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != *cb);
            cur.push(sub.min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

struct Resolver<'g> {
    globals: &'g GlobalScope,
    locals: Vec<Name>,
}

impl Resolver<'_> {
    fn suggestion(&self, name: &str) -> Option<String> {
        let budget = (name.chars().count() / 3).max(1);
        self.locals
            .iter()
            .rev()
            .chain(self.globals.names())
            .map(|n| (edit_distance(name, n), n))
            .filter(|(d, _)| *d <= budget)
            .min_by_key(|(d, _)| *d)
            .map(|(_, n)| n.to_string())
    }

    fn bind<const N: usize>(
        &mut self,
        names: &[(Name, Span)],
        body: &SurfaceTerm,
        span: Span,
    ) -> Result<Bind<N>, Diagnostic> {
        if names.len() != N {
            return Err(Diagnostic::error(
                "syntax",
                format!("expected {N} bound names, found {}", names.len()),
                span,
            ));
        }
        for (n, _) in names {
            self.locals.push(n.clone());
        }
        let body = self.term(body);
        self.locals.truncate(self.locals.len() - N);
        let hints: [Hint; N] = std::array::from_fn(|i| Hint(names[i].0.clone()));
        Ok(Bind {
            hints,
            body: body?.rc(),
        })
    }

    fn telescope(
        &mut self,
        binders: &[SBinder],
        body: &SurfaceTerm,
        pi: bool,
    ) -> Result<Term, Diagnostic> {
        let mut doms = Vec::new();
        let pushed = self.locals.len();
        for b in binders {
            for (n, _) in &b.names {
                match self.term(&b.ty) {
                    Ok(t) => doms.push((n.clone(), t)),
                    Err(e) => {
                        self.locals.truncate(pushed);
                        return Err(e);
                    }
                }
                self.locals.push(n.clone());
            }
        }
        let body = self.term(body);
        self.locals.truncate(pushed);
        let mut acc = body?;
        for (n, dom) in doms.into_iter().rev() {
            let bind = Bind {
                hints: [Hint(n)],
                body: acc.rc(),
            };
            acc = if pi {
                Term::Pi(dom.rc(), bind)
            } else {
                Term::Sigma(dom.rc(), bind)
            };
        }
        Ok(acc)
    }

    fn term(&mut self, t: &SurfaceTerm) -> Result<Term, Diagnostic> {
        let sp = t.span;
        Ok(match &t.node {
            Surface::Name(n) => {
                if let Some(i) = self.locals.iter().rev().position(|l| l == n) {
                    Term::Var(i)
                } else {
                    match self.globals.kind(n) {
                        Some(DeclKind::Axiom) => Term::AxiomRef(n.clone()),
                        Some(_) => Term::Const(n.clone()),
                        None => {
                            let hint = self
                                .suggestion(n)
                                .map(|s| format!("; did you mean `{s}`?"))
                                .unwrap_or_default();
                            return Err(Diagnostic::error(
                                "unbound",
                                format!("unbound identifier `{n}`{hint}"),
                                sp,
                            ));
                        }
                    }
                }
            }
            Surface::Universe(i) => Term::Universe(Level(*i)),
            Surface::Pi(bs, body) => self.telescope(bs, body, true)?,
            Surface::Sigma(bs, body) => self.telescope(bs, body, false)?,
            Surface::Arrow(a, b) | Surface::Product(a, b) => {
                let dom = self.term(a)?;
                self.locals.push(Name::from("_"));
                let cod = self.term(b);
                self.locals.pop();
                let bind = Bind {
                    hints: [Hint::new("_")],
                    body: cod?.rc(),
                };
                if matches!(t.node, Surface::Arrow(..)) {
                    Term::Pi(dom.rc(), bind)
                } else {
                    Term::Sigma(dom.rc(), bind)
                }
            }
            Surface::Lam(names, body) => {
                for (n, _) in names {
                    self.locals.push(n.clone());
                }
                let body = self.term(body);
                self.locals.truncate(self.locals.len() - names.len());
                let mut acc = body?;
                for (n, _) in names.iter().rev() {
                    acc = Term::Lam(Bind {
                        hints: [Hint(n.clone())],
                        body: acc.rc(),
                    });
                }
                acc
            }
            Surface::App(f, a) => Term::App(self.term(f)?.rc(), self.term(a)?.rc()),
            Surface::Pair(a, b) => Term::Pair(self.term(a)?.rc(), self.term(b)?.rc()),
            Surface::Fst(a) => Term::Fst(self.term(a)?.rc()),
            Surface::Snd(a) => Term::Snd(self.term(a)?.rc()),
            Surface::IdType(a, x, y) => {
                Term::IdType(self.term(a)?.rc(), self.term(x)?.rc(), self.term(y)?.rc())
            }
            Surface::Refl(a) => Term::Refl(self.term(a)?.rc()),
            Surface::J { motive, base, path } => Term::J {
                motive: self.bind::<3>(&motive.0, &motive.1, sp)?,
                base: self.bind::<1>(&base.0, &base.1, sp)?,
                path: self.term(path)?.rc(),
            },
            Surface::NatType => Term::NatType,
            Surface::Numeral(n) => Term::numeral(*n),
            Surface::Suc(a) => Term::Suc(self.term(a)?.rc()),
            Surface::NatElim {
                motive,
                base,
                step,
                target,
            } => Term::NatElim {
                motive: self.bind::<1>(&motive.0, &motive.1, sp)?,
                base: self.term(base)?.rc(),
                step: self.bind::<2>(&step.0, &step.1, sp)?,
                target: self.term(target)?.rc(),
            },
            Surface::EmptyType => Term::EmptyType,
            Surface::EmptyElim { motive, target } => Term::EmptyElim {
                motive: self.bind::<1>(&motive.0, &motive.1, sp)?,
                target: self.term(target)?.rc(),
            },
            Surface::UnitType => Term::UnitType,
            Surface::Star => Term::Star,
            Surface::TwoType => Term::TwoType,
            Surface::ZeroTwo => Term::ZeroTwo,
            Surface::OneTwo => Term::OneTwo,
            Surface::TwoElim {
                motive,
                case0,
                case1,
                target,
            } => Term::TwoElim {
                motive: self.bind::<1>(&motive.0, &motive.1, sp)?,
                case0: self.term(case0)?.rc(),
                case1: self.term(case1)?.rc(),
                target: self.term(target)?.rc(),
            },
            Surface::Ann(a, ty) => Term::Ann(self.term(a)?.rc(), self.term(ty)?.rc()),
        })
    }
}

/// Resolves a single term against the given globals and local names
/// (innermost last).
pub fn resolve_term(
    t: &SurfaceTerm,
    globals: &GlobalScope,
    locals: &[Name],
) -> Result<Term, Diagnostic> {
    Resolver {
        globals,
        locals: locals.to_vec(),
    }
    .term(t)
}

/// Resolves declarations in order, extending `scope` as it goes. Each
/// declaration resolves independently: a failed one still claims its name so
/// later references resolve (and are rejected at checking time).
pub fn resolve_each(
    decls: &[SurfaceDecl],
    scope: &mut GlobalScope,
) -> Vec<Result<CoreDecl, Diagnostic>> {
    let mut out = Vec::with_capacity(decls.len());
    let mut seen_goals: HashMap<Name, ()> = HashMap::new();
    for d in decls {
        if scope.contains(&d.name) || seen_goals.contains_key(&d.name) {
            out.push(Err(Diagnostic::error(
                "duplicate",
                format!("duplicate top-level name `{}`", d.name),
                d.span,
            )));
            continue;
        }
        let resolved = (|| {
            let ty = resolve_term(&d.ty, scope, &[])?;
            let body = match &d.body {
                Some(b) => Some(resolve_term(b, scope, &[])?),
                None => None,
            };
            Ok(Declaration {
                kind: d.kind,
                name: d.name.clone(),
                ty,
                body,
                provenance: d.provenance.clone(),
                span: d.span,
            })
        })();
        match d.kind {
            DeclKind::Goal => {
                seen_goals.insert(d.name.clone(), ());
            }
            kind => scope.insert(d.name.clone(), kind),
        }
        out.push(resolved);
    }
    out
}

/// All-or-nothing resolution.
pub fn resolve(
    decls: &[SurfaceDecl],
    scope: &mut GlobalScope,
) -> Result<Vec<CoreDecl>, Vec<Diagnostic>> {
    let (ok, errs): (Vec<_>, Vec<_>) = resolve_each(decls, scope)
        .into_iter()
        .partition(Result::is_ok);
    if errs.is_empty() {
        Ok(ok.into_iter().map(Result::unwrap).collect())
    } else {
        Err(errs.into_iter().map(|e| e.unwrap_err()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse, parse_term};

    fn res(src: &str) -> Term {
        resolve_term(&parse_term(src).unwrap(), &GlobalScope::new(), &[]).unwrap()
    }

    #[test]
    fn identity_is_lam_var0() {
        assert_eq!(res("fun x => x"), Term::lam("x", Term::Var(0)));
    }

    #[test]
    fn k_combinator_shape() {
        assert_eq!(
            res("fun x => fun y => x"),
            Term::lam("x", Term::lam("y", Term::Var(1)))
        );
        assert_eq!(res("fun x y => x"), res("fun x => fun y => x"));
    }

    #[test]
    fn unbound_with_suggestion() {
        let mut scope = GlobalScope::new();
        let ds = parse("def swap : Two -> Two := fun b => b\ndef t : Two := swap2 0₂").unwrap();
        let out = resolve_each(&ds, &mut scope);
        assert!(out[0].is_ok());
        let err = out[1].as_ref().unwrap_err();
        assert_eq!(err.code, "unbound");
        assert!(
            err.message.contains("did you mean `swap`"),
            "{}",
            err.message
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut scope = GlobalScope::new();
        let ds = parse("def a : Two := 0₂\ndef a : Two := 1₂").unwrap();
        let errs = resolve(&ds, &mut scope).unwrap_err();
        assert_eq!(errs[0].code, "duplicate");
    }

    #[test]
    fn goals_bind_nothing() {
        let mut scope = GlobalScope::new();
        let ds = parse("goal g : Two := 0₂\ndef h : Two := g").unwrap();
        let out = resolve_each(&ds, &mut scope);
        assert_eq!(out[1].as_ref().unwrap_err().code, "unbound");
    }

    #[test]
    fn axioms_resolve_to_axiom_refs() {
        let mut scope = GlobalScope::new();
        let ds = parse("axiom ax : Two\ndef d : Two := ax").unwrap();
        let out = resolve(&ds, &mut scope).unwrap();
        assert_eq!(out[1].body, Some(Term::AxiomRef("ax".into())));
    }

    #[test]
    fn numerals_desugar() {
        assert_eq!(res("3"), Term::numeral(3));
    }
}
