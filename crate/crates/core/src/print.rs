//! Pretty-printing core terms back to parseable surface syntax.

use crate::parse::is_keyword;
use crate::syntax::{Bind, Hint, Name, Term};

const P_TERM: u8 = 0;
const P_PROD: u8 = 1;
const P_APP: u8 = 2;
const P_ATOM: u8 = 3;

/// Does `t` mention the variable bound `k` binders above its root?
pub fn mentions(t: &Term, k: usize) -> bool {
    match t {
        Term::Var(i) => *i == k,
        Term::Pi(a, b) | Term::Sigma(a, b) => mentions(a, k) || mentions(&b.body, k + 1),
        Term::Lam(b) => mentions(&b.body, k + 1),
        Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => mentions(a, k) || mentions(b, k),
        Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Suc(a) => mentions(a, k),
        Term::IdType(a, b, c) => mentions(a, k) || mentions(b, k) || mentions(c, k),
        Term::J { motive, base, path } => {
            mentions(&motive.body, k + 3) || mentions(&base.body, k + 1) || mentions(path, k)
        }
        Term::NatElim {
            motive,
            base,
            step,
            target,
        } => {
            mentions(&motive.body, k + 1)
                || mentions(base, k)
                || mentions(&step.body, k + 2)
                || mentions(target, k)
        }
        Term::EmptyElim { motive, target } => mentions(&motive.body, k + 1) || mentions(target, k),
        Term::TwoElim {
            motive,
            case0,
            case1,
            target,
        } => {
            mentions(&motive.body, k + 1)
                || mentions(case0, k)
                || mentions(case1, k)
                || mentions(target, k)
        }
        _ => false,
    }
}

fn valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    let ok_start = cs.next().is_some_and(|c| c.is_alphabetic() || c == '_');
    let ok_rest = s
        .chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '-');
    let universe_like = s
        .strip_prefix('U')
        .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()));
    ok_start
        && ok_rest
        && !s.ends_with('-')
        && !s.contains("--")
        && !s.contains("-'")
        && !universe_like
        && !is_keyword(s)
        && s != "_"
}

pub struct Printer<'a> {
    names: Vec<String>,
    is_global: &'a dyn Fn(&str) -> bool,
}

impl<'a> Printer<'a> {
    /// `locals` lists the context's names, innermost last; `is_global`
    /// reports names a binder must not capture.
    pub fn new(locals: &[Name], is_global: &'a dyn Fn(&str) -> bool) -> Printer<'a> {
        let mut p = Printer {
            names: Vec::new(),
            is_global,
        };
        for l in locals {
            let n = p.fresh(l);
            p.names.push(n);
        }
        p
    }

    fn fresh(&self, hint: &str) -> String {
        let base = if valid_ident(hint) { hint } else { "x" };
        let taken = |s: &str| self.names.iter().any(|n| n == s) || (self.is_global)(s);
        if !taken(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|c| valid_ident(c) && !taken(c))
            .expect("infinite supply of names")
    }

    fn with_binders<const N: usize>(
        &mut self,
        b: &Bind<N>,
        f: impl FnOnce(&mut Self, &[String]) -> String,
    ) -> String {
        let mut fresh = Vec::new();
        for h in &b.hints {
            let n = self.fresh(h.as_str());
            self.names.push(n.clone());
            fresh.push(n);
        }
        let out = f(self, &fresh);
        self.names.truncate(self.names.len() - N);
        out
    }

    fn bracket<const N: usize>(&mut self, b: &Bind<N>) -> String {
        self.with_binders(b, |p, ns| {
            format!("[{}. {}]", ns.join(" "), p.go(&b.body, P_TERM))
        })
    }

    pub fn print(&mut self, t: &Term) -> String {
        self.go(t, P_TERM)
    }

    fn paren(s: String, need: bool) -> String {
        if need {
            format!("({s})")
        } else {
            s
        }
    }

    fn go(&mut self, t: &Term, prec: u8) -> String {
        match t {
            Term::Var(i) => match self.names.len().checked_sub(i + 1) {
                Some(k) => self.names[k].clone(),
                None => format!("?{i}"),
            },
            Term::Universe(l) => format!("U{}", l.0),
            Term::AxiomRef(n) | Term::Const(n) => n.to_string(),
            Term::NatType => "Nat".into(),
            Term::EmptyType => "Empty".into(),
            Term::UnitType => "Unit".into(),
            Term::TwoType => "Two".into(),
            Term::Star => "star".into(),
            Term::ZeroTwo => "0₂".into(),
            Term::OneTwo => "1₂".into(),
            Term::Zero => "0".into(),
            Term::Suc(inner) => match t.as_numeral() {
                Some(n) => n.to_string(),
                None => Self::paren(format!("suc {}", self.go(inner, P_ATOM)), prec > P_APP),
            },
            Term::Pi(dom, cod) | Term::Sigma(dom, cod) => {
                let is_pi = matches!(t, Term::Pi(..));
                if !mentions(&cod.body, 0) {
                    let (lp, rp, op) = if is_pi {
                        (P_PROD, P_TERM, "->")
                    } else {
                        (P_APP, P_PROD, "*")
                    };
                    let d = self.go(dom, lp);
                    let c = self.with_binders(cod, |p, _| p.go(&cod.body, rp));
                    Self::paren(
                        format!("{d} {op} {c}"),
                        prec > if is_pi { P_TERM } else { P_PROD },
                    )
                } else {
                    let d = self.go(dom, P_TERM);
                    let op = if is_pi { "->" } else { "*" };
                    let s = self.with_binders(cod, |p, ns| {
                        format!("({} : {d}) {op} {}", ns[0], p.go(&cod.body, P_TERM))
                    });
                    Self::paren(s, prec > P_TERM)
                }
            }
            Term::Lam(_) => {
                let mut names = Vec::new();
                let mut body = t;
                let depth0 = self.names.len();
                while let Term::Lam(b) = body {
                    let n = self.fresh(b.hints[0].as_str());
                    self.names.push(n.clone());
                    names.push(n);
                    body = &b.body;
                }
                let s = format!("fun {} => {}", names.join(" "), self.go(body, P_TERM));
                self.names.truncate(depth0);
                Self::paren(s, prec > P_TERM)
            }
            Term::App(f, a) => {
                let s = format!("{} {}", self.go(f, P_APP), self.go(a, P_ATOM));
                Self::paren(s, prec > P_APP)
            }
            Term::Pair(a, b) => {
                let mut parts = vec![self.go(a, P_TERM)];
                let mut rest = b;
                while let Term::Pair(x, y) = &**rest {
                    parts.push(self.go(x, P_TERM));
                    rest = y;
                }
                parts.push(self.go(rest, P_TERM));
                format!("({})", parts.join(", "))
            }
            Term::Fst(a) => Self::paren(format!("fst {}", self.go(a, P_ATOM)), prec > P_APP),
            Term::Snd(a) => Self::paren(format!("snd {}", self.go(a, P_ATOM)), prec > P_APP),
            Term::Refl(a) => Self::paren(format!("refl {}", self.go(a, P_ATOM)), prec > P_APP),
            Term::IdType(a, x, y) => Self::paren(
                format!(
                    "Id {} {} {}",
                    self.go(a, P_ATOM),
                    self.go(x, P_ATOM),
                    self.go(y, P_ATOM)
                ),
                prec > P_APP,
            ),
            Term::J { motive, base, path } => {
                let m = self.bracket(motive);
                let b = self.bracket(base);
                let p = self.go(path, P_ATOM);
                Self::paren(format!("J {m} {b} {p}"), prec > P_APP)
            }
            Term::NatElim {
                motive,
                base,
                step,
                target,
            } => {
                let m = self.bracket(motive);
                let z = self.go(base, P_ATOM);
                let s = self.bracket(step);
                let n = self.go(target, P_ATOM);
                Self::paren(format!("natrec {m} {z} {s} {n}"), prec > P_APP)
            }
            Term::EmptyElim { motive, target } => {
                let m = self.bracket(motive);
                let n = self.go(target, P_ATOM);
                Self::paren(format!("absurd {m} {n}"), prec > P_APP)
            }
            Term::TwoElim {
                motive,
                case0,
                case1,
                target,
            } => {
                let m = self.bracket(motive);
                let a = self.go(case0, P_ATOM);
                let b = self.go(case1, P_ATOM);
                let n = self.go(target, P_ATOM);
                Self::paren(format!("twoelim {m} {a} {b} {n}"), prec > P_APP)
            }
            Term::Ann(a, ty) => {
                format!("(({}) : {})", self.go(a, P_TERM), self.go(ty, P_TERM))
            }
        }
    }
}

/// Prints a term whose free variables are named by `locals` (innermost last).
pub fn print(t: &Term, locals: &[Name]) -> String {
    Printer::new(locals, &|_| false).print(t)
}

/// Like [`print`], avoiding binder names that would capture the given globals.
pub fn print_with_globals(t: &Term, locals: &[Name], is_global: &dyn Fn(&str) -> bool) -> String {
    Printer::new(locals, is_global).print(t)
}

/// Hint used when a term is printed without any naming context.
pub fn default_hint() -> Hint {
    Hint::new("x")
}
