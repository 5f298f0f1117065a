//! Term generators shared by the property tests and the acceptance run.
//! Terms are decoded from a byte string so that shrinking works: an
//! exhausted string always picks the simplest remaining choice.

#![allow(dead_code)]

use hlevel_core::resolve::GlobalScope;
use hlevel_core::syntax::{Bind, DeclKind, Hint, Level, Term};

pub struct Choices<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Choices<'_> {
    pub fn new(bytes: &[u8]) -> Choices<'_> {
        Choices { bytes, pos: 0 }
    }

    pub fn pick(&mut self, k: usize) -> usize {
        let b = self.bytes.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        b as usize % k
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ty {
    Two,
    Nat,
    Unit,
    Fun(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn term(&self) -> Term {
        match self {
            Ty::Two => Term::TwoType,
            Ty::Nat => Term::NatType,
            Ty::Unit => Term::UnitType,
            Ty::Fun(a, b) => Term::pi("_", a.term(), b.term()),
            Ty::Prod(a, b) => Term::sigma("_", a.term(), b.term()),
        }
    }
}

pub fn gen_ty(c: &mut Choices, fuel: u32) -> Ty {
    let k = if fuel == 0 { 3 } else { 5 };
    match c.pick(k) {
        0 => Ty::Two,
        1 => Ty::Nat,
        2 => Ty::Unit,
        3 => Ty::Fun(Box::new(gen_ty(c, fuel - 1)), Box::new(gen_ty(c, fuel - 1))),
        _ => Ty::Prod(Box::new(gen_ty(c, fuel - 1)), Box::new(gen_ty(c, fuel - 1))),
    }
}

pub fn bind<const N: usize>(names: [&str; N], body: Term) -> Bind<N> {
    Bind::new(names.map(Hint::new), body)
}

/// A term of type `ty` in a context of variables typed by `ctx` (innermost
/// last).
pub fn gen_term(c: &mut Choices, ty: &Ty, ctx: &[Ty], fuel: u32) -> Term {
    let vars: Vec<usize> = (0..ctx.len()).filter(|&i| &ctx[ctx.len() - 1 - i] == ty).collect();
    let k = if fuel == 0 { 2 } else { 9 };
    match c.pick(k) {
        1 if !vars.is_empty() => Term::Var(vars[c.pick(vars.len())]),
        2 => {
            // A redex: an annotated lambda applied to an argument.
            let a = gen_ty(c, 1);
            let mut inner = ctx.to_vec();
            inner.push(a.clone());
            let body = gen_term(c, ty, &inner, fuel - 1);
            let lam = Term::Ann(Term::lam("x", body).rc(), Term::pi("_", a.term(), ty.term()).rc());
            Term::app(lam, gen_term(c, &a, ctx, fuel - 1))
        }
        3 => {
            let b = gen_ty(c, 1);
            let pair_ty = Ty::Prod(Box::new(ty.clone()), Box::new(b));
            Term::Fst(annotated(gen_term(c, &pair_ty, ctx, fuel - 1), &pair_ty).rc())
        }
        4 => {
            let a = gen_ty(c, 1);
            let pair_ty = Ty::Prod(Box::new(a), Box::new(ty.clone()));
            Term::Snd(annotated(gen_term(c, &pair_ty, ctx, fuel - 1), &pair_ty).rc())
        }
        5 => Term::TwoElim {
            motive: bind(["_"], ty.term()),
            case0: gen_term(c, ty, ctx, fuel - 1).rc(),
            case1: gen_term(c, ty, ctx, fuel - 1).rc(),
            target: gen_term(c, &Ty::Two, ctx, fuel - 1).rc(),
        },
        6 => {
            let mut inner = ctx.to_vec();
            inner.push(Ty::Nat);
            inner.push(ty.clone());
            Term::NatElim {
                motive: bind(["_"], ty.term()),
                base: gen_term(c, ty, ctx, fuel - 1).rc(),
                step: bind(["k", "r"], gen_term(c, ty, &inner, fuel - 1)),
                target: gen_term(c, &Ty::Nat, ctx, fuel - 1).rc(),
            }
        }
        7 => {
            // Path induction on a reflexivity proof.
            let a = gen_ty(c, 1);
            let mut inner = ctx.to_vec();
            inner.push(a.clone());
            Term::J {
                motive: bind(["a", "b", "q"], ty.term()),
                base: bind(["a"], gen_term(c, ty, &inner, fuel - 1)),
                path: Term::Refl(annotated(gen_term(c, &a, ctx, fuel - 1), &a).rc()).rc(),
            }
        }
        8 => {
            let fns: Vec<(usize, Ty)> = (0..ctx.len())
                .filter_map(|i| match &ctx[ctx.len() - 1 - i] {
                    Ty::Fun(a, b) if **b == *ty => Some((i, (**a).clone())),
                    _ => None,
                })
                .collect();
            if fns.is_empty() {
                intro(c, ty, ctx, fuel - 1)
            } else {
                let (i, a) = fns[c.pick(fns.len())].clone();
                Term::app(Term::Var(i), gen_term(c, &a, ctx, fuel - 1))
            }
        }
        _ => intro(c, ty, ctx, fuel.saturating_sub(1)),
    }
}

/// Projections and `refl` need an inferable subject; pairs and lambdas are
/// only checkable.
pub fn annotated(t: Term, ty: &Ty) -> Term {
    Term::Ann(t.rc(), ty.term().rc())
}

pub fn intro(c: &mut Choices, ty: &Ty, ctx: &[Ty], fuel: u32) -> Term {
    match ty {
        Ty::Two => {
            if c.pick(2) == 0 {
                Term::ZeroTwo
            } else {
                Term::OneTwo
            }
        }
        Ty::Nat => {
            if fuel == 0 || c.pick(2) == 0 {
                Term::Zero
            } else {
                Term::Suc(gen_term(c, &Ty::Nat, ctx, fuel - 1).rc())
            }
        }
        Ty::Unit => Term::Star,
        Ty::Fun(a, b) => {
            let mut inner = ctx.to_vec();
            inner.push((**a).clone());
            Term::lam(["x", "y", "g"][c.pick(3)], gen_term(c, b, &inner, fuel))
        }
        Ty::Prod(a, b) => Term::Pair(gen_term(c, a, ctx, fuel).rc(), gen_term(c, b, ctx, fuel).rc()),
    }
}

pub fn typed(bytes: &[u8]) -> (Term, Ty) {
    let mut c = Choices::new(bytes);
    let ty = gen_ty(&mut c, 2);
    let t = gen_term(&mut c, &ty, &[], 3);
    (t, ty)
}

/// A well-scoped but usually ill-typed term over every term former, with
/// references to the globals `g` (a definition) and `h` (an axiom).
pub fn gen_scoped(c: &mut Choices, depth: usize, fuel: u32) -> Term {
    let hint = |c: &mut Choices| ["x", "y", "x1", "g", "h", "_"][c.pick(6)];
    let leaf = |c: &mut Choices| match c.pick(12) {
        0 => Term::ZeroTwo,
        1 => Term::OneTwo,
        2 => Term::Zero,
        3 => Term::Star,
        4 => Term::TwoType,
        5 => Term::NatType,
        6 => Term::UnitType,
        7 => Term::EmptyType,
        8 => Term::Universe(Level(c.pick(8) as u32)),
        9 => Term::Const("g".into()),
        10 => Term::AxiomRef("h".into()),
        _ if depth > 0 => Term::Var(c.pick(depth)),
        _ => Term::numeral(c.pick(5) as u64),
    };
    if fuel == 0 {
        return leaf(c);
    }
    let f = fuel - 1;
    let sub = |c: &mut Choices, extra: usize| gen_scoped(c, depth + extra, f);
    match c.pick(16) {
        0 => Term::pi(hint(c), sub(c, 0), sub(c, 1)),
        1 => Term::lam(hint(c), sub(c, 1)),
        2 => Term::app(sub(c, 0), sub(c, 0)),
        3 => Term::sigma(hint(c), sub(c, 0), sub(c, 1)),
        4 => Term::Pair(sub(c, 0).rc(), sub(c, 0).rc()),
        5 => Term::Fst(sub(c, 0).rc()),
        6 => Term::Snd(sub(c, 0).rc()),
        7 => Term::id(sub(c, 0), sub(c, 0), sub(c, 0)),
        8 => Term::Refl(sub(c, 0).rc()),
        9 => Term::J {
            motive: bind([hint(c), hint(c), hint(c)], sub(c, 3)),
            base: bind([hint(c)], sub(c, 1)),
            path: sub(c, 0).rc(),
        },
        10 => Term::Suc(sub(c, 0).rc()),
        11 => Term::NatElim {
            motive: bind([hint(c)], sub(c, 1)),
            base: sub(c, 0).rc(),
            step: bind([hint(c), hint(c)], sub(c, 2)),
            target: sub(c, 0).rc(),
        },
        12 => Term::EmptyElim {
            motive: bind([hint(c)], sub(c, 1)),
            target: sub(c, 0).rc(),
        },
        13 => Term::TwoElim {
            motive: bind([hint(c)], sub(c, 1)),
            case0: sub(c, 0).rc(),
            case1: sub(c, 0).rc(),
            target: sub(c, 0).rc(),
        },
        14 => Term::Ann(sub(c, 0).rc(), sub(c, 0).rc()),
        _ => leaf(c),
    }
}

pub fn globals() -> GlobalScope {
    let mut g = GlobalScope::new();
    g.insert("g".into(), DeclKind::Def);
    g.insert("h".into(), DeclKind::Axiom);
    g
}

/// A closed type together with its universe level, possibly mentioning
/// universes and identity types.
pub fn gen_large_type(c: &mut Choices, fuel: u32) -> (Term, u32) {
    let k = if fuel == 0 { 4 } else { 8 };
    match c.pick(k) {
        0 => (Term::TwoType, 0),
        1 => (Term::NatType, 0),
        2 => (Term::EmptyType, 0),
        3 => {
            let l = c.pick(3) as u32;
            (Term::Universe(Level(l)), l + 1)
        }
        4 | 5 => {
            let (a, la) = gen_large_type(c, fuel - 1);
            let (b, lb) = gen_large_type(c, fuel - 1);
            let t = if c.pick(2) == 0 { Term::pi("_", a, b) } else { Term::sigma("_", a, b) };
            (t, la.max(lb))
        }
        6 => {
            let (a, la) = gen_large_type(c, fuel - 1);
            (Term::id(Term::Universe(Level(la)), a.clone(), a), la + 1)
        }
        _ => {
            let (t, ty) = {
                let ty = gen_ty(c, 1);
                (gen_term(c, &ty, &[], 1), ty)
            };
            (Term::id(ty.term(), t.clone(), t), 0)
        }
    }
}
