//! Type-directed conversion and cumulative subtyping.

use crate::eval::Machine;
use crate::value::{Closure, Frame, Glued, Head, Value};

/// Conversion checker over a context of variable types, indexed by level.
pub struct Conv<'m, 'a> {
    m: &'m Machine<'a>,
    eta_sigma: bool,
    tys: Vec<Value>,
}

impl<'m, 'a> Conv<'m, 'a> {
    pub fn new(m: &'m Machine<'a>, eta_sigma: bool, tys: Vec<Value>) -> Conv<'m, 'a> {
        Conv { m, eta_sigma, tys }
    }

    fn depth(&self) -> usize {
        self.tys.len()
    }

    /// Runs `f` with fresh variables of the given types in scope.
    fn under<R>(
        &mut self,
        tys: impl IntoIterator<Item = Value>,
        f: impl FnOnce(&mut Self, Vec<Value>) -> R,
    ) -> R {
        let d0 = self.depth();
        let mut vars = Vec::new();
        for ty in tys {
            vars.push(Value::var(self.depth()));
            self.tys.push(ty);
        }
        let r = f(self, vars);
        self.tys.truncate(d0);
        r
    }

    fn same_glued(&mut self, g1: &Glued, g2: &Glued) -> bool {
        if g1.name != g2.name || g1.args.len() != g2.args.len() {
            return false;
        }
        let Some(mut ty) = self.m.sig.def_type(&g1.name).cloned() else {
            return false;
        };
        for (a1, a2) in g1.args.iter().zip(&g2.args) {
            match self.m.force(&ty) {
                Value::Pi(_, dom, cod) => {
                    if !self.conv(a1, a2, &dom) {
                        return false;
                    }
                    ty = self.m.inst1(&cod, a1.clone());
                }
                _ => return false,
            }
        }
        true
    }

    /// Are `v1` and `v2`, both of type `ty`, judgmentally equal?
    pub fn conv(&mut self, v1: &Value, v2: &Value, ty: &Value) -> bool {
        if let (Value::Glued(g1), Value::Glued(g2)) = (v1, v2) {
            if self.same_glued(g1, g2) {
                return true;
            }
        }
        match self.m.force(ty) {
            Value::Pi(_, dom, cod) => self.under([(*dom).clone()], |c, xs| {
                let x = xs[0].clone();
                let b1 = c.m.apply(v1.clone(), x.clone());
                let b2 = c.m.apply(v2.clone(), x.clone());
                let cty = c.m.inst1(&cod, x);
                c.conv(&b1, &b2, &cty)
            }),
            Value::Sigma(_, a, b) if self.eta_sigma => {
                let f1 = self.m.fst(v1.clone());
                let f2 = self.m.fst(v2.clone());
                if !self.conv(&f1, &f2, &a) {
                    return false;
                }
                let s1 = self.m.snd(v1.clone());
                let s2 = self.m.snd(v2.clone());
                let sty = self.m.inst1(&b, f1);
                self.conv(&s1, &s2, &sty)
            }
            Value::UnitType => true,
            Value::Universe(_) => self.conv_ty(v1, v2),
            ty => self.structural(&self.m.force(v1), &self.m.force(v2), &ty),
        }
    }

    fn structural(&mut self, v1: &Value, v2: &Value, ty: &Value) -> bool {
        match (v1, v2) {
            (Value::Neutral(h1, sp1), Value::Neutral(h2, sp2)) => {
                self.neutral(h1, sp1, h2, sp2).is_some()
            }
            (Value::Refl(a), Value::Refl(b)) => match ty {
                Value::IdType(aty, _, _) => self.conv(a, b, aty),
                _ => false,
            },
            (Value::Zero, Value::Zero)
            | (Value::ZeroTwo, Value::ZeroTwo)
            | (Value::OneTwo, Value::OneTwo)
            | (Value::Star, Value::Star) => true,
            (Value::Suc(a), Value::Suc(b)) => self.conv(a, b, &Value::NatType),
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => match ty {
                Value::Sigma(_, a, b) => {
                    let sty = self.m.inst1(b, (**a1).clone());
                    self.conv(a1, a2, a) && self.conv(b1, b2, &sty)
                }
                _ => false,
            },
            _ => false,
        }
    }

    fn binder_types(
        &mut self,
        d1: &Value,
        c1: &Closure,
        d2: &Value,
        c2: &Closure,
        sub: bool,
    ) -> bool {
        self.conv_ty(d1, d2)
            && self.under([d1.clone()], |c, xs| {
                let b1 = c.m.inst1(c1, xs[0].clone());
                let b2 = c.m.inst1(c2, xs[0].clone());
                if sub {
                    c.subtype(&b1, &b2)
                } else {
                    c.conv_ty(&b1, &b2)
                }
            })
    }

    /// Judgmental equality of two types.
    pub fn conv_ty(&mut self, a: &Value, b: &Value) -> bool {
        if let (Value::Glued(g1), Value::Glued(g2)) = (a, b) {
            if self.same_glued(g1, g2) {
                return true;
            }
        }
        match (self.m.force(a), self.m.force(b)) {
            (Value::Universe(i), Value::Universe(j)) => i == j,
            (Value::Pi(_, d1, c1), Value::Pi(_, d2, c2)) => {
                self.binder_types(&d1, &c1, &d2, &c2, false)
            }
            (Value::Sigma(_, d1, c1), Value::Sigma(_, d2, c2)) => {
                self.binder_types(&d1, &c1, &d2, &c2, false)
            }
            (Value::IdType(a1, x1, y1), Value::IdType(a2, x2, y2)) => {
                self.conv_ty(&a1, &a2) && self.conv(&x1, &x2, &a1) && self.conv(&y1, &y2, &a1)
            }
            (Value::NatType, Value::NatType)
            | (Value::EmptyType, Value::EmptyType)
            | (Value::UnitType, Value::UnitType)
            | (Value::TwoType, Value::TwoType) => true,
            (Value::Neutral(h1, sp1), Value::Neutral(h2, sp2)) => {
                self.neutral(&h1, &sp1, &h2, &sp2).is_some()
            }
            _ => false,
        }
    }

    /// Cumulative subtyping: universes grow upward, Π is invariant in its
    /// domain and covariant in its codomain, Σ is covariant in both.
    pub fn subtype(&mut self, a: &Value, b: &Value) -> bool {
        if let (Value::Glued(g1), Value::Glued(g2)) = (a, b) {
            if self.same_glued(g1, g2) {
                return true;
            }
        }
        match (self.m.force(a), self.m.force(b)) {
            (Value::Universe(i), Value::Universe(j)) => i <= j,
            (Value::Pi(_, d1, c1), Value::Pi(_, d2, c2)) => {
                self.binder_types(&d1, &c1, &d2, &c2, true)
            }
            (Value::Sigma(_, d1, c1), Value::Sigma(_, d2, c2)) => {
                self.subtype(&d1, &d2)
                    && self.under([(*d1).clone()], |c, xs| {
                        let b1 = c.m.inst1(&c1, xs[0].clone());
                        let b2 = c.m.inst1(&c2, xs[0].clone());
                        c.subtype(&b1, &b2)
                    })
            }
            (a, b) => self.conv_ty(&a, &b),
        }
    }

    fn head_type(&self, h: &Head) -> Option<Value> {
        match h {
            Head::Var(l) => self.tys.get(*l).cloned(),
            Head::Axiom(n) => self.m.sig.axiom_type(n).cloned(),
        }
    }

    /// Compares two neutral spines; on success returns their common type.
    fn neutral(&mut self, h1: &Head, sp1: &[Frame], h2: &Head, sp2: &[Frame]) -> Option<Value> {
        if h1 != h2 || sp1.len() != sp2.len() {
            return None;
        }
        let mut ty = self.head_type(h1)?;
        let mut cur = Value::Neutral(h1.clone(), Vec::new());
        for (f1, f2) in sp1.iter().zip(sp2) {
            let fty = self.m.force(&ty);
            ty = match (f1, f2, fty) {
                (Frame::App(a1), Frame::App(a2), Value::Pi(_, dom, cod)) => {
                    if !self.conv(a1, a2, &dom) {
                        return None;
                    }
                    self.m.inst1(&cod, a1.clone())
                }
                (Frame::Fst, Frame::Fst, Value::Sigma(_, a, _)) => (*a).clone(),
                (Frame::Snd, Frame::Snd, Value::Sigma(_, _, b)) => {
                    self.m.inst1(&b, self.m.fst(cur.clone()))
                }
                (
                    Frame::J {
                        motive: m1,
                        base: b1,
                        ..
                    },
                    Frame::J {
                        motive: m2,
                        base: b2,
                        ..
                    },
                    Value::IdType(aty, x, y),
                ) => {
                    let a = (*aty).clone();
                    let motives = self.under([a.clone(), a.clone()], |c, xy| {
                        let pty =
                            Value::IdType(aty.clone(), xy[0].clone().arc(), xy[1].clone().arc());
                        c.under([pty], |c, p| {
                            let args = [xy[0].clone(), xy[1].clone(), p[0].clone()];
                            let t1 = c.m.inst(m1, args.clone());
                            let t2 = c.m.inst(m2, args);
                            c.conv_ty(&t1, &t2)
                        })
                    });
                    if !motives {
                        return None;
                    }
                    let bases = self.under([a], |c, z| {
                        let z = z[0].clone();
                        let refl = Value::Refl(z.clone().arc());
                        let bty = c.m.inst(m1, [z.clone(), z.clone(), refl]);
                        let v1 = c.m.inst1(b1, z.clone());
                        let v2 = c.m.inst1(b2, z);
                        c.conv(&v1, &v2, &bty)
                    });
                    if !bases {
                        return None;
                    }
                    self.m.inst(m1, [(*x).clone(), (*y).clone(), cur.clone()])
                }
                (
                    Frame::NatElim {
                        motive: m1,
                        base: z1,
                        step: s1,
                        ..
                    },
                    Frame::NatElim {
                        motive: m2,
                        base: z2,
                        step: s2,
                        ..
                    },
                    _,
                ) => {
                    if !self.motives(m1, m2, Value::NatType) {
                        return None;
                    }
                    let zty = self.m.inst1(m1, Value::Zero);
                    if !self.conv(z1, z2, &zty) {
                        return None;
                    }
                    let steps = self.under([Value::NatType], |c, n| {
                        let n = n[0].clone();
                        let ihty = c.m.inst1(m1, n.clone());
                        c.under([ihty], |c, ih| {
                            let args = [n.clone(), ih[0].clone()];
                            let v1 = c.m.inst(s1, args.clone());
                            let v2 = c.m.inst(s2, args);
                            let sty = c.m.inst1(m1, Value::Suc(n.clone().arc()));
                            c.conv(&v1, &v2, &sty)
                        })
                    });
                    if !steps {
                        return None;
                    }
                    self.m.inst1(m1, cur.clone())
                }
                (
                    Frame::TwoElim {
                        motive: m1,
                        case0: a1,
                        case1: b1,
                        ..
                    },
                    Frame::TwoElim {
                        motive: m2,
                        case0: a2,
                        case1: b2,
                        ..
                    },
                    _,
                ) => {
                    if !self.motives(m1, m2, Value::TwoType) {
                        return None;
                    }
                    let t0 = self.m.inst1(m1, Value::ZeroTwo);
                    let t1 = self.m.inst1(m1, Value::OneTwo);
                    if !(self.conv(a1, a2, &t0) && self.conv(b1, b2, &t1)) {
                        return None;
                    }
                    self.m.inst1(m1, cur.clone())
                }
                (Frame::EmptyElim { motive: m1, .. }, Frame::EmptyElim { motive: m2, .. }, _) => {
                    if !self.motives(m1, m2, Value::EmptyType) {
                        return None;
                    }
                    self.m.inst1(m1, cur.clone())
                }
                _ => return None,
            };
            if let Value::Neutral(_, sp) = &mut cur {
                sp.push(f1.clone());
            }
        }
        Some(ty)
    }

    fn motives(&mut self, m1: &Closure, m2: &Closure, over: Value) -> bool {
        self.under([over], |c, x| {
            let t1 = c.m.inst1(m1, x[0].clone());
            let t2 = c.m.inst1(m2, x[0].clone());
            c.conv_ty(&t1, &t2)
        })
    }
}
