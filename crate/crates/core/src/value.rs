//! The semantic domain of normalization by evaluation.

use std::sync::{Arc, OnceLock};

use crate::syntax::{Hint, Level, Name, RcTerm};

/// A de Bruijn level (0 = outermost binder).
pub type Lvl = usize;

/// Persistent environment; the innermost binder sits at the head.
#[derive(Clone, Debug, Default)]
pub struct Env {
    head: Option<Arc<EnvNode>>,
    len: usize,
}

#[derive(Debug)]
struct EnvNode {
    val: Value,
    next: Option<Arc<EnvNode>>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&self, val: Value) -> Env {
        Env {
            head: Some(Arc::new(EnvNode {
                val,
                next: self.head.clone(),
            })),
            len: self.len + 1,
        }
    }

    /// Looks up a de Bruijn index.
    pub fn get(&self, ix: usize) -> Option<&Value> {
        let mut node = self.head.as_deref()?;
        for _ in 0..ix {
            node = node.next.as_deref()?;
        }
        Some(&node.val)
    }
}

/// A term body together with the environment it was closed over.
#[derive(Clone, Debug)]
pub struct Closure {
    pub env: Env,
    pub body: RcTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    Var(Lvl),
    Axiom(Name),
}

/// An elimination waiting on a stuck head.
#[derive(Clone, Debug)]
pub enum Frame {
    App(Value),
    Fst,
    Snd,
    J {
        motive: Closure,
        mhints: [Hint; 3],
        base: Closure,
        bhint: Hint,
    },
    NatElim {
        motive: Closure,
        mhint: Hint,
        base: Value,
        step: Closure,
        shints: [Hint; 2],
    },
    TwoElim {
        motive: Closure,
        mhint: Hint,
        case0: Value,
        case1: Value,
    },
    EmptyElim {
        motive: Closure,
        mhint: Hint,
    },
}

#[derive(Debug)]
pub enum Thunk {
    Def(Name),
    Apply(Arc<Lazy>, Value),
}

/// The unfolding of a definition application, computed at most once.
#[derive(Debug)]
pub struct Lazy {
    pub cell: OnceLock<Value>,
    pub thunk: Thunk,
}

/// A top-level definition applied to arguments, kept folded for printing and
/// cheap conversion, with its unfolding available on demand.
#[derive(Clone, Debug)]
pub struct Glued {
    pub name: Name,
    pub args: Vec<Value>,
    pub lazy: Arc<Lazy>,
}

#[derive(Clone, Debug)]
pub enum Value {
    Universe(Level),
    Pi(Hint, Arc<Value>, Closure),
    Lam(Hint, Closure),
    Sigma(Hint, Arc<Value>, Closure),
    Pair(Arc<Value>, Arc<Value>),
    IdType(Arc<Value>, Arc<Value>, Arc<Value>),
    Refl(Arc<Value>),
    NatType,
    Zero,
    Suc(Arc<Value>),
    EmptyType,
    UnitType,
    Star,
    TwoType,
    ZeroTwo,
    OneTwo,
    Neutral(Head, Vec<Frame>),
    Glued(Glued),
}

impl Value {
    pub fn var(lvl: Lvl) -> Value {
        Value::Neutral(Head::Var(lvl), Vec::new())
    }

    pub fn arc(self) -> Arc<Value> {
        Arc::new(self)
    }

    pub fn glued(name: Name) -> Value {
        Value::Glued(Glued {
            name: name.clone(),
            args: Vec::new(),
            lazy: Arc::new(Lazy {
                cell: OnceLock::new(),
                thunk: Thunk::Def(name),
            }),
        })
    }
}
