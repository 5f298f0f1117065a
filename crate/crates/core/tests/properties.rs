//! Property tests over randomly generated terms.

mod common;

use common::*;

use hlevel_core::check::{AxiomPolicy, Kernel, Options, Status};
use hlevel_core::driver::Session;
use hlevel_core::parse::{parse, parse_term};
use hlevel_core::print::print_with_globals;
use hlevel_core::report::Report;
use hlevel_core::resolve::{resolve_each, resolve_term, GlobalScope};
use hlevel_core::syntax::{Level, Term};
use proptest::prelude::*;

fn kernel() -> Kernel {
    Kernel::new(Options::default())
}

fn bytes() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 0..96)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printing_then_parsing_is_the_identity(b in bytes()) {
        let t = gen_scoped(&mut Choices::new(&b), 0, 4);
        let scope = globals();
        let src = print_with_globals(&t, &[], &|s| scope.contains(s));
        let surface = parse_term(&src).map_err(|e| TestCaseError::fail(format!("{src}: {e:?}")))?;
        let back = resolve_term(&surface, &scope, &[]).map_err(|e| TestCaseError::fail(format!("{src}: {e:?}")))?;
        prop_assert_eq!(back, t, "{}", src);
    }

    #[test]
    fn printing_with_free_variables_round_trips(b in bytes()) {
        // Binders named `x` shadow the free `x`; the printer must rename.
        let t = gen_scoped(&mut Choices::new(&b), 2, 3);
        let locals: Vec<hlevel_core::syntax::Name> = vec!["x".into(), "y".into()];
        let scope = globals();
        let src = print_with_globals(&t, &locals, &|s| scope.contains(s));
        let surface = parse_term(&src).map_err(|e| TestCaseError::fail(format!("{src}: {e:?}")))?;
        let back = resolve_term(&surface, &scope, &locals).map_err(|e| TestCaseError::fail(format!("{src}: {e:?}")))?;
        prop_assert_eq!(back, t, "{}", src);
    }

    #[test]
    fn generated_terms_check(b in bytes()) {
        let (t, ty) = typed(&b);
        prop_assert!(kernel().check_closed(&t, &ty.term()).is_ok(), "{:?} : {:?}", t, ty);
    }

    #[test]
    fn normalization_is_idempotent_and_sound(b in bytes()) {
        let (t, ty) = typed(&b);
        let k = kernel();
        let n1 = k.normalize_term(&t, &ty.term()).unwrap();
        let n2 = k.normalize_term(&n1, &ty.term()).unwrap();
        prop_assert_eq!(&n1, &n2);
        prop_assert!(k.convertible(&t, &n1, &ty.term()));
    }

    #[test]
    fn closed_booleans_and_numbers_are_canonical(b in bytes()) {
        let mut c = Choices::new(&b);
        let ty = if c.pick(2) == 0 { Ty::Two } else { Ty::Nat };
        let t = gen_term(&mut c, &ty, &[], 4);
        let n = kernel().normalize_term(&t, &ty.term()).unwrap();
        match ty {
            Ty::Two => prop_assert!(matches!(n, Term::ZeroTwo | Term::OneTwo), "{:?}", n),
            _ => prop_assert!(n.as_numeral().is_some(), "{:?}", n),
        }
    }

    #[test]
    fn eta_holds_for_functions_and_pairs(b in bytes()) {
        let (t, ty) = typed(&b);
        let k = kernel();
        match &ty {
            Ty::Fun(..) => {
                let expanded = Term::lam("x", Term::app(t.clone(), Term::Var(0)));
                prop_assert!(k.convertible(&t, &expanded, &ty.term()));
            }
            Ty::Prod(..) => {
                let expanded = Term::Pair(Term::Fst(t.clone().rc()).rc(), Term::Snd(t.clone().rc()).rc());
                prop_assert!(k.convertible(&t, &expanded, &ty.term()));
            }
            Ty::Unit => prop_assert!(k.convertible(&t, &Term::Star, &ty.term())),
            _ => {}
        }
    }

    #[test]
    fn distinct_normal_forms_are_not_convertible(a in bytes(), b in bytes()) {
        let (s, ty) = typed(&a);
        let mut c = Choices::new(&b);
        let t = gen_term(&mut c, &ty, &[], 3);
        let k = kernel();
        let (ns, nt) = (k.normalize_term(&s, &ty.term()).unwrap(), k.normalize_term(&t, &ty.term()).unwrap());
        if matches!(ty, Ty::Two | Ty::Nat) {
            prop_assert_eq!(ns == nt, k.convertible(&s, &t, &ty.term()));
        }
    }

    #[test]
    fn checking_is_deterministic(b in bytes()) {
        let mut src = String::new();
        let mut c = Choices::new(&b);
        for i in 0..3 {
            let ty = gen_ty(&mut c, 2);
            let t = gen_term(&mut c, &ty, &[], 3);
            let none = |_: &str| false;
            src.push_str(&format!(
                "def d{i} : {} := {}\n",
                print_with_globals(&ty.term(), &[], &none),
                print_with_globals(&t, &[], &none)
            ));
        }
        // One deliberately wrong declaration, so rejections are covered too.
        src.push_str("def wrong : Id Two 0_2 1_2 := refl 0_2\n");
        let json = |_| {
            let mut s = Session::new(Options::default(), AxiomPolicy::default());
            let r = s.check_source("t.hott", &src).unwrap();
            Report::from_file(&r, &src).without_timing().to_json()
        };
        let runs: Vec<String> = (0..3).map(json).collect();
        prop_assert_eq!(&runs[0], &runs[1]);
        prop_assert_eq!(&runs[1], &runs[2]);
    }

    #[test]
    fn raising_universes_preserves_typing(b in bytes(), by in 1u32..4) {
        let (ty, level) = gen_large_type(&mut Choices::new(&b), 3);
        let k = kernel();
        let u = Term::Universe(Level(level));
        prop_assert!(k.check_closed(&ty, &u).is_ok(), "{:?} : {:?}", ty, u);
        // Raising past the ceiling is a level overflow, covered elsewhere.
        prop_assume!(level + by < k.opts.max_level);
        let raised = k.check_closed(&ty.raise_universes(by), &u.raise_universes(by));
        prop_assert!(raised.is_ok(), "{:?} raised by {}: {:?}", ty, by, raised);
        // Cumulativity: the unraised type also lives in every higher universe.
        prop_assert!(k.check_closed(&ty, &u.raise_universes(by)).is_ok());
    }
}

#[test]
fn raising_universes_of_whole_modules_preserves_acceptance() {
    let src = "def id (A : U0) (x : A) : A := x\n\
               def twice (A : U0) (f : A -> A) : A -> A := fun x => f (f x)\n\
               def pair_up (A : U1) (B : A -> U0) : U1 := (a : A) * B a\n\
               def inv (A : U0) (x y : A) (p : Id A x y) : Id A y x := J [a b q. Id A b a] [a. refl a] p\n\
               def tr (A : U0) (P : A -> U0) (x y : A) (p : Id A x y) : P x -> P y := J [a b q. P a -> P b] [a. fun u => u] p\n";
    let decls = parse(src).unwrap();
    for by in 1..4 {
        let mut scope = GlobalScope::new();
        let mut k = kernel();
        for d in resolve_each(&decls, &mut scope) {
            let mut d = d.unwrap();
            d.ty = d.ty.raise_universes(by);
            d.body = d.body.map(|b| b.raise_universes(by));
            let out = k.check_decl(&d);
            assert!(out.status == Status::Accepted, "{} raised by {by}: {:?}", d.name, out.status);
        }
    }
}
