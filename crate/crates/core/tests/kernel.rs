use hlevel_core::check::{AxiomPolicy, Options, Status};
use hlevel_core::driver::{FileResult, Session};
use hlevel_core::syntax::Diagnostic;

fn session() -> Session {
    Session::new(Options::default(), AxiomPolicy::default())
}

fn run(src: &str) -> FileResult {
    session().check_source("t.hott", src).expect("parses")
}

fn accepted(src: &str) -> bool {
    run(src).all_accepted()
}

/// The diagnostic code of the last declaration, which must be rejected.
fn rejection(src: &str) -> String {
    let r = run(src);
    match &r.outcomes.last().expect("at least one declaration").status {
        Status::Rejected(d) => d.code.to_string(),
        Status::Accepted => panic!("expected rejection of:\n{src}"),
    }
}

fn normal_form(src: &str, name: &str) -> String {
    let mut s = session();
    let r = s.check_source("t.hott", src).expect("parses");
    assert!(r.all_accepted(), "{:?}", r.rejected().collect::<Vec<_>>());
    s.normalize(name).expect("checked definition")
}

const SWAP: &str = "def swap (b : Two) : Two := twoelim [_. Two] 1_2 0_2 b\n";
const ADD: &str = "def add (m n : Nat) : Nat := natrec [_. Nat] m [k r. suc r] n\n";

#[test]
fn swap_computes() {
    let src = format!("{SWAP}def swap_one : Two := swap 1_2\ndef swap_swap_one : Two := swap (swap 1_2)\n");
    assert_eq!(normal_form(&src, "swap_one"), "0₂");
    assert_eq!(normal_form(&src, "swap_swap_one"), "1₂");
}

#[test]
fn unary_addition() {
    let src = format!("{ADD}def two_plus_two : Nat := add 2 2\n");
    assert_eq!(normal_form(&src, "two_plus_two"), "4");
}

#[test]
fn addition_recurses_on_the_second_argument() {
    let ok = format!("{ADD}def step (m n : Nat) : Id Nat (add m (suc n)) (suc (add m n)) := refl (suc (add m n))\n");
    assert!(accepted(&ok));
    // The other equation needs induction and is not judgmental.
    let bad = format!("{ADD}def step (m n : Nat) : Id Nat (add (suc m) n) (suc (add m n)) := refl (suc (add m n))\n");
    assert_eq!(rejection(&bad), "endpoint-mismatch");
}

#[test]
fn path_induction_computes_on_refl() {
    let src = "def inv (A : U0) (x y : A) (p : Id A x y) : Id A y x := J [a b q. Id A b a] [a. refl a] p\n\
               def inv_refl (A : U0) (x : A) : Id (Id A x x) (inv A x x (refl x)) (refl x) := refl (refl x)\n";
    assert!(accepted(src));
}

#[test]
fn axioms_stay_neutral() {
    let src = "axiom ax (A : U0) : A -> A\ndef at_two : Two -> Two := ax Two\ndef stuck : Two := ax Two 0_2\n";
    assert_eq!(normal_form(src, "stuck"), "ax Two 0₂");
}

#[test]
fn eta_for_functions() {
    assert!(accepted("def eta (f : Two -> Nat) : Id (Two -> Nat) f (fun x => f x) := refl f\n"));
}

#[test]
fn eta_for_pairs_is_switchable() {
    let src = "def eta (w : Two * Nat) : Id (Two * Nat) w (fst w, snd w) := refl w\n";
    assert!(accepted(src));
    let opts = Options {
        eta_sigma: false,
        ..Options::default()
    };
    let mut s = Session::new(opts, AxiomPolicy::default());
    assert!(!s.check_source("t.hott", src).unwrap().all_accepted());
}

#[test]
fn eta_for_unit() {
    assert!(accepted("def eta (u : Unit) : Id Unit u star := refl star\n"));
}

#[test]
fn endpoint_mismatch_is_reported() {
    assert_eq!(rejection("goal bad : Id Two 0_2 1_2 := refl 0_2\n"), "endpoint-mismatch");
}

#[test]
fn universe_is_not_in_itself() {
    assert!(!accepted("goal bad : U0 := U0\n"));
    assert!(accepted("goal ok : U1 := U0\n"));
}

#[test]
fn cumulativity_goes_up_only() {
    assert!(accepted("def up (A : U0) : U1 := A\n"));
    assert!(!accepted("def down (A : U1) : U0 := A\n"));
    // Function domains are invariant, codomains covariant.
    assert!(accepted("def f (g : U1 -> U0) : U1 -> U1 := g\n"));
    assert!(!accepted("def f (g : U0 -> U0) : U1 -> U0 := g\n"));
}

#[test]
fn identity_types_are_not_cumulative() {
    assert!(!accepted("def f (A : U0) (p : Id U0 A A) : Id U1 A A := p\n"));
}

#[test]
fn universe_levels_are_capped() {
    // U8 itself would need U9 as its type.
    assert!(accepted("def top : U7 := U6\n"));
    assert_eq!(rejection("def over : U9 := U8\n"), "level-overflow");
}

#[test]
fn empty_elimination_does_not_fire_on_variables() {
    let src = "def from_empty (e : Empty) : Two := absurd [_. Two] e\n";
    assert_eq!(normal_form(src, "from_empty"), "fun e => absurd [x. Two] e");
}

#[test]
fn unbound_names_suggest_the_nearest_one() {
    let r = run(&format!("{SWAP}def bad : Two := swap2 0_2\n"));
    let Status::Rejected(d) = &r.outcomes[1].status else {
        panic!("accepted an unbound name")
    };
    assert_eq!(d.code, "unbound");
    assert!(d.message.contains("swap"), "{}", d.message);
}

#[test]
fn duplicates_are_rejected() {
    assert_eq!(rejection("def a : Two := 0_2\ndef a : Two := 1_2\n"), "duplicate");
}

#[test]
fn dependents_of_rejected_declarations_are_rejected() {
    let r = run("def bad : Two := 0\ndef uses : Two := bad\n");
    let Status::Rejected(d) = &r.outcomes[1].status else {
        panic!("accepted a dependent of a rejected declaration")
    };
    assert_eq!(d.code, "rejected-dependency");
}

#[test]
fn omitted_axioms_are_rejected() {
    let mut s = Session::new(Options::default(), AxiomPolicy::omitting(["ua_*"]));
    let r = s
        .check_source("t.hott", "axiom ua_0 : Empty\naxiom other : Unit\ndef use : Empty := ua_0\n")
        .unwrap();
    let statuses: Vec<bool> = r.outcomes.iter().map(|o| o.status == Status::Accepted).collect();
    assert_eq!(statuses, [false, true, false]);
}

#[test]
fn parse_errors_carry_spans_inside_the_input() {
    for src in ["def x :=", "def f : Two := (0_2", "goal : Two := 0_2", "def x : Two := fun => 0_2"] {
        let errs: Vec<Diagnostic> = session().check_source("t.hott", src).expect_err(src);
        assert!(!errs.is_empty());
        for e in errs {
            assert!(e.span.start <= e.span.end && e.span.end <= src.len(), "{src}: {e:?}");
        }
    }
}

#[test]
fn provenance_comes_from_marked_comments() {
    let r = run("--| the identity\ndef id2 : Two -> Two := fun x => x\n-- plain comment\ndef k : Two := 0_2\n");
    assert_eq!(r.outcomes[0].provenance, "the identity");
    assert_eq!(r.outcomes[1].provenance, "");
}

#[test]
fn goals_do_not_enter_scope() {
    assert_eq!(rejection("goal g : Two := 0_2\ndef h : Two := g\n"), "unbound");
}
