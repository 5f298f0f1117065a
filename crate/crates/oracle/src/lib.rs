//! Exhaustive checks in the model where types are finite sets and paths
//! are bijections.
//!
//! The model is 1-truncated, so it can only witness facts about paths
//! between elements of sets and loops of dimension one. Every suite is a
//! complete enumeration up to the bound; nothing is sampled.

pub mod model;

use std::collections::BTreeMap;
use std::fmt;

use hlevel_core::report::{Entry, EntryStatus, Report};

pub use model::{automorphisms, enumerate_bijections, FinBij, FinSet};

pub const DEFAULT_BOUND: usize = 4;

/// Largest accepted bound. Associativity at size 6 alone is 720^3 triples.
pub const MAX_BOUND: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    BoundExceeded { bound: usize, max: usize },
    UnknownSuite(String),
    SizeOverBound { label: String, size: usize, bound: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BoundExceeded { bound, max } => {
                write!(f, "bound {bound} exceeds the maximum of {max}")
            }
            OracleError::UnknownSuite(s) => {
                write!(f, "unknown suite `{s}` (known suites: {})", SUITES.join(", "))
            }
            OracleError::SizeOverBound { label, size, bound } => {
                write!(f, "set `{label}` has size {size}, over the bound {bound}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// One violated law with its first witness in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub law: String,
    pub witness: String,
    pub occurrences: u64,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({} occurrence", self.law, self.witness, self.occurrences)?;
        if self.occurrences != 1 {
            f.write_str("s")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub suite: &'static str,
    /// Corpus declarations whose dimension-one shadow the suite checks.
    pub models: &'static [&'static str],
    pub cases: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_entry(&self) -> Entry {
        Entry {
            name: self.suite.to_string(),
            status: if self.passed() { EntryStatus::Passed } else { EntryStatus::Failed },
            paper_ref: None,
            ms: None,
            diagnostic: None,
            detail: None,
            cases: Some(self.cases),
            models: self.models.iter().map(|s| s.to_string()).collect(),
            counterexamples: self.counterexamples.iter().map(|c| c.to_string()).collect(),
        }
    }
}

/// Counts cases and keeps the first witness of each violated law.
struct Tally {
    suite: &'static str,
    models: &'static [&'static str],
    cases: u64,
    order: Vec<String>,
    failures: BTreeMap<String, (String, u64)>,
}

impl Tally {
    fn new(suite: &'static str, models: &'static [&'static str]) -> Tally {
        Tally {
            suite,
            models,
            cases: 0,
            order: Vec::new(),
            failures: BTreeMap::new(),
        }
    }

    fn case(&mut self, law: &str, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if ok {
            return;
        }
        match self.failures.get_mut(law) {
            Some(entry) => entry.1 += 1,
            None => {
                self.order.push(law.to_string());
                self.failures.insert(law.to_string(), (witness(), 1));
            }
        }
    }

    fn finish(mut self) -> OracleReport {
        let counterexamples = self
            .order
            .iter()
            .map(|law| {
                let (witness, occurrences) = self.failures.remove(law).expect("recorded law");
                Counterexample {
                    law: law.clone(),
                    witness,
                    occurrences,
                }
            })
            .collect();
        OracleReport {
            suite: self.suite,
            models: self.models,
            cases: self.cases,
            counterexamples,
        }
    }
}

fn factorial(n: usize) -> usize {
    let mut acc = 1;
    for k in 2..=n {
        acc *= k;
    }
    acc
}

fn auts(n: usize, bound: usize) -> Vec<FinBij> {
    automorphisms(n, bound).expect("sizes are kept within the bound")
}

/// Enumeration is complete, duplicate-free and ordered, and the
/// two-element type has exactly the two automorphisms identity and swap.
pub fn check_bijections(bound: usize) -> OracleReport {
    check_bijections_with(bound, &FinBij::swap())
}

/// As [`check_bijections`], with the model of `swap` supplied.
pub fn check_bijections_with(bound: usize, swap: &FinBij) -> OracleReport {
    let mut t = Tally::new("bijections", &["swap", "iseq_swap", "iseq_id"]);
    for a in 0..=bound {
        for b in 0..=bound {
            let bijs = enumerate_bijections(&FinSet::of_size(a), &FinSet::of_size(b), bound)
                .expect("sizes are kept within the bound");
            let expected = if a == b { factorial(a) } else { 0 };
            t.case("count", bijs.len() == expected, || {
                format!("|Bij({a}, {b})| = {}, expected {expected}", bijs.len())
            });
            t.case("strictly increasing", bijs.windows(2).all(|w| w[0] < w[1]), || {
                format!("Bij({a}, {b}) is not in strict lexicographic order")
            });
            t.case("valid tables", bijs.iter().all(|f| FinBij::new(f.mapping.clone()).is_some()), || {
                format!("Bij({a}, {b}) contains a non-bijective table")
            });
        }
    }
    let two = FinSet::two();
    let two_auts = enumerate_bijections(&two, &two, bound.max(2)).expect("two is within every bound");
    t.case("two automorphisms of Two", two_auts.len() == 2, || {
        format!("|Bij(Two, Two)| = {}", two_auts.len())
    });
    t.case("swap is an automorphism of Two", two_auts.contains(swap), || format!("swap = {swap}"));
    t.case("swap differs from the identity", !swap.is_identity(), || format!("swap = {swap}"));
    if bound >= 3 {
        let three = auts(3, bound);
        t.case("six automorphisms of 3", three.len() == 6, || format!("|Bij(3, 3)| = {}", three.len()));
    }
    t.finish()
}

/// All functions `n -> n` as tables, by counting in base `n`. Independent
/// of the permutation enumeration it is compared against.
fn all_functions(n: usize) -> Vec<Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut table = vec![0; n];
            for slot in table.iter_mut().rev() {
                *slot = code % n;
                code /= n;
            }
            table
        })
        .collect()
}

fn is_bijective(table: &[usize]) -> bool {
    let mut seen = vec![false; table.len()];
    table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

/// Paths between finite sets are, by construction, their bijections; the
/// map to equivalences is the identity on tables, hits every bijective
/// function, and carries composition and inverses to those of functions.
pub fn check_univalence_shadow(bound: usize) -> OracleReport {
    let mut t = Tally::new("univalence-shadow", &["idtoeqv_0", "ua_0"]);
    for n in 0..=bound {
        let paths = auts(n, bound);
        let mut equivalences: Vec<Vec<usize>> = all_functions(n).into_iter().filter(|f| is_bijective(f)).collect();
        equivalences.sort();
        let images: Vec<Vec<usize>> = paths.iter().map(|p| p.mapping.clone()).collect();
        t.case("idtoeqv is a bijection onto equivalences", images == equivalences, || {
            format!("size {n}: {} paths, {} equivalences", images.len(), equivalences.len())
        });
        for p in &paths {
            let inv = p.inverse();
            let round = (0..n).all(|x| inv.apply(p.apply(x)) == x && p.apply(inv.apply(x)) == x);
            t.case("inverse path is inverse function", round, || format!("p = {p}"));
            for q in &paths {
                let composite = p.then(q);
                let pointwise = (0..n).all(|x| composite.apply(x) == q.apply(p.apply(x)));
                t.case("composite path is composite function", pointwise, || format!("p = {p}, q = {q}"));
            }
        }
    }
    t.finish()
}

/// Identity, inverse and associativity laws of path composition for all
/// automorphisms of sets up to the bound.
pub fn check_groupoid_laws(bound: usize) -> OracleReport {
    check_groupoid_laws_with(bound, &|p, q| p.then(q))
}

/// As [`check_groupoid_laws`], with the composition under test supplied.
pub fn check_groupoid_laws_with(bound: usize, compose: &dyn Fn(&FinBij, &FinBij) -> FinBij) -> OracleReport {
    let mut t = Tally::new("groupoid-laws", &["concat", "inv", "runit", "linv", "rinv"]);
    for n in 0..=bound {
        let ps = auts(n, bound);
        let id = FinBij::identity(n);
        for p in &ps {
            t.case("left identity", compose(&id, p) == *p, || format!("p = {p}"));
            t.case("right identity", compose(p, &id) == *p, || format!("p = {p}"));
            let inv = p.inverse();
            t.case("left inverse", compose(&inv, p) == id, || format!("p = {p}"));
            t.case("right inverse", compose(p, &inv) == id, || format!("p = {p}"));
        }
        for p in &ps {
            for q in &ps {
                let pq = compose(p, q);
                for r in &ps {
                    let lhs = compose(&pq, r);
                    let rhs = compose(p, &compose(q, r));
                    t.case("associativity", lhs == rhs, || format!("p = {p}, q = {q}, r = {r}"));
                }
            }
        }
    }
    t.finish()
}

/// Transport of a loop `p` along `q` in the family `x => Id x x` is the
/// unique loop `p'` with `p . q = q . p'`, found by search; it must equal
/// the conjugate `q^-1 . p . q`, and fix `p` when `q` is refl or `p`.
pub fn check_transport_conjugation(bound: usize) -> OracleReport {
    let mut t = Tally::new("transport-conjugation", &["transport_conj", "trans_comm_eq", "transport_conj_two"]);
    for n in 0..=bound {
        let ps = auts(n, bound);
        for p in &ps {
            for q in &ps {
                let target = p.then(q);
                let solutions: Vec<&FinBij> = ps.iter().filter(|p2| q.then(p2) == target).collect();
                t.case("transport is unique", solutions.len() == 1, || {
                    format!("p = {p}, q = {q}: {} solutions", solutions.len())
                });
                let conj = q.inverse().then(p).then(q);
                t.case("transport is conjugation", solutions.first() == Some(&&conj), || {
                    format!("p = {p}, q = {q}")
                });
            }
            let id = FinBij::identity(n);
            t.case("transport along refl fixes p", id.inverse().then(p).then(&id) == *p, || format!("p = {p}"));
            t.case("transport along p fixes p", p.inverse().then(p).then(p) == *p, || format!("p = {p}"));
        }
    }
    t.finish()
}

/// First component of a K witness at a loop `p`.
pub type KWitness = fn(&FinBij) -> FinBij;

pub fn alpha_first(p: &FinBij) -> FinBij {
    FinBij::identity(p.size())
}

pub fn beta_first(p: &FinBij) -> FinBij {
    p.clone()
}

/// The two inhabitants of K at `(Two, swap)` have first components identity
/// and swap, both commute with the loop, and they differ. The commutation
/// is also checked at every loop up to the bound.
pub fn check_k_witnesses(bound: usize) -> OracleReport {
    check_k_witnesses_with(bound, alpha_first, beta_first)
}

/// As [`check_k_witnesses`], with the witnesses under test supplied.
pub fn check_k_witnesses_with(bound: usize, alpha: KWitness, beta: KWitness) -> OracleReport {
    let mut t = Tally::new("k-witnesses", &["K", "alpha", "beta", "u"]);
    let swap = FinBij::swap();
    let a = alpha(&swap);
    let b = beta(&swap);
    t.case("alpha at (Two, swap) is the identity", a.is_identity() && a.size() == 2, || format!("alpha = {a}"));
    t.case("beta at (Two, swap) is swap", b == swap, || format!("beta = {b}"));
    t.case("alpha and beta differ at (Two, swap)", a != b, || format!("both are {a}"));
    for n in 0..=bound {
        for p in auts(n, bound) {
            for (name, w) in [("alpha", alpha(&p)), ("beta", beta(&p))] {
                let commutes = p.then(&w) == w.then(&p);
                t.case(&format!("{name} commutes with the loop"), commutes, || format!("p = {p}, q = {w}"));
            }
        }
    }
    t.finish()
}

/// A pointed base in the model: either a finite set, whose only loop is
/// the identity, or the groupoid of sets of one size, whose loops are
/// automorphisms.
#[derive(Clone, Copy, Debug)]
enum Base {
    Set { size: usize },
    Universe { size: usize },
}

/// A pointed family over a base: constant, or the tautological family
/// sending a set to itself (only over a universe).
#[derive(Clone, Copy, Debug)]
enum Family {
    Constant { size: usize, point: usize },
    Tautological { point: usize },
}

impl Base {
    fn loops(self, bound: usize) -> Vec<FinBij> {
        match self {
            Base::Set { .. } => vec![FinBij::identity(0)],
            Base::Universe { size } => auts(size, bound),
        }
    }

    fn describe(self) -> String {
        match self {
            Base::Set { size } => format!("set of size {size}"),
            Base::Universe { size } => format!("sets of size {size}"),
        }
    }
}

impl Family {
    fn fiber_size(self, base: Base) -> usize {
        match (self, base) {
            (Family::Constant { size, .. }, _) => size,
            (Family::Tautological { .. }, Base::Universe { size }) => size,
            (Family::Tautological { .. }, Base::Set { .. }) => unreachable!("tautological family over a set"),
        }
    }

    fn point(self) -> usize {
        match self {
            Family::Constant { point, .. } | Family::Tautological { point } => point,
        }
    }

    /// Action of a loop in the base on the fiber over the basepoint.
    fn act(self, l: &FinBij, x: usize) -> usize {
        match self {
            Family::Constant { .. } => x,
            Family::Tautological { .. } => l.apply(x),
        }
    }

    fn describe(self) -> String {
        match self {
            Family::Constant { size, point } => format!("constant {size} at {point}"),
            Family::Tautological { point } => format!("tautological at {point}"),
        }
    }
}

/// Loops of a pointed sum against pairs of a base loop and a loop over it.
/// The left side enumerates endomorphisms of the basepoint in the total
/// groupoid; the right side enumerates base loops and then the fiber of
/// the fibred loop type. Both are counted and matched by the map that
/// forgets the endpoint.
pub fn check_sigma_loops(bound: usize) -> OracleReport {
    let mut t = Tally::new("sigma-loops", &["om_si_comm", "OmT", "SigP"]);
    let mut instances = vec![
        (Base::Set { size: 2 }, Family::Constant { size: 1, point: 0 }),
        (Base::Set { size: 2 }, Family::Constant { size: 2, point: 0 }),
        (Base::Set { size: 3 }, Family::Constant { size: 2, point: 0 }),
    ];
    for n in 1..=bound {
        instances.push((Base::Universe { size: n }, Family::Constant { size: 2, point: 0 }));
        instances.push((Base::Universe { size: n }, Family::Tautological { point: 0 }));
    }
    for (base, fam) in instances {
        let b0 = fam.point();
        let fiber = fam.fiber_size(base);
        // Morphisms (l, x -> x') of the total groupoid from (a0, b0) to
        // itself: x' must be b0 and l must carry b0 to x'.
        let lhs: Vec<(FinBij, usize)> = base
            .loops(bound)
            .into_iter()
            .flat_map(|l| (0..fiber).map(move |x2| (l.clone(), x2)))
            .filter(|(l, x2)| *x2 == b0 && fam.act(l, b0) == *x2)
            .collect();
        // Pairs of a base loop and an inhabitant of the fibred loop type at
        // it, which is a proposition because fibers are sets.
        let rhs: Vec<(FinBij, ())> = base
            .loops(bound)
            .into_iter()
            .filter_map(|l| (fam.act(&l, b0) == b0).then_some((l, ())))
            .collect();
        let what = || format!("{} with {}", base.describe(), fam.describe());
        t.case("equal cardinality", lhs.len() == rhs.len(), || {
            format!("{}: {} against {}", what(), lhs.len(), rhs.len())
        });
        let image: Vec<(FinBij, ())> = lhs.iter().map(|(l, _)| (l.clone(), ())).collect();
        let mut sorted = image.clone();
        sorted.sort();
        sorted.dedup();
        let bijective = sorted.len() == image.len() && rhs.iter().all(|r| image.contains(r)) && image.iter().all(|i| rhs.contains(i));
        t.case("forgetting the endpoint is a bijection", bijective, what);
    }
    t.finish()
}

/// Suite names, sorted; reports come out in this order.
pub const SUITES: &[&str] = &[
    "bijections",
    "groupoid-laws",
    "k-witnesses",
    "sigma-loops",
    "transport-conjugation",
    "univalence-shadow",
];

pub fn run_suite(name: &str, bound: usize) -> Result<OracleReport, OracleError> {
    if bound > MAX_BOUND {
        return Err(OracleError::BoundExceeded { bound, max: MAX_BOUND });
    }
    Ok(match name {
        "bijections" => check_bijections(bound),
        "univalence-shadow" => check_univalence_shadow(bound),
        "groupoid-laws" => check_groupoid_laws(bound),
        "transport-conjugation" => check_transport_conjugation(bound),
        "k-witnesses" => check_k_witnesses(bound),
        "sigma-loops" => check_sigma_loops(bound),
        other => return Err(OracleError::UnknownSuite(other.to_string())),
    })
}

/// Runs the named suites, or all of them when `names` is empty, in the
/// fixed order of [`SUITES`]. Names are validated before anything runs.
pub fn run(names: &[String], bound: usize) -> Result<Vec<OracleReport>, OracleError> {
    if bound > MAX_BOUND {
        return Err(OracleError::BoundExceeded { bound, max: MAX_BOUND });
    }
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
        return Err(OracleError::UnknownSuite(bad.clone()));
    }
    SUITES
        .iter()
        .filter(|s| names.is_empty() || names.iter().any(|n| n == *s))
        .map(|s| run_suite(s, bound))
        .collect()
}

/// All suite results as one report in the shared schema.
pub fn to_report(reports: &[OracleReport]) -> Report {
    Report::new("oracle", reports.iter().map(OracleReport::to_entry).collect())
}
