//! The concrete file list. Templates are compiled in; level files are
//! assembled from several template pieces.

use crate::template::instantiate;
use crate::{CorpusFile, Section, Tag};

const PATHS: &str = include_str!("../templates/prelude/paths.hott");
const EQUIV: &str = include_str!("../templates/prelude/equiv.hott");
const AXIOMS: &str = include_str!("../templates/prelude/axioms.hott");
const TRUNC: &str = include_str!("../templates/prelude/trunc.hott");
const POINTED: &str = include_str!("../templates/generic/pointed.hott");
const UNIVERSE: &str = include_str!("../templates/generic/universe.hott");

const AUTOMORPHISMS: &str = include_str!("../templates/level/automorphisms.hott");
const CHAIN: &str = include_str!("../templates/level/chain.hott");
const LOOPS: &str = include_str!("../templates/level/loops.hott");
const NONTRIVIAL_BASE: &str = include_str!("../templates/level/nontrivial-base.hott");
const NONTRIVIAL_STEP: &str = include_str!("../templates/level/nontrivial-step.hott");
const TAIL: &str = include_str!("../templates/level/tail.hott");
const D_BASE: &str = include_str!("../templates/level/d-base.hott");
const D_STEP: &str = include_str!("../templates/level/d-step.hott");
const XI: &str = include_str!("../templates/level/xi.hott");
const COMMUTING_LOOPS: &str = include_str!("../templates/level/commuting-loops.hott");
const NOT_TRUNCATED: &str = include_str!("../templates/level/not-truncated.hott");
const EXACT_TRUNCATION: &str = include_str!("../templates/level/exact-truncation.hott");

use Tag::{RequiresEtaSigma as ETA, RequiresFunext as FE, RequiresUa as UA};

// Tags record which checker features a file cannot do without; the corpus
// tests confirm them in both directions.
const ALL: &[Tag] = &[UA, FE, ETA];

fn file(path: String, section: Section, level: Option<u32>, tags: &[Tag], paper_ref: &str, contents: String) -> CorpusFile {
    CorpusFile {
        path,
        section,
        level,
        tags: tags.to_vec(),
        paper_ref: paper_ref.to_string(),
        contents,
    }
}

pub fn prelude() -> Vec<CorpusFile> {
    let p = |name: &str, tags: &[Tag], what: &str, src: &str| {
        file(format!("prelude/{name}.hott"), Section::Prelude, None, tags, what, src.to_string())
    };
    vec![
        p("paths", &[ETA], "path inverse, composition, transport and paths in pair types", PATHS),
        p("equiv", &[ETA], "equivalences, retracts, identity and swap equivalences", EQUIV),
        p("axioms", ALL, "idtoeqv, univalence per universe, function extensionality", AXIOMS),
        p("trunc", &[FE, ETA], "truncation levels and their closure properties", TRUNC),
    ]
}

pub fn generic(n_max: u32) -> Vec<CorpusFile> {
    let mut out = vec![file(
        "generic/pointed.hott".into(),
        Section::Generic,
        None,
        ALL,
        "pointed types, pointed families, loops of pointed sums and products, forgetting truncated components",
        POINTED.to_string(),
    )];
    for j in 0..=n_max + 1 {
        let vars = [("j", j.to_string()), ("j1", (j + 1).to_string())];
        out.push(file(
            format!("generic/universe-{j}.hott"),
            Section::Generic,
            None,
            ALL,
            "loops of a universe at a point as a family of loops, truncation of the universe of truncated types",
            instantiate(UNIVERSE, &vars),
        ));
    }
    out
}

fn level_vars(n: u32) -> Vec<(&'static str, String)> {
    let m = if n == 0 { "neg1".to_string() } else { (n - 1).to_string() };
    vec![
        ("n", n.to_string()),
        ("n1", (n + 1).to_string()),
        ("n2", (n + 2).to_string()),
        ("n3", (n + 3).to_string()),
        ("m", m),
        // Level 1 proves the universe statement through K; the general
        // argument is kept alongside under another name.
        ("suffix", if n == 1 { "_general".into() } else { String::new() }),
    ]
}

/// Joins template pieces under a `generality` header.
fn assemble(header: &str, pieces: &[&str], vars: &[(&str, String)]) -> String {
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("-- ");
        out.push_str(line);
        out.push('\n');
    }
    for p in pieces {
        out.push('\n');
        out.push_str(&instantiate(p, vars));
    }
    out
}

pub fn level(n: u32) -> Vec<CorpusFile> {
    let vars = level_vars(n);
    let dir = format!("generated/level-{n}");
    let lf = |name: &str, tags: &[Tag], what: &str, contents: String| {
        file(format!("{dir}/{name}.hott"), Section::Level, Some(n), tags, what, contents)
    };
    let mut out = Vec::new();

    if n == 0 {
        out.push(lf(
            "automorphisms",
            &[UA, ETA],
            "the two-element type is a set with two distinct automorphisms",
            assemble(
                "generality: facts about the two-element type and its self-equivalences\nin U0; nothing is quantified over levels.",
                &[AUTOMORPHISMS],
                &vars,
            ),
        ));
    }

    out.push(lf(
        "loops",
        ALL,
        "truncated subuniverse, the loop family P and the type Loop with its truncation bound",
        assemble(
            &format!("generality: level {n}, about the universe U{n} and loops of dimension {}.", n + 1),
            &[LOOPS],
            &vars,
        ),
    ));

    let (nontrivial, d) = if n == 0 { (NONTRIVIAL_BASE, D_BASE) } else { (NONTRIVIAL_STEP, D_STEP) };
    out.push(lf(
        "nontrivial",
        ALL,
        "a non-trivial loop in the universe and in the truncated subuniverse, the witness d and the map xi",
        assemble(
            &if n == 0 {
                "generality: level 0; the non-trivial loop is the swap path of the two-element\ntype, and d is built from path algebra.".to_string()
            } else {
                format!(
                    "generality: level {n}; the non-trivial loop is built from the one at level\n{} through xi, and d comes from the loop family being a family of sets.",
                    n - 1
                )
            },
            &[nontrivial, TAIL, d, XI],
            &vars,
        ),
    ));

    if n == 1 {
        out.push(lf(
            "commuting-loops",
            ALL,
            "U1 is not a 1-type, through the type K of commuting loops",
            assemble(
                "generality: the direct argument about U1 through the type K. Helper lemmas\nquantify over U1 or U4; everything else is concrete.",
                &[COMMUTING_LOOPS],
                &vars,
            ),
        ));
    }

    let mut pieces = Vec::new();
    if n == 0 {
        pieces.push(CHAIN);
    } else {
        pieces.push(NOT_TRUNCATED);
    }
    pieces.push(EXACT_TRUNCATION);
    out.push(lf(
        "truncation",
        ALL,
        "the universe is not truncated at its own level; Loop and the truncated subuniverse have exact truncation level",
        assemble(&format!("generality: level {n}; every statement is about fixed universes."), &pieces, &vars),
    ));
    out
}

