//! `manifest.json`: files in checking order plus the symbol table that maps
//! each mathematical symbol to the declaration realizing it.

use serde::{Deserialize, Serialize};

use crate::{CorpusFile, Section, Tag};

pub const FILE_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub max_level: u32,
    pub files: Vec<FileEntry>,
    pub symbols: Vec<SymbolEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub section: Section,
    pub level: Option<u32>,
    pub tags: Vec<Tag>,
    pub paper_ref: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolEntry {
    pub symbol: String,
    /// Universe or level the entry is specific to, if any.
    pub at: Option<String>,
    pub declaration: String,
    pub file: String,
}

/// Symbols that must each have at least one entry.
pub const REQUIRED_SYMBOLS: &[&str] = &[
    "Ω", "Ω̃", "Σ•", "Π•", "𝒰•", "𝒰≤n", "is-trunc", "idtoeqv", "ua", "happly", "funext", "IsEquiv",
    "iseq^id", "iseq^swap", "swap", "transport", "path composition", "path inverse", "L", "K", "α",
    "β", "u", "P_n", "Loop_n", "h_n", "ξ", "d_q", "q̃",
];

/// Symbols that are the same declaration at every level.
const FIXED: &[(&str, &str)] = &[
    ("Ω", "Om"),
    ("Ωⁿ", "OmN"),
    ("Ω̃", "OmT"),
    ("Σ•", "SigP"),
    ("Π•", "PiP"),
    ("𝒰•", "Ptd"),
    ("pointed family", "PFam"),
    ("is-trunc", "isTrunc"),
    ("happly", "happly"),
    ("funext", "funext"),
    ("IsEquiv", "IsEquiv"),
    ("iseq^id", "iseq_id"),
    ("iseq^swap", "iseq_swap"),
    ("swap", "swap"),
    ("transport", "transport"),
    ("path composition", "concat"),
    ("path inverse", "inv"),
    ("transport as conjugation", "transport_conj"),
    ("paths in pair types", "sigma_path_eqv"),
    ("contractible components", "contr_fibers_proj"),
    ("om-si-comm", "om_si_comm"),
    ("om-pi-comm", "om_pi_comm"),
    ("forget", "forget"),
    ("Loop_n", "Loop_neg1"),
    ("h_n", "h_0"),
];

/// Symbols specific to the argument about U1 through K.
const LEVEL_ONE: &[(&str, &str)] = &[
    ("L", "L"),
    ("K", "K"),
    ("α", "alpha"),
    ("β", "beta"),
    ("u", "u"),
    ("transport as composition", "trans_comm_eq"),
];

/// Symbols with one declaration per level `n`; `{n}` and `{n1}` are filled in.
const PER_LEVEL: &[(&str, &str)] = &[
    ("𝒰≤n", "Ule_{n}"),
    ("P_n", "P_{n}"),
    ("Loop_n", "Loop_{n}"),
    ("h_n", "h_{n1}"),
    ("P_n is a family of sets", "pn_sets_{n}"),
    ("non-trivial-exists", "nontrivial_exists_{n}"),
    ("q̃", "qtilde_{n}"),
    ("d_q", "d_{n}"),
    ("ξ", "xi_{n}"),
    ("𝒰_n is not n-truncated", "universe_not_trunc_{n}"),
    ("𝒰≤n is exactly (n+1)-truncated", "ule_exact_trunc_{n}"),
    ("Loop_n is exactly (n+1)-truncated", "loop_exact_trunc_{n}"),
];

/// Symbols with one declaration per universe `U{j}`.
const PER_UNIVERSE: &[(&str, &str)] = &[
    ("idtoeqv", "idtoeqv_{j}"),
    ("ua", "ua_{j}"),
];

const PER_GENERIC_UNIVERSE: &[(&str, &str)] = &[
    ("local-global looping", "local_global_{j}"),
    ("𝒰≤n is (n+1)-truncated", "ule_trunc_{j}"),
];

fn locate(files: &[CorpusFile], decl: &str) -> Option<String> {
    files
        .iter()
        .find(|f| f.declared_names().contains(&decl))
        .map(|f| f.path.clone())
}

/// Index named `at` for symbols specific to one level. The index of `h_n`
/// and `Loop_n` follows the declaration, not the level file it sits in.
fn level_index(symbol: &str, decl: &str) -> String {
    match symbol {
        "h_n" | "Loop_n" | "𝒰≤n" | "P_n" => decl.rsplit('_').next().unwrap_or_default().replace("neg1", "-1"),
        _ => decl.rsplit('_').next().unwrap_or_default().to_string(),
    }
}

impl Manifest {
    pub fn build(max_level: u32, files: &[CorpusFile]) -> Manifest {
        let mut symbols = Vec::new();
        let mut push = |symbol: &str, at: Option<String>, decl: String| {
            if let Some(file) = locate(files, &decl) {
                symbols.push(SymbolEntry {
                    symbol: symbol.to_string(),
                    at,
                    declaration: decl,
                    file,
                });
            }
        };
        for (s, d) in FIXED {
            let at = matches!(*s, "Loop_n" | "h_n").then(|| level_index(s, d));
            push(s, at, d.to_string());
        }
        for j in 0..=4 {
            for (s, d) in PER_UNIVERSE {
                push(s, Some(format!("U{j}")), d.replace("{j}", &j.to_string()));
            }
        }
        for j in 0..=max_level + 1 {
            for (s, d) in PER_GENERIC_UNIVERSE {
                push(s, Some(format!("U{j}")), d.replace("{j}", &j.to_string()));
            }
        }
        if max_level >= 1 {
            for (s, d) in LEVEL_ONE {
                push(s, None, d.to_string());
            }
        }
        for n in 0..=max_level {
            for (s, d) in PER_LEVEL {
                let decl = d.replace("{n1}", &(n + 1).to_string()).replace("{n}", &n.to_string());
                let at = Some(level_index(s, &decl));
                push(s, at, decl);
            }
        }
        Manifest {
            max_level,
            files: files
                .iter()
                .map(|f| FileEntry {
                    path: f.path.clone(),
                    section: f.section,
                    level: f.level,
                    tags: f.tags.clone(),
                    paper_ref: f.paper_ref.clone(),
                })
                .collect(),
            symbols,
        }
    }

    /// Required symbols with no entry.
    pub fn unmapped(&self) -> Vec<&'static str> {
        REQUIRED_SYMBOLS
            .iter()
            .copied()
            .filter(|s| !self.symbols.iter().any(|e| e.symbol == *s))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest always serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Manifest> {
        serde_json::from_str(s)
    }
}
