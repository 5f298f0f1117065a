//! The checked proof corpus.
//!
//! Three layers, checked in this order against one shared scope:
//!
//! * `prelude/`: path algebra, equivalences, the univalence and function
//!   extensionality axioms, truncation levels.
//! * `generic/`: pointed types and their loop spaces, plus one file per
//!   universe `U{j}` with the lemmas that must mention that universe.
//! * `generated/level-{n}/`: the argument at concrete level `n`. Level `n`
//!   consumes the non-trivial loop built at level `n - 1`, which is how the
//!   induction on `n` is carried out outside the theory.
//!
//! Truncation levels are counted from 0 inside the theory: `isTrunc 0` is
//! contractibility, `isTrunc 1` is being a proposition, and an `n`-type in
//! the usual sense is `isTrunc (n + 2)`.

mod files;
pub mod manifest;
pub mod mutation;
mod template;

use std::fmt;
use std::path::{Path, PathBuf};

use hlevel_core::check::{AxiomPolicy, Options};
use hlevel_core::driver::Session;
use hlevel_core::report::{DiagnosticJson, Report};
use serde::{Deserialize, Serialize};

pub use manifest::Manifest;

/// Highest level the generator supports. The loop-space machinery lives in
/// U4 and the level files need the universe one above `n + 1` to be at most
/// U3, which caps `n` at 2.
pub const MAX_LEVEL: u32 = 2;

/// Level generated and checked when none is given.
pub const DEFAULT_LEVEL: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    RequiresUa,
    RequiresFunext,
    RequiresEtaSigma,
}

impl Tag {
    pub const ALL: [Tag; 3] = [Tag::RequiresUa, Tag::RequiresFunext, Tag::RequiresEtaSigma];

    pub fn name(self) -> &'static str {
        match self {
            Tag::RequiresUa => "requires-ua",
            Tag::RequiresFunext => "requires-funext",
            Tag::RequiresEtaSigma => "requires-eta-sigma",
        }
    }

    /// Checker settings with the feature behind this tag switched off.
    pub fn disable(self, opts: &mut Options, omitted: &mut Vec<String>) {
        match self {
            Tag::RequiresUa => omitted.push("ua_*".into()),
            Tag::RequiresFunext => omitted.push("funext".into()),
            Tag::RequiresEtaSigma => opts.eta_sigma = false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Prelude,
    Generic,
    Level,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusFile {
    /// Path relative to the corpus root, with `/` separators.
    pub path: String,
    pub section: Section,
    pub level: Option<u32>,
    pub tags: Vec<Tag>,
    /// Short description of what the file establishes.
    pub paper_ref: String,
    pub contents: String,
}

impl CorpusFile {
    /// Names declared by the file, in order.
    pub fn declared_names(&self) -> Vec<&str> {
        self.contents
            .lines()
            .filter_map(|l| {
                let rest = l
                    .strip_prefix("def ")
                    .or_else(|| l.strip_prefix("axiom "))
                    .or_else(|| l.strip_prefix("goal "))?;
                rest.split(|c: char| c.is_whitespace() || c == ':').next()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    UnsupportedLevel { level: u32, max: u32 },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::UnsupportedLevel { level, max } => {
                write!(f, "level {level} is not supported (the highest supported level is {max})")
            }
        }
    }
}

impl std::error::Error for GenError {}

fn supported(level: u32) -> Result<(), GenError> {
    if level > MAX_LEVEL {
        Err(GenError::UnsupportedLevel { level, max: MAX_LEVEL })
    } else {
        Ok(())
    }
}

/// The prelude files, in dependency order.
pub fn emit_prelude() -> Vec<CorpusFile> {
    files::prelude()
}

/// The generic files needed by levels `0..=n_max`.
pub fn emit_generic(n_max: u32) -> Result<Vec<CorpusFile>, GenError> {
    supported(n_max)?;
    Ok(files::generic(n_max))
}

/// The files for one level. Their declarations refer to level `n - 1`, so
/// they only check after all lower levels.
pub fn generate_level(n: u32) -> Result<Vec<CorpusFile>, GenError> {
    supported(n)?;
    Ok(files::level(n))
}

/// Every file for levels `0..=n_max`, in checking order.
pub fn corpus(n_max: u32) -> Result<Vec<CorpusFile>, GenError> {
    let mut all = emit_prelude();
    all.extend(emit_generic(n_max)?);
    for n in 0..=n_max {
        all.extend(generate_level(n)?);
    }
    Ok(all)
}

#[derive(Debug)]
pub enum WriteError {
    Gen(GenError),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for WriteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WriteError::Gen(e) => e.fmt(f),
            WriteError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl std::error::Error for WriteError {}

/// Writes the corpus for levels `0..=n_max` and its `manifest.json` under
/// `dir`. Output depends only on `n_max`, so rerunning is a no-op.
pub fn write_corpus(dir: &Path, n_max: u32) -> Result<Vec<PathBuf>, WriteError> {
    let files = corpus(n_max).map_err(WriteError::Gen)?;
    let manifest = Manifest::build(n_max, &files);
    let mut written = Vec::new();
    let mut put = |rel: &str, contents: &str| -> Result<(), WriteError> {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| WriteError::Io(parent.to_path_buf(), e))?;
        }
        std::fs::write(&path, contents).map_err(|e| WriteError::Io(path.clone(), e))?;
        written.push(path);
        Ok(())
    };
    for f in &files {
        put(&f.path, &f.contents)?;
    }
    put(manifest::FILE_NAME, &manifest.to_json())?;
    Ok(written)
}

/// Checks the files in order against one scope, one report per file.
pub fn check_files(files: &[CorpusFile], opts: Options, policy: AxiomPolicy) -> Vec<Report> {
    let mut session = Session::new(opts, policy);
    files
        .iter()
        .map(|f| match session.check_source(&f.path, &f.contents) {
            Ok(result) => Report::from_file(&result, &f.contents),
            Err(diags) => Report::failure(&f.path, DiagnosticJson::new(&diags[0], Some(&f.contents))),
        })
        .collect()
}

/// Generates and checks the corpus for levels `0..=n_max` with default
/// checker settings.
pub fn check_corpus(n_max: u32) -> Result<Vec<Report>, GenError> {
    Ok(check_files(&corpus(n_max)?, Options::default(), AxiomPolicy::default()))
}
