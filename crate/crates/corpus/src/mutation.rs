//! Edits that must turn an accepted corpus into a rejected one. A checker
//! that still accepts after any of these is unsound somewhere.

use hlevel_core::check::{AxiomPolicy, Options};

use crate::{CorpusFile, Tag};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// `swap` becomes the identity on the two-element type.
    SwapIsIdentity,
    /// The univalence axioms are dropped from the registry.
    OmitUa,
    /// Function extensionality is dropped from the registry.
    OmitFunext,
    /// The first component of `beta` becomes `refl X` instead of `p`.
    BetaFirstRefl,
}

const SWAP_BODY: &str = "def swap (b : Two) : Two := twoelim [_. Two] 1_2 0_2 b";
const SWAP_IDENTITY: &str = "def swap (b : Two) : Two := b";
const BETA_BODY: &str = "def beta : K := fun X p => (p, refl (concat U0 X X X p p))";
const BETA_REFL: &str = "def beta : K := fun X p => (refl X, refl (concat U0 X X X p p))";

impl Mutation {
    pub const ALL: [Mutation; 4] = [
        Mutation::SwapIsIdentity,
        Mutation::OmitUa,
        Mutation::OmitFunext,
        Mutation::BetaFirstRefl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::SwapIsIdentity => "swap-identity",
            Mutation::OmitUa => "omit-ua",
            Mutation::OmitFunext => "omit-funext",
            Mutation::BetaFirstRefl => "beta-refl",
        }
    }

    /// Lowest level whose corpus contains the mutated declaration.
    pub fn min_level(self) -> u32 {
        match self {
            Mutation::BetaFirstRefl => 1,
            _ => 0,
        }
    }

    /// The tag whose files must all be rejected under this mutation.
    pub fn tag(self) -> Option<Tag> {
        match self {
            Mutation::OmitUa => Some(Tag::RequiresUa),
            Mutation::OmitFunext => Some(Tag::RequiresFunext),
            _ => None,
        }
    }

    /// Declarations that must be rejected under this mutation.
    pub fn targets(self) -> &'static [&'static str] {
        match self {
            Mutation::SwapIsIdentity => &["universe_not_trunc_0"],
            Mutation::OmitUa => &["ua_0", "universe_not_trunc_0"],
            Mutation::OmitFunext => &["funext"],
            Mutation::BetaFirstRefl => &["beta", "universe_not_trunc_1"],
        }
    }

    /// Applies the textual part of the mutation. Returns false if the text
    /// to replace was not found.
    pub fn apply(self, files: &mut [CorpusFile]) -> bool {
        let (from, to) = match self {
            Mutation::SwapIsIdentity => (SWAP_BODY, SWAP_IDENTITY),
            Mutation::BetaFirstRefl => (BETA_BODY, BETA_REFL),
            Mutation::OmitUa | Mutation::OmitFunext => return true,
        };
        let mut hit = false;
        for f in files.iter_mut() {
            if f.contents.contains(from) {
                f.contents = f.contents.replace(from, to);
                hit = true;
            }
        }
        hit
    }

    /// Checker settings for the mutated run.
    pub fn settings(self) -> (Options, AxiomPolicy) {
        let mut opts = Options::default();
        let mut omitted = Vec::new();
        if let Some(tag) = self.tag() {
            tag.disable(&mut opts, &mut omitted);
        }
        (opts, AxiomPolicy::omitting(omitted))
    }
}
