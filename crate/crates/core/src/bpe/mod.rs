//! BPE over grapheme symbols: merge-table training under Bengali-specific
//! constraints, encoding, and decoding.
//!
//! Symbols are concatenations of one or more grapheme clusters; the initial
//! alphabet is the set of clusters observed in the corpus. Merges are learned
//! within words only, and in `bengali` mode a word-final symbol from the
//! suffix lexicon is never fused onto a non-suffix root, which keeps
//! inflectional endings as standalone tokens.

mod encode;
mod train;

pub use encode::{decode, encode, AppliedMerge, Encoder, Token, TokenSequence};
pub use train::train;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::grapheme::{classify_codepoint, starts_with_combining_mark, CodepointClass};
use crate::normalizer::{hex_digest, NormalizedText};

pub const UNK_SURFACE: &str = "<unk>";
pub const PAD_SURFACE: &str = "<pad>";
pub const UNK_ID: u32 = 0;
pub const PAD_ID: u32 = 1;
/// Reserved vocabulary entries (UNK, PAD).
pub const NUM_SPECIALS: usize = 2;

/// Default word-final suffix lexicon, one surface per line.
pub const DEFAULT_SUFFIXES: &str = include_str!("../../data/suffixes.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRule {
    pub left: String,
    pub right: String,
    /// 0-based learning order; lower rank applies first during encoding.
    pub rank: u32,
    pub frequency_at_merge: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintMode {
    Bengali,
    Generic,
}

impl std::fmt::Display for ConstraintMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstraintMode::Bengali => write!(f, "bengali"),
            ConstraintMode::Generic => write!(f, "generic"),
        }
    }
}

impl std::str::FromStr for ConstraintMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bengali" => Ok(ConstraintMode::Bengali),
            "generic" => Ok(ConstraintMode::Generic),
            other => Err(format!("unknown mode '{other}', expected bengali|generic")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintProfile {
    pub mode: ConstraintMode,
    /// Word-final morpheme surfaces whose fusion onto roots is blocked.
    /// Ignored in generic mode.
    pub suffix_lexicon: BTreeSet<String>,
    /// Merges never span whitespace-word boundaries. Always true; kept
    /// explicit so the profile documents itself in model files.
    pub block_cross_word: bool,
}

impl ConstraintProfile {
    pub fn bengali(suffix_lexicon: BTreeSet<String>) -> Self {
        Self {
            mode: ConstraintMode::Bengali,
            suffix_lexicon,
            block_cross_word: true,
        }
    }

    pub fn generic() -> Self {
        Self {
            mode: ConstraintMode::Generic,
            suffix_lexicon: BTreeSet::new(),
            block_cross_word: true,
        }
    }

    /// Bengali mode with the bundled suffix lexicon.
    pub fn bengali_default() -> Self {
        Self::bengali(parse_suffix_lexicon(DEFAULT_SUFFIXES))
    }

    pub fn lexicon_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"suffix-lexicon-v1\n");
        for s in &self.suffix_lexicon {
            hasher.update(s.as_bytes());
            hasher.update(b"\n");
        }
        hex_digest(hasher)
    }
}

/// Parses a suffix lexicon file: one surface per line, `#` comments and blank
/// lines ignored. Entries are NFKC-normalized so they match symbol surfaces.
pub fn parse_suffix_lexicon(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(crate::normalizer::normalize_unicode)
        .collect()
}

/// One pretokenized unit: a run of letters or a single punctuation codepoint.
/// `starts_word` marks the first unit of each whitespace-delimited word, so
/// detached punctuation stays glued to its word on decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordUnit {
    pub surface: String,
    pub starts_word: bool,
}

/// Splits normalized text on spaces, then detaches punctuation codepoints
/// into their own single-codepoint units.
pub fn pretokenize(text: &NormalizedText) -> Vec<WordUnit> {
    pretokenize_str(&text.content)
}

pub fn pretokenize_str(content: &str) -> Vec<WordUnit> {
    let mut units = Vec::new();
    for word in content.split(' ').filter(|w| !w.is_empty()) {
        let mut starts_word = true;
        let mut run = String::new();
        for c in word.chars() {
            if classify_codepoint(c) == CodepointClass::Punctuation {
                if !run.is_empty() {
                    units.push(WordUnit {
                        surface: std::mem::take(&mut run),
                        starts_word,
                    });
                    starts_word = false;
                }
                units.push(WordUnit {
                    surface: c.to_string(),
                    starts_word,
                });
                starts_word = false;
            } else {
                run.push(c);
            }
        }
        if !run.is_empty() {
            units.push(WordUnit {
                surface: run,
                starts_word,
            });
        }
    }
    units
}

/// Whether merging `left ++ right` is permitted. In bengali mode a word-final
/// suffix-lexicon symbol never fuses onto a non-suffix left neighbor; in both
/// modes the merged surface must not begin with a combining mark (impossible
/// for valid symbols, asserted here as defense in depth).
pub fn is_merge_allowed(
    left: &str,
    right: &str,
    right_word_final: bool,
    profile: &ConstraintProfile,
) -> bool {
    if starts_with_combining_mark(left) {
        return false;
    }
    if profile.mode == ConstraintMode::Bengali
        && right_word_final
        && profile.suffix_lexicon.contains(right)
        && !profile.suffix_lexicon.contains(left)
    {
        return false;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpeModel {
    /// Initial grapheme symbols observed in the training corpus.
    pub alphabet: BTreeSet<String>,
    /// Rank-ordered merge table.
    pub merges: Vec<MergeRule>,
    /// Surface → id. Ids: specials, then alphabet in sorted order, then
    /// merge outputs in rank order.
    pub vocab: BTreeMap<String, u32>,
    pub target_vocab_size: usize,
    pub min_pair_freq: u64,
    pub profile: ConstraintProfile,
    /// Fingerprint of the normalization config the training text went through.
    pub norm_fingerprint: String,
    /// Fingerprint of normalization + training configuration.
    pub config_fingerprint: String,
}

impl BpeModel {
    pub fn compute_fingerprint(
        norm_fingerprint: &str,
        profile: &ConstraintProfile,
        target_vocab_size: usize,
        min_pair_freq: u64,
    ) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"bpe-config-v1\n");
        hasher.update(norm_fingerprint.as_bytes());
        hasher.update(b"\n");
        hasher.update(profile.mode.to_string().as_bytes());
        hasher.update(b"\n");
        hasher.update(profile.lexicon_hash().as_bytes());
        hasher.update(b"\n");
        hasher.update(target_vocab_size.to_string().as_bytes());
        hasher.update(b"\n");
        hasher.update(min_pair_freq.to_string().as_bytes());
        hex_digest(hasher)
    }

    /// Re-checks all structural invariants. Used after training and after
    /// loading from disk.
    pub fn validate(&self) -> Result<(), String> {
        let expected = NUM_SPECIALS + self.alphabet.len() + self.merges.len();
        if self.vocab.len() != expected {
            return Err(format!(
                "vocab size {} != specials {} + alphabet {} + merges {}",
                self.vocab.len(),
                NUM_SPECIALS,
                self.alphabet.len(),
                self.merges.len()
            ));
        }
        if self.alphabet.len() + self.merges.len() > self.target_vocab_size {
            return Err(format!(
                "vocab exceeds target: {} + {} > {}",
                self.alphabet.len(),
                self.merges.len(),
                self.target_vocab_size
            ));
        }
        if self.vocab.get(UNK_SURFACE) != Some(&UNK_ID)
            || self.vocab.get(PAD_SURFACE) != Some(&PAD_ID)
        {
            return Err("special tokens missing or misnumbered".into());
        }
        for (rank, surface) in self.alphabet.iter().enumerate() {
            let want = (NUM_SPECIALS + rank) as u32;
            if self.vocab.get(surface) != Some(&want) {
                return Err(format!("alphabet symbol '{surface}' misnumbered"));
            }
        }
        let merge_base = NUM_SPECIALS + self.alphabet.len();
        for (i, rule) in self.merges.iter().enumerate() {
            if rule.rank != i as u32 {
                return Err(format!("merge rank {} at position {i}", rule.rank));
            }
            if !self.vocab.contains_key(&rule.left) || !self.vocab.contains_key(&rule.right) {
                return Err(format!(
                    "merge {}: operands '{}' + '{}' not in vocab",
                    i, rule.left, rule.right
                ));
            }
            let merged = format!("{}{}", rule.left, rule.right);
            let want = (merge_base + i) as u32;
            if self.vocab.get(&merged) != Some(&want) {
                return Err(format!("merge output '{merged}' missing or misnumbered"));
            }
            if starts_with_combining_mark(&merged) {
                return Err(format!("merge output '{merged}' starts with a combining mark"));
            }
        }
        for surface in self.vocab.keys() {
            if surface != UNK_SURFACE
                && surface != PAD_SURFACE
                && starts_with_combining_mark(surface)
            {
                return Err(format!("vocab surface '{surface}' starts with a combining mark"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrainError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("target vocab size {target} must exceed alphabet size {alphabet}")]
    TargetTooSmall { target: usize, alphabet: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("text was normalized under fingerprint {text} but the model expects {model}")]
    FingerprintMismatch { text: String, model: String },
}
