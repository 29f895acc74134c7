//! Encoding and decoding with a trained merge table.
//!
//! Per word unit: segment into grapheme symbols, then repeatedly apply the
//! lowest-ranked applicable merge (leftmost occurrence first) until none
//! applies. Constraint checks run at application time too, so a merge that
//! was blocked word-finally during training never fires word-finally during
//! encoding either. Graphemes absent from the vocabulary become
//! surface-preserving UNK tokens.

use std::collections::{BTreeSet, HashMap};

use crate::grapheme::segment_str;
use crate::normalizer::NormalizedText;

use super::{is_merge_allowed, BpeModel, EncodeError, UNK_ID};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Vocabulary id, or [`UNK_ID`] for out-of-vocabulary graphemes.
    pub id: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence {
    pub tokens: Vec<Token>,
    /// Token indices where a new whitespace-delimited word begins.
    pub word_boundaries: Vec<usize>,
}

impl TokenSequence {
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.tokens.iter().map(|t| t.id).collect()
    }
}

/// One merge applied while encoding a word; consumed by the suffix-isolation
/// audit, which replays these through [`is_merge_allowed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppliedMerge {
    pub left: String,
    pub right: String,
    pub rank: u32,
    pub right_word_final: bool,
}

/// Reusable encoder: owns the rank lookup and a per-word result cache.
pub struct Encoder<'m> {
    model: &'m BpeModel,
    ranks: HashMap<(&'m str, &'m str), u32>,
    cache: HashMap<String, Vec<Token>>,
}

impl<'m> Encoder<'m> {
    pub fn new(model: &'m BpeModel) -> Self {
        let ranks = model
            .merges
            .iter()
            .map(|m| ((m.left.as_str(), m.right.as_str()), m.rank))
            .collect();
        Self {
            model,
            ranks,
            cache: HashMap::new(),
        }
    }

    pub fn model(&self) -> &BpeModel {
        self.model
    }

    pub fn encode(&mut self, text: &NormalizedText) -> Result<TokenSequence, EncodeError> {
        if text.norm_fingerprint != self.model.norm_fingerprint {
            return Err(EncodeError::FingerprintMismatch {
                text: text.norm_fingerprint.clone(),
                model: self.model.norm_fingerprint.clone(),
            });
        }
        Ok(self.encode_content(&text.content))
    }

    /// Encodes already-normalized content without a fingerprint check; the
    /// CLI uses this after normalizing inline.
    pub fn encode_content(&mut self, content: &str) -> TokenSequence {
        let mut seq = TokenSequence::default();
        for unit in super::pretokenize_str(content) {
            if unit.starts_word {
                seq.word_boundaries.push(seq.tokens.len());
            }
            if !self.cache.contains_key(&unit.surface) {
                let (symbols, _) = merge_word(&unit.surface, self.model, &self.ranks);
                let tokens: Vec<Token> = symbols
                    .into_iter()
                    .map(|surface| {
                        let id = self.model.vocab.get(&surface).copied().unwrap_or(UNK_ID);
                        Token { surface, id }
                    })
                    .collect();
                self.cache.insert(unit.surface.clone(), tokens);
            }
            seq.tokens.extend(self.cache[&unit.surface].iter().cloned());
        }
        seq
    }

    /// Uncached single-word encode that also reports every merge applied.
    pub fn encode_word_traced(&self, word: &str) -> (Vec<String>, Vec<AppliedMerge>) {
        merge_word(word, self.model, &self.ranks)
    }
}

fn merge_word(
    word: &str,
    model: &BpeModel,
    ranks: &HashMap<(&str, &str), u32>,
) -> (Vec<String>, Vec<AppliedMerge>) {
    let mut symbols: Vec<String> = segment_str(word).into_iter().map(|c| c.surface).collect();
    let mut applied = Vec::new();
    loop {
        let mut best: Option<(u32, usize)> = None;
        for i in 0..symbols.len().saturating_sub(1) {
            let pair = (symbols[i].as_str(), symbols[i + 1].as_str());
            let Some(&rank) = ranks.get(&pair) else { continue };
            let word_final = i + 2 == symbols.len();
            if !is_merge_allowed(pair.0, pair.1, word_final, &model.profile) {
                continue;
            }
            // Strict < keeps the leftmost occurrence among equal ranks.
            if best.map_or(true, |(r, _)| rank < r) {
                best = Some((rank, i));
            }
        }
        let Some((rank, i)) = best else { break };
        applied.push(AppliedMerge {
            left: symbols[i].clone(),
            right: symbols[i + 1].clone(),
            rank,
            right_word_final: i + 2 == symbols.len(),
        });
        let merged = format!("{}{}", symbols[i], symbols[i + 1]);
        symbols[i] = merged;
        symbols.remove(i + 1);
    }
    (symbols, applied)
}

/// One-shot encode; builds a transient [`Encoder`].
pub fn encode(text: &NormalizedText, model: &BpeModel) -> Result<TokenSequence, EncodeError> {
    Encoder::new(model).encode(text)
}

/// Reconstructs the normalized source text: token surfaces concatenated
/// within each word span, word spans joined by single spaces.
pub fn decode(tokens: &TokenSequence) -> String {
    let boundaries: BTreeSet<usize> = tokens.word_boundaries.iter().copied().collect();
    let mut out = String::new();
    for (i, token) in tokens.tokens.iter().enumerate() {
        if i > 0 && boundaries.contains(&i) {
            out.push(' ');
        }
        out.push_str(&token.surface);
    }
    out
}
