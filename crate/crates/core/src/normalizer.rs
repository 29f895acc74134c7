//! Text normalization: NFKC, Bengali-only character filtering, numeral and
//! web-artifact stripping, whitespace collapse.
//!
//! Every downstream module consumes [`NormalizedText`] produced here; the
//! configuration is hashed into the model fingerprint so training and
//! encoding are guaranteed to see identically prepared text.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::UnicodeNormalization;

pub const ZWNJ: char = '\u{200C}';
pub const ZWJ: char = '\u{200D}';
pub const VIRAMA: char = '\u{09CD}';

/// Inclusive codepoint interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodepointRange {
    pub start: u32,
    pub end: u32,
}

impl CodepointRange {
    pub const fn new(start: u32, end: u32) -> Self {
        Self { start, end }
    }

    pub fn contains(&self, cp: u32) -> bool {
        self.start <= cp && cp <= self.end
    }
}

/// Bengali Unicode block.
pub const BENGALI_BLOCK: CodepointRange = CodepointRange::new(0x0980, 0x09FF);

/// Bengali digits ০–৯, inside the Bengali block but removed when
/// `strip_numerals` is set.
pub const BENGALI_DIGITS: CodepointRange = CodepointRange::new(0x09E6, 0x09EF);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationConfig {
    pub apply_nfkc: bool,
    pub retain_ranges: Vec<CodepointRange>,
    /// Punctuation admitted verbatim. Must be disjoint from `retain_ranges`;
    /// defaults include the danda/double danda (Devanagari block, so outside
    /// the Bengali retain range) and common ASCII punctuation.
    pub keep_punctuation: BTreeSet<char>,
    pub strip_numerals: bool,
    pub strip_web_artifacts: bool,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        let keep_punctuation: BTreeSet<char> =
            ['\u{0964}', '\u{0965}', '.', ',', '!', '?', ';', ':', '\'', '"', '(', ')', '-']
                .into_iter()
                .collect();
        Self {
            apply_nfkc: true,
            retain_ranges: vec![BENGALI_BLOCK],
            keep_punctuation,
            strip_numerals: true,
            strip_web_artifacts: true,
        }
    }
}

impl NormalizationConfig {
    /// Checks the structural invariants: the Bengali block is always retained
    /// and `keep_punctuation` does not overlap any retained range.
    pub fn validate(&self) -> Result<(), String> {
        let covers_bengali = self
            .retain_ranges
            .iter()
            .any(|r| r.start <= BENGALI_BLOCK.start && BENGALI_BLOCK.end <= r.end);
        if !covers_bengali {
            return Err("retain_ranges must include U+0980..U+09FF".into());
        }
        for &c in &self.keep_punctuation {
            if self.retain_ranges.iter().any(|r| r.contains(c as u32)) {
                return Err(format!(
                    "keep_punctuation overlaps retain_ranges at U+{:04X}",
                    c as u32
                ));
            }
        }
        Ok(())
    }

    /// Stable hash of the full configuration; part of every model fingerprint.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(b"normalization-config-v1\n");
        hasher.update(&bytes);
        hex_digest(hasher)
    }

    fn retains(&self, cp: u32) -> bool {
        self.retain_ranges.iter().any(|r| r.contains(cp))
    }
}

pub(crate) fn hex_digest(hasher: Sha256) -> String {
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Output of [`clean`]: Bengali letters, whitelisted punctuation, and single
/// spaces only, plus joiners immediately following a virama.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedText {
    pub content: String,
    /// Codepoint count of the original input.
    pub source_length: usize,
    /// Fingerprint of the configuration that produced this text.
    pub norm_fingerprint: String,
}

/// NFKC normalization; visually identical Bengali sequences that differ in
/// byte form map to one canonical sequence.
pub fn normalize_unicode(text: &str) -> String {
    text.nfkc().collect()
}

fn tag_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"<[^>]*>").unwrap())
}

fn url_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?:https?://|www\.)\S+").unwrap())
}

fn is_emoji(c: char) -> bool {
    matches!(u32::from(c),
        0x1F000..=0x1FAFF   // pictographs, emoticons, flags, symbols-extended
        | 0x2600..=0x27BF   // misc symbols, dingbats
        | 0x2B00..=0x2BFF
        | 0xFE00..=0xFE0F)  // variation selectors
}

fn strip_web_artifacts(text: &str) -> String {
    let no_tags = tag_regex().replace_all(text, " ");
    let no_urls = url_regex().replace_all(&no_tags, " ");
    no_urls.chars().map(|c| if is_emoji(c) { ' ' } else { c }).collect()
}

/// Full cleaning pipeline: web-artifact stripping, NFKC, character filtering,
/// whitespace collapse. Total; a string that filters to nothing yields empty
/// content.
pub fn clean(text: &str, config: &NormalizationConfig) -> NormalizedText {
    let source_length = text.chars().count();

    let stripped;
    let stage: &str = if config.strip_web_artifacts {
        stripped = strip_web_artifacts(text);
        &stripped
    } else {
        text
    };

    let nfkc;
    let stage: &str = if config.apply_nfkc {
        nfkc = normalize_unicode(stage);
        &nfkc
    } else {
        stage
    };

    let mut filtered = String::with_capacity(stage.len());
    let mut prev_kept: Option<char> = None;
    for c in stage.chars() {
        let cp = c as u32;
        let keep = if c.is_whitespace() {
            filtered.push(' ');
            prev_kept = Some(' ');
            continue;
        } else if config.retains(cp) {
            !(config.strip_numerals && BENGALI_DIGITS.contains(cp))
        } else if config.keep_punctuation.contains(&c) {
            true
        } else if c == ZWNJ || c == ZWJ {
            // Joiners only matter for conjunct formation; keep them when they
            // directly follow a virama, drop them anywhere else.
            prev_kept == Some(VIRAMA)
        } else {
            false
        };
        if keep {
            filtered.push(c);
            prev_kept = Some(c);
        }
    }

    let mut content = String::with_capacity(filtered.len());
    let mut pending_space = false;
    for c in filtered.chars() {
        if c == ' ' {
            pending_space = !content.is_empty();
        } else {
            if pending_space {
                content.push(' ');
                pending_space = false;
            }
            content.push(c);
        }
    }

    NormalizedText {
        content,
        source_length,
        norm_fingerprint: config.fingerprint(),
    }
}
