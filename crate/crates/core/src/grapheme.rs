//! Bengali grapheme cluster segmentation.
//!
//! Clusters are the atomic symbols of BPE training: a base consonant or
//! independent vowel together with its virama-chained conjuncts, optional
//! nukta, at most one dependent vowel sign, and trailing modifiers. Keeping
//! these units whole is what prevents merges from ever splitting a conjunct
//! or detaching a kar from its base.
//!
//! Cluster grammar (punctuation, space, and unknown codepoints are singleton
//! clusters):
//!
//! ```text
//! (IndependentVowel | Consonant Nukta? (Virama Joiner? Consonant Nukta?)*
//!     DependentVowelSign?) Modifier*
//! ```
//!
//! A combining mark with no legal base attaches to the open cluster (or opens
//! an empty-base one) flagged `degenerate`, so segmentation is total and
//! lossless on arbitrary input.

use crate::normalizer::NormalizedText;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodepointClass {
    IndependentVowel,
    Consonant,
    DependentVowelSign,
    Virama,
    Nukta,
    /// Anusvara, visarga, chandrabindu.
    Modifier,
    /// ZWJ / ZWNJ.
    Joiner,
    Punctuation,
    Space,
    Other,
}

/// Deterministic classification by Bengali block layout. Unknown codepoints
/// map to `Other`.
pub fn classify_codepoint(c: char) -> CodepointClass {
    use CodepointClass::*;
    match u32::from(c) {
        0x0981..=0x0983 => Modifier,
        0x0985..=0x0994 => IndependentVowel,
        0x0995..=0x09B9 | 0x09DC..=0x09DF | 0x09F0..=0x09F1 => Consonant,
        0x09BC => Nukta,
        0x09BE..=0x09CC | 0x09D7 => DependentVowelSign,
        0x09CD => Virama,
        0x200C | 0x200D => Joiner,
        0x0964 | 0x0965 => Punctuation,
        0x0020 => Space,
        _ if c.is_ascii_punctuation() => Punctuation,
        _ => Other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphemeCluster {
    pub surface: String,
    /// Set when the cluster absorbed a mark the grammar does not license
    /// (e.g. a kar with no base, or a dangling word-final virama).
    pub degenerate: bool,
}

impl GraphemeCluster {
    pub fn codepoints(&self) -> impl Iterator<Item = char> + '_ {
        self.surface.chars()
    }
}

/// True for the classes that may never start a well-formed cluster.
pub fn is_combining_class(class: CodepointClass) -> bool {
    matches!(
        class,
        CodepointClass::DependentVowelSign
            | CodepointClass::Virama
            | CodepointClass::Nukta
            | CodepointClass::Modifier
            | CodepointClass::Joiner
    )
}

/// True when `surface` starts with a codepoint that must not begin a token.
pub fn starts_with_combining_mark(surface: &str) -> bool {
    surface
        .chars()
        .next()
        .map(|c| is_combining_class(classify_codepoint(c)))
        .unwrap_or(false)
}

// Last codepoint absorbed into the open cluster, driving the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Last {
    Vowel,
    Consonant,
    Nukta,
    Virama,
    Joiner,
    Kar,
    Modifier,
}

struct Builder {
    clusters: Vec<GraphemeCluster>,
    current: String,
    last: Option<Last>,
    kar_seen: bool,
    degenerate: bool,
}

impl Builder {
    fn new() -> Self {
        Self {
            clusters: Vec::new(),
            current: String::new(),
            last: None,
            kar_seen: false,
            degenerate: false,
        }
    }

    fn close(&mut self) {
        if self.current.is_empty() {
            return;
        }
        // A cluster ending mid-conjunct (dangling virama or joiner) is
        // outside the grammar.
        if matches!(self.last, Some(Last::Virama) | Some(Last::Joiner)) {
            self.degenerate = true;
        }
        self.clusters.push(GraphemeCluster {
            surface: std::mem::take(&mut self.current),
            degenerate: self.degenerate,
        });
        self.last = None;
        self.kar_seen = false;
        self.degenerate = false;
    }

    fn open(&mut self, c: char, last: Last) {
        self.close();
        self.current.push(c);
        self.last = Some(last);
    }

    fn extend(&mut self, c: char, last: Last) {
        self.current.push(c);
        self.last = Some(last);
    }

    // Illegal mark: keep it attached so segmentation stays lossless, but
    // flag the carrying cluster.
    fn attach_degenerate(&mut self, c: char, last: Last) {
        self.degenerate = true;
        self.current.push(c);
        self.last = Some(last);
    }

    fn singleton(&mut self, c: char) {
        self.close();
        self.clusters.push(GraphemeCluster {
            surface: c.to_string(),
            degenerate: false,
        });
    }
}

/// Segments a string into grapheme clusters. Lossless: concatenating the
/// cluster surfaces reproduces the input exactly.
pub fn segment_str(text: &str) -> Vec<GraphemeCluster> {
    use CodepointClass::*;
    let mut b = Builder::new();
    for c in text.chars() {
        match classify_codepoint(c) {
            Space | Punctuation | Other => b.singleton(c),
            IndependentVowel => b.open(c, Last::Vowel),
            Consonant => match b.last {
                Some(Last::Virama) | Some(Last::Joiner) => b.extend(c, Last::Consonant),
                _ => b.open(c, Last::Consonant),
            },
            Nukta => match b.last {
                Some(Last::Consonant) => b.extend(c, Last::Nukta),
                _ => b.attach_degenerate(c, Last::Nukta),
            },
            Virama => match b.last {
                Some(Last::Consonant) | Some(Last::Nukta) if !b.kar_seen => {
                    b.extend(c, Last::Virama)
                }
                _ => b.attach_degenerate(c, Last::Virama),
            },
            Joiner => match b.last {
                Some(Last::Virama) => b.extend(c, Last::Joiner),
                _ => b.attach_degenerate(c, Last::Joiner),
            },
            DependentVowelSign => match b.last {
                Some(Last::Consonant) | Some(Last::Nukta) if !b.kar_seen => {
                    b.kar_seen = true;
                    b.extend(c, Last::Kar);
                }
                _ => b.attach_degenerate(c, Last::Kar),
            },
            Modifier => match b.last {
                Some(Last::Vowel) | Some(Last::Consonant) | Some(Last::Nukta)
                | Some(Last::Kar) | Some(Last::Modifier) => b.extend(c, Last::Modifier),
                _ => b.attach_degenerate(c, Last::Modifier),
            },
        }
    }
    b.close();
    b.clusters
}

/// [`segment_str`] over normalized text.
pub fn segment_graphemes(text: &NormalizedText) -> Vec<GraphemeCluster> {
    segment_str(&text.content)
}
