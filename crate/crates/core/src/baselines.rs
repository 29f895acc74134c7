//! Whitespace baseline tokenizer and uniform dispatch over tokenizer kinds.
//!
//! The "generic BPE" comparator is the same BPE engine with an unconstrained
//! merge profile; the whitespace tokenizer splits on single spaces and keeps
//! punctuation attached to its word.

use thiserror::Error;

use crate::bpe::{BpeModel, Encoder, EncodeError, Token, TokenSequence, UNK_ID};
use crate::normalizer::NormalizedText;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenizerKind {
    Whitespace,
    BengaliBpe,
    GenericBpe,
}

impl std::fmt::Display for TokenizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TokenizerKind::Whitespace => write!(f, "whitespace"),
            TokenizerKind::BengaliBpe => write!(f, "bengali"),
            TokenizerKind::GenericBpe => write!(f, "generic"),
        }
    }
}

impl std::str::FromStr for TokenizerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "whitespace" => Ok(TokenizerKind::Whitespace),
            "bengali" => Ok(TokenizerKind::BengaliBpe),
            "generic" => Ok(TokenizerKind::GenericBpe),
            other => Err(format!(
                "unknown tokenizer '{other}', expected whitespace|bengali|generic"
            )),
        }
    }
}

/// A tokenizer selection plus the model it needs, if any.
#[derive(Debug, Clone)]
pub struct TokenizerHandle {
    pub kind: TokenizerKind,
    pub model: Option<BpeModel>,
}

impl TokenizerHandle {
    pub fn whitespace() -> Self {
        Self {
            kind: TokenizerKind::Whitespace,
            model: None,
        }
    }

    pub fn bengali_bpe(model: BpeModel) -> Self {
        Self {
            kind: TokenizerKind::BengaliBpe,
            model: Some(model),
        }
    }

    pub fn generic_bpe(model: BpeModel) -> Self {
        Self {
            kind: TokenizerKind::GenericBpe,
            model: Some(model),
        }
    }
}

#[derive(Debug, Error)]
pub enum TokenizeError {
    #[error("tokenizer kind '{0}' requires a model")]
    MissingModel(TokenizerKind),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Splits on single spaces; every token starts a word and punctuation stays
/// attached. Word-level tokens carry no vocabulary, so ids are all UNK.
pub fn whitespace_tokenize(text: &NormalizedText) -> TokenSequence {
    let mut seq = TokenSequence::default();
    for word in text.content.split(' ').filter(|w| !w.is_empty()) {
        seq.word_boundaries.push(seq.tokens.len());
        seq.tokens.push(Token {
            surface: word.to_string(),
            id: UNK_ID,
        });
    }
    seq
}

/// Uniform dispatch: identical output shape for all kinds.
pub fn tokenize(
    handle: &TokenizerHandle,
    text: &NormalizedText,
) -> Result<TokenSequence, TokenizeError> {
    match handle.kind {
        TokenizerKind::Whitespace => Ok(whitespace_tokenize(text)),
        TokenizerKind::BengaliBpe | TokenizerKind::GenericBpe => {
            let model = handle
                .model
                .as_ref()
                .ok_or(TokenizeError::MissingModel(handle.kind))?;
            Ok(crate::bpe::encode(text, model)?)
        }
    }
}

/// Stateful dispatcher reusing one [`Encoder`] (and its word cache) across
/// calls; what the bench/eval harness drives.
pub enum SessionTokenizer<'m> {
    Whitespace,
    Bpe(Encoder<'m>),
}

impl<'m> SessionTokenizer<'m> {
    pub fn new(handle: &'m TokenizerHandle) -> Result<Self, TokenizeError> {
        match handle.kind {
            TokenizerKind::Whitespace => Ok(SessionTokenizer::Whitespace),
            TokenizerKind::BengaliBpe | TokenizerKind::GenericBpe => {
                let model = handle
                    .model
                    .as_ref()
                    .ok_or(TokenizeError::MissingModel(handle.kind))?;
                Ok(SessionTokenizer::Bpe(Encoder::new(model)))
            }
        }
    }

    pub fn tokenize(&mut self, text: &NormalizedText) -> Result<TokenSequence, TokenizeError> {
        match self {
            SessionTokenizer::Whitespace => Ok(whitespace_tokenize(text)),
            SessionTokenizer::Bpe(encoder) => Ok(encoder.encode(text)?),
        }
    }
}
