//! Tokenization-level metrics and throughput measurement; assembles the
//! comparative report (one row per tokenizer over the identical corpus).
//!
//! `tokens_per_char` divides total tokens by total normalized codepoints,
//! spaces included; timing covers tokenization only (normalization and file
//! I/O excluded) on a monotonic clock, single-threaded for comparability.

use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::baselines::{SessionTokenizer, TokenizeError, TokenizerHandle};
use crate::corpus::LabeledCorpus;
use crate::eval::{tune_and_evaluate, EvalError, EvalReport, DEFAULT_C_GRID};
use crate::normalizer::{hex_digest, NormalizedText};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("corpus has {corpus} samples but warmup needs more than {warmup}")]
    CorpusSmallerThanWarmup { corpus: usize, warmup: usize },
    #[error("no tokenizers given")]
    NoTokenizers,
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Serialize)]
pub struct TokenizationStats {
    pub avg_tokens_per_sample: f64,
    /// Lower-middle element for even sample counts.
    pub median_tokens: f64,
    /// Total tokens ÷ total codepoints of the normalized text, spaces
    /// included.
    pub tokens_per_char: f64,
    pub sample_count: usize,
}

pub fn tokenization_stats(
    corpus: &[NormalizedText],
    handle: &TokenizerHandle,
) -> Result<TokenizationStats, BenchError> {
    if corpus.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }
    let mut session = SessionTokenizer::new(handle)?;
    let mut counts: Vec<usize> = Vec::with_capacity(corpus.len());
    let mut total_chars = 0usize;
    for text in corpus {
        counts.push(session.tokenize(text)?.tokens.len());
        total_chars += text.content.chars().count();
    }
    let total_tokens: usize = counts.iter().sum();
    let mut sorted = counts.clone();
    sorted.sort_unstable();
    let median = sorted[(sorted.len() - 1) / 2] as f64;
    Ok(TokenizationStats {
        avg_tokens_per_sample: total_tokens as f64 / counts.len() as f64,
        median_tokens: median,
        tokens_per_char: total_tokens as f64 / total_chars as f64,
        sample_count: counts.len(),
    })
}

/// Injectable time source so throughput harness logic is testable.
pub trait Clock {
    fn now(&mut self) -> Duration;
}

pub struct MonotonicClock {
    start: Instant,
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self {
            start: Instant::now(),
        }
    }
}

impl Clock for MonotonicClock {
    fn now(&mut self) -> Duration {
        self.start.elapsed()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThroughputResult {
    pub samples_per_sec: f64,
    /// Wall time of the median pass.
    pub wall_seconds: f64,
    pub samples_processed: usize,
    pub warmup_samples: usize,
}

/// Encodes `warmup` samples untimed, then times the remainder over `repeats`
/// passes and reports the median pass. Tokenization output is discarded.
pub fn measure_throughput(
    corpus: &[NormalizedText],
    handle: &TokenizerHandle,
    warmup: usize,
    repeats: usize,
    clock: &mut dyn Clock,
) -> Result<ThroughputResult, BenchError> {
    if corpus.len() <= warmup {
        return Err(BenchError::CorpusSmallerThanWarmup {
            corpus: corpus.len(),
            warmup,
        });
    }
    let mut session = SessionTokenizer::new(handle)?;
    for text in &corpus[..warmup] {
        let _ = session.tokenize(text)?;
    }
    let timed = &corpus[warmup..];
    let mut passes: Vec<Duration> = Vec::with_capacity(repeats.max(1));
    for _ in 0..repeats.max(1) {
        let start = clock.now();
        for text in timed {
            let _ = session.tokenize(text)?;
        }
        passes.push(clock.now() - start);
    }
    passes.sort_unstable();
    let wall = passes[(passes.len() - 1) / 2];
    let wall_seconds = wall.as_secs_f64();
    Ok(ThroughputResult {
        samples_per_sec: timed.len() as f64 / wall_seconds,
        wall_seconds,
        samples_processed: timed.len(),
        warmup_samples: warmup,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub kind: String,
    pub stats: TokenizationStats,
    pub throughput: ThroughputResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchRow>,
    pub corpus_fingerprint: String,
    pub sample_count: usize,
    pub thread_count: usize,
    pub tokens_per_char_denominator: &'static str,
    pub timing_scope: &'static str,
}

pub fn corpus_fingerprint(corpus: &[NormalizedText]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"corpus-v1\n");
    for text in corpus {
        hasher.update(text.content.as_bytes());
        hasher.update(b"\n");
    }
    hex_digest(hasher)
}

/// One row per handle over the identical corpus; optionally runs the
/// downstream eval per handle.
pub fn compare(
    corpus: &LabeledCorpus,
    handles: &[TokenizerHandle],
    include_eval: bool,
    warmup: usize,
    repeats: usize,
) -> Result<BenchmarkReport, BenchError> {
    if handles.is_empty() {
        return Err(BenchError::NoTokenizers);
    }
    let texts: Vec<NormalizedText> = corpus.samples.iter().map(|s| s.text.clone()).collect();
    if texts.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }
    let warmup = warmup.min(texts.len().saturating_sub(1));
    let mut rows = Vec::with_capacity(handles.len());
    for handle in handles {
        let stats = tokenization_stats(&texts, handle)?;
        let mut clock = MonotonicClock::default();
        let throughput = measure_throughput(&texts, handle, warmup, repeats, &mut clock)?;
        let eval = if include_eval {
            Some(tune_and_evaluate(corpus, handle, &DEFAULT_C_GRID)?)
        } else {
            None
        };
        rows.push(BenchRow {
            kind: handle.kind.to_string(),
            stats,
            throughput,
            eval,
        });
    }
    Ok(BenchmarkReport {
        rows,
        corpus_fingerprint: corpus_fingerprint(&texts),
        sample_count: texts.len(),
        thread_count: 1,
        tokens_per_char_denominator: "all normalized codepoints including spaces",
        timing_scope: "tokenization only; normalization and I/O excluded",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpe::{train, ConstraintProfile};
    use crate::corpus::{stratified_split, RawCorpus};
    use crate::normalizer::{clean, NormalizationConfig};

    fn norm(s: &str) -> NormalizedText {
        clean(s, &NormalizationConfig::default())
    }

    #[test]
    fn hand_counted_whitespace_stats() {
        // "বাংলা ভাষা": 10 codepoints including the space, 2 tokens.
        let stats =
            tokenization_stats(&[norm("বাংলা ভাষা")], &TokenizerHandle::whitespace()).unwrap();
        assert_eq!(stats.avg_tokens_per_sample, 2.0);
        assert!((stats.tokens_per_char - 0.2).abs() < 1e-12);
        assert_eq!(stats.sample_count, 1);
    }

    #[test]
    fn single_token_corpus() {
        let stats = tokenization_stats(&[norm("ক")], &TokenizerHandle::whitespace()).unwrap();
        assert_eq!(stats.avg_tokens_per_sample, 1.0);
        assert_eq!(stats.median_tokens, 1.0);
    }

    #[test]
    fn median_is_lower_middle_for_even_counts() {
        let corpus = vec![norm("ক"), norm("ক খ"), norm("ক খ গ"), norm("ক খ গ ঘ")];
        let stats = tokenization_stats(&corpus, &TokenizerHandle::whitespace()).unwrap();
        assert_eq!(stats.median_tokens, 2.0);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(matches!(
            tokenization_stats(&[], &TokenizerHandle::whitespace()),
            Err(BenchError::EmptyCorpus)
        ));
    }

    struct ScriptedClock {
        ticks: Vec<Duration>,
        cursor: usize,
    }

    impl Clock for ScriptedClock {
        fn now(&mut self) -> Duration {
            let t = self.ticks[self.cursor.min(self.ticks.len() - 1)];
            self.cursor += 1;
            t
        }
    }

    #[test]
    fn throughput_arithmetic_with_fake_clock() {
        let corpus: Vec<NormalizedText> = (0..1001).map(|_| norm("ক খ")).collect();
        // One pass over 1000 samples taking exactly 2 s.
        let mut clock = ScriptedClock {
            ticks: vec![Duration::ZERO, Duration::from_secs(2)],
            cursor: 0,
        };
        let result =
            measure_throughput(&corpus, &TokenizerHandle::whitespace(), 1, 1, &mut clock).unwrap();
        assert_eq!(result.samples_processed, 1000);
        assert!((result.samples_per_sec - 500.0).abs() < 1e-9);
    }

    #[test]
    fn median_pass_reported_with_repeats() {
        let corpus: Vec<NormalizedText> = (0..10).map(|_| norm("ক")).collect();
        // Pass durations 5 s, 1 s, 3 s → median 3 s.
        let mut clock = ScriptedClock {
            ticks: vec![
                Duration::from_secs(0),
                Duration::from_secs(5),
                Duration::from_secs(10),
                Duration::from_secs(11),
                Duration::from_secs(20),
                Duration::from_secs(23),
            ],
            cursor: 0,
        };
        let result =
            measure_throughput(&corpus, &TokenizerHandle::whitespace(), 2, 3, &mut clock).unwrap();
        assert!((result.wall_seconds - 3.0).abs() < 1e-9);
    }

    #[test]
    fn warmup_larger_than_corpus_is_rejected() {
        let corpus = vec![norm("ক")];
        let mut clock = MonotonicClock::default();
        assert!(matches!(
            measure_throughput(&corpus, &TokenizerHandle::whitespace(), 5, 1, &mut clock),
            Err(BenchError::CorpusSmallerThanWarmup { corpus: 1, warmup: 5 })
        ));
    }

    fn tiny_labeled_corpus() -> LabeledCorpus {
        let cfg = NormalizationConfig::default();
        let mut samples = Vec::new();
        for i in 0..12 {
            let text = if i % 2 == 0 { "কলম কলা খাতা" } else { "ভাষা ভাষার গর্ব" };
            samples.push((clean(text, &cfg), (i % 2) as u32));
        }
        let raw = RawCorpus {
            samples,
            label_names: vec!["a".into(), "b".into()],
            dropped_count: 0,
            malformed: Vec::new(),
        };
        stratified_split(raw, (0.7, 0.1, 0.2), 42).unwrap()
    }

    #[test]
    fn compare_emits_one_row_per_handle() {
        let corpus = tiny_labeled_corpus();
        let texts: Vec<NormalizedText> = corpus.samples.iter().map(|s| s.text.clone()).collect();
        let model = train(&texts, 60, ConstraintProfile::generic(), 1).unwrap();
        let handles = vec![
            TokenizerHandle::whitespace(),
            TokenizerHandle::generic_bpe(model.clone()),
            TokenizerHandle::generic_bpe(model),
        ];
        let report = compare(&corpus, &handles, false, 2, 1).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.rows[0].kind, "whitespace");
        assert_eq!(report.sample_count, 12);
    }

    #[test]
    fn compare_rejects_empty_handle_list() {
        let corpus = tiny_labeled_corpus();
        assert!(matches!(
            compare(&corpus, &[], false, 1, 1),
            Err(BenchError::NoTokenizers)
        ));
    }

    #[test]
    fn report_is_deterministic_modulo_timing() {
        let corpus = tiny_labeled_corpus();
        let handles = vec![TokenizerHandle::whitespace()];
        let a = compare(&corpus, &handles, false, 2, 1).unwrap();
        let b = compare(&corpus, &handles, false, 2, 1).unwrap();
        assert_eq!(a.corpus_fingerprint, b.corpus_fingerprint);
        assert_eq!(
            serde_json::to_value(&a.rows[0].stats).unwrap(),
            serde_json::to_value(&b.rows[0].stats).unwrap()
        );
    }
}
