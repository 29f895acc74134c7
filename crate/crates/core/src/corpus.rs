//! Labeled corpus ingestion (CSV / JSON-lines), normalization, and
//! seeded stratified splitting.
//!
//! Split assignment is largest-remainder per class over a ChaCha8-shuffled
//! order, so the same seed reproduces the same split on any platform.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::normalizer::{clean, NormalizationConfig, NormalizedText};

/// Malformed rows tolerated (and reported) before ingestion aborts.
pub const MALFORMED_ROW_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn name(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl std::str::FromStr for CorpusFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(format!("unknown corpus format '{other}', expected csv|jsonl")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub text: NormalizedText,
    pub label: u32,
    pub split: Split,
}

#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    pub samples: Vec<LabeledSample>,
    pub label_names: Vec<String>,
    pub split_ratios: (f64, f64, f64),
    pub seed: u64,
}

impl LabeledCorpus {
    pub fn split_samples(&self, split: Split) -> impl Iterator<Item = &LabeledSample> {
        self.samples.iter().filter(move |s| s.split == split)
    }
}

/// Normalized samples before split assignment.
#[derive(Debug, Clone)]
pub struct RawCorpus {
    pub samples: Vec<(NormalizedText, u32)>,
    pub label_names: Vec<String>,
    /// Rows whose text normalized to empty and were dropped.
    pub dropped_count: usize,
    /// Malformed rows skipped (with their line numbers reported separately).
    pub malformed: Vec<(usize, String)>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("missing column '{0}' in input header")]
    MissingColumn(String),
    #[error("line {line}: malformed row: {message} (aborting after {limit} malformed rows)")]
    MalformedRow {
        line: usize,
        message: String,
        limit: usize,
    },
    #[error("class '{label}' has {count} samples; at least 3 are required to split")]
    ClassTooSmall { label: String, count: usize },
}

#[derive(Deserialize)]
struct JsonlRow {
    text: String,
    label: String,
}

/// Loads `text,label` rows, normalizes text, drops empty-after-normalization
/// rows (counted), and interns labels in sorted order.
pub fn load_labeled_corpus(
    path: &Path,
    format: CorpusFormat,
    config: &NormalizationConfig,
) -> Result<RawCorpus, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_labeled_reader(file, format, config)
}

pub fn load_labeled_reader<R: Read>(
    reader: R,
    format: CorpusFormat,
    config: &NormalizationConfig,
) -> Result<RawCorpus, CorpusError> {
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut malformed: Vec<(usize, String)> = Vec::new();

    match format {
        CorpusFormat::Csv => {
            let mut csv_reader = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
            let headers = csv_reader
                .headers()
                .map_err(|e| CorpusError::MissingColumn(e.to_string()))?
                .clone();
            let text_idx = headers
                .iter()
                .position(|h| h == "text")
                .ok_or_else(|| CorpusError::MissingColumn("text".into()))?;
            let label_idx = headers
                .iter()
                .position(|h| h == "label")
                .ok_or_else(|| CorpusError::MissingColumn("label".into()))?;
            for (i, record) in csv_reader.records().enumerate() {
                let line = i + 2; // header is line 1
                match record {
                    Ok(rec) => match (rec.get(text_idx), rec.get(label_idx)) {
                        (Some(text), Some(label)) => {
                            rows.push((text.to_string(), label.to_string()))
                        }
                        _ => report_malformed(&mut malformed, line, "missing field")?,
                    },
                    Err(e) => report_malformed(&mut malformed, line, &e.to_string())?,
                }
            }
        }
        CorpusFormat::Jsonl => {
            for (i, line) in BufReader::new(reader).lines().enumerate() {
                let lineno = i + 1;
                let line = line.map_err(|source| CorpusError::Io {
                    path: "<reader>".into(),
                    source,
                })?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<JsonlRow>(&line) {
                    Ok(row) => rows.push((row.text, row.label)),
                    Err(e) => report_malformed(&mut malformed, lineno, &e.to_string())?,
                }
            }
        }
    }

    let mut label_names: Vec<String> = rows.iter().map(|(_, l)| l.clone()).collect();
    label_names.sort();
    label_names.dedup();
    let label_ids: BTreeMap<&str, u32> = label_names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i as u32))
        .collect();

    let mut samples = Vec::with_capacity(rows.len());
    let mut dropped_count = 0usize;
    for (text, label) in &rows {
        let normalized = clean(text, config);
        if normalized.content.is_empty() {
            dropped_count += 1;
            continue;
        }
        samples.push((normalized, label_ids[label.as_str()]));
    }

    Ok(RawCorpus {
        samples,
        label_names,
        dropped_count,
        malformed,
    })
}

fn report_malformed(
    malformed: &mut Vec<(usize, String)>,
    line: usize,
    message: &str,
) -> Result<(), CorpusError> {
    malformed.push((line, message.to_string()));
    if malformed.len() > MALFORMED_ROW_LIMIT {
        return Err(CorpusError::MalformedRow {
            line,
            message: message.to_string(),
            limit: MALFORMED_ROW_LIMIT,
        });
    }
    Ok(())
}

/// Per class: shuffle with a seeded generator, then assign split sizes by
/// largest remainder so per-class counts deviate from the exact ratios by
/// less than one sample.
pub fn stratified_split(
    raw: RawCorpus,
    ratios: (f64, f64, f64),
    seed: u64,
) -> Result<LabeledCorpus, CorpusError> {
    let mut by_class: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (idx, (_, label)) in raw.samples.iter().enumerate() {
        by_class.entry(*label).or_default().push(idx);
    }

    for (&label, indices) in &by_class {
        if indices.len() < 3 {
            return Err(CorpusError::ClassTooSmall {
                label: raw.label_names[label as usize].clone(),
                count: indices.len(),
            });
        }
    }

    let mut assignment: Vec<Option<Split>> = vec![None; raw.samples.len()];
    for (&label, indices) in &by_class {
        let mut order = indices.clone();
        // Independent stream per class keeps the split stable when other
        // classes change size.
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(u64::from(label)));
        order.shuffle(&mut rng);

        let counts = largest_remainder(order.len(), ratios);
        let mut cursor = 0usize;
        for (split, count) in Split::ALL.into_iter().zip(counts) {
            for &idx in &order[cursor..cursor + count] {
                assignment[idx] = Some(split);
            }
            cursor += count;
        }
    }

    let samples = raw
        .samples
        .into_iter()
        .zip(assignment)
        .map(|((text, label), split)| LabeledSample {
            text,
            label,
            split: split.expect("every sample assigned"),
        })
        .collect();

    Ok(LabeledCorpus {
        samples,
        label_names: raw.label_names,
        split_ratios: ratios,
        seed,
    })
}

fn largest_remainder(n: usize, ratios: (f64, f64, f64)) -> [usize; 3] {
    let ratios = [ratios.0, ratios.1, ratios.2];
    let exact: Vec<f64> = ratios.iter().map(|r| r * n as f64).collect();
    let mut counts: [usize; 3] = [
        exact[0].floor() as usize,
        exact[1].floor() as usize,
        exact[2].floor() as usize,
    ];
    let mut leftover = n - counts.iter().sum::<usize>();
    // Distribute by descending fractional remainder; ties go to the earlier
    // split (train, val, test).
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &i in &order {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }
    counts
}
