//! Command-line entry point: normalization, grapheme inspection, corpus
//! splitting, BPE training, encoding/decoding, benchmarking, downstream
//! evaluation, and the end-to-end pipeline.
//!
//! Every subcommand reads stdin / writes stdout when a path is `-`. Runs that
//! produce an artifact also write a `<artifact>.manifest.json` recording the
//! resolved configuration, input fingerprints, and seed, so any artifact can
//! be reproduced byte-for-byte. Exit codes: 0 success, 1 data/runtime error,
//! 2 usage error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use bengalibpe::baselines::{TokenizerHandle, TokenizerKind};
use bengalibpe::bench::{compare, BenchmarkReport};
use bengalibpe::bpe::{
    parse_suffix_lexicon, ConstraintMode, ConstraintProfile, Token, TokenSequence, UNK_ID,
};
use bengalibpe::corpus::{
    load_labeled_corpus, stratified_split, CorpusFormat, LabeledCorpus, RawCorpus, Split,
};
use bengalibpe::eval::{tune_and_evaluate, DEFAULT_C_GRID};
use bengalibpe::grapheme::segment_str;
use bengalibpe::model_io::{load_model, save_model};
use bengalibpe::normalizer::{clean, NormalizationConfig, NormalizedText};
use bengalibpe::{bpe, synth, VERSION};

/// Marker appended to a token that is continued by the next token of the same
/// word, so `encode | decode` round-trips through plain text.
const CONTINUATION: &str = "@@";

#[derive(Parser)]
#[command(
    name = "bengalibpe",
    version,
    about = "Bengali grapheme-aware BPE tokenizer and benchmark harness"
)]
struct Cli {
    /// Worker threads. The current implementation is single-threaded; the
    /// flag is accepted so invocations are portable, and all outputs are
    /// identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct NormFlags {
    /// Keep Bengali numerals instead of stripping them.
    #[arg(long)]
    keep_numerals: bool,
    /// Skip URL/HTML-tag/emoji stripping.
    #[arg(long)]
    no_strip_web: bool,
}

impl NormFlags {
    fn config(&self) -> NormalizationConfig {
        let mut config = NormalizationConfig::default();
        config.strip_numerals = !self.keep_numerals;
        config.strip_web_artifacts = !self.no_strip_web;
        config
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normalize raw text: web-artifact stripping, NFKC, Bengali-only
    /// filtering, whitespace collapse. One document per line.
    Normalize {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long, value_name = "FILE")]
        out: String,
        #[command(flatten)]
        norm: NormFlags,
    },
    /// Print space-separated grapheme clusters, one line per input line
    /// (debugging aid; input is assumed normalized).
    Graphemes {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
    },
    /// Stratified train/val/test split of a labeled corpus.
    Split {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        /// Input format: csv (text,label header) or jsonl ({"text","label"}).
        #[arg(long, default_value = "csv")]
        format: CorpusFormat,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Train/val/test ratios, comma-separated, summing to 1.
        #[arg(long, default_value = "0.7,0.1,0.2", value_name = "R,R,R")]
        ratios: String,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        #[command(flatten)]
        norm: NormFlags,
    },
    /// Train a BPE model on a one-sentence-per-line corpus.
    Train {
        #[arg(long, value_name = "FILE")]
        corpus: String,
        #[arg(long, default_value_t = 8000)]
        vocab_size: usize,
        /// bengali (suffix-constrained merges) or generic (unconstrained).
        #[arg(long, default_value = "bengali")]
        mode: ConstraintMode,
        /// Suffix lexicon file (one surface per line); default: bundled.
        #[arg(long, value_name = "FILE")]
        suffixes: Option<PathBuf>,
        /// Stop merging when the best pair falls below this frequency.
        #[arg(long, default_value_t = 2)]
        min_pair_freq: u64,
        #[arg(long, value_name = "MODEL")]
        out: PathBuf,
        #[command(flatten)]
        norm: NormFlags,
    },
    /// Encode text with a trained model. Tokens are space-separated; a token
    /// continued by the next token of the same word carries a trailing `@@`.
    Encode {
        #[arg(long, value_name = "MODEL")]
        model: PathBuf,
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long, value_name = "FILE", default_value = "-")]
        out: String,
        /// Print vocabulary ids instead of surfaces (not decodable).
        #[arg(long)]
        ids: bool,
        #[command(flatten)]
        norm: NormFlags,
    },
    /// Decode `encode` output back to normalized text.
    Decode {
        #[arg(long, value_name = "MODEL")]
        model: PathBuf,
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long, value_name = "FILE", default_value = "-")]
        out: String,
    },
    /// Tokenization stats and throughput for several tokenizers on one
    /// labeled corpus; optionally the downstream classification eval too.
    Bench {
        #[arg(long, value_name = "FILE")]
        corpus: String,
        #[arg(long, default_value = "csv")]
        format: CorpusFormat,
        /// Comma-separated subset of whitespace,bengali,generic.
        #[arg(long, value_delimiter = ',', default_value = "whitespace")]
        tokenizers: Vec<TokenizerKind>,
        /// Model files consumed, in order, by the bengali/generic entries.
        #[arg(long, value_delimiter = ',', value_name = "MODEL")]
        models: Vec<PathBuf>,
        #[arg(long, value_name = "FILE")]
        report: String,
        #[arg(long)]
        with_eval: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Samples encoded untimed before measurement.
        #[arg(long, default_value_t = 100)]
        warmup: usize,
        /// Timed passes; the median pass is reported.
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[command(flatten)]
        norm: NormFlags,
    },
    /// TF-IDF + logistic-regression evaluation of one tokenizer.
    Eval {
        #[arg(long, value_name = "FILE")]
        corpus: String,
        #[arg(long, default_value = "csv")]
        format: CorpusFormat,
        #[arg(long)]
        tokenizer: TokenizerKind,
        #[arg(long, value_name = "MODEL")]
        model: Option<PathBuf>,
        /// Inverse-regularization grid, comma-separated.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_C_GRID)]
        grid: Vec<f64>,
        #[arg(long, value_name = "FILE")]
        report: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        norm: NormFlags,
    },
    /// End to end: split a labeled corpus, train bengali and generic models
    /// on the train split, and benchmark all three tokenizers with eval.
    Pipeline {
        /// Labeled corpus; omit to use the bundled synthetic stand-in.
        #[arg(long, value_name = "FILE")]
        corpus: Option<String>,
        #[arg(long, default_value = "csv")]
        format: CorpusFormat,
        #[arg(long, default_value_t = 8000)]
        vocab_size: usize,
        #[arg(long, default_value_t = 2)]
        min_pair_freq: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        report: String,
        /// Directory for the trained model files; omitted → models are not
        /// persisted.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        norm: NormFlags,
    },
    /// Generate deterministic synthetic Bengali text (sentences or a labeled
    /// CSV corpus).
    Synth {
        /// Number of plain sentences to emit (one per line).
        #[arg(long, conflicts_with = "per_class")]
        sentences: Option<usize>,
        /// Emit a labeled text,label CSV with this many documents per topic.
        #[arg(long)]
        per_class: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_name = "FILE", default_value = "-")]
        out: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------------------
// Plumbing

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        std::io::stdout()
            .write_all(content.as_bytes())
            .context("writing stdout")?;
        Ok(())
    } else {
        fs::write(path, content).with_context(|| format!("writing {path}"))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Everything needed to reproduce an artifact-producing run byte-for-byte.
#[derive(Serialize)]
struct RunManifest {
    subcommand: &'static str,
    version: &'static str,
    config: serde_json::Value,
    /// sha256 of each input as read (raw bytes for files, text for stdin).
    input_fingerprints: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    threads: usize,
}

/// Writes `<artifact>.manifest.json` next to the artifact; stdout artifacts
/// get no manifest.
fn write_manifest(artifact: &str, manifest: &RunManifest) -> Result<()> {
    if artifact == "-" {
        return Ok(());
    }
    let path = format!("{artifact}.manifest.json");
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    fs::write(&path, json).with_context(|| format!("writing {path}"))?;
    Ok(())
}

fn input_fingerprint(name: &str, content: &str) -> BTreeMap<String, String> {
    BTreeMap::from([(name.to_string(), sha256_hex(content.as_bytes()))])
}

fn normalize_lines(raw: &str, config: &NormalizationConfig) -> Vec<NormalizedText> {
    raw.lines().map(|line| clean(line, config)).collect()
}

fn parse_ratios(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("parsing ratios '{s}'"))?;
    if parts.len() != 3 {
        bail!("expected three comma-separated ratios, got {}", parts.len());
    }
    if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 || parts.iter().any(|&r| r < 0.0) {
        bail!("ratios must be non-negative and sum to 1");
    }
    Ok((parts[0], parts[1], parts[2]))
}

fn load_profile(mode: ConstraintMode, suffixes: &Option<PathBuf>) -> Result<ConstraintProfile> {
    Ok(match mode {
        ConstraintMode::Generic => ConstraintProfile::generic(),
        ConstraintMode::Bengali => match suffixes {
            None => ConstraintProfile::bengali_default(),
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                ConstraintProfile::bengali(parse_suffix_lexicon(&text))
            }
        },
    })
}

fn load_split_corpus(
    path: &str,
    format: CorpusFormat,
    config: &NormalizationConfig,
    seed: u64,
) -> Result<(LabeledCorpus, String)> {
    let raw = load_labeled_corpus(Path::new(path), format, config)?;
    report_ingest(&raw);
    let fingerprint = sha256_hex(&fs::read(path).with_context(|| format!("reading {path}"))?);
    let corpus = stratified_split(raw, (0.7, 0.1, 0.2), seed)?;
    Ok((corpus, fingerprint))
}

fn report_ingest(raw: &RawCorpus) {
    if raw.dropped_count > 0 {
        eprintln!(
            "note: dropped {} row(s) that normalized to empty text",
            raw.dropped_count
        );
    }
    for (line, message) in &raw.malformed {
        eprintln!("note: skipped malformed row at line {line}: {message}");
    }
}

/// Builds tokenizer handles, assigning `--models` files in order to the
/// entries that need one.
fn build_handles(
    tokenizers: &[TokenizerKind],
    models: &[PathBuf],
    norm_fingerprint: &str,
) -> Result<Vec<TokenizerHandle>> {
    let mut model_iter = models.iter();
    let mut handles = Vec::with_capacity(tokenizers.len());
    for &kind in tokenizers {
        let handle = match kind {
            TokenizerKind::Whitespace => TokenizerHandle::whitespace(),
            TokenizerKind::BengaliBpe | TokenizerKind::GenericBpe => {
                let path = model_iter.next().ok_or_else(|| {
                    anyhow!("tokenizer '{kind}' needs a model file; pass one via --models")
                })?;
                let model = load_model(path)?;
                if model.norm_fingerprint != norm_fingerprint {
                    bail!(
                        "model {} was trained under a different normalization \
                         configuration than this run uses",
                        path.display()
                    );
                }
                TokenizerHandle {
                    kind,
                    model: Some(model),
                }
            }
        };
        handles.push(handle);
    }
    if model_iter.next().is_some() {
        bail!("more --models files than tokenizers that take one");
    }
    Ok(handles)
}

fn write_report(path: &str, report: &BenchmarkReport) -> Result<()> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    write_output(path, &format!("{json}\n"))
}

// ---------------------------------------------------------------------------
// Token text format

fn render_tokens(seq: &TokenSequence, ids: bool) -> String {
    if ids {
        return seq
            .ids()
            .iter()
            .map(|id| id.to_string())
            .collect::<Vec<_>>()
            .join(" ");
    }
    let boundaries: std::collections::BTreeSet<usize> =
        seq.word_boundaries.iter().copied().collect();
    let mut parts = Vec::with_capacity(seq.tokens.len());
    for (i, token) in seq.tokens.iter().enumerate() {
        let continued = i + 1 < seq.tokens.len() && !boundaries.contains(&(i + 1));
        if continued {
            parts.push(format!("{}{CONTINUATION}", token.surface));
        } else {
            parts.push(token.surface.clone());
        }
    }
    parts.join(" ")
}

fn parse_tokens(line: &str, vocab: &BTreeMap<String, u32>) -> TokenSequence {
    let mut seq = TokenSequence::default();
    let mut starts_word = true;
    for piece in line.split(' ').filter(|p| !p.is_empty()) {
        let (surface, continued) = match piece.strip_suffix(CONTINUATION) {
            Some(stripped) => (stripped, true),
            None => (piece, false),
        };
        if starts_word {
            seq.word_boundaries.push(seq.tokens.len());
        }
        seq.tokens.push(Token {
            surface: surface.to_string(),
            id: vocab.get(surface).copied().unwrap_or(UNK_ID),
        });
        starts_word = !continued;
    }
    seq
}

// ---------------------------------------------------------------------------
// Subcommand bodies

fn run(cli: Cli) -> Result<()> {
    let threads = cli.threads;
    match cli.command {
        Command::Normalize { input, out, norm } => {
            let config = norm.config();
            let raw = read_input(&input)?;
            let lines: Vec<String> = raw.lines().map(|l| clean(l, &config).content).collect();
            write_output(&out, &(lines.join("\n") + "\n"))?;
            write_manifest(
                &out,
                &RunManifest {
                    subcommand: "normalize",
                    version: VERSION,
                    config: serde_json::to_value(&config)?,
                    input_fingerprints: input_fingerprint(&input, &raw),
                    seed: None,
                    threads,
                },
            )
        }
        Command::Graphemes { input } => {
            let raw = read_input(&input)?;
            let mut out = String::new();
            for line in raw.lines() {
                let clusters: Vec<String> = line
                    .split(' ')
                    .filter(|w| !w.is_empty())
                    .flat_map(|w| segment_str(w).into_iter().map(|c| c.surface))
                    .collect();
                out.push_str(&clusters.join(" "));
                out.push('\n');
            }
            write_output("-", &out)
        }
        Command::Split {
            input,
            format,
            seed,
            ratios,
            out_dir,
            norm,
        } => {
            let config = norm.config();
            let ratios = parse_ratios(&ratios)?;
            let raw_bytes = fs::read(&input).with_context(|| format!("reading {input}"))?;
            let raw = load_labeled_corpus(Path::new(&input), format, &config)?;
            report_ingest(&raw);
            let corpus = stratified_split(raw, ratios, seed)?;
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            for split in Split::ALL {
                let path = out_dir.join(format!("{}.csv", split.name()));
                let mut writer = csv::Writer::from_path(&path)
                    .with_context(|| format!("writing {}", path.display()))?;
                writer.write_record(["text", "label"])?;
                for sample in corpus.split_samples(split) {
                    writer.write_record([
                        sample.text.content.as_str(),
                        corpus.label_names[sample.label as usize].as_str(),
                    ])?;
                }
                writer.flush()?;
            }
            let manifest_path = out_dir.join("split");
            write_manifest(
                &manifest_path.display().to_string(),
                &RunManifest {
                    subcommand: "split",
                    version: VERSION,
                    config: serde_json::json!({
                        "normalization": serde_json::to_value(&config)?,
                        "ratios": [ratios.0, ratios.1, ratios.2],
                        "format": format!("{format:?}").to_lowercase(),
                    }),
                    input_fingerprints: BTreeMap::from([(input, sha256_hex(&raw_bytes))]),
                    seed: Some(seed),
                    threads,
                },
            )
        }
        Command::Train {
            corpus,
            vocab_size,
            mode,
            suffixes,
            min_pair_freq,
            out,
            norm,
        } => {
            let config = norm.config();
            let raw = read_input(&corpus)?;
            let lines = normalize_lines(&raw, &config);
            let profile = load_profile(mode, &suffixes)?;
            let model = bpe::train(&lines, vocab_size, profile, min_pair_freq)?;
            save_model(&model, &out)?;
            eprintln!(
                "trained {} model: alphabet {}, merges {}, vocab {}",
                mode,
                model.alphabet.len(),
                model.merges.len(),
                model.vocab.len()
            );
            write_manifest(
                &out.display().to_string(),
                &RunManifest {
                    subcommand: "train",
                    version: VERSION,
                    config: serde_json::json!({
                        "normalization": serde_json::to_value(&config)?,
                        "vocab_size": vocab_size,
                        "mode": mode.to_string(),
                        "min_pair_freq": min_pair_freq,
                        "suffix_lexicon_hash": model.profile.lexicon_hash(),
                        "config_fingerprint": model.config_fingerprint,
                    }),
                    input_fingerprints: input_fingerprint(&corpus, &raw),
                    seed: None,
                    threads,
                },
            )
        }
        Command::Encode {
            model,
            input,
            out,
            ids,
            norm,
        } => {
            let config = norm.config();
            let model = load_model(&model)?;
            if config.fingerprint() != model.norm_fingerprint {
                bail!(
                    "normalization flags differ from the model's training \
                     configuration; re-run with matching flags"
                );
            }
            let raw = read_input(&input)?;
            let mut encoder = bpe::Encoder::new(&model);
            let mut rendered = String::new();
            for line in raw.lines() {
                let seq = encoder.encode(&clean(line, &config))?;
                rendered.push_str(&render_tokens(&seq, ids));
                rendered.push('\n');
            }
            write_output(&out, &rendered)?;
            write_manifest(
                &out,
                &RunManifest {
                    subcommand: "encode",
                    version: VERSION,
                    config: serde_json::json!({
                        "normalization": serde_json::to_value(&config)?,
                        "model_fingerprint": model.config_fingerprint,
                        "ids": ids,
                    }),
                    input_fingerprints: input_fingerprint(&input, &raw),
                    seed: None,
                    threads,
                },
            )
        }
        Command::Decode { model, input, out } => {
            let model = load_model(&model)?;
            let raw = read_input(&input)?;
            let mut rendered = String::new();
            for line in raw.lines() {
                let seq = parse_tokens(line, &model.vocab);
                rendered.push_str(&bpe::decode(&seq));
                rendered.push('\n');
            }
            write_output(&out, &rendered)
        }
        Command::Bench {
            corpus,
            format,
            tokenizers,
            models,
            report,
            with_eval,
            seed,
            warmup,
            repeats,
            norm,
        } => {
            let config = norm.config();
            let (labeled, fingerprint) = load_split_corpus(&corpus, format, &config, seed)?;
            let handles = build_handles(&tokenizers, &models, &config.fingerprint())?;
            let bench_report = compare(&labeled, &handles, with_eval, warmup, repeats)?;
            write_report(&report, &bench_report)?;
            write_manifest(
                &report,
                &RunManifest {
                    subcommand: "bench",
                    version: VERSION,
                    config: serde_json::json!({
                        "normalization": serde_json::to_value(&config)?,
                        "tokenizers": tokenizers.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        "with_eval": with_eval,
                        "warmup": warmup,
                        "repeats": repeats,
                    }),
                    input_fingerprints: BTreeMap::from([(corpus, fingerprint)]),
                    seed: Some(seed),
                    threads,
                },
            )
        }
        Command::Eval {
            corpus,
            format,
            tokenizer,
            model,
            grid,
            report,
            seed,
            norm,
        } => {
            let config = norm.config();
            let (labeled, fingerprint) = load_split_corpus(&corpus, format, &config, seed)?;
            let models: Vec<PathBuf> = model.into_iter().collect();
            let handles = build_handles(&[tokenizer], &models, &config.fingerprint())?;
            let eval_report = tune_and_evaluate(&labeled, &handles[0], &grid)?;
            let json = serde_json::to_string_pretty(&eval_report).expect("report serializes");
            write_output(&report, &format!("{json}\n"))?;
            write_manifest(
                &report,
                &RunManifest {
                    subcommand: "eval",
                    version: VERSION,
                    config: serde_json::json!({
                        "normalization": serde_json::to_value(&config)?,
                        "tokenizer": tokenizer.to_string(),
                        "grid": grid,
                    }),
                    input_fingerprints: BTreeMap::from([(corpus, fingerprint)]),
                    seed: Some(seed),
                    threads,
                },
            )
        }
        Command::Pipeline {
            corpus,
            format,
            vocab_size,
            min_pair_freq,
            seed,
            report,
            out_dir,
            norm,
        } => {
            let config = norm.config();
            let (labeled, fingerprints) = match &corpus {
                Some(path) => {
                    let (labeled, fp) = load_split_corpus(path, format, &config, seed)?;
                    (labeled, BTreeMap::from([(path.clone(), fp)]))
                }
                None => {
                    eprintln!("no corpus given; using the bundled synthetic stand-in");
                    let raw = synth::labeled_raw(250, seed);
                    let labeled = stratified_split(raw, (0.7, 0.1, 0.2), seed)?;
                    (
                        labeled,
                        BTreeMap::from([("<synthetic>".to_string(), format!("seed:{seed}"))]),
                    )
                }
            };

            let train_texts: Vec<NormalizedText> = labeled
                .split_samples(Split::Train)
                .map(|s| s.text.clone())
                .collect();
            eprintln!(
                "training on {} documents (vocab target {vocab_size})",
                train_texts.len()
            );
            let bengali = bpe::train(
                &train_texts,
                vocab_size,
                ConstraintProfile::bengali_default(),
                min_pair_freq,
            )?;
            let generic = bpe::train(
                &train_texts,
                vocab_size,
                ConstraintProfile::generic(),
                min_pair_freq,
            )?;
            if let Some(dir) = &out_dir {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                save_model(&bengali, &dir.join("bengali.model"))?;
                save_model(&generic, &dir.join("generic.model"))?;
            }

            let handles = vec![
                TokenizerHandle::whitespace(),
                TokenizerHandle::bengali_bpe(bengali),
                TokenizerHandle::generic_bpe(generic),
            ];
            eprintln!("benchmarking {} tokenizers with eval", handles.len());
            let bench_report = compare(&labeled, &handles, true, 100, 3)?;
            write_report(&report, &bench_report)?;
            for row in &bench_report.rows {
                let f1 = row
                    .eval
                    .as_ref()
                    .map(|e| format!("{:.4}", e.macro_f1))
                    .unwrap_or_else(|| "-".into());
                eprintln!(
                    "{:<12} tokens/char {:.4}  samples/sec {:>10.1}  macro-F1 {f1}",
                    row.kind, row.stats.tokens_per_char, row.throughput.samples_per_sec
                );
            }
            write_manifest(
                &report,
                &RunManifest {
                    subcommand: "pipeline",
                    version: VERSION,
                    config: serde_json::json!({
                        "normalization": serde_json::to_value(&config)?,
                        "vocab_size": vocab_size,
                        "min_pair_freq": min_pair_freq,
                    }),
                    input_fingerprints: fingerprints,
                    seed: Some(seed),
                    threads,
                },
            )
        }
        Command::Synth {
            sentences,
            per_class,
            seed,
            out,
        } => {
            let content = match (sentences, per_class) {
                (Some(n), None) => synth::sample_sentences(n, seed).join("\n") + "\n",
                (None, Some(k)) => synth::labeled_csv(k, seed),
                _ => bail!("pass exactly one of --sentences or --per-class"),
            };
            write_output(&out, &content)?;
            write_manifest(
                &out,
                &RunManifest {
                    subcommand: "synth",
                    version: VERSION,
                    config: serde_json::json!({
                        "sentences": sentences,
                        "per_class": per_class,
                    }),
                    input_fingerprints: BTreeMap::new(),
                    seed: Some(seed),
                    threads,
                },
            )
        }
    }
}
