//! Model file persistence.
//!
//! Single UTF-8 file: a `key: value` header block, a `[suffixes]` section
//! (the constraint lexicon, one surface per line), a `[vocab]` section
//! (`surface<TAB>id`), and a `[merges]` section (`left<TAB>right`, rank
//! order). Surfaces contain no tabs or newlines by construction, so no
//! escaping is needed. Saving the same model twice is byte-identical, and
//! loading re-derives and re-checks every structural invariant instead of
//! trusting counts in the file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::bpe::{
    BpeModel, ConstraintMode, ConstraintProfile, MergeRule, NUM_SPECIALS,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported model format version {found} (this build reads {supported})")]
    VersionMismatch { found: u32, supported: u32 },
    #[error("corrupt model file: {0}")]
    CorruptFile(String),
}

fn corrupt(msg: impl Into<String>) -> ModelIoError {
    ModelIoError::CorruptFile(msg.into())
}

/// Serializes a model to its canonical text form.
pub fn render_model(model: &BpeModel) -> String {
    let mut out = String::new();
    writeln!(out, "format_version: {FORMAT_VERSION}").unwrap();
    writeln!(out, "mode: {}", model.profile.mode).unwrap();
    writeln!(out, "target_vocab_size: {}", model.target_vocab_size).unwrap();
    writeln!(out, "min_pair_freq: {}", model.min_pair_freq).unwrap();
    writeln!(out, "norm_fingerprint: {}", model.norm_fingerprint).unwrap();
    writeln!(out, "config_fingerprint: {}", model.config_fingerprint).unwrap();
    writeln!(out, "suffix_lexicon_hash: {}", model.profile.lexicon_hash()).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[suffixes]").unwrap();
    for s in &model.profile.suffix_lexicon {
        writeln!(out, "{s}").unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "[vocab]").unwrap();
    let mut by_id: Vec<(&String, &u32)> = model.vocab.iter().collect();
    by_id.sort_by_key(|(_, &id)| id);
    for (surface, id) in by_id {
        writeln!(out, "{surface}\t{id}").unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "[merges]").unwrap();
    for rule in &model.merges {
        writeln!(out, "{}\t{}", rule.left, rule.right).unwrap();
    }
    out
}

pub fn save_model(model: &BpeModel, path: &Path) -> Result<(), ModelIoError> {
    fs::write(path, render_model(model)).map_err(|source| ModelIoError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses the canonical text form back into a validated model.
pub fn parse_model(text: &str) -> Result<BpeModel, ModelIoError> {
    let mut header: BTreeMap<String, String> = BTreeMap::new();
    let mut suffixes: BTreeSet<String> = BTreeSet::new();
    let mut vocab: BTreeMap<String, u32> = BTreeMap::new();
    let mut merge_pairs: Vec<(String, String)> = Vec::new();
    let mut seen_sections: Vec<&str> = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        Header,
        Suffixes,
        Vocab,
        Merges,
    }
    let mut section = Section::Header;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.is_empty() {
            continue;
        }
        match line {
            "[suffixes]" => {
                section = Section::Suffixes;
                seen_sections.push("suffixes");
                continue;
            }
            "[vocab]" => {
                section = Section::Vocab;
                seen_sections.push("vocab");
                continue;
            }
            "[merges]" => {
                section = Section::Merges;
                seen_sections.push("merges");
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => {
                let (key, value) = line
                    .split_once(": ")
                    .ok_or_else(|| corrupt(format!("line {lineno}: malformed header line")))?;
                header.insert(key.to_string(), value.to_string());
            }
            Section::Suffixes => {
                suffixes.insert(line.to_string());
            }
            Section::Vocab => {
                let (surface, id) = line
                    .split_once('\t')
                    .ok_or_else(|| corrupt(format!("line {lineno}: malformed vocab line")))?;
                let id: u32 = id
                    .parse()
                    .map_err(|_| corrupt(format!("line {lineno}: bad vocab id '{id}'")))?;
                if vocab.insert(surface.to_string(), id).is_some() {
                    return Err(corrupt(format!("line {lineno}: duplicate vocab surface")));
                }
            }
            Section::Merges => {
                let (left, right) = line
                    .split_once('\t')
                    .ok_or_else(|| corrupt(format!("line {lineno}: malformed merge line")))?;
                merge_pairs.push((left.to_string(), right.to_string()));
            }
        }
    }

    if seen_sections != ["suffixes", "vocab", "merges"] {
        return Err(corrupt(format!(
            "expected sections [suffixes], [vocab], [merges]; found {seen_sections:?}"
        )));
    }

    let get = |key: &str| -> Result<&String, ModelIoError> {
        header
            .get(key)
            .ok_or_else(|| corrupt(format!("missing header field '{key}'")))
    };

    let version: u32 = get("format_version")?
        .parse()
        .map_err(|_| corrupt("bad format_version"))?;
    if version != FORMAT_VERSION {
        return Err(ModelIoError::VersionMismatch {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let mode: ConstraintMode = get("mode")?.parse().map_err(corrupt)?;
    let target_vocab_size: usize = get("target_vocab_size")?
        .parse()
        .map_err(|_| corrupt("bad target_vocab_size"))?;
    let min_pair_freq: u64 = get("min_pair_freq")?
        .parse()
        .map_err(|_| corrupt("bad min_pair_freq"))?;
    let norm_fingerprint = get("norm_fingerprint")?.clone();
    let config_fingerprint = get("config_fingerprint")?.clone();

    let profile = ConstraintProfile {
        mode,
        suffix_lexicon: suffixes,
        block_cross_word: true,
    };
    if get("suffix_lexicon_hash")? != &profile.lexicon_hash() {
        return Err(corrupt("suffix_lexicon_hash does not match [suffixes] section"));
    }

    // Alphabet is re-derived from the id layout, not trusted from a count.
    let merge_count = merge_pairs.len();
    let alphabet_len = vocab
        .len()
        .checked_sub(NUM_SPECIALS + merge_count)
        .ok_or_else(|| corrupt("vocab smaller than specials + merges"))?;
    let merge_base = NUM_SPECIALS + alphabet_len;
    let mut alphabet: BTreeSet<String> = BTreeSet::new();
    for (surface, &id) in &vocab {
        let id = id as usize;
        if id >= NUM_SPECIALS && id < merge_base {
            alphabet.insert(surface.clone());
        }
    }

    let merges: Vec<MergeRule> = merge_pairs
        .into_iter()
        .enumerate()
        .map(|(rank, (left, right))| MergeRule {
            left,
            right,
            rank: rank as u32,
            // Not persisted by the file format; observationally irrelevant.
            frequency_at_merge: 0,
        })
        .collect();

    let model = BpeModel {
        alphabet,
        merges,
        vocab,
        target_vocab_size,
        min_pair_freq,
        profile,
        norm_fingerprint,
        config_fingerprint,
    };
    model.validate().map_err(corrupt)?;
    Ok(model)
}

pub fn load_model(path: &Path) -> Result<BpeModel, ModelIoError> {
    let text = fs::read_to_string(path).map_err(|source| ModelIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpe::{encode, train};
    use crate::normalizer::{clean, NormalizationConfig, NormalizedText};

    fn norm(s: &str) -> NormalizedText {
        clean(s, &NormalizationConfig::default())
    }

    fn toy_model() -> BpeModel {
        train(&[norm("কলম কলম কলা")], 100, ConstraintProfile::generic(), 2).unwrap()
    }

    #[test]
    fn save_load_save_is_byte_identical() {
        let model = toy_model();
        let first = render_model(&model);
        let loaded = parse_model(&first).unwrap();
        let second = render_model(&loaded);
        assert_eq!(first, second);
    }

    #[test]
    fn merges_serialize_in_rank_order() {
        let text = render_model(&toy_model());
        let merges_section = text.split("[merges]\n").nth(1).unwrap();
        assert_eq!(merges_section, "ক\tল\nকল\tম\n");
    }

    #[test]
    fn zero_merge_model_round_trips() {
        let model = train(&[norm("ক খ গ")], 10, ConstraintProfile::generic(), 2).unwrap();
        assert!(model.merges.is_empty());
        let loaded = parse_model(&render_model(&model)).unwrap();
        assert_eq!(render_model(&loaded), render_model(&model));
    }

    #[test]
    fn loaded_model_encodes_identically() {
        let model = train(
            &[norm("ভাষা ভাষার ভাষাভাষীরা কলম কলমের কলা")],
            60,
            ConstraintProfile::bengali_default(),
            2,
        )
        .unwrap();
        let loaded = parse_model(&render_model(&model)).unwrap();
        for line in ["ভাষাভাষীরা কলম", "কলা ভাষার", "অজানা শব্দ"] {
            let text = norm(line);
            assert_eq!(
                encode(&text, &model).unwrap(),
                encode(&text, &loaded).unwrap()
            );
        }
    }

    #[test]
    fn truncated_merges_section_is_corrupt() {
        let model = toy_model();
        let text = render_model(&model);
        // Drop the last merge line: the merge output id layout no longer
        // matches the vocab.
        let truncated = text.trim_end().rsplit_once('\n').unwrap().0.to_string();
        assert!(matches!(
            parse_model(&truncated),
            Err(ModelIoError::CorruptFile(_))
        ));
    }

    #[test]
    fn future_format_version_is_rejected() {
        let text = render_model(&toy_model()).replace("format_version: 1", "format_version: 2");
        assert!(matches!(
            parse_model(&text),
            Err(ModelIoError::VersionMismatch { found: 2, .. })
        ));
    }

    #[test]
    fn tampered_lexicon_hash_is_corrupt() {
        let model = train(
            &[norm("ভাষা ভাষার")],
            50,
            ConstraintProfile::bengali_default(),
            2,
        )
        .unwrap();
        let text = render_model(&model).replace("[suffixes]\n", "[suffixes]\nXYZ\n");
        assert!(matches!(
            parse_model(&text),
            Err(ModelIoError::CorruptFile(_))
        ));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_model(Path::new("/nonexistent/model.txt")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/model.txt"));
    }

    #[test]
    fn save_writes_loadable_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.model");
        let model = toy_model();
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(render_model(&loaded), render_model(&model));
    }
}
