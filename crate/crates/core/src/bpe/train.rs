//! Merge-table training.
//!
//! Pair counting is word-frequency weighted: each distinct pretokenized unit
//! is processed once and its pair contributions scaled by its corpus count.
//! Counts are maintained incrementally (only words containing the merged
//! pair are revisited) with a lazy max-heap for candidate selection, so the
//! result is identical to a full re-count each round while staying fast at
//! desk scale.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, BTreeMap, BTreeSet, HashMap, HashSet};

use crate::grapheme::segment_str;
use crate::normalizer::NormalizedText;

use super::{
    is_merge_allowed, pretokenize, BpeModel, ConstraintProfile, MergeRule, TrainError,
    NUM_SPECIALS, PAD_ID, PAD_SURFACE, UNK_ID, UNK_SURFACE,
};

type Pair = (String, String);

// Max-heap entry: highest count first, ties broken toward the
// lexicographically smallest (left, right).
#[derive(Debug, PartialEq, Eq)]
struct Candidate {
    count: u64,
    pair: Pair,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| other.pair.cmp(&self.pair))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Word {
    symbols: Vec<String>,
    count: u64,
}

fn allowed_pairs<'a>(
    symbols: &'a [String],
    profile: &'a ConstraintProfile,
) -> impl Iterator<Item = (&'a String, &'a String, bool)> + 'a {
    let len = symbols.len();
    symbols.windows(2).enumerate().filter_map(move |(i, w)| {
        let word_final = i + 2 == len;
        if is_merge_allowed(&w[0], &w[1], word_final, profile) {
            Some((&w[0], &w[1], word_final))
        } else {
            None
        }
    })
}

/// Trains a BPE model. Deterministic: identical corpus, target, profile, and
/// `min_pair_freq` always yield byte-identical merge tables.
pub fn train(
    corpus: &[NormalizedText],
    target_vocab_size: usize,
    profile: ConstraintProfile,
    min_pair_freq: u64,
) -> Result<BpeModel, TrainError> {
    if corpus.is_empty() || corpus.iter().all(|t| t.content.is_empty()) {
        return Err(TrainError::EmptyCorpus);
    }
    let norm_fingerprint = corpus[0].norm_fingerprint.clone();

    // Distinct pretokenized units with corpus frequency; BTreeMap fixes the
    // word indexing order.
    let mut unit_counts: BTreeMap<String, u64> = BTreeMap::new();
    for line in corpus {
        for unit in pretokenize(line) {
            *unit_counts.entry(unit.surface).or_insert(0) += 1;
        }
    }

    let mut words: Vec<Word> = Vec::with_capacity(unit_counts.len());
    let mut alphabet: BTreeSet<String> = BTreeSet::new();
    for (surface, count) in unit_counts {
        let symbols: Vec<String> = segment_str(&surface)
            .into_iter()
            .map(|c| c.surface)
            .collect();
        alphabet.extend(symbols.iter().cloned());
        words.push(Word { symbols, count });
    }

    if target_vocab_size <= alphabet.len() {
        return Err(TrainError::TargetTooSmall {
            target: target_vocab_size,
            alphabet: alphabet.len(),
        });
    }

    let mut pair_counts: HashMap<Pair, u64> = HashMap::new();
    let mut pair_words: HashMap<Pair, BTreeSet<usize>> = HashMap::new();
    for (idx, word) in words.iter().enumerate() {
        for (l, r, _) in allowed_pairs(&word.symbols, &profile) {
            let pair = (l.clone(), r.clone());
            *pair_counts.entry(pair.clone()).or_insert(0) += word.count;
            pair_words.entry(pair).or_default().insert(idx);
        }
    }

    let mut heap: BinaryHeap<Candidate> = pair_counts
        .iter()
        .map(|(pair, &count)| Candidate {
            count,
            pair: pair.clone(),
        })
        .collect();

    let mut vocab_surfaces: HashSet<String> = alphabet.iter().cloned().collect();
    let mut merges: Vec<MergeRule> = Vec::new();
    // Pairs whose merged surface would collide with an existing vocab entry;
    // skipped permanently to keep surface → id a bijection.
    let mut banned: HashSet<Pair> = HashSet::new();

    while alphabet.len() + merges.len() < target_vocab_size {
        // Pop until the entry matches the live count (lazy deletion).
        let best = loop {
            match heap.pop() {
                None => break None,
                Some(cand) => {
                    if banned.contains(&cand.pair) {
                        continue;
                    }
                    if pair_counts.get(&cand.pair) == Some(&cand.count) && cand.count > 0 {
                        break Some(cand);
                    }
                }
            }
        };
        let Some(best) = best else { break };
        if best.count < min_pair_freq {
            break;
        }

        let merged = format!("{}{}", best.pair.0, best.pair.1);
        if vocab_surfaces.contains(&merged) {
            banned.insert(best.pair);
            continue;
        }

        let affected = pair_words.remove(&best.pair).unwrap_or_default();
        let mut touched: HashSet<Pair> = HashSet::new();
        for idx in affected {
            let word = &mut words[idx];
            let count = word.count;
            for (l, r, _) in allowed_pairs(&word.symbols, &profile) {
                let pair = (l.clone(), r.clone());
                if let Some(c) = pair_counts.get_mut(&pair) {
                    *c -= count.min(*c);
                }
                touched.insert(pair);
            }
            word.symbols = merge_in_word(&word.symbols, &best.pair, &profile);
            for (l, r, _) in allowed_pairs(&word.symbols, &profile) {
                let pair = (l.clone(), r.clone());
                *pair_counts.entry(pair.clone()).or_insert(0) += count;
                pair_words.entry(pair.clone()).or_default().insert(idx);
                touched.insert(pair);
            }
        }
        for pair in touched {
            let count = pair_counts.get(&pair).copied().unwrap_or(0);
            heap.push(Candidate { count, pair });
        }

        vocab_surfaces.insert(merged);
        merges.push(MergeRule {
            left: best.pair.0,
            right: best.pair.1,
            rank: merges.len() as u32,
            frequency_at_merge: best.count,
        });
    }

    let mut vocab: BTreeMap<String, u32> = BTreeMap::new();
    vocab.insert(UNK_SURFACE.to_string(), UNK_ID);
    vocab.insert(PAD_SURFACE.to_string(), PAD_ID);
    for (i, symbol) in alphabet.iter().enumerate() {
        vocab.insert(symbol.clone(), (NUM_SPECIALS + i) as u32);
    }
    let merge_base = NUM_SPECIALS + alphabet.len();
    for (i, rule) in merges.iter().enumerate() {
        vocab.insert(
            format!("{}{}", rule.left, rule.right),
            (merge_base + i) as u32,
        );
    }

    let config_fingerprint = BpeModel::compute_fingerprint(
        &norm_fingerprint,
        &profile,
        target_vocab_size,
        min_pair_freq,
    );
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
    debug_assert_eq!(model.validate(), Ok(()));
    Ok(model)
}

// Applies one merge rule to a symbol sequence, leftmost first,
// constraint-checked at each application site.
fn merge_in_word(symbols: &[String], pair: &Pair, profile: &ConstraintProfile) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        let can_merge = i + 1 < symbols.len()
            && symbols[i] == pair.0
            && symbols[i + 1] == pair.1
            && is_merge_allowed(&symbols[i], &symbols[i + 1], i + 2 == symbols.len(), profile);
        if can_merge {
            out.push(format!("{}{}", symbols[i], symbols[i + 1]));
            i += 2;
        } else {
            out.push(symbols[i].clone());
            i += 1;
        }
    }
    out
}
