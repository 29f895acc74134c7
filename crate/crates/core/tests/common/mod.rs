//! Shared helpers for integration tests: normalization shorthand, a
//! brute-force reference encoder, and deterministic random Bengali text.

use bengalibpe::bpe::{is_merge_allowed, BpeModel};
use bengalibpe::grapheme::segment_str;
use bengalibpe::normalizer::{clean, NormalizationConfig, NormalizedText};
use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn norm(s: &str) -> NormalizedText {
    clean(s, &NormalizationConfig::default())
}

/// Reference encoder: scans the merge table in rank order from scratch after
/// every application, applying the leftmost occurrence of the lowest-ranked
/// applicable pair. Quadratic and obviously correct; the fast encoder must
/// match it exactly.
pub fn oracle_encode_word(word: &str, model: &BpeModel) -> Vec<String> {
    let mut symbols: Vec<String> = segment_str(word).into_iter().map(|c| c.surface).collect();
    'outer: loop {
        for rule in &model.merges {
            for i in 0..symbols.len().saturating_sub(1) {
                if symbols[i] != rule.left || symbols[i + 1] != rule.right {
                    continue;
                }
                let word_final = i + 2 == symbols.len();
                if !is_merge_allowed(&rule.left, &rule.right, word_final, &model.profile) {
                    continue;
                }
                symbols[i] = format!("{}{}", symbols[i], symbols[i + 1]);
                symbols.remove(i + 1);
                continue 'outer;
            }
        }
        break;
    }
    symbols
}

/// A random string over the Bengali block plus joiners, spaces, and danda;
/// raw material for fuzzing (callers normalize it).
pub fn random_bengali_string(rng: &mut ChaCha8Rng, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    let choice = Uniform::new(0u32, 100);
    (0..len)
        .map(|_| {
            let c = match choice.sample(rng) {
                0..=69 => rng.gen_range(0x0980..=0x09FFu32),
                70..=84 => 0x0020,
                85..=89 => 0x0964,
                90..=94 => 0x200C + rng.gen_range(0..2),
                _ => rng.gen_range(0x0021..=0x007Eu32),
            };
            char::from_u32(c).unwrap_or(' ')
        })
        .collect()
}
