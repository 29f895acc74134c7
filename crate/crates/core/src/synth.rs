//! Deterministic synthetic Bengali corpus generator.
//!
//! Produces news-flavored sentences from per-topic root lexicons with
//! inflectional suffixes and occasional compounds, already passed through the
//! default normalization pipeline. Used for the bundled sample corpus, the
//! labeled classification stand-in, and the test suite; not a substitute for
//! real data beyond desk-scale checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::RawCorpus;
use crate::normalizer::{clean, NormalizationConfig};

pub const TOPICS: [&str; 8] = [
    "politics",
    "sports",
    "economy",
    "entertainment",
    "education",
    "national",
    "international",
    "science_technology",
];

const TOPIC_ROOTS: [&[&str]; 8] = [
    &[
        "সরকার", "নির্বাচন", "মন্ত্রী", "সংসদ", "রাজনীতি", "ভোট", "আইন", "নেতা", "প্রধানমন্ত্রী",
        "বিরোধী", "আন্দোলন", "সমাবেশ",
    ],
    &[
        "খেলা", "ক্রিকেট", "ফুটবল", "ম্যাচ", "গোল", "জয়", "খেলোয়াড়", "টুর্নামেন্ট", "রান",
        "উইকেট", "অধিনায়ক", "মাঠ",
    ],
    &[
        "অর্থনীতি", "বাজার", "টাকা", "ব্যাংক", "বিনিয়োগ", "মূল্য", "রপ্তানি", "আমদানি", "শেয়ার",
        "মুদ্রা", "বাণিজ্য", "শিল্প",
    ],
    &[
        "চলচ্চিত্র", "গান", "শিল্পী", "নাটক", "সিনেমা", "অভিনেতা", "সংগীত", "তারকা", "পুরস্কার",
        "নায়ক", "পরিচালক", "দর্শক",
    ],
    &[
        "শিক্ষা", "বিদ্যালয়", "ছাত্র", "পরীক্ষা", "বিশ্ববিদ্যালয়", "শিক্ষক", "ফলাফল", "ভর্তি",
        "পাঠ", "ক্লাস", "বৃত্তি", "পাঠ্যবই",
    ],
    &[
        "দেশ", "জাতি", "ঢাকা", "সমাজ", "জনগণ", "প্রশাসন", "জেলা", "গ্রাম", "শহর", "নাগরিক",
        "উন্নয়ন", "প্রকল্প",
    ],
    &[
        "বিশ্ব", "আন্তর্জাতিক", "আমেরিকা", "চীন", "ভারত", "ইউরোপ", "জাতিসংঘ", "চুক্তি", "সীমান্ত",
        "কূটনীতি", "সম্মেলন", "রাষ্ট্রদূত",
    ],
    &[
        "বিজ্ঞান", "প্রযুক্তি", "কম্পিউটার", "ইন্টারনেট", "গবেষণা", "মোবাইল", "সফটওয়্যার", "তথ্য",
        "যন্ত্র", "উদ্ভাবন", "রোবট", "উপগ্রহ",
    ],
];

const SHARED_ROOTS: &[&str] = &[
    "বাংলা", "ভাষা", "ভাষাভাষী", "মানুষ", "সময়", "বছর", "দিন", "কাজ", "খবর", "আজ", "গর্বিত",
    "আমরা", "তারা", "অনেক", "নতুন", "বড়", "ভালো", "এই", "সেই", "আরও", "প্রতিবেদন", "সংবাদ",
];

// Suffixes drawn during generation; all members of the default lexicon.
const GEN_SUFFIXES: &[&str] = &["রা", "টা", "টি", "গুলো", "দের", "কে", "ের", "তে", "র"];

fn make_word(rng: &mut ChaCha8Rng, topic_roots: &[&str]) -> String {
    let pool = if rng.gen_bool(0.7) {
        topic_roots
    } else {
        SHARED_ROOTS
    };
    let mut word = (*pool.choose(rng).unwrap()).to_string();
    if rng.gen_bool(0.10) {
        word.push_str(pool.choose(rng).unwrap());
    }
    if rng.gen_bool(0.60) {
        word.push_str(GEN_SUFFIXES.choose(rng).unwrap());
    }
    word
}

fn make_sentence(rng: &mut ChaCha8Rng, topic_roots: &[&str], config: &NormalizationConfig) -> String {
    let len = rng.gen_range(6..=14);
    let mut words: Vec<String> = (0..len).map(|_| make_word(rng, topic_roots)).collect();
    // Guarantee plural -রা forms show up steadily.
    if rng.gen_bool(0.25) {
        let pos = rng.gen_range(0..words.len());
        words[pos] = format!("{}ভাষীরা", ["বাংলা", "ভাষা", ""].choose(rng).unwrap());
    }
    let mut sentence = words.join(" ");
    sentence.push('।');
    clean(&sentence, config).content
}

/// `n` normalized sentences drawn across all topics.
pub fn sample_sentences(n: usize, seed: u64) -> Vec<String> {
    let config = NormalizationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| make_sentence(&mut rng, TOPIC_ROOTS[i % TOPIC_ROOTS.len()], &config))
        .collect()
}

/// `per_class` labeled documents per topic, each 2–4 sentences.
pub fn labeled_documents(per_class: usize, seed: u64) -> Vec<(String, String)> {
    let config = NormalizationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E3779B97F4A7C15);
    let mut docs = Vec::with_capacity(per_class * TOPICS.len());
    for (topic, roots) in TOPICS.iter().zip(TOPIC_ROOTS) {
        for _ in 0..per_class {
            let n_sentences = rng.gen_range(2..=4);
            let text = (0..n_sentences)
                .map(|_| make_sentence(&mut rng, roots, &config))
                .collect::<Vec<_>>()
                .join(" ");
            docs.push((text, (*topic).to_string()));
        }
    }
    docs
}

/// Same documents as CSV with a `text,label` header.
pub fn labeled_csv(per_class: usize, seed: u64) -> String {
    let mut out = String::from("text,label\n");
    for (text, label) in labeled_documents(per_class, seed) {
        out.push_str(&format!("\"{text}\",{label}\n"));
    }
    out
}

/// Same documents as an in-memory [`RawCorpus`].
pub fn labeled_raw(per_class: usize, seed: u64) -> RawCorpus {
    let config = NormalizationConfig::default();
    let samples = labeled_documents(per_class, seed)
        .into_iter()
        .map(|(text, label)| {
            let id = TOPICS.iter().position(|t| *t == label).unwrap() as u32;
            (clean(&text, &config), id)
        })
        .collect();
    RawCorpus {
        samples,
        label_names: TOPICS.iter().map(|t| t.to_string()).collect(),
        dropped_count: 0,
        malformed: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentences_are_normalization_fixed_points() {
        let config = NormalizationConfig::default();
        for line in sample_sentences(50, 42) {
            assert_eq!(clean(&line, &config).content, line);
            assert!(!line.is_empty());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(sample_sentences(20, 7), sample_sentences(20, 7));
        assert_ne!(sample_sentences(20, 7), sample_sentences(20, 8));
        assert_eq!(labeled_csv(3, 1), labeled_csv(3, 1));
    }

    #[test]
    fn labeled_documents_cover_all_topics() {
        let docs = labeled_documents(5, 3);
        assert_eq!(docs.len(), 40);
        for topic in TOPICS {
            assert_eq!(docs.iter().filter(|(_, l)| l == topic).count(), 5);
        }
    }

    #[test]
    fn plural_forms_are_frequent() {
        let lines = sample_sentences(500, 42);
        let count: usize = lines.iter().map(|l| l.matches("ভাষীরা").count()).sum();
        assert!(count >= 50, "only {count} plural forms in 500 sentences");
    }
}
