//! TF-IDF featurization over token streams.
//!
//! Tokens are opaque units; the vocabulary holds all unigrams and adjacent
//! bigrams with document frequency ≥ `min_df`, indexed in sorted n-gram
//! order. Weights use the smoothed idf `ln((1+N)/(1+df)) + 1` with raw term
//! frequency and L2 row normalization.

use std::collections::{BTreeMap, HashMap};

use num_traits::Float;
use serde::Serialize;

use super::EvalError;

/// Sparse document vector with strictly increasing indices; unit L2 norm for
/// any non-empty document, the zero vector otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseVector<F> {
    pub entries: Vec<(usize, F)>,
}

impl<F: Float> SparseVector<F> {
    pub fn zero() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn l2_norm(&self) -> F {
        self.entries
            .iter()
            .fold(F::zero(), |acc, &(_, w)| acc + w * w)
            .sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TfIdfVectorizer<F> {
    pub ngram_range: (usize, usize),
    pub min_df: usize,
    /// n-gram surface → feature index, indices dense in sorted order.
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<F>,
}

fn ngrams(doc: &[String]) -> impl Iterator<Item = String> + '_ {
    let unigrams = doc.iter().cloned();
    let bigrams = doc.windows(2).map(|w| format!("{} {}", w[0], w[1]));
    unigrams.chain(bigrams)
}

/// Fits the vectorizer on training documents only.
pub fn build_tfidf<F: Float>(token_docs: &[Vec<String>]) -> Result<TfIdfVectorizer<F>, EvalError> {
    build_tfidf_with_min_df(token_docs, 2)
}

pub fn build_tfidf_with_min_df<F: Float>(
    token_docs: &[Vec<String>],
    min_df: usize,
) -> Result<TfIdfVectorizer<F>, EvalError> {
    if token_docs.is_empty() {
        return Err(EvalError::EmptyTrainingSet);
    }
    let n_docs = token_docs.len();

    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in token_docs {
        let mut seen: Vec<String> = ngrams(doc).collect();
        seen.sort();
        seen.dedup();
        for gram in seen {
            *df.entry(gram).or_insert(0) += 1;
        }
    }

    let mut vocabulary: BTreeMap<String, usize> = df
        .iter()
        .filter(|(_, &count)| count >= min_df)
        .map(|(gram, _)| (gram.clone(), 0))
        .collect();
    for (index, (_, slot)) in vocabulary.iter_mut().enumerate() {
        *slot = index;
    }

    let n = F::from(n_docs).unwrap();
    let mut idf = vec![F::zero(); vocabulary.len()];
    for (gram, &index) in &vocabulary {
        let d = F::from(df[gram]).unwrap();
        idf[index] = ((F::one() + n) / (F::one() + d)).ln() + F::one();
    }

    Ok(TfIdfVectorizer {
        ngram_range: (1, 2),
        min_df,
        vocabulary,
        idf,
    })
}

impl<F: Float> TfIdfVectorizer<F> {
    /// Raw term counts × idf, L2-normalized; out-of-vocabulary n-grams are
    /// ignored.
    pub fn vectorize(&self, doc: &[String]) -> SparseVector<F> {
        let mut counts: BTreeMap<usize, F> = BTreeMap::new();
        for gram in ngrams(doc) {
            if let Some(&index) = self.vocabulary.get(&gram) {
                *counts.entry(index).or_insert(F::zero()) = counts
                    .get(&index)
                    .copied()
                    .unwrap_or(F::zero())
                    + F::one();
            }
        }
        let mut entries: Vec<(usize, F)> = counts
            .into_iter()
            .map(|(index, tf)| (index, tf * self.idf[index]))
            .collect();
        let norm = entries
            .iter()
            .fold(F::zero(), |acc, &(_, w)| acc + w * w)
            .sqrt();
        if norm > F::zero() {
            for (_, w) in &mut entries {
                *w = *w / norm;
            }
        }
        SparseVector { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(tokens: &[&str]) -> Vec<String> {
        tokens.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn vocabulary_drops_rare_ngrams() {
        let docs = vec![doc(&["a", "b"]), doc(&["a", "c"]), doc(&["a", "b"])];
        let v: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        let grams: Vec<&str> = v.vocabulary.keys().map(String::as_str).collect();
        // c and "a c" have df = 1 and fall below min_df.
        assert_eq!(grams, vec!["a", "a b", "b"]);
    }

    #[test]
    fn idf_of_ubiquitous_term_is_one() {
        let docs = vec![doc(&["a"]), doc(&["a"]), doc(&["a"])];
        let v: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        let idx = v.vocabulary["a"];
        assert!((v.idf[idx] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_token_doc_contributes_no_bigrams() {
        let docs = vec![doc(&["a"]), doc(&["a"])];
        let v: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        assert_eq!(v.vocabulary.len(), 1);
    }

    #[test]
    fn empty_training_set_is_rejected() {
        assert!(matches!(
            build_tfidf::<f64>(&[]),
            Err(EvalError::EmptyTrainingSet)
        ));
    }

    #[test]
    fn all_oov_doc_is_zero_vector() {
        let docs = vec![doc(&["a", "b"]), doc(&["a", "b"])];
        let v: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        let vec = v.vectorize(&doc(&["x", "y"]));
        assert!(vec.entries.is_empty());
    }

    #[test]
    fn hand_computed_weights_for_toy_doc() {
        // Vocabulary {a, "a b", b} from the rare-ngram test corpus.
        let docs = vec![doc(&["a", "b"]), doc(&["a", "c"]), doc(&["a", "b"])];
        let v: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        let sv = v.vectorize(&doc(&["a", "a", "b"]));

        let idf_a = v.idf[v.vocabulary["a"]];
        let idf_b = v.idf[v.vocabulary["b"]];
        let idf_ab = v.idf[v.vocabulary["a b"]];
        // Counts: a ×2, b ×1, "a a" OOV, "a b" ×1.
        let raw = [
            (v.vocabulary["a"], 2.0 * idf_a),
            (v.vocabulary["a b"], 1.0 * idf_ab),
            (v.vocabulary["b"], 1.0 * idf_b),
        ];
        let norm: f64 = raw.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        for ((idx, w), (eidx, ew)) in sv.entries.iter().zip(raw) {
            assert_eq!(*idx, eidx);
            assert!((w - ew / norm).abs() < 1e-12);
        }
        assert!((sv.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn training_doc_vectorizes_identically_to_duplicate() {
        let docs = vec![doc(&["a", "b"]), doc(&["a", "b"]), doc(&["b", "c"])];
        let v: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        assert_eq!(v.vectorize(&docs[0]), v.vectorize(&docs[1]));
    }

    #[test]
    fn vectorizer_is_deterministic() {
        let docs = vec![doc(&["b", "a"]), doc(&["a", "b"]), doc(&["b", "a"])];
        let a: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        let b: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn indices_strictly_increasing() {
        let docs = vec![doc(&["a", "b", "c"]), doc(&["a", "b", "c"])];
        let v: TfIdfVectorizer<f64> = build_tfidf(&docs).unwrap();
        let sv = v.vectorize(&doc(&["c", "a", "b"]));
        assert!(sv.entries.windows(2).all(|w| w[0].0 < w[1].0));
    }
}
