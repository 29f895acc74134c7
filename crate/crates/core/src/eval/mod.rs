//! Downstream evaluation: TF-IDF features over tokenizer output, multinomial
//! logistic regression with C-grid tuning on validation accuracy, and test
//! metrics.
//!
//! The numeric layer is generic over the scalar via `num_traits::Float`; the
//! harness instantiates it at [`crate::Real`].

pub mod logreg;
pub mod metrics;
pub mod tfidf;

pub use logreg::{train_logreg, LogisticModel};
pub use metrics::{accuracy, macro_f1, per_class_f1};
pub use tfidf::{build_tfidf, SparseVector, TfIdfVectorizer};

use serde::Serialize;
use thiserror::Error;

use crate::baselines::{SessionTokenizer, TokenizeError, TokenizerHandle};
use crate::corpus::{LabeledCorpus, Split};
use crate::Real;

pub const DEFAULT_C_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
pub const DEFAULT_TOL: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("fewer than two classes present in training labels")]
    SingleClass,
    #[error("loss diverged to a non-finite value; check input scaling")]
    NonFinite,
    #[error("label vectors differ in length: {expected} vs {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
}

/// Result of one tokenizer's downstream run; serialized as a JSON object.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub tokenizer: String,
    pub selected_c: f64,
    pub val_acc: f64,
    pub test_acc: f64,
    pub macro_f1: f64,
    pub per_class_f1: Vec<f64>,
    pub feature_count: usize,
    /// TF-IDF variant, recorded so the numbers are interpretable.
    pub tfidf_variant: &'static str,
    pub optimizer: &'static str,
}

fn tokenize_split(
    corpus: &LabeledCorpus,
    handle: &TokenizerHandle,
    split: Split,
) -> Result<(Vec<Vec<String>>, Vec<usize>), EvalError> {
    let mut session = SessionTokenizer::new(handle)?;
    let mut docs = Vec::new();
    let mut labels = Vec::new();
    for sample in corpus.split_samples(split) {
        let seq = session.tokenize(&sample.text)?;
        docs.push(seq.tokens.into_iter().map(|t| t.surface).collect());
        labels.push(sample.label as usize);
    }
    Ok((docs, labels))
}

/// Fits the vectorizer on the train split only, trains one model per C,
/// selects by validation accuracy (ties toward the smaller C), and reports
/// test accuracy and macro-F1 for the selected configuration.
pub fn tune_and_evaluate(
    corpus: &LabeledCorpus,
    handle: &TokenizerHandle,
    grid: &[f64],
) -> Result<EvalReport, EvalError> {
    let (train_docs, train_labels) = tokenize_split(corpus, handle, Split::Train)?;
    let (val_docs, val_labels) = tokenize_split(corpus, handle, Split::Val)?;
    let (test_docs, test_labels) = tokenize_split(corpus, handle, Split::Test)?;

    let vectorizer: TfIdfVectorizer<Real> = build_tfidf(&train_docs)?;
    let n_features = vectorizer.vocabulary.len();
    let n_classes = corpus.label_names.len();

    let train_x: Vec<SparseVector<Real>> =
        train_docs.iter().map(|d| vectorizer.vectorize(d)).collect();
    let val_x: Vec<SparseVector<Real>> =
        val_docs.iter().map(|d| vectorizer.vectorize(d)).collect();
    let test_x: Vec<SparseVector<Real>> =
        test_docs.iter().map(|d| vectorizer.vectorize(d)).collect();

    let mut grid: Vec<f64> = grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut best: Option<(f64, f64, LogisticModel<Real>)> = None;
    for &c in &grid {
        let model = train_logreg(
            &train_x,
            &train_labels,
            n_classes,
            n_features,
            c,
            logreg::DEFAULT_MAX_ITER,
            DEFAULT_TOL,
        )?;
        let val_acc = accuracy(&val_labels, &model.predict_all(&val_x))?;
        // Strictly-greater keeps the smaller C on ties (grid is ascending).
        if best.as_ref().map_or(true, |(_, acc, _)| val_acc > *acc) {
            best = Some((c, val_acc, model));
        }
    }
    let (selected_c, val_acc, model) = best.expect("grid is non-empty");

    let test_pred = model.predict_all(&test_x);
    let test_acc = accuracy(&test_labels, &test_pred)?;
    let f1 = macro_f1(&test_labels, &test_pred)?;
    let per_class = per_class_f1(&test_labels, &test_pred)?
        .into_iter()
        .map(|(_, f1)| f1)
        .collect();

    Ok(EvalReport {
        tokenizer: handle.kind.to_string(),
        selected_c,
        val_acc,
        test_acc,
        macro_f1: f1,
        per_class_f1: per_class,
        feature_count: n_features,
        tfidf_variant: "raw tf, smoothed idf ln((1+N)/(1+df))+1, L2 row norm, ngram (1,2), min_df 2",
        optimizer: "full-batch gradient descent, backtracking line search, zero init",
    })
}
