//! Classification metrics.

use super::EvalError;

pub fn accuracy(y_true: &[usize], y_pred: &[usize]) -> Result<f64, EvalError> {
    if y_true.len() != y_pred.len() {
        return Err(EvalError::LengthMismatch {
            expected: y_true.len(),
            found: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Ok(0.0);
    }
    let hits = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    Ok(hits as f64 / y_true.len() as f64)
}

/// Per-class F1 for every class present in `y_true`, in ascending class
/// order. A class with zero true and zero predicted positives scores 0.
pub fn per_class_f1(y_true: &[usize], y_pred: &[usize]) -> Result<Vec<(usize, f64)>, EvalError> {
    if y_true.len() != y_pred.len() {
        return Err(EvalError::LengthMismatch {
            expected: y_true.len(),
            found: y_pred.len(),
        });
    }
    let mut classes: Vec<usize> = y_true.to_vec();
    classes.sort_unstable();
    classes.dedup();

    let mut scores = Vec::with_capacity(classes.len());
    for class in classes {
        let tp = y_true
            .iter()
            .zip(y_pred)
            .filter(|(&t, &p)| t == class && p == class)
            .count() as f64;
        let fp = y_true
            .iter()
            .zip(y_pred)
            .filter(|(&t, &p)| t != class && p == class)
            .count() as f64;
        let fn_ = y_true
            .iter()
            .zip(y_pred)
            .filter(|(&t, &p)| t == class && p != class)
            .count() as f64;
        let denom = 2.0 * tp + fp + fn_;
        let f1 = if denom == 0.0 { 0.0 } else { 2.0 * tp / denom };
        scores.push((class, f1));
    }
    Ok(scores)
}

/// Unweighted mean of per-class F1 over the classes present in `y_true`.
pub fn macro_f1(y_true: &[usize], y_pred: &[usize]) -> Result<f64, EvalError> {
    let scores = per_class_f1(y_true, y_pred)?;
    if scores.is_empty() {
        return Ok(0.0);
    }
    Ok(scores.iter().map(|(_, f1)| f1).sum::<f64>() / scores.len() as f64)
}
