//! Multinomial logistic regression on sparse features.
//!
//! Full-batch gradient descent with backtracking (Armijo) line search from a
//! zero initialization; the objective is summed cross-entropy plus
//! `1/(2C)·‖W‖²` with the bias unregularized. Deterministic: all reductions
//! run in fixed index order.

use num_traits::Float;

use super::tfidf::SparseVector;
use super::EvalError;

pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Debug, Clone)]
pub struct LogisticModel<F> {
    /// Row-major class × feature weight matrix.
    pub weights: Vec<F>,
    pub bias: Vec<F>,
    pub c: F,
    pub n_classes: usize,
    pub n_features: usize,
}

impl<F: Float> LogisticModel<F> {
    fn logits(&self, x: &SparseVector<F>) -> Vec<F> {
        let mut z = self.bias.clone();
        for class in 0..self.n_classes {
            let row = &self.weights[class * self.n_features..(class + 1) * self.n_features];
            let mut acc = F::zero();
            for &(index, value) in &x.entries {
                acc = acc + row[index] * value;
            }
            z[class] = z[class] + acc;
        }
        z
    }

    /// Softmax class probabilities.
    pub fn predict_proba(&self, x: &SparseVector<F>) -> Vec<F> {
        softmax(&self.logits(x))
    }

    /// Argmax class; ties resolve to the smaller class index.
    pub fn predict(&self, x: &SparseVector<F>) -> usize {
        let z = self.logits(x);
        let mut best = 0;
        for (class, &v) in z.iter().enumerate().skip(1) {
            if v > z[best] {
                best = class;
            }
        }
        best
    }

    pub fn predict_all(&self, xs: &[SparseVector<F>]) -> Vec<usize> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

fn softmax<F: Float>(z: &[F]) -> Vec<F> {
    let max = z.iter().fold(F::neg_infinity(), |a, &b| a.max(b));
    let exps: Vec<F> = z.iter().map(|&v| (v - max).exp()).collect();
    let sum = exps.iter().fold(F::zero(), |a, &b| a + b);
    exps.into_iter().map(|e| e / sum).collect()
}

fn log_sum_exp<F: Float>(z: &[F]) -> F {
    let max = z.iter().fold(F::neg_infinity(), |a, &b| a.max(b));
    let sum = z
        .iter()
        .fold(F::zero(), |acc, &v| acc + (v - max).exp());
    max + sum.ln()
}

struct Objective<'a, F> {
    x: &'a [SparseVector<F>],
    y: &'a [usize],
    n_classes: usize,
    n_features: usize,
    inv_c: F,
}

impl<F: Float> Objective<'_, F> {
    fn loss(&self, weights: &[F], bias: &[F]) -> F {
        let mut total = F::zero();
        for (x, &label) in self.x.iter().zip(self.y) {
            let z = logits_of(weights, bias, x, self.n_classes, self.n_features);
            total = total + log_sum_exp(&z) - z[label];
        }
        let reg = weights.iter().fold(F::zero(), |a, &w| a + w * w);
        total + self.inv_c * reg / (F::one() + F::one())
    }

    fn gradient(&self, weights: &[F], bias: &[F]) -> (Vec<F>, Vec<F>) {
        let mut grad_w = vec![F::zero(); weights.len()];
        let mut grad_b = vec![F::zero(); bias.len()];
        for (x, &label) in self.x.iter().zip(self.y) {
            let z = logits_of(weights, bias, x, self.n_classes, self.n_features);
            let p = softmax(&z);
            for class in 0..self.n_classes {
                let mut err = p[class];
                if class == label {
                    err = err - F::one();
                }
                grad_b[class] = grad_b[class] + err;
                let row = &mut grad_w[class * self.n_features..(class + 1) * self.n_features];
                for &(index, value) in &x.entries {
                    row[index] = row[index] + err * value;
                }
            }
        }
        for (g, &w) in grad_w.iter_mut().zip(weights) {
            *g = *g + self.inv_c * w;
        }
        (grad_w, grad_b)
    }
}

fn logits_of<F: Float>(
    weights: &[F],
    bias: &[F],
    x: &SparseVector<F>,
    n_classes: usize,
    n_features: usize,
) -> Vec<F> {
    let mut z = bias.to_vec();
    for class in 0..n_classes {
        let row = &weights[class * n_features..(class + 1) * n_features];
        let mut acc = F::zero();
        for &(index, value) in &x.entries {
            acc = acc + row[index] * value;
        }
        z[class] = z[class] + acc;
    }
    z
}

/// Test hook: analytic gradient of the training objective at (weights, bias).
pub fn objective_gradient<F: Float>(
    x: &[SparseVector<F>],
    y: &[usize],
    n_classes: usize,
    n_features: usize,
    c: F,
    weights: &[F],
    bias: &[F],
) -> (Vec<F>, Vec<F>) {
    Objective {
        x,
        y,
        n_classes,
        n_features,
        inv_c: F::one() / c,
    }
    .gradient(weights, bias)
}

/// Test hook: training objective value at (weights, bias).
pub fn objective_loss<F: Float>(
    x: &[SparseVector<F>],
    y: &[usize],
    n_classes: usize,
    n_features: usize,
    c: F,
    weights: &[F],
    bias: &[F],
) -> F {
    Objective {
        x,
        y,
        n_classes,
        n_features,
        inv_c: F::one() / c,
    }
    .loss(weights, bias)
}

pub fn train_logreg<F: Float>(
    x: &[SparseVector<F>],
    y: &[usize],
    n_classes: usize,
    n_features: usize,
    c: F,
    max_iter: usize,
    tol: F,
) -> Result<LogisticModel<F>, EvalError> {
    let mut present = vec![false; n_classes];
    for &label in y {
        present[label] = true;
    }
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(EvalError::SingleClass);
    }

    let objective = Objective {
        x,
        y,
        n_classes,
        n_features,
        inv_c: F::one() / c,
    };

    let mut weights = vec![F::zero(); n_classes * n_features];
    let mut bias = vec![F::zero(); n_classes];
    let mut loss = objective.loss(&weights, &bias);
    let mut step = F::one();
    let armijo = F::from(1e-4).unwrap();
    let half = F::from(0.5).unwrap();
    let two = F::from(2.0).unwrap();

    for _ in 0..max_iter {
        if !loss.is_finite() {
            return Err(EvalError::NonFinite);
        }
        let (grad_w, grad_b) = objective.gradient(&weights, &bias);
        let grad_sq = grad_w.iter().chain(grad_b.iter()).fold(F::zero(), |a, &g| a + g * g);
        if grad_sq.sqrt() < tol {
            break;
        }

        // Backtracking line search along the steepest descent direction.
        let mut accepted = false;
        for _ in 0..60 {
            let trial_w: Vec<F> = weights
                .iter()
                .zip(&grad_w)
                .map(|(&w, &g)| w - step * g)
                .collect();
            let trial_b: Vec<F> = bias
                .iter()
                .zip(&grad_b)
                .map(|(&b, &g)| b - step * g)
                .collect();
            let trial_loss = objective.loss(&trial_w, &trial_b);
            if trial_loss.is_finite() && trial_loss <= loss - armijo * step * grad_sq {
                weights = trial_w;
                bias = trial_b;
                loss = trial_loss;
                step = (step * two).min(F::from(1e4).unwrap());
                accepted = true;
                break;
            }
            step = step * half;
        }
        if !accepted {
            // Step size underflowed; no further progress possible.
            break;
        }
    }

    if !loss.is_finite() {
        return Err(EvalError::NonFinite);
    }
    Ok(LogisticModel {
        weights,
        bias,
        c,
        n_classes,
        n_features,
    })
}
