//! Classification metrics.

/// Scores of a prediction against ground truth on the same index set.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub macro_f1: f64,
    pub per_class_f1: Vec<f64>,
    pub accuracy: f64,
}

/// Per-class F1 for labels `1..=k`. Precision or recall with an empty
/// denominator counts as 0, so a class that is neither predicted nor present
/// scores 0.
pub fn per_class_f1(pred: &[u32], truth: &[u32], k: u32) -> Vec<f64> {
    assert_eq!(pred.len(), truth.len(), "prediction and truth lengths differ");
    let k = k as usize;
    let mut tp = vec![0usize; k];
    let mut predicted = vec![0usize; k];
    let mut actual = vec![0usize; k];
    for (&p, &t) in pred.iter().zip(truth) {
        if (1..=k).contains(&(p as usize)) {
            predicted[p as usize - 1] += 1;
        }
        if (1..=k).contains(&(t as usize)) {
            actual[t as usize - 1] += 1;
            if p == t {
                tp[t as usize - 1] += 1;
            }
        }
    }
    (0..k)
        .map(|c| {
            let precision = ratio(tp[c], predicted[c]);
            let recall = ratio(tp[c], actual[c]);
            if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            }
        })
        .collect()
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Unweighted mean of per-class F1 over the `k` classes.
pub fn macro_f1(pred: &[u32], truth: &[u32], k: u32) -> f64 {
    let f1 = per_class_f1(pred, truth, k);
    if f1.is_empty() {
        0.0
    } else {
        f1.iter().sum::<f64>() / f1.len() as f64
    }
}

pub fn accuracy(pred: &[u32], truth: &[u32]) -> f64 {
    assert_eq!(pred.len(), truth.len(), "prediction and truth lengths differ");
    let hits = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    ratio(hits, pred.len())
}

pub fn evaluate(pred: &[u32], truth: &[u32], k: u32) -> Evaluation {
    let per_class_f1 = per_class_f1(pred, truth, k);
    let macro_f1 = if per_class_f1.is_empty() {
        0.0
    } else {
        per_class_f1.iter().sum::<f64>() / per_class_f1.len() as f64
    };
    Evaluation {
        macro_f1,
        per_class_f1,
        accuracy: accuracy(pred, truth),
    }
}

/// Mean and sample standard deviation (`n − 1` denominator; 0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_prediction() {
        let t = [1, 2, 3, 1, 2, 3];
        assert_eq!(macro_f1(&t, &t, 3), 1.0);
        assert_eq!(accuracy(&t, &t), 1.0);
        assert_eq!(macro_f1(&[1, 1], &[1, 1], 1), 1.0);
    }

    #[test]
    fn constant_prediction_on_balanced_truth() {
        // class 1: P = 1/2, R = 1, F1 = 2/3; class 2 never predicted: F1 = 0
        let pred = [1, 1, 1, 1];
        let truth = [1, 1, 2, 2];
        let f1 = per_class_f1(&pred, &truth, 2);
        assert!((f1[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f1[1], 0.0);
        assert!((macro_f1(&pred, &truth, 2) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(accuracy(&pred, &truth), 0.5);
    }

    #[test]
    fn absent_class_scores_zero() {
        assert_eq!(macro_f1(&[1, 1], &[1, 1], 2), 0.5);
    }

    #[test]
    fn mean_and_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[0.3]), (0.3, 0.0));
    }
}
