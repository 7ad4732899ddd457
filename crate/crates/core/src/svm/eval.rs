//! Precision/recall/F1 reporting, leave-one-out cross-validation, and an
//! optional hyperparameter grid search.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::svm::smo::{train_smo, SmoParams};
use crate::svm::{Label, TrainingSet};

/// Precision, recall, F1 for one class, as percentages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ClassMetrics {
    fn from_counts(tp: usize, fp: usize, fn_count: usize) -> ClassMetrics {
        let precision = percent(tp, tp + fp);
        let recall = percent(tp, tp + fn_count);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassMetrics {
            precision,
            recall,
            f1,
        }
    }
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

/// Per-class metrics plus the confusion counts (seminar = positive class).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub seminar: ClassMetrics,
    pub normal: ClassMetrics,
    /// Unweighted mean of the two class F1 scores.
    pub macro_f1: f64,
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

/// Score predictions against gold labels, paired by position.
pub fn evaluate(predictions: &[Label], gold: &[Label]) -> Result<EvalReport> {
    if predictions.len() != gold.len() {
        return Err(Error::LengthMismatch {
            predictions: predictions.len(),
            gold: gold.len(),
        });
    }
    let mut true_pos = 0;
    let mut false_pos = 0;
    let mut false_neg = 0;
    let mut true_neg = 0;
    for (p, g) in predictions.iter().zip(gold) {
        match (p, g) {
            (Label::Seminar, Label::Seminar) => true_pos += 1,
            (Label::Seminar, Label::Normal) => false_pos += 1,
            (Label::Normal, Label::Seminar) => false_neg += 1,
            (Label::Normal, Label::Normal) => true_neg += 1,
        }
    }
    let seminar = ClassMetrics::from_counts(true_pos, false_pos, false_neg);
    let normal = ClassMetrics::from_counts(true_neg, false_neg, false_pos);
    Ok(EvalReport {
        seminar,
        normal,
        macro_f1: (seminar.f1 + normal.f1) / 2.0,
        true_pos,
        false_pos,
        false_neg,
        true_neg,
    })
}

/// One held-out prediction from LOOCV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeldOutPrediction {
    pub user_id: String,
    pub gold: Label,
    pub predicted: Label,
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct LoocvOutcome {
    pub report: EvalReport,
    pub predictions: Vec<HeldOutPrediction>,
    pub non_converged_folds: usize,
}

/// Leave-one-out cross-validation: for each row, train on the others and
/// predict it. Folds are independent, so they run in parallel; the outcome
/// is aggregated in row order and independent of scheduling.
pub fn loocv(ts: &TrainingSet, params: &SmoParams) -> Result<LoocvOutcome> {
    ts.validate()?;
    if ts.rows.len() < 3 {
        return Err(Error::TooFewRows(ts.rows.len()));
    }
    let fold_results = par::map_indices(ts.rows.len(), |held_out| -> Result<_> {
        let rows = ts
            .rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != held_out)
            .map(|(_, r)| r.clone())
            .collect();
        let fold = TrainingSet::new(ts.feature_names.clone(), rows)?;
        let result = train_smo(&fold, params)?;
        let (predicted, margin) = result.model.predict(&ts.rows[held_out].features)?;
        Ok((predicted, margin, result.converged))
    });

    let mut predictions = Vec::with_capacity(ts.rows.len());
    let mut non_converged_folds = 0;
    for (row, fold) in ts.rows.iter().zip(fold_results) {
        let (predicted, margin, converged) = fold?;
        if !converged {
            non_converged_folds += 1;
        }
        predictions.push(HeldOutPrediction {
            user_id: row.user_id.clone(),
            gold: row.label,
            predicted,
            margin,
        });
    }
    let report = evaluate(
        &predictions.iter().map(|p| p.predicted).collect::<Vec<_>>(),
        &predictions.iter().map(|p| p.gold).collect::<Vec<_>>(),
    )?;
    Ok(LoocvOutcome {
        report,
        predictions,
        non_converged_folds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridChoice {
    pub c: f64,
    pub gamma: f64,
    pub macro_f1: f64,
}

pub const DEFAULT_GRID_C: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
pub const DEFAULT_GRID_GAMMA: [f64; 4] = [0.01, 0.05, 0.25, 1.0];

/// Stratified k-fold grid search over (C, gamma), scored by pooled
/// macro-F1. Selection only ever sees the rows it is given, so callers can
/// keep held-out data clean. Ties resolve to the earliest candidate.
pub fn grid_search(
    ts: &TrainingSet,
    cs: &[f64],
    gammas: &[f64],
    folds: usize,
) -> Result<GridChoice> {
    ts.validate()?;
    let seminar: Vec<usize> = indices_of(ts, Label::Seminar);
    let normal: Vec<usize> = indices_of(ts, Label::Normal);
    let folds = folds.min(seminar.len()).min(normal.len());
    if folds < 2 {
        return Err(Error::InvalidConfig(
            "grid search needs at least 2 rows of each class".into(),
        ));
    }
    let mut fold_of = vec![0usize; ts.rows.len()];
    for (pos, &idx) in seminar.iter().enumerate() {
        fold_of[idx] = pos % folds;
    }
    for (pos, &idx) in normal.iter().enumerate() {
        fold_of[idx] = pos % folds;
    }

    let mut best: Option<GridChoice> = None;
    for &c in cs {
        for &gamma in gammas {
            let params = SmoParams {
                c,
                gamma: Some(gamma),
                ..Default::default()
            };
            let mut predicted = Vec::with_capacity(ts.rows.len());
            let mut gold = Vec::with_capacity(ts.rows.len());
            for fold in 0..folds {
                let train_rows: Vec<_> = ts
                    .rows
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| fold_of[*i] != fold)
                    .map(|(_, r)| r.clone())
                    .collect();
                let train = TrainingSet::new(ts.feature_names.clone(), train_rows)?;
                let model = train_smo(&train, &params)?.model;
                for (i, row) in ts.rows.iter().enumerate() {
                    if fold_of[i] == fold {
                        predicted.push(model.predict(&row.features)?.0);
                        gold.push(row.label);
                    }
                }
            }
            let report = evaluate(&predicted, &gold)?;
            let better = match &best {
                Some(b) => report.macro_f1 > b.macro_f1,
                None => true,
            };
            if better {
                best = Some(GridChoice {
                    c,
                    gamma,
                    macro_f1: report.macro_f1,
                });
            }
        }
    }
    best.ok_or_else(|| Error::InvalidConfig("empty hyperparameter grid".into()))
}

fn indices_of(ts: &TrainingSet, label: Label) -> Vec<usize> {
    ts.rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.label == label)
        .map(|(i, _)| i)
        .collect()
}

/// Human-readable results table, one row per feature subset.
pub fn render_table(rows: &[(String, EvalReport)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<26}{:>21}  {:>21}  {:>7}\n",
        "", "Seminar", "Normal", "Macro"
    ));
    out.push_str(&format!(
        "{:<26}{:>7}{:>7}{:>7}  {:>7}{:>7}{:>7}  {:>7}\n",
        "Features", "P", "R", "F1", "P", "R", "F1", "F1"
    ));
    for (name, report) in rows {
        out.push_str(&format!(
            "{:<26}{:>7.1}{:>7.1}{:>7.1}  {:>7.1}{:>7.1}{:>7.1}  {:>7.1}\n",
            name,
            report.seminar.precision,
            report.seminar.recall,
            report.seminar.f1,
            report.normal.precision,
            report.normal.recall,
            report.normal.f1,
            report.macro_f1,
        ));
    }
    out
}

/// Machine-readable TSV: one line per (subset, class).
pub fn write_report_tsv<W: Write>(mut writer: W, rows: &[(String, EvalReport)]) -> Result<()> {
    writeln!(
        writer,
        "subset\tclass\tprecision\trecall\tf1\tmacro_f1\ttp\tfp\tfn\ttn"
    )?;
    for (name, r) in rows {
        for (class, m) in [("seminar", r.seminar), ("normal", r.normal)] {
            writeln!(
                writer,
                "{name}\t{class}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}\t{}\t{}\t{}",
                m.precision,
                m.recall,
                m.f1,
                r.macro_f1,
                r.true_pos,
                r.false_pos,
                r.false_neg,
                r.true_neg
            )?;
        }
    }
    Ok(())
}
