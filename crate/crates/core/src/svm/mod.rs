//! RBF-kernel soft-margin SVM, trained from scratch with sequential minimal
//! optimization, plus leave-one-out evaluation utilities.

mod eval;
mod model_io;
mod smo;

pub use eval::{
    evaluate, grid_search, loocv, render_table, write_report_tsv, ClassMetrics, EvalReport,
    GridChoice, HeldOutPrediction, LoocvOutcome, DEFAULT_GRID_C, DEFAULT_GRID_GAMMA,
};
pub use smo::{train_smo, SmoParams, TrainResult};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary class label: seminar (coordinated propaganda account) is the
/// positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Seminar,
    Normal,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Seminar => 1.0,
            Label::Normal => -1.0,
        }
    }

    pub fn from_sign(v: f64) -> Label {
        // an exact zero margin resolves to normal: fewer false accusations
        if v > 0.0 {
            Label::Seminar
        } else {
            Label::Normal
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Seminar => "seminar",
            Label::Normal => "normal",
        })
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        match s.trim().to_ascii_lowercase().as_str() {
            "seminar" | "+1" | "1" => Ok(Label::Seminar),
            "normal" | "-1" => Ok(Label::Normal),
            other => Err(Error::InvalidConfig(format!("unknown label {other:?}"))),
        }
    }
}

/// RBF kernel: exp(-gamma * ||x - y||^2), in (0, 1].
pub fn rbf_kernel(x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok((-gamma * squared_distance(x, y)).exp())
}

pub(crate) fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

/// A feature family for ablation experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Interaction,
    Diversity,
    Style,
}

impl Family {
    /// Which family owns a feature column, judged by its canonical name.
    pub fn of_column(name: &str) -> Family {
        match name {
            "pct_sentiment" | "pct_vulgar" => Family::Style,
            _ if name.starts_with("top") => Family::Diversity,
            _ => Family::Interaction,
        }
    }
}

/// A named union of feature families used to mask the training matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSubset(BTreeSet<Family>);

impl FeatureSubset {
    pub fn all() -> Self {
        FeatureSubset(
            [Family::Interaction, Family::Diversity, Family::Style]
                .into_iter()
                .collect(),
        )
    }

    pub fn of(families: &[Family]) -> Self {
        FeatureSubset(families.iter().copied().collect())
    }

    pub fn contains(&self, family: Family) -> bool {
        self.0.contains(&family)
    }

    /// Columns of `names` that belong to this subset, in order.
    pub fn column_indices(&self, names: &[String]) -> Vec<usize> {
        names
            .iter()
            .enumerate()
            .filter(|(_, n)| self.contains(Family::of_column(n)))
            .map(|(i, _)| i)
            .collect()
    }

    /// The five ablation subsets in reporting order.
    pub fn ablation_order() -> Vec<FeatureSubset> {
        vec![
            FeatureSubset::of(&[Family::Interaction]),
            FeatureSubset::of(&[Family::Diversity]),
            FeatureSubset::of(&[Family::Style]),
            FeatureSubset::of(&[Family::Interaction, Family::Diversity]),
            FeatureSubset::all(),
        ]
    }
}

impl fmt::Display for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == FeatureSubset::all() {
            return f.write_str("all");
        }
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|fam| match fam {
                Family::Interaction => "interaction",
                Family::Diversity => "diversity",
                Family::Style => "style",
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for FeatureSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<FeatureSubset> {
        let s = s.trim().to_ascii_lowercase();
        if s == "all" {
            return Ok(FeatureSubset::all());
        }
        let mut set = BTreeSet::new();
        for part in s.split('+') {
            let family = match part.trim() {
                "interaction" => Family::Interaction,
                "diversity" => Family::Diversity,
                "style" => Family::Style,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown feature subset {other:?}"
                    )))
                }
            };
            set.insert(family);
        }
        if set.is_empty() {
            return Err(Error::InvalidConfig("empty feature subset".into()));
        }
        Ok(FeatureSubset(set))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRow {
    pub user_id: String,
    pub features: Vec<f64>,
    pub label: Label,
}

/// A labeled feature matrix. Rows keep their insertion order; training is
/// invariant under permutation of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub feature_names: Vec<String>,
    pub rows: Vec<TrainingRow>,
}

impl TrainingSet {
    pub fn new(feature_names: Vec<String>, rows: Vec<TrainingRow>) -> Result<TrainingSet> {
        let ts = TrainingSet {
            feature_names,
            rows,
        };
        ts.validate()?;
        Ok(ts)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() < 2 {
            return Err(Error::TooFewRows(self.rows.len()));
        }
        let mut seen = BTreeSet::new();
        for row in &self.rows {
            if row.features.len() != self.feature_names.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.feature_names.len(),
                    got: row.features.len(),
                });
            }
            if !seen.insert(row.user_id.as_str()) {
                return Err(Error::DuplicateUser(row.user_id.clone()));
            }
        }
        if !self.both_labels_present() {
            return Err(Error::DegenerateLabels);
        }
        Ok(())
    }

    pub fn both_labels_present(&self) -> bool {
        self.rows.iter().any(|r| r.label == Label::Seminar)
            && self.rows.iter().any(|r| r.label == Label::Normal)
    }

    /// Restrict every row to the columns of a feature subset.
    pub fn project(&self, subset: &FeatureSubset) -> TrainingSet {
        let indices = subset.column_indices(&self.feature_names);
        TrainingSet {
            feature_names: indices
                .iter()
                .map(|&i| self.feature_names[i].clone())
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|r| TrainingRow {
                    user_id: r.user_id.clone(),
                    features: indices.iter().map(|&i| r.features[i]).collect(),
                    label: r.label,
                })
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.feature_names.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportVector {
    pub alpha: f64,
    pub label: f64,
    pub features: Vec<f64>,
}

/// A trained kernel model: support vectors, dual coefficients, bias, kernel
/// parameters, and the exact feature column order it expects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSvmModel {
    pub feature_order: Vec<String>,
    pub gamma: f64,
    pub c: f64,
    pub bias: f64,
    pub support: Vec<SupportVector>,
    /// False when the solver hit its pass limit before meeting the KKT
    /// conditions; the model is still the best iterate found.
    pub converged: bool,
}

impl KernelSvmModel {
    /// Raw decision value sum(alpha_i y_i K(x_i, x)) + b.
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.feature_order.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_order.len(),
                got: x.len(),
            });
        }
        let mut sum = self.bias;
        for sv in &self.support {
            sum += sv.alpha * sv.label * (-self.gamma * squared_distance(&sv.features, x)).exp();
        }
        Ok(sum)
    }

    /// Classify one vector; the margin is the raw decision value.
    pub fn predict(&self, x: &[f64]) -> Result<(Label, f64)> {
        let margin = self.decision(x)?;
        Ok((Label::from_sign(margin), margin))
    }

    /// Dual objective value of the stored solution:
    /// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
    pub fn dual_objective(&self) -> f64 {
        let mut linear = 0.0;
        let mut quad = 0.0;
        for (i, a) in self.support.iter().enumerate() {
            linear += a.alpha;
            for b in &self.support[i + 1..] {
                quad += 2.0
                    * a.alpha
                    * b.alpha
                    * a.label
                    * b.label
                    * (-self.gamma * squared_distance(&a.features, &b.features)).exp();
            }
            quad += a.alpha * a.alpha; // K(x,x) = 1 for RBF
        }
        linear - 0.5 * quad
    }

    /// Reorder the columns of a row given under `names` into this model's
    /// feature order.
    pub fn project_row(&self, names: &[String], row: &[f64]) -> Result<Vec<f64>> {
        self.feature_order
            .iter()
            .map(|want| {
                names
                    .iter()
                    .position(|n| n == want)
                    .map(|i| row[i])
                    .ok_or_else(|| {
                        Error::InvalidConfig(format!("matrix is missing feature column {want}"))
                    })
            })
            .collect()
    }

    pub fn save(&self, writer: impl std::io::Write) -> Result<()> {
        model_io::save(self, writer)
    }

    pub fn load(reader: impl std::io::BufRead) -> Result<KernelSvmModel> {
        model_io::load(reader)
    }
}
