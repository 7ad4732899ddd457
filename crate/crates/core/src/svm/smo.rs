//! Sequential minimal optimization for the soft-margin dual.
//!
//! Working-set selection is the deterministic maximal-violating-pair rule:
//! each step optimizes the pair (i, j) where i maximizes y_i - f_i over the
//! coordinates free to grow and j minimizes it over those free to shrink
//! (ties to the smallest index). The pair update never needs the bias; at
//! convergence the gap m - M bounds every KKT violation and the bias is the
//! window midpoint. No randomness anywhere, so retraining on the same rows
//! reproduces the same model bit for bit.

use crate::error::{Error, Result};
use crate::svm::{KernelSvmModel, SupportVector, TrainingSet};

#[derive(Debug, Clone, Copy)]
pub struct SmoParams {
    pub c: f64,
    /// RBF width; `None` means 1/dimension.
    pub gamma: Option<f64>,
    /// Tolerance on the KKT conditions (gap threshold 2*tol).
    pub tol: f64,
    /// Pass budget: at most `max_passes * n` pair steps.
    pub max_passes: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams {
            c: 1.0,
            gamma: None,
            tol: 1e-3,
            max_passes: 1000,
        }
    }
}

impl SmoParams {
    pub fn resolve_gamma(&self, dimension: usize) -> f64 {
        self.gamma.unwrap_or(1.0 / dimension.max(1) as f64)
    }
}

#[derive(Debug, Clone)]
pub struct TrainResult {
    pub model: KernelSvmModel,
    /// One dual coefficient per training row, in row order.
    pub alphas: Vec<f64>,
    pub converged: bool,
    pub steps: usize,
}

impl TrainResult {
    /// sum(alpha_i y_i); zero up to rounding for any valid solution.
    pub fn alpha_label_sum(&self, ts: &TrainingSet) -> f64 {
        self.alphas
            .iter()
            .zip(&ts.rows)
            .map(|(a, r)| a * r.label.sign())
            .sum()
    }

    /// Largest violation of the KKT optimality conditions over the training
    /// rows: alpha=0 wants margin >= 1, alpha=C wants margin <= 1, interior
    /// alphas want margin == 1.
    pub fn kkt_max_violation(&self, ts: &TrainingSet) -> Result<f64> {
        let c = self.model.c;
        let mut worst = 0.0f64;
        for (alpha, row) in self.alphas.iter().zip(&ts.rows) {
            let m = row.label.sign() * self.model.decision(&row.features)?;
            let violation = if *alpha <= 0.0 {
                (1.0 - m).max(0.0)
            } else if *alpha >= c {
                (m - 1.0).max(0.0)
            } else {
                (m - 1.0).abs()
            };
            worst = worst.max(violation);
        }
        Ok(worst)
    }
}

struct Solver {
    kernel: Vec<f64>,
    n: usize,
    y: Vec<f64>,
    alphas: Vec<f64>,
    /// f_i = sum_j alpha_j y_j K_ij (decision values without bias).
    f: Vec<f64>,
    c: f64,
    tol: f64,
}

struct Selection {
    i: usize,
    j: usize,
    /// m - M: the largest KKT violation expressed as a dual gap.
    gap: f64,
    /// Bias window midpoint (m + M) / 2.
    bias: f64,
}

impl Solver {
    fn new(ts: &TrainingSet, c: f64, gamma: f64, tol: f64) -> Solver {
        let n = ts.rows.len();
        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            kernel[i * n + i] = 1.0;
            for j in i + 1..n {
                let k = (-gamma
                    * crate::svm::squared_distance(&ts.rows[i].features, &ts.rows[j].features))
                .exp();
                kernel[i * n + j] = k;
                kernel[j * n + i] = k;
            }
        }
        let y: Vec<f64> = ts.rows.iter().map(|r| r.label.sign()).collect();
        Solver {
            kernel,
            n,
            y,
            alphas: vec![0.0; n],
            f: vec![0.0; n],
            c,
            tol,
        }
    }

    #[inline]
    fn k(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.n + j]
    }

    /// The maximal violating pair. `g_t = y_t - f_t` must not exceed the
    /// bias over coordinates free to grow (I_up) and must not fall below it
    /// over those free to shrink (I_low); the gap measures the worst breach.
    fn select(&self) -> Option<Selection> {
        let mut m = f64::NEG_INFINITY;
        let mut i_star = None;
        let mut big_m = f64::INFINITY;
        let mut j_star = None;
        // alphas within an ulp-scale band of a box bound count as bound:
        // otherwise rounding residue leaves pairs selectable with no room
        // to move and the solver stalls
        let hi = self.c * (1.0 - 1e-12);
        let lo = self.c * 1e-12;
        for t in 0..self.n {
            let g = self.y[t] - self.f[t];
            let positive = self.y[t] > 0.0;
            let up = (positive && self.alphas[t] < hi) || (!positive && self.alphas[t] > lo);
            let low = (!positive && self.alphas[t] < hi) || (positive && self.alphas[t] > lo);
            if up && g > m {
                m = g;
                i_star = Some(t);
            }
            if low && g < big_m {
                big_m = g;
                j_star = Some(t);
            }
        }
        let (i, j) = (i_star?, j_star?);
        Some(Selection {
            i,
            j,
            gap: m - big_m,
            bias: (m + big_m) / 2.0,
        })
    }

    /// Jointly optimize the pair, holding the equality constraint. Returns
    /// false when the pair cannot move.
    fn step(&mut self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (yi, yj) = (self.y[i], self.y[j]);
        let (ai_old, aj_old) = (self.alphas[i], self.alphas[j]);
        let (low, high) = if yi != yj {
            (
                (aj_old - ai_old).max(0.0),
                (self.c + aj_old - ai_old).min(self.c),
            )
        } else {
            (
                (ai_old + aj_old - self.c).max(0.0),
                (ai_old + aj_old).min(self.c),
            )
        };
        if low >= high {
            return false;
        }
        let eta = 2.0 * self.k(i, j) - self.k(i, i) - self.k(j, j);
        let e_i = self.f[i] - yi;
        let e_j = self.f[j] - yj;
        let aj = if eta < 0.0 {
            (aj_old - yj * (e_i - e_j) / eta).clamp(low, high)
        } else {
            // flat direction (duplicate points): the objective is linear in
            // alpha_j with slope y_j (e_i - e_j), so the optimum sits at an
            // endpoint of the feasible window
            let slope = yj * (e_i - e_j);
            if slope > 0.0 {
                high
            } else if slope < 0.0 {
                low
            } else {
                return false;
            }
        };
        if aj == aj_old {
            return false;
        }
        let ai = (ai_old + yi * yj * (aj_old - aj)).clamp(0.0, self.c);
        let (d_i, d_j) = (ai - ai_old, aj - aj_old);
        for t in 0..self.n {
            self.f[t] += yi * d_i * self.k(i, t) + yj * d_j * self.k(j, t);
        }
        self.alphas[i] = ai;
        self.alphas[j] = aj;
        true
    }

    /// Returns (converged, steps, bias).
    fn run(&mut self, max_steps: usize) -> (bool, usize, f64) {
        let mut steps = 0;
        loop {
            let selection = match self.select() {
                Some(s) => s,
                // one class entirely at bounds in both directions
                None => return (false, steps, 0.0),
            };
            if selection.gap <= 2.0 * self.tol {
                return (true, steps, selection.bias);
            }
            if steps >= max_steps || !self.step(selection.i, selection.j) {
                return (false, steps, selection.bias);
            }
            steps += 1;
        }
    }
}

/// Train a model on the given rows. Single-class input is rejected; hitting
/// the step budget returns the best iterate with `converged = false`.
pub fn train_smo(ts: &TrainingSet, params: &SmoParams) -> Result<TrainResult> {
    ts.validate()?;
    if params.c <= 0.0 {
        return Err(Error::InvalidConfig("C must be positive".into()));
    }
    let gamma = params.resolve_gamma(ts.dimension());
    if gamma <= 0.0 {
        return Err(Error::InvalidConfig("gamma must be positive".into()));
    }
    let mut solver = Solver::new(ts, params.c, gamma, params.tol);
    let (converged, steps, bias) = solver.run(params.max_passes.saturating_mul(ts.rows.len()));

    let support: Vec<SupportVector> = solver
        .alphas
        .iter()
        .zip(&ts.rows)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, row)| SupportVector {
            alpha: *a,
            label: row.label.sign(),
            features: row.features.clone(),
        })
        .collect();

    Ok(TrainResult {
        model: KernelSvmModel {
            feature_order: ts.feature_names.clone(),
            gamma,
            c: params.c,
            bias,
            support,
            converged,
        },
        alphas: solver.alphas,
        converged,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svm::{Label, TrainingRow};

    fn ts(points: &[(&str, &[f64], Label)]) -> TrainingSet {
        TrainingSet::new(
            (0..points[0].1.len()).map(|i| format!("f{i}")).collect(),
            points
                .iter()
                .map(|(id, x, l)| TrainingRow {
                    user_id: id.to_string(),
                    features: x.to_vec(),
                    label: *l,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_point_closed_form() {
        // y1=+1 at 0, y2=-1 at 1; constraint forces a1 = a2 = 1/(1-k).
        let set = ts(&[
            ("a", &[0.0], Label::Seminar),
            ("b", &[1.0], Label::Normal),
        ]);
        let params = SmoParams {
            c: 100.0,
            gamma: Some(1.0),
            ..Default::default()
        };
        let result = train_smo(&set, &params).unwrap();
        assert!(result.converged);
        let k = (-1.0f64).exp();
        let expected_alpha = 1.0 / (1.0 - k);
        assert!((result.alphas[0] - expected_alpha).abs() < 1e-6);
        assert!((result.alphas[1] - expected_alpha).abs() < 1e-6);
        // decision values exactly +-1 at the two points
        let d0 = result.model.decision(&[0.0]).unwrap();
        let d1 = result.model.decision(&[1.0]).unwrap();
        assert!((d0 - 1.0).abs() < 1e-6, "d0 = {d0}");
        assert!((d1 + 1.0).abs() < 1e-6, "d1 = {d1}");
    }

    #[test]
    fn separable_four_points_classified() {
        let set = ts(&[
            ("a", &[0.0, 0.0], Label::Normal),
            ("b", &[0.1, 0.1], Label::Normal),
            ("c", &[1.0, 1.0], Label::Seminar),
            ("d", &[0.9, 1.0], Label::Seminar),
        ]);
        let result = train_smo(&set, &SmoParams::default()).unwrap();
        assert!(result.converged);
        for row in &set.rows {
            let (label, _) = result.model.predict(&row.features).unwrap();
            assert_eq!(label, row.label);
        }
    }

    #[test]
    fn alpha_label_sum_vanishes_and_kkt_holds() {
        let set = ts(&[
            ("a", &[0.0, 0.2], Label::Normal),
            ("b", &[0.3, 0.1], Label::Normal),
            ("c", &[0.7, 0.8], Label::Seminar),
            ("d", &[0.9, 0.6], Label::Seminar),
            ("e", &[0.5, 0.5], Label::Seminar),
        ]);
        let params = SmoParams {
            c: 2.0,
            gamma: Some(0.5),
            ..Default::default()
        };
        let result = train_smo(&set, &params).unwrap();
        assert!(result.converged);
        assert!(result.alpha_label_sum(&set).abs() < 1e-8);
        for a in &result.alphas {
            assert!(*a >= 0.0 && *a <= params.c);
        }
        assert!(result.kkt_max_violation(&set).unwrap() <= params.tol + 1e-9);
    }

    #[test]
    fn duplicated_rows_keep_decision_function() {
        let base = ts(&[
            ("a", &[0.1, 0.0], Label::Normal),
            ("b", &[0.2, 0.3], Label::Normal),
            ("c", &[0.8, 0.9], Label::Seminar),
            ("d", &[0.7, 0.7], Label::Seminar),
        ]);
        let mut doubled_rows = base.rows.clone();
        for row in &base.rows {
            doubled_rows.push(TrainingRow {
                user_id: format!("{}-copy", row.user_id),
                ..row.clone()
            });
        }
        let doubled = TrainingSet::new(base.feature_names.clone(), doubled_rows).unwrap();
        let params = SmoParams {
            c: 10.0,
            gamma: Some(1.0),
            ..Default::default()
        };
        let m1 = train_smo(&base, &params).unwrap().model;
        let m2 = train_smo(&doubled, &params).unwrap().model;
        for x in [[0.0, 0.0], [0.5, 0.5], [1.0, 1.0], [0.3, 0.8]] {
            let d1 = m1.decision(&x).unwrap();
            let d2 = m2.decision(&x).unwrap();
            assert!(
                (d1 - d2).abs() < 2e-3,
                "decision drifted: {d1} vs {d2} at {x:?}"
            );
        }
    }

    #[test]
    fn contradictory_duplicate_points_still_converge() {
        // identical coordinates, opposite labels: the flat-direction path
        let set = ts(&[
            ("a", &[0.5, 0.5], Label::Seminar),
            ("b", &[0.5, 0.5], Label::Normal),
            ("c", &[0.9, 0.9], Label::Seminar),
            ("d", &[0.1, 0.1], Label::Normal),
        ]);
        let params = SmoParams {
            c: 1.0,
            gamma: Some(1.0),
            ..Default::default()
        };
        let result = train_smo(&set, &params).unwrap();
        assert!(result.converged);
        for a in &result.alphas {
            assert!(*a >= 0.0 && *a <= params.c);
        }
    }

    #[test]
    fn permutation_invariant_predictions() {
        let set = ts(&[
            ("a", &[0.0, 0.2], Label::Normal),
            ("b", &[0.3, 0.1], Label::Normal),
            ("c", &[0.7, 0.8], Label::Seminar),
            ("d", &[0.9, 0.6], Label::Seminar),
        ]);
        let mut rows = set.rows.clone();
        rows.reverse();
        let permuted = TrainingSet::new(set.feature_names.clone(), rows).unwrap();
        let params = SmoParams::default();
        let m1 = train_smo(&set, &params).unwrap().model;
        let m2 = train_smo(&permuted, &params).unwrap().model;
        for x in [[0.1, 0.1], [0.8, 0.8], [0.4, 0.6]] {
            let (l1, _) = m1.predict(&x).unwrap();
            let (l2, _) = m2.predict(&x).unwrap();
            assert_eq!(l1, l2);
        }
    }

    #[test]
    fn interior_support_vectors_sit_on_margin() {
        let set = ts(&[
            ("a", &[0.1, 0.0], Label::Normal),
            ("b", &[0.0, 0.2], Label::Normal),
            ("c", &[0.9, 1.0], Label::Seminar),
            ("d", &[1.0, 0.8], Label::Seminar),
        ]);
        let params = SmoParams {
            c: 50.0,
            gamma: Some(1.0),
            ..Default::default()
        };
        let result = train_smo(&set, &params).unwrap();
        assert!(result.converged);
        for (alpha, row) in result.alphas.iter().zip(&set.rows) {
            if *alpha > 1e-9 && *alpha < params.c - 1e-9 {
                let margin = result.model.decision(&row.features).unwrap() * row.label.sign();
                assert!((margin - 1.0).abs() <= params.tol + 1e-6, "margin {margin}");
            }
        }
    }

    #[test]
    fn far_point_decision_tends_to_bias() {
        let set = ts(&[
            ("a", &[0.0], Label::Normal),
            ("b", &[1.0], Label::Seminar),
        ]);
        let params = SmoParams {
            c: 10.0,
            gamma: Some(5.0),
            ..Default::default()
        };
        let result = train_smo(&set, &params).unwrap();
        let far = result.model.decision(&[1000.0]).unwrap();
        assert!((far - result.model.bias).abs() < 1e-12);
    }

    #[test]
    fn single_class_rejected() {
        let bad = TrainingSet {
            feature_names: vec!["f0".into()],
            rows: vec![
                TrainingRow {
                    user_id: "a".into(),
                    features: vec![0.0],
                    label: Label::Seminar,
                },
                TrainingRow {
                    user_id: "b".into(),
                    features: vec![1.0],
                    label: Label::Seminar,
                },
            ],
        };
        assert!(matches!(
            train_smo(&bad, &SmoParams::default()),
            Err(Error::DegenerateLabels)
        ));
    }
}
