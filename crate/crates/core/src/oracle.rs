//! Brute-force ground truth for desk-scale tests.
//!
//! A sketch says how many items produced each decision pattern, but not how
//! many of those items were truly A. Enumerating every way to split every
//! pattern count into true-A and true-B parts yields exactly the set of
//! ground truths consistent with the sketch. Everything the axioms claim can
//! be checked against this enumeration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::axioms::{feasible_interval_label_a, single_axiom_residual, PairConstraint};
use crate::error::{Error, Result};
use crate::model::{CorrectCounts, EvaluationPoint, EvaluationSketch, PairCorrect, TruthSplit};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Every `(R_aia, R_bib, Q_a)` a single classifier could have on a test of
/// size `q`, ordered by `(Q_a, R_aia, R_bib)`.
pub fn enumerate_evaluations(q: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for q_a in 0..=q {
        for r_aia in 0..=q_a {
            for r_bib in 0..=q - q_a {
                out.push((r_aia, r_bib, q_a));
            }
        }
    }
    out
}

/// `(Q+1)(Q+2)(Q+3)/6`, the size of [`enumerate_evaluations`].
pub fn evaluation_count(q: i64) -> u128 {
    let q = q as u128;
    (q + 1) * (q + 2) * (q + 3) / 6
}

/// Number of `(R_aia, R_bib, Q_a)` triples left once a classifier's
/// marginal `R_a` is observed.
pub fn count_feasible(q: i64, r_a: i64) -> Result<i64> {
    (0..=q)
        .map(|q_a| feasible_interval_label_a(q, q_a, r_a).map(|i| i.len()))
        .sum()
}

/// Number of split combinations [`enumerate_variety`] would visit.
pub fn split_space_size(sketch: &EvaluationSketch) -> u128 {
    sketch
        .counts()
        .iter()
        .map(|&c| (c.max(0) as u128) + 1)
        .try_fold(1u128, |acc, x| acc.checked_mul(x))
        .unwrap_or(u128::MAX)
}

/// One consistent ground truth: the split of every pattern count and the
/// evaluation it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyPoint {
    pub split: Vec<TruthSplit>,
    pub point: EvaluationPoint,
}

/// Borrowed view of the enumeration state at one variety point.
pub struct VarietyView<'a> {
    pub q_a: i64,
    /// True-A part of each pattern count, in pattern-index order.
    pub true_a: &'a [i64],
    pub correct: &'a [CorrectCounts],
    pub pairs: &'a [PairCorrect],
}

impl VarietyView<'_> {
    pub fn to_owned_point(&self, counts: &[i64]) -> VarietyPoint {
        VarietyPoint {
            split: self
                .true_a
                .iter()
                .zip(counts)
                .map(|(&a, &c)| TruthSplit::new(a, c - a))
                .collect(),
            point: EvaluationPoint {
                q_a: self.q_a,
                classifiers: self.correct.to_vec(),
                pairs: self.pairs.to_vec(),
            },
        }
    }
}

/// Visits every variety point of a valid sketch in a fixed order (odometer
/// over pattern indices, last pattern fastest).
pub fn for_each_variety_point<F>(sketch: &EvaluationSketch, budget: u128, mut visit: F) -> Result<()>
where
    F: FnMut(&VarietyView<'_>),
{
    sketch.ensure_valid()?;
    let size = split_space_size(sketch);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let n = sketch.n();
    let counts = sketch.counts();
    let says_a = |idx: usize, k: usize| (idx >> (n - 1 - k)) & 1 == 0;

    let mut pair_list = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pair_list.push((i, j));
        }
    }

    // Start from the all-true-B split.
    let mut true_a = vec![0i64; counts.len()];
    let mut q_a = 0i64;
    let mut correct = vec![CorrectCounts { r_aia: 0, r_bib: 0 }; n];
    let mut pairs: Vec<PairCorrect> = pair_list
        .iter()
        .map(|&(i, j)| PairCorrect {
            i,
            j,
            r_aiaja: 0,
            r_bibjb: 0,
        })
        .collect();
    for (idx, &c) in counts.iter().enumerate() {
        for (k, cc) in correct.iter_mut().enumerate() {
            if !says_a(idx, k) {
                cc.r_bib += c;
            }
        }
        for p in pairs.iter_mut() {
            if !says_a(idx, p.i) && !says_a(idx, p.j) {
                p.r_bibjb += c;
            }
        }
    }

    // Moves `delta` items of pattern `idx` from true-B to true-A.
    let shift = |idx: usize,
                 delta: i64,
                 q_a: &mut i64,
                 correct: &mut [CorrectCounts],
                 pairs: &mut [PairCorrect]| {
        *q_a += delta;
        for (k, cc) in correct.iter_mut().enumerate() {
            if says_a(idx, k) {
                cc.r_aia += delta;
            } else {
                cc.r_bib -= delta;
            }
        }
        for p in pairs.iter_mut() {
            match (says_a(idx, p.i), says_a(idx, p.j)) {
                (true, true) => p.r_aiaja += delta,
                (false, false) => p.r_bibjb -= delta,
                _ => {}
            }
        }
    };

    loop {
        visit(&VarietyView {
            q_a,
            true_a: &true_a,
            correct: &correct,
            pairs: &pairs,
        });
        // odometer increment
        let mut pos = counts.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if true_a[pos] < counts[pos] {
                true_a[pos] += 1;
                shift(pos, 1, &mut q_a, &mut correct, &mut pairs);
                break;
            }
            let back = true_a[pos];
            true_a[pos] = 0;
            shift(pos, -back, &mut q_a, &mut correct, &mut pairs);
        }
    }
}

/// All ground truths consistent with the sketch.
pub fn enumerate_variety(sketch: &EvaluationSketch, budget: u128) -> Result<Vec<VarietyPoint>> {
    let mut out = Vec::new();
    let counts = sketch.counts().to_vec();
    for_each_variety_point(sketch, budget, |v| out.push(v.to_owned_point(&counts)))?;
    Ok(out)
}

/// A claimed pair of joint correct counts, by classifier id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimedPair {
    pub i: String,
    pub j: String,
    pub r_aiaja: i64,
    pub r_bibjb: i64,
}

/// A claimed evaluation; classifiers not listed are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimedPoint {
    pub q_a: i64,
    #[serde(default)]
    pub classifiers: BTreeMap<String, CorrectCounts>,
    #[serde(default)]
    pub pairs: Vec<ClaimedPair>,
}

/// Statistics someone asserts about a test, to be checked against its sketch.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claims {
    /// Claimed number of A responses per classifier.
    #[serde(default)]
    pub marginals: BTreeMap<String, i64>,
    #[serde(default)]
    pub point: Option<ClaimedPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub violations: Vec<String>,
    /// Whether no enumerated ground truth matches every claim; `None` when
    /// the enumeration was skipped.
    pub variety_empty: Option<bool>,
    /// Set when the enumeration budget was exceeded and only the closed-form
    /// axioms were checked.
    pub axioms_only: bool,
}

impl SummaryReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.variety_empty != Some(true)
    }
}

struct ResolvedPoint {
    q_a: i64,
    classifiers: Vec<(usize, CorrectCounts)>,
    pairs: Vec<(usize, usize, i64, i64)>,
}

fn resolve(sketch: &EvaluationSketch, p: &ClaimedPoint, violations: &mut Vec<String>) -> Option<ResolvedPoint> {
    let mut classifiers = Vec::new();
    for (id, c) in &p.classifiers {
        match sketch.index_of(id) {
            Ok(k) => classifiers.push((k, *c)),
            Err(e) => violations.push(format!("claimed point: {e}")),
        }
    }
    let mut pairs = Vec::new();
    for cp in &p.pairs {
        match (sketch.index_of(&cp.i), sketch.index_of(&cp.j)) {
            (Ok(i), Ok(j)) if i != j => {
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                pairs.push((i, j, cp.r_aiaja, cp.r_bibjb));
            }
            (Ok(_), Ok(_)) => violations.push(format!("claimed pair ({}, {}) repeats a classifier", cp.i, cp.j)),
            (Err(e), _) | (_, Err(e)) => violations.push(format!("claimed pair: {e}")),
        }
    }
    (violations.is_empty()).then_some(ResolvedPoint {
        q_a: p.q_a,
        classifiers,
        pairs,
    })
}

/// Checks a sketch and optional claims against the axioms, then (within
/// budget) asks whether any consistent ground truth matches every claim.
pub fn check_summary(sketch: &EvaluationSketch, claims: &Claims, budget: u128) -> SummaryReport {
    let mut violations: Vec<String> = sketch.validate().iter().map(|v| v.to_string()).collect();
    let sketch_ok = violations.is_empty();
    let q = sketch.q();
    let mut marginals_ok = true;

    for (id, &claimed) in &claims.marginals {
        match sketch.marginalize(id) {
            Ok(m) if m.r_a != claimed => {
                marginals_ok = false;
                violations.push(format!(
                    "claimed R_a = {claimed} for `{id}` but pattern sums give {}",
                    m.r_a
                ));
            }
            Ok(_) => {}
            Err(e) => {
                marginals_ok = false;
                violations.push(format!("claimed marginal: {e}"));
            }
        }
    }

    let mut resolved = None;
    if let Some(p) = &claims.point {
        let mut local = Vec::new();
        if let Some(r) = resolve(sketch, p, &mut local) {
            if r.q_a < 0 || r.q_a > q {
                local.push(format!("claimed Q_a = {} outside [0, {q}]", r.q_a));
            }
            for &(k, c) in &r.classifiers {
                let id = &sketch.classifier_ids()[k];
                if c.r_aia < 0 || c.r_aia > r.q_a || c.r_bib < 0 || c.r_bib > q - r.q_a {
                    local.push(format!("claimed counts for `{id}` outside the evaluation lattice"));
                }
                if sketch_ok {
                    let m = sketch.marginals_at(k);
                    if let Ok(res) = single_axiom_residual(q, r.q_a, m, c) {
                        if res != 0 {
                            local.push(format!("claimed point violates the single axiom for `{id}` (residual {res})"));
                        }
                    }
                }
            }
            for &(i, j, r_aiaja, r_bibjb) in &r.pairs {
                let (ci, cj) = (
                    r.classifiers.iter().find(|(k, _)| *k == i).map(|x| x.1),
                    r.classifiers.iter().find(|(k, _)| *k == j).map(|x| x.1),
                );
                let name = format!("({}, {})", sketch.classifier_ids()[i], sketch.classifier_ids()[j]);
                if r_aiaja < 0 || r_bibjb < 0 {
                    local.push(format!("claimed joint counts for {name} are negative"));
                }
                if let (Some(ci), Some(cj)) = (ci, cj) {
                    if r_aiaja > ci.r_aia.min(cj.r_aia) || r_bibjb > ci.r_bib.min(cj.r_bib) {
                        local.push(format!("claimed joint counts for {name} exceed the individual counts"));
                    }
                    if sketch_ok && (0..=q).contains(&r.q_a) {
                        if let Ok(pc) = PairConstraint::new(q, r.q_a, &sketch.pair_counts_at(i, j)) {
                            let expected = pc.sum_from_a(ci.r_aia, cj.r_aia);
                            if r_aiaja + r_bibjb != expected {
                                local.push(format!(
                                    "claimed point violates the pair axiom for {name}: R_aiaja + R_bibjb = {} but the axiom requires {expected}",
                                    r_aiaja + r_bibjb
                                ));
                            }
                        }
                    }
                }
            }
            resolved = Some(r);
        }
        violations.extend(local);
    }

    if !sketch_ok {
        return SummaryReport {
            violations,
            variety_empty: None,
            axioms_only: true,
        };
    }
    if !marginals_ok {
        // observed marginals are fixed by the pattern counts; nothing can match
        return SummaryReport {
            violations,
            variety_empty: Some(true),
            axioms_only: false,
        };
    }
    if claims.point.is_some() && resolved.is_none() {
        return SummaryReport {
            violations,
            variety_empty: Some(true),
            axioms_only: false,
        };
    }

    let mut found = false;
    let pair_slot = |i: usize, j: usize, n: usize| -> usize {
        // index of (i, j), i < j, in row-major upper-triangle order
        i * n - i * (i + 1) / 2 + (j - i - 1)
    };
    let n = sketch.n();
    let outcome = for_each_variety_point(sketch, budget, |v| {
        if found {
            return;
        }
        let matches = match &resolved {
            None => true,
            Some(r) => {
                v.q_a == r.q_a
                    && r.classifiers.iter().all(|(k, c)| v.correct[*k] == *c)
                    && r.pairs.iter().all(|&(i, j, a, b)| {
                        let p = &v.pairs[pair_slot(i, j, n)];
                        p.r_aiaja == a && p.r_bibjb == b
                    })
            }
        };
        found = matches;
    });
    match outcome {
        Ok(()) => SummaryReport {
            violations,
            variety_empty: Some(!found),
            axioms_only: false,
        },
        Err(_) => SummaryReport {
            violations,
            variety_empty: None,
            axioms_only: true,
        },
    }
}
