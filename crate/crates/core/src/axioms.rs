//! Closed-form single-classifier and pair axioms in R-space, the feasible
//! intervals they induce at a fixed number of true-A items, and the P-space
//! statistics (prevalence, per-label accuracies, Γ and Δ) of a truth-split
//! sketch.
//!
//! Notation in identifiers: `r_a`/`r_b` are observed response counts,
//! `r_aia`/`r_bib` the unobserved correct counts per label, `q_a` the number
//! of items whose true label is A.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CorrectCounts, EvaluationPoint, EvaluationSketch, Label, Marginals, PairCorrect, PairCounts,
};
use crate::rational::{int, Rational};
use num_traits::Zero;

/// Inclusive integer interval; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntInterval {
    pub lo: i64,
    pub hi: i64,
}

impl IntInterval {
    pub fn new(lo: i64, hi: i64) -> Self {
        IntInterval { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    /// Number of integers in the interval.
    pub fn len(&self) -> i64 {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: &IntInterval) -> IntInterval {
        IntInterval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = i64> {
        self.lo..=self.hi
    }
}

fn check_qa(q: i64, q_a: i64) -> Result<()> {
    if q < 0 || q_a < 0 || q_a > q {
        return Err(Error::OutOfRange(format!("Q_a = {q_a} outside [0, {q}]")));
    }
    Ok(())
}

fn check_marginals(q: i64, m: &Marginals) -> Result<()> {
    if m.r_a < 0 || m.r_b < 0 || m.r_a + m.r_b != q {
        return Err(Error::OutOfRange(format!(
            "marginals ({}, {}) do not sum to Q = {q}",
            m.r_a, m.r_b
        )));
    }
    Ok(())
}

/// Value of `(Q R_aia - Q_a R_a) - (Q R_bib - Q_b R_b)`; zero exactly when
/// the correct counts are consistent with the observed marginals.
pub fn single_axiom_residual(
    q: i64,
    q_a: i64,
    marginals: Marginals,
    correct: CorrectCounts,
) -> Result<i128> {
    check_marginals(q, &marginals)?;
    let (q, q_a) = (q as i128, q_a as i128);
    let q_b = q - q_a;
    let lhs = q * correct.r_aia as i128 - q_a * marginals.r_a as i128;
    let rhs = q * correct.r_bib as i128 - q_b * marginals.r_b as i128;
    Ok(lhs - rhs)
}

/// `R_bib` forced by the single axiom once `R_aia` is fixed.
pub fn r_bib_from_r_aia(q: i64, q_a: i64, r_a: i64, r_aia: i64) -> i64 {
    q - q_a - r_a + r_aia
}

/// Values of `R_aia` allowed by the single axiom at a fixed `Q_a`.
pub fn feasible_interval_label_a(q: i64, q_a: i64, r_a: i64) -> Result<IntInterval> {
    check_qa(q, q_a)?;
    if r_a < 0 || r_a > q {
        return Err(Error::OutOfRange(format!("R_a = {r_a} outside [0, {q}]")));
    }
    Ok(IntInterval::new(0.max(r_a - (q - q_a)), q_a.min(r_a)))
}

/// Values of `R_bib` allowed by the single axiom at a fixed `Q_a`.
pub fn feasible_interval_label_b(q: i64, q_a: i64, r_b: i64) -> Result<IntInterval> {
    check_qa(q, q_a)?;
    if r_b < 0 || r_b > q {
        return Err(Error::OutOfRange(format!("R_b = {r_b} outside [0, {q}]")));
    }
    Ok(IntInterval::new(0.max(r_b - q_a), (q - q_a).min(r_b)))
}

/// The pair axiom at a fixed `Q_a`, stored as its two affine forms.
///
/// `R_aiaja + R_bibjb` equals `offset_a + R_aia + R_aja` and also
/// `offset_b + R_bib + R_bjb`; the two agree whenever both classifiers obey
/// the single axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairConstraint {
    pub q: i64,
    pub q_a: i64,
    pub marginals_i: Marginals,
    pub marginals_j: Marginals,
    /// `Q_b - (R_ai + R_aj) + R_aiaj`
    pub offset_a: i64,
    /// `Q_a - (R_bi + R_bj) + R_bibj`
    pub offset_b: i64,
    /// Observed joint decision counts `R_aiaj` and `R_bibj`.
    pub joint_aa: i64,
    pub joint_bb: i64,
}

impl PairConstraint {
    pub fn new(q: i64, q_a: i64, counts: &PairCounts) -> Result<Self> {
        check_qa(q, q_a)?;
        if counts.total() != q || counts.as_array().iter().any(|c| *c < 0) {
            return Err(Error::OutOfRange(format!(
                "pair counts {:?} do not form a test of size {q}",
                counts.as_array()
            )));
        }
        let mi = counts.marginals_i();
        let mj = counts.marginals_j();
        Ok(PairConstraint {
            q,
            q_a,
            marginals_i: mi,
            marginals_j: mj,
            offset_a: (q - q_a) - (mi.r_a + mj.r_a) + counts.aa,
            offset_b: q_a - (mi.r_b + mj.r_b) + counts.bb,
            joint_aa: counts.aa,
            joint_bb: counts.bb,
        })
    }

    pub fn sum_from_a(&self, r_aia: i64, r_aja: i64) -> i64 {
        self.offset_a + r_aia + r_aja
    }

    pub fn sum_from_b(&self, r_bib: i64, r_bjb: i64) -> i64 {
        self.offset_b + r_bib + r_bjb
    }

    /// Whether the candidate `(R_aia, R_aja)`, lying in the single-axiom
    /// rectangle, admits joint correct counts satisfying the pair axiom.
    pub fn feasible(&self, r_aia: i64, r_aja: i64) -> Result<bool> {
        let ia = feasible_interval_label_a(self.q, self.q_a, self.marginals_i.r_a)?;
        let ja = feasible_interval_label_a(self.q, self.q_a, self.marginals_j.r_a)?;
        if !ia.contains(r_aia) || !ja.contains(r_aja) {
            return Err(Error::OutOfRange(format!(
                "candidate ({r_aia}, {r_aja}) outside the single-axiom rectangle [{}, {}] x [{}, {}]",
                ia.lo, ia.hi, ja.lo, ja.hi
            )));
        }
        Ok(self.feasible_unchecked(r_aia, r_aja))
    }

    /// [`feasible`](Self::feasible) without the rectangle check.
    pub fn feasible_unchecked(&self, r_aia: i64, r_aja: i64) -> bool {
        let r_bib = r_bib_from_r_aia(self.q, self.q_a, self.marginals_i.r_a, r_aia);
        let r_bjb = r_bib_from_r_aia(self.q, self.q_a, self.marginals_j.r_a, r_aja);
        let sum = self.sum_from_a(r_aia, r_aja);
        let (joint_a, joint_b) = self.joint_ranges(r_aia, r_aja, r_bib, r_bjb);
        !joint_a.is_empty()
            && !joint_b.is_empty()
            && joint_a.lo + joint_b.lo <= sum
            && sum <= joint_a.hi + joint_b.hi
    }

    /// Lattice ranges of `R_aiaja` and `R_bibjb` before the pair axiom ties
    /// them together: a joint correct count is at most either classifier's
    /// correct count and the pair's joint decision count, and at least the
    /// overlap forced by inclusion-exclusion.
    pub fn joint_ranges(
        &self,
        r_aia: i64,
        r_aja: i64,
        r_bib: i64,
        r_bjb: i64,
    ) -> (IntInterval, IntInterval) {
        let q_b = self.q - self.q_a;
        (
            IntInterval::new(
                0.max(r_aia + r_aja - self.q_a),
                r_aia.min(r_aja).min(self.joint_aa),
            ),
            IntInterval::new(
                0.max(r_bib + r_bjb - q_b),
                r_bib.min(r_bjb).min(self.joint_bb),
            ),
        )
    }
}

/// Value that `R_aiaja + R_bibjb` must take, from the label-A form.
pub fn pair_axiom_sum(
    q: i64,
    q_a: i64,
    marginals_i: Marginals,
    marginals_j: Marginals,
    r_aiaj: i64,
    r_aia: i64,
    r_aja: i64,
) -> Result<i64> {
    check_qa(q, q_a)?;
    check_marginals(q, &marginals_i)?;
    check_marginals(q, &marginals_j)?;
    if r_aiaj < 0 || r_aiaj > marginals_i.r_a.min(marginals_j.r_a) {
        return Err(Error::OutOfRange(format!("R_aiaj = {r_aiaj} not a valid joint count")));
    }
    if r_aia < 0 || r_aia > q_a || r_aja < 0 || r_aja > q_a {
        return Err(Error::OutOfRange(format!(
            "correct counts ({r_aia}, {r_aja}) outside [0, {q_a}]"
        )));
    }
    Ok((q - q_a) - (marginals_i.r_a + marginals_j.r_a) + r_aiaj + (r_aia + r_aja))
}

/// The label-B form of [`pair_axiom_sum`].
pub fn pair_axiom_sum_label_b(
    q: i64,
    q_a: i64,
    marginals_i: Marginals,
    marginals_j: Marginals,
    r_bibj: i64,
    r_bib: i64,
    r_bjb: i64,
) -> Result<i64> {
    check_qa(q, q_a)?;
    check_marginals(q, &marginals_i)?;
    check_marginals(q, &marginals_j)?;
    if r_bibj < 0 || r_bibj > marginals_i.r_b.min(marginals_j.r_b) {
        return Err(Error::OutOfRange(format!("R_bibj = {r_bibj} not a valid joint count")));
    }
    let q_b = q - q_a;
    if r_bib < 0 || r_bib > q_b || r_bjb < 0 || r_bjb > q_b {
        return Err(Error::OutOfRange(format!(
            "correct counts ({r_bib}, {r_bjb}) outside [0, {q_b}]"
        )));
    }
    Ok(q_a - (marginals_i.r_b + marginals_j.r_b) + r_bibj + (r_bib + r_bjb))
}

/// Candidate check for a pair: see [`PairConstraint::feasible`].
pub fn pair_feasible(
    q: i64,
    q_a: i64,
    counts: &PairCounts,
    candidate: (i64, i64),
) -> Result<bool> {
    PairConstraint::new(q, q_a, counts)?.feasible(candidate.0, candidate.1)
}

/// The R-space generating set for a pair: the four joint decision counts
/// produced by a pair evaluation.
pub fn reconstruct_pair_counts(
    q: i64,
    q_a: i64,
    ci: CorrectCounts,
    cj: CorrectCounts,
    joint: &PairCorrect,
) -> PairCounts {
    let q_b = q - q_a;
    PairCounts {
        aa: joint.r_aiaja + (q_b - ci.r_bib - cj.r_bib + joint.r_bibjb),
        ab: (ci.r_aia - joint.r_aiaja) + (cj.r_bib - joint.r_bibjb),
        ba: (cj.r_aia - joint.r_aiaja) + (ci.r_bib - joint.r_bibjb),
        bb: (q_a - ci.r_aia - cj.r_aia + joint.r_aiaja) + joint.r_bibjb,
    }
}

/// The ground-truth evaluation recorded by a truth-split sketch, with every
/// pair's joint correct counts.
pub fn true_evaluation(sketch: &EvaluationSketch) -> Result<EvaluationPoint> {
    let ts = sketch.truth_split().ok_or(Error::NoTruthSplit)?;
    let n = sketch.n();
    let mut classifiers = vec![CorrectCounts { r_aia: 0, r_bib: 0 }; n];
    for (idx, s) in ts.iter().enumerate() {
        for (k, c) in classifiers.iter_mut().enumerate() {
            if (idx >> (n - 1 - k)) & 1 == 0 {
                c.r_aia += s.true_a;
            } else {
                c.r_bib += s.true_b;
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(PairCorrect {
                i,
                j,
                r_aiaja: sketch.pair_counts_given_truth(i, j, Label::A)?.aa,
                r_bibjb: sketch.pair_counts_given_truth(i, j, Label::B)?.bb,
            });
        }
    }
    Ok(EvaluationPoint {
        q_a: ts.iter().map(|s| s.true_a).sum(),
        classifiers,
        pairs,
    })
}

/// Δ for a pair from its four decision frequencies `[f_aa, f_ab, f_ba, f_bb]`,
/// computed under both label definitions and required to agree.
pub fn pair_delta(freqs: &[Rational; 4]) -> Result<Rational> {
    let [aa, ab, ba, bb] = freqs;
    let fa_i = aa + ab;
    let fa_j = aa + ba;
    let fb_i = ba + bb;
    let fb_j = ab + bb;
    let from_a = aa - &fa_i * &fa_j;
    let from_b = bb - &fb_i * &fb_j;
    if from_a != from_b {
        return Err(Error::Invariant(format!(
            "Δ definitions disagree ({from_a} vs {from_b}); frequencies are not complete"
        )));
    }
    Ok(from_a)
}

fn freqs_of(counts: &PairCounts, q: i64) -> [Rational; 4] {
    counts.as_array().map(|c| Rational::new(c.into(), q.into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierPStats {
    pub id: String,
    /// `R_aia / Q_a`, undefined when no item is truly A.
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub pi_a: Option<Rational>,
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub pi_b: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPStats {
    pub i: String,
    pub j: String,
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub gamma_a: Option<Rational>,
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub gamma_b: Option<Rational>,
    #[serde(with = "crate::rational::serde_ratio")]
    pub delta: Rational,
}

/// Exact P-space statistics of a truth-split sketch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSpaceStats {
    #[serde(with = "crate::rational::serde_ratio")]
    pub p_a: Rational,
    #[serde(with = "crate::rational::serde_ratio")]
    pub p_b: Rational,
    pub classifiers: Vec<ClassifierPStats>,
    pub pairs: Vec<PairPStats>,
}

impl PSpaceStats {
    pub fn pair(&self, i: &str, j: &str) -> Option<&PairPStats> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }

    pub fn classifier(&self, id: &str) -> Option<&ClassifierPStats> {
        self.classifiers.iter().find(|c| c.id == id)
    }

    /// Pair decision frequencies regenerated from prevalence, per-label
    /// accuracies and Γ through the P-space generating set.
    pub fn reconstruct_pair_frequencies(&self, i: &str, j: &str) -> Result<[Rational; 4]> {
        let ci = self
            .classifier(i)
            .ok_or_else(|| Error::UnknownClassifier(i.into()))?;
        let cj = self
            .classifier(j)
            .ok_or_else(|| Error::UnknownClassifier(j.into()))?;
        let pair = self
            .pair(i, j)
            .ok_or_else(|| Error::UnknownClassifier(format!("{i}/{j}")))?;
        let one = int(1);
        let mut out: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        if !self.p_a.is_zero() {
            let (pa_i, pa_j, g) = match (&ci.pi_a, &cj.pi_a, &pair.gamma_a) {
                (Some(x), Some(y), Some(g)) => (x, y, g),
                _ => return Err(Error::Invariant("label A statistics undefined".into())),
            };
            let terms = [
                pa_i * pa_j + g,
                pa_i * (&one - pa_j) - g,
                (&one - pa_i) * pa_j - g,
                (&one - pa_i) * (&one - pa_j) + g,
            ];
            for (o, t) in out.iter_mut().zip(terms) {
                *o += &self.p_a * t;
            }
        }
        if !self.p_b.is_zero() {
            let (pb_i, pb_j, g) = match (&ci.pi_b, &cj.pi_b, &pair.gamma_b) {
                (Some(x), Some(y), Some(g)) => (x, y, g),
                _ => return Err(Error::Invariant("label B statistics undefined".into())),
            };
            let terms = [
                (&one - pb_i) * (&one - pb_j) + g,
                (&one - pb_i) * pb_j - g,
                pb_i * (&one - pb_j) - g,
                pb_i * pb_j + g,
            ];
            for (o, t) in out.iter_mut().zip(terms) {
                *o += &self.p_b * t;
            }
        }
        Ok(out)
    }
}

pub fn pspace_stats(sketch: &EvaluationSketch) -> Result<PSpaceStats> {
    sketch.ensure_valid()?;
    let truth = true_evaluation(sketch)?;
    let q = sketch.q();
    let q_a = truth.q_a;
    let q_b = q - q_a;
    let ratio_or_none = |num: i64, den: i64| (den != 0).then(|| Rational::new(num.into(), den.into()));
    let ids = sketch.classifier_ids();
    let classifiers: Vec<ClassifierPStats> = ids
        .iter()
        .zip(&truth.classifiers)
        .map(|(id, c)| ClassifierPStats {
            id: id.clone(),
            pi_a: ratio_or_none(c.r_aia, q_a),
            pi_b: ratio_or_none(c.r_bib, q_b),
        })
        .collect();
    let mut pairs = Vec::new();
    for p in &truth.pairs {
        let (ci, cj) = (&classifiers[p.i], &classifiers[p.j]);
        let gamma_a = match (ratio_or_none(p.r_aiaja, q_a), &ci.pi_a, &cj.pi_a) {
            (Some(joint), Some(x), Some(y)) => Some(joint - x * y),
            _ => None,
        };
        let gamma_b = match (ratio_or_none(p.r_bibjb, q_b), &ci.pi_b, &cj.pi_b) {
            (Some(joint), Some(x), Some(y)) => Some(joint - x * y),
            _ => None,
        };
        let delta = pair_delta(&freqs_of(&sketch.pair_counts_at(p.i, p.j), q))?;
        pairs.push(PairPStats {
            i: ids[p.i].clone(),
            j: ids[p.j].clone(),
            gamma_a,
            gamma_b,
            delta,
        });
    }
    Ok(PSpaceStats {
        p_a: Rational::new(q_a.into(), q.into()),
        p_b: Rational::new(q_b.into(), q.into()),
        classifiers,
        pairs,
    })
}

/// Δ for a pair of classifiers in any valid sketch (truth not needed).
pub fn sketch_delta(sketch: &EvaluationSketch, i: &str, j: &str) -> Result<Rational> {
    sketch.ensure_valid()?;
    pair_delta(&freqs_of(&sketch.pair_counts(i, j)?, sketch.q()))
}
