//! The misalignment alarm.
//!
//! For every assumed number of true-A items `Q_a` in `0..=Q`, the single
//! axiom confines each classifier's correct counts to a segment. If at no
//! `Q_a` every classifier can simultaneously meet the safety spec, at least
//! one of them is malfunctioning; that is the only thing the alarm certifies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::axioms::{
    feasible_interval_label_a, feasible_interval_label_b, IntInterval, PairConstraint,
};
use crate::error::{Error, Result};
use crate::model::{EvaluationSketch, Marginals, SafetySpec};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlarmMode {
    Pair(String, String),
    Ensemble,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Triggered,
    NotTriggered,
}

/// Feasible correct-count ranges for one classifier at one `Q_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelIntervals {
    pub interval_a: IntInterval,
    pub interval_b: IntInterval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaSlice {
    pub q_a: i64,
    pub classifiers: Vec<LabelIntervals>,
    pub safe_exists: bool,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlarmTrace {
    pub q: i64,
    pub spec: SafetySpec,
    pub mode: AlarmMode,
    pub classifiers: Vec<String>,
    /// Inclusive range of `Q_a` the slices cover.
    pub qa_range: (i64, i64),
    pub slices: Vec<QaSlice>,
    pub verdict: Verdict,
}

impl AlarmTrace {
    pub fn slice(&self, q_a: i64) -> Option<&QaSlice> {
        self.slices.iter().find(|s| s.q_a == q_a)
    }

    pub fn is_triggered(&self) -> bool {
        self.verdict == Verdict::Triggered
    }

    /// Human-readable label for the classifiers the trace covers.
    pub fn series_name(&self) -> String {
        match &self.mode {
            AlarmMode::Pair(i, j) => format!("{i} + {j}"),
            AlarmMode::Ensemble => self.classifiers.join(" + "),
        }
    }
}

fn verdict_of<'a>(slices: impl IntoIterator<Item = &'a QaSlice>) -> Verdict {
    if slices.into_iter().any(|s| s.safe_exists) {
        Verdict::NotTriggered
    } else {
        Verdict::Triggered
    }
}

/// Minimum correct counts a classifier needs at a given `Q_a` to be safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SafeThreshold {
    /// Least `R_aia` and `R_bib`; 0 when the label has no items.
    PerLabel { min_a: i64, min_b: i64 },
    /// Least `R_aia + R_bib`.
    Overall { min_total: i64 },
}

/// Least integer `n` with `n / den > t` (strict) or `n / den >= t`.
fn least_count(t: &Rational, den: i64, strict: bool) -> i64 {
    if den == 0 {
        return 0;
    }
    let scaled = t * Rational::from_integer(BigInt::from(den));
    let n = if strict {
        scaled.floor().to_integer() + 1
    } else {
        scaled.ceil().to_integer()
    };
    // thresholds lie in [0, 1], so n is within [0, den + 1]
    n.to_i64().expect("threshold count fits in i64")
}

pub fn safe_threshold(q_a: i64, q: i64, spec: &SafetySpec) -> SafeThreshold {
    match spec {
        SafetySpec::PerLabel {
            threshold_a,
            threshold_b,
            strict,
        } => SafeThreshold::PerLabel {
            min_a: least_count(threshold_a, q_a, *strict),
            min_b: least_count(threshold_b, q - q_a, *strict),
        },
        SafetySpec::Overall { threshold, strict } => SafeThreshold::Overall {
            min_total: least_count(threshold, q, *strict),
        },
    }
}

/// The values of `R_aia` at which a classifier is both consistent with its
/// marginals and safe. `R_bib` rises one-for-one with `R_aia`, so the set is
/// a sub-interval of the feasible interval sharing its upper end.
fn safe_r_aia(
    q: i64,
    q_a: i64,
    marginals: Marginals,
    feasible: IntInterval,
    threshold: SafeThreshold,
) -> IntInterval {
    // R_bib = R_aia + offset
    let offset = (q - q_a) - marginals.r_a;
    let lo = match threshold {
        SafeThreshold::PerLabel { min_a, min_b } => min_a.max(min_b - offset),
        SafeThreshold::Overall { min_total } => Integer::div_ceil(&(min_total - offset), &2),
    };
    IntInterval::new(feasible.lo.max(lo), feasible.hi)
}

struct Prepared<'a> {
    sketch: &'a EvaluationSketch,
    positions: Vec<usize>,
    marginals: Vec<Marginals>,
}

impl<'a> Prepared<'a> {
    fn new(sketch: &'a EvaluationSketch, mode: &AlarmMode) -> Result<Self> {
        sketch.ensure_valid()?;
        let positions = match mode {
            AlarmMode::Pair(i, j) => {
                let (pi, pj) = (sketch.index_of(i)?, sketch.index_of(j)?);
                if pi == pj {
                    return Err(Error::Invalid(format!("pair mode needs two distinct classifiers, got `{i}` twice")));
                }
                vec![pi, pj]
            }
            AlarmMode::Ensemble => (0..sketch.n()).collect(),
        };
        let marginals = positions.iter().map(|&k| sketch.marginals_at(k)).collect();
        Ok(Prepared {
            sketch,
            positions,
            marginals,
        })
    }

    fn slice(&self, q_a: i64, spec: &SafetySpec, refine: bool) -> Result<QaSlice> {
        let q = self.sketch.q();
        let threshold = safe_threshold(q_a, q, spec);
        let mut classifiers = Vec::with_capacity(self.positions.len());
        let mut safe_ranges = Vec::with_capacity(self.positions.len());
        for m in &self.marginals {
            let interval_a = feasible_interval_label_a(q, q_a, m.r_a)?;
            let interval_b = feasible_interval_label_b(q, q_a, m.r_b)?;
            classifiers.push(LabelIntervals {
                interval_a,
                interval_b,
            });
            safe_ranges.push(safe_r_aia(q, q_a, *m, interval_a, threshold));
        }
        let cuboid_safe = safe_ranges.iter().all(|r| !r.is_empty());
        let refined = refine && self.positions.len() >= 2;
        let safe_exists = if refined && cuboid_safe {
            let mut constraints = Vec::new();
            for a in 0..self.positions.len() {
                for b in a + 1..self.positions.len() {
                    let counts = self
                        .sketch
                        .pair_counts_at(self.positions[a], self.positions[b]);
                    constraints.push((a, b, PairConstraint::new(q, q_a, &counts)?));
                }
            }
            jointly_pair_feasible(&safe_ranges, &constraints)
        } else {
            cuboid_safe
        };
        Ok(QaSlice {
            q_a,
            classifiers,
            safe_exists,
            refined,
        })
    }
}

/// Depth-first search for one `R_aia` per classifier, each within its safe
/// range, such that every pair passes its pair-axiom check.
fn jointly_pair_feasible(ranges: &[IntInterval], constraints: &[(usize, usize, PairConstraint)]) -> bool {
    fn go(
        k: usize,
        chosen: &mut Vec<i64>,
        ranges: &[IntInterval],
        constraints: &[(usize, usize, PairConstraint)],
    ) -> bool {
        if k == ranges.len() {
            return true;
        }
        // try high values first: they are the safest and most often feasible
        for v in ranges[k].iter().rev() {
            let ok = constraints
                .iter()
                .filter(|(_, b, _)| *b == k)
                .all(|(a, _, c)| c.feasible_unchecked(chosen[*a], v));
            if ok {
                chosen.push(v);
                if go(k + 1, chosen, ranges, constraints) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(0, &mut Vec::with_capacity(ranges.len()), ranges, constraints)
}

/// One slice of the scan at an assumed `Q_a`.
pub fn evaluate_qa(
    sketch: &EvaluationSketch,
    mode: &AlarmMode,
    q_a: i64,
    spec: &SafetySpec,
    refine: bool,
) -> Result<QaSlice> {
    spec.check()?;
    if q_a < 0 || q_a > sketch.q() {
        return Err(Error::OutOfRange(format!("Q_a = {q_a} outside [0, {}]", sketch.q())));
    }
    Prepared::new(sketch, mode)?.slice(q_a, spec, refine)
}

fn mode_ids(sketch: &EvaluationSketch, mode: &AlarmMode) -> Vec<String> {
    match mode {
        AlarmMode::Pair(i, j) => vec![i.clone(), j.clone()],
        AlarmMode::Ensemble => sketch.classifier_ids().to_vec(),
    }
}

/// Scans every `Q_a` in `0..=Q` and records a complete trace.
pub fn run_alarm(
    sketch: &EvaluationSketch,
    spec: &SafetySpec,
    mode: &AlarmMode,
    refine: bool,
) -> Result<AlarmTrace> {
    spec.check()?;
    let prepared = Prepared::new(sketch, mode)?;
    let slices = (0..=sketch.q())
        .map(|q_a| prepared.slice(q_a, spec, refine))
        .collect::<Result<Vec<_>>>()?;
    Ok(AlarmTrace {
        q: sketch.q(),
        spec: spec.clone(),
        mode: mode.clone(),
        classifiers: mode_ids(sketch, mode),
        qa_range: (0, sketch.q()),
        verdict: verdict_of(&slices),
        slices,
    })
}

/// Verdict only; stops at the first safe slice.
pub fn alarm_verdict(
    sketch: &EvaluationSketch,
    spec: &SafetySpec,
    mode: &AlarmMode,
    refine: bool,
) -> Result<Verdict> {
    spec.check()?;
    let prepared = Prepared::new(sketch, mode)?;
    for q_a in 0..=sketch.q() {
        if prepared.slice(q_a, spec, refine)?.safe_exists {
            return Ok(Verdict::NotTriggered);
        }
    }
    Ok(Verdict::Triggered)
}

/// Keeps only the slices whose `Q_a` lies in a known range and recomputes
/// the verdict over them.
pub fn restrict_qa_range(trace: &AlarmTrace, lo: i64, hi: i64) -> Result<AlarmTrace> {
    if lo < 0 || hi > trace.q || lo > hi {
        return Err(Error::OutOfRange(format!(
            "Q_a range [{lo}, {hi}] is empty or outside [0, {}]",
            trace.q
        )));
    }
    let slices: Vec<QaSlice> = trace
        .slices
        .iter()
        .filter(|s| lo <= s.q_a && s.q_a <= hi)
        .cloned()
        .collect();
    if slices.is_empty() {
        return Err(Error::OutOfRange(format!(
            "trace has no slices in [{lo}, {hi}]"
        )));
    }
    Ok(AlarmTrace {
        verdict: verdict_of(&slices),
        qa_range: (lo.max(trace.qa_range.0), hi.min(trace.qa_range.1)),
        slices,
        ..trace.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::big_bench_mistake;
    use crate::model::{DecisionPattern, FlipMode};
    use crate::rational::ratio;

    fn pair(i: &str, j: &str) -> AlarmMode {
        AlarmMode::Pair(i.into(), j.into())
    }

    /// Two-classifier sketch with the given A-response counts, arranged so
    /// the classifiers overlap as little as possible.
    fn two_classifier_sketch(q: i64, r_a1: i64, r_a2: i64) -> EvaluationSketch {
        let both_a = (r_a1 + r_a2 - q).max(0);
        let counts = vec![
            ("aa", both_a),
            ("ab", r_a1 - both_a),
            ("ba", r_a2 - both_a),
            ("bb", q - r_a1 - r_a2 + both_a),
        ];
        EvaluationSketch::from_patterns(
            vec!["c1".into(), "c2".into()],
            counts.into_iter().map(|(p, c)| (p.parse::<DecisionPattern>().unwrap(), c)),
        )
        .unwrap()
    }

    #[test]
    fn threshold_examples() {
        let half = SafetySpec::better_than_half();
        assert_eq!(
            safe_threshold(60, 100, &half),
            SafeThreshold::PerLabel { min_a: 31, min_b: 21 }
        );
        assert_eq!(
            safe_threshold(0, 100, &half),
            SafeThreshold::PerLabel { min_a: 0, min_b: 51 }
        );
        assert_eq!(
            safe_threshold(281, 281, &half),
            SafeThreshold::PerLabel { min_a: 141, min_b: 0 }
        );
        let loose = SafetySpec::per_label(ratio(1, 2), false).unwrap();
        assert_eq!(
            safe_threshold(60, 100, &loose),
            SafeThreshold::PerLabel { min_a: 30, min_b: 20 }
        );
        let overall = SafetySpec::overall(ratio(9, 10), true).unwrap();
        assert_eq!(
            safe_threshold(10, 100, &overall),
            SafeThreshold::Overall { min_total: 91 }
        );
    }

    #[test]
    fn two_classifier_scenario_at_sixty() {
        let s = two_classifier_sketch(100, 60, 20);
        let slice = evaluate_qa(&s, &pair("c1", "c2"), 60, &SafetySpec::better_than_half(), false)
            .unwrap();
        assert_eq!(slice.classifiers[1].interval_a, IntInterval::new(0, 20));
        assert_eq!(slice.classifiers[0].interval_a, IntInterval::new(20, 60));
        assert!(!slice.safe_exists);
    }

    #[test]
    fn single_item_single_classifier() {
        let s = EvaluationSketch::from_counts(vec!["x".into()], 1, vec![1, 0], None).unwrap();
        let slice = evaluate_qa(&s, &AlarmMode::Ensemble, 1, &SafetySpec::better_than_half(), false)
            .unwrap();
        assert_eq!(slice.classifiers[0].interval_a, IntInterval::new(1, 1));
        assert!(slice.safe_exists);
    }

    #[test]
    fn fixture_pair_traces() {
        let s = big_bench_mistake();
        let spec = SafetySpec::better_than_half();
        let t = run_alarm(&s, &spec, &pair("mistral", "gpt4"), false).unwrap();
        assert_eq!(t.slices.len(), 282);
        assert_eq!(t.verdict, Verdict::Triggered);
        let first = t.slice(0).unwrap();
        // at Q_a = 0 every item is truly B and gpt4 answered B on only 47
        assert_eq!(first.classifiers[1].interval_b, IntInterval::new(47, 47));
        assert!(!first.safe_exists);
        for (i, j) in [("claude", "mistral"), ("claude", "gpt4")] {
            let t = run_alarm(&s, &spec, &pair(i, j), false).unwrap();
            assert_eq!(t.verdict, Verdict::NotTriggered, "{i}/{j}");
        }
        assert_eq!(
            alarm_verdict(&s, &spec, &pair("mistral", "gpt4"), false).unwrap(),
            Verdict::Triggered
        );
        assert_eq!(
            alarm_verdict(&s, &spec, &pair("claude", "gpt4"), false).unwrap(),
            Verdict::NotTriggered
        );
    }

    #[test]
    fn safe_slices_of_fixture_pairs() {
        // mistral is safe only for Q_a <= 53, gpt4 only for Q_a >= 188,
        // claude for Q_a >= 12
        let s = big_bench_mistake();
        let spec = SafetySpec::better_than_half();
        let t = run_alarm(&s, &spec, &pair("claude", "mistral"), false).unwrap();
        let safe: Vec<i64> = t.slices.iter().filter(|s| s.safe_exists).map(|s| s.q_a).collect();
        assert_eq!(safe, (12..=53).collect::<Vec<_>>());
        let t = run_alarm(&s, &spec, &pair("claude", "gpt4"), false).unwrap();
        let safe: Vec<i64> = t.slices.iter().filter(|s| s.safe_exists).map(|s| s.q_a).collect();
        assert_eq!(safe, (188..=281).collect::<Vec<_>>());
    }

    #[test]
    fn restriction() {
        let s = big_bench_mistake();
        let spec = SafetySpec::better_than_half();
        let t = run_alarm(&s, &spec, &pair("claude", "mistral"), false).unwrap();
        assert_eq!(restrict_qa_range(&t, 0, 281).unwrap().verdict, t.verdict);
        assert_eq!(restrict_qa_range(&t, 60, 281).unwrap().verdict, Verdict::Triggered);
        let at_truth = restrict_qa_range(&t, 237, 237).unwrap();
        assert_eq!(at_truth.slices.len(), 1);
        assert_eq!(at_truth.verdict, Verdict::Triggered);
        assert!(restrict_qa_range(&t, 5, 4).is_err());
        assert!(restrict_qa_range(&t, 0, 282).is_err());
    }

    #[test]
    fn refinement_never_adds_safe_slices() {
        let s = big_bench_mistake();
        let spec = SafetySpec::better_than_half();
        for mode in [pair("claude", "mistral"), pair("claude", "gpt4"), AlarmMode::Ensemble] {
            let plain = run_alarm(&s, &spec, &mode, false).unwrap();
            let refined = run_alarm(&s, &spec, &mode, true).unwrap();
            for (p, r) in plain.slices.iter().zip(&refined.slices) {
                assert!(!r.safe_exists || p.safe_exists);
                assert!(r.refined);
                assert_eq!(p.classifiers, r.classifiers);
            }
        }
    }

    #[test]
    fn truth_conditioned_flips_silence_the_alarm() {
        let s = big_bench_mistake()
            .flip_labels("mistral", FlipMode::TrueAOnly)
            .unwrap()
            .flip_labels("gpt4", FlipMode::TrueBOnly)
            .unwrap();
        let spec = SafetySpec::better_than_half();
        let t = run_alarm(&s, &spec, &AlarmMode::Ensemble, false).unwrap();
        assert_eq!(t.verdict, Verdict::NotTriggered);
        assert!(t.slice(237).unwrap().safe_exists);
    }

    #[test]
    fn mode_errors() {
        let s = big_bench_mistake();
        let spec = SafetySpec::better_than_half();
        assert!(run_alarm(&s, &spec, &pair("claude", "palm2"), false).is_err());
        assert!(run_alarm(&s, &spec, &pair("claude", "claude"), false).is_err());
        assert!(evaluate_qa(&s, &AlarmMode::Ensemble, 282, &spec, false).is_err());
        let broken =
            EvaluationSketch::from_counts(vec!["x".into()], 3, vec![1, 1], None).unwrap();
        assert!(run_alarm(&broken, &spec, &AlarmMode::Ensemble, false).is_err());
    }

    #[test]
    fn overall_spec() {
        // a classifier answering A on every item is at best perfect (Q_a = Q)
        let s = EvaluationSketch::from_counts(vec!["x".into()], 10, vec![10, 0], None).unwrap();
        let spec = SafetySpec::overall(ratio(9, 10), true).unwrap();
        let t = run_alarm(&s, &spec, &AlarmMode::Ensemble, false).unwrap();
        let safe: Vec<i64> = t.slices.iter().filter(|s| s.safe_exists).map(|s| s.q_a).collect();
        assert_eq!(safe, vec![10]);
    }
}
