#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use evalogic::model::{CorrectCounts, EvaluationSketch, SafetySpec};
use evalogic::oracle::{enumerate_variety, DEFAULT_BUDGET};
use evalogic::rational::{int, ratio};
use evalogic::Rational;

/// Safety of one classifier's correct counts, straight from the ratios.
pub fn counts_meet_spec(spec: &SafetySpec, q: i64, q_a: i64, c: CorrectCounts) -> bool {
    let beats = |num: i64, den: i64, t: &Rational, strict: bool| {
        if den == 0 {
            return true;
        }
        let r = ratio(num, den);
        if strict {
            &r > t
        } else {
            &r >= t
        }
    };
    match spec {
        SafetySpec::PerLabel {
            threshold_a,
            threshold_b,
            strict,
        } => beats(c.r_aia, q_a, threshold_a, *strict) && beats(c.r_bib, q - q_a, threshold_b, *strict),
        SafetySpec::Overall { threshold, strict } => beats(c.r_aia + c.r_bib, q, threshold, *strict),
    }
}

/// Per `Q_a`, whether some enumerated ground truth makes every listed
/// classifier safe.
pub fn oracle_safe_by_qa(sketch: &EvaluationSketch, spec: &SafetySpec, classifiers: &[usize]) -> Vec<bool> {
    let mut safe = vec![false; sketch.q() as usize + 1];
    for p in enumerate_variety(sketch, DEFAULT_BUDGET).unwrap() {
        let q_a = p.point.q_a;
        if classifiers
            .iter()
            .all(|&k| counts_meet_spec(spec, sketch.q(), q_a, p.point.classifiers[k]))
        {
            safe[q_a as usize] = true;
        }
    }
    safe
}

/// Projections of the variety of a two-classifier sketch, per `Q_a`.
#[derive(Debug, Default)]
pub struct Projections {
    pub r_aia: [BTreeSet<i64>; 2],
    pub r_bib: [BTreeSet<i64>; 2],
    pub pair: BTreeSet<(i64, i64)>,
}

pub fn pair_projections(sketch: &EvaluationSketch) -> BTreeMap<i64, Projections> {
    let mut out: BTreeMap<i64, Projections> = BTreeMap::new();
    for p in enumerate_variety(sketch, DEFAULT_BUDGET).unwrap() {
        let e = out.entry(p.point.q_a).or_default();
        let c = &p.point.classifiers;
        for (k, ck) in c.iter().enumerate() {
            e.r_aia[k].insert(ck.r_aia);
            e.r_bib[k].insert(ck.r_bib);
        }
        e.pair.insert((c[0].r_aia, c[1].r_aia));
    }
    out
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn one() -> Rational {
    int(1)
}
