//! Exact evaluation of three error-independent binary classifiers.
//!
//! When the classifiers' errors are uncorrelated on each label, the eight
//! pattern frequencies are generated by seven parameters: the prevalence of
//! label A and each classifier's accuracy on A and on B. The system has
//! exactly two solutions, related by swapping the meaning of the labels.
//!
//! Closed form used by [`solve_independent`]. Write `a_i` for the rate at
//! which classifier `i` says A on true-A items, `b_i` for the rate on true-B
//! items, `d_i = a_i - b_i`, and `s = P_a P_b`. Centered moments of the
//! observed responses are then
//!
//! ```text
//! Δ_ij = s d_i d_j
//! T    = E[(x_1 - f_1)(x_2 - f_2)(x_3 - f_3)] = s (P_b - P_a) d_1 d_2 d_3
//! ```
//!
//! so `T² / (Δ_12 Δ_13 Δ_23) = (1 - 4s) / s`, giving
//! `s = Δ_12 Δ_13 Δ_23 / (4 Δ_12 Δ_13 Δ_23 + T²)` and
//! `P_a = (1 ± √(1 - 4s)) / 2`. With `P_a` fixed, `d_1² = Δ_12 Δ_13 / (s Δ_23)`,
//! the sign of `d_1` follows from `T`, the other `d_i` from `Δ_1i`, and
//! `a_i = f_i + P_b d_i`, `b_i = f_i - P_a d_i`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::axioms::pair_delta;
use crate::error::{Error, Result};
use crate::model::{DecisionPattern, EvaluationSketch, Label};
use crate::rational::{in_unit_interval, int, rational_sqrt, ratio, Rational};

/// Per-label accuracies of one classifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassifierRates {
    #[serde(with = "crate::rational::serde_ratio")]
    pub pi_a: Rational,
    #[serde(with = "crate::rational::serde_ratio")]
    pub pi_b: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndependentParams {
    #[serde(with = "crate::rational::serde_ratio")]
    pub p_a: Rational,
    pub classifiers: [ClassifierRates; 3],
}

impl IndependentParams {
    pub fn new(p_a: Rational, rates: [(Rational, Rational); 3]) -> Result<Self> {
        let params = IndependentParams {
            p_a,
            classifiers: rates.map(|(pi_a, pi_b)| ClassifierRates { pi_a, pi_b }),
        };
        params.check()?;
        Ok(params)
    }

    pub fn check(&self) -> Result<()> {
        let ok = in_unit_interval(&self.p_a)
            && self
                .classifiers
                .iter()
                .all(|c| in_unit_interval(&c.pi_a) && in_unit_interval(&c.pi_b));
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(
                "prevalence and accuracies must lie in [0, 1]".into(),
            ))
        }
    }

    /// The observationally identical point with the true labels swapped:
    /// `P_a -> 1 - P_a`, `π_ia -> 1 - π_ib`, `π_ib -> 1 - π_ia`.
    pub fn mirror(&self) -> IndependentParams {
        let one = Rational::one();
        IndependentParams {
            p_a: &one - &self.p_a,
            classifiers: self.classifiers.clone().map(|c| ClassifierRates {
                pi_a: &one - c.pi_b,
                pi_b: &one - c.pi_a,
            }),
        }
    }

    fn sort_key(&self) -> Vec<&Rational> {
        let mut key = vec![&self.p_a];
        key.extend(self.classifiers.iter().map(|c| &c.pi_a));
        key.extend(self.classifiers.iter().map(|c| &c.pi_b));
        key
    }
}

/// Rate of saying `label` for a classifier, given the item's true label.
fn response_rate(c: &ClassifierRates, truth: Label, said: Label) -> Rational {
    let correct = match truth {
        Label::A => &c.pi_a,
        Label::B => &c.pi_b,
    };
    if said == truth {
        correct.clone()
    } else {
        Rational::one() - correct
    }
}

/// The eight pattern frequencies, in pattern-index order (`aaa`, `aab`, ...,
/// `bbb`).
pub fn forward_model(params: &IndependentParams) -> [Rational; 8] {
    let p_b = Rational::one() - &params.p_a;
    std::array::from_fn(|idx| {
        let pattern = DecisionPattern::from_index(idx, 3);
        let given = |truth: Label| -> Rational {
            params
                .classifiers
                .iter()
                .zip(pattern.labels())
                .map(|(c, &said)| response_rate(c, truth, said))
                .product()
        };
        &params.p_a * given(Label::A) + &p_b * given(Label::B)
    })
}

/// Per-label error covariances for the pairs `(1,2)`, `(1,3)`, `(2,3)`, as
/// `[gamma_a, gamma_b]`.
pub type PairCovariances = [[Rational; 2]; 3];

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Like [`forward_model`], but with pairwise error covariances on each label
/// (the pair generating set extended to three classifiers, with no
/// third-order term).
pub fn forward_model_with_correlations(
    params: &IndependentParams,
    gammas: &PairCovariances,
) -> Result<[Rational; 8]> {
    let p_b = Rational::one() - &params.p_a;
    let sign = |l: Label| if l == Label::A { int(1) } else { int(-1) };
    let freqs: [Rational; 8] = std::array::from_fn(|idx| {
        let pattern = DecisionPattern::from_index(idx, 3);
        let rate = |k: usize, truth: Label| response_rate(&params.classifiers[k], truth, pattern.get(k));
        let given = |truth: Label, slot: usize| -> Rational {
            let mut p: Rational = (0..3).map(|k| rate(k, truth)).product();
            for (&(i, j), g) in PAIRS.iter().zip(gammas) {
                let k = 3 - i - j;
                p += &g[slot] * sign(pattern.get(i)) * sign(pattern.get(j)) * rate(k, truth);
            }
            p
        };
        &params.p_a * given(Label::A, 0) + &p_b * given(Label::B, 1)
    });
    if freqs.iter().any(|f| f.is_negative()) {
        return Err(Error::OutOfRange(
            "correlation too large: a pattern frequency would be negative".into(),
        ));
    }
    Ok(freqs)
}

/// Covariances `gamma_a`, `gamma_b` between classifiers `i` and `j` only.
pub fn forward_model_with_pair_correlation(
    params: &IndependentParams,
    i: usize,
    j: usize,
    gamma_a: &Rational,
    gamma_b: &Rational,
) -> Result<[Rational; 8]> {
    let slot = PAIRS
        .iter()
        .position(|&p| p == (i.min(j), i.max(j)))
        .filter(|_| i != j)
        .ok_or_else(|| Error::Invalid(format!("invalid pair ({i}, {j})")))?;
    let mut gammas: PairCovariances = std::array::from_fn(|_| [Rational::zero(), Rational::zero()]);
    gammas[slot] = [gamma_a.clone(), gamma_b.clone()];
    forward_model_with_correlations(params, &gammas)
}

/// Δ for a pair given its four decision frequencies.
pub fn delta(pair_freqs: &[Rational; 4]) -> Result<Rational> {
    pair_delta(pair_freqs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diagnosis {
    /// A quantity that must be real would need the root of a negative number.
    NonReal,
    /// The solution leaves `[0, 1]`.
    OutOfRange,
    /// The solution needs the square root of a non-square rational.
    IrrationalValue,
    /// A moment the solution divides by vanishes, so the system is
    /// underdetermined.
    Degenerate,
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Diagnosis::NonReal => "non-real",
            Diagnosis::OutOfRange => "out of range",
            Diagnosis::IrrationalValue => "irrational value",
            Diagnosis::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum IndependentSolution {
    TwoPoints {
        primary: IndependentParams,
        mirror: IndependentParams,
    },
    /// The frequencies cannot come from error-independent classifiers.
    Inconsistent { diagnosis: Diagnosis, witness: String },
}

impl IndependentSolution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, IndependentSolution::TwoPoints { .. })
    }

    fn inconsistent(diagnosis: Diagnosis, witness: impl Into<String>) -> Self {
        IndependentSolution::Inconsistent {
            diagnosis,
            witness: witness.into(),
        }
    }
}

/// Pattern frequencies of a three-classifier sketch.
pub fn frequencies_from_sketch(sketch: &EvaluationSketch) -> Result<[Rational; 8]> {
    sketch.ensure_valid()?;
    if sketch.n() != 3 {
        return Err(Error::Invalid(format!(
            "the error-independent solution needs exactly 3 classifiers, got {}",
            sketch.n()
        )));
    }
    let q = sketch.q();
    Ok(std::array::from_fn(|idx| ratio(sketch.counts()[idx], q)))
}

fn says_a(idx: usize, k: usize) -> bool {
    (idx >> (2 - k)) & 1 == 0
}

/// Observed moments of the three response indicators.
struct Moments {
    f: [Rational; 3],
    /// Δ_12, Δ_13, Δ_23
    delta: [Rational; 3],
    third: Rational,
}

fn moments(freqs: &[Rational; 8]) -> Result<Moments> {
    let f: [Rational; 3] = std::array::from_fn(|k| {
        (0..8)
            .filter(|&idx| says_a(idx, k))
            .map(|idx| freqs[idx].clone())
            .sum()
    });
    let pair_freqs = |i: usize, j: usize| -> [Rational; 4] {
        let mut cells: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        for (idx, fr) in freqs.iter().enumerate() {
            let cell = (usize::from(!says_a(idx, i)) << 1) | usize::from(!says_a(idx, j));
            cells[cell] += fr;
        }
        cells
    };
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut delta: [Rational; 3] = std::array::from_fn(|_| Rational::zero());
    let mut joint: [Rational; 3] = std::array::from_fn(|_| Rational::zero());
    for (slot, &(i, j)) in pairs.iter().enumerate() {
        let cells = pair_freqs(i, j);
        delta[slot] = pair_delta(&cells)?;
        joint[slot] = cells[0].clone();
    }
    // E[x1 x2 x3] - f1 f23 - f2 f13 - f3 f12 + 2 f1 f2 f3
    let third = &freqs[0] - &f[0] * &joint[2] - &f[1] * &joint[1] - &f[2] * &joint[0]
        + int(2) * &f[0] * &f[1] * &f[2];
    Ok(Moments { f, delta, third })
}

/// Solves the error-independent generating set for prevalence and per-label
/// accuracies from the eight pattern frequencies (pattern-index order).
pub fn solve_independent(freqs: &[Rational; 8]) -> Result<IndependentSolution> {
    if freqs.iter().any(|f| f.is_negative()) {
        return Err(Error::Invalid("pattern frequencies must be non-negative".into()));
    }
    let total: Rational = freqs.iter().sum();
    if !total.is_one() {
        return Err(Error::Invalid(format!("pattern frequencies sum to {total}, not 1")));
    }
    let m = moments(freqs)?;
    let names = ["Δ_12", "Δ_13", "Δ_23"];
    for (d, name) in m.delta.iter().zip(names) {
        if d.is_zero() {
            return Ok(IndependentSolution::inconsistent(
                Diagnosis::Degenerate,
                format!("{name} = 0"),
            ));
        }
    }
    let [d12, d13, d23] = &m.delta;
    let triple = d12 * d13 * d23;
    let denom = int(4) * &triple + &m.third * &m.third;
    if !denom.is_positive() {
        return Ok(IndependentSolution::inconsistent(
            Diagnosis::NonReal,
            format!("4 Δ_12 Δ_13 Δ_23 + T² = {denom} is not positive"),
        ));
    }
    // s = P_a P_b
    let s = &triple / &denom;
    if s.is_negative() {
        return Ok(IndependentSolution::inconsistent(
            Diagnosis::OutOfRange,
            format!("P_a P_b = {s} is negative"),
        ));
    }
    let disc = Rational::one() - int(4) * &s;
    let Some(root) = rational_sqrt(&disc) else {
        return Ok(IndependentSolution::inconsistent(
            Diagnosis::IrrationalValue,
            format!("P_a = (1 ± √({disc}))/2 is irrational"),
        ));
    };
    let half = ratio(1, 2);
    let p_a = &half + &root * &half;
    let p_b = Rational::one() - &p_a;

    let d1_sq = d12 * d13 / (&s * d23);
    if d1_sq.is_negative() {
        return Ok(IndependentSolution::inconsistent(
            Diagnosis::NonReal,
            format!("(π_1a + π_1b - 1)² = {d1_sq} is negative"),
        ));
    }
    let Some(mut d1) = rational_sqrt(&d1_sq) else {
        return Ok(IndependentSolution::inconsistent(
            Diagnosis::IrrationalValue,
            format!("π_1a + π_1b - 1 = ±√({d1_sq}) is irrational"),
        ));
    };
    // T = s (P_b - P_a) d1 d2 d3 and d1 d2 d3 = Δ_12 Δ_13 / (s² d1); with
    // P_a = 1/2 (T = 0) either sign works and the mirror supplies the other.
    let sign_target = -(&m.third) * d12 * d13;
    if sign_target.is_negative() {
        d1 = -d1;
    }
    let d = [d1.clone(), d12 / (&s * &d1), d13 / (&s * &d1)];

    let one = Rational::one();
    let mut rates = Vec::with_capacity(3);
    for (k, (f, d)) in m.f.iter().zip(&d).enumerate() {
        let pi_a = f + &p_b * d;
        let pi_b = &one - (f - &p_a * d);
        if !in_unit_interval(&pi_a) || !in_unit_interval(&pi_b) {
            return Ok(IndependentSolution::inconsistent(
                Diagnosis::OutOfRange,
                format!("classifier {} accuracies ({pi_a}, {pi_b}) leave [0, 1]", k + 1),
            ));
        }
        rates.push(ClassifierRates { pi_a, pi_b });
    }
    let candidate = IndependentParams {
        p_a,
        classifiers: [rates[0].clone(), rates[1].clone(), rates[2].clone()],
    };
    if forward_model(&candidate) != *freqs {
        return Err(Error::Invariant(
            "closed-form solution does not regenerate the frequencies".into(),
        ));
    }
    let mirror = candidate.mirror();
    let (primary, mirror) = if candidate.sort_key() >= mirror.sort_key() {
        (candidate, mirror)
    } else {
        (mirror, candidate)
    };
    Ok(IndependentSolution::TwoPoints { primary, mirror })
}

pub fn solve_sketch(sketch: &EvaluationSketch) -> Result<IndependentSolution> {
    solve_independent(&frequencies_from_sketch(sketch)?)
}

/// Fraction of items on which a majority of the (odd-sized) ensemble said A.
pub fn majority_vote_prevalence(sketch: &EvaluationSketch) -> Result<Rational> {
    sketch.ensure_valid()?;
    let n = sketch.n();
    if n.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "majority vote needs an odd number of classifiers, got {n}"
        )));
    }
    let majority_a: i64 = sketch
        .patterns()
        .filter(|(p, _)| p.count_of(Label::A) * 2 > n)
        .map(|(_, c)| c)
        .sum();
    Ok(ratio(majority_a, sketch.q()))
}

/// Result of the agreement-rate error formula for three independent
/// classifiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementErrorRates {
    /// `(1 - 2a_12)(1 - 2a_13)(1 - 2a_23)`
    #[serde(with = "crate::rational::serde_ratio")]
    pub c_squared: Rational,
    /// `c` itself, when it is rational.
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub c: Option<Rational>,
    /// For each classifier, the `+` and `-` branch values of its error rate;
    /// present only when `c` is rational.
    pub error_rates: Option<Vec<(String, String)>>,
}

impl AgreementErrorRates {
    pub fn c_is_rational(&self) -> bool {
        self.c.is_some()
    }
}

/// Error rates `e_i = (c ± (1 - 2a_jk)) / (±2(1 - 2a_jk))` from pairwise
/// agreement rates, where `c = √((1 - 2a_12)(1 - 2a_13)(1 - 2a_23))`.
///
/// On rational agreement rates `c` is generally irrational, which no finite
/// test can produce; the flag exposes that.
pub fn platanios_error(a12: &Rational, a13: &Rational, a23: &Rational) -> Result<AgreementErrorRates> {
    for a in [a12, a13, a23] {
        if !in_unit_interval(a) {
            return Err(Error::OutOfRange(format!("agreement rate {a} outside [0, 1]")));
        }
    }
    let one = Rational::one();
    let two = int(2);
    let m = |a: &Rational| &one - &two * a;
    let c_squared = m(a12) * m(a13) * m(a23);
    // classifier i uses the agreement of the other two
    let others = [m(a23), m(a13), m(a12)];
    if let Some(k) = others.iter().position(|x| x.is_zero()) {
        return Err(Error::Invalid(format!(
            "division by zero: 1 - 2a_jk = 0 for classifier {}",
            k + 1
        )));
    }
    let c = rational_sqrt(&c_squared);
    let error_rates = c.as_ref().map(|c| {
        others
            .iter()
            .map(|mjk| {
                let plus = (c + mjk) / (&two * mjk);
                let minus = (c - mjk) / (-(&two * mjk));
                (
                    crate::rational::format_rational(&plus),
                    crate::rational::format_rational(&minus),
                )
            })
            .collect()
    });
    Ok(AgreementErrorRates {
        c_squared,
        c,
        error_rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::big_bench_mistake;

    fn uniform(p_a: Rational, pi: Rational) -> IndependentParams {
        IndependentParams::new(p_a, std::array::from_fn(|_| (pi.clone(), pi.clone()))).unwrap()
    }

    #[test]
    fn forward_examples() {
        let f = forward_model(&uniform(ratio(1, 2), int(1)));
        assert_eq!(f[0], ratio(1, 2));
        assert_eq!(f[7], ratio(1, 2));
        assert!(f[1..7].iter().all(|x| x.is_zero()));

        let f = forward_model(&uniform(int(1), int(1)));
        assert_eq!(f[0], int(1));

        let f = forward_model(&uniform(ratio(1, 2), ratio(3, 4)));
        assert_eq!(f[0], ratio(7, 32));
        assert_eq!(f.iter().sum::<Rational>(), int(1));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(
            delta(&[ratio(1, 2), int(0), int(0), ratio(1, 2)]).unwrap(),
            ratio(1, 4)
        );
        let f = forward_model(&uniform(ratio(1, 2), ratio(3, 4)));
        let pair = [&f[0] + &f[1], &f[2] + &f[3], &f[4] + &f[5], &f[6] + &f[7]];
        assert_eq!(delta(&pair).unwrap(), ratio(1, 16));
    }

    #[test]
    fn solves_uniform_params() {
        let p = uniform(ratio(1, 2), ratio(3, 4));
        match solve_independent(&forward_model(&p)).unwrap() {
            IndependentSolution::TwoPoints { primary, mirror } => {
                assert_eq!(primary, p);
                assert_eq!(mirror, uniform(ratio(1, 2), ratio(1, 4)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solves_perfect_classifiers() {
        let mut f: [Rational; 8] = std::array::from_fn(|_| int(0));
        f[0] = ratio(1, 2);
        f[7] = ratio(1, 2);
        match solve_independent(&f).unwrap() {
            IndependentSolution::TwoPoints { primary, mirror } => {
                assert_eq!(primary, uniform(ratio(1, 2), int(1)));
                assert_eq!(mirror, uniform(ratio(1, 2), int(0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn asymmetric_prevalence() {
        let p = IndependentParams::new(
            ratio(1, 3),
            [
                (ratio(4, 5), ratio(2, 3)),
                (ratio(3, 7), ratio(9, 10)),
                (ratio(5, 8), ratio(1, 8)),
            ],
        )
        .unwrap();
        let f = forward_model(&p);
        match solve_independent(&f).unwrap() {
            IndependentSolution::TwoPoints { primary, mirror } => {
                assert_eq!(primary, p.mirror());
                assert_eq!(mirror, p);
                assert_eq!(forward_model(&primary), f);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn correlated_ensemble_is_flagged() {
        let p = IndependentParams::new(
            ratio(1, 3),
            [
                (ratio(4, 5), ratio(2, 3)),
                (ratio(3, 7), ratio(9, 10)),
                (ratio(5, 8), ratio(7, 8)),
            ],
        )
        .unwrap();
        let gammas = [
            [ratio(1, 50), int(0)],
            [int(0), ratio(-1, 40)],
            [ratio(1, 30), ratio(1, 60)],
        ];
        let f = forward_model_with_correlations(&p, &gammas).unwrap();
        assert_eq!(f.iter().sum::<Rational>(), int(1));
        let sol = solve_independent(&f).unwrap();
        assert!(!sol.is_consistent(), "{sol:?}");
    }

    #[test]
    fn correlation_can_look_independent() {
        // A single correlated pair next to an independent third classifier is
        // reproduced exactly by a different independent point.
        let p = uniform(ratio(1, 2), ratio(3, 4));
        let f = forward_model_with_pair_correlation(&p, 0, 1, &ratio(1, 20), &int(0)).unwrap();
        match solve_independent(&f).unwrap() {
            IndependentSolution::TwoPoints { primary, .. } => {
                assert_ne!(primary, p);
                assert_eq!(primary.p_a, ratio(7, 12));
                assert_eq!(forward_model(&primary), f);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(forward_model_with_pair_correlation(&p, 1, 1, &int(0), &int(0)).is_err());
    }

    #[test]
    fn mirror_preserves_observables() {
        let p = IndependentParams::new(
            ratio(2, 7),
            [
                (ratio(1, 2), ratio(5, 6)),
                (ratio(1, 9), ratio(2, 3)),
                (int(1), ratio(3, 4)),
            ],
        )
        .unwrap();
        assert_eq!(forward_model(&p), forward_model(&p.mirror()));
        assert_eq!(p.mirror().mirror(), p);
    }

    #[test]
    fn constant_classifier_is_degenerate() {
        // classifier 3 always says A: Δ_13 = Δ_23 = 0
        let p = IndependentParams::new(
            ratio(1, 2),
            [
                (ratio(3, 4), ratio(3, 4)),
                (ratio(2, 3), ratio(2, 3)),
                (int(1), int(0)),
            ],
        )
        .unwrap();
        match solve_independent(&forward_model(&p)).unwrap() {
            IndependentSolution::Inconsistent { diagnosis, witness } => {
                assert_eq!(diagnosis, Diagnosis::Degenerate);
                assert!(witness.contains("Δ_13"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_distributions() {
        let f: [Rational; 8] = std::array::from_fn(|_| ratio(1, 4));
        assert!(solve_independent(&f).is_err());
    }

    #[test]
    fn majority_vote() {
        let s = big_bench_mistake();
        assert_eq!(majority_vote_prevalence(&s).unwrap(), ratio(147, 281));
        let two = s.project(&["claude", "gpt4"]).unwrap();
        assert!(majority_vote_prevalence(&two).is_err());
        let one = EvaluationSketch::from_patterns(
            vec!["x".into(), "y".into(), "z".into()],
            [("aab".parse().unwrap(), 1)],
        )
        .unwrap();
        assert_eq!(majority_vote_prevalence(&one).unwrap(), int(1));
    }

    #[test]
    fn agreement_formula() {
        assert!(platanios_error(&ratio(1, 2), &ratio(1, 2), &ratio(1, 2)).is_err());
        let r = platanios_error(&ratio(1, 4), &ratio(1, 4), &ratio(1, 4)).unwrap();
        assert_eq!(r.c_squared, ratio(1, 8));
        assert!(!r.c_is_rational());
        assert!(r.error_rates.is_none());
        let r = platanios_error(&int(0), &int(0), &int(0)).unwrap();
        assert_eq!(r.c, Some(int(1)));
        let rates = r.error_rates.unwrap();
        assert_eq!(rates[0], ("1".to_string(), "0".to_string()));
        assert!(platanios_error(&ratio(3, 2), &int(0), &int(0)).is_err());
    }
}
