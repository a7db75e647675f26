//! Seeded sampling of decision tables from error-independent classifiers.
//!
//! Each item's true label is A with probability `p_a`; each classifier then
//! answers correctly with its per-label accuracy, independently of the
//! others. Draws are exact: a probability `n/d` succeeds when a uniform
//! integer in `[0, d)` falls below `n`.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::independent::IndependentParams;
use crate::model::{DecisionRow, DecisionTable, Label};
use crate::rational::{in_unit_interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticClassifier {
    pub id: String,
    #[serde(with = "crate::rational::serde_ratio")]
    pub pi_a: Rational,
    #[serde(with = "crate::rational::serde_ratio")]
    pub pi_b: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorParams {
    #[serde(with = "crate::rational::serde_ratio")]
    pub p_a: Rational,
    pub classifiers: Vec<SyntheticClassifier>,
}

impl GeneratorParams {
    /// Names the three classifiers `c1`, `c2`, `c3`.
    pub fn from_independent(params: &IndependentParams) -> Self {
        GeneratorParams {
            p_a: params.p_a.clone(),
            classifiers: params
                .classifiers
                .iter()
                .enumerate()
                .map(|(k, c)| SyntheticClassifier {
                    id: format!("c{}", k + 1),
                    pi_a: c.pi_a.clone(),
                    pi_b: c.pi_b.clone(),
                })
                .collect(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.classifiers.is_empty() {
            return Err(Error::Invalid("no classifiers".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for c in &self.classifiers {
            if !seen.insert(&c.id) {
                return Err(Error::Invalid(format!("duplicate classifier `{}`", c.id)));
            }
        }
        let probs = std::iter::once(&self.p_a)
            .chain(self.classifiers.iter().flat_map(|c| [&c.pi_a, &c.pi_b]));
        for p in probs {
            if !in_unit_interval(p) {
                return Err(Error::OutOfRange(format!("probability {p} outside [0, 1]")));
            }
            if p.denom().to_u64().is_none() {
                return Err(Error::OutOfRange(format!("denominator of {p} is too large")));
            }
        }
        Ok(())
    }
}

struct Bernoulli {
    num: u64,
    den: u64,
}

impl Bernoulli {
    fn new(p: &Rational) -> Self {
        Bernoulli {
            num: p.numer().to_u64().expect("checked"),
            den: p.denom().to_u64().expect("checked"),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> bool {
        rng.random_range(0..self.den) < self.num
    }
}

pub fn generate_synthetic(params: &GeneratorParams, q: usize, seed: u64) -> Result<DecisionTable> {
    if q == 0 {
        return Err(Error::Invalid("Q must be at least 1".into()));
    }
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prevalence = Bernoulli::new(&params.p_a);
    let accuracies: Vec<(Bernoulli, Bernoulli)> = params
        .classifiers
        .iter()
        .map(|c| (Bernoulli::new(&c.pi_a), Bernoulli::new(&c.pi_b)))
        .collect();
    let width = q.to_string().len();
    let rows = (0..q)
        .map(|k| {
            let truth = if prevalence.sample(&mut rng) { Label::A } else { Label::B };
            let responses = accuracies
                .iter()
                .map(|(on_a, on_b)| {
                    let acc = if truth == Label::A { on_a } else { on_b };
                    Some(if acc.sample(&mut rng) { truth } else { truth.flipped() })
                })
                .collect();
            DecisionRow {
                item_id: format!("item{:0width$}", k + 1),
                responses,
                truth: Some(truth),
            }
        })
        .collect();
    Ok(DecisionTable {
        classifier_ids: params.classifiers.iter().map(|c| c.id.clone()).collect(),
        rows,
    })
}

/// Writes a table in the CSV layout accepted by ingestion, with labels as
/// `a`/`b`.
pub fn decisions_to_csv(table: &DecisionTable) -> String {
    let with_truth = table.rows.iter().any(|r| r.truth.is_some());
    let mut out = String::from("item_id");
    for id in &table.classifier_ids {
        write!(out, ",{id}").unwrap();
    }
    out.push_str(if with_truth { ",truth\n" } else { "\n" });
    let cell = |l: Option<Label>| l.map(|l| l.as_char().to_string()).unwrap_or_default();
    for r in &table.rows {
        out.push_str(&r.item_id);
        for l in &r.responses {
            write!(out, ",{}", cell(*l)).unwrap();
        }
        if with_truth {
            write!(out, ",{}", cell(r.truth)).unwrap();
        }
        out.push('\n');
    }
    out
}
