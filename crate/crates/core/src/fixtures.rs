//! Reference sketches.

use crate::model::{EvaluationSketch, TruthSplit};

/// Three LLM graders (Claude Haiku, Mistral Large, GPT4 Turbo) checking a
/// PaLM2 model's answers on the BIG-Bench-Mistake multistep-arithmetic task,
/// 281 gradable items. Label A means "incorrect", B means "correct".
///
/// Rows are `(pattern, items truly A, items truly B)` in classifier order
/// claude, mistral, gpt4.
pub const BIG_BENCH_MISTAKE_TABLE: [(&str, i64, i64); 8] = [
    ("aaa", 12, 0),
    ("aab", 0, 0),
    ("aba", 113, 8),
    ("abb", 11, 2),
    ("baa", 14, 0),
    ("bab", 0, 1),
    ("bba", 72, 15),
    ("bbb", 15, 18),
];

pub const BIG_BENCH_MISTAKE_IDS: [&str; 3] = ["claude", "mistral", "gpt4"];

pub fn big_bench_mistake() -> EvaluationSketch {
    let split = BIG_BENCH_MISTAKE_TABLE
        .iter()
        .map(|(_, a, b)| TruthSplit::new(*a, *b))
        .collect();
    EvaluationSketch::from_truth_split(
        BIG_BENCH_MISTAKE_IDS.iter().map(|s| s.to_string()).collect(),
        split,
    )
    .expect("fixture table is well formed")
}
