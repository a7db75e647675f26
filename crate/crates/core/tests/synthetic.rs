use evalogic::independent::{forward_model, IndependentParams};
use evalogic::io::synthetic::{generate_synthetic, GeneratorParams};
use evalogic::model::sketch_from_decisions;
use evalogic::rational::{ratio, to_f64};

fn check_frequencies(params: &IndependentParams, seed: u64) {
    let q = 100_000;
    let table = generate_synthetic(&GeneratorParams::from_independent(params), q, seed).unwrap();
    let sketch = sketch_from_decisions(&table).unwrap();
    for (idx, f) in forward_model(params).iter().enumerate() {
        let p = to_f64(f);
        let se = (p * (1.0 - p) / q as f64).sqrt();
        let observed = sketch.counts()[idx] as f64 / q as f64;
        assert!(
            (observed - p).abs() <= 3.0 * se,
            "pattern {idx}: observed {observed}, expected {p} (se {se})"
        );
    }
}

#[test]
fn large_sample_matches_forward_model() {
    let uniform = IndependentParams::new(ratio(1, 2), std::array::from_fn(|_| (ratio(3, 4), ratio(3, 4)))).unwrap();
    check_frequencies(&uniform, 2024);
}

#[test]
fn large_sample_matches_skewed_model() {
    let skewed = IndependentParams::new(
        ratio(1, 5),
        [
            (ratio(9, 10), ratio(2, 3)),
            (ratio(3, 5), ratio(7, 8)),
            (ratio(1, 2), ratio(5, 6)),
        ],
    )
    .unwrap();
    check_frequencies(&skewed, 7);
}
