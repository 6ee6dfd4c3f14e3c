//! Sampling a degree sequence from a JSON law and checking it against the law.
//!
//! cargo run --release --example degree_sampling -- '{"type": "poisson", "mean": 5, "support_max": 40}'

use std::collections::BTreeMap;

use bootperc::degree_model::{sample_degree_sequence, DistConfig};
use bootperc::rng::stream_from_seed;

fn main() -> bootperc::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| r#"{"type": "gaussian", "mean": 10, "sd": 3}"#.into());
    let dist = DistConfig::from_json(&text)?.build()?;
    let n = 100_000;
    let seq = sample_degree_sequence(&dist, n, &mut stream_from_seed(5))?;
    println!("lambda {:.4}, sampled m/n {:.4}", dist.lambda(), seq.mean_degree());

    let mut in_counts = BTreeMap::<u32, usize>::new();
    for &(j, _) in seq.pairs() {
        *in_counts.entry(j).or_default() += 1;
    }
    let mut law = BTreeMap::<u32, f64>::new();
    for c in dist.support() {
        *law.entry(c.in_degree).or_default() += c.p;
    }
    println!("{:>4} {:>9} {:>9}", "j", "law", "sample");
    for (j, p) in law.iter().filter(|(_, &p)| p > 1e-3) {
        let got = in_counts.get(j).copied().unwrap_or(0) as f64 / n as f64;
        println!("{j:>4} {p:>9.5} {got:>9.5}");
    }
    Ok(())
}
