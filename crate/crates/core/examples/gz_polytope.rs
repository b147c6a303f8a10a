//! Hit-and-run samples from the Gelfand-Zeitlin polytope and the mean pattern.

use hornlab::polytope::sample_p_r;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> hornlab::Result<()> {
    let r = [3.0, 4.0, 4.0];
    let count = 20_000;
    let samples = sample_p_r(&r, count, &mut ChaCha20Rng::seed_from_u64(2))?;
    let n = r.len();
    for k in 1..n {
        let mean: Vec<f64> = (1..=k).map(|i| samples.iter().map(|t| t.get(k, i)).sum::<f64>() / count as f64).collect();
        println!("row {k}: {mean:.4?}");
    }
    println!("row {n}: {r:?}");
    Ok(())
}
