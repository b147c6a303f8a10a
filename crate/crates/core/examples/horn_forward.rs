//! Forward direction of the three Horn problems: every generated triple
//! satisfies the hive inequalities.

use hornlab::measure::{horn_forward_test, ForwardMode};
use hornlab::rational::parse;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> hornlab::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for (mode, eps) in [(ForwardMode::Tropical, "0"), (ForwardMode::Hermitian, "1e-8"), (ForwardMode::Multiplicative, "1e-8")] {
        for n in 1..=3 {
            let rep = horn_forward_test(mode, n, 100, &parse(eps)?, &mut rng)?;
            println!("{mode:?} n={n}: {}/{} pass", rep.passed, rep.count);
        }
    }
    Ok(())
}
