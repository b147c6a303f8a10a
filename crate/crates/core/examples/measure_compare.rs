//! Compare the three pushforward measures for rank two and three.

use hornlab::measure::{default_spectra, measure_compare, Schedule};

fn main() -> hornlab::Result<()> {
    for n in [2, 3] {
        let (r, s) = default_spectra(n);
        let report = measure_compare(&r, &s, 50_000, 3, 0.02, &Schedule::seeded(0), None)?;
        println!("n = {n}, r = {r:?}, s = {s:?}");
        for e in &report.ks {
            println!("  {:>14} vs {:<14} {:?}: {:.4}", e.first.tag(), e.second.tag(), e.ks.projection, e.ks.statistic);
        }
        println!("  pass = {}", report.pass);
    }
    Ok(())
}
