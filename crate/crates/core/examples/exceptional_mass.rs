//! Fraction of Hermitian sums whose triple leaves the hive cone.

use hornlab::measure::{default_spectra, exceptional_mass_estimate, Schedule};
use hornlab::rational::parse;

fn main() -> hornlab::Result<()> {
    for n in 2..=3 {
        let (r, s) = default_spectra(n);
        let rep = exceptional_mass_estimate(&r, &s, 5_000, &parse("1e-8")?, &Schedule::seeded(1))?;
        println!("n={n}: {} of {} outside (fraction {})", rep.failures, rep.count, rep.fraction);
    }
    Ok(())
}
