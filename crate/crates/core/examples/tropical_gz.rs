//! Tropical Gelfand-Zeitlin pattern of a rank-two weighting and of a larger
//! random one.

use hornlab::measure::rank_two_example;
use hornlab::network::{build_gamma0, tropical_gz, tropical_singular_values};
use hornlab::tropical_horn::{find_delta0_chamber, random_generic_weighting};
use hornlab::rational::format;
use hornlab::Tropical;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn show(t: &[Tropical]) -> String {
    t.iter().map(|x| x.value().map_or("-inf".to_string(), format)).collect::<Vec<_>>().join(" ")
}

fn main() -> hornlab::Result<()> {
    let (w, _) = rank_two_example();
    let g = build_gamma0(2)?;
    let x = w.embed_tropical(&g)?;
    let t = tropical_gz(&g, &x)?;
    for row in t.rows() {
        println!("{}", show(row));
    }
    println!("singular values: {}", show(&tropical_singular_values(&g, &x)?));

    let chamber = find_delta0_chamber(4)?;
    let (w, delta) = random_generic_weighting(&chamber, &mut ChaCha20Rng::seed_from_u64(1))?;
    let g = chamber.gamma0();
    let t = tropical_gz(g, &w.embed_tropical(g)?)?;
    println!("\nn = 4, delta = {delta}");
    for row in t.rows() {
        println!("{}", show(row));
    }
    Ok(())
}
