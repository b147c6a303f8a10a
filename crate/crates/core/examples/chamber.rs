//! The linear chamber of the tropical map, its inverse, and the map kappa.

use hornlab::network::tropical_gz;
use hornlab::rational::format;
use hornlab::tropical_horn::{find_delta0_chamber, kappa, lt_inverse, random_interior_gz};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> hornlab::Result<()> {
    let n = 3;
    let chamber = find_delta0_chamber(n)?;
    println!("chamber matrix for n = {n}:");
    for row in chamber.matrix().to_rows() {
        println!("  {}", row.iter().map(format).collect::<Vec<_>>().join(" "));
    }

    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let u = random_interior_gz(n, &mut rng);
    let v = random_interior_gz(n, &mut rng);
    let w = lt_inverse(&u, &chamber)?;
    println!("\npattern  {:?}", u.short_rows().iter().map(|r| r.iter().map(format).collect::<Vec<_>>()).collect::<Vec<_>>());
    println!("weights  {}", w.to_json());
    let g = chamber.gamma0();
    let back = tropical_gz(g, &w.embed_tropical(g)?)?.to_finite()?;
    assert_eq!(back.rows(), u.rows());

    let c = kappa(&u, &v, &chamber)?;
    println!("\nr     = {:?}", u.top()[1..].iter().map(format).collect::<Vec<_>>());
    println!("s     = {:?}", v.top()[1..].iter().map(format).collect::<Vec<_>>());
    println!("kappa = {:?}", c.iter().map(format).collect::<Vec<_>>());
    Ok(())
}
