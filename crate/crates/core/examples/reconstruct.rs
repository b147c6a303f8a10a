//! Build matrices from action-angle data and read the patterns back.

use hornlab::linalg::{gz_b, gz_h, l_map, reconstruct_b_pattern, reconstruct_h, singular_l};
use hornlab::polytope::{sample_action_angle, PolytopeSampler};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> hornlab::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let r = [2.0, 3.0, 3.0];
    let mut chain = PolytopeSampler::new(&r, &mut rng)?;
    let (xi, angles) = sample_action_angle(&mut chain, &mut rng);

    let k = reconstruct_h(&xi, &angles)?;
    let back = gz_h(&k)?;
    println!("hermitian: l = {:.12?}", l_map(&k)?);
    for row in 1..=r.len() {
        println!("  {:.9?}  {:.9?}", xi.row(row), back.row(row));
    }

    let a = reconstruct_b_pattern(&xi, &angles)?;
    let back = gz_b(a.as_matrix(), false)?;
    println!("upper triangular: singular l = {:.12?}", singular_l(a.as_matrix())?);
    for row in 1..=r.len() {
        println!("  {:.9?}  {:.9?}", xi.row(row), back.row(row));
    }
    Ok(())
}
