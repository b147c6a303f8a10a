//! Convergence of rescaled log singular values to the tropical values.

use hornlab::measure::{default_tau_grid, limit_sweep, rank_two_example};
use hornlab::rational::to_f64;

fn main() -> hornlab::Result<()> {
    let (w, delta) = rank_two_example();
    let res = limit_sweep(&w, None, &default_tau_grid(), &delta)?;
    println!("tropical values {:?}", res.tropical);
    for (t, e) in res.tau.iter().zip(&res.error).step_by(3) {
        println!("tau {t:>6.2}  error {e:.3e}");
    }
    match res.slope {
        Some(s) => println!("slope {s:.3} (delta {})", to_f64(&res.delta)),
        None => println!("slope absent"),
    }
    Ok(())
}
