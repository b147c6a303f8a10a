//! Minors of the staircase network's weight matrix, computed three ways.

use hornlab::matrix::subsets;
use hornlab::network::{build_gamma0, correspondence_matrix, minor, minor_enumerated};
use hornlab::rational::{format, ratio};
use hornlab::Rational;

fn main() -> hornlab::Result<()> {
    let g = build_gamma0(3)?;
    let w: Vec<Rational> = (0..g.num_edges()).map(|e| ratio(e as i64 % 5 + 1, 2)).collect();
    let m = correspondence_matrix(&g, &w)?;
    println!("Gamma0(3): {} nodes, {} edges", g.nodes().len(), g.num_edges());
    for row in m.to_rows() {
        println!("  {}", row.iter().map(format).collect::<Vec<_>>().join("  "));
    }
    for k in 1..=3 {
        for i in subsets(3, k) {
            for j in subsets(3, k) {
                let by_paths = minor_enumerated(&g, &w, &i, &j)?;
                let det = m.submatrix(&i, &j).det();
                assert_eq!(by_paths, det);
                assert_eq!(minor(&g, &w, &i, &j)?, det);
                println!("{i:?} x {j:?}: {}", format(&det));
            }
        }
    }
    Ok(())
}
