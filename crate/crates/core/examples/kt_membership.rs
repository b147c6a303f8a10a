//! Exact hive-cone membership for a few rank-three triples.

use hornlab::hive::{kt_member, kt_witness, HornTriple};
use hornlab::rational::{format, parse_list};
use hornlab::Rational;
use num_traits::Zero;

fn main() -> hornlab::Result<()> {
    let cases = [
        ("3,5,6", "2,3,3", "5,8,9"),
        ("3,5,6", "2,3,3", "6,8,9"),
        ("1,1", "1,1", "2.5,2"),
        ("2,3,3", "1,1,0", "3,4,3"),
    ];
    for (a, b, c) in cases {
        let t = HornTriple::new(parse_list(a)?, parse_list(b)?, parse_list(c)?)?;
        let member = kt_member(&t, &Rational::zero());
        println!("a=({a}) b=({b}) c=({c}): {}", if member { "FEASIBLE" } else { "INFEASIBLE" });
        if let Some(hive) = kt_witness(&t, &Rational::zero()) {
            for row in hive.rows() {
                println!("    {}", row.iter().map(format).collect::<Vec<_>>().join(" "));
            }
        }
    }
    Ok(())
}
