mod common;

use hornlab::network::{
    build_gamma0, concat_weights, concatenate, correspondence_matrix, correspondence_matrix_enumerated, m_all,
    complex_lift, compound_log_singular, m_all_enumerated, minor, minor_enumerated, subnetwork, tropical_gz, tropical_gz_enumerated, EdgeTag, PlanarNetwork,
};
use hornlab::rational::ratio;
use hornlab::semiring::Semiring;
use hornlab::linalg::{singular_l, CMatrix};
use hornlab::{Rational, Tropical};
use num_complex::Complex64;
use proptest::prelude::*;

fn weights(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-500i64..=500, 1i64..=20), len).prop_map(|v| v.into_iter().map(|(p, q)| ratio(p, q)).collect())
}

fn rank_and_weights() -> impl Strategy<Value = (usize, Vec<Rational>)> {
    (1usize..=4).prop_flat_map(|n| {
        let e = build_gamma0(n).unwrap().num_edges();
        (Just(n), weights(e))
    })
}

fn tropical(w: &[Rational]) -> Vec<Tropical> {
    w.iter().cloned().map(Tropical::Fin).collect()

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lindstrom_over_rationals((n, w) in rank_and_weights()) {
        let g = build_gamma0(n).unwrap();
        let m = correspondence_matrix(&g, &w).unwrap().to_rows();
        for k in 1..=n {
            for i in common::subsets(n, k) {
                for j in common::subsets(n, k) {
                    let det = common::leibniz_minor(&m, &i, &j);
                    prop_assert_eq!(&minor_enumerated(&g, &w, &i, &j).unwrap(), &det);
                    prop_assert_eq!(&minor(&g, &w, &i, &j).unwrap(), &det);
                }
            }
        }
    }

    #[test]
    fn lindstrom_over_max_plus((n, w) in rank_and_weights()) {
        let g = build_gamma0(n).unwrap();
        let w = tropical(&w);
        for k in 1..=n {
            for i in common::subsets(n, k) {
                for j in common::subsets(n, k) {
                    prop_assert_eq!(minor(&g, &w, &i, &j).unwrap(), minor_enumerated(&g, &w, &i, &j).unwrap());
                }
            }
        }
        prop_assert_eq!(m_all(&g, &w).unwrap(), m_all_enumerated(&g, &w).unwrap());
        prop_assert_eq!(correspondence_matrix(&g, &w).unwrap(), correspondence_matrix_enumerated(&g, &w).unwrap());
    }

    #[test]
    fn concatenation_multiplies((n, w1) in rank_and_weights(), seed in any::<u64>()) {
        let g = build_gamma0(n).unwrap();
        let mut rng = <rand_chacha::ChaCha20Rng as rand::SeedableRng>::seed_from_u64(seed);
        let w2 = common::random_weights(&g, &mut rng, 5);
        let gg = concatenate(&g, &g).unwrap();
        let w = concat_weights(&w1, &w2);
        let lhs = correspondence_matrix(&gg, &w).unwrap().to_rows();
        let rhs = common::matmul(&correspondence_matrix(&g, &w1).unwrap().to_rows(), &correspondence_matrix(&g, &w2).unwrap().to_rows());
        prop_assert_eq!(lhs, rhs);
        let (t1, t2) = (tropical(&w1), tropical(&w2));
        let tm = correspondence_matrix(&g, &t1).unwrap().mul(&correspondence_matrix(&g, &t2).unwrap());
        prop_assert_eq!(correspondence_matrix(&gg, &concat_weights(&t1, &t2)).unwrap(), tm);
    }

    #[test]
    fn tropical_gz_interlaces((n, w) in rank_and_weights()) {
        let g = build_gamma0(n).unwrap();
        let w = tropical(&w);
        let t = tropical_gz(&g, &w).unwrap();
        prop_assert_eq!(&t, &tropical_gz_enumerated(&g, &w).unwrap());
        prop_assert!(common::interlaces(&t.to_finite().unwrap()));
    }

    #[test]
    fn concatenated_multipaths_split((n, w1) in rank_and_weights(), seed in any::<u64>()) {
        let g = build_gamma0(n).unwrap();
        let mut rng = <rand_chacha::ChaCha20Rng as rand::SeedableRng>::seed_from_u64(seed);
        let w2 = common::random_weights(&g, &mut rng, 5);
        let gg = concatenate(&g, &g).unwrap();
        let (t1, t2) = (tropical(&w1), tropical(&w2));
        let (m1, m2) = (m_all(&g, &t1).unwrap(), m_all(&g, &t2).unwrap());
        let m = m_all(&gg, &concat_weights(&t1, &t2)).unwrap();
        for k in 0..n {
            prop_assert!(m[k] <= m1[k].mul(&m2[k]));
        }
        prop_assert_eq!(&m[n - 1], &m1[n - 1].mul(&m2[n - 1]));
    }

    #[test]
    fn compound_route_matches_the_lifted_matrix(n in 1usize..=4, seed in prop::collection::vec((-1.0f64..1.0, 0.0f64..6.3), 10), tau in 0.2f64..2.0) {
        let g = build_gamma0(n).unwrap();
        let e = g.num_edges();
        let u: Vec<f64> = (0..e).map(|i| seed[i % 10].0 + 0.1 * i as f64).collect();
        let phi: Vec<Complex64> = (0..e).map(|i| Complex64::from_polar(1.0, seed[(i * 3) % 10].1 + i as f64)).collect();
        let a = CMatrix::from_matrix(&complex_lift(&g, &u, &phi, tau).unwrap());
        let direct = singular_l(&a).unwrap();
        prop_assert!(common::max_abs_diff(&compound_log_singular(&g, &u, &phi, tau).unwrap(), &direct) < 1e-9);
    }

    #[test]
    fn json_round_trip(n in 1usize..=5) {
        let g = build_gamma0(n).unwrap();
        let back = PlanarNetwork::from_json(&g.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), g.to_json().unwrap());
    }
}

#[test]
fn staircase_counts() {
    for n in 1..=5 {
        let g = build_gamma0(n).unwrap();
        assert_eq!(g.count_tag(EdgeTag::Diagonal), n * (n - 1) / 2);
        assert_eq!(g.count_tag(EdgeTag::SinkHorizontal), n);
        for k in 1..=n {
            let (sub, parent) = subnetwork(&g, k).unwrap();
            assert_eq!(sub.rank(), k);
            assert_eq!(sub.count_tag(EdgeTag::Diagonal), k * (k - 1) / 2);
            assert!(parent.iter().all(|&e| e < g.num_edges()));
        }
    }
}

#[test]
fn horizontal_only_weighting_is_identity() {
    for n in 1..=4 {
        let g = build_gamma0(n).unwrap();
        let mut w = vec![Rational::from_integer(0.into()); g.num_edges()];
        for e in g.edges_with_tag(EdgeTag::Horizontal).into_iter().chain(g.edges_with_tag(EdgeTag::SinkHorizontal)) {
            w[e] = Rational::from_integer(1.into());
        }
        let m = correspondence_matrix(&g, &w).unwrap().to_rows();
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, Rational::from_integer(i64::from(i == j).into()));
            }
        }
    }
}
