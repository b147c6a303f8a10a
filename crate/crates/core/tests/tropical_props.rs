mod common;

use std::sync::OnceLock;

use hornlab::hive::kt_member;
use hornlab::network::{build_gamma0, tropical_gz};
use hornlab::rational::{ratio, to_f64};
use hornlab::tableau::Role;
use hornlab::tropical_horn::{
    find_delta0_chamber, genericity_check, horn_triple_tropical, kappa, kappa_f64, lt_inverse, random_generic_weighting,
    random_interior_gz, ChamberMap, WbarWeighting,
};
use hornlab::{Rational, Tableau};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn chamber(n: usize) -> &'static ChamberMap {
    static CHAMBERS: OnceLock<Vec<ChamberMap>> = OnceLock::new();
    &CHAMBERS.get_or_init(|| (1..=5).map(|n| find_delta0_chamber(n).unwrap()).collect())[n - 1]
}

fn interior(n: usize, seed: u64) -> Tableau<Rational> {
    random_interior_gz(n, &mut ChaCha20Rng::seed_from_u64(seed))
}

fn combine(a: &Tableau<Rational>, b: &Tableau<Rational>, ca: &Rational, cb: &Rational) -> Tableau<Rational> {
    let rows = a.rows().iter().zip(b.rows()).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * ca + q * cb).collect()).collect();
    Tableau::from_rows(Role::Gz, rows).unwrap()
}

fn wbar_add(a: &WbarWeighting, b: &WbarWeighting, ca: &Rational, cb: &Rational) -> WbarWeighting {
    let v = a.stored().iter().zip(b.stored()).map(|(x, y)| x * ca + y * cb).collect();
    WbarWeighting::from_stored(a.n, v).unwrap()
}

fn wbar(n: usize) -> impl Strategy<Value = WbarWeighting> {
    prop::collection::vec(-1000i64..=1000, n * (n + 1) / 2)
        .prop_map(move |v| WbarWeighting::from_stored(n, v.into_iter().map(|x| ratio(x, 100)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_round_trips(n in 1usize..=5, seed in any::<u64>()) {
        let xi = interior(n, seed);
        let w = lt_inverse(&xi, chamber(n)).unwrap();
        let g = build_gamma0(n).unwrap();
        let back = tropical_gz(&g, &w.embed_tropical(&g).unwrap()).unwrap().to_finite().unwrap();
        prop_assert_eq!(back.rows(), xi.rows());
    }

    #[test]
    fn inverse_is_linear_on_the_cone(n in 1usize..=4, s1 in any::<u64>(), s2 in any::<u64>(), p in 1i64..50, q in 1i64..50) {
        let (a, b) = (interior(n, s1), interior(n, s2));
        let (ca, cb) = (ratio(p, 7), ratio(q, 11));
        let ch = chamber(n);
        let lhs = lt_inverse(&combine(&a, &b, &ca, &cb), ch).unwrap();
        let rhs = wbar_add(&lt_inverse(&a, ch).unwrap(), &lt_inverse(&b, ch).unwrap(), &ca, &cb);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kappa_lands_in_the_horn_cone(n in 1usize..=3, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (u, v) = (interior(n, s1), interior(n, s2));
        let c = kappa(&u, &v, chamber(n)).unwrap();
        let t = hornlab::hive::HornTriple::new(u.top()[1..].to_vec(), v.top()[1..].to_vec(), c.clone()).unwrap();
        prop_assert!(kt_member(&t, &Rational::zero()));
        prop_assert_eq!(&c[n - 1], &(&u.top()[n] + &v.top()[n]));
        let cf = kappa_f64(&u.to_f64(), &v.to_f64(), chamber(n)).unwrap();
        let exact: Vec<f64> = c.iter().map(to_f64).collect();
        prop_assert!(common::max_abs_diff(&cf, &exact) < 1e-9);
    }

    #[test]
    fn kappa_rank_two_image(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (u, v) = (interior(2, s1), interior(2, s2));
        let c = kappa(&u, &v, chamber(2)).unwrap();
        let (r, s) = (u.top(), v.top());
        let (a1, a2) = (r[1].clone(), &r[2] - &r[1]);
        let (b1, b2) = (s[1].clone(), &s[2] - &s[1]);
        let lo = std::cmp::max(&a1 + &b2, &a2 + &b1);
        prop_assert!(c[0] >= lo && c[0] <= &a1 + &b1);
    }

    #[test]
    fn tropical_triples_are_feasible(n in 1usize..=3, w1 in wbar(3), w2 in wbar(3)) {
        let cut = |w: &WbarWeighting| {
            let nd = n * (n - 1) / 2;
            WbarWeighting::new(n, w.diagonals[..nd].to_vec(), w.sink_horizontals[..n].to_vec()).unwrap()
        };
        let t = horn_triple_tropical(&cut(&w1), &cut(&w2)).unwrap();
        prop_assert!(kt_member(&t, &Rational::zero()));
    }

    #[test]
    fn genericity_is_monotone_in_delta(w in wbar(3), d in 1i64..200) {
        let small = genericity_check(std::slice::from_ref(&w), &ratio(d, 1000)).unwrap();
        let large = genericity_check(std::slice::from_ref(&w), &ratio(2 * d, 1000)).unwrap();
        prop_assert!(small.generic || !large.generic);
        if !small.generic {
            let delta = ratio(d, 1000);
            let tight_margin = small.min_interlacing_margin.as_ref().is_none_or(|m| *m <= delta);
            prop_assert!(small.violating_pair().is_some() || tight_margin);
        }
    }
}

#[test]
fn random_generic_weightings_pass_their_own_margin() {
    for n in 2..=4 {
        let mut rng = ChaCha20Rng::seed_from_u64(n as u64);
        for _ in 0..5 {
            let (w, delta) = random_generic_weighting(chamber(n), &mut rng).unwrap();
            assert!(delta > Rational::zero());
            assert!(genericity_check(&[w], &delta).unwrap().generic);
        }
    }
}

#[test]
fn kappa_rank_two_closed_form_on_a_grid() {
    let (r, s) = (ratio(2, 1), ratio(1, 1));
    let ch = chamber(2);
    for i in 0..10 {
        for j in 0..10 {
            let (x, y) = (ratio(-19 + 4 * i, 10), ratio(-9 + 2 * j, 10));
            let u = Tableau::gz_from_short(Role::Gz, vec![vec![x.clone()], vec![r.clone(), Rational::zero()]]).unwrap();
            let v = Tableau::gz_from_short(Role::Gz, vec![vec![y.clone()], vec![s.clone(), Rational::zero()]]).unwrap();
            let c = kappa(&u, &v, ch).unwrap();
            let (xr, yr) = (-x, -y);
            assert_eq!(c[0], std::cmp::max(&r - &yr, &xr + &s), "x={i} y={j}");
        }
    }
}

#[test]
fn chamber_inverse_is_integral() {
    for n in 1..=5 {
        let ch = chamber(n);
        let inv = ch.inverse().to_rows();
        assert!(inv.iter().flatten().all(|x| x.is_integer()), "n={n}");
        let id = common::matmul(&ch.matrix().to_rows(), &inv);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, ratio(i64::from(i == j), 1));
            }
        }
    }
}
