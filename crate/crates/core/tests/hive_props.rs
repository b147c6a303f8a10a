mod common;

use hornlab::hive::{boundary, hive_check, kt_member, kt_witness, scale_triple, HornTriple};
use hornlab::linalg::{haar_unitary, l_map, CMatrix};
use hornlab::lp::FeasibilityProblem;
use hornlab::rational::{parse, ratio};
use hornlab::Rational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn cumulative(lam: &[i64]) -> Vec<Rational> {
    lam.iter().scan(0, |acc, x| {
        *acc += x;
        Some(ratio(*acc, 1))
    }).collect()
}

fn sorted_desc(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Rank-two Horn system: ordered spectra, trace, and the three Weyl
/// inequalities.
fn weyl_n2(a: &[i64], b: &[i64], c: &[i64]) -> bool {
    let ordered = |v: &[i64]| v[0] >= v[1];
    ordered(a)
        && ordered(b)
        && ordered(c)
        && c[0] + c[1] == a[0] + a[1] + b[0] + b[1]
        && c[0] <= a[0] + b[0]
        && c[1] <= a[0] + b[1]
        && c[1] <= a[1] + b[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_two_matches_weyl(a in prop::collection::vec(-6i64..=6, 2), b in prop::collection::vec(-6i64..=6, 2), c0 in -14i64..=14) {
        let c = vec![c0, a[0] + a[1] + b[0] + b[1] - c0];
        let t = HornTriple::new(cumulative(&a), cumulative(&b), cumulative(&c)).unwrap();
        prop_assert_eq!(kt_member(&t, &Rational::zero()), weyl_n2(&a, &b, &c));
    }

    #[test]
    fn witness_is_a_hive_with_the_right_boundary(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let a = sorted_desc((0..n).map(|_| rand::Rng::random_range(&mut rng, -5..=5)).collect());
        let b = sorted_desc((0..n).map(|_| rand::Rng::random_range(&mut rng, -5..=5)).collect());
        let c = sorted_desc(a.iter().zip(&b).map(|(x, y)| x + y).collect());
        let t = HornTriple::new(cumulative(&a), cumulative(&b), cumulative(&c)).unwrap();
        let hive = kt_witness(&t, &Rational::zero());
        prop_assert!(hive.is_some());
        let hive = hive.unwrap();
        prop_assert!(hive_check(&hive));
        prop_assert_eq!(boundary(&hive), t);
    }

    #[test]
    fn membership_is_scale_invariant(a in prop::collection::vec(-6i64..=6, 2), b in prop::collection::vec(-6i64..=6, 2), c0 in -14i64..=14, p in 1i64..20, q in 1i64..20) {
        let c = vec![c0, a[0] + a[1] + b[0] + b[1] - c0];
        let t = HornTriple::new(cumulative(&a), cumulative(&b), cumulative(&c)).unwrap();
        let scaled = scale_triple(&t, &ratio(p, q)).unwrap();
        prop_assert_eq!(kt_member(&t, &Rational::zero()), kt_member(&scaled, &Rational::zero()));
    }

    #[test]
    fn slack_only_widens(a in prop::collection::vec(-6i64..=6, 3), b in prop::collection::vec(-6i64..=6, 3), c in prop::collection::vec(-6i64..=6, 3)) {
        let (a, b) = (sorted_desc(a), sorted_desc(b));
        let mut c = sorted_desc(c);
        c[2] += a.iter().sum::<i64>() + b.iter().sum::<i64>() - c.iter().sum::<i64>();
        let t = HornTriple::new(cumulative(&a), cumulative(&b), cumulative(&c)).unwrap();
        if kt_member(&t, &Rational::zero()) {
            prop_assert!(kt_member(&t, &ratio(1, 2)));
        }
        if kt_member(&t, &ratio(-1, 10)) {
            prop_assert!(kt_member(&t, &Rational::zero()));
        }
    }

    #[test]
    fn hermitian_sums_are_members(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let diag = |rng: &mut ChaCha20Rng| CMatrix::from_real_diag(&(0..n).map(|_| rand::Rng::random_range(rng, -3.0..3.0)).collect::<Vec<f64>>());
        let k1 = diag(&mut rng);
        let u = haar_unitary(n, &mut rng);
        let k2 = u.mul(&diag(&mut rng)).mul(&u.adjoint()).hermitian_part();
        let t = HornTriple::from_f64(&l_map(&k1).unwrap(), &l_map(&k2).unwrap(), &l_map(&k1.add(&k2)).unwrap()).unwrap();
        prop_assert!(kt_member(&t, &parse("1e-8").unwrap()));
    }

    #[test]
    fn lp_finds_planted_points(m in 1usize..8, nv in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x0: Vec<Rational> = (0..nv).map(|_| common::random_rational(&mut rng, 5)).collect();
        let mut lp = FeasibilityProblem::new(nv);
        for _ in 0..m {
            let row: Vec<Rational> = (0..nv).map(|_| common::random_rational(&mut rng, 3)).collect();
            let lhs = row.iter().zip(&x0).fold(Rational::zero(), |acc, (a, x)| acc + a * x);
            let gap = ratio(rand::Rng::random_range(&mut rng, 0..5), 3);
            lp.push(row, lhs - gap);
        }
        let x = lp.solve();
        prop_assert!(x.is_some());
        prop_assert!(lp.is_satisfied_by(&x.unwrap()));
    }

    #[test]
    fn lp_detects_contradictions(nv in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let row: Vec<Rational> = (0..nv).map(|_| common::random_rational(&mut rng, 3)).collect();
        let b = common::random_rational(&mut rng, 3);
        let mut lp = FeasibilityProblem::new(nv);
        lp.push(row.clone(), b.clone());
        lp.push(row.iter().map(|x| -x).collect(), -b + ratio(1, 7));
        prop_assert!(lp.solve().is_none());
    }
}

#[test]
fn rank_one_is_the_trace() {
    let q = |x| vec![ratio(x, 1)];
    assert!(kt_member(&HornTriple::new(q(1), q(2), q(3)).unwrap(), &Rational::zero()));
    assert!(!kt_member(&HornTriple::new(q(1), q(2), q(4)).unwrap(), &Rational::zero()));
}
