mod common;

use hornlab::hive::gz_check_slack;
use hornlab::measure::{
    default_spectra, generate, ks_distance, ks_two_sample, measure_compare, random_directions, EmpiricalSample, Generator,
    Projection, Schedule,
};
use hornlab::polytope::PolytopeSampler;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ks_is_a_symmetric_distance(a in prop::collection::vec(-10.0f64..10.0, 1..60), b in prop::collection::vec(-10.0f64..10.0, 1..60)) {
        let d = ks_two_sample(&a, &b);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_two_sample(&b, &a));
        prop_assert_eq!(ks_two_sample(&a, &a), 0.0);
    }

    #[test]
    fn ks_is_invariant_under_monotone_maps(a in prop::collection::vec(-3.0f64..3.0, 1..60), b in prop::collection::vec(-3.0f64..3.0, 1..60)) {
        let f = |v: &[f64]| v.iter().map(|x| x.exp() * 2.0 + 1.0).collect::<Vec<_>>();
        prop_assert!((ks_two_sample(&a, &b) - ks_two_sample(&f(&a), &f(&b))).abs() < 1e-12);
    }

    #[test]
    fn hit_and_run_stays_in_the_polytope(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (r, _) = default_spectra(n);
        let mut chain = PolytopeSampler::with_params(&r, 10, 2, &mut rng).unwrap();
        for _ in 0..20 {
            let t = chain.next_tableau(&mut rng);
            prop_assert!(gz_check_slack(&t, 1e-12));
            prop_assert!(common::max_abs_diff(&t.top()[1..], &r) < 1e-12);
        }
    }
}

fn sample(generator: Generator, r: &[f64], s: &[f64], count: usize, seed: u64) -> EmpiricalSample {
    generate(generator, r, s, count, &Schedule::seeded(seed)).unwrap()
}

#[test]
fn scale_equivariance() {
    for n in [2, 3] {
        let (r, s) = default_spectra(n);
        let tau = 2.5;
        let (tr, ts): (Vec<f64>, Vec<f64>) = (r.iter().map(|x| tau * x).collect(), s.iter().map(|x| tau * x).collect());
        for generator in Generator::ALL {
            let base = sample(generator, &r, &s, 30_000, 11).scaled(tau);
            let big = sample(generator, &tr, &ts, 30_000, 12);
            for i in 0..n {
                let ks = ks_distance(&base, &big, &Projection::Coordinate(i)).unwrap().statistic;
                assert!(ks < 0.02, "{generator} n={n} coordinate {i}: {ks}");
            }
        }
    }
}

#[test]
fn thread_count_does_not_change_samples() {
    let (r, s) = default_spectra(3);
    for generator in Generator::ALL {
        let one = generate(generator, &r, &s, 2_500, &Schedule { seed: 5, chunk_size: 400, threads: 1 }).unwrap();
        let many = generate(generator, &r, &s, 2_500, &Schedule { seed: 5, chunk_size: 400, threads: 4 }).unwrap();
        assert_eq!(one.values, many.values, "{generator}");
    }
}

#[test]
fn csv_round_trip_is_lossless() {
    let (r, s) = default_spectra(3);
    let a = sample(Generator::Multiplicative, &r, &s, 300, 8);
    let mut buf = Vec::new();
    a.write_csv(&mut buf).unwrap();
    let b = EmpiricalSample::read_csv(&buf[..]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rank_one_generators_are_deterministic() {
    for generator in Generator::ALL {
        let x = sample(generator, &[1.0], &[0.5], 50, 1);
        assert!(x.values.iter().all(|v| v == &vec![1.5]), "{generator}");
    }
}

#[test]
fn mismatched_spectra_fail_the_comparison() {
    let (r, s) = default_spectra(2);
    let rep = measure_compare(&r, &s, 20_000, 3, 0.02, &Schedule::seeded(3), Some((&[3.0, 0.0], &s))).unwrap();
    assert!(!rep.pass);
}

#[test]
fn directions_are_seeded_unit_vectors() {
    let d = random_directions(3, 3, 42);
    assert_eq!(d, random_directions(3, 3, 42));
    assert_ne!(d, random_directions(3, 3, 43));
    for v in d {
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
