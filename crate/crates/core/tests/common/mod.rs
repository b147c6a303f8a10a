#![allow(dead_code)]

use hornlab::network::PlanarNetwork;
use hornlab::rational::ratio;
use hornlab::{Rational, Tableau};
use num_traits::{One, Zero};
use rand::Rng;

/// Integers over 100 in `[-lim, lim]`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, lim: i64) -> Rational {
    ratio(rng.random_range(-100 * lim..=100 * lim), 100)
}

/// Positive weights `p/q` with small numerator and denominator.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    ratio(rng.random_range(1..=9), rng.random_range(1..=7))
}

pub fn random_weights<R: Rng + ?Sized>(g: &PlanarNetwork, rng: &mut R, lim: i64) -> Vec<Rational> {
    (0..g.num_edges()).map(|_| random_rational(rng, lim)).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Leibniz expansion of the `rows x cols` minor of `m`.
pub fn leibniz_minor(m: &[Vec<Rational>], rows: &[usize], cols: &[usize]) -> Rational {
    let mut total = Rational::zero();
    for p in permutations(rows.len()) {
        let mut term = Rational::one();
        for (a, &b) in p.iter().enumerate() {
            term *= &m[rows[a]][cols[b]];
        }
        if sign(&p) > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..b[0].len()).map(|j| (0..b.len()).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Eigenvalue rows `λ^(k)_i = l^k_i - l^k_{i-1}` of a cumulative tableau.
pub fn increments<T: Clone + std::ops::Sub<Output = T>>(t: &Tableau<T>) -> Vec<Vec<T>> {
    (1..=t.n()).map(|k| (1..=k).map(|i| t.get(k, i).clone() - t.get(k, i - 1).clone()).collect()).collect()
}

/// `λ^(k+1)_i ≥ λ^(k)_i ≥ λ^(k+1)_{i+1}` with the left edge at zero.
pub fn interlaces<T: Clone + PartialOrd + Zero + std::ops::Sub<Output = T>>(t: &Tableau<T>) -> bool {
    if (0..=t.n()).any(|k| !t.get(k, 0).is_zero()) {
        return false;
    }
    let lam = increments(t);
    (0..lam.len().saturating_sub(1)).all(|k| (0..=k).all(|i| lam[k + 1][i] >= lam[k][i] && lam[k][i] >= lam[k + 1][i + 1]))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
