//! The correspondence map, minors, `m_k`, and tropical Gelfand-Zeitlin data.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::paths::{enumerate_all_kpaths, enumerate_kpaths, single_paths};
use super::transfer::{mask_of, run, set_of, Mode};
use super::{restrict_weights, subnetwork, PlanarNetwork};
use crate::error::{HornError, Result};
use crate::linalg::{eigh, CMatrix};
use crate::matrix::Matrix;
use crate::semiring::{ScaledComplex, Semiring, Tropical, TropicalScalar};
use crate::tableau::{Role, Tableau};

/// `M_{ij}` is the sum over paths from source `i` to sink `j`.
pub fn correspondence_matrix<S: Semiring>(g: &PlanarNetwork, w: &[S]) -> Result<Matrix<S>> {
    g.check_weighting(w)?;
    let n = g.rank();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let mut acc = vec![S::zero(); g.nodes().len()];
        acc[g.sources()[i]] = S::one();
        for v in 0..g.nodes().len() {
            if acc[v].is_zero() {
                continue;
            }
            for &e in g.out_edges(v) {
                let h = g.edges()[e].head;
                acc[h] = acc[h].add(&acc[v].mul(&w[e]));
            }
        }
        for j in 0..n {
            m[(i, j)] = acc[g.sinks()[j]].clone();
        }
    }
    Ok(m)
}

/// Reference implementation of [`correspondence_matrix`] by listing paths.
pub fn correspondence_matrix_enumerated<S: Semiring>(g: &PlanarNetwork, w: &[S]) -> Result<Matrix<S>> {
    g.check_weighting(w)?;
    let n = g.rank();
    let mut m = Matrix::<S>::zeros(n, n);
    for i in 0..n {
        for p in single_paths(g, i) {
            let v = p.last().map_or(g.sources()[i], |&e| g.edges()[e].head);
            let j = g.sink_index(v).expect("path ends at a sink");
            let wt = p.iter().fold(S::one(), |acc, &e| acc.mul(&w[e]));
            m[(i, j)] = m[(i, j)].add(&wt);
        }
    }
    Ok(m)
}

fn check_sets(g: &PlanarNetwork, i_set: &[usize], j_set: &[usize]) -> Result<()> {
    if i_set.len() != j_set.len() {
        return Err(HornError::InvalidIndexSet(format!("|I| = {} but |J| = {}", i_set.len(), j_set.len())));
    }
    for s in [i_set, j_set] {
        if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&i| i >= g.rank()) {
            return Err(HornError::InvalidIndexSet(format!("{s:?} is not an increasing subset of 0..{}", g.rank())));
        }
    }
    Ok(())
}

/// Lindström minor `M_{I,J}`: the sum over vertex-disjoint path systems.
pub fn minor<S: Semiring>(g: &PlanarNetwork, w: &[S], i_set: &[usize], j_set: &[usize]) -> Result<S> {
    check_sets(g, i_set, j_set)?;
    let (si, sj) = (mask_of(i_set), mask_of(j_set));
    let table = run(g, w, Mode::Fixed { sources: si, sinks: sj })?;
    Ok(table.get(&(si, sj)).cloned().unwrap_or_else(S::zero))
}

pub fn minor_enumerated<S: Semiring>(g: &PlanarNetwork, w: &[S], i_set: &[usize], j_set: &[usize]) -> Result<S> {
    g.check_weighting(w)?;
    let systems = enumerate_kpaths(g, i_set, j_set)?;
    Ok(systems.iter().fold(S::zero(), |acc, mp| acc.add(&mp.weight(w))))
}

/// Every nonempty minor `(I, J) -> M_{I,J}` in one sweep.
pub fn minor_table<S: Semiring>(g: &PlanarNetwork, w: &[S]) -> Result<BTreeMap<(Vec<usize>, Vec<usize>), S>> {
    let table = run(g, w, Mode::Masks)?;
    Ok(table.into_iter().map(|((a, b), v)| ((set_of(a), set_of(b)), v)).collect())
}

/// `(m_1, ..., m_n)`, where `m_k` sums all `k`-path systems.
pub fn m_all<S: Semiring>(g: &PlanarNetwork, w: &[S]) -> Result<Vec<S>> {
    let n = g.rank();
    let table = run(g, w, Mode::Count { max: n })?;
    Ok((1..=n).map(|k| table.get(&(k as u32, 0)).cloned().unwrap_or_else(S::zero)).collect())
}

pub fn m_k<S: Semiring>(g: &PlanarNetwork, w: &[S], k: usize) -> Result<S> {
    if k == 0 || k > g.rank() {
        return Err(HornError::InvalidArgument(format!("k = {k} outside 1..{}", g.rank())));
    }
    let table = run(g, w, Mode::Count { max: k })?;
    Ok(table.get(&(k as u32, 0)).cloned().unwrap_or_else(S::zero))
}

pub fn m_all_enumerated<S: Semiring>(g: &PlanarNetwork, w: &[S]) -> Result<Vec<S>> {
    g.check_weighting(w)?;
    Ok((1..=g.rank())
        .map(|k| enumerate_all_kpaths(g, k).iter().fold(S::zero(), |acc, mp| acc.add(&mp.weight(w))))
        .collect())
}

/// `λ_1 = m_1`, `λ_i = m_i - m_{i-1}`; −∞ once `P_i` is empty.
pub fn tropical_singular_values<T: TropicalScalar>(g: &PlanarNetwork, w: &[Tropical<T>]) -> Result<Vec<Tropical<T>>> {
    let m = m_all(g, w)?;
    Ok(singular_from_m(&m))
}

pub(crate) fn singular_from_m<T: TropicalScalar>(m: &[Tropical<T>]) -> Vec<Tropical<T>> {
    let mut out = Vec::with_capacity(m.len());
    let mut prev = Tropical::Fin(T::zero());
    for mk in m {
        out.push(match mk.diff(&prev) {
            Some(d) => Tropical::Fin(d),
            None => Tropical::NegInf,
        });
        prev = mk.clone();
    }
    out
}

/// The chain of subnetworks `Γ^(1) ⊂ ... ⊂ Γ^(n)` with parent edge maps,
/// built once and reused across weightings.
#[derive(Clone, Debug)]
pub struct Filtration {
    levels: Vec<(PlanarNetwork, Vec<usize>)>,
}

impl Filtration {
    pub fn new(g: &PlanarNetwork) -> Result<Self> {
        let levels = (1..=g.rank()).map(|k| subnetwork(g, k)).collect::<Result<Vec<_>>>()?;
        Ok(Filtration { levels })
    }

    pub fn rank(&self) -> usize {
        self.levels.len()
    }

    /// `Γ^(k)` and its parent edge map, `1 ≤ k ≤ n`.
    pub fn level(&self, k: usize) -> (&PlanarNetwork, &[usize]) {
        let (g, p) = &self.levels[k - 1];
        (g, p)
    }

    /// Row `k` holds `m_i(Γ^(k))` for `i = 1..k`, with `l^k_0 = 0`.
    pub fn tropical_gz<T: TropicalScalar>(&self, w: &[Tropical<T>]) -> Result<Tableau<Tropical<T>>> {
        let zero = Tropical::Fin(T::zero());
        let mut rows = vec![vec![zero.clone()]];
        for (g, parent) in &self.levels {
            let mut row = vec![zero.clone()];
            row.extend(m_all(g, &restrict_weights(w, parent))?);
            rows.push(row);
        }
        Tableau::from_rows(Role::TropicalGz, rows)
    }

    fn tropical_gz_enumerated<T: TropicalScalar>(&self, w: &[Tropical<T>]) -> Result<Tableau<Tropical<T>>> {
        let zero = Tropical::Fin(T::zero());
        let mut rows = vec![vec![zero.clone()]];
        for (g, parent) in &self.levels {
            let mut row = vec![zero.clone()];
            row.extend(m_all_enumerated(g, &restrict_weights(w, parent))?);
            rows.push(row);
        }
        Tableau::from_rows(Role::TropicalGz, rows)
    }
}

pub fn tropical_gz<T: TropicalScalar>(g: &PlanarNetwork, w: &[Tropical<T>]) -> Result<Tableau<Tropical<T>>> {
    g.check_weighting(w)?;
    Filtration::new(g)?.tropical_gz(w)
}

pub fn tropical_gz_enumerated<T: TropicalScalar>(g: &PlanarNetwork, w: &[Tropical<T>]) -> Result<Tableau<Tropical<T>>> {
    g.check_weighting(w)?;
    Filtration::new(g)?.tropical_gz_enumerated(w)
}

fn check_lift(g: &PlanarNetwork, u: &[f64], phi: &[Complex64], tau: f64) -> Result<()> {
    g.check_weighting(u)?;
    g.check_weighting(phi)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(HornError::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    for (edge, p) in phi.iter().enumerate() {
        let modulus = p.norm();
        if (modulus - 1.0).abs() > 1e-12 {
            return Err(HornError::NonUnitPhase { edge, modulus });
        }
    }
    if let Some(x) = u.iter().find(|x| !x.is_finite()) {
        return Err(HornError::InvalidArgument(format!("non-finite weight {x}")));
    }
    Ok(())
}

/// `M_{ij} = Σ_α exp(τ u(α)) φ(α)` over paths from source `i` to sink `j`.
pub fn complex_lift(g: &PlanarNetwork, u: &[f64], phi: &[Complex64], tau: f64) -> Result<Matrix<Complex64>> {
    check_lift(g, u, phi, tau)?;
    let w: Vec<Complex64> = u.iter().zip(phi).map(|(&x, &p)| p * (tau * x).exp()).collect();
    correspondence_matrix(g, &w)
}

/// Edge weights of the lift in overflow-safe form.
pub fn complex_lift_scaled(g: &PlanarNetwork, u: &[f64], phi: &[Complex64], tau: f64) -> Result<Vec<ScaledComplex>> {
    check_lift(g, u, phi, tau)?;
    Ok(u.iter().zip(phi).map(|(&x, &p)| ScaledComplex::from_log(tau * x, p)).collect())
}

/// `l^B_i` of the lifted matrix, `i = 1..n`, computed as half the log of the
/// largest eigenvalue of `C_i C_i*`, where `C_i` is the `i`-th compound
/// matrix assembled from network minors. Accurate at large `τ`, where the
/// small eigenvalues of `AA*` are lost to rounding.
pub fn compound_log_singular(g: &PlanarNetwork, u: &[f64], phi: &[Complex64], tau: f64) -> Result<Vec<f64>> {
    let w = complex_lift_scaled(g, u, phi, tau)?;
    let table = minor_table(g, &w)?;
    let n = g.rank();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let subsets = crate::matrix::subsets(n, k);
        let entries: Vec<(usize, usize, ScaledComplex)> = subsets
            .iter()
            .enumerate()
            .flat_map(|(a, i_set)| {
                let table = &table;
                subsets.iter().enumerate().filter_map(move |(b, j_set)| {
                    table.get(&(i_set.clone(), j_set.clone())).filter(|v| !v.is_zero()).map(|v| (a, b, *v))
                })
            })
            .collect();
        if entries.is_empty() {
            return Err(HornError::Singular);
        }
        let shift = entries.iter().map(|(_, _, v)| v.log_abs()).fold(f64::NEG_INFINITY, f64::max);
        let mut c = CMatrix::zeros(subsets.len());
        for (a, b, v) in entries {
            c[(a, b)] = v.to_complex_shifted(shift);
        }
        let (spec, _) = eigh(&c.mul(&c.adjoint()))?;
        if spec[0] <= 0.0 {
            return Err(HornError::Singular);
        }
        out.push(0.5 * spec[0].ln() + shift);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::build_gamma0;
    use crate::rational::{from_i64, Rational};

    type T = Tropical<Rational>;

    fn tw(xs: &[i64]) -> Vec<T> {
        xs.iter().map(|&x| Tropical::Fin(from_i64(x))).collect()
    }

    #[test]
    fn gamma0_two_tropical_gz() {
        let g = build_gamma0(2).unwrap();
        let diag = g.edges_with_tag(super::super::EdgeTag::Diagonal)[0];
        let sinks = g.edges_with_tag(super::super::EdgeTag::SinkHorizontal);
        let mut w = tw(&[0; 5]);
        let on_line = |y: i64| *sinks.iter().find(|&&e| g.nodes()[g.edges()[e].tail].y == from_i64(y)).unwrap();
        let (h1, h2) = (on_line(1), on_line(2));
        w[h1] = Tropical::Fin(from_i64(1));
        w[diag] = Tropical::Fin(from_i64(2));
        w[h2] = Tropical::Fin(from_i64(1));
        let t = tropical_gz(&g, &w).unwrap().to_finite().unwrap();
        assert_eq!(t.short_rows(), vec![vec![from_i64(1)], vec![from_i64(3), from_i64(2)]]);
        assert_eq!(tropical_gz_enumerated(&g, &w).unwrap().to_finite().unwrap(), t);
    }

    #[test]
    fn all_one_tropical_matrix_is_triangular() {
        let g = build_gamma0(3).unwrap();
        let w = tw(&vec![0; g.num_edges()]);
        let m = correspondence_matrix(&g, &w).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i <= j { Tropical::Fin(from_i64(0)) } else { Tropical::NegInf };
                assert_eq!(m[(i, j)], expect);
            }
        }
    }

    #[test]
    fn empty_minor_is_one() {
        let g = build_gamma0(2).unwrap();
        let w = tw(&[3, 1, 4, 1, 5]);
        assert_eq!(minor(&g, &w, &[], &[]).unwrap(), T::one());
        assert_eq!(minor_enumerated(&g, &w, &[], &[]).unwrap(), T::one());
    }
}
