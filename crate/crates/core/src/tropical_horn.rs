//! The tropical Horn problem on the staircase network `Γ₀`: the linear
//! chamber `Δ₀` on which the tropical Gelfand-Zeitlin map is invertible, the
//! transport map `κ`, tropical Horn triples, and genericity margins.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HornError, Result};
use crate::hive::{gz_check, gz_margin, HornTriple};
use crate::matrix::Matrix;
use crate::network::{build_gamma0, concatenate, enumerate_all_kpaths, m_all, EdgeTag, Filtration, PlanarNetwork};
use crate::rational::{self, ratio, Rational};
use crate::semiring::Tropical;
use crate::tableau::{Role, Tableau};

/// A weighting of `Γ₀` supported on the diagonals and the sink-adjacent
/// horizontal edges. Diagonals follow `Γ₀`'s edge order; sink horizontals run
/// from line `y = 1` up to line `y = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WbarWeighting {
    pub n: usize,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub diagonals: Vec<Rational>,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub sink_horizontals: Vec<Rational>,
}

impl WbarWeighting {
    pub fn new(n: usize, diagonals: Vec<Rational>, sink_horizontals: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(HornError::ZeroRank);
        }
        if diagonals.len() != n * (n - 1) / 2 {
            return Err(HornError::SizeMismatch { expected: n * (n - 1) / 2, found: diagonals.len() });
        }
        if sink_horizontals.len() != n {
            return Err(HornError::SizeMismatch { expected: n, found: sink_horizontals.len() });
        }
        Ok(WbarWeighting { n, diagonals, sink_horizontals })
    }

    pub fn zeros(n: usize) -> Self {
        WbarWeighting { n, diagonals: vec![Rational::zero(); n * (n - 1) / 2], sink_horizontals: vec![Rational::zero(); n] }
    }

    /// From the stored order: diagonals, then sink horizontals.
    pub fn from_stored(n: usize, values: Vec<Rational>) -> Result<Self> {
        let nd = n * (n - 1) / 2;
        if values.len() != nd + n {
            return Err(HornError::SizeMismatch { expected: nd + n, found: values.len() });
        }
        let mut diagonals = values;
        let sinks = diagonals.split_off(nd);
        Self::new(n, diagonals, sinks)
    }

    pub fn stored(&self) -> Vec<Rational> {
        self.diagonals.iter().chain(&self.sink_horizontals).cloned().collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let s = |v: &[Rational]| v.iter().map(|x| x * c).collect();
        WbarWeighting { n: self.n, diagonals: s(&self.diagonals), sink_horizontals: s(&self.sink_horizontals) }
    }

    /// Full weighting of `Γ₀(n)`, zero on the remaining horizontal edges.
    pub fn embed(&self, g0: &PlanarNetwork) -> Result<Vec<Rational>> {
        let stored = stored_edges(g0);
        if g0.rank() != self.n {
            return Err(HornError::RankMismatch { left: g0.rank(), right: self.n });
        }
        let mut w = vec![Rational::zero(); g0.num_edges()];
        for (e, v) in stored.iter().zip(self.stored()) {
            w[*e] = v;
        }
        Ok(w)
    }

    pub fn embed_tropical(&self, g0: &PlanarNetwork) -> Result<Vec<Tropical>> {
        Ok(self.embed(g0)?.into_iter().map(Tropical::Fin).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: WbarWeighting = serde_json::from_str(s)?;
        Self::new(w.n, w.diagonals, w.sink_horizontals)
    }
}

/// Edge ids of `Γ₀` carrying stored weights, in stored order.
pub fn stored_edges(g0: &PlanarNetwork) -> Vec<usize> {
    let mut out = g0.edges_with_tag(EdgeTag::Diagonal);
    let mut sinks = g0.edges_with_tag(EdgeTag::SinkHorizontal);
    sinks.sort_by(|&a, &b| g0.nodes()[g0.edges()[a].tail].y.cmp(&g0.nodes()[g0.edges()[b].tail].y));
    out.extend(sinks);
    out
}

/// Tableau slots `(k, i)`, `1 ≤ i ≤ k ≤ n`, row by row.
pub fn gz_slots(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|k| (1..=k).map(move |i| (k, i))).collect()
}

pub fn tableau_vector(xi: &Tableau<Rational>) -> Vec<Rational> {
    gz_slots(xi.n()).into_iter().map(|(k, i)| xi.get(k, i).clone()).collect()
}

#[derive(Clone, Debug)]
struct Candidate {
    incidence: Vec<bool>,
    edges: Vec<usize>,
}

impl Candidate {
    fn value(&self, w: &[Rational]) -> Rational {
        self.incidence.iter().zip(w).filter(|(b, _)| **b).fold(Rational::zero(), |acc, (_, x)| acc + x)
    }
}

/// Every multipath of every slot, projected to the stored coordinates.
fn slot_candidates(g0: &PlanarNetwork, filtration: &Filtration) -> Vec<Vec<Candidate>> {
    let stored = stored_edges(g0);
    let mut position = vec![None; g0.num_edges()];
    for (j, &e) in stored.iter().enumerate() {
        position[e] = Some(j);
    }
    gz_slots(g0.rank())
        .into_iter()
        .map(|(k, i)| {
            let (gk, parent) = filtration.level(k);
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for mp in enumerate_all_kpaths(gk, i) {
                let edges: Vec<usize> = mp.edges().iter().map(|&e| parent[e]).collect();
                let mut incidence = vec![false; stored.len()];
                for &e in &edges {
                    if let Some(j) = position[e] {
                        incidence[j] = true;
                    }
                }
                if seen.insert(incidence.clone()) {
                    out.push(Candidate { incidence, edges });
                }
            }
            out
        })
        .collect()
}

fn argmax(cands: &[Candidate], w: &[Rational]) -> (usize, Rational) {
    let mut best = 0;
    let mut best_v = cands[0].value(w);
    for (j, c) in cands.iter().enumerate().skip(1) {
        let v = c.value(w);
        if v > best_v {
            best = j;
            best_v = v;
        }
    }
    (best, best_v)
}

/// The chamber `Δ₀`: one multipath per tableau slot, the 0/1 matrix of the
/// induced linear map, and its inverse.
#[derive(Clone, Debug)]
pub struct ChamberMap {
    n: usize,
    gamma0: PlanarNetwork,
    double: PlanarNetwork,
    filtration: Filtration,
    selections: Vec<Vec<usize>>,
    matrix: Matrix<Rational>,
    inverse: Matrix<Rational>,
    inverse_f64: Vec<Vec<f64>>,
}

impl ChamberMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma0(&self) -> &PlanarNetwork {
        &self.gamma0
    }

    /// `Γ₀ ∘ Γ₀`.
    pub fn double(&self) -> &PlanarNetwork {
        &self.double
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    /// The selected multipath (as `Γ₀` edge ids) of each slot in [`gz_slots`] order.
    pub fn selections(&self) -> &[Vec<usize>] {
        &self.selections
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix<Rational> {
        &self.inverse
    }

    /// Forward map on the chamber: stored weights to the tableau vector.
    pub fn forward(&self, w: &WbarWeighting) -> Vec<Rational> {
        self.matrix.apply(&w.stored())
    }

    /// Tropical GZ tableau of `embed(w)`, computed on the network.
    pub fn tropical_gz(&self, w: &WbarWeighting) -> Result<Tableau<Rational>> {
        let t = self.filtration.tropical_gz(&w.embed_tropical(&self.gamma0)?)?;
        Ok(t.to_finite()?.with_role(Role::Gz))
    }

    fn apply_inverse_f64(&self, xi: &Tableau<f64>) -> Vec<f64> {
        let v: Vec<f64> = gz_slots(self.n).into_iter().map(|(k, i)| *xi.get(k, i)).collect();
        self.inverse_f64.iter().map(|row| row.iter().zip(&v).map(|(a, x)| a * x).sum()).collect()
    }

    /// Full `Γ₀` weighting `L_T^{-1}(xi)` in double precision.
    fn embed_f64(&self, stored: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; self.gamma0.num_edges()];
        for (e, v) in stored_edges(&self.gamma0).iter().zip(stored) {
            w[*e] = *v;
        }
        w
    }
}

const CHAMBER_VERIFICATIONS: usize = 100;
const MAX_RESTARTS: usize = 50;
const MAX_POLICY_STEPS: usize = 200;

/// Locate `Δ₀` by probing generic interior points of the GZ cone. Each probe
/// solves the current selection's linear system and, if the argmax
/// multipaths under the solution differ, switches to them. A selection is
/// accepted once 101 consecutive probes verify by path enumeration.
pub fn find_delta0_chamber(n: usize) -> Result<ChamberMap> {
    if n == 0 {
        return Err(HornError::ZeroRank);
    }
    if n > 5 {
        return Err(HornError::ChamberNotFound { n, reason: "enumeration-backed search supports n ≤ 5".into() });
    }
    let gamma0 = build_gamma0(n)?;
    let filtration = Filtration::new(&gamma0)?;
    let cands = slot_candidates(&gamma0, &filtration);
    let dim = n * (n + 1) / 2;
    let nd = dim - n;
    let mut rng = ChaCha20Rng::seed_from_u64(0x6a09e667 ^ n as u64);

    for restart in 0..MAX_RESTARTS {
        // heavy diagonals favour maximal descent; the noise breaks ties
        let heavy = Rational::from_integer((1000 * (restart + 1)).into());
        let w0: Vec<Rational> = (0..dim)
            .map(|j| {
                let noise = ratio(rng.random_range(-500..=500), 1000);
                if j < nd { &heavy + noise } else { noise }
            })
            .collect();
        let mut sel: Vec<usize> = cands.iter().map(|c| argmax(c, &w0).0).collect();
        let mut verified = 0;
        let mut xi = tableau_vector(&random_interior_gz(n, &mut rng));
        for _ in 0..MAX_POLICY_STEPS {
            let matrix = selection_matrix(&cands, &sel);
            let Some(inverse) = matrix.inverse() else { break };
            let w = inverse.apply(&xi);
            let best: Vec<(usize, Rational)> = cands.iter().map(|c| argmax(c, &w)).collect();
            if best.iter().zip(&xi).all(|((_, v), x)| v == x) {
                verified += 1;
                if verified > CHAMBER_VERIFICATIONS {
                    return assemble(n, gamma0, filtration, &cands, &sel, matrix, inverse);
                }
                xi = tableau_vector(&random_interior_gz(n, &mut rng));
            } else {
                verified = 0;
                sel = best.into_iter().map(|(j, _)| j).collect();
            }
        }
    }
    Err(HornError::ChamberNotFound { n, reason: format!("no selection verified after {MAX_RESTARTS} restarts") })
}

fn selection_matrix(cands: &[Vec<Candidate>], sel: &[usize]) -> Matrix<Rational> {
    let rows = cands
        .iter()
        .zip(sel)
        .map(|(c, &j)| c[j].incidence.iter().map(|&b| if b { rational::from_i64(1) } else { Rational::zero() }).collect())
        .collect();
    Matrix::from_rows(rows)
}

fn assemble(
    n: usize,
    gamma0: PlanarNetwork,
    filtration: Filtration,
    cands: &[Vec<Candidate>],
    sel: &[usize],
    matrix: Matrix<Rational>,
    inverse: Matrix<Rational>,
) -> Result<ChamberMap> {
    let double = concatenate(&gamma0, &gamma0)?;
    let selections = cands.iter().zip(sel).map(|(c, &j)| c[j].edges.clone()).collect();
    let inverse_f64 = inverse.to_rows().iter().map(|r| r.iter().map(rational::to_f64).collect()).collect();
    Ok(ChamberMap { n, gamma0, double, filtration, selections, matrix, inverse, inverse_f64 })
}

/// A random point of the open GZ cone with rational entries: strictly
/// decreasing top eigenvalues and strictly interlacing lower rows.
pub fn random_interior_gz<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tableau<Rational> {
    let mut lam: Vec<Rational> = loop {
        let mut v: Vec<i64> = (0..n).map(|_| rng.random_range(-10_000..=10_000)).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        if v.windows(2).all(|w| w[0] > w[1]) {
            break v.into_iter().map(|x| ratio(x, 1000)).collect();
        }
    };
    let mut rows = vec![Vec::new(); n + 1];
    for k in (0..=n).rev() {
        let mut row = vec![Rational::zero()];
        let mut acc = Rational::zero();
        for x in &lam {
            acc += x;
            row.push(acc.clone());
        }
        rows[k] = row;
        if k > 0 {
            lam = (0..k - 1)
                .map(|i| {
                    let t = ratio(rng.random_range(1..1000), 1000);
                    &lam[i + 1] + (&lam[i] - &lam[i + 1]) * t
                })
                .collect();
        }
    }
    Tableau::from_rows(Role::Gz, rows).expect("tableau shape")
}

/// `L_T^{-1}(xi)`, re-verified by evaluating the tropical GZ map of the
/// result on `Γ₀`.
pub fn lt_inverse(xi: &Tableau<Rational>, chamber: &ChamberMap) -> Result<WbarWeighting> {
    if xi.n() != chamber.n {
        return Err(HornError::SizeMismatch { expected: chamber.n, found: xi.n() });
    }
    if !gz_check(xi, &Rational::zero()) {
        return Err(HornError::NotInGzCone);
    }
    let w = WbarWeighting::from_stored(chamber.n, chamber.inverse.apply(&tableau_vector(xi)))?;
    let back = chamber.tropical_gz(&w)?;
    if back.rows() != xi.rows() {
        return Err(HornError::ChamberMismatch(format!("L_T(w) = {:?} differs from the input", back.short_rows())));
    }
    Ok(w)
}

/// `m^T(Γ₀ ∘ Γ₀, L_T^{-1}(u) ∘ L_T^{-1}(v))`.
pub fn kappa(u: &Tableau<Rational>, v: &Tableau<Rational>, chamber: &ChamberMap) -> Result<Vec<Rational>> {
    let w1 = lt_inverse(u, chamber)?;
    let w2 = lt_inverse(v, chamber)?;
    let mut w = w1.embed_tropical(&chamber.gamma0)?;
    w.extend(w2.embed_tropical(&chamber.gamma0)?);
    finite(m_all(&chamber.double, &w)?)
}

/// Double-precision `κ` through the chamber's linear map, for sampling.
pub fn kappa_f64(u: &Tableau<f64>, v: &Tableau<f64>, chamber: &ChamberMap) -> Result<Vec<f64>> {
    for t in [u, v] {
        if t.n() != chamber.n {
            return Err(HornError::SizeMismatch { expected: chamber.n, found: t.n() });
        }
    }
    let mut w = chamber.embed_f64(&chamber.apply_inverse_f64(u));
    w.extend(chamber.embed_f64(&chamber.apply_inverse_f64(v)));
    let w: Vec<Tropical<f64>> = w.into_iter().map(Tropical::Fin).collect();
    Ok(m_all(&chamber.double, &w)?.into_iter().map(|x| x.into_value().expect("Γ₀ ∘ Γ₀ has every multipath size")).collect())
}

fn finite(m: Vec<Tropical>) -> Result<Vec<Rational>> {
    m.into_iter()
        .map(|x| x.into_value().ok_or_else(|| HornError::MalformedNetwork("empty multipath set".into())))
        .collect()
}

/// `(m^T(Γ₀, w₁), m^T(Γ₀, w₂), m^T(Γ₀ ∘ Γ₀, w₁ ∘ w₂))`.
pub fn horn_triple_tropical(w1: &WbarWeighting, w2: &WbarWeighting) -> Result<HornTriple> {
    if w1.n != w2.n {
        return Err(HornError::RankMismatch { left: w1.n, right: w2.n });
    }
    let g0 = build_gamma0(w1.n)?;
    let e1 = w1.embed_tropical(&g0)?;
    let e2 = w2.embed_tropical(&g0)?;
    let a = finite(m_all(&g0, &e1)?)?;
    let b = finite(m_all(&g0, &e2)?)?;
    let mut w = e1;
    w.extend(e2);
    let c = finite(m_all(&concatenate(&g0, &g0)?, &w)?)?;
    HornTriple::new(a, b, c)
}

/// Two multipaths whose weights are within the threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolatingPair {
    pub network: String,
    pub level: usize,
    pub size: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    #[serde(with = "crate::rational::serde_rational")]
    pub gap: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub weightings: Vec<WbarWeighting>,
    #[serde(with = "crate::rational::serde_rational")]
    pub delta: Rational,
    #[serde(with = "crate::rational::serde_rational_opt")]
    pub min_path_gap: Option<Rational>,
    #[serde(with = "crate::rational::serde_rational_opt")]
    pub min_interlacing_margin: Option<Rational>,
    pub closest_pair: Option<ViolatingPair>,
    pub generic: bool,
}

impl GenericityReport {
    /// The closest pair when it violates the threshold.
    pub fn violating_pair(&self) -> Option<&ViolatingPair> {
        self.closest_pair.as_ref().filter(|p| p.gap <= self.delta)
    }
}

struct NetworkScan {
    gap: Option<ViolatingPair>,
    margin: Option<Rational>,
}

fn scan(label: &str, g: &PlanarNetwork, w: &[Rational]) -> Result<NetworkScan> {
    let filtration = Filtration::new(g)?;
    let mut best: Option<ViolatingPair> = None;
    for k in 1..=g.rank() {
        let (gk, parent) = filtration.level(k);
        for i in 1..=k {
            let mut vals: Vec<(Rational, Vec<usize>)> = enumerate_all_kpaths(gk, i)
                .iter()
                .map(|mp| {
                    let edges: Vec<usize> = mp.edges().iter().map(|&e| parent[e]).collect();
                    (edges.iter().fold(Rational::zero(), |acc, &e| acc + &w[e]), edges)
                })
                .collect();
            vals.sort();
            for pair in vals.windows(2) {
                let gap = &pair[1].0 - &pair[0].0;
                if best.as_ref().is_none_or(|b| gap < b.gap) {
                    best = Some(ViolatingPair {
                        network: label.into(),
                        level: k,
                        size: i,
                        first: pair[0].1.clone(),
                        second: pair[1].1.clone(),
                        gap,
                    });
                }
            }
        }
    }
    let tw: Vec<Tropical> = w.iter().cloned().map(Tropical::Fin).collect();
    let t = filtration.tropical_gz(&tw)?.to_finite()?;
    Ok(NetworkScan { gap: best, margin: gz_margin(&t) })
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x <= y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Separation of distinct multipath weights within each `P_k` of each
/// subnetwork, and the interlacing margin of the tropical GZ tableau. For a
/// pair, both weightings and their concatenation are scanned.
pub fn genericity_check(ws: &[WbarWeighting], delta: &Rational) -> Result<GenericityReport> {
    if ws.is_empty() || ws.len() > 2 {
        return Err(HornError::InvalidArgument("genericity takes one weighting or a pair".into()));
    }
    let n = ws[0].n;
    if let Some(w) = ws.iter().find(|w| w.n != n) {
        return Err(HornError::RankMismatch { left: n, right: w.n });
    }
    let g0 = build_gamma0(n)?;
    let mut scans = Vec::new();
    let labels = ["first", "second"];
    for (w, label) in ws.iter().zip(labels) {
        scans.push(scan(label, &g0, &w.embed(&g0)?)?);
    }
    if ws.len() == 2 {
        let mut w = ws[0].embed(&g0)?;
        w.extend(ws[1].embed(&g0)?);
        scans.push(scan("concatenation", &concatenate(&g0, &g0)?, &w)?);
    }
    let mut closest: Option<ViolatingPair> = None;
    let mut margin = None;
    for s in scans {
        if let Some(p) = s.gap {
            if closest.as_ref().is_none_or(|c| p.gap < c.gap) {
                closest = Some(p);
            }
        }
        margin = min_opt(margin, s.margin);
    }
    let min_path_gap = closest.as_ref().map(|p| p.gap.clone());
    let generic = min_path_gap.as_ref().is_none_or(|g| g > delta) && margin.as_ref().is_none_or(|m| m > delta);
    Ok(GenericityReport {
        weightings: ws.to_vec(),
        delta: delta.clone(),
        min_path_gap,
        min_interlacing_margin: margin,
        closest_pair: closest,
        generic,
    })
}

/// A generic weighting `L_T^{-1}(xi)` for a random interior `xi`, with
/// `δ = 9/10` of its smallest separation.
pub fn random_generic_weighting<R: Rng + ?Sized>(chamber: &ChamberMap, rng: &mut R) -> Result<(WbarWeighting, Rational)> {
    loop {
        let xi = random_interior_gz(chamber.n, rng);
        let w = lt_inverse(&xi, chamber)?;
        let report = genericity_check(std::slice::from_ref(&w), &Rational::zero())?;
        let Some(sep) = min_opt(report.min_path_gap, report.min_interlacing_margin) else {
            return Ok((w, rational::from_i64(1)));
        };
        if sep.is_positive() {
            return Ok((w, sep * ratio(9, 10)));
        }
    }
}
