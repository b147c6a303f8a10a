//! Hive and Gelfand-Zeitlin inequalities, the boundary map, and
//! Knutson-Tao cone membership.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HornError, Result};
use crate::lp::FeasibilityProblem;
use crate::rational::{self, Rational};
use crate::semiring::TropicalScalar;
use crate::tableau::{Role, Tableau};

/// A rhombus inequality `plus[0] + plus[1] ≥ minus[0] + minus[1]` on nodes
/// `(k, i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rhombus {
    pub family: u8,
    pub plus: [(usize, usize); 2],
    pub minus: [(usize, usize); 2],
}

/// All three rhombus families for `0 < i ≤ k < n`.
pub fn hive_rhombi(n: usize) -> Vec<Rhombus> {
    let mut out = gz_rhombi(n);
    for k in 1..n {
        for i in 1..=k {
            out.push(Rhombus { family: 3, plus: [(k, i), (k, i - 1)], minus: [(k + 1, i), (k - 1, i - 1)] });
        }
    }
    out
}

/// The first two families, i.e. the interlacing inequalities.
pub fn gz_rhombi(n: usize) -> Vec<Rhombus> {
    let mut out = Vec::new();
    for k in 1..n {
        for i in 1..=k {
            out.push(Rhombus { family: 1, plus: [(k + 1, i), (k, i - 1)], minus: [(k + 1, i - 1), (k, i)] });
            out.push(Rhombus { family: 2, plus: [(k + 1, i), (k, i)], minus: [(k + 1, i + 1), (k, i - 1)] });
        }
    }
    out
}

impl Rhombus {
    pub fn slack<T: TropicalScalar>(&self, t: &Tableau<T>) -> T {
        let g = |(k, i): (usize, usize)| t.get(k, i).clone();
        g(self.plus[0]) + g(self.plus[1]) - g(self.minus[0]) - g(self.minus[1])
    }
}

fn min_slack<T: TropicalScalar>(t: &Tableau<T>, rhombi: &[Rhombus]) -> Option<T> {
    rhombi.iter().map(|r| r.slack(t)).fold(None, |acc: Option<T>, s| match acc {
        Some(a) if a <= s => Some(a),
        _ => Some(s),
    })
}

/// Smallest slack over all rhombi; `None` for `n ≤ 1` (no inequalities).
pub fn hive_margin<T: TropicalScalar>(t: &Tableau<T>) -> Option<T> {
    min_slack(t, &hive_rhombi(t.n()))
}

/// Smallest interlacing slack; `None` for `n ≤ 1`.
pub fn gz_margin<T: TropicalScalar>(t: &Tableau<T>) -> Option<T> {
    min_slack(t, &gz_rhombi(t.n()))
}

pub fn hive_check<T: TropicalScalar>(t: &Tableau<T>) -> bool {
    hive_margin(t).is_none_or(|m| m >= T::zero())
}

/// Hive check with every inequality relaxed by `slack`.
pub fn hive_check_slack<T: TropicalScalar>(t: &Tableau<T>, slack: &T) -> bool {
    hive_margin(t).is_none_or(|m| m >= -slack.clone())
}

fn left_edge_zero<T: TropicalScalar>(t: &Tableau<T>) -> bool {
    t.rows().iter().all(|r| r[0] == T::zero())
}

/// `δ = 0`: the closed cone. `δ > 0`: every interlacing inequality holds
/// with margin strictly greater than `δ`.
pub fn gz_check<T: TropicalScalar>(t: &Tableau<T>, delta: &T) -> bool {
    if !left_edge_zero(t) {
        return false;
    }
    match gz_margin(t) {
        None => *delta == T::zero(),
        Some(m) if *delta == T::zero() => m >= T::zero(),
        Some(m) => m > *delta,
    }
}

/// Closed-cone check with every interlacing inequality relaxed by `slack`.
pub fn gz_check_slack(t: &Tableau<f64>, slack: f64) -> bool {
    left_edge_zero(t) && gz_margin(t).is_none_or(|m| m >= -slack)
}

/// Cumulative sums `(a, b, c)` with `a_n + b_n = c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornTriple {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub a: Vec<Rational>,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub b: Vec<Rational>,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub c: Vec<Rational>,
}

impl HornTriple {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(HornError::ZeroRank);
        }
        for v in [&b, &c] {
            if v.len() != n {
                return Err(HornError::SizeMismatch { expected: n, found: v.len() });
            }
        }
        Ok(HornTriple { a, b, c })
    }

    /// Exact rationalization of double-precision input.
    pub fn from_f64(a: &[f64], b: &[f64], c: &[f64]) -> Result<Self> {
        let conv = |v: &[f64]| v.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>();
        Self::new(conv(a)?, conv(b)?, conv(c)?)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `a_n + b_n - c_n`.
    pub fn trace_defect(&self) -> Rational {
        let n = self.n();
        &self.a[n - 1] + &self.b[n - 1] - &self.c[n - 1]
    }

    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let conv = |v: &[Rational]| v.iter().map(rational::to_f64).collect();
        (conv(&self.a), conv(&self.b), conv(&self.c))
    }

    /// CSV header `a1..an,b1..bn,c1..cn`.
    pub fn csv_header(n: usize) -> Vec<String> {
        ["a", "b", "c"].iter().flat_map(|p| (1..=n).map(move |i| format!("{p}{i}"))).collect()
    }

    pub fn csv_record(&self) -> Vec<String> {
        self.a.iter().chain(&self.b).chain(&self.c).map(format_number).collect()
    }

    pub fn from_csv_record(fields: &[&str]) -> Result<Self> {
        if fields.is_empty() || fields.len() % 3 != 0 {
            return Err(HornError::Parse(format!("expected 3n fields, found {}", fields.len())));
        }
        let n = fields.len() / 3;
        let vals = fields.iter().map(|f| rational::parse(f)).collect::<Result<Vec<_>>>()?;
        Self::new(vals[..n].to_vec(), vals[n..2 * n].to_vec(), vals[2 * n..].to_vec())
    }
}

/// Small-denominator rationals print exactly; others print as the nearest
/// double.
pub fn format_number(x: &Rational) -> String {
    if x.denom() <= &num_bigint::BigInt::from(1_000_000) {
        rational::format(x)
    } else {
        format!("{}", rational::to_f64(x))
    }
}

/// The boundary map `a_i = l^n_i`, `b_i = l^{n-i}_{n-i} - l^n_n`, `c_i = l^{n-i}_0`.
pub fn boundary(t: &Tableau<Rational>) -> HornTriple {
    let n = t.n();
    let a = (1..=n).map(|i| t.get(n, i).clone()).collect();
    let b = (1..=n).map(|i| t.get(n - i, n - i) - t.get(n, n)).collect();
    let c = (1..=n).map(|i| t.get(n - i, 0).clone()).collect();
    HornTriple { a, b, c }
}

pub fn scale_triple(triple: &HornTriple, tau: &Rational) -> Result<HornTriple> {
    if !tau.is_positive() {
        return Err(HornError::NonPositiveScale);
    }
    let s = |v: &[Rational]| v.iter().map(|x| x * tau).collect();
    Ok(HornTriple { a: s(&triple.a), b: s(&triple.b), c: s(&triple.c) })
}

/// Where a tableau node lives in the pinned LP.
#[derive(Clone, Debug)]
enum Slot {
    Pinned(Rational),
    Var(usize),
}

fn pinned_layout(triple: &HornTriple) -> (Vec<Vec<Slot>>, usize) {
    let n = triple.n();
    let mut nv = 0;
    let mut rows: Vec<Vec<Slot>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut row = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let slot = if k == n {
                if i == 0 { Slot::Pinned(Rational::zero()) } else { Slot::Pinned(triple.a[i - 1].clone()) }
            } else if i == 0 {
                Slot::Pinned(triple.c[n - k - 1].clone())
            } else if i == k {
                Slot::Pinned(&triple.b[n - k - 1] + &triple.a[n - 1])
            } else {
                nv += 1;
                Slot::Var(nv - 1)
            };
            row.push(slot);
        }
        rows.push(row);
    }
    (rows, nv)
}

/// A hive with boundary `triple` whose inequalities hold up to `eps`, or
/// `None`. The top-left corner `l^n_0` is pinned to zero. Negative `eps`
/// tightens every inequality.
pub fn kt_witness(triple: &HornTriple, eps: &Rational) -> Option<Tableau<Rational>> {
    if triple.trace_defect().abs() > eps.abs() {
        return None;
    }
    let n = triple.n();
    let (layout, nv) = pinned_layout(triple);
    let mut lp = FeasibilityProblem::new(nv);
    for r in hive_rhombi(n) {
        let mut coeffs = vec![Rational::zero(); nv];
        let mut constant = Rational::zero();
        for (node, sign) in r.plus.iter().map(|p| (p, 1)).chain(r.minus.iter().map(|m| (m, -1))) {
            match &layout[node.0][node.1] {
                Slot::Pinned(v) => {
                    if sign > 0 {
                        constant += v;
                    } else {
                        constant -= v;
                    }
                }
                Slot::Var(j) => {
                    if sign > 0 {
                        coeffs[*j] += Rational::from_integer(1.into());
                    } else {
                        coeffs[*j] -= Rational::from_integer(1.into());
                    }
                }
            }
        }
        // coeffs · x + constant ≥ -eps
        lp.push(coeffs, -eps - constant);
    }
    let x = lp.solve()?;
    let rows = layout
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| match s {
                    Slot::Pinned(v) => v.clone(),
                    Slot::Var(j) => x[*j].clone(),
                })
                .collect()
        })
        .collect();
    Some(Tableau::from_rows(Role::Hive, rows).expect("layout has tableau shape"))
}

/// Membership of `triple` in the Knutson-Tao cone, with slack `eps`.
pub fn kt_member(triple: &HornTriple, eps: &Rational) -> bool {
    kt_witness(triple, eps).is_some()
}
