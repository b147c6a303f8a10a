//! Triangular arrays `l^k_i`, `0 ≤ i ≤ k ≤ n`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{HornError, Result};
use crate::rational::{self, Rational};
use crate::semiring::{Tropical, TropicalScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Hive,
    Gz,
    TropicalGz,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tableau<T> {
    n: usize,
    rows: Vec<Vec<T>>,
    role: Role,
}

impl<T: Clone> Tableau<T> {
    /// Full rows `0..=n`, row `k` of length `k + 1`.
    pub fn from_rows(role: Role, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(HornError::InvalidArgument("tableau needs at least row 0".into()));
        }
        let n = rows.len() - 1;
        for (k, row) in rows.iter().enumerate() {
            if row.len() != k + 1 {
                return Err(HornError::SizeMismatch { expected: k + 1, found: row.len() });
            }
        }
        Ok(Tableau { n, rows, role })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[T] {
        &self.rows[k]
    }

    pub fn get(&self, k: usize, i: usize) -> &T {
        &self.rows[k][i]
    }

    pub fn set(&mut self, k: usize, i: usize, v: T) {
        self.rows[k][i] = v;
    }

    pub fn top(&self) -> &[T] {
        &self.rows[self.n]
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Tableau<U> {
        Tableau { n: self.n, rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(), role: self.role }
    }

    /// Rows `1..=n` with the leading zero dropped, e.g. `[[1], [3, 2]]`.
    pub fn short_rows(&self) -> Vec<Vec<T>> {
        self.rows[1..].iter().map(|r| r[1..].to_vec()).collect()
    }

    /// The slots `(k, i)` with `1 ≤ i ≤ k ≤ n`, row by row.
    pub fn interior_slots(n: usize) -> Vec<(usize, usize)> {
        (1..=n).flat_map(|k| (1..=k).map(move |i| (k, i))).collect()
    }
}

impl<T: Clone + Zero> Tableau<T> {
    pub fn zeros(n: usize, role: Role) -> Self {
        Tableau { n, rows: (0..=n).map(|k| vec![T::zero(); k + 1]).collect(), role }
    }

    /// Build a GZ-type tableau from rows `1..=n` without their leading zero.
    pub fn gz_from_short(role: Role, short: Vec<Vec<T>>) -> Result<Self> {
        let mut rows = vec![vec![T::zero()]];
        for (k, row) in short.into_iter().enumerate() {
            if row.len() != k + 1 {
                return Err(HornError::SizeMismatch { expected: k + 1, found: row.len() });
            }
            let mut full = vec![T::zero()];
            full.extend(row);
            rows.push(full);
        }
        Ok(Tableau { n: rows.len() - 1, rows, role })
    }

    /// Whether every `l^k_0` vanishes.
    pub fn has_zero_left_edge(&self) -> bool {
        self.rows.iter().all(|r| r[0].is_zero())
    }
}

impl<T: TropicalScalar> Tableau<Tropical<T>> {
    /// Drop the tropical wrapper; fails if any entry is −∞.
    pub fn to_finite(&self) -> Result<Tableau<T>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.value().cloned()).collect::<Option<Vec<T>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| HornError::InvalidArgument("tableau has -inf entries".into()))?;
        Ok(Tableau { n: self.n, rows, role: self.role })
    }
}

impl Tableau<Rational> {
    pub fn to_f64(&self) -> Tableau<f64> {
        self.map(rational::to_f64)
    }
}

impl Tableau<f64> {
    pub fn to_rational(&self) -> Result<Tableau<Rational>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Tableau { n: self.n, rows, role: self.role })
    }
}

/// Scalars with a JSON representation inside tableaux and reports.
pub trait JsonScalar: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(rational::format(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        rational::serde_rational::from_json(v)
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| HornError::Parse(format!("bad number {n}"))),
            Value::String(s) => Ok(rational::to_f64(&rational::parse(s)?)),
            other => Err(HornError::Parse(format!("expected a number, found {other}"))),
        }
    }
}

impl JsonScalar for Tropical<Rational> {
    fn to_json(&self) -> Value {
        match self {
            Tropical::NegInf => Value::String("-inf".into()),
            Tropical::Fin(x) => x.to_json(),
        }
    }
    fn from_json(v: &Value) -> Result<Self> {
        if v.as_str().is_some_and(|s| s.trim() == "-inf") {
            return Ok(Tropical::NegInf);
        }
        Ok(Tropical::Fin(Rational::from_json(v)?))
    }
}

impl<T: JsonScalar + Clone> Tableau<T> {
    pub fn to_json_value(&self) -> Value {
        json!({
            "n": self.n,
            "role": self.role,
            "rows": self.rows.iter().map(|r| r.iter().map(JsonScalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("tableau serializes")
    }

    /// Reads `{"n": n, "rows": [...], "role": ...}`; `role` defaults to the
    /// supplied value when absent.
    pub fn from_json(s: &str, default_role: Role) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        let role = match v.get("role") {
            Some(r) => serde_json::from_value(r.clone())?,
            None => default_role,
        };
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| HornError::Parse("missing \"rows\"".into()))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| HornError::Parse("row is not an array".into()))?
                    .iter()
                    .map(T::from_json)
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let t = Tableau::from_rows(role, rows)?;
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != t.n {
                return Err(HornError::SizeMismatch { expected: n as usize, found: t.n });
            }
        }
        Ok(t)
    }
}

/// Parse `"1;3,2"`: rows `1..=n` of a GZ-type tableau, leading zeros implied.
pub fn parse_gz_rows(text: &str, role: Role) -> Result<Tableau<Rational>> {
    let rows: Vec<Vec<Rational>> = text.split(';').map(rational::parse_list).collect::<Result<_>>()?;
    Tableau::gz_from_short(role, rows)
}

/// Parse full rows `"l00;l10,l11;..."`.
pub fn parse_full_rows(text: &str, role: Role) -> Result<Tableau<Rational>> {
    let rows: Vec<Vec<Rational>> = text.split(';').map(rational::parse_list).collect::<Result<_>>()?;
    Tableau::from_rows(role, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    #[test]
    fn short_and_full_forms() {
        let t = parse_gz_rows("1;3,2", Role::TropicalGz).unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.get(2, 1), &from_i64(3));
        assert_eq!(t.get(1, 0), &from_i64(0));
        let full = parse_full_rows("0;0,1;0,3,2", Role::Gz).unwrap();
        assert_eq!(full.short_rows(), t.short_rows());
        assert!(parse_gz_rows("1,2;3", Role::Gz).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = parse_full_rows("2;1,4;0,2,3", Role::Hive).unwrap();
        let back = Tableau::<Rational>::from_json(&t.to_json(), Role::Gz).unwrap();
        assert_eq!(back, t);
        let plain = r#"{"n": 1, "rows": [[0], [0, 1.5]]}"#;
        let p = Tableau::<Rational>::from_json(plain, Role::Gz).unwrap();
        assert_eq!(p.role(), Role::Gz);
        assert_eq!(p.get(1, 1), &crate::rational::ratio(3, 2));
    }
}
