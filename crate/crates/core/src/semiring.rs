//! Semirings used by the network engine.
//!
//! [`Tropical`] is max-plus with a dedicated bottom element; nothing here ever
//! touches IEEE infinities. [`ScaledComplex`] stores `z * exp(s)` so that path
//! sums with exponents in the hundreds stay representable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait Semiring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Self
    where
        Self: 'a,
    {
        items.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }

    fn product<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Self
    where
        Self: 'a,
    {
        items.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }
}

/// A commutative semiring with additive inverses.
pub trait Ring: Semiring {
    fn neg(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Scalars admissible inside [`Tropical`].
pub trait TropicalScalar: Clone + PartialOrd + fmt::Debug + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {}

impl TropicalScalar for BigRational {}
impl TropicalScalar for f64 {}
impl TropicalScalar for i64 {}

/// Element of ℝ ∪ {−∞} with `max` as addition and `+` as multiplication.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Tropical<T = BigRational> {
    NegInf,
    Fin(T),
}

impl<T: TropicalScalar> Tropical<T> {
    pub fn fin(x: T) -> Self {
        Tropical::Fin(x)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Tropical::Fin(_))
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Tropical::Fin(x) => Some(x),
            Tropical::NegInf => None,
        }
    }

    pub fn into_value(self) -> Option<T> {
        match self {
            Tropical::Fin(x) => Some(x),
            Tropical::NegInf => None,
        }
    }

    /// Ordinary difference of two finite values; `None` if either is −∞.
    pub fn diff(&self, other: &Self) -> Option<T> {
        match (self, other) {
            (Tropical::Fin(a), Tropical::Fin(b)) => Some(a.clone() - b.clone()),
            _ => None,
        }
    }
}

impl<T: TropicalScalar> PartialOrd for Tropical<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Tropical::NegInf, Tropical::NegInf) => Some(Ordering::Equal),
            (Tropical::NegInf, _) => Some(Ordering::Less),
            (_, Tropical::NegInf) => Some(Ordering::Greater),
            (Tropical::Fin(a), Tropical::Fin(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: TropicalScalar> fmt::Debug for Tropical<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tropical::NegInf => write!(f, "-inf"),
            Tropical::Fin(x) => write!(f, "{x:?}"),
        }
    }
}

impl<T: TropicalScalar> Semiring for Tropical<T> {
    fn zero() -> Self {
        Tropical::NegInf
    }

    fn one() -> Self {
        Tropical::Fin(T::zero())
    }

    fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Tropical::NegInf, x) | (x, Tropical::NegInf) => x.clone(),
            (Tropical::Fin(a), Tropical::Fin(b)) => {
                if b > a {
                    Tropical::Fin(b.clone())
                } else {
                    Tropical::Fin(a.clone())
                }
            }
        }
    }

    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Tropical::Fin(a), Tropical::Fin(b)) => Tropical::Fin(a.clone() + b.clone()),
            _ => Tropical::NegInf,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Tropical::NegInf)
    }
}

/// The semiring (ℝ≥0, +, ×).
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug)]
pub struct NonNegReal(f64);

impl NonNegReal {
    pub fn new(x: f64) -> Option<Self> {
        (x >= 0.0 && x.is_finite()).then_some(NonNegReal(x))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Semiring for NonNegReal {
    fn zero() -> Self {
        NonNegReal(0.0)
    }
    fn one() -> Self {
        NonNegReal(1.0)
    }
    fn add(&self, other: &Self) -> Self {
        NonNegReal(self.0 + other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        NonNegReal(self.0 * other.0)
    }
}

impl Semiring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Ring for BigRational {
    fn neg(&self) -> Self {
        -self
    }
}

impl Semiring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for Complex64 {
    fn neg(&self) -> Self {
        -self
    }
}

/// Complex number stored as `z * exp(s)`.
#[derive(Clone, Copy, Debug)]
pub struct ScaledComplex {
    pub z: Complex64,
    pub s: f64,
}

impl ScaledComplex {
    pub fn new(z: Complex64, s: f64) -> Self {
        ScaledComplex { z, s }.normalized()
    }

    /// `exp(log_modulus) * phase`.
    pub fn from_log(log_modulus: f64, phase: Complex64) -> Self {
        ScaledComplex { z: phase, s: log_modulus }.normalized()
    }

    fn normalized(self) -> Self {
        let m = self.z.norm();
        if m == 0.0 {
            return ScaledComplex { z: Complex64::new(0.0, 0.0), s: 0.0 };
        }
        if (1e-64..1e64).contains(&m) {
            return self;
        }
        ScaledComplex { z: self.z / m, s: self.s + m.ln() }
    }

    pub fn log_abs(&self) -> f64 {
        self.z.norm().ln() + self.s
    }

    /// The value rescaled by `exp(-shift)`, as an ordinary complex number.
    pub fn to_complex_shifted(&self, shift: f64) -> Complex64 {
        if self.z.norm() == 0.0 {
            return self.z;
        }
        self.z * (self.s - shift).exp()
    }
}

impl PartialEq for ScaledComplex {
    fn eq(&self, other: &Self) -> bool {
        let a = self.z.norm() == 0.0;
        let b = other.z.norm() == 0.0;
        if a || b {
            return a && b;
        }
        self.z == other.z && self.s == other.s
    }
}

impl Semiring for ScaledComplex {
    fn zero() -> Self {
        ScaledComplex { z: Complex64::new(0.0, 0.0), s: 0.0 }
    }
    fn one() -> Self {
        ScaledComplex { z: Complex64::new(1.0, 0.0), s: 0.0 }
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let m = self.s.max(other.s);
        let z = self.z * (self.s - m).exp() + other.z * (other.s - m).exp();
        ScaledComplex { z, s: m }.normalized()
    }
    fn mul(&self, other: &Self) -> Self {
        ScaledComplex { z: self.z * other.z, s: self.s + other.s }.normalized()
    }
    fn is_zero(&self) -> bool {
        self.z.norm() == 0.0
    }
}

impl Ring for ScaledComplex {
    fn neg(&self) -> Self {
        ScaledComplex { z: -self.z, s: self.s }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    type T = Tropical<BigRational>;

    fn t(x: i64) -> T {
        Tropical::Fin(ratio(x, 1))
    }

    #[test]
    fn tropical_laws() {
        let vals = [T::NegInf, t(-3), t(0), t(2), t(7)];
        for a in &vals {
            assert_eq!(a.add(&T::zero()), *a);
            assert_eq!(a.mul(&T::one()), *a);
            assert_eq!(a.mul(&T::zero()), T::zero());
            for b in &vals {
                assert_eq!(a.add(b), b.add(a));
                assert_eq!(a.mul(b), b.mul(a));
                for c in &vals {
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                    assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
                }
            }
        }
        assert_eq!(t(2).add(&t(5)), t(5));
        assert_eq!(t(2).mul(&t(5)), t(7));
        assert!(T::NegInf < t(-1000));
    }

    #[test]
    fn scaled_complex_matches_plain_arithmetic() {
        let a = ScaledComplex::new(Complex64::new(1.5, -0.5), 2.0);
        let b = ScaledComplex::new(Complex64::new(-0.25, 3.0), -1.0);
        let pa = Complex64::new(1.5, -0.5) * 2f64.exp();
        let pb = Complex64::new(-0.25, 3.0) * (-1f64).exp();
        assert!((a.add(&b).to_complex_shifted(0.0) - (pa + pb)).norm() < 1e-12);
        assert!((a.mul(&b).to_complex_shifted(0.0) - pa * pb).norm() < 1e-12);
        let huge = ScaledComplex::from_log(5000.0, Complex64::new(1.0, 0.0));
        let sq = huge.mul(&huge);
        assert!((sq.log_abs() - 10000.0).abs() < 1e-9);
    }
}
