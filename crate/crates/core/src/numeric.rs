//! Exact ordered-field arithmetic.
//!
//! Every predicate in the crate is decided here: rationals are arbitrary
//! precision, smoothness values carry a formal infinitesimal, and
//! comparisons against `a + b√c` are settled by sign analysis and squaring.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::CalcError;

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn to_f64(x: &Rational) -> f64 {
    // Scale huge operands down together so the quotient stays finite.
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Largest integer `k` with `k <= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Smallest integer `k` with `k >= x`.
pub fn ceil(x: &Rational) -> BigInt {
    -(-x.numer()).div_floor(x.denom())
}

pub fn parse_rational(text: &str) -> Result<Rational, CalcError> {
    let bad = || CalcError::Parse(format!("malformed rational `{text}`"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(CalcError::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// JSON form `[num, den]`. Components that fit in an `i64` are numbers,
/// larger ones are decimal strings, so every value round-trips exactly.
pub mod rational_json {
    use super::*;

    fn ser_int<S: SerializeTuple>(seq: &mut S, v: &BigInt) -> Result<(), S::Error> {
        match v.to_i64() {
            Some(small) => seq.serialize_element(&small),
            None => seq.serialize_element(&v.to_string()),
        }
    }

    pub fn serialize<S: Serializer>(x: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_tuple(2)?;
        ser_int(&mut seq, x.numer())?;
        ser_int(&mut seq, x.denom())?;
        seq.end()
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum IntRepr {
        Small(i64),
        Text(String),
    }

    impl IntRepr {
        fn into_bigint<E: de::Error>(self) -> Result<BigInt, E> {
            match self {
                IntRepr::Small(v) => Ok(BigInt::from(v)),
                IntRepr::Text(t) => t.parse().map_err(|_| E::custom(format!("bad integer `{t}`"))),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let (num, den) = <(IntRepr, IntRepr)>::deserialize(deserializer)?;
        let num = num.into_bigint::<D::Error>()?;
        let den = den.into_bigint::<D::Error>()?;
        if !den.is_positive() {
            return Err(de::Error::custom("denominator must be positive"));
        }
        Ok(Rational::new(num, den))
    }
}

/// A rational plus an integer multiple of a single positive infinitesimal.
///
/// `ExtReal { base: 3, eps: -1 }` stands for `3 − ε`. Ordering is
/// lexicographic, which captures every "for all sufficiently small ε > 0"
/// statement about such values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtReal {
    #[serde(with = "rational_json")]
    pub base: Rational,
    pub eps: i64,
}

impl ExtReal {
    pub fn new(base: Rational, eps: i64) -> Self {
        ExtReal { base, eps }
    }

    pub fn exact(base: Rational) -> Self {
        ExtReal { base, eps: 0 }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.eps == 0
    }

    /// `self + k·ε`.
    pub fn shift_eps(&self, k: i64) -> Self {
        ExtReal::new(self.base.clone(), self.eps + k)
    }

    pub fn add_rational(&self, x: &Rational) -> Self {
        ExtReal::new(&self.base + x, self.eps)
    }

    pub fn sub_rational(&self, x: &Rational) -> Self {
        ExtReal::new(&self.base - x, self.eps)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        ExtReal::new(&self.base * int(k), self.eps * k)
    }

    /// Multiply by a rational; defined only when the infinitesimal part stays
    /// an integer multiple of ε.
    pub fn checked_scale(&self, factor: &Rational) -> Option<Self> {
        let eps = Rational::from_integer(BigInt::from(self.eps)) * factor;
        if !eps.is_integer() {
            return None;
        }
        Some(ExtReal::new(&self.base * factor, eps.to_integer().to_i64()?))
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        self.base.cmp(x).then(self.eps.cmp(&0))
    }

    pub fn gt_rational(&self, x: &Rational) -> bool {
        self.cmp_rational(x) == Ordering::Greater
    }

    pub fn lt_rational(&self, x: &Rational) -> bool {
        self.cmp_rational(x) == Ordering::Less
    }

    pub fn eq_rational(&self, x: &Rational) -> bool {
        self.cmp_rational(x) == Ordering::Equal
    }

    /// Exact order of `self` against `surd`; a tie on the rational part is
    /// broken by the sign of the infinitesimal.
    pub fn cmp_surd(&self, surd: &Surd) -> Ordering {
        surd.cmp_rational(&self.base).reverse().then(self.eps.cmp(&0))
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.base)
    }
}

impl From<Rational> for ExtReal {
    fn from(base: Rational) -> Self {
        ExtReal::exact(base)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        ext_compare(self, other)
    }
}

pub fn ext_compare(x: &ExtReal, y: &ExtReal) -> Ordering {
    x.base.cmp(&y.base).then(x.eps.cmp(&y.eps))
}

impl Add for &ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: &ExtReal) -> ExtReal {
        ExtReal::new(&self.base + &rhs.base, self.eps + rhs.eps)
    }
}

impl Sub for &ExtReal {
    type Output = ExtReal;
    fn sub(self, rhs: &ExtReal) -> ExtReal {
        ExtReal::new(&self.base - &rhs.base, self.eps - rhs.eps)
    }
}

impl Neg for &ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal::new(-&self.base, -self.eps)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = format_rational(&self.base);
        match self.eps {
            0 => write!(f, "{base}"),
            1 => write!(f, "{base}+eps"),
            -1 => write!(f, "{base}-eps"),
            k if k > 0 => write!(f, "{base}+{k}eps"),
            k => write!(f, "{base}-{}eps", -k),
        }
    }
}

/// Parses `X`, `X-eps`, `X+eps`, `X-3eps`.
pub fn parse_ext(text: &str) -> Result<ExtReal, CalcError> {
    let text = text.trim();
    let Some(stem) = text.strip_suffix("eps") else {
        return Ok(ExtReal::exact(parse_rational(text)?));
    };
    let bad = || CalcError::Parse(format!("malformed smoothness `{text}`"));
    // the sign separating base and ε-part is the last '+' or '-' not at index 0
    let split = stem
        .char_indices()
        .rev()
        .find(|&(i, c)| i > 0 && (c == '-' || c == '+'))
        .map(|(i, _)| i)
        .ok_or_else(bad)?;
    let (base, rest) = stem.split_at(split);
    let sign = if rest.starts_with('-') { -1 } else { 1 };
    let count = &rest[1..];
    let count: i64 = if count.is_empty() { 1 } else { count.parse().map_err(|_| bad())? };
    Ok(ExtReal::new(parse_rational(base)?, sign * count))
}

/// The real number `a + b√c` with rational `a`, `b` and `c ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        debug_assert!(!c.is_negative(), "negative radicand");
        Surd { a, b, c }
    }

    pub fn rational(a: Rational) -> Self {
        Surd::new(a, Rational::zero(), Rational::zero())
    }

    /// `3 + √8`, the abscissa where the level curve of the loss appears.
    pub fn vertex() -> Self {
        Surd::new(int(3), int(1), int(8))
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        cmp_rational_vs_surd(x, &self.a, &self.b, &self.c).reverse()
    }

    pub fn sign(&self) -> Ordering {
        self.cmp_rational(&Rational::zero())
    }

    /// Exact comparison of two surds with possibly different radicands.
    pub fn cmp_surd(&self, other: &Surd) -> Ordering {
        // sign of (a1 − a2) + b1√c1 − b2√c2 = X − Y with X a surd in √c1
        let x = Surd::new(&self.a - &other.a, self.b.clone(), self.c.clone());
        let y_sign = (&other.b * root_sign(&other.c)).cmp(&Rational::zero());
        let x_sign = x.sign();
        match (x_sign, y_sign) {
            (Ordering::Equal, s) => s.reverse(),
            (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Less) => Ordering::Greater,
            (Ordering::Less, Ordering::Greater) => Ordering::Less,
            (s, _) => {
                // same sign: compare X² = a² + b²c + 2ab√c against Y² = b2²c2
                let x_sq = Surd::new(
                    &x.a * &x.a + &x.b * &x.b * &x.c,
                    int(2) * &x.a * &x.b,
                    x.c.clone(),
                );
                let y_sq = &other.b * &other.b * &other.c;
                let by_square = x_sq.cmp_rational(&y_sq);
                if s == Ordering::Greater {
                    by_square
                } else {
                    by_square.reverse()
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.c).sqrt()
    }
}

fn root_sign(c: &Rational) -> Rational {
    if c.is_zero() {
        Rational::zero()
    } else {
        Rational::one()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt({})",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c)
        )
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            #[serde(with = "rational_json")]
            a: Rational,
            #[serde(with = "rational_json")]
            b: Rational,
            #[serde(with = "rational_json")]
            c: Rational,
            approx: f64,
        }
        Repr { a: self.a.clone(), b: self.b.clone(), c: self.c.clone(), approx: self.to_f64() }
            .serialize(serializer)
    }
}

/// Order of `x` against `a + b√c`, decided by sign analysis and squaring.
pub fn cmp_rational_vs_surd(x: &Rational, a: &Rational, b: &Rational, c: &Rational) -> Ordering {
    assert!(!c.is_negative(), "radicand must be nonnegative");
    let lhs = x - a;
    if b.is_zero() || c.is_zero() {
        return lhs.cmp(&Rational::zero());
    }
    // compare lhs with b√c, whose sign is the sign of b
    let rhs_positive = b.is_positive();
    match (lhs.cmp(&Rational::zero()), rhs_positive) {
        (Ordering::Equal, true) | (Ordering::Less, true) => Ordering::Less,
        (Ordering::Equal, false) | (Ordering::Greater, false) => Ordering::Greater,
        (Ordering::Greater, true) => (&lhs * &lhs).cmp(&(b * b * c)),
        (Ordering::Less, false) => (b * b * c).cmp(&(&lhs * &lhs)),
    }
}
