use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::ScalarError;

/// Exponent of `q`. Integer in the exact field; real when a non-integer `alpha` is
/// involved (float backend only).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QExp {
    Int(i64),
    Real(f64),
}

impl QExp {
    pub fn as_int(self) -> Option<i64> {
        match self {
            QExp::Int(k) => Some(k),
            QExp::Real(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => Some(x as i64),
            QExp::Real(_) => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            QExp::Int(k) => k as f64,
            QExp::Real(x) => x,
        }
    }
}

impl From<i64> for QExp {
    fn from(k: i64) -> Self {
        QExp::Int(k)
    }
}

impl Add for QExp {
    type Output = QExp;
    fn add(self, rhs: QExp) -> QExp {
        match (self, rhs) {
            (QExp::Int(a), QExp::Int(b)) => QExp::Int(a + b),
            (a, b) => QExp::Real(a.as_f64() + b.as_f64()),
        }
    }
}

impl Add<i64> for QExp {
    type Output = QExp;
    fn add(self, rhs: i64) -> QExp {
        self + QExp::Int(rhs)
    }
}

impl Sub<i64> for QExp {
    type Output = QExp;
    fn sub(self, rhs: i64) -> QExp {
        self + QExp::Int(-rhs)
    }
}

impl Mul<i64> for QExp {
    type Output = QExp;
    fn mul(self, rhs: i64) -> QExp {
        match self {
            QExp::Int(a) => QExp::Int(a * rhs),
            QExp::Real(x) => QExp::Real(x * rhs as f64),
        }
    }
}

impl Neg for QExp {
    type Output = QExp;
    fn neg(self) -> QExp {
        self * -1
    }
}

/// The parameter `alpha` of the q-disk polynomials.
///
/// `Exact` carries an integer and works with both backends; `Float` carries a real
/// value and is only accepted by the numeric backend.
#[derive(Clone, Copy, Debug)]
pub enum AlphaParam {
    Exact(i64),
    Float(f64),
}

impl AlphaParam {
    pub fn exact(value: i64) -> Result<Self, ScalarError> {
        if value < 0 {
            return Err(ScalarError::InvalidAlpha(format!(
                "exact alpha must be a non-negative integer, got {value}"
            )));
        }
        Ok(AlphaParam::Exact(value))
    }

    pub fn float(value: f64) -> Result<Self, ScalarError> {
        if value <= -1.0 || !value.is_finite() {
            return Err(ScalarError::InvalidAlpha(format!(
                "alpha must be a finite real > -1, got {value}"
            )));
        }
        Ok(AlphaParam::Float(value))
    }

    /// Parses `"2"` as exact and `"1.5"` as float.
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        if let Ok(k) = s.parse::<i64>() {
            return AlphaParam::exact(k);
        }
        match s.parse::<f64>() {
            Ok(x) => AlphaParam::float(x),
            Err(_) => Err(ScalarError::InvalidAlpha(format!("cannot parse alpha {s:?}"))),
        }
    }

    pub fn exp(self) -> QExp {
        match self {
            AlphaParam::Exact(k) => QExp::Int(k),
            AlphaParam::Float(x) => QExp::Real(x),
        }
    }

    /// `alpha + k`, used for the shifted parameters `alpha + r + s` and `alpha - 1`.
    pub fn shift(self, k: i64) -> AlphaParam {
        match self {
            AlphaParam::Exact(a) => AlphaParam::Exact(a + k),
            AlphaParam::Float(x) => AlphaParam::Float(x + k as f64),
        }
    }

    pub fn value(self) -> f64 {
        self.exp().as_f64()
    }

    pub fn is_exact(self) -> bool {
        matches!(self, AlphaParam::Exact(_))
    }

    pub fn to_json(self) -> serde_json::Value {
        match self {
            AlphaParam::Exact(k) => serde_json::Value::from(k),
            AlphaParam::Float(x) => serde_json::Value::from(x),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        if let Some(k) = v.as_i64() {
            return AlphaParam::exact(k);
        }
        match v.as_f64() {
            Some(x) => AlphaParam::float(x),
            None => Err(ScalarError::InvalidAlpha(format!("alpha must be a number, got {v}"))),
        }
    }
}

impl PartialEq for AlphaParam {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (AlphaParam::Exact(a), AlphaParam::Exact(b)) => a == b,
            (AlphaParam::Float(a), AlphaParam::Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for AlphaParam {}

impl Hash for AlphaParam {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            AlphaParam::Exact(a) => (0u8, *a).hash(state),
            AlphaParam::Float(x) => (1u8, x.to_bits()).hash(state),
        }
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaParam::Exact(k) => write!(f, "{k}"),
            AlphaParam::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A formal product `(+/-) q^e * prod (1 - q^{e_i})^{m_i}`.
///
/// Every normalization constant in the kernel has this shape. The exact backend turns
/// it into a canonical fraction without any polynomial division.
#[derive(Clone, Debug, PartialEq)]
pub struct QProduct {
    pub negative: bool,
    pub qpow: QExp,
    pub factors: Vec<(QExp, i32)>,
}

impl Default for QProduct {
    fn default() -> Self {
        QProduct::one()
    }
}

impl QProduct {
    pub fn one() -> Self {
        QProduct {
            negative: false,
            qpow: QExp::Int(0),
            factors: Vec::new(),
        }
    }

    pub fn q(mut self, e: QExp) -> Self {
        self.qpow = self.qpow + e;
        self
    }

    /// Multiplies by `(1 - q^e)^mult`.
    pub fn one_minus(mut self, e: QExp, mult: i32) -> Self {
        self.factors.push((e, mult));
        self
    }

    /// Multiplies by `(q^start; q^step)_k ^ mult`.
    pub fn poch(mut self, start: QExp, step: i64, k: usize, mult: i32) -> Self {
        for i in 0..k as i64 {
            self.factors.push((start + step * i, mult));
        }
        self
    }

    pub fn negate(mut self) -> Self {
        self.negative = !self.negative;
        self
    }

    pub fn times(mut self, other: &QProduct) -> Self {
        self.negative ^= other.negative;
        self.qpow = self.qpow + other.qpow;
        self.factors.extend(other.factors.iter().copied());
        self
    }

    pub fn inverse(&self) -> Self {
        QProduct {
            negative: self.negative,
            qpow: -self.qpow,
            factors: self.factors.iter().map(|&(e, m)| (e, -m)).collect(),
        }
    }

    pub fn over(self, other: &QProduct) -> Self {
        self.times(&other.inverse())
    }
}

impl serde::Serialize for AlphaParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            AlphaParam::Exact(a) => s.serialize_i64(a),
            AlphaParam::Float(x) => s.serialize_f64(x),
        }
    }
}
