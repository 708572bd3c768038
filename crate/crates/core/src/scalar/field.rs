//! The two coefficient backends: exact `Q(q)` and double precision at a fixed `q`.

use std::fmt::{Debug, Display};

use super::qexp::{AlphaParam, QExp, QProduct};
use super::{Scalar, ScalarError};

/// Coefficient field of the non-commutative algebras.
pub trait Coeff: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    /// Exact equality for `Scalar`; relative tolerance `1e-9` for floats.
    fn close_to(&self, other: &Self) -> bool;

    /// Numeric value at `q0`. Floats ignore `q0` since `q` is already fixed.
    fn eval_at(&self, q0: f64) -> Result<f64, ScalarError>;

    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError>;
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_i64(v: i64) -> Self {
        Scalar::from_i64(v)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Scalar::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
    fn eval_at(&self, q0: f64) -> Result<f64, ScalarError> {
        self.eval(q0)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        match v {
            serde_json::Value::String(s) => s.parse(),
            serde_json::Value::Number(n) if n.is_i64() => Ok(Scalar::from_i64(n.as_i64().unwrap())),
            other => Err(ScalarError::Parse(format!("expected a fraction string, got {other}"))),
        }
    }
}

pub const FLOAT_TOLERANCE: f64 = 1e-9;

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn close_to(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOLERANCE * self.abs().max(other.abs()).max(1.0)
    }
    fn eval_at(&self, _q0: f64) -> Result<f64, ScalarError> {
        Ok(*self)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        v.as_f64()
            .ok_or_else(|| ScalarError::Parse(format!("expected a number, got {v}")))
    }
}

/// How `q` is reported in exported tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QLabel {
    Symbolic,
    Value(f64),
}

impl QLabel {
    pub fn to_json(self) -> serde_json::Value {
        match self {
            QLabel::Symbolic => serde_json::Value::from("symbolic"),
            QLabel::Value(q) => serde_json::Value::from(q),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        match v {
            serde_json::Value::String(s) if s == "symbolic" => Ok(QLabel::Symbolic),
            _ => v
                .as_f64()
                .map(QLabel::Value)
                .ok_or_else(|| ScalarError::Parse(format!("q must be \"symbolic\" or a number, got {v}"))),
        }
    }
}

/// A coefficient field together with its distinguished element `q`.
pub trait QBase: Clone + Debug + Send + Sync + 'static {
    type C: Coeff;

    fn q_pow(&self, e: QExp) -> Self::C;

    fn product(&self, p: &QProduct) -> Result<Self::C, ScalarError>;

    /// Rejects parameters the backend cannot represent.
    fn check_alpha(&self, alpha: AlphaParam) -> Result<(), ScalarError>;

    fn label(&self) -> QLabel;

    fn one_minus_q_pow(&self, e: QExp) -> Self::C {
        Coeff::sub(&Self::C::one(), &self.q_pow(e))
    }

    /// `prod_{i<k} (1 - q^{start + i*step})`
    fn qpochhammer(&self, start: QExp, step: i64, k: usize) -> Self::C {
        self.product(&QProduct::one().poch(start, step, k, 1))
            .expect("a finite product of (1 - q^e) never divides by zero")
    }
}

/// Exact rational functions in an indeterminate `q`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl QBase for Exact {
    type C = Scalar;

    fn q_pow(&self, e: QExp) -> Scalar {
        let k = e
            .as_int()
            .expect("exact backend needs integer exponents; alpha is validated on entry");
        Scalar::q_pow(k)
    }

    fn product(&self, p: &QProduct) -> Result<Scalar, ScalarError> {
        Scalar::from_qproduct(p)
    }

    fn check_alpha(&self, alpha: AlphaParam) -> Result<(), ScalarError> {
        match alpha {
            AlphaParam::Exact(_) => Ok(()),
            AlphaParam::Float(x) => Err(ScalarError::InvalidAlpha(format!(
                "exact arithmetic requires an integer alpha, got {x}"
            ))),
        }
    }

    fn label(&self) -> QLabel {
        QLabel::Symbolic
    }

    fn one_minus_q_pow(&self, e: QExp) -> Scalar {
        Scalar::one_minus_q_pow(e.as_int().expect("integer exponent"))
    }
}

/// Double precision arithmetic with `q` fixed to a number in `(0, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct Numeric {
    q: f64,
}

impl Numeric {
    pub fn new(q: f64) -> Result<Self, ScalarError> {
        if q > 0.0 && q < 1.0 {
            Ok(Numeric { q })
        } else {
            Err(ScalarError::InvalidQ(q))
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl QBase for Numeric {
    type C = f64;

    fn q_pow(&self, e: QExp) -> f64 {
        match e {
            QExp::Int(k) => self.q.powi(k as i32),
            QExp::Real(x) => self.q.powf(x),
        }
    }

    fn product(&self, p: &QProduct) -> Result<f64, ScalarError> {
        let mut v = self.q_pow(p.qpow);
        if p.negative {
            v = -v;
        }
        for &(e, m) in &p.factors {
            let f = 1.0 - self.q_pow(e);
            if f == 0.0 && m < 0 {
                return Err(ScalarError::DivisionByZero);
            }
            v *= f.powi(m);
        }
        Ok(v)
    }

    fn check_alpha(&self, alpha: AlphaParam) -> Result<(), ScalarError> {
        if alpha.value() > -1.0 {
            Ok(())
        } else {
            Err(ScalarError::InvalidAlpha(format!("alpha must be > -1, got {alpha}")))
        }
    }

    fn label(&self) -> QLabel {
        QLabel::Value(self.q)
    }
}
