//! Exact coefficient field `Q(q)` and the numeric backend.
//!
//! A [`Scalar`] is a reduced fraction `num / den` of integer polynomials in `q`.
//! Denominators are kept factored as `q^s * prod Phi_d^e * rest`, where `Phi_d` are
//! cyclotomic polynomials and `rest` (almost always `1`) carries anything else. The
//! representation is canonical, so equality is structural.

pub mod cyclotomic;
mod field;
pub mod poly;
mod qexp;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use field::{Coeff, Exact, Numeric, QBase, QLabel, FLOAT_TOLERANCE};
pub use poly::IntPoly;
pub use qexp::{AlphaParam, QExp, QProduct};

use cyclotomic::{cyclotomic_poly, divisors, factor_out, strip_factor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at q = {0}")]
    Pole(f64),
    #[error("q must lie in (0, 1), got {0}")]
    InvalidQ(f64),
    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Denom {
    qpow: u32,
    /// `(d, e)` pairs sorted by `d`, all `e > 0`.
    cyclo: Vec<(u32, u32)>,
    /// Positive leading coefficient; free of `q` and cyclotomic factors.
    rest: IntPoly,
}

impl Denom {
    fn one() -> Self {
        Denom {
            qpow: 0,
            cyclo: Vec::new(),
            rest: IntPoly::one(),
        }
    }

    fn is_one(&self) -> bool {
        self.qpow == 0 && self.cyclo.is_empty() && self.rest.is_one()
    }

    fn expand(&self) -> IntPoly {
        let mut p = self.rest.shift_up(self.qpow as usize);
        for &(d, e) in &self.cyclo {
            p = p.mul(&cyclotomic_poly(d).pow(e));
        }
        p
    }

    fn mul(&self, other: &Denom) -> Denom {
        let mut map: BTreeMap<u32, u32> = self.cyclo.iter().copied().collect();
        for &(d, e) in &other.cyclo {
            *map.entry(d).or_insert(0) += e;
        }
        Denom {
            qpow: self.qpow + other.qpow,
            cyclo: map.into_iter().collect(),
            rest: self.rest.mul(&other.rest),
        }
    }

    fn lcm(&self, other: &Denom) -> Denom {
        let mut map: BTreeMap<u32, u32> = self.cyclo.iter().copied().collect();
        for &(d, e) in &other.cyclo {
            let slot = map.entry(d).or_insert(0);
            *slot = (*slot).max(e);
        }
        let rest = if self.rest.is_one() {
            other.rest.clone()
        } else if other.rest.is_one() || self.rest == other.rest {
            self.rest.clone()
        } else {
            let g = self.rest.gcd(&other.rest);
            self.rest
                .mul(&other.rest)
                .div_exact(&g)
                .expect("gcd divides the product")
        };
        Denom {
            qpow: self.qpow.max(other.qpow),
            cyclo: map.into_iter().collect(),
            rest,
        }
    }

    /// `multiple / self` as a polynomial; `multiple` must be a multiple of `self`.
    fn cofactor(&self, multiple: &Denom) -> IntPoly {
        let rest = if self.rest.is_one() {
            multiple.rest.clone()
        } else {
            multiple.rest.div_exact(&self.rest).expect("lcm is a multiple")
        };
        let mut p = rest.shift_up((multiple.qpow - self.qpow) as usize);
        for &(d, e) in &multiple.cyclo {
            let have = self.cyclo.iter().find(|&&(dd, _)| dd == d).map_or(0, |&(_, e)| e);
            if e > have {
                p = p.mul(&cyclotomic_poly(d).pow(e - have));
            }
        }
        p
    }
}

#[derive(PartialEq, Eq, Hash, Debug)]
struct Repr {
    num: IntPoly,
    den: Denom,
}

/// An element of `Q(q)` in canonical reduced form. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Arc<Repr>);

/// Removes every common factor of `num` and `den`.
fn reduce(mut num: IntPoly, mut den: Denom) -> (IntPoly, Denom) {
    if num.is_zero() {
        return (num, Denom::one());
    }
    if den.qpow > 0 {
        let v = num.valuation().min(den.qpow as usize);
        if v > 0 {
            num = num.shift_down(v);
            den.qpow -= v as u32;
        }
    }
    if !den.cyclo.is_empty() {
        let mut approx = num.to_f64_coeffs();
        let mut kept = Vec::with_capacity(den.cyclo.len());
        for &(d, e) in &den.cyclo {
            let removed = strip_factor(&mut num, &mut approx, d, e);
            if e > removed {
                kept.push((d, e - removed));
            }
        }
        den.cyclo = kept;
    }
    if !den.rest.is_one() {
        let g = num.gcd(&den.rest);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den.rest = den.rest.div_exact(&g).expect("gcd divides denominator");
        }
        if den.rest.leading().is_some_and(|c| c.is_negative()) {
            num = num.neg();
            den.rest = den.rest.neg();
        }
    }
    (num, den)
}

impl Scalar {
    fn from_reduced(num: IntPoly, den: Denom) -> Self {
        Scalar(Arc::new(Repr { num, den }))
    }

    pub fn zero() -> Self {
        Scalar::from_reduced(IntPoly::zero(), Denom::one())
    }

    pub fn one() -> Self {
        Scalar::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar::from_reduced(IntPoly::constant(BigInt::from(v)), Denom::one())
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Scalar::from_reduced(p, Denom::one())
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            Scalar::from_poly(IntPoly::monomial(BigInt::one(), k as usize))
        } else {
            Scalar::from_reduced(
                IntPoly::one(),
                Denom {
                    qpow: (-k) as u32,
                    ..Denom::one()
                },
            )
        }
    }

    pub fn q() -> Self {
        Scalar::q_pow(1)
    }

    /// `1 - q^k`; negative powers are cleared into the denominator.
    pub fn one_minus_q_pow(k: i64) -> Self {
        Scalar::from_qproduct(&QProduct::one().one_minus(QExp::Int(k), 1))
            .expect("a single factor cannot divide by zero")
    }

    /// General fraction `num / den`.
    pub fn from_fraction(num: IntPoly, den: IntPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let (qpow, cyclo, mut rest) = factor_out(&den);
        let mut num = num;
        if rest.leading().unwrap().is_negative() {
            rest = rest.neg();
            num = num.neg();
        }
        let (num, den) = reduce(num, Denom { qpow, cyclo, rest });
        Ok(Scalar::from_reduced(num, den))
    }

    /// Builds a canonical scalar from a formal q-product without polynomial division.
    pub fn from_qproduct(p: &QProduct) -> Result<Self, ScalarError> {
        let int = |e: QExp| {
            e.as_int()
                .ok_or_else(|| ScalarError::InvalidAlpha(format!("non-integer exponent {e:?}")))
        };
        let mut negative = p.negative;
        let mut qnet = int(p.qpow)?;
        let mut exps: BTreeMap<u32, i64> = BTreeMap::new();
        let mut zero = false;
        for &(e, m) in &p.factors {
            let e = int(e)?;
            if e == 0 {
                if m < 0 {
                    return Err(ScalarError::DivisionByZero);
                }
                if m > 0 {
                    zero = true;
                }
                continue;
            }
            if e > 0 {
                // 1 - q^e = -prod_{d | e} Phi_d
                if m.rem_euclid(2) == 1 {
                    negative = !negative;
                }
            } else {
                // 1 - q^{-n} = q^{-n} prod_{d | n} Phi_d
                qnet += e * m as i64;
            }
            for d in divisors(e.unsigned_abs() as u32) {
                *exps.entry(d).or_insert(0) += m as i64;
            }
        }
        if zero {
            return Ok(Scalar::zero());
        }
        let mut num = IntPoly::monomial(
            if negative { -BigInt::one() } else { BigInt::one() },
            qnet.max(0) as usize,
        );
        let mut cyclo = Vec::new();
        for (d, e) in exps {
            match e.cmp(&0) {
                std::cmp::Ordering::Greater => num = num.mul(&cyclotomic_poly(d).pow(e as u32)),
                std::cmp::Ordering::Less => cyclo.push((d, (-e) as u32)),
                std::cmp::Ordering::Equal => {}
            }
        }
        let den = Denom {
            qpow: (-qnet).max(0) as u32,
            cyclo,
            rest: IntPoly::one(),
        };
        Ok(Scalar::from_reduced(num, den))
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.0.num
    }

    pub fn denominator(&self) -> IntPoly {
        self.0.den.expand()
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn neg(&self) -> Self {
        Scalar::from_reduced(self.0.num.neg(), self.0.den.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&*self.0, &*other.0);
        let (num, den) = if a.den == b.den {
            (a.num.add(&b.num), a.den.clone())
        } else {
            let l = a.den.lcm(&b.den);
            let num = a.num.mul(&a.den.cofactor(&l)).add(&b.num.mul(&b.den.cofactor(&l)));
            (num, l)
        };
        let (num, den) = reduce(num, den);
        Scalar::from_reduced(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (a, b) = (&*self.0, &*other.0);
        let (n1, d2) = reduce(a.num.clone(), b.den.clone());
        let (n2, d1) = reduce(b.num.clone(), a.den.clone());
        Scalar::from_reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let r = &*self.0;
        let mut num = r.den.expand();
        let (qpow, cyclo, mut rest) = factor_out(&r.num);
        if rest.leading().unwrap().is_negative() {
            rest = rest.neg();
            num = num.neg();
        }
        Some(Scalar::from_reduced(num, Denom { qpow, cyclo, rest }))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        other.inv().map(|inv| self.mul(&inv)).ok_or(ScalarError::DivisionByZero)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Scalar::one(), |acc, _| acc.mul(self))
    }

    /// Evaluates at `q0` by exact rational arithmetic on the dyadic value of `q0`,
    /// rounding only once at the end.
    pub fn eval(&self, q0: f64) -> Result<f64, ScalarError> {
        if !q0.is_finite() {
            return Err(ScalarError::InvalidQ(q0));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let (m, shift) = dyadic(q0);
        let den = self.0.den.expand();
        let n_deg = self.0.num.degree().unwrap();
        let d_deg = den.degree().unwrap();
        let nv = self.0.num.eval_dyadic_scaled(&m, shift);
        let dv = den.eval_dyadic_scaled(&m, shift);
        if dv.is_zero() {
            return Err(ScalarError::Pole(q0));
        }
        // num(q0)/den(q0) = nv/dv * 2^{shift (d_deg - n_deg)}
        let extra = shift as i64 * (d_deg as i64 - n_deg as i64);
        Ok(ratio_to_f64(&nv, &dv, extra))
    }

    /// Degree of numerator plus degree of denominator; a rough size measure.
    pub fn height(&self) -> usize {
        self.0.num.len() + self.0.den.expand().len()
    }
}

/// Writes `x = m / 2^shift` exactly.
fn dyadic(x: f64) -> (BigInt, usize) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xfffffffffffff) << 1
    } else {
        (bits & 0xfffffffffffff) | 0x10000000000000
    };
    let mut e = exponent - 1075;
    let mut mant = mantissa;
    while mant & 1 == 0 && mant != 0 {
        mant >>= 1;
        e += 1;
    }
    let m = BigInt::from(sign) * BigInt::from(mant);
    if e >= 0 {
        (m << (e as usize), 0)
    } else {
        (m, (-e) as usize)
    }
}

/// `n / d * 2^extra` rounded to the nearest double (up to one ulp).
fn ratio_to_f64(n: &BigInt, d: &BigInt, extra: i64) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let negative = n.is_negative() != d.is_negative();
    let (n, d) = (n.abs(), d.abs());
    let shift = 64 + d.bits() as i64 - n.bits() as i64;
    let quotient = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    let mut v = quotient.to_f64().unwrap_or(f64::INFINITY);
    let mut e = extra - shift;
    while e > 0 {
        let step = e.min(1000);
        v *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        v /= 2f64.powi(step as i32);
        e += step;
    }
    if negative {
        -v
    } else {
        v
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.den.is_one() {
            write!(f, "{}", self.0.num)
        } else {
            write!(f, "({})/({})", self.0.num, self.0.den.expand())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:expr) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $inner(self, rhs)
            }
        }
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $inner(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, Scalar::add);
forward_binop!(Sub, sub, Scalar::sub);
forward_binop!(Mul, mul, Scalar::mul);
forward_binop!(Div, div, |a: &Scalar, b: &Scalar| a
    .div(b)
    .expect("division by zero scalar"));

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

/// `(q^start; q^step)_k` as an exact scalar.
pub fn qpochhammer(start_exp: i64, step_exp: i64, k: usize) -> Scalar {
    assert!(step_exp > 0, "step exponent must be positive");
    Exact.qpochhammer(QExp::Int(start_exp), step_exp, k)
}

/// Parses a Laurent polynomial in `q`; negative powers are allowed.
fn parse_poly(s: &str) -> Result<Scalar, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut body = compact.as_str();
    while body.starts_with('(') && body.ends_with(')') && balanced(&body[1..body.len() - 1]) {
        body = &body[1..body.len() - 1];
    }
    if body.is_empty() {
        return Err(err());
    }
    let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            // a minus directly after '^' belongs to the exponent
            if bytes[i] == b'^' && i + 1 < bytes.len() && bytes[i + 1] == b'-' {
                i += 2;
                continue;
            }
            i += 1;
        }
        let term = &body[start..i];
        let (coef, power) = parse_term(term).ok_or_else(err)?;
        *terms.entry(power).or_insert_with(BigInt::zero) += sign * coef;
    }
    let min = terms.keys().next().copied().unwrap_or(0).min(0);
    let max = (terms.keys().last().copied().unwrap_or(0) - min) as usize;
    let mut coeffs = vec![BigInt::zero(); max + 1];
    for (k, c) in terms {
        coeffs[(k - min) as usize] += c;
    }
    Ok(Scalar::from_poly(IntPoly::from_coeffs(coeffs)).mul(&Scalar::q_pow(min)))
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

fn parse_term(t: &str) -> Option<(BigInt, i64)> {
    if t.is_empty() {
        return None;
    }
    match t.find('q') {
        None => Some((t.parse().ok()?, 0)),
        Some(pos) => {
            let coef_part = t[..pos].trim_end_matches('*');
            let coef = if coef_part.is_empty() {
                BigInt::one()
            } else {
                coef_part.parse().ok()?
            };
            let rest = &t[pos + 1..];
            let power = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')?.parse().ok()?
            };
            Some((coef, power))
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts `P`, `(P)`, `(P)/(Q)` and `P/Q` with integer coefficients in `q`.
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in compact.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(ScalarError::Parse(s.to_string()));
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        match split {
            None => parse_poly(&compact),
            Some(i) => parse_poly(&compact[..i])?.div(&parse_poly(&compact[i + 1..])?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn frac(n: &[i64], d: &[i64]) -> Scalar {
        Scalar::from_fraction(poly(n), poly(d)).unwrap()
    }

    #[test]
    fn qpochhammer_examples() {
        assert_eq!(qpochhammer(2, 2, 0), Scalar::one());
        let expect = Scalar::from_poly(poly(&[1, 0, -1]).mul(&poly(&[1, 0, 0, 0, -1])));
        assert_eq!(qpochhammer(2, 2, 2), expect);
        // (q^-2; q)_1 = 1 - q^-2 = (q^2 - 1) / q^2
        assert_eq!(qpochhammer(-2, 1, 1), frac(&[-1, 0, 1], &[0, 0, 1]));
        assert_eq!(qpochhammer(-2, 1, 1).to_string(), "(-1 + q^2)/(q^2)");
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Scalar::one().eval(0.37).unwrap(), 1.0);
        assert_eq!(Scalar::q_pow(3).eval(0.5).unwrap(), 0.125);
        let s = frac(&[1, 0, -1], &[1, 0, 0, 0, -1]);
        assert!((s.eval(0.5).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(s, frac(&[1], &[1, 0, 1]));
    }

    #[test]
    fn equality_examples() {
        assert_eq!(
            frac(&[1, 0, 0, 0, -1], &[1, 0, -1]),
            Scalar::from_poly(poly(&[1, 0, 1]))
        );
        assert_eq!(frac(&[0], &[1]), Scalar::zero());
        assert_eq!(&Scalar::q() * &Scalar::q(), Scalar::q_pow(2));
    }

    #[test]
    fn canonical_denominator_has_positive_leading_coefficient() {
        let s = frac(&[1], &[1, 0, -1]);
        assert_eq!(s.denominator(), poly(&[-1, 0, 1]));
        assert_eq!(s.numerator(), &poly(&[-1]));
        let t = frac(&[3], &[-6, 2]);
        assert_eq!(t.to_string(), "(3)/(-6 + 2*q)");
        assert_eq!(frac(&[2], &[4]).to_string(), "(1)/(2)");
    }

    #[test]
    fn negative_powers_are_cleared() {
        let s = Scalar::one_minus_q_pow(-3);
        assert_eq!(s.numerator(), &poly(&[-1, 0, 0, 1]));
        assert_eq!(s.denominator(), poly(&[0, 0, 0, 1]));
        assert_eq!(&s * &Scalar::q_pow(3), Scalar::from_poly(poly(&[-1, 0, 0, 1])));
    }

    #[test]
    fn division_and_inverse() {
        let a = frac(&[1, 2, 3], &[1, 0, 0, -1]);
        let b = frac(&[5, -1], &[0, 1, 1]);
        let c = a.div(&b).unwrap();
        assert_eq!(&c * &b, a);
        assert!(Scalar::zero().inv().is_none());
        assert_eq!(a.inv().unwrap().inv().unwrap(), a);
    }

    #[test]
    fn display_parse_round_trip() {
        for s in [
            frac(&[1, 0, -1], &[1, 0, 0, 0, 0, 0, -1]),
            frac(&[7, -3, 0, 2], &[0, 0, 5, 1]),
            Scalar::q_pow(-4),
            Scalar::from_i64(-12),
        ] {
            let text = s.to_string();
            assert_eq!(text.parse::<Scalar>().unwrap(), s, "{text}");
        }
        let parsed: Scalar = "(1 - q^2)/(1 - q^6)".parse().unwrap();
        assert_eq!(parsed, frac(&[1], &[1, 0, 1, 0, 1]));
        assert_eq!("q^-2".parse::<Scalar>().unwrap(), Scalar::q_pow(-2));
        assert!("1/(0)".parse::<Scalar>().is_err());
        assert!("x+1".parse::<Scalar>().is_err());
    }

    #[test]
    fn eval_small_values_accurately() {
        // q^200 at 0.3 underflows naive products of large coefficients but not here
        let s = Scalar::q_pow(200).mul(&frac(&[1], &[1, 0, -1]));
        let v = s.eval(0.3).unwrap();
        let expect = 0.3f64.powi(200) / (1.0 - 0.09);
        assert!(((v - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn qproduct_matches_division() {
        let p = QProduct::one()
            .q(QExp::Int(3))
            .poch(QExp::Int(2), 2, 3, 1)
            .poch(QExp::Int(6), 2, 2, -1)
            .one_minus(QExp::Int(-2), 1);
        let direct = Scalar::from_qproduct(&p).unwrap();
        let mut slow = Scalar::q_pow(3);
        for e in [2, 4, 6] {
            slow = slow.mul(&Scalar::one_minus_q_pow(e));
        }
        for e in [6, 8] {
            slow = slow.div(&Scalar::one_minus_q_pow(e)).unwrap();
        }
        slow = slow.mul(&Scalar::one_minus_q_pow(-2));
        assert_eq!(direct, slow);
        assert_eq!(Scalar::from_qproduct(&p.inverse()).unwrap(), direct.inv().unwrap());
    }
}
