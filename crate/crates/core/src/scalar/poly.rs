//! Dense univariate polynomials in `q` with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients are stored lowest degree first; the vector never ends in a zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Below this operand length schoolbook multiplication beats Kronecker packing.
const KRONECKER_THRESHOLD: usize = 24;

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        IntPoly::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Number of low-order zero coefficients, i.e. the exponent of `q` dividing `self`.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `q^k`; the caller guarantees `k <= valuation()`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.valuation() || self.is_zero());
        IntPoly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => out.push(a + b),
                (Some(a), None) => out.push(a.clone()),
                (None, Some(b)) => out.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.len().min(other.len()) >= KRONECKER_THRESHOLD {
            return self.mul_kronecker(other);
        }
        self.mul_schoolbook(other)
    }

    fn mul_schoolbook(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.len() + other.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Packs both operands into single integers at a byte-aligned radix, multiplies
    /// once, and unpacks signed digits.
    fn mul_kronecker(&self, other: &Self) -> Self {
        let max_bits = |p: &IntPoly| p.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0);
        let terms = self.len().min(other.len()) as u64;
        let bound_bits = max_bits(self) + max_bits(other) + (64 - terms.leading_zeros() as u64) + 2;
        let digit_bytes = bound_bits.div_ceil(8) as usize;
        let radix_bits = digit_bytes * 8;

        let pack = |p: &IntPoly| -> BigInt {
            let mut acc = BigInt::zero();
            for c in p.coeffs.iter().rev() {
                acc <<= radix_bits;
                acc += c;
            }
            acc
        };
        let product = pack(self) * pack(other);
        let out_len = self.len() + other.len() - 1;

        // Offset every digit by half the radix so the packed value is non-negative
        // and each digit can be sliced out of the byte representation.
        let half = BigInt::one() << (radix_bits - 1);
        let mut offset = BigInt::zero();
        for _ in 0..out_len {
            offset <<= radix_bits;
            offset += &half;
        }
        let shifted = product + offset;
        let (sign, bytes) = shifted.to_bytes_le();
        debug_assert!(sign != Sign::Minus);

        let mut coeffs = Vec::with_capacity(out_len);
        for i in 0..out_len {
            let start = (i * digit_bytes).min(bytes.len());
            let end = ((i + 1) * digit_bytes).min(bytes.len());
            let digit = BigInt::from(BigUint::from_bytes_le(&bytes[start..end]));
            coeffs.push(digit - &half);
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = IntPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division by a monic polynomial with small coefficients. Returns `None`
    /// when the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &[i64]) -> Option<Self> {
        let dd = divisor.len() - 1;
        debug_assert_eq!(divisor[dd], 1);
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.len() <= dd {
            return None;
        }
        let mut rem: Vec<BigInt> = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in divisor[..dd].iter().enumerate() {
                if dj != 0 {
                    rem[i + j] -= &c * dj;
                }
            }
            quot[i] = c;
        }
        if rem[..dd].iter().all(|c| c.is_zero()) {
            Some(IntPoly::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Exact division over `Z[q]`. Returns `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.len() < divisor.len() {
            return None;
        }
        let dd = divisor.len() - 1;
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = std::mem::take(&mut rem[i + dd]);
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dj) in divisor.coeffs[..dd].iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] -= &c * dj;
                }
            }
            quot[i] = c;
        }
        if rem[..dd].iter().all(|c| c.is_zero()) {
            Some(IntPoly::from_coeffs(quot))
        } else {
            None
        }
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn div_integer(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a / c).collect(),
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_integer(&c)
    }

    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.len() - 1;
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.pop().unwrap();
            let shift = rem.len() - dd;
            for c in rem.iter_mut() {
                *c *= &lc;
            }
            for (j, dj) in divisor.coeffs[..dd].iter().enumerate() {
                rem[shift + j] -= &top * dj;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        IntPoly::from_coeffs(rem)
    }

    /// Greatest common divisor over `Z[q]` (content included), normalized to a
    /// positive leading coefficient. Primitive remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cont)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    /// Evaluates `self(num / 2^shift) * 2^(shift * deg)` exactly.
    pub fn eval_dyadic_scaled(&self, num: &BigInt, shift: usize) -> BigInt {
        let Some(deg) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = self.coeffs[deg].clone();
        for i in (0..deg).rev() {
            acc = acc * num + (&self.coeffs[i] << (shift * (deg - i)));
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for IntPoly {
    /// Ascending powers, e.g. `1 - q^2 + 3*q^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{abs}*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn display_ascending() {
        assert_eq!(p(&[1, 0, -1]).to_string(), "1 - q^2");
        assert_eq!(p(&[0, -1, 0, 3]).to_string(), "-q + 3*q^3");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a: Vec<i64> = (0..40).map(|i| (i * 7919 % 201) - 100).collect();
        let b: Vec<i64> = (0..33).map(|i| (i * 104729 % 301) - 150).collect();
        let mut pa = p(&a);
        let pb = p(&b);
        // push coefficients past 64 bits
        pa = pa.scale(&(BigInt::from(1u8) << 90));
        assert_eq!(pa.mul_kronecker(&pb), pa.mul_schoolbook(&pb));
        assert_eq!(pa.neg().mul_kronecker(&pb), pa.neg().mul_schoolbook(&pb));
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 0, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact_monic(&[-1, 0, 1]), Some(a.clone()));
        assert_eq!(p(&[1, 0, 1]).div_exact_monic(&[1, 1]), None);
        assert_eq!(p(&[2, 2]).div_exact(&p(&[0, 2])), None);
    }

    #[test]
    fn gcd_includes_content() {
        let a = p(&[2, 2]).mul(&p(&[1, 0, 1]));
        let b = p(&[4, 4]).mul(&p(&[3, 1]));
        assert_eq!(a.gcd(&b), p(&[2, 2]));
        assert_eq!(p(&[0, 0, 3]).gcd(&p(&[0, 6])), p(&[0, 3]));
    }

    #[test]
    fn dyadic_evaluation() {
        // 1 - q^2 at q = 1/2 scaled by 2^(1*2): 4 - 1 = 3
        assert_eq!(p(&[1, 0, -1]).eval_dyadic_scaled(&BigInt::from(1), 1), BigInt::from(3));
    }
}
