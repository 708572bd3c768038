//! Cyclotomic polynomials. Every denominator produced by q-shifted factorials is a
//! product of `q` and cyclotomic factors, so the exact field keeps denominators in
//! that factored form.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use parking_lot::RwLock;

use super::poly::IntPoly;

fn cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the `d`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic(d: u32) -> Arc<Vec<i64>> {
    assert!(d >= 1);
    if let Some(c) = cache().read().get(&d) {
        return c.clone();
    }
    // q^d - 1 divided by every Phi_e with e | d, e < d
    let mut poly = vec![0i64; d as usize + 1];
    poly[0] = -1;
    poly[d as usize] = 1;
    let mut current = IntPoly::from_i64s(&poly);
    for e in divisors(d) {
        if e == d {
            continue;
        }
        let phi = cyclotomic(e);
        current = current
            .div_exact_monic(&phi)
            .expect("cyclotomic factor divides q^d - 1");
    }
    let coeffs: Vec<i64> = current
        .coeffs()
        .iter()
        .map(|c| i64::try_from(c.clone()).expect("cyclotomic coefficient fits in i64"))
        .collect();
    let arc = Arc::new(coeffs);
    cache().write().insert(d, arc.clone());
    arc
}

pub fn cyclotomic_poly(d: u32) -> IntPoly {
    IntPoly::from_i64s(&cyclotomic(d))
}

/// Cheap necessary condition for `Phi_d | p`: `p` must vanish at a primitive `d`-th
/// root of unity. Exact for `d <= 2`; otherwise a floating-point screen that never
/// rejects a true divisor.
pub fn may_divide(p: &IntPoly, approx: &[f64], d: u32) -> bool {
    match d {
        1 => p.eval_i64(1).is_zero(),
        2 => p.eval_i64(-1).is_zero(),
        _ => {
            let (s, c) = (TAU / d as f64).sin_cos();
            let (mut re, mut im) = (0.0f64, 0.0f64);
            let mut scale = 0.0f64;
            for &a in approx.iter().rev() {
                let nr = re * c - im * s + a;
                let ni = re * s + im * c;
                re = nr;
                im = ni;
                scale += a.abs();
            }
            if !scale.is_finite() {
                return true;
            }
            (re * re + im * im).sqrt() <= 1e-9 * scale.max(1.0)
        }
    }
}

/// Removes as many factors `Phi_d` as possible, up to `limit`, returning the count.
pub fn strip_factor(p: &mut IntPoly, approx: &mut Vec<f64>, d: u32, limit: u32) -> u32 {
    let phi = cyclotomic(d);
    let mut removed = 0;
    while removed < limit && p.len() > phi.len() - 1 && may_divide(p, approx, d) {
        match p.div_exact_monic(&phi) {
            Some(quot) => {
                *p = quot;
                *approx = p.to_f64_coeffs();
                removed += 1;
            }
            None => break,
        }
    }
    removed
}

/// Splits a nonzero polynomial into `q^v * prod Phi_d^e * rest` where `rest` has no
/// `q` or cyclotomic factor. The sign and content stay in `rest`.
pub fn factor_out(p: &IntPoly) -> (u32, Vec<(u32, u32)>, IntPoly) {
    assert!(!p.is_zero());
    let v = p.valuation();
    let mut rest = p.shift_down(v);
    let mut approx = rest.to_f64_coeffs();
    let mut factors = Vec::new();
    let mut d = 1u32;
    loop {
        let deg = rest.degree().unwrap_or(0) as u32;
        if deg == 0 {
            break;
        }
        // phi(d) >= sqrt(d / 2) bounds the search
        if (d as u64) > 2 * (deg as u64) * (deg as u64) + 2 {
            break;
        }
        if euler_phi(d) <= deg {
            let e = strip_factor(&mut rest, &mut approx, d, u32::MAX);
            if e > 0 {
                factors.push((d, e));
            }
        }
        d += 1;
    }
    (v as u32, factors, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic(1), vec![-1, 1]);
        assert_eq!(*cyclotomic(2), vec![1, 1]);
        assert_eq!(*cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic(105).contains(&-2));
    }

    #[test]
    fn product_over_divisors_is_q_pow_minus_one() {
        for n in [1u32, 6, 12, 30, 36] {
            let prod = divisors(n)
                .into_iter()
                .fold(IntPoly::one(), |acc, d| acc.mul(&cyclotomic_poly(d)));
            let mut expect = vec![0i64; n as usize + 1];
            expect[0] = -1;
            expect[n as usize] = 1;
            assert_eq!(prod, IntPoly::from_i64s(&expect));
        }
    }

    #[test]
    fn factor_out_recovers_structure() {
        // q^3 (1 - q^4)^2 (2q + 3)
        let one_minus_q4 = IntPoly::from_i64s(&[1, 0, 0, 0, -1]);
        let p = one_minus_q4
            .mul(&one_minus_q4)
            .mul(&IntPoly::from_i64s(&[3, 2]))
            .shift_up(3);
        let (v, factors, rest) = factor_out(&p);
        assert_eq!(v, 3);
        assert_eq!(factors, vec![(1, 2), (2, 2), (4, 2)]);
        assert_eq!(rest, IntPoly::from_i64s(&[3, 2]));
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }
}
