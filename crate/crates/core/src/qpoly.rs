//! Little q-Jacobi polynomials, q-disk polynomials and Jackson integrals.

use crate::kernel::{DiskCopy, Kernel, KernelError, Result};
use crate::ncalg::{presets, Element, NcElement};
use crate::scalar::{AlphaParam, Coeff, QBase, QExp, QProduct};

/// Base `q^2`, used by every formula on the algebras.
pub const DISK_STEP: i64 = 2;

/// Coefficients (lowest degree first) of `p_m(x; a, b; Q)` with `a = q^{a_exp}`,
/// `b = q^{b_exp}` and `Q = q^{step}`. The constant term is 1.
pub fn little_q_jacobi<B: QBase>(base: &B, m: u32, a_exp: QExp, b_exp: QExp, step: i64) -> Result<Vec<B::C>> {
    if step <= 0 {
        return Err(KernelError::Index(format!("base step must be positive, got {step}")));
    }
    let m_i = m as i64;
    (0..=m as usize)
        .map(|k| {
            let p = QProduct::one()
                .poch(QExp::Int(-m_i * step), step, k, 1)
                .poch(a_exp + b_exp + (m_i + 1) * step, step, k, 1)
                .poch(a_exp + step, step, k, -1)
                .poch(QExp::Int(step), step, k, -1)
                .q(QExp::Int(k as i64 * step));
            base.product(&p).map_err(KernelError::from)
        })
        .collect()
}

/// `P_m^{(alpha, beta)}(x; Q) = p_m(x; Q^alpha, Q^beta; Q)` with `Q = q^{step}`.
pub fn jacobi_p<B: QBase>(base: &B, m: u32, alpha: QExp, beta: QExp, step: i64) -> Result<Vec<B::C>> {
    little_q_jacobi(base, m, alpha * step, beta * step, step)
}

/// `int_0^1 p(u) u^alpha d_Q u` with `Q = q^{step}`; `u^n` contributes
/// `(1 - Q) / (1 - Q^{n + alpha + 1})`.
pub fn jackson_integral<B: QBase>(base: &B, p: &[B::C], alpha: QExp, step: i64) -> Result<B::C> {
    let mut total = B::C::zero();
    for (n, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = base.product(
            &QProduct::one()
                .one_minus(QExp::Int(step), 1)
                .one_minus((alpha + (n as i64 + 1)) * step, -1),
        )?;
        total = total.add(&c.mul(&w));
    }
    Ok(total)
}

pub fn poly_mul<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

pub fn poly_add<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

/// `sum_k p_k x^k` evaluated at an element.
fn eval_at<C: Coeff, E: Element<C>>(p: &[C], x: &E, unit: &E) -> E {
    let mut out = unit.zero_like();
    let mut power = unit.one_like();
    for (k, c) in p.iter().enumerate() {
        if k > 0 {
            power = power.times(x);
        }
        if !c.is_zero() {
            out = out.plus(&power.scaled(c));
        }
    }
    out
}

impl<B: QBase> Kernel<B> {
    /// Coefficients of `P_m^{(alpha, beta)}(x; q^2)`.
    pub fn disk_jacobi(&self, m: u32, alpha: AlphaParam, beta: i64) -> Result<Vec<B::C>> {
        jacobi_p(&self.base, m, alpha.exp(), QExp::Int(beta), DISK_STEP)
    }

    /// `R_{l,m}^{(alpha)}(z, z*; q^2)` in the disk algebra.
    pub fn qdisk(&self, l: u32, m: u32, alpha: AlphaParam) -> Result<NcElement<B::C>> {
        self.disk_poly(DiskCopy::Z, l, m, alpha)
    }

    /// `R_{l,m}^{(alpha)}` evaluated at `(z, z*)`, `(X2, X2*)` or `(Y2, Y2*)`; each
    /// pair satisfies the disk relation.
    pub fn disk_poly(&self, copy: DiskCopy, l: u32, m: u32, alpha: AlphaParam) -> Result<NcElement<B::C>> {
        self.check_alpha(alpha)?;
        self.disk.get_or_try(&(copy, l, m, alpha), || match copy {
            DiskCopy::Z => self.build_qdisk(l, m, alpha),
            DiskCopy::X2 => {
                let r = self.qdisk(l, m, alpha)?;
                let images = [
                    NcElement::generator(&self.x, "X2")?,
                    NcElement::generator(&self.x, "X2s")?,
                ];
                Ok(r.substitute(&images, &NcElement::one(&self.x)))
            }
            DiskCopy::Y2 => {
                let r = self.qdisk(l, m, alpha)?;
                let images = [
                    NcElement::generator(&self.y, "Y2")?,
                    NcElement::generator(&self.y, "Y2s")?,
                ];
                Ok(r.substitute(&images, &NcElement::one(&self.y)))
            }
        })
    }

    fn build_qdisk(&self, l: u32, m: u32, alpha: AlphaParam) -> Result<NcElement<B::C>> {
        let z = &self.z;
        let one = NcElement::one(z);
        let u = one.sub(&NcElement::from_word(z, B::C::one(), &[presets::z::Z, presets::z::ZS]));
        let deg = l.min(m);
        let p = self.disk_jacobi(deg, alpha, (l as i64 - m as i64).abs())?;
        let radial = eval_at(&p, &u, &one);
        Ok(if l >= m {
            let word = vec![presets::z::Z; (l - m) as usize];
            NcElement::from_word(z, B::C::one(), &word).mul(&radial)
        } else {
            let word = vec![presets::z::ZS; (m - l) as usize];
            radial.mul(&NcElement::from_word(z, B::C::one(), &word))
        })
    }

    /// `R_{l,m}^{(alpha)}(X1, X1*, 1 - X2 X2*; q^2)`, expanded as
    /// `sum_k p_k A^{l-m} (C - AB)^k C^{m-k}` (or the mirrored form for `l < m`).
    pub fn qdisk_three(&self, l: u32, m: u32, alpha: AlphaParam) -> Result<NcElement<B::C>> {
        self.check_alpha(alpha)?;
        self.disk3.get_or_try(&(l, m, alpha), || {
            let x = &self.x;
            let a = NcElement::generator(x, "X1")?;
            let b = NcElement::generator(x, "X1s")?;
            let c = self.c_element();
            let deg = l.min(m);
            let p = self.disk_jacobi(deg, alpha, (l as i64 - m as i64).abs())?;
            let t = c.sub(&a.mul(&b));
            let mut radial = NcElement::zero(x);
            for (k, coef) in p.iter().enumerate() {
                let term = t.pow(k as u32).mul(&c.pow(deg - k as u32));
                radial = radial.add(&term.scale(coef));
            }
            Ok(if l >= m {
                a.pow(l - m).mul(&radial)
            } else {
                radial.mul(&b.pow(m - l))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, Scalar};

    fn q(e: i64) -> Scalar {
        Scalar::q_pow(e)
    }

    fn om(e: i64) -> Scalar {
        Scalar::one_minus_q_pow(e)
    }

    #[test]
    fn low_degree_jacobi() {
        let p0 = little_q_jacobi(&Exact, 0, QExp::Int(3), QExp::Int(1), 1).unwrap();
        assert_eq!(p0, vec![Scalar::one()]);
        // m = 1, a = q^3, b = q: 1 - (1 - a b q^2)/(1 - a q) x
        let p1 = little_q_jacobi(&Exact, 1, QExp::Int(3), QExp::Int(1), 1).unwrap();
        assert_eq!(p1[1], (om(6) / om(4)).neg());
        for alpha in 0..4 {
            let p = jacobi_p(&Exact, 1, QExp::Int(alpha), QExp::Int(0), 2).unwrap();
            assert_eq!(p, vec![Scalar::one(), (om(2 * alpha + 4) / om(2 * alpha + 2)).neg()]);
        }
    }

    #[test]
    fn pole_is_reported() {
        // a q = 1 makes (aq; q)_1 vanish
        assert!(little_q_jacobi(&Exact, 1, QExp::Int(-1), QExp::Int(0), 1).is_err());
    }

    #[test]
    fn jackson_examples() {
        let one = [Scalar::one()];
        assert_eq!(jackson_integral(&Exact, &one, QExp::Int(0), 1).unwrap(), Scalar::one());
        for alpha in 0..3 {
            assert_eq!(
                jackson_integral(&Exact, &one, QExp::Int(alpha), 2).unwrap(),
                om(2) / om(2 * alpha + 2)
            );
            let u = [Scalar::zero(), Scalar::one()];
            assert_eq!(
                jackson_integral(&Exact, &u, QExp::Int(alpha), 2).unwrap(),
                om(2) / om(2 * alpha + 4)
            );
        }
    }

    #[test]
    fn jackson_matches_truncated_sum() {
        // c (1 - Q) sum f(Q^k) Q^k at q = 0.6, Q = q^2, f(u) = u^alpha (1 + 2u - u^2)
        let qv: f64 = 0.6;
        let big_q = qv * qv;
        let alpha = 1.5;
        let p = [1.0, 2.0, -1.0];
        let f = |u: f64| u.powf(alpha) * (p[0] + p[1] * u + p[2] * u * u);
        let direct: f64 = (1.0 - big_q) * (0..400).map(|k| f(big_q.powi(k)) * big_q.powi(k)).sum::<f64>();
        let base = crate::scalar::Numeric::new(qv).unwrap();
        let closed = jackson_integral(&base, &p, QExp::Real(alpha), 2).unwrap();
        assert!((direct - closed).abs() < 1e-12);
    }

    #[test]
    fn qdisk_examples() {
        let k = Kernel::exact();
        let a = AlphaParam::Exact(1);
        let z = k.disk_algebra();
        assert_eq!(k.qdisk(0, 0, a).unwrap(), NcElement::one(z));
        assert_eq!(k.qdisk(1, 0, a).unwrap(), NcElement::generator(z, "z").unwrap());
        for alpha in 1..3 {
            let r11 = k.qdisk(1, 1, AlphaParam::Exact(alpha)).unwrap();
            let u = NcElement::one(z).sub(&NcElement::from_word(z, Scalar::one(), &[0, 1]));
            let expect = NcElement::one(z).sub(&u.scale(&(om(2 * alpha + 4) / om(2 * alpha + 2))));
            assert_eq!(r11, expect);
        }
    }

    #[test]
    fn qdisk_star_symmetry_and_shape() {
        let k = Kernel::exact();
        for alpha in [AlphaParam::Exact(0), AlphaParam::Exact(2)] {
            for l in 0..=4u32 {
                for m in 0..=4u32 {
                    let r = k.qdisk(l, m, alpha).unwrap();
                    assert_eq!(r.star(), k.qdisk(m, l, alpha).unwrap(), "({l},{m})");
                    let top: Vec<u8> = std::iter::repeat_n(0, l as usize)
                        .chain(std::iter::repeat_n(1, m as usize))
                        .collect();
                    assert!(!r.coefficient(&top).is_zero());
                    for w in r.terms().keys() {
                        let a = w.iter().filter(|&&g| g == 0).count() as i64;
                        let b = w.len() as i64 - a;
                        assert_eq!(a - b, l as i64 - m as i64);
                        assert!(a <= l as i64);
                    }
                }
            }
        }
    }

    #[test]
    fn qdisk_three_examples() {
        let k = Kernel::exact();
        let x = k.x_algebra();
        let a = AlphaParam::Exact(1);
        assert_eq!(k.qdisk_three(0, 0, a).unwrap(), NcElement::one(x));
        assert_eq!(k.qdisk_three(1, 0, a).unwrap(), NcElement::generator(x, "X1").unwrap());
        let c = k.c_element();
        let ab = NcElement::generator(x, "X1")
            .unwrap()
            .mul(&NcElement::generator(x, "X1s").unwrap());
        let expect = c.sub(&c.sub(&ab).scale(&(om(6) / om(4))));
        assert_eq!(k.qdisk_three(1, 1, a).unwrap(), expect);
    }

    #[test]
    fn little_jacobi_orthogonality_sample() {
        // spot check; the full range lives in the acceptance suite
        let base = Exact;
        let (alpha, beta) = (1i64, 2i64);
        let weight: Vec<Scalar> = (1..=beta).fold(vec![Scalar::one()], |acc, i| {
            poly_mul(&acc, &[Scalar::one(), q(i).neg()])
        });
        for l in 0..3 {
            for m in 0..3 {
                let pl = jacobi_p(&base, l, QExp::Int(alpha), QExp::Int(beta), 1).unwrap();
                let pm = jacobi_p(&base, m, QExp::Int(alpha), QExp::Int(beta), 1).unwrap();
                let integrand = poly_mul(&poly_mul(&pl, &pm), &weight);
                let value = jackson_integral(&base, &integrand, QExp::Int(alpha), 1).unwrap();
                if l != m {
                    assert!(value.is_zero());
                }
            }
        }
    }
}
