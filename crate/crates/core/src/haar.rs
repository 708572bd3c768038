//! The functional `h_(alpha)` on the disk algebra, the partial functional `h~` on `X`,
//! the character `epsilon`, the norms `c_{l,m}` and expansions in the q-disk basis.

use std::collections::BTreeMap;

use crate::kernel::{Kernel, KernelError, Result};
use crate::ncalg::{presets, NcElement, Word};
use crate::qpoly::{jackson_integral, poly_add, DISK_STEP};
use crate::scalar::{AlphaParam, Coeff, QBase, QExp, QProduct};

/// Coefficients with respect to the basis `R_{l,m}`, keyed by `(l, m)`.
pub type RExpansion<C> = BTreeMap<(u32, u32), C>;

/// `(a, b)` for the normal monomial `z^a z*^b`.
fn z_exponents(w: &[u8]) -> (u32, u32) {
    let a = w.iter().filter(|&&g| g == presets::z::Z).count() as u32;
    (a, w.len() as u32 - a)
}

/// `q^{2k(alpha+1)} (q^2;q^2)_k / (q^{2(alpha+2)};q^2)_k`
pub fn h_value_product(k: u32, alpha: AlphaParam) -> QProduct {
    let a = alpha.exp();
    QProduct::one()
        .q((a + 1) * (2 * k as i64))
        .poch(QExp::Int(2), 2, k as usize, 1)
        .poch((a + 2) * 2, 2, k as usize, -1)
}

/// `c_{l,m}^{(alpha)}` as a formal product.
pub fn norm_c_product(l: u32, m: u32, alpha: AlphaParam) -> QProduct {
    let a = alpha.exp();
    QProduct::one()
        .one_minus((a + 1) * 2, 1)
        .q((a + 1) * (2 * m as i64))
        .one_minus((a + (l + m + 1) as i64) * 2, -1)
        .poch(QExp::Int(2), 2, l as usize, 1)
        .poch(QExp::Int(2), 2, m as usize, 1)
        .poch((a + 1) * 2, 2, l as usize, -1)
        .poch((a + 1) * 2, 2, m as usize, -1)
}

/// `q^{2k alpha} (q^2;q^2)_k / (q^{2(alpha+1)};q^2)_k`, the scalar in `h~`.
pub fn htilde_factor_product(k: u32, alpha: AlphaParam) -> QProduct {
    let a = alpha.exp();
    QProduct::one()
        .q(a * (2 * k as i64))
        .poch(QExp::Int(2), 2, k as usize, 1)
        .poch((a + 1) * 2, 2, k as usize, -1)
}

impl<B: QBase> Kernel<B> {
    fn expect_disk(&self, f: &NcElement<B::C>) -> Result<()> {
        if f.algebra().id() == self.z.id() {
            Ok(())
        } else {
            Err(KernelError::Algebra(crate::ncalg::AlgebraError::AlgebraMismatch(
                f.algebra().name().to_string(),
                self.z.name().to_string(),
            )))
        }
    }

    /// `h_(alpha)(z^k z*^k)`
    pub fn h_value(&self, k: u32, alpha: AlphaParam) -> Result<B::C> {
        self.check_alpha(alpha)?;
        self.h_values
            .get_or_try(&(k, alpha), || Ok(self.base.product(&h_value_product(k, alpha))?))
    }

    /// The functional `h_(alpha)` on the disk algebra.
    pub fn h(&self, f: &NcElement<B::C>, alpha: AlphaParam) -> Result<B::C> {
        self.expect_disk(f)?;
        let mut total = B::C::zero();
        for (w, c) in f.terms() {
            let (a, b) = z_exponents(w);
            if a == b {
                total = total.add(&c.mul(&self.h_value(a, alpha)?));
            }
        }
        Ok(total)
    }

    /// The character with `epsilon(z) = epsilon(z*) = 1`.
    pub fn epsilon(&self, f: &NcElement<B::C>) -> Result<B::C> {
        self.expect_disk(f)?;
        Ok(f.terms().values().fold(B::C::zero(), |acc, c| acc.add(c)))
    }

    pub fn norm_c(&self, l: u32, m: u32, alpha: AlphaParam) -> Result<B::C> {
        self.check_alpha(alpha)?;
        Ok(self.base.product(&norm_c_product(l, m, alpha))?)
    }

    /// Coefficients of `f` in the basis `R_{l,m}^{(alpha)}` via
    /// `h(R_{l,m}^* f) / c_{l,m}`.
    pub fn expand_in_r_basis(&self, f: &NcElement<B::C>, alpha: AlphaParam) -> Result<RExpansion<B::C>> {
        self.expect_disk(f)?;
        self.check_alpha(alpha)?;
        let mut candidates = std::collections::BTreeSet::new();
        for w in f.terms().keys() {
            let (a, b) = z_exponents(w);
            for i in 0..=a.min(b) {
                candidates.insert((a - i, b - i));
            }
        }
        let mut out = RExpansion::new();
        for (l, m) in candidates {
            let r_star = self.qdisk(m, l, alpha)?;
            let inner = self.h(&r_star.mul(f), alpha)?;
            if inner.is_zero() {
                continue;
            }
            let c_inv = self.base.product(&norm_c_product(l, m, alpha).inverse())?;
            out.insert((l, m), inner.mul(&c_inv));
        }
        Ok(out)
    }

    /// Same coefficients by peeling off leading terms: `R_{a,b}` is the only basis
    /// element with a `z^a z*^b` term among those of degree `a + b` or less.
    pub fn expand_triangular(&self, f: &NcElement<B::C>, alpha: AlphaParam) -> Result<RExpansion<B::C>> {
        self.expect_disk(f)?;
        let mut rest = f.clone();
        let mut out = RExpansion::new();
        while let Some((w, c)) = rest
            .terms()
            .iter()
            .max_by_key(|(w, _)| w.len())
            .map(|(w, c)| (w.clone(), c.clone()))
        {
            let (a, b) = z_exponents(&w);
            let r = self.qdisk(a, b, alpha)?;
            let lead = r.coefficient(&w);
            let coef = c.mul(&lead.inv().ok_or(crate::scalar::ScalarError::DivisionByZero)?);
            rest = rest.sub(&r.scale(&coef));
            rest.remove_term(&w);
            out.insert((a, b), coef);
        }
        Ok(out)
    }

    /// `sum coeff(l,m) R_{l,m}`
    pub fn reconstruct(&self, e: &RExpansion<B::C>, alpha: AlphaParam) -> Result<NcElement<B::C>> {
        let mut out = NcElement::zero(&self.z);
        for (&(l, m), c) in e {
            out = out.add(&self.qdisk(l, m, alpha)?.scale(c));
        }
        Ok(out)
    }

    /// The partial functional `h~_(alpha)` on `X`: on a normal monomial
    /// `X2^a X2*^d X1^b X1*^c` it gives `delta_{bc} X2^a X2*^d (1 - X2 X2*)^b` times
    /// [`htilde_factor_product`].
    pub fn htilde(&self, f: &NcElement<B::C>, alpha: AlphaParam) -> Result<NcElement<B::C>> {
        self.check_alpha(alpha)?;
        if f.algebra().id() != self.x.id() {
            return Err(KernelError::Algebra(crate::ncalg::AlgebraError::AlgebraMismatch(
                f.algebra().name().to_string(),
                self.x.name().to_string(),
            )));
        }
        use presets::x::{X1, X1S, X2, X2S};
        let c = self.c_element();
        let mut c_powers = vec![NcElement::one(&self.x)];
        let mut grouped: BTreeMap<u32, BTreeMap<Word, B::C>> = BTreeMap::new();
        for (w, coef) in f.terms() {
            let split = w.iter().position(|&g| g != X2 && g != X2S).unwrap_or(w.len());
            let b = w[split..].iter().filter(|&&g| g == X1).count();
            let d = w[split..].iter().filter(|&&g| g == X1S).count();
            if b != d {
                continue;
            }
            crate::ncalg::add_term(
                grouped.entry(b as u32).or_default(),
                Word::from_slice(&w[..split]),
                coef.clone(),
            );
        }
        let mut out = NcElement::zero(&self.x);
        for (k, terms) in grouped {
            while c_powers.len() <= k as usize {
                let next = c_powers.last().unwrap().mul(&c);
                c_powers.push(next);
            }
            let factor = self.base.product(&htilde_factor_product(k, alpha))?;
            let p = NcElement::from_normal_terms(&self.x, terms);
            out = out.add(&p.mul(&c_powers[k as usize]).scale(&factor));
        }
        Ok(out)
    }

    /// Drops every `z^a z*^b` with `a != b`.
    pub fn radial_project(&self, f: &NcElement<B::C>) -> Result<NcElement<B::C>> {
        self.expect_disk(f)?;
        Ok(NcElement::from_normal_terms(
            &self.z,
            f.terms()
                .iter()
                .filter(|(w, _)| {
                    let (a, b) = z_exponents(w);
                    a == b
                })
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        ))
    }

    /// Writes a radial element as a polynomial in `u = 1 - z z*` (lowest degree first).
    pub fn radial_to_u(&self, f: &NcElement<B::C>) -> Result<Vec<B::C>> {
        self.expect_disk(f)?;
        let zzs = NcElement::from_word(&self.z, B::C::one(), &[presets::z::Z, presets::z::ZS]);
        let mut powers = vec![NcElement::one(&self.z)];
        let mut rest = f.clone();
        let mut u_poly: Vec<B::C> = Vec::new();
        while let Some((w, c)) = rest
            .terms()
            .iter()
            .max_by_key(|(w, _)| w.len())
            .map(|(w, c)| (w.clone(), c.clone()))
        {
            let (a, b) = z_exponents(&w);
            if a != b {
                return Err(KernelError::Index(format!(
                    "element is not radial: contains z^{a} zs^{b}"
                )));
            }
            while powers.len() <= a as usize {
                let next = powers.last().unwrap().mul(&zzs);
                powers.push(next);
            }
            let lead = powers[a as usize].coefficient(&w);
            let coef = c.mul(&lead.inv().ok_or(crate::scalar::ScalarError::DivisionByZero)?);
            rest = rest.sub(&powers[a as usize].scale(&coef));
            rest.remove_term(&w);
            // (zz*)^a = (1 - u)^a
            let mut binom = vec![B::C::one()];
            for _ in 0..a {
                binom = crate::qpoly::poly_mul(&binom, &[B::C::one(), B::C::one().neg()]);
            }
            let scaled: Vec<B::C> = binom.iter().map(|x| x.mul(&coef)).collect();
            u_poly = poly_add(&u_poly, &scaled);
        }
        while u_poly.last().is_some_and(|c| c.is_zero()) {
            u_poly.pop();
        }
        Ok(u_poly)
    }

    /// The angular average followed by the Jackson integral against
    /// `(1 - zz*)^alpha d_{q^2}(1 - zz*)`.
    pub fn disk_integral(&self, f: &NcElement<B::C>, alpha: AlphaParam) -> Result<B::C> {
        self.check_alpha(alpha)?;
        let u = self.radial_to_u(&self.radial_project(f)?)?;
        jackson_integral(&self.base, &u, alpha.exp(), DISK_STEP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn om(e: i64) -> Scalar {
        Scalar::one_minus_q_pow(e)
    }

    fn word(alg: &std::sync::Arc<crate::ncalg::Algebra<Scalar>>, w: &[u8]) -> NcElement<Scalar> {
        NcElement::from_word(alg, Scalar::one(), w)
    }

    #[test]
    fn h_examples() {
        let k = Kernel::exact();
        let z = k.disk_algebra();
        for a in 0..3 {
            let alpha = AlphaParam::Exact(a);
            assert_eq!(k.h(&NcElement::one(z), alpha).unwrap(), Scalar::one());
            assert!(k.h(&word(z, &[0]), alpha).unwrap().is_zero());
            let expect = Scalar::q_pow(2 * a + 2) * om(2) / om(2 * a + 4);
            assert_eq!(k.h(&word(z, &[0, 1]), alpha).unwrap(), expect);
        }
    }

    #[test]
    fn epsilon_examples() {
        let k = Kernel::exact();
        let z = k.disk_algebra();
        assert_eq!(k.epsilon(&word(z, &[0, 1])).unwrap(), Scalar::one());
        assert_eq!(k.epsilon(&word(z, &[1, 0])).unwrap(), Scalar::one());
        let r = k.qdisk(2, 1, AlphaParam::Exact(1)).unwrap();
        assert_eq!(k.epsilon(&r).unwrap(), Scalar::one());
    }

    #[test]
    fn norm_examples() {
        let k = Kernel::exact();
        for a in 0..3 {
            let alpha = AlphaParam::Exact(a);
            assert_eq!(k.norm_c(0, 0, alpha).unwrap(), Scalar::one());
            assert_eq!(k.norm_c(1, 0, alpha).unwrap(), om(2) / om(2 * a + 4));
            assert_eq!(
                k.norm_c(0, 1, alpha).unwrap(),
                Scalar::q_pow(2 * a + 2) * om(2) / om(2 * a + 4)
            );
        }
    }

    #[test]
    fn expansion_examples() {
        let k = Kernel::exact();
        let z = k.disk_algebra();
        let alpha = AlphaParam::Exact(1);
        let e = k.expand_in_r_basis(&NcElement::one(z), alpha).unwrap();
        assert_eq!(e, RExpansion::from([((0, 0), Scalar::one())]));
        let e = k.expand_in_r_basis(&word(z, &[0]), alpha).unwrap();
        assert_eq!(e, RExpansion::from([((1, 0), Scalar::one())]));
        let e = k.expand_in_r_basis(&word(z, &[0, 1]), alpha).unwrap();
        let a0 = Scalar::q_pow(4) * om(2) / om(6);
        let a1 = om(4) / om(6);
        assert_eq!(e, RExpansion::from([((0, 0), a0.clone()), ((1, 1), a1.clone())]));
        assert_eq!(a0 + a1, Scalar::one());
    }

    #[test]
    fn expansion_routes_agree() {
        let k = Kernel::exact();
        let z = k.disk_algebra();
        let alpha = AlphaParam::Exact(2);
        let f = word(z, &[1, 0, 0, 1, 1])
            .add(&word(z, &[0, 1]).scale(&Scalar::q_pow(3)))
            .add(&word(z, &[1, 1, 0, 0]));
        let a = k.expand_in_r_basis(&f, alpha).unwrap();
        let b = k.expand_triangular(&f, alpha).unwrap();
        assert_eq!(a, b);
        assert_eq!(k.reconstruct(&a, alpha).unwrap(), f);
    }

    #[test]
    fn htilde_examples() {
        let k = Kernel::exact();
        let x = k.x_algebra();
        let alpha = AlphaParam::Exact(2);
        assert_eq!(k.htilde(&NcElement::one(x), alpha).unwrap(), NcElement::one(x));
        assert!(k
            .htilde(&NcElement::generator(x, "X1").unwrap(), alpha)
            .unwrap()
            .is_zero());
        let x1x1s = word(x, &[presets::x::X1, presets::x::X1S]);
        let expect = k.c_element().scale(&(Scalar::q_pow(4) * om(2) / om(6)));
        assert_eq!(k.htilde(&x1x1s, alpha).unwrap(), expect);
    }

    #[test]
    fn radial_examples() {
        let k = Kernel::exact();
        let z = k.disk_algebra();
        assert!(k.radial_project(&word(z, &[0])).unwrap().is_zero());
        let zzs = word(z, &[0, 1]);
        assert_eq!(k.radial_project(&zzs).unwrap(), zzs);
        let f = word(z, &[0, 0, 1]).add(&zzs.scale(&Scalar::from_i64(3)));
        assert_eq!(k.radial_project(&f).unwrap(), zzs.scale(&Scalar::from_i64(3)));
        // zz* = 1 - u
        assert_eq!(k.radial_to_u(&zzs).unwrap(), vec![Scalar::one(), Scalar::from_i64(-1)]);
        assert!(k.radial_to_u(&word(z, &[0])).is_err());
    }

    #[test]
    fn h_is_a_rescaled_disk_integral() {
        let k = Kernel::exact();
        let z = k.disk_algebra();
        let alpha = AlphaParam::Exact(1);
        let f = word(z, &[1, 1, 0, 0]).add(&word(z, &[0, 1, 1]));
        let scale = om(4) / om(2);
        assert_eq!(k.h(&f, alpha).unwrap(), scale * k.disk_integral(&f, alpha).unwrap());
    }

    #[test]
    fn exact_backend_rejects_fractional_alpha() {
        let k = Kernel::exact();
        assert!(k.norm_c(1, 1, AlphaParam::Float(0.5)).is_err());
    }
}
