//! Instances of the addition formula in `X ⊗ Y` and the identities derived from it.

use crate::kernel::{DiskCopy, Kernel, KernelError, Result};
use crate::ncalg::{presets, AntiAutomorphism, NcElement, TensorElement};
use crate::scalar::{AlphaParam, Coeff, QBase, QExp};

/// `Omega = -q X1 ⊗ Y1* + X2 ⊗ Y2` and its star.
#[derive(Clone, Debug)]
pub struct OmegaPair<C: Coeff> {
    pub omega: TensorElement<C>,
    pub omega_star: TensorElement<C>,
}

/// Letters of a polynomial in `A = X1`, `B = X1*`, `C = 1 - X2 X2*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeVar {
    A,
    B,
    C,
}

/// An ordered polynomial in `A`, `B`, `C`, with words multiplied in the order given.
#[derive(Clone, Debug)]
pub struct ThreeVarPoly<C> {
    pub terms: Vec<(C, Vec<ThreeVar>)>,
}

impl<C: Coeff> ThreeVarPoly<C> {
    /// Twice the degree under `deg A = deg B = 1/2`, `deg C = 1`; `None` for the zero
    /// polynomial and an error when the terms disagree.
    pub fn twice_degree(&self) -> Result<Option<u32>> {
        let mut deg = None;
        for (c, w) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let d = w.iter().map(|v| if *v == ThreeVar::C { 2 } else { 1 }).sum::<u32>();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(KernelError::Index(format!(
                        "polynomial is not homogeneous (degrees {} and {})",
                        e as f64 / 2.0,
                        d as f64 / 2.0
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    fn evaluate(&self, a: &NcElement<C>, b: &NcElement<C>, c: &NcElement<C>) -> NcElement<C> {
        let one = NcElement::one(a.algebra());
        let mut out = NcElement::zero(a.algebra());
        for (k, w) in &self.terms {
            let mono = w.iter().fold(one.clone(), |acc, v| {
                acc.mul(match v {
                    ThreeVar::A => a,
                    ThreeVar::B => b,
                    ThreeVar::C => c,
                })
            });
            out = out.add(&mono.scale(k));
        }
        out
    }
}

/// Outcome of [`Kernel::verify_identity_2_3`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorIdentityReport {
    /// The `(i, j)` sum with the `q^{2(i-j)}` phase equals the `a`-weighted sum.
    pub phased: bool,
    /// The same sum without the phase equals the `a`-weighted sum.
    pub unphased: bool,
    /// `(h~ ⊗ id)` of the product of two right-hand sides of the addition formula
    /// equals the `a`-weighted sum.
    pub route: bool,
    /// `(id ⊗ sigma)` maps both sides to the displayed `sigma` forms.
    pub sigma: bool,
}

impl TensorIdentityReport {
    pub fn holds(&self) -> bool {
        self.phased && self.route && self.sigma
    }
}

impl<B: QBase> Kernel<B> {
    fn x_gen(&self, name: &str) -> NcElement<B::C> {
        NcElement::generator(&self.x, name).expect("preset generator")
    }

    fn y_gen(&self, name: &str) -> NcElement<B::C> {
        NcElement::generator(&self.y, name).expect("preset generator")
    }

    /// `(-q)^k`
    fn minus_q_pow(&self, k: i64) -> B::C {
        let v = self.base.q_pow(QExp::Int(k));
        if k.rem_euclid(2) == 1 {
            v.neg()
        } else {
            v
        }
    }

    pub fn build_omega(&self) -> OmegaPair<B::C> {
        let minus_q = self.minus_q_pow(1);
        let omega = TensorElement::pure(&self.x_gen("X1"), &self.y_gen("Y1s"))
            .scale(&minus_q)
            .add(&TensorElement::pure(&self.x_gen("X2"), &self.y_gen("Y2")));
        let omega_star = omega.star();
        OmegaPair { omega, omega_star }
    }

    /// `R_{l,m}^{(alpha)}(Omega, Omega*; q^2)`
    pub fn addition_lhs(&self, l: u32, m: u32, alpha: AlphaParam) -> Result<TensorElement<B::C>> {
        let r = self.qdisk(l, m, alpha)?;
        let pair = self.build_omega();
        let unit = TensorElement::one(&self.x, &self.y);
        Ok(r.substitute(&[pair.omega, pair.omega_star], &unit))
    }

    /// The double sum of the addition formula, each factor in the written order.
    pub fn addition_rhs(&self, l: u32, m: u32, alpha: AlphaParam) -> Result<TensorElement<B::C>> {
        self.check_alpha_shifted(alpha)?;
        let y1 = self.y_gen("Y1");
        let y1s = self.y_gen("Y1s");
        let mut out = TensorElement::zero(&self.x, &self.y);
        for r in 0..=l {
            for s in 0..=m {
                let shifted = alpha.shift((r + s) as i64);
                let coef = self.c_addition_coeff(l, m, r, s, alpha)?;
                let x_part = self
                    .disk_poly(DiskCopy::X2, l - r, m - s, shifted)?
                    .mul(&self.qdisk_three(r, s, alpha.shift(-1))?);
                let y_part = self
                    .disk_poly(DiskCopy::Y2, l - r, m - s, shifted)?
                    .mul(&y1.pow(s))
                    .mul(&y1s.pow(r))
                    .scale(&self.minus_q_pow(r as i64 - s as i64));
                out = out.add(&TensorElement::pure(&x_part, &y_part).scale(&coef));
            }
        }
        Ok(out)
    }

    /// One instance of the addition formula.
    pub fn verify_addition(&self, l: u32, m: u32, alpha: AlphaParam) -> Result<bool> {
        Ok(self
            .addition_lhs(l, m, alpha)?
            .close_to(&self.addition_rhs(l, m, alpha)?))
    }

    fn expect_x2_poly(&self, p: &NcElement<B::C>) -> Result<()> {
        use presets::x::{X2, X2S};
        if p.algebra().id() != self.x.id() || p.terms().keys().any(|w| w.iter().any(|&g| g != X2 && g != X2S)) {
            return Err(KernelError::Index("expected a polynomial in X2, X2s".into()));
        }
        Ok(())
    }

    /// Checks `h~(p1 p3(X1, X1*, C) p2) = h_(alpha-1)(p3(z, z*, 1)) p1 C^k p2`.
    pub fn verify_lemma2(
        &self,
        p1: &NcElement<B::C>,
        p2: &NcElement<B::C>,
        p3: &ThreeVarPoly<B::C>,
        alpha: AlphaParam,
    ) -> Result<bool> {
        self.check_alpha_shifted(alpha)?;
        self.expect_x2_poly(p1)?;
        self.expect_x2_poly(p2)?;
        let twice = p3.twice_degree()?;
        let p3x = p3.evaluate(&self.x_gen("X1"), &self.x_gen("X1s"), &self.c_element());
        let lhs = self.htilde(&p1.mul(&p3x).mul(p2), alpha)?;
        let p3z = p3.evaluate(
            &NcElement::generator(&self.z, "z")?,
            &NcElement::generator(&self.z, "zs")?,
            &NcElement::one(&self.z),
        );
        let hz = self.h(&p3z, alpha.shift(-1))?;
        let rhs = match twice {
            None => NcElement::zero(&self.x),
            Some(t) if t % 2 == 1 => {
                // only odd words in X1, X1*: both functionals vanish
                if !hz.is_zero() {
                    return Ok(false);
                }
                NcElement::zero(&self.x)
            }
            Some(t) => p1.mul(&self.c_element().pow(t / 2)).mul(p2).scale(&hz),
        };
        Ok(lhs.close_to(&rhs))
    }

    /// `h~` of the quadruple product against `delta_{ip} delta_{jr} c_{j,i}^{(alpha-1)}`
    /// times `R (1 - X2 X2*)^{i+j} R'^*`.
    #[allow(clippy::too_many_arguments)]
    pub fn verify_corollary3(
        &self,
        (l, m): (u32, u32),
        (lp, mp): (u32, u32),
        (i, j): (u32, u32),
        (p, r): (u32, u32),
        alpha: AlphaParam,
    ) -> Result<bool> {
        self.check_alpha_shifted(alpha)?;
        if i > l || j > m || p > lp || r > mp {
            return Err(KernelError::Index(format!(
                "need i <= l, j <= m, p <= l', r <= m' (got ({l},{m}), ({lp},{mp}), ({i},{j}), ({p},{r}))"
            )));
        }
        let left = self.disk_poly(DiskCopy::X2, l - i, m - j, alpha.shift((i + j) as i64))?;
        let right_star = self.disk_poly(DiskCopy::X2, mp - r, lp - p, alpha.shift((p + r) as i64))?;
        let product = left
            .mul(&self.qdisk_three(i, j, alpha.shift(-1))?)
            .mul(&self.qdisk_three(p, r, alpha.shift(-1))?.star())
            .mul(&right_star);
        let lhs = self.htilde(&product, alpha)?;
        let rhs = if i == p && j == r {
            let c = self.norm_c(j, i, alpha.shift(-1))?;
            left.mul(&self.c_element().pow(i + j)).mul(&right_star).scale(&c)
        } else {
            NcElement::zero(&self.x)
        };
        Ok(lhs.close_to(&rhs))
    }

    /// The anti-automorphism of `Y` exchanging `Y2` and `Y2*` and fixing `Y1`, `Y1*`.
    pub fn sigma(&self) -> Result<AntiAutomorphism<B::C>> {
        Ok(AntiAutomorphism::new(
            &self.y,
            vec![self.y_gen("Y2s"), self.y_gen("Y1"), self.y_gen("Y1s"), self.y_gen("Y2")],
        )?)
    }

    fn tensor_identity_sum(
        &self,
        (l, m): (u32, u32),
        (lp, mp): (u32, u32),
        alpha: AlphaParam,
        phased: bool,
        swap_y: bool,
    ) -> Result<TensorElement<B::C>> {
        let cx = self.c_element();
        let cy = NcElement::one(&self.y).sub(&self.y_gen("Y2").mul(&self.y_gen("Y2s")));
        let mut out = TensorElement::zero(&self.x, &self.y);
        for i in 0..=l.min(lp) {
            for j in 0..=m.min(mp) {
                let shifted = alpha.shift((i + j) as i64);
                let mut w = self
                    .c_addition_coeff(l, m, i, j, alpha)?
                    .mul(&self.c_addition_coeff(lp, mp, i, j, alpha)?)
                    .mul(&self.norm_c(j, i, alpha.shift(-1))?);
                if phased {
                    w = w.mul(&self.base.q_pow(QExp::Int(2 * (i as i64 - j as i64))));
                }
                let n = i + j;
                let x_part = self
                    .disk_poly(DiskCopy::X2, l - i, m - j, shifted)?
                    .mul(&cx.pow(n))
                    .mul(&self.disk_poly(DiskCopy::X2, mp - j, lp - i, shifted)?);
                let (first, second) = if swap_y {
                    ((lp - i, mp - j), (m - j, l - i))
                } else {
                    ((l - i, m - j), (mp - j, lp - i))
                };
                let y_part = self
                    .disk_poly(DiskCopy::Y2, first.0, first.1, shifted)?
                    .mul(&cy.pow(n))
                    .mul(&self.disk_poly(DiskCopy::Y2, second.0, second.1, shifted)?);
                out = out.add(&TensorElement::pure(&x_part, &y_part).scale(&w));
            }
        }
        Ok(out)
    }

    /// The `h~ ⊗ id` image of a product of two addition formulas, in several forms; see [`TensorIdentityReport`].
    pub fn verify_identity_2_3(
        &self,
        l: u32,
        m: u32,
        lp: u32,
        mp: u32,
        alpha: AlphaParam,
    ) -> Result<TensorIdentityReport> {
        self.check_alpha_shifted(alpha)?;
        let row = self.linearization_row(l, m, lp, mp, alpha)?;
        let mut rhs = TensorElement::zero(&self.x, &self.y);
        let mut rhs_sigma = TensorElement::zero(&self.x, &self.y);
        for (&(lpp, mpp), a) in row.iter() {
            let rx = self.disk_poly(DiskCopy::X2, lpp, mpp, alpha)?;
            let ry = self.disk_poly(DiskCopy::Y2, lpp, mpp, alpha)?;
            rhs = rhs.add(&TensorElement::pure(&rx, &ry).scale(a));
            rhs_sigma = rhs_sigma.add(&TensorElement::pure(&rx, &ry.star()).scale(a));
        }
        let phased_sum = self.tensor_identity_sum((l, m), (lp, mp), alpha, true, false)?;
        let unphased_sum = self.tensor_identity_sum((l, m), (lp, mp), alpha, false, false)?;

        let product = self
            .addition_rhs(l, m, alpha)?
            .mul(&self.addition_rhs(lp, mp, alpha)?.star());
        let htilde_err = std::cell::RefCell::new(None);
        let route_value = product.map_left(|a| {
            self.htilde(a, alpha).unwrap_or_else(|e| {
                *htilde_err.borrow_mut() = Some(e.to_string());
                NcElement::zero(&self.x)
            })
        });
        if let Some(e) = htilde_err.into_inner() {
            return Err(KernelError::Format(e));
        }

        let sigma = self.sigma()?;
        let apply_sigma = |t: &TensorElement<B::C>| t.map_right(|b| sigma.apply(b).expect("element of Y"));
        let sigma_sum = self.tensor_identity_sum((l, m), (lp, mp), alpha, true, true)?;
        let sigma_ok = apply_sigma(&phased_sum).close_to(&sigma_sum) && apply_sigma(&rhs).close_to(&rhs_sigma);

        Ok(TensorIdentityReport {
            phased: phased_sum.close_to(&rhs),
            unphased: unphased_sum.close_to(&rhs),
            route: route_value.close_to(&rhs),
            sigma: sigma_ok,
        })
    }

    /// `sigma(R_{r,s}(Y2, Y2*)) = R_{r,s}(Y2, Y2*)^*`
    pub fn verify_sigma_step(&self, r: u32, s: u32, alpha: AlphaParam) -> Result<bool> {
        let ry = self.disk_poly(DiskCopy::Y2, r, s, alpha)?;
        Ok(self.sigma()?.apply(&ry)?.close_to(&ry.star()))
    }
}
