use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::element::format_coeff;
use super::{Algebra, AlgebraError, Element, NcElement, Word};
use crate::scalar::Coeff;

type Key = (Word, Word);

/// An element of `A ⊗ B`, stored as pairs of normal monomials. Products are taken
/// factorwise with no reordering across the tensor sign.
#[derive(Clone)]
pub struct TensorElement<C: Coeff> {
    left: Arc<Algebra<C>>,
    right: Arc<Algebra<C>>,
    terms: BTreeMap<Key, C>,
}

fn add_pair<C: Coeff>(map: &mut BTreeMap<Key, C>, key: Key, c: C) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().add(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl<C: Coeff> TensorElement<C> {
    pub fn zero(left: &Arc<Algebra<C>>, right: &Arc<Algebra<C>>) -> Self {
        TensorElement {
            left: left.clone(),
            right: right.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(left: &Arc<Algebra<C>>, right: &Arc<Algebra<C>>) -> Self {
        Self::pure(&NcElement::one(left), &NcElement::one(right))
    }

    /// `a ⊗ b`
    pub fn pure(a: &NcElement<C>, b: &NcElement<C>) -> Self {
        let mut terms = BTreeMap::new();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                add_pair(&mut terms, (wa.clone(), wb.clone()), ca.mul(cb));
            }
        }
        TensorElement {
            left: a.algebra().clone(),
            right: b.algebra().clone(),
            terms,
        }
    }

    pub fn left_algebra(&self) -> &Arc<Algebra<C>> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<Algebra<C>> {
        &self.right
    }

    pub fn terms(&self) -> &BTreeMap<Key, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.left.id() != other.left.id() {
            return Err(AlgebraError::AlgebraMismatch(
                self.left.name().to_string(),
                other.left.name().to_string(),
            ));
        }
        if self.right.id() != other.right.id() {
            return Err(AlgebraError::AlgebraMismatch(
                self.right.name().to_string(),
                other.right.name().to_string(),
            ));
        }
        Ok(())
    }

    fn with_terms(&self, terms: BTreeMap<Key, C>) -> Self {
        TensorElement {
            left: self.left.clone(),
            right: self.right.clone(),
            terms,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_pair(&mut terms, k.clone(), c.clone());
        }
        Ok(self.with_terms(terms))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for ((a1, a2), ca) in &self.terms {
            for ((b1, b2), cb) in &other.terms {
                let coef = ca.mul(cb);
                let left = self.left.mul_monomials(a1, b1);
                let right = self.right.mul_monomials(a2, b2);
                for (wl, kl) in &left {
                    let ckl = coef.mul(kl);
                    for (wr, kr) in &right {
                        add_pair(&mut terms, (wl.clone(), wr.clone()), ckl.mul(kr));
                    }
                }
            }
        }
        Ok(self.with_terms(terms))
    }

    /// Panics on mismatched algebras; see [`Self::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn neg(&self) -> Self {
        self.with_terms(self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return self.with_terms(BTreeMap::new());
        }
        self.with_terms(self.terms.iter().map(|(k, v)| (k.clone(), v.mul(c))).collect())
    }

    /// Componentwise star.
    pub fn star(&self) -> Self {
        self.map_both(|a| a.star(), |b| b.star())
    }

    /// `(f ⊗ g)` for linear maps given on monomials.
    pub fn map_both(
        &self,
        f: impl Fn(&NcElement<C>) -> NcElement<C>,
        g: impl Fn(&NcElement<C>) -> NcElement<C>,
    ) -> Self {
        let mut out: Option<Self> = None;
        let mut terms = BTreeMap::new();
        for ((wl, wr), c) in &self.terms {
            let a = f(&NcElement::from_normal_terms(
                &self.left,
                BTreeMap::from([(wl.clone(), C::one())]),
            ));
            let b = g(&NcElement::from_normal_terms(
                &self.right,
                BTreeMap::from([(wr.clone(), C::one())]),
            ));
            if out.is_none() {
                out = Some(TensorElement::zero(a.algebra(), b.algebra()));
            }
            for (ka, ca) in a.terms() {
                let cc = ca.mul(c);
                for (kb, cb) in b.terms() {
                    add_pair(&mut terms, (ka.clone(), kb.clone()), cc.mul(cb));
                }
            }
        }
        match out {
            Some(o) => o.with_terms(terms),
            None => self.with_terms(terms),
        }
    }

    /// `f ⊗ id`
    pub fn map_left(&self, f: impl Fn(&NcElement<C>) -> NcElement<C>) -> Self {
        self.map_both(f, |b| b.clone())
    }

    /// `id ⊗ g`
    pub fn map_right(&self, g: impl Fn(&NcElement<C>) -> NcElement<C>) -> Self {
        self.map_both(|a| a.clone(), g)
    }

    pub fn close_to(&self, other: &Self) -> bool {
        if self.check(other).is_err() {
            return false;
        }
        let zero = C::zero();
        let keys: std::collections::BTreeSet<&Key> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            self.terms
                .get(k)
                .unwrap_or(&zero)
                .close_to(other.terms.get(k).unwrap_or(&zero))
        })
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        self.with_terms(
            self.terms
                .iter()
                .filter_map(|(k, c)| {
                    let v = f(c);
                    (!v.is_zero()).then(|| (k.clone(), v))
                })
                .collect(),
        )
    }
}

impl<C: Coeff> PartialEq for TensorElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.check(other).is_ok() && self.terms == other.terms
    }
}

impl<C: Coeff> fmt::Display for TensorElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((wl, wr), c)| {
                format!(
                    "{} * {} ⊗ {}",
                    format_coeff(c),
                    self.left.format_word(wl),
                    self.right.format_word(wr)
                )
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for TensorElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElement[{}⊗{}]({self})", self.left.name(), self.right.name())
    }
}

impl<C: Coeff> Element<C> for TensorElement<C> {
    fn one_like(&self) -> Self {
        Self::one(&self.left, &self.right)
    }
    fn zero_like(&self) -> Self {
        Self::zero(&self.left, &self.right)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, c: &C) -> Self {
        self.scale(c)
    }
}
