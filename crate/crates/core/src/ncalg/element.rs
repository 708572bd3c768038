use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{add_term, Algebra, AlgebraError, Gen, Word};
use crate::scalar::Coeff;

/// Operations needed to evaluate a polynomial at non-commuting images.
pub trait Element<C: Coeff>: Clone {
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &C) -> Self;
}

/// A linear combination of normal monomials.
#[derive(Clone)]
pub struct NcElement<C: Coeff> {
    alg: Arc<Algebra<C>>,
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> NcElement<C> {
    pub fn zero(alg: &Arc<Algebra<C>>) -> Self {
        NcElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra<C>>) -> Self {
        Self::constant(alg, C::one())
    }

    pub fn constant(alg: &Arc<Algebra<C>>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, Word::new(), c);
        NcElement {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn generator(alg: &Arc<Algebra<C>>, name: &str) -> Result<Self, AlgebraError> {
        let g = alg.generator(name)?;
        Ok(Self::from_word(alg, C::one(), &[g]))
    }

    /// `c * w1 w2 ...` brought into normal form.
    pub fn from_word(alg: &Arc<Algebra<C>>, c: C, word: &[Gen]) -> Self {
        let terms = alg
            .normal_order(word)
            .into_iter()
            .filter_map(|(w, k)| {
                let v = k.mul(&c);
                (!v.is_zero()).then_some((w, v))
            })
            .collect();
        NcElement {
            alg: alg.clone(),
            terms,
        }
    }

    /// Builds an element from terms whose words are already normal.
    pub(crate) fn from_normal_terms(alg: &Arc<Algebra<C>>, terms: BTreeMap<Word, C>) -> Self {
        debug_assert!(terms.keys().all(|w| alg.is_normal(w)));
        NcElement {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra<C>> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, C> {
        self.terms
    }

    pub fn coefficient(&self, word: &[Gen]) -> C {
        self.terms.get(word).cloned().unwrap_or_else(C::zero)
    }

    /// Drops the term at `word`; used after subtracting a multiple that cancels it
    /// up to rounding.
    pub(crate) fn remove_term(&mut self, word: &[Gen]) {
        self.terms.remove(word);
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

    /// Largest word length, or `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.alg.id() == other.alg.id() {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch(
                self.alg.name().to_string(),
                other.alg.name().to_string(),
            ))
        }
    }

    fn expect_same(&self, other: &Self) {
        if let Err(e) = self.check(other) {
            panic!("{e}");
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_term(&mut terms, w.clone(), c.clone());
        }
        Ok(NcElement {
            alg: self.alg.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let coef = ca.mul(cb);
                for (w, k) in self.alg.mul_monomials(wa, wb) {
                    add_term(&mut terms, w, coef.mul(&k));
                }
            }
        }
        Ok(NcElement {
            alg: self.alg.clone(),
            terms,
        })
    }

    /// Panics if the operands live in different algebras; see [`Self::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.expect_same(other);
        self.try_add(other).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.expect_same(other);
        self.try_sub(other).unwrap()
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.expect_same(other);
        self.try_mul(other).unwrap()
    }

    pub fn neg(&self) -> Self {
        NcElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        NcElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k.mul(c))).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.alg);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The conjugate-linear anti-involution. Coefficients are real (`q` is real), so
    /// only the words are reversed and starred.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.alg);
        for (w, c) in &self.terms {
            let sw: Vec<Gen> = w.iter().rev().map(|&g| self.alg.star_of(g)).collect();
            out = out.add(&Self::from_word(&self.alg, c.clone(), &sw));
        }
        out
    }

    /// Same algebra, same words, coefficients equal under [`Coeff::close_to`].
    pub fn close_to(&self, other: &Self) -> bool {
        if self.alg.id() != other.alg.id() {
            return false;
        }
        let zero = C::zero();
        let keys: std::collections::BTreeSet<&Word> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|w| {
            let a = self.terms.get(w).unwrap_or(&zero);
            let b = other.terms.get(w).unwrap_or(&zero);
            a.close_to(b)
        })
    }

    /// Evaluates the element at images of the generators (indexed by generator).
    /// The caller is responsible for the images satisfying the relations; for the
    /// algebra of the disk this makes the map a homomorphism.
    pub fn substitute<E: Element<C>>(&self, images: &[E], unit: &E) -> E {
        assert_eq!(images.len(), self.alg.generators().len(), "one image per generator");
        let mut out = unit.zero_like();
        // words are sorted, so consecutive terms share prefixes; cache the last one
        let mut prefix: Vec<(Gen, E)> = Vec::new();
        for (w, c) in &self.terms {
            let common = prefix.iter().zip(w.iter()).take_while(|((g, _), h)| g == *h).count();
            prefix.truncate(common);
            for &g in &w[common..] {
                let base = prefix.last().map(|(_, e)| e.clone()).unwrap_or_else(|| unit.one_like());
                prefix.push((g, base.times(&images[g as usize])));
            }
            let value = prefix.last().map(|(_, e)| e.clone()).unwrap_or_else(|| unit.one_like());
            out = out.plus(&value.scaled(c));
        }
        out
    }

    /// Applies `f` to each coefficient and drops zeros.
    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        NcElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(w, c)| {
                    let v = f(c);
                    (!v.is_zero()).then(|| (w.clone(), v))
                })
                .collect(),
        }
    }
}

impl<C: Coeff> PartialEq for NcElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id() == other.alg.id() && self.terms == other.terms
    }
}

impl<C: Coeff> fmt::Debug for NcElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcElement[{}]({self})", self.alg.name())
    }
}

pub(crate) fn format_coeff<C: Coeff>(c: &C) -> String {
    let s = c.to_string();
    if s.contains(' ') && !(s.starts_with('(') && s.ends_with(')') && !s.contains(")/(")) {
        format!("({s})")
    } else {
        s
    }
}

impl<C: Coeff> fmt::Display for NcElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    format_coeff(c)
                } else {
                    format!("{} * {}", format_coeff(c), self.alg.format_word(w))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> Element<C> for NcElement<C> {
    fn one_like(&self) -> Self {
        Self::one(&self.alg)
    }
    fn zero_like(&self) -> Self {
        Self::zero(&self.alg)
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

macro_rules! element_binop {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> $tr<&NcElement<C>> for &NcElement<C> {
            type Output = NcElement<C>;
            fn $method(self, rhs: &NcElement<C>) -> NcElement<C> {
                NcElement::$method(self, rhs)
            }
        }
    };
}

element_binop!(Add, add);
element_binop!(Sub, sub);
element_binop!(Mul, mul);

impl<C: Coeff> Neg for &NcElement<C> {
    type Output = NcElement<C>;
    fn neg(self) -> NcElement<C> {
        NcElement::neg(self)
    }
}
