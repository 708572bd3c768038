//! Presented non-commutative `*`-algebras with normal-ordering rewriting.
//!
//! Generators are listed in their normal order. Every adjacent pair `g h` with `g`
//! later than `h` has a rewrite rule; a normal monomial is a non-decreasing word to
//! which no contraction applies. Contractions handle relations such as
//! `Y2 Y2* = 1 - Y1 Y1*` between letters that are already in order.

mod element;
pub mod presets;
mod tensor;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;
use smallvec::SmallVec;
use thiserror::Error;

use crate::scalar::Coeff;

pub use element::{Element, NcElement};
pub use tensor::TensorElement;

pub type Gen = u8;
pub type Word = SmallVec<[Gen; 16]>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("star map is not an involution on the generators")]
    InvalidStar,
    #[error("rule {0} is keyed by a pair already in normal order")]
    BackwardRule(String),
    #[error("duplicate rule for {0}")]
    DuplicateRule(String),
    #[error("no rule for out-of-order pair {0}")]
    MissingRule(String),
    #[error("rule for {0} does not move closer to normal order")]
    NotDecreasing(String),
    #[error("invalid contraction {0}")]
    InvalidContraction(String),
    #[error("rules are not star-consistent at {0}")]
    StarInconsistent(String),
    #[error("operands belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),
    #[error("map does not preserve the relations: {0}")]
    NotAntiAutomorphism(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("{0}")]
    Invalid(String),
}

/// `left right -> sum c_i w_i` for an out-of-order adjacent pair.
#[derive(Clone, Debug)]
pub struct Rule<C> {
    pub left: Gen,
    pub right: Gen,
    pub terms: Vec<(C, Vec<Gen>)>,
}

/// `first last -> sum c_i w_i` applied to normal monomials containing both letters.
/// Letters between them are moved past `first` using the inverse of their
/// q-commutation rules.
#[derive(Clone, Debug)]
pub struct Contraction<C> {
    pub first: Gen,
    pub last: Gen,
    pub terms: Vec<(C, Vec<Gen>)>,
}

#[derive(Clone, Debug)]
pub struct Presentation<C> {
    pub name: String,
    pub generators: Vec<String>,
    pub star: Vec<Gen>,
    /// Termination weights; a rule may only lower total weight or swap the pair.
    pub weights: Vec<u32>,
    pub rules: Vec<Rule<C>>,
    pub contractions: Vec<Contraction<C>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

struct ContractionData<C> {
    first: Gen,
    last: Gen,
    terms: Vec<(C, Word)>,
    /// `pass[x]`: coefficient with `first x = pass[x] * x first`.
    pass: Vec<Option<C>>,
}

type Terms<C> = Vec<(Word, C)>;
type RuleTerms<C> = Vec<(C, Word)>;
type AppendCache<C> = RwLock<HashMap<(Word, Gen), Arc<Terms<C>>>>;

pub struct Algebra<C: Coeff> {
    id: u64,
    name: String,
    generators: Vec<String>,
    star: Vec<Gen>,
    rules: Vec<Option<Vec<(C, Word)>>>,
    contractions: Vec<ContractionData<C>>,
    cache: AppendCache<C>,
}

impl<C: Coeff> fmt::Debug for Algebra<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("generators", &self.generators)
            .finish()
    }
}

fn next_id() -> u64 {
    static NEXT: AtomicU64 = AtomicU64::new(1);
    NEXT.fetch_add(1, Ordering::Relaxed)
}

pub(crate) fn add_term<C: Coeff>(map: &mut BTreeMap<Word, C>, word: Word, c: C) {
    if c.is_zero() {
        return;
    }
    match map.entry(word) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().add(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl<C: Coeff> Algebra<C> {
    /// Validates a presentation and returns the algebra.
    ///
    /// Checks: the star map is an involution; every out-of-order pair has exactly one
    /// rule and no in-order pair has one; every rule term is shorter, lighter, or the
    /// swapped pair (which makes `(length, weight, inversions)` a decreasing measure);
    /// contractions only pass letters with invertible q-commutation rules; and the
    /// star of each relation reduces to the same normal form on both sides.
    pub fn define(p: Presentation<C>) -> Result<Arc<Self>, AlgebraError> {
        let n = p.generators.len();
        if n == 0 || n > 64 || p.star.len() != n || p.weights.len() != n {
            return Err(AlgebraError::Invalid(format!(
                "{}: inconsistent generator data",
                p.name
            )));
        }
        for (g, &s) in p.star.iter().enumerate() {
            if s as usize >= n || p.star[s as usize] as usize != g {
                return Err(AlgebraError::InvalidStar);
            }
        }
        let pair_name = |a: Gen, b: Gen| format!("{} {}", p.generators[a as usize], p.generators[b as usize]);
        let weight = |w: &[Gen]| w.iter().map(|&g| p.weights[g as usize]).sum::<u32>();

        let mut rules: Vec<Option<Vec<(C, Word)>>> = vec![None; n * n];
        for r in &p.rules {
            if r.left as usize >= n || r.right as usize >= n {
                return Err(AlgebraError::UnknownGenerator(format!("{}/{}", r.left, r.right)));
            }
            if r.left <= r.right {
                return Err(AlgebraError::BackwardRule(pair_name(r.left, r.right)));
            }
            let slot = &mut rules[r.left as usize * n + r.right as usize];
            if slot.is_some() {
                return Err(AlgebraError::DuplicateRule(pair_name(r.left, r.right)));
            }
            let pair_weight = weight(&[r.left, r.right]);
            for (_, w) in &r.terms {
                let ok = w.len() < 2 || (w.len() == 2 && weight(w) < pair_weight) || w.as_slice() == [r.right, r.left];
                if !ok || w.iter().any(|&g| g as usize >= n) {
                    return Err(AlgebraError::NotDecreasing(pair_name(r.left, r.right)));
                }
            }
            *slot = Some(
                r.terms
                    .iter()
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, w)| (c.clone(), Word::from_slice(w)))
                    .collect(),
            );
        }
        for a in 0..n {
            for b in 0..a {
                if rules[a * n + b].is_none() {
                    return Err(AlgebraError::MissingRule(pair_name(a as Gen, b as Gen)));
                }
            }
        }

        let mut contractions = Vec::new();
        for c in &p.contractions {
            let name = pair_name(c.first, c.last);
            if c.first >= c.last || c.last as usize >= n {
                return Err(AlgebraError::InvalidContraction(name));
            }
            let pair_weight = weight(&[c.first, c.last]);
            for (_, w) in &c.terms {
                if w.len() > 2 || weight(w) >= pair_weight || w.iter().any(|&g| g == c.first || g == c.last) {
                    return Err(AlgebraError::InvalidContraction(name));
                }
            }
            let mut pass = vec![None; n];
            for x in (c.first + 1)..c.last {
                let rule = rules[x as usize * n + c.first as usize]
                    .as_ref()
                    .expect("all out-of-order pairs have rules");
                let inv = match rule.as_slice() {
                    [(coef, w)] if w.as_slice() == [c.first, x] => coef.inv(),
                    _ => None,
                };
                match inv {
                    Some(v) => pass[x as usize] = Some(v),
                    None => {
                        return Err(AlgebraError::InvalidContraction(format!(
                            "{name}: {} does not q-commute with {}",
                            p.generators[x as usize], p.generators[c.first as usize]
                        )))
                    }
                }
            }
            contractions.push(ContractionData {
                first: c.first,
                last: c.last,
                terms: c
                    .terms
                    .iter()
                    .filter(|(k, _)| !k.is_zero())
                    .map(|(k, w)| (k.clone(), Word::from_slice(w)))
                    .collect(),
                pass,
            });
        }

        let alg = Arc::new(Algebra {
            id: next_id(),
            name: p.name.clone(),
            generators: p.generators.clone(),
            star: p.star.clone(),
            rules,
            contractions,
            cache: RwLock::new(HashMap::new()),
        });

        // star-consistency: star(lhs) and star(rhs) must have equal normal forms
        let relations = p
            .rules
            .iter()
            .map(|r| (vec![r.left, r.right], &r.terms))
            .chain(p.contractions.iter().map(|c| (vec![c.first, c.last], &c.terms)));
        for (lhs, terms) in relations {
            let star_word = |w: &[Gen]| -> Vec<Gen> { w.iter().rev().map(|&g| alg.star[g as usize]).collect() };
            let left = NcElement::from_word(&alg, C::one(), &star_word(&lhs));
            let mut right = NcElement::zero(&alg);
            for (c, w) in terms {
                right = right.add(&NcElement::from_word(&alg, c.clone(), &star_word(w)));
            }
            if left != right {
                return Err(AlgebraError::StarInconsistent(pair_name(lhs[0], lhs[1])));
            }
        }
        Ok(alg)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<Gen, AlgebraError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .map(|i| i as Gen)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn generator_name(&self, g: Gen) -> &str {
        &self.generators[g as usize]
    }

    pub fn star_of(&self, g: Gen) -> Gen {
        self.star[g as usize]
    }

    fn rule(&self, left: Gen, right: Gen) -> &[(C, Word)] {
        self.rules[left as usize * self.generators.len() + right as usize]
            .as_deref()
            .unwrap_or(&[])
    }

    fn has_rule(&self, left: Gen, right: Gen) -> bool {
        left > right
    }

    /// The contraction applicable to a sorted word, with the position of the last
    /// `first` letter and the first `last` letter.
    fn find_contraction(&self, w: &[Gen]) -> Option<(&ContractionData<C>, usize, usize)> {
        self.contractions.iter().find_map(|c| {
            let i = w.iter().rposition(|&g| g == c.first)?;
            let j = w.iter().position(|&g| g == c.last)?;
            (i < j).then_some((c, i, j))
        })
    }

    pub fn is_normal(&self, w: &[Gen]) -> bool {
        w.windows(2).all(|p| p[0] <= p[1]) && self.find_contraction(w).is_none()
    }

    /// Phase collected by moving `first` from position `i` to just before `j`.
    fn pass_phase(c: &ContractionData<C>, w: &[Gen], i: usize, j: usize) -> C {
        let mut phase = C::one();
        for &x in &w[i + 1..j] {
            phase = phase.mul(c.pass[x as usize].as_ref().expect("validated contraction"));
        }
        phase
    }

    /// Normal form of `mono * g` for a normal monomial `mono`. Memoized.
    fn append(&self, mono: &[Gen], g: Gen) -> Arc<Terms<C>> {
        let key = (Word::from_slice(mono), g);
        if let Some(hit) = self.cache.read().get(&key) {
            return hit.clone();
        }
        let result = match mono.last() {
            Some(&h) if self.has_rule(h, g) => {
                let prefix = &mono[..mono.len() - 1];
                let mut acc = BTreeMap::new();
                for (c, w) in self.rule(h, g) {
                    self.mul_word_into(prefix, w, c, &mut acc);
                }
                acc.into_iter().collect()
            }
            _ => {
                let mut w = key.0.clone();
                w.push(g);
                match self.find_contraction(&w) {
                    Some((c, i, j)) => {
                        let phase = Self::pass_phase(c, &w, i, j);
                        let mut base: Word = w.clone();
                        base.remove(j);
                        base.remove(i);
                        let mut acc = BTreeMap::new();
                        for (k, tw) in &c.terms {
                            // base is sorted and contains no `last`, hence normal
                            self.mul_word_into(&base, tw, &phase.mul(k), &mut acc);
                        }
                        acc.into_iter().collect()
                    }
                    None => vec![(w, C::one())],
                }
            }
        };
        let result = Arc::new(result);
        self.cache.write().insert(key, result.clone());
        result
    }

    /// Adds `coef * NF(mono * word)` to `acc`, for normal `mono`.
    fn mul_word_into(&self, mono: &[Gen], word: &[Gen], coef: &C, acc: &mut BTreeMap<Word, C>) {
        let mut current: BTreeMap<Word, C> = BTreeMap::new();
        current.insert(Word::from_slice(mono), coef.clone());
        for &g in word {
            let mut next = BTreeMap::new();
            for (m, c) in &current {
                for (w, k) in self.append(m, g).iter() {
                    add_term(&mut next, w.clone(), c.mul(k));
                }
            }
            current = next;
        }
        for (w, c) in current {
            add_term(acc, w, c);
        }
    }

    /// Normal form of an arbitrary word (memoized insertion strategy).
    pub fn normal_order(&self, word: &[Gen]) -> BTreeMap<Word, C> {
        let mut acc = BTreeMap::new();
        self.mul_word_into(&[], word, &C::one(), &mut acc);
        acc
    }

    /// Normal form of `mono_a * mono_b` for normal monomials.
    pub(crate) fn mul_monomials(&self, a: &[Gen], b: &[Gen]) -> BTreeMap<Word, C> {
        let mut acc = BTreeMap::new();
        self.mul_word_into(a, b, &C::one(), &mut acc);
        acc
    }

    /// Plain rewriting without memoization, always rewriting the leftmost or the
    /// rightmost reducible pair. Used to test confluence against `normal_order`.
    pub fn normal_order_with(&self, word: &[Gen], strategy: Strategy) -> BTreeMap<Word, C> {
        let mut pending: BTreeMap<Word, C> = BTreeMap::new();
        pending.insert(Word::from_slice(word), C::one());
        let mut done: BTreeMap<Word, C> = BTreeMap::new();
        while let Some((w, c)) = pending.pop_first() {
            let reducible = w.windows(2).enumerate().filter(|(_, p)| self.has_rule(p[0], p[1]));
            let pos = match strategy {
                Strategy::Leftmost => reducible.map(|(i, _)| i).next(),
                Strategy::Rightmost => reducible.map(|(i, _)| i).last(),
            };
            if let Some(i) = pos {
                for (k, tw) in self.rule(w[i], w[i + 1]) {
                    let mut nw: Word = Word::from_slice(&w[..i]);
                    nw.extend_from_slice(tw);
                    nw.extend_from_slice(&w[i + 2..]);
                    add_term(&mut pending, nw, c.mul(k));
                }
                continue;
            }
            if let Some((con, i, j)) = self.find_contraction(&w) {
                let phase = c.mul(&Self::pass_phase(con, &w, i, j));
                for (k, tw) in &con.terms {
                    let mut nw: Word = Word::from_slice(&w[..i]);
                    nw.extend_from_slice(&w[i + 1..j]);
                    nw.extend_from_slice(tw);
                    nw.extend_from_slice(&w[j + 1..]);
                    add_term(&mut pending, nw, phase.mul(k));
                }
                continue;
            }
            add_term(&mut done, w, c);
        }
        done
    }

    /// `g1^a g2^b ...` with `1` for the empty word.
    pub fn format_word(&self, w: &[Gen]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = self.generator_name(w[i]);
            if j - i == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join(" ")
    }

    /// Number of cached `(monomial, letter)` products.
    pub fn cache_len(&self) -> usize {
        self.cache.read().len()
    }
}

/// An anti-automorphism `phi(ab) = phi(b) phi(a)` given by generator images.
#[derive(Clone, Debug)]
pub struct AntiAutomorphism<C: Coeff> {
    algebra: Arc<Algebra<C>>,
    images: Vec<NcElement<C>>,
}

impl<C: Coeff> AntiAutomorphism<C> {
    /// Checks that every defining relation is mapped to a valid identity.
    pub fn new(algebra: &Arc<Algebra<C>>, images: Vec<NcElement<C>>) -> Result<Self, AlgebraError> {
        if images.len() != algebra.generators.len() {
            return Err(AlgebraError::NotAntiAutomorphism("wrong number of images".into()));
        }
        for im in &images {
            if im.algebra().id() != algebra.id() {
                return Err(AlgebraError::AlgebraMismatch(
                    im.algebra().name().to_string(),
                    algebra.name().to_string(),
                ));
            }
        }
        let phi = AntiAutomorphism {
            algebra: algebra.clone(),
            images,
        };
        let n = algebra.generators.len();
        let mut relations: Vec<(Vec<Gen>, RuleTerms<C>)> = Vec::new();
        for a in 0..n {
            for b in 0..a {
                relations.push((vec![a as Gen, b as Gen], algebra.rule(a as Gen, b as Gen).to_vec()));
            }
        }
        for c in &algebra.contractions {
            relations.push((vec![c.first, c.last], c.terms.clone()));
        }
        for (lhs, terms) in relations {
            let left = phi.apply_word(&lhs);
            let mut right = NcElement::zero(algebra);
            for (c, w) in &terms {
                right = right.add(&phi.apply_word(w).scale(c));
            }
            if !left.close_to(&right) {
                return Err(AlgebraError::NotAntiAutomorphism(algebra.format_word(&lhs)));
            }
        }
        Ok(phi)
    }

    fn apply_word(&self, w: &[Gen]) -> NcElement<C> {
        w.iter().rev().fold(NcElement::one(&self.algebra), |acc, &g| {
            acc.mul(&self.images[g as usize])
        })
    }

    pub fn apply(&self, a: &NcElement<C>) -> Result<NcElement<C>, AlgebraError> {
        if a.algebra().id() != self.algebra.id() {
            return Err(AlgebraError::AlgebraMismatch(
                a.algebra().name().to_string(),
                self.algebra.name().to_string(),
            ));
        }
        let mut out = NcElement::zero(&self.algebra);
        for (w, c) in a.terms() {
            out = out.add(&self.apply_word(w).scale(c));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
