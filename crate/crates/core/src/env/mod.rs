//! Truncated universal enveloping algebras.
//!
//! Elements are finite sums of PBW-normal (sorted) words with exact rational
//! coefficients. Products are normalized by adjacent rewriting
//! `x_b x_a → x_a x_b + [x_b, x_a]` and then truncated at the context's
//! maximal word length. Float mode is not offered here: every identity in this
//! module is an exact statement.

mod hopf;
mod iso;
mod series;
mod star;

pub use hopf::{check_hopf_axioms, HopfReport, HopfStructure, PlainHopf};
pub use iso::{f_map, phi_multiplicativity, sts_product_check, IdentityCheck};
pub use series::Series;
pub use star::{star_commutator_algebra, StarAlgebra};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::Vector;
use crate::scalar::{Rational, Scalar};

type Q = Rational;

/// A word `x_{i1} ⋯ x_{ik}` in basis letters. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(alloc::vec![i as u8])
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&i| i as u8).collect())
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&b| b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().map(|&b| b as usize)
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().map(|&b| b as usize)
    }

    /// Word without its first letter.
    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// Word without its last letter.
    pub fn init(&self) -> Word {
        Word(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter as u8);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.0
    }

    /// All splittings into a subword and its complement: the terms of the
    /// unshuffle coproduct, with multiplicity.
    pub fn unshuffles(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        let n = self.0.len();
        assert!(n < 64, "word too long for unshuffle enumeration");
        (0u64..1 << n).map(move |mask| {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, &l) in self.0.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(l);
                } else {
                    right.push(l);
                }
            }
            (Word(left), Word(right))
        })
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the truncated enveloping algebra. Zero coefficients are never stored,
/// so equality of term maps is equality of elements.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EnvElement {
    terms: BTreeMap<Word, Q>,
}

impl EnvElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn term(word: Word, c: Q) -> Self {
        let mut out = Self::zero();
        out.add_term(word, c);
        out
    }

    pub fn letter(i: usize) -> Self {
        Self::term(Word::letter(i), Q::one())
    }

    /// `Σ v_i x_i`
    pub fn from_vector(v: &Vector<Q>) -> Self {
        let mut out = Self::zero();
        for (i, c) in v.coords().iter().enumerate() {
            out.add_term(Word::letter(i), c.clone());
        }
        out
    }

    pub fn add_term(&mut self, word: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &EnvElement, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d * c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &Word) -> Q {
        self.terms.get(word).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the empty word.
    pub fn counit(&self) -> Q {
        self.coefficient(&Word::empty())
    }

    /// Longest word length, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn add(&self, other: &EnvElement) -> EnvElement {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &EnvElement) -> EnvElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> EnvElement {
        let mut out = EnvElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> EnvElement {
        self.scale(&-Q::one())
    }

    /// Part made of words of exactly `len` letters.
    pub fn component(&self, len: usize) -> EnvElement {
        self.filter(|w| w.len() == len)
    }

    /// Drops words longer than `max_len`.
    pub fn truncate(&self, max_len: usize) -> EnvElement {
        self.filter(|w| w.len() <= max_len)
    }

    fn filter(&self, keep: impl Fn(&Word) -> bool) -> EnvElement {
        EnvElement { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Coordinates of the length-one part.
    pub fn lie_part(&self, dim: usize) -> Vector<Q> {
        let mut v = Vector::zeros(dim);
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == 1) {
            v[w.first().unwrap()] = c.clone();
        }
        v
    }

    /// Everything except the length-one part.
    pub fn non_lie_part(&self) -> EnvElement {
        self.filter(|w| w.len() != 1)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Renders as `c · w + c · w` in length-lex word order; `1` denotes the empty word.
    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = if w.is_empty() { String::from("1") } else { w.letters().map(|i| labels[i].as_str()).collect::<Vec<_>>().join(" ") };
                alloc::format!("{c} · {word}")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..=self.terms.keys().flat_map(Word::letters).max().unwrap_or(0)).map(|i| alloc::format!("x{i}")).collect();
        f.write_str(&self.render(&labels))
    }
}

/// A finite sum of pure tensors `w_1 ⊗ ⋯ ⊗ w_k` of fixed arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    arity: usize,
    terms: BTreeMap<Vec<Word>, Q>,
}

/// Arity-two tensors, as produced by the coproduct.
pub type TensorSquareElement = Tensor;

impl Tensor {
    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    pub fn pure(legs: Vec<Word>, c: Q) -> Self {
        let mut out = Self::zero(legs.len());
        out.add_term(legs, c);
        out
    }

    /// `a ⊗ b`
    pub fn product_of(a: &EnvElement, b: &EnvElement) -> Self {
        let mut out = Self::zero(2);
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_term(alloc::vec![wa.clone(), wb.clone()], ca * cb);
            }
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn add_term(&mut self, legs: Vec<Word>, c: Q) {
        debug_assert_eq!(legs.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&legs) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&legs);
                }
            }
            None => {
                self.terms.insert(legs, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Q) {
        for (legs, d) in &other.terms {
            self.add_term(legs.clone(), d * c);
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Drops terms whose total word length exceeds `max_len`.
    pub fn truncate(&self, max_len: usize) -> Tensor {
        Tensor {
            arity: self.arity,
            terms: self.terms.iter().filter(|(legs, _)| legs.iter().map(Word::len).sum::<usize>() <= max_len).map(|(l, c)| (l.clone(), c.clone())).collect(),
        }
    }

    /// Replaces leg `leg` by the tensor produced by `f`, raising the arity by `f`'s arity minus one.
    pub fn expand_leg(&self, leg: usize, out_arity: usize, f: impl Fn(&Word) -> Tensor) -> Tensor {
        let mut out = Tensor::zero(self.arity - 1 + out_arity);
        for (legs, c) in &self.terms {
            let image = f(&legs[leg]);
            for (inner, d) in image.terms() {
                let mut new_legs = Vec::with_capacity(out.arity);
                new_legs.extend_from_slice(&legs[..leg]);
                new_legs.extend(inner.iter().cloned());
                new_legs.extend_from_slice(&legs[leg + 1..]);
                out.add_term(new_legs, c * d);
            }
        }
        out
    }

    /// Applies a linear map to one leg.
    pub fn map_leg(&self, leg: usize, f: impl Fn(&Word) -> EnvElement) -> Tensor {
        self.expand_leg(leg, 1, |w| {
            let mut t = Tensor::zero(1);
            for (v, c) in f(w).terms() {
                t.add_term(alloc::vec![v.clone()], c.clone());
            }
            t
        })
    }

    /// Multiplies legs `i` and `i + 1` together with `mul`.
    pub fn contract(&self, i: usize, mul: impl Fn(&Word, &Word) -> EnvElement) -> Tensor {
        let mut out = Tensor::zero(self.arity - 1);
        for (legs, c) in &self.terms {
            for (w, d) in mul(&legs[i], &legs[i + 1]).terms() {
                let mut new_legs = Vec::with_capacity(out.arity);
                new_legs.extend_from_slice(&legs[..i]);
                new_legs.push(w.clone());
                new_legs.extend_from_slice(&legs[i + 2..]);
                out.add_term(new_legs, c * d);
            }
        }
        out
    }

    /// Collapses an arity-one tensor back to an element.
    pub fn into_element(self) -> EnvElement {
        assert_eq!(self.arity, 1);
        let mut out = EnvElement::zero();
        for (mut legs, c) in self.terms {
            out.add_term(legs.pop().unwrap(), c);
        }
        out
    }

    /// Leg-wise product `(a_1 ⊗ a_2)(b_1 ⊗ b_2) = a_1 b_1 ⊗ a_2 b_2`.
    pub fn mul(&self, other: &Tensor, mul: impl Fn(&Word, &Word) -> EnvElement) -> Tensor {
        assert_eq!(self.arity, other.arity);
        let mut out = Tensor::zero(self.arity);
        for (la, ca) in &self.terms {
            for (lb, cb) in &other.terms {
                let mut partial = Tensor::pure(Vec::new(), ca * cb);
                for (wa, wb) in la.iter().zip(lb) {
                    let prod = mul(wa, wb);
                    let mut next = Tensor::zero(partial.arity + 1);
                    for (legs, c) in &partial.terms {
                        for (w, d) in prod.terms() {
                            let mut new_legs = legs.clone();
                            new_legs.push(w.clone());
                            next.add_term(new_legs, c * d);
                        }
                    }
                    partial = next;
                }
                out.add_scaled(&partial, &Q::one());
            }
        }
        out
    }
}

/// Rewrite strategy for the reference normalizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

/// Truncated `U(g)` for a fixed Lie algebra and maximal word length.
///
/// Word products are memoized; the memo is local to this value, so an `Env`
/// should stay within one task.
#[derive(Debug)]
pub struct Env {
    algebra: LieAlgebra<Q>,
    max_len: usize,
    letter_memo: RefCell<BTreeMap<(Word, u8), EnvElement>>,
}

impl Clone for Env {
    fn clone(&self) -> Self {
        Self { algebra: self.algebra.clone(), max_len: self.max_len, letter_memo: RefCell::default() }
    }
}

impl Env {
    pub fn new(algebra: LieAlgebra<Q>, max_len: usize) -> Result<Self> {
        if algebra.dim() > u8::MAX as usize {
            return Err(Error::BadDimensions(alloc::format!("enveloping algebra supports at most 255 generators, got {}", algebra.dim())));
        }
        Ok(Self { algebra, max_len, letter_memo: RefCell::default() })
    }

    pub fn algebra(&self) -> &LieAlgebra<Q> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    pub fn render(&self, a: &EnvElement) -> String {
        a.render(self.algebra.labels())
    }

    /// `Σ v_i x_i`
    pub fn lie(&self, v: &Vector<Q>) -> EnvElement {
        EnvElement::from_vector(v)
    }

    /// Sorted word times one letter, fully normalized, never truncated.
    fn word_times_letter(&self, w: &Word, x: u8) -> EnvElement {
        match w.raw().last() {
            None => return EnvElement::letter(x as usize),
            Some(&a) if a <= x => {
                let mut out = w.clone();
                out.0.push(x);
                return EnvElement::term(out, Q::one());
            }
            _ => {}
        }
        let key = (w.clone(), x);
        if let Some(hit) = self.letter_memo.borrow().get(&key) {
            return hit.clone();
        }
        // w = w' a with a > x:  w' a x = (w' x) a + w' [a, x]
        let a = *w.raw().last().unwrap();
        let head = w.init();
        let mut out = EnvElement::zero();
        for (v, c) in self.word_times_letter(&head, x).terms() {
            out.add_scaled(&self.word_times_letter(v, a), c);
        }
        let n = self.dim();
        for k in 0..n {
            let c = self.algebra.c(a as usize, x as usize, k);
            if !c.is_zero() {
                out.add_scaled(&self.word_times_letter(&head, k as u8), c);
            }
        }
        self.letter_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Element times a letter, untruncated.
    fn times_letter(&self, a: &EnvElement, x: u8) -> EnvElement {
        let mut out = EnvElement::zero();
        for (w, c) in a.terms() {
            out.add_scaled(&self.word_times_letter(w, x), c);
        }
        out
    }

    /// Product of two sorted words, untruncated.
    pub fn mul_words(&self, a: &Word, b: &Word) -> EnvElement {
        let mut acc = EnvElement::term(a.clone(), Q::one());
        for &x in b.raw() {
            acc = self.times_letter(&acc, x);
        }
        acc
    }

    /// Product without truncation. Used where the caller controls degrees.
    pub fn mul_full(&self, a: &EnvElement, b: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (wb, cb) in b.terms() {
            let mut acc = a.scale(cb);
            for &x in wb.raw() {
                acc = self.times_letter(&acc, x);
            }
            out.add_scaled(&acc, &Q::one());
        }
        out
    }

    /// `A · B`: concatenate, normalize, then drop words longer than the truncation order.
    pub fn mul(&self, a: &EnvElement, b: &EnvElement) -> EnvElement {
        self.mul_full(a, b).truncate(self.max_len)
    }

    /// Product of a sequence of Lie elements, untruncated.
    pub fn mul_lie_sequence(&self, factors: &[Vector<Q>]) -> EnvElement {
        let mut acc = EnvElement::one();
        for f in factors {
            let mut next = EnvElement::zero();
            for (i, c) in f.coords().iter().enumerate() {
                if !c.is_zero() {
                    next.add_scaled(&self.times_letter(&acc, i as u8), c);
                }
            }
            acc = next;
        }
        acc
    }

    /// Normal form of an arbitrary letter sequence.
    pub fn pbw_normalize(&self, letters: &[usize]) -> Result<EnvElement> {
        self.check_letters(letters)?;
        let mut acc = EnvElement::one();
        for &x in letters {
            acc = self.times_letter(&acc, x as u8);
        }
        Ok(acc)
    }

    fn check_letters(&self, letters: &[usize]) -> Result<()> {
        match letters.iter().find(|&&l| l >= self.dim()) {
            Some(&bad) => Err(Error::InvalidInput(alloc::format!("letter {bad} out of range for dimension {}", self.dim()))),
            None => Ok(()),
        }
    }

    /// Reference normalizer: repeatedly rewrites the leftmost or rightmost adjacent
    /// inversion of some raw word. No memoization, no sharing with [`Env::mul`].
    pub fn normalize_with(&self, letters: &[usize], order: RewriteOrder) -> Result<EnvElement> {
        self.check_letters(letters)?;
        let mut pending: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
        pending.insert(letters.iter().map(|&l| l as u8).collect(), Q::one());
        let mut done = EnvElement::zero();
        while let Some((word, c)) = pending.pop_first() {
            if c.is_zero() {
                continue;
            }
            let inversions = word.windows(2).enumerate().filter(|(_, p)| p[0] > p[1]).map(|(i, _)| i);
            let pos = match order {
                RewriteOrder::Leftmost => inversions.min(),
                RewriteOrder::Rightmost => inversions.max(),
            };
            let Some(p) = pos else {
                done.add_term(Word(word), c);
                continue;
            };
            let (b, a) = (word[p], word[p + 1]);
            let mut swapped = word.clone();
            swapped.swap(p, p + 1);
            *pending.entry(swapped).or_insert_with(Q::zero) += c.clone();
            for k in 0..self.dim() {
                let s = self.algebra.c(b as usize, a as usize, k);
                if s.is_zero() {
                    continue;
                }
                let mut shorter = word[..p].to_vec();
                shorter.push(k as u8);
                shorter.extend_from_slice(&word[p + 2..]);
                *pending.entry(shorter).or_insert_with(Q::zero) += c.clone() * s.clone();
            }
        }
        Ok(done)
    }

    /// Unshuffle coproduct; legs of sorted words are sorted, so no renormalization is needed.
    pub fn coproduct(&self, a: &EnvElement) -> Tensor {
        let mut out = Tensor::zero(2);
        for (w, c) in a.terms() {
            for (l, r) in w.unshuffles() {
                out.add_term(alloc::vec![l, r], c.clone());
            }
        }
        out
    }

    pub fn coproduct_word(&self, w: &Word) -> Tensor {
        self.coproduct(&EnvElement::term(w.clone(), Q::one()))
    }

    pub fn counit(&self, a: &EnvElement) -> Q {
        a.counit()
    }

    /// `S(x_{i1} ⋯ x_{in}) = (-1)^n x_{in} ⋯ x_{i1}`, renormalized.
    pub fn antipode(&self, a: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (w, c) in a.terms() {
            out.add_scaled(&self.antipode_word(w), c);
        }
        out
    }

    pub fn antipode_word(&self, w: &Word) -> EnvElement {
        let sign = if w.len().is_multiple_of(2) { Q::one() } else { -Q::one() };
        let mut acc = EnvElement::scalar(sign);
        for &x in w.raw().iter().rev() {
            acc = self.times_letter(&acc, x);
        }
        acc
    }

    /// `Δ(A) = A ⊗ 1 + 1 ⊗ A`
    pub fn is_primitive(&self, a: &EnvElement) -> bool {
        let mut expected = Tensor::product_of(a, &EnvElement::one());
        expected.add_scaled(&Tensor::product_of(&EnvElement::one(), a), &Q::one());
        self.coproduct(a) == expected
    }

    /// `A ≠ 0` and `Δ(A) = A ⊗ A` up to total word length `max_len`.
    pub fn is_grouplike(&self, a: &EnvElement) -> bool {
        !a.is_zero() && self.coproduct(a).truncate(self.max_len) == Tensor::product_of(a, a).truncate(self.max_len)
    }

    /// Truncated exponential; see [`HopfStructure::exp`].
    pub fn exp(&self, a: &EnvElement) -> Result<EnvElement> {
        PlainHopf(self).exp(a)
    }

    /// Truncated logarithm; see [`HopfStructure::log`].
    pub fn log(&self, a: &EnvElement) -> Result<EnvElement> {
        PlainHopf(self).log(a)
    }

    /// Applies a Lie-level linear map letter-wise as an algebra morphism into `target`.
    pub fn morphism_image(&self, w: &Word, images: &[Vector<Q>], target: &Env) -> EnvElement {
        let factors: Vec<Vector<Q>> = w.letters().map(|i| images[i].clone()).collect();
        target.mul_lie_sequence(&factors)
    }
}

/// Largest absolute coefficient of `a - b`.
pub fn difference(a: &EnvElement, b: &EnvElement) -> f64 {
    a.sub(b).max_abs()
}
