use alloc::vec::Vec;

use super::{Env, EnvElement, Tensor, Word, Q};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A Hopf algebra structure on the PBW-word space of an [`Env`], sharing its
/// unshuffle coproduct and counit. Word products here are never truncated.
pub trait HopfStructure {
    fn env(&self) -> &Env;

    fn mul_words(&self, a: &Word, b: &Word) -> EnvElement;

    fn antipode_word(&self, w: &Word) -> EnvElement;

    /// Untruncated bilinear extension of [`HopfStructure::mul_words`].
    fn mul_full(&self, a: &EnvElement, b: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_scaled(&self.mul_words(wa, wb), &(ca * cb));
            }
        }
        out
    }

    fn mul(&self, a: &EnvElement, b: &EnvElement) -> EnvElement {
        self.mul_full(a, b).truncate(self.env().max_len())
    }

    fn antipode(&self, a: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (w, c) in a.terms() {
            out.add_scaled(&self.antipode_word(w), c);
        }
        out
    }

    fn coproduct(&self, a: &EnvElement) -> Tensor {
        self.env().coproduct(a)
    }

    fn counit(&self, a: &EnvElement) -> Q {
        a.counit()
    }

    /// `Σ_{n ≤ N} Aⁿ / n!` with words longer than `N` dropped; requires `ε(A) = 0`.
    /// Exact only where truncation does not cut normalization tails; use
    /// [`Series`](super::Series) for identities.
    fn exp(&self, a: &EnvElement) -> Result<EnvElement> {
        if !a.counit().is_zero() {
            return Err(Error::NotInAugmentationIdeal);
        }
        let n = self.env().max_len();
        let mut out = EnvElement::one();
        let mut power = EnvElement::one();
        for k in 1..=n {
            power = self.mul(&power, a).scale(&Q::from_ratio(1, k as i64));
            out.add_scaled(&power, &Q::one());
        }
        Ok(out)
    }

    /// `Σ_{n ≤ N} (-1)^{n-1} (A - 1)ⁿ / n` with words longer than `N` dropped; requires `ε(A) = 1`.
    fn log(&self, a: &EnvElement) -> Result<EnvElement> {
        if !a.counit().is_one() {
            return Err(Error::NotUnitNormalized);
        }
        let u = a.sub(&EnvElement::one());
        let mut out = EnvElement::zero();
        let mut power = EnvElement::one();
        for k in 1..=self.env().max_len() {
            power = self.mul(&power, &u);
            out.add_scaled(&power, &Q::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64));
        }
        Ok(out)
    }
}

/// `U(g)` with concatenation product and the reverse-and-sign antipode.
pub struct PlainHopf<'a>(pub &'a Env);

impl HopfStructure for PlainHopf<'_> {
    fn env(&self) -> &Env {
        self.0
    }

    fn mul_words(&self, a: &Word, b: &Word) -> EnvElement {
        self.0.mul_words(a, b)
    }

    fn antipode_word(&self, w: &Word) -> EnvElement {
        self.0.antipode_word(w)
    }
}

/// Outcome of the Hopf axiom suite on one pair of elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfReport {
    pub coassociative: bool,
    pub counit: bool,
    pub antipode: bool,
    pub multiplicative: bool,
}

impl HopfReport {
    pub fn ok(&self) -> bool {
        self.coassociative && self.counit && self.antipode && self.multiplicative
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in
            [(self.coassociative, "coassociativity"), (self.counit, "counit"), (self.antipode, "antipode"), (self.multiplicative, "multiplicativity")]
        {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

fn counit_tensor(w: &Word) -> Tensor {
    if w.is_empty() {
        Tensor::pure(Vec::new(), Q::one())
    } else {
        Tensor::zero(0)
    }
}

/// Coassociativity and the counit and antipode laws on `a`, and
/// `Δ(ab) = Δ(a)Δ(b)` on the pair. All comparisons are exact.
pub fn check_hopf_axioms<H: HopfStructure + ?Sized>(h: &H, a: &EnvElement, b: &EnvElement) -> HopfReport {
    let env = h.env();
    let delta = h.coproduct(a);

    let left = delta.expand_leg(0, 2, |w| env.coproduct_word(w));
    let right = delta.expand_leg(1, 2, |w| env.coproduct_word(w));
    let coassociative = left == right;

    let eps_left = delta.expand_leg(0, 0, counit_tensor).into_element();
    let eps_right = delta.expand_leg(1, 0, counit_tensor).into_element();
    let counit = eps_left == *a && eps_right == *a;

    let unit = EnvElement::scalar(h.counit(a));
    let s_right = delta.map_leg(1, |w| h.antipode_word(w)).contract(0, |x, y| h.mul_words(x, y)).into_element();
    let s_left = delta.map_leg(0, |w| h.antipode_word(w)).contract(0, |x, y| h.mul_words(x, y)).into_element();
    let antipode = s_right == unit && s_left == unit;

    let lhs = h.coproduct(&h.mul_full(a, b));
    let rhs = delta.mul(&h.coproduct(b), |x, y| h.mul_words(x, y));
    let multiplicative = lhs == rhs;

    HopfReport { coassociative, counit, antipode, multiplicative }
}
