use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::hopf::HopfStructure;
use super::{Env, EnvElement, Word, Q};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::Vector;
use crate::partitions::{set_partitions, Partition};
use crate::postlie::BilinearProduct;
use crate::rmatrix::{RMatrixContext, Sign};
use crate::scalar::Scalar;

/// Lie algebra `ḡ` with bracket `x ▷ y - y ▷ x + [x, y]`: the commutator of
/// letters under the star product. Fails with `JacobiViolation` when `▷` does
/// not lift to an associative star product.
pub fn star_commutator_algebra(algebra: &LieAlgebra<Q>, product: &BilinearProduct<Q>) -> Result<LieAlgebra<Q>> {
    let n = algebra.dim();
    if product.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: product.dim() });
    }
    let mut structure = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let v = product.basis_product(i, j).sub(&product.basis_product(j, i)).add(&algebra.basis_bracket(i, j));
            structure.extend(v.into_coords());
        }
    }
    LieAlgebra::from_dense(n, algebra.labels().to_vec(), structure, None, algebra.tolerance())
}

type WordPairMemo = RefCell<BTreeMap<(Word, Word), EnvElement>>;

/// `U(g)` with the lifted product `▷`, the star product
/// `A ∗ B = Σ A₍₁₎ (A₍₂₎ ▷ B)` and its antipode, plus the isomorphism
/// `φ: U(ḡ) → U∗(g)` and its inverse.
///
/// The lift follows `1 ▷ A = A`, `A ▷ 1 = ε(A)`,
/// `xA ▷ y = x ▷ (A ▷ y) - (x ▷ A) ▷ y` and
/// `A ▷ (bB) = Σ (A₍₁₎ ▷ b)(A₍₂₎ ▷ B)`. All results are memoized per word pair.
#[derive(Debug)]
pub struct StarAlgebra {
    env: Env,
    bar: Env,
    product: BilinearProduct<Q>,
    lift_memo: WordPairMemo,
    star_memo: WordPairMemo,
    antipode_memo: RefCell<BTreeMap<Word, EnvElement>>,
    phi_inv_memo: RefCell<BTreeMap<Word, EnvElement>>,
}

impl StarAlgebra {
    pub fn new(algebra: LieAlgebra<Q>, product: BilinearProduct<Q>, max_len: usize) -> Result<Self> {
        let bar_algebra = star_commutator_algebra(&algebra, &product)?;
        Ok(Self {
            env: Env::new(algebra, max_len)?,
            bar: Env::new(bar_algebra, max_len)?,
            product,
            lift_memo: RefCell::default(),
            star_memo: RefCell::default(),
            antipode_memo: RefCell::default(),
            phi_inv_memo: RefCell::default(),
        })
    }

    /// Star structure of `▷₋`, for which `ḡ` is the derived algebra `g_R`.
    pub fn for_rmatrix(ctx: &RMatrixContext<Q>, max_len: usize) -> Result<Self> {
        Self::new(ctx.algebra().clone(), ctx.post_tensor(Sign::Minus), max_len)
    }

    /// `U(g)`
    pub fn plain(&self) -> &Env {
        &self.env
    }

    /// `U(ḡ)`
    pub fn bar(&self) -> &Env {
        &self.bar
    }

    pub fn product(&self) -> &BilinearProduct<Q> {
        &self.product
    }

    fn lie_product(&self, x: usize, v: &EnvElement) -> EnvElement {
        let n = self.env.dim();
        EnvElement::from_vector(&self.product.apply_unchecked(&Vector::basis(n, x), &v.lie_part(n)))
    }

    /// `a ▷ b` on PBW words.
    pub fn lift_words(&self, a: &Word, b: &Word) -> EnvElement {
        if a.is_empty() {
            return EnvElement::term(b.clone(), Q::one());
        }
        if b.is_empty() {
            return EnvElement::zero();
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.lift_memo.borrow().get(&key) {
            return hit.clone();
        }
        let x = a.first().unwrap();
        let out = if b.len() == 1 {
            if a.len() == 1 {
                self.lie_product(x, &EnvElement::term(b.clone(), Q::one()))
            } else {
                let rest = a.tail();
                let inner = self.lie_product(x, &self.lift_words(&rest, b));
                let mut outer = EnvElement::zero();
                for (w, c) in self.lift_words(&Word::letter(x), &rest).terms() {
                    outer.add_scaled(&self.lift_words(w, b), c);
                }
                inner.sub(&outer)
            }
        } else {
            let head = Word::letter(b.first().unwrap());
            let rest = b.tail();
            let mut out = EnvElement::zero();
            for (a1, a2) in a.unshuffles() {
                let left = self.lift_words(&a1, &head);
                if left.is_zero() {
                    continue;
                }
                let right = self.lift_words(&a2, &rest);
                out.add_scaled(&self.env.mul_full(&left, &right), &Q::one());
            }
            out
        };
        self.lift_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// `A ▷ B`, bilinear.
    pub fn lift(&self, a: &EnvElement, b: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_scaled(&self.lift_words(wa, wb), &(ca * cb));
            }
        }
        out
    }

    /// `A ∗ B` truncated at word length `N`.
    pub fn star_mul(&self, a: &EnvElement, b: &EnvElement) -> EnvElement {
        HopfStructure::mul(self, a, b)
    }

    /// `S∗(A)`
    pub fn star_antipode(&self, a: &EnvElement) -> EnvElement {
        HopfStructure::antipode(self, a)
    }

    /// Expansion of `φ(v_1 ⋯ v_n)` over set partitions: one `U(g)` element per partition.
    /// Each block contributes `v_{k1} ▷ (v_{k2} ▷ (⋯ ▷ v_{kl}))`, and blocks are
    /// multiplied in order of increasing maximum.
    pub fn phi_expansion(&self, letters: &[Vector<Q>]) -> Vec<(Partition, EnvElement)> {
        set_partitions(letters.len())
            .map(|p| {
                let mut blocks: Vec<&Vec<usize>> = p.iter().collect();
                blocks.sort_by_key(|b| *b.last().unwrap());
                let factors: Vec<Vector<Q>> = blocks
                    .iter()
                    .map(|b| {
                        let mut acc = letters[*b.last().unwrap()].clone();
                        for &k in b.iter().rev().skip(1) {
                            acc = self.product.apply_unchecked(&letters[k], &acc);
                        }
                        acc
                    })
                    .collect();
                let term = self.env.mul_lie_sequence(&factors);
                (p, term)
            })
            .collect()
    }

    /// `φ(v_1 ⋯ v_n)` as a sum over set partitions.
    pub fn phi(&self, letters: &[Vector<Q>]) -> EnvElement {
        let mut out = EnvElement::zero();
        for (_, term) in self.phi_expansion(letters) {
            out.add_scaled(&term, &Q::one());
        }
        out
    }

    /// `φ(v_1 w) = v_1 φ(w) + v_1 ▷ φ(w)`
    pub fn phi_recursive(&self, letters: &[Vector<Q>]) -> EnvElement {
        let Some((first, rest)) = letters.split_first() else {
            return EnvElement::one();
        };
        let tail = self.phi_recursive(rest);
        let x = EnvElement::from_vector(first);
        self.env.mul_full(&x, &tail).add(&self.lift(&x, &tail))
    }

    /// `φ` on an element of `U(ḡ)`; sorted words are products of their letters.
    pub fn phi_element(&self, a: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (w, c) in a.terms() {
            out.add_scaled(&self.phi(&self.letter_vectors(w)), c);
        }
        out
    }

    fn letter_vectors(&self, w: &Word) -> Vec<Vector<Q>> {
        w.letters().map(|i| Vector::basis(self.env.dim(), i)).collect()
    }

    /// `φ⁻¹` of the `U(g)` product `v_1 ⋯ v_n`, as an element of `U(ḡ)`:
    /// `φ⁻¹(v_1 ⋯ v_n) = v_1 · ⋯ · v_n - Σ_{π > 0̂} φ⁻¹(X_π)`,
    /// the sum running over partitions with fewer than `n` blocks.
    pub fn phi_inverse(&self, letters: &[Vector<Q>]) -> EnvElement {
        let n = letters.len();
        let mut out = self.bar.mul_lie_sequence(letters);
        for (p, term) in self.phi_expansion(letters) {
            if p.len() == n {
                continue;
            }
            out = out.sub(&self.phi_inverse_element(&term));
        }
        out
    }

    /// `φ⁻¹` on an element of `U(g)`.
    pub fn phi_inverse_element(&self, a: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (w, c) in a.terms() {
            out.add_scaled(&self.phi_inverse_word(w), c);
        }
        out
    }

    fn phi_inverse_word(&self, w: &Word) -> EnvElement {
        if w.len() <= 1 {
            return EnvElement::term(w.clone(), Q::one());
        }
        if let Some(hit) = self.phi_inv_memo.borrow().get(w) {
            return hit.clone();
        }
        let out = self.phi_inverse(&self.letter_vectors(w));
        self.phi_inv_memo.borrow_mut().insert(w.clone(), out.clone());
        out
    }
}

impl HopfStructure for StarAlgebra {
    fn env(&self) -> &Env {
        &self.env
    }

    fn mul_words(&self, a: &Word, b: &Word) -> EnvElement {
        if a.is_empty() {
            return EnvElement::term(b.clone(), Q::one());
        }
        if b.is_empty() {
            return EnvElement::term(a.clone(), Q::one());
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.star_memo.borrow().get(&key) {
            return hit.clone();
        }
        let mut out = EnvElement::zero();
        for (a1, a2) in a.unshuffles() {
            let lifted = self.lift_words(&a2, b);
            if !lifted.is_zero() {
                out.add_scaled(&self.env.mul_full(&EnvElement::term(a1, Q::one()), &lifted), &Q::one());
            }
        }
        self.star_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// `S∗(w) = -Σ w₍₁₎ ∗ S∗(w₍₂₎)` over splittings with nonempty `w₍₁₎`.
    fn antipode_word(&self, w: &Word) -> EnvElement {
        if w.is_empty() {
            return EnvElement::one();
        }
        if let Some(hit) = self.antipode_memo.borrow().get(w) {
            return hit.clone();
        }
        let mut out = EnvElement::zero();
        for (w1, w2) in w.unshuffles() {
            if w1.is_empty() {
                continue;
            }
            let tail = self.antipode_word(&w2);
            out.add_scaled(&self.mul_full(&EnvElement::term(w1, Q::one()), &tail), &-Q::one());
        }
        self.antipode_memo.borrow_mut().insert(w.clone(), out.clone());
        out
    }
}
