use alloc::vec::Vec;

use super::hopf::HopfStructure;
use super::star::StarAlgebra;
use super::{Env, EnvElement, Word, Q};
use crate::linalg::{LinearEndo, Vector};
use crate::rmatrix::RMatrixContext;

/// Both sides of an identity between enveloping-algebra elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: EnvElement,
    pub rhs: EnvElement,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn residual(&self) -> EnvElement {
        self.lhs.sub(&self.rhs)
    }
}

fn images(map: &LinearEndo<Q>, w: &Word) -> Vec<Vector<Q>> {
    let n = map.dim();
    w.letters().map(|i| map.apply(&Vector::basis(n, i))).collect()
}

/// `R(w)` for a Lie morphism `R` extended to words of `U(g_R)`.
fn morphism(env: &Env, map: &LinearEndo<Q>, w: &Word) -> EnvElement {
    env.mul_lie_sequence(&images(map, w))
}

/// `S(R(w)) = (-1)^{|w|} R(x_{in}) ⋯ R(x_{i1})`
fn morphism_antipode(env: &Env, map: &LinearEndo<Q>, w: &Word) -> EnvElement {
    let mut factors = images(map, w);
    factors.reverse();
    let out = env.mul_lie_sequence(&factors);
    if w.len().is_multiple_of(2) {
        out
    } else {
        out.neg()
    }
}

/// `F = m ∘ (id ⊗ S) ∘ (R₊ ⊗ R₋) ∘ Δ` from `U(g_R)` to `U(g)`. `a` is written in
/// PBW words of `g_R`; its coproduct is the same unshuffle sum as in `U(g)`.
pub fn f_map(env: &Env, ctx: &RMatrixContext<Q>, a: &EnvElement) -> EnvElement {
    let (r_plus, r_minus) = ctx.r_plus_minus();
    let mut out = EnvElement::zero();
    for (w, c) in a.terms() {
        for (w1, w2) in w.unshuffles() {
            let left = morphism(env, r_plus, &w1);
            let right = morphism_antipode(env, r_minus, &w2);
            out.add_scaled(&env.mul_full(&left, &right), c);
        }
    }
    out
}

/// `F(a) ∗ B` against `Σ R₊(a₍₁₎) · B · S(R₋(a₍₂₎))`. The right side uses only
/// products in `U(g)`, never the lifted product.
pub fn sts_product_check(star: &StarAlgebra, ctx: &RMatrixContext<Q>, a: &EnvElement, b: &EnvElement) -> IdentityCheck {
    let env = star.plain();
    let lhs = star.mul_full(&f_map(env, ctx, a), b);
    let (r_plus, r_minus) = ctx.r_plus_minus();
    let mut rhs = EnvElement::zero();
    for (w, c) in a.terms() {
        for (w1, w2) in w.unshuffles() {
            let left = env.mul_full(&morphism(env, r_plus, &w1), b);
            let right = morphism_antipode(env, r_minus, &w2);
            rhs.add_scaled(&env.mul_full(&left, &right), c);
        }
    }
    IdentityCheck { lhs, rhs }
}

/// `φ(w · w') = φ(w) ∗ φ(w')` for letter sequences `w, w'` of `ḡ`.
pub fn phi_multiplicativity(star: &StarAlgebra, w: &[usize], w2: &[usize]) -> IdentityCheck {
    let n = star.plain().dim();
    let vecs = |ls: &[usize]| ls.iter().map(|&i| Vector::basis(n, i)).collect::<Vec<_>>();
    let joint: Vec<usize> = w.iter().chain(w2).copied().collect();
    let lhs = star.phi(&vecs(&joint));
    let rhs = star.mul_full(&star.phi(&vecs(w)), &star.phi(&vecs(w2)));
    IdentityCheck { lhs, rhs }
}
