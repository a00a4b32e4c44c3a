use postlie_core::env::{check_hopf_axioms, phi_multiplicativity, Env, EnvElement, PlainHopf, RewriteOrder, StarAlgebra, Word};
use postlie_core::liealg::{builtin, Builtin, LieAlgebra};
use postlie_core::linalg::{LinearEndo, Matrix, Vector};
use postlie_core::magnus::{bch, chi_lie, postlie_magnus, prelie_magnus};
use postlie_core::postlie::BilinearProduct;
use postlie_core::rmatrix::{splitting_r, RMatrixContext, Sign, Theta};
use postlie_core::scalar::{Rational, Scalar};
use proptest::prelude::*;

type Q = Rational;

fn sl2() -> LieAlgebra<Q> {
    builtin::<Q>(Builtin::Sl2).unwrap().0
}

fn sl2_borel() -> RMatrixContext<Q> {
    splitting_r(sl2(), &[0, 1], &[2]).unwrap()
}

fn split2() -> RMatrixContext<Q> {
    let (g, s) = builtin::<Q>(Builtin::UpperLowerSplit(2)).unwrap();
    let s = s.unwrap();
    splitting_r(g, &s.plus, &s.minus).unwrap()
}

fn letters(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..dim, 0..=max_len)
}

/// Sums of a few small-coefficient words, normalized into PBW form.
fn element(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((letters(dim, max_len), -3i64..=3), 1..4)
}

fn build(env: &Env, raw: &[(Vec<usize>, i64)]) -> EnvElement {
    raw.iter().fold(EnvElement::zero(), |acc, (w, c)| acc.add(&env.pbw_normalize(w).unwrap().scale(&Q::from_i64(*c))))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector<Q>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), dim).prop_map(|v| Vector::new(v.into_iter().map(|(a, b)| Q::from_ratio(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rewrite_order_does_not_matter(w in letters(3, 6)) {
        let env = Env::new(sl2(), 6).unwrap();
        let memo = env.pbw_normalize(&w).unwrap();
        prop_assert_eq!(&memo, &env.normalize_with(&w, RewriteOrder::Leftmost).unwrap());
        prop_assert_eq!(&memo, &env.normalize_with(&w, RewriteOrder::Rightmost).unwrap());
    }

    #[test]
    fn normalization_respects_concatenation(a in letters(3, 3), b in letters(3, 3)) {
        let env = Env::new(sl2(), 6).unwrap();
        let joint: Vec<usize> = a.iter().chain(&b).copied().collect();
        let product = env.mul(&env.pbw_normalize(&a).unwrap(), &env.pbw_normalize(&b).unwrap());
        prop_assert_eq!(env.pbw_normalize(&joint).unwrap(), product);
    }

    #[test]
    fn plain_hopf_axioms(a in element(3, 2), b in element(3, 2)) {
        let env = Env::new(sl2(), 4).unwrap();
        let report = check_hopf_axioms(&PlainHopf(&env), &build(&env, &a), &build(&env, &b));
        prop_assert!(report.ok(), "{:?}", report.failures());
    }

    #[test]
    fn star_hopf_axioms(a in element(4, 2), b in element(4, 2)) {
        let star = StarAlgebra::for_rmatrix(&split2(), 4).unwrap();
        let (a, b) = (build(star.plain(), &a), build(star.plain(), &b));
        let report = check_hopf_axioms(&star, &a, &b);
        prop_assert!(report.ok(), "{:?}", report.failures());
    }

    #[test]
    fn star_product_is_associative(a in element(3, 2), b in element(3, 2), c in element(3, 1)) {
        let star = StarAlgebra::for_rmatrix(&sl2_borel(), 5).unwrap();
        let env = star.plain();
        let (a, b, c) = (build(env, &a), build(env, &b), build(env, &c));
        prop_assert_eq!(star.star_mul(&star.star_mul(&a, &b), &c), star.star_mul(&a, &star.star_mul(&b, &c)));
    }

    #[test]
    fn phi_round_trips(w in letters(3, 4)) {
        let ctx = sl2_borel();
        let star = StarAlgebra::for_rmatrix(&ctx, 4).unwrap();
        let vecs: Vec<_> = w.iter().map(|&i| ctx.algebra().basis(i)).collect();
        let phi = star.phi(&vecs);
        prop_assert_eq!(&phi, &star.phi_recursive(&vecs));
        prop_assert_eq!(star.phi_inverse_element(&phi), star.bar().pbw_normalize(&w).unwrap());
        prop_assert_eq!(star.phi_element(&star.phi_inverse(&vecs)), star.plain().pbw_normalize(&w).unwrap());
    }

    #[test]
    fn phi_is_multiplicative(a in letters(4, 2), b in letters(4, 2)) {
        let star = StarAlgebra::for_rmatrix(&split2(), 4).unwrap();
        prop_assert!(phi_multiplicativity(&star, &a, &b).holds());
    }

    #[test]
    fn lie_level_chi_matches_enveloping_chi(x in vector(3)) {
        let ctx = sl2_borel();
        let star = StarAlgebra::for_rmatrix(&ctx, 5).unwrap();
        let exact = postlie_magnus(&star, &x, 5).unwrap();
        prop_assert_eq!(exact, chi_lie(&ctx.post_tensor(Sign::Minus), ctx.derived_algebra(), &x, 5).unwrap());
    }

    #[test]
    fn chi_is_homogeneous(x in vector(4), s in (-3i64..=3, 1i64..=3)) {
        // χ_m(sx) = s^m χ_m(x)
        let ctx = split2();
        let s = Q::from_ratio(s.0, s.1);
        let p = ctx.post_tensor(Sign::Minus);
        let chi = chi_lie(&p, ctx.derived_algebra(), &x, 4).unwrap();
        let scaled = chi_lie(&p, ctx.derived_algebra(), &x.scale(&s), 4).unwrap();
        let mut power = Q::one();
        for m in 0..=4 {
            prop_assert_eq!(scaled.coeff(m), &chi.coeff(m).scale(&power));
            power *= s.clone();
        }
    }

    #[test]
    fn bch_is_antisymmetric_under_inversion(x in vector(3), y in vector(3)) {
        // log(e^{-y} e^{-x}) = -log(e^x e^y)
        let g = sl2();
        let z = bch(&g, &x, &y, 4).unwrap();
        let w = bch(&g, &y.neg(), &x.neg(), 4).unwrap();
        prop_assert_eq!(w, z.neg());
    }

    #[test]
    fn prelie_from_cybe_solutions_agrees(x in vector(4), a in 1i64..=3) {
        // R = a E11 ⊗ E11* solves the CYBE on gl(2); [Rx, y] is pre-Lie over the abelian bracket
        let (g, _) = builtin::<Q>(Builtin::Gl(2)).unwrap();
        let mut m = Matrix::zeros(4, 4);
        m[(0, 0)] = Q::from_i64(a);
        let ctx = RMatrixContext::new(g.clone(), LinearEndo::from_matrix(m).unwrap(), Theta::Cybe).unwrap();
        let product = BilinearProduct::from_fn(4, |i, j| g.bracket(&ctx.r().apply(&g.basis(i)), &g.basis(j)).unwrap());
        let abelian = LieAlgebra::abelian(4);
        let pre = prelie_magnus(&product, &abelian, &x, 4).unwrap();
        let star = StarAlgebra::new(abelian, product, 4).unwrap();
        prop_assert_eq!(pre, postlie_magnus(&star, &x, 4).unwrap());
    }
}

#[test]
fn words_carry_their_letters() {
    let w = Word::from_letters(&[0, 2, 2]);
    assert_eq!(w.letters().collect::<Vec<_>>(), vec![0, 2, 2]);
    assert!(w.is_sorted());
    assert_eq!(w.unshuffles().count(), 8);
}
