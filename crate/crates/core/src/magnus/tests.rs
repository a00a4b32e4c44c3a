use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::liealg::{builtin, Builtin};
use crate::linalg::Matrix;
use crate::rmatrix::{splitting_r, Sign, Theta};

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn r(a: i64, b: i64) -> Q {
    Q::from_ratio(a, b)
}

fn split(n: usize) -> RMatrixContext<Q> {
    let (g, s) = builtin::<Q>(Builtin::UpperLowerSplit(n)).unwrap();
    let s = s.unwrap();
    splitting_r(g, &s.plus, &s.minus).unwrap()
}

fn sl2_borel() -> RMatrixContext<Q> {
    let (g, _) = builtin::<Q>(Builtin::Sl2).unwrap();
    splitting_r(g, &[0, 1], &[2]).unwrap()
}

fn generic(dim: usize) -> Vector<Q> {
    Vector::new((0..dim).map(|i| r(i as i64 * 2 - 1, i as i64 + 1)).collect())
}

#[test]
fn bernoulli_values() {
    let expected = [r(1, 1), r(-1, 2), r(1, 6), q(0), r(-1, 30), q(0), r(1, 42), q(0), r(-1, 30), q(0), r(5, 66)];
    assert_eq!(bernoulli(10), expected.to_vec());
    assert_eq!(bernoulli(0), vec![q(1)]);
}

#[test]
fn bch_through_third_order() {
    let (g, _) = builtin::<Q>(Builtin::Sl2).unwrap();
    let (x, y) = (Vector::from_i64(&[1, 2, 0]), Vector::from_i64(&[0, -1, 3]));
    let z = bch(&g, &x, &y, 3).unwrap();
    let br = |a: &Vector<Q>, b: &Vector<Q>| g.bracket(a, b).unwrap();
    let xy = br(&x, &y);
    assert_eq!(z.coeff(0), &g.zero());
    assert_eq!(z.coeff(1), &x.add(&y));
    assert_eq!(z.coeff(2), &xy.scale(&r(1, 2)));
    let third = br(&x, &xy).sub(&br(&y, &xy)).scale(&r(1, 12));
    assert_eq!(z.coeff(3), &third);
}

#[test]
fn second_and_third_terms_in_closed_form() {
    for ctx in [split(2), sl2_borel(), split(3)] {
        let star = StarAlgebra::for_rmatrix(&ctx, 3).unwrap();
        let p = ctx.post_tensor(Sign::Minus);
        let g = ctx.algebra();
        let x = generic(g.dim());
        let chi = postlie_magnus(&star, &x, 3).unwrap();
        let pr = |a: &Vector<Q>, b: &Vector<Q>| p.apply(a, b).unwrap();
        let xx = pr(&x, &x);
        assert_eq!(chi.coeff(1), &x);
        assert_eq!(chi.coeff(2), &xx.scale(&r(-1, 2)));
        // χ₃ = ¼(x▷x)▷x + (1/12)x▷(x▷x) + (1/12)[x▷x, x]
        let mut third = pr(&xx, &x).scale(&r(1, 4));
        third.axpy(&r(1, 12), &pr(&x, &xx));
        third.axpy(&r(1, 12), &g.bracket(&xx, &x).unwrap());
        assert_eq!(chi.coeff(3), &third);
    }
}

#[test]
fn identity_r_matrices_give_linear_chi() {
    let (g, _) = builtin::<Q>(Builtin::Gl(2)).unwrap();
    for sign in [1, -1] {
        let rm = LinearEndo::identity(4).scale(&q(sign));
        let ctx = RMatrixContext::new(g.clone(), rm, Theta::Mcybe).unwrap();
        let star = StarAlgebra::for_rmatrix(&ctx, 5).unwrap();
        let x = generic(4);
        let chi = postlie_magnus(&star, &x, 5).unwrap();
        assert_eq!(chi, GradedLieElement::from_coeffs(vec![Vector::zeros(4), x.clone()]).truncate(5));
    }
}

#[test]
fn grouplike_identity_holds() {
    for ctx in [split(2), sl2_borel()] {
        let star = StarAlgebra::for_rmatrix(&ctx, 4).unwrap();
        let x = generic(ctx.algebra().dim());
        let report = verify_grouplike_identity(&star, &x, 4).unwrap();
        assert!(report.ok, "first mismatch at t^{:?}", report.first_mismatch);
        assert!(report.lhs.is_grouplike(star.plain()));
    }
}

#[test]
fn chi_satisfies_its_differential_equation() {
    for ctx in [split(2), sl2_borel()] {
        let star = StarAlgebra::for_rmatrix(&ctx, 5).unwrap();
        let x = generic(ctx.algebra().dim());
        let report = verify_chi_ode(&star, &x, 5).unwrap();
        assert!(report.ok, "{}\nvs\n{}", report.lhs.render(), report.rhs.render());
    }
    let star = StarAlgebra::for_rmatrix(&split(2), 3).unwrap();
    assert!(verify_chi_ode(&star, &generic(4), 0).is_err());
}

#[test]
fn lie_level_solver_matches_enveloping_recursion() {
    for ctx in [split(2), sl2_borel(), split(3)] {
        let order = if ctx.algebra().dim() > 4 { 5 } else { 6 };
        let star = StarAlgebra::for_rmatrix(&ctx, order).unwrap();
        let x = generic(ctx.algebra().dim());
        let exact = postlie_magnus(&star, &x, order).unwrap();
        let lie = chi_lie(&ctx.post_tensor(Sign::Minus), ctx.derived_algebra(), &x, order).unwrap();
        assert_eq!(exact, lie);
        // the float path agrees to rounding
        let ctx_f = ctx.to_f64();
        let xf = x.map(|c| c.to_f64());
        let float = chi_lie(&ctx_f.post_tensor(Sign::Minus), ctx_f.derived_algebra(), &xf, order).unwrap();
        let diff = float.sub(&exact.map_scalar(|c| c.to_f64()));
        assert!(diff.max_abs() < 1e-12);
    }
}

#[test]
fn chi_pm_sums_back_to_chi() {
    let ctx = split(2);
    let star = StarAlgebra::for_rmatrix(&ctx, 4).unwrap();
    let chi = postlie_magnus(&star, &generic(4), 4).unwrap();
    let (plus, minus) = chi_pm(&chi, &ctx).unwrap();
    assert_eq!(plus.add(&minus), chi);
    assert!(chi_pm(&GradedLieElement::<Q>::zeros(3, 2), &ctx).is_err());
}

#[test]
fn dexp_and_its_inverse_compose_to_identity() {
    let ctx = sl2_borel();
    let bar = ctx.derived_algebra();
    let beta = GradedLieElement::from_coeffs(vec![Vector::zeros(3), Vector::from_i64(&[1, 0, 2]), Vector::from_i64(&[0, 1, -1])]).truncate(6);
    let v = GradedLieElement::from_coeffs(vec![Vector::from_i64(&[2, -1, 1]), Vector::from_i64(&[0, 3, 0])]).truncate(6);
    let there = dexp_star(&beta, &v, bar, 6).unwrap();
    let back = dexp_star_inv(&beta, &there, bar, 6).unwrap();
    assert_eq!(back, v);
    assert!(dexp_star(&beta, &GradedLieElement::zeros(2, 6), bar, 6).is_err());
}

/// 2x2 matrix multiplication on `E_ij`, an associative hence pre-Lie product.
fn matrix_product() -> BilinearProduct<Q> {
    BilinearProduct::from_fn(4, |a, b| {
        let (i, j, k, l) = (a / 2, a % 2, b / 2, b % 2);
        if j == k {
            Vector::basis(4, i * 2 + l)
        } else {
            Vector::zeros(4)
        }
    })
}

#[test]
fn prelie_expansion_closed_form_and_agreement() {
    let product = matrix_product();
    let abelian = LieAlgebra::abelian(4);
    let x = generic(4);
    let chi = prelie_magnus(&product, &abelian, &x, 5).unwrap();
    let pr = |a: &Vector<Q>, b: &Vector<Q>| product.apply(a, b).unwrap();
    let xx = pr(&x, &x);
    assert_eq!(chi.coeff(2), &xx.scale(&r(-1, 2)));
    let mut third = pr(&xx, &x).scale(&r(1, 4));
    third.axpy(&r(1, 12), &pr(&x, &xx));
    assert_eq!(chi.coeff(3), &third);
    // the pre-Lie case is the post-Lie recursion over an abelian bracket
    let star = StarAlgebra::new(abelian, product, 5).unwrap();
    assert_eq!(postlie_magnus(&star, &x, 5).unwrap(), chi);
}

#[test]
fn prelie_expansion_rejects_bad_inputs() {
    let (g, _) = builtin::<Q>(Builtin::Gl(2)).unwrap();
    let x = generic(4);
    assert_eq!(prelie_magnus(&matrix_product(), &g, &x, 3), Err(Error::NotAbelian));
    let t: Vec<Q> = (0..64).map(|i| q((i * 7 % 5) as i64 - 2)).collect();
    let bad = BilinearProduct::new(4, t).unwrap();
    assert!(matches!(prelie_magnus(&bad, &LieAlgebra::abelian(4), &x, 3), Err(Error::NotPreLie { .. })));
}

#[test]
fn graded_element_calculus() {
    let a = GradedLieElement::from_coeffs(vec![Vector::from_i64(&[1, 0]), Vector::from_i64(&[0, 2]), Vector::from_i64(&[3, 3])]);
    assert_eq!(a.derivative(), GradedLieElement::from_coeffs(vec![Vector::from_i64(&[0, 2]), Vector::from_i64(&[6, 6])]));
    assert_eq!(a.evaluate(&q(2)), Vector::from_i64(&[13, 16]));
    assert_eq!(a.truncate(0).order(), 0);
    assert_eq!(a.render().lines().count(), 3);
    let m = LinearEndo::from_matrix(Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap()).unwrap();
    assert_eq!(a.map(&m).coeff(1), &Vector::from_i64(&[2, 0]));
}
