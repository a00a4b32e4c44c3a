//! Classical r-matrices.
//!
//! `R ∈ End(g)` solves the (modified) classical Yang-Baxter equation
//! `[Rx, Ry] = R([Rx, y] + [x, Ry]) - θ[x, y]`. Such an `R` induces the bracket
//! `[x, y]_R = ½([Rx, y] + [x, Ry])`, the maps `R± = ½(R ± id)` and the
//! products `x ▷± y = [R± x, y]`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{in_span, LinearEndo, Vector};
use crate::postlie::BilinearProduct;
use crate::scalar::Scalar;

/// Which half of a splitting, or which of `R±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Side of a subalgebra decomposition `g = g₊ ⊕ g₋`.
pub type Side = Sign;

impl Sign {
    pub fn value<S: Scalar>(self) -> S {
        match self {
            Sign::Plus => S::one(),
            Sign::Minus => -S::one(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

/// `θ = 0` (CYBE) or `θ = 1` (mCYBE).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theta {
    Cybe,
    Mcybe,
}

impl Theta {
    pub fn value<S: Scalar>(self) -> S {
        match self {
            Theta::Cybe => S::zero(),
            Theta::Mcybe => S::one(),
        }
    }

    pub fn from_value<S: Scalar>(value: &S) -> Option<Self> {
        if value.is_zero() {
            Some(Theta::Cybe)
        } else if value.is_one() {
            Some(Theta::Mcybe)
        } else {
            None
        }
    }
}

/// `R([Rx,y] + [x,Ry]) - θ[x,y] - [Rx,Ry]`
pub fn mcybe_defect<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>, theta: &S, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
    algebra.conform(x)?;
    algebra.conform(y)?;
    check_endo(algebra, r)?;
    Ok(mcybe_defect_unchecked(algebra, r, theta, x, y))
}

fn mcybe_defect_unchecked<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>, theta: &S, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
    let rx = r.apply(x);
    let ry = r.apply(y);
    let inner = algebra.bracket_unchecked(&rx, y).add(&algebra.bracket_unchecked(x, &ry));
    let mut out = r.apply(&inner);
    out.axpy(&-theta.clone(), &algebra.bracket_unchecked(x, y));
    out.sub(&algebra.bracket_unchecked(&rx, &ry))
}

fn check_endo<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>) -> Result<()> {
    if r.dim() == algebra.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: algebra.dim(), found: r.dim() })
    }
}

/// Outcome of [`is_rmatrix`].
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixReport {
    pub ok: bool,
    /// Basis pair with the largest defect, if any defect is nonzero.
    pub worst_pair: Option<(usize, usize)>,
    pub worst_defect_norm: f64,
}

/// Checks the (modified) Yang-Baxter equation on all basis pairs.
pub fn is_rmatrix<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>, theta: &S) -> RMatrixReport {
    let tol = algebra.tolerance();
    let mut report = RMatrixReport { ok: r.dim() == algebra.dim(), worst_pair: None, worst_defect_norm: 0.0 };
    if !report.ok {
        report.worst_defect_norm = f64::INFINITY;
        return report;
    }
    let n = algebra.dim();
    for i in 0..n {
        // the defect is antisymmetric in (x, y)
        for j in i + 1..n {
            let d = mcybe_defect_unchecked(algebra, r, theta, &algebra.basis(i), &algebra.basis(j));
            if !d.is_negligible(tol) {
                report.ok = false;
            }
            let norm = d.max_abs();
            if norm > report.worst_defect_norm || (report.worst_pair.is_none() && !d.is_zero()) {
                report.worst_defect_norm = norm;
                report.worst_pair = Some((i, j));
            }
        }
    }
    report
}

/// `½([Rx, y] + [x, Ry])`
pub fn r_bracket<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
    algebra.conform(x)?;
    algebra.conform(y)?;
    check_endo(algebra, r)?;
    Ok(r_bracket_unchecked(algebra, r, x, y))
}

fn r_bracket_unchecked<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
    let sum = algebra.bracket_unchecked(&r.apply(x), y).add(&algebra.bracket_unchecked(x, &r.apply(y)));
    sum.scale(&S::from_ratio(1, 2))
}

/// Un-halved form `[R₊x, y] - [R₊y, x] - [x, y]`, equal to [`r_bracket`] for every `R`.
pub fn r_bracket_unhalved<S: Scalar>(algebra: &LieAlgebra<S>, r_plus: &LinearEndo<S>, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
    algebra.conform(x)?;
    algebra.conform(y)?;
    check_endo(algebra, r_plus)?;
    let a = algebra.bracket_unchecked(&r_plus.apply(x), y);
    let b = algebra.bracket_unchecked(&r_plus.apply(y), x);
    Ok(a.sub(&b).sub(&algebra.bracket_unchecked(x, y)))
}

/// `R± = ½(R ± id)`
pub fn r_plus_minus<S: Scalar>(r: &LinearEndo<S>) -> (LinearEndo<S>, LinearEndo<S>) {
    let half = S::from_ratio(1, 2);
    let id = LinearEndo::identity(r.dim());
    (r.add(&id).scale(&half), r.sub(&id).scale(&half))
}

/// Lie algebra `g_R` with bracket `[·,·]_R`, validated.
pub fn derived_algebra_of<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>) -> Result<LieAlgebra<S>> {
    check_endo(algebra, r)?;
    let n = algebra.dim();
    let mut structure = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let b = r_bracket_unchecked(algebra, r, &algebra.basis(i), &algebra.basis(j));
            structure.extend(b.into_coords());
        }
    }
    LieAlgebra::from_dense(n, algebra.labels().to_vec(), structure, None, algebra.tolerance())
}

/// A validated r-matrix on a Lie algebra, with its derived algebra `g_R`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixContext<S> {
    algebra: LieAlgebra<S>,
    r: LinearEndo<S>,
    theta: Theta,
    derived: LieAlgebra<S>,
    r_plus: LinearEndo<S>,
    r_minus: LinearEndo<S>,
}

impl<S: Scalar> RMatrixContext<S> {
    /// Validates `(R, θ)` and builds `g_R`.
    pub fn new(algebra: LieAlgebra<S>, r: LinearEndo<S>, theta: Theta) -> Result<Self> {
        check_endo(&algebra, &r)?;
        let report = is_rmatrix(&algebra, &r, &theta.value());
        if !report.ok {
            let (i, j) = report.worst_pair.unwrap_or((0, 0));
            return Err(Error::NotAnRMatrix { i, j, defect: report.worst_defect_norm });
        }
        let derived = derived_algebra_of(&algebra, &r)?;
        let (r_plus, r_minus) = r_plus_minus(&r);
        Ok(Self { algebra, r, theta, derived, r_plus, r_minus })
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn r(&self) -> &LinearEndo<S> {
        &self.r
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    /// `g_R`
    pub fn derived_algebra(&self) -> &LieAlgebra<S> {
        &self.derived
    }

    /// `(R₊, R₋)`
    pub fn r_plus_minus(&self) -> (&LinearEndo<S>, &LinearEndo<S>) {
        (&self.r_plus, &self.r_minus)
    }

    pub fn r_sign(&self, sign: Sign) -> &LinearEndo<S> {
        match sign {
            Sign::Plus => &self.r_plus,
            Sign::Minus => &self.r_minus,
        }
    }

    pub fn r_bracket(&self, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
        r_bracket(&self.algebra, &self.r, x, y)
    }

    /// `x ▷± y = [R± x, y]`
    pub fn post_product(&self, sign: Sign, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
        self.algebra.conform(x)?;
        self.algebra.conform(y)?;
        Ok(self.algebra.bracket_unchecked(&self.r_sign(sign).apply(x), y))
    }

    /// Tensor of `▷±`.
    pub fn post_tensor(&self, sign: Sign) -> BilinearProduct<S> {
        let rs = self.r_sign(sign);
        let a = &self.algebra;
        BilinearProduct::from_fn(a.dim(), |i, j| a.bracket_unchecked(&rs.apply(&a.basis(i)), &a.basis(j)))
    }

    pub fn check_pm_identities(&self) -> PmReport {
        check_pm_identities(&self.algebra, &self.r)
    }

    pub fn subalgebra_analysis(&self) -> SubalgebraReport {
        subalgebra_analysis(&self.algebra, &self.r)
    }

    /// Converts to float mode.
    pub fn to_f64(&self) -> RMatrixContext<f64> {
        RMatrixContext {
            algebra: self.algebra.to_f64(),
            r: self.r.map(Scalar::to_f64),
            theta: self.theta,
            derived: self.derived.to_f64(),
            r_plus: self.r_plus.map(Scalar::to_f64),
            r_minus: self.r_minus.map(Scalar::to_f64),
        }
    }
}

/// Identity checked by [`check_pm_identities`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmIdentity {
    /// `[R±x, R±y] = R±([R±x, y] + [x, R±y] ∓ [x, y])`
    Bracket(Sign),
    /// `R±[x, y]_R = [R±x, R±y]`
    Morphism(Sign),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PmReport {
    pub ok: bool,
    pub failures: Vec<(PmIdentity, usize, usize)>,
    pub worst_defect: f64,
}

/// Checks the `R±` identities (valid for `θ = 1`) on all basis pairs.
pub fn check_pm_identities<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>) -> PmReport {
    let tol = algebra.tolerance();
    let (rp, rm) = r_plus_minus(r);
    let mut report = PmReport { ok: true, failures: Vec::new(), worst_defect: 0.0 };
    let n = algebra.dim();
    let br = |a: &Vector<S>, b: &Vector<S>| algebra.bracket_unchecked(a, b);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (algebra.basis(i), algebra.basis(j));
            let xy = br(&x, &y);
            let rb = r_bracket_unchecked(algebra, r, &x, &y);
            for (sign, rs) in [(Sign::Plus, &rp), (Sign::Minus, &rm)] {
                let (rx, ry) = (rs.apply(&x), rs.apply(&y));
                let lhs = br(&rx, &ry);
                let mut inner = br(&rx, &y).add(&br(&x, &ry));
                inner.axpy(&-sign.value::<S>(), &xy);
                let bracket_defect = lhs.sub(&rs.apply(&inner));
                let morphism_defect = rs.apply(&rb).sub(&lhs);
                for (identity, defect) in [(PmIdentity::Bracket(sign), bracket_defect), (PmIdentity::Morphism(sign), morphism_defect)] {
                    report.worst_defect = report.worst_defect.max(defect.max_abs());
                    if !defect.is_negligible(tol) {
                        report.ok = false;
                        report.failures.push((identity, i, j));
                    }
                }
            }
        }
    }
    report
}

/// `R = π₊ - π₋` for a decomposition of the basis into two subalgebra spans.
pub fn splitting_r<S: Scalar>(algebra: LieAlgebra<S>, plus: &[usize], minus: &[usize]) -> Result<RMatrixContext<S>> {
    let n = algebra.dim();
    let mut seen = alloc::vec![0u8; n];
    for &i in plus.iter().chain(minus) {
        if i >= n {
            return Err(Error::NotADirectSum);
        }
        seen[i] += 1;
    }
    if seen.iter().any(|&c| c != 1) {
        return Err(Error::NotADirectSum);
    }
    for (side, indices) in [(Side::Plus, plus), (Side::Minus, minus)] {
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[a + 1..] {
                let b = algebra.basis_bracket(i, j);
                let leaks = (0..n).any(|k| !indices.contains(&k) && !b[k].is_negligible(algebra.tolerance()));
                if leaks {
                    return Err(Error::NotASubalgebra { side, i, j });
                }
            }
        }
    }
    let r = LinearEndo::projection(n, plus).sub(&LinearEndo::projection(n, minus));
    RMatrixContext::new(algebra, r, Theta::Mcybe)
}

/// Dimensions and closure data for `g± = im R±` and `k± = ker R∓`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraReport {
    pub dim_im_plus: usize,
    pub dim_im_minus: usize,
    /// `dim k₊ = dim ker R₋`
    pub dim_k_plus: usize,
    /// `dim k₋ = dim ker R₊`
    pub dim_k_minus: usize,
    /// Both images are closed under the bracket.
    pub subalgebras_ok: bool,
    /// `k± ⊆ g±` and `[g±, k±] ⊆ k±`.
    pub ideals_ok: bool,
}

pub fn subalgebra_analysis<S: Scalar>(algebra: &LieAlgebra<S>, r: &LinearEndo<S>) -> SubalgebraReport {
    let tol = algebra.tolerance();
    let (rp, rm) = r_plus_minus(r);
    let im_plus = rp.image(tol);
    let im_minus = rm.image(tol);
    let k_plus = rm.kernel(tol);
    let k_minus = rp.kernel(tol);
    let closed = |basis: &[Vector<S>], acting: &[Vector<S>]| acting.iter().all(|a| basis.iter().all(|b| in_span(basis, &algebra.bracket_unchecked(a, b), tol)));
    let subalgebras_ok = closed(&im_plus, &im_plus) && closed(&im_minus, &im_minus);
    let contained = |small: &[Vector<S>], big: &[Vector<S>]| small.iter().all(|v| in_span(big, v, tol));
    let ideals_ok = contained(&k_plus, &im_plus) && contained(&k_minus, &im_minus) && closed(&k_plus, &im_plus) && closed(&k_minus, &im_minus);
    SubalgebraReport {
        dim_im_plus: im_plus.len(),
        dim_im_minus: im_minus.len(),
        dim_k_plus: k_plus.len(),
        dim_k_minus: k_minus.len(),
        subalgebras_ok,
        ideals_ok,
    }
}

/// Short description of a report, for CLI output.
pub fn describe_report(report: &RMatrixReport) -> String {
    match (report.ok, report.worst_pair) {
        (true, _) => format!("r-matrix: ok (max defect {:e})", report.worst_defect_norm),
        (false, Some((i, j))) => {
            format!("r-matrix: FAILED, worst pair ({i}, {j}) with defect {:e}", report.worst_defect_norm)
        }
        (false, None) => String::from("r-matrix: FAILED, dimension mismatch"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{builtin, Builtin};
    use crate::linalg::Matrix;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn split(n: usize) -> RMatrixContext<Rational> {
        let (g, s) = builtin::<Rational>(Builtin::UpperLowerSplit(n)).unwrap();
        let s = s.unwrap();
        splitting_r(g, &s.plus, &s.minus).unwrap()
    }

    #[test]
    fn identity_solves_mcybe() {
        let (g, _) = builtin::<Rational>(Builtin::Sl2).unwrap();
        let id = LinearEndo::identity(3);
        assert!(is_rmatrix(&g, &id, &q(1)).ok);
        let ctx = RMatrixContext::new(g.clone(), id, Theta::Mcybe).unwrap();
        assert_eq!(ctx.derived_algebra().structure(), g.structure());
        let (rp, rm) = ctx.r_plus_minus();
        assert_eq!(rp, &LinearEndo::identity(3));
        assert_eq!(rm, &LinearEndo::zero(3));
    }

    #[test]
    fn minus_identity_negates_bracket() {
        let (g, _) = builtin::<Rational>(Builtin::So3).unwrap();
        let ctx = RMatrixContext::new(g.clone(), LinearEndo::identity(3).scale(&q(-1)), Theta::Mcybe).unwrap();
        for (a, b) in ctx.derived_algebra().structure().iter().zip(g.structure()) {
            assert_eq!(a, &-b.clone());
        }
    }

    #[test]
    fn non_solution_detected() {
        // R = projection onto e
        let (g, _) = builtin::<Rational>(Builtin::Sl2).unwrap();
        let r = LinearEndo::projection(3, &[0]);
        let report = is_rmatrix(&g, &r, &q(1));
        assert!(!report.ok);
        // direct oracle: defect(e, f) = R([e,f] + 0) - [e,f] - [e,0] = R(h) - h = -h
        let d = mcybe_defect(&g, &r, &q(1), &g.basis(0), &g.basis(2)).unwrap();
        assert_eq!(d, Vector::from_i64(&[0, -1, 0]));
        assert!(matches!(RMatrixContext::new(g, r, Theta::Mcybe), Err(Error::NotAnRMatrix { .. })));
    }

    #[test]
    fn gl_splitting_is_rmatrix() {
        for n in 2..=4 {
            let ctx = split(n);
            assert!(is_rmatrix(ctx.algebra(), ctx.r(), &q(1)).ok);
            let pm = ctx.check_pm_identities();
            assert!(pm.ok, "{:?}", pm.failures);
        }
    }

    #[test]
    fn split_bracket_and_products() {
        let ctx = split(2);
        let g = ctx.algebra();
        // basis order E11, E12, E22, E21
        let (e12, e21) = (g.basis(1), g.basis(3));
        assert!(ctx.r_bracket(&e12, &e21).unwrap().is_zero());
        // [x,y]_R = [x₊,y₊] - [x₋,y₋] on every pair
        let (rp, rm) = ctx.r_plus_minus();
        for i in 0..4 {
            for j in 0..4 {
                let (x, y) = (g.basis(i), g.basis(j));
                let xp = rp.apply(&x);
                let yp = rp.apply(&y);
                let xm = rm.apply(&x).neg();
                let ym = rm.apply(&y).neg();
                let expected = g.bracket(&xp, &yp).unwrap().sub(&g.bracket(&xm, &ym).unwrap());
                assert_eq!(ctx.r_bracket(&x, &y).unwrap(), expected);
                assert_eq!(r_bracket_unhalved(g, rp, &x, &y).unwrap(), expected);
                // x ▷₋ y = -[π₋x, y]
                assert_eq!(ctx.post_product(Sign::Minus, &x, &y).unwrap(), g.bracket(&xm, &y).unwrap().neg());
                // both derived-bracket forms
                let m = |a: &Vector<Rational>, b: &Vector<Rational>| ctx.post_product(Sign::Minus, a, b).unwrap();
                let p = |a: &Vector<Rational>, b: &Vector<Rational>| ctx.post_product(Sign::Plus, a, b).unwrap();
                let xy = g.bracket(&x, &y).unwrap();
                assert_eq!(m(&x, &y).sub(&m(&y, &x)).add(&xy), expected);
                assert_eq!(p(&x, &y).sub(&p(&y, &x)).sub(&xy), expected);
                assert_eq!(rp.apply(&x).sub(&rm.apply(&x)), x);
            }
        }
        assert_eq!(rp, &LinearEndo::projection(4, &[0, 1, 2]));
        assert_eq!(rm, &LinearEndo::projection(4, &[3]).scale(&q(-1)));
    }

    #[test]
    fn sl2_splittings() {
        let (g, _) = builtin::<Rational>(Builtin::Sl2).unwrap();
        assert!(splitting_r(g.clone(), &[0, 1], &[2]).is_ok());
        assert!(splitting_r(g.clone(), &[0], &[1, 2]).is_ok());
        assert_eq!(splitting_r(g.clone(), &[0, 2], &[1]).unwrap_err(), Error::NotASubalgebra { side: Side::Plus, i: 0, j: 2 });
        assert_eq!(splitting_r(g.clone(), &[0, 1], &[1, 2]).unwrap_err(), Error::NotADirectSum);
        assert_eq!(splitting_r(g, &[0], &[2]).unwrap_err(), Error::NotADirectSum);
    }

    #[test]
    fn subalgebra_dimensions() {
        let r = split(2).subalgebra_analysis();
        assert_eq!((r.dim_im_plus, r.dim_im_minus, r.dim_k_plus, r.dim_k_minus), (3, 1, 3, 1));
        assert!(r.subalgebras_ok && r.ideals_ok);

        let (g, _) = builtin::<Rational>(Builtin::Gl(2)).unwrap();
        let r = subalgebra_analysis(&g, &LinearEndo::identity(4));
        assert_eq!((r.dim_im_plus, r.dim_im_minus, r.dim_k_plus, r.dim_k_minus), (4, 0, 4, 0));
        assert!(r.subalgebras_ok && r.ideals_ok);

        let (s, _) = builtin::<Rational>(Builtin::Sl2).unwrap();
        let borel = splitting_r(s, &[0, 1], &[2]).unwrap().subalgebra_analysis();
        assert!(borel.subalgebras_ok && borel.ideals_ok);
    }

    #[test]
    fn pm_identities_fail_for_non_solution() {
        let (g, _) = builtin::<Rational>(Builtin::Sl2).unwrap();
        let r = LinearEndo::from_matrix(Matrix::from_fn(3, 3, |i, j| q((i * 3 + j) as i64 % 4 - 1))).unwrap();
        assert!(!is_rmatrix(&g, &r, &q(1)).ok);
        let report = check_pm_identities(&g, &r);
        assert!(!report.ok);
        assert!(!report.failures.is_empty());
    }
}
