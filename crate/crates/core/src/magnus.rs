//! BCH and Magnus-type series, computed order by order in a formal parameter `t`.
//!
//! The post-Lie Magnus expansion `χ(xt) = Σ χ_m t^m` is the Lie series with
//! `exp(xt) = exp∗(χ(xt))`. It is computed by the star-power recursion in the
//! enveloping algebra, which also witnesses that every `χ_m` lies in `g`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::env::{EnvElement, HopfStructure, PlainHopf, Series, StarAlgebra};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{LinearEndo, Vector};
use crate::postlie::{check_prelie, BilinearProduct};
use crate::rmatrix::RMatrixContext;
use crate::scalar::{format_scalar, Rational, Scalar};

type Q = Rational;

/// `Σ_{m=0}^{N} c_m t^m` with `c_m ∈ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLieElement<S> {
    coeffs: Vec<Vector<S>>,
}

impl<S: Scalar> GradedLieElement<S> {
    pub fn zeros(dim: usize, order: usize) -> Self {
        Self { coeffs: vec![Vector::zeros(dim); order + 1] }
    }

    /// `v t^0`
    pub fn constant(v: Vector<S>, order: usize) -> Self {
        let mut out = Self::zeros(v.dim(), order);
        out.coeffs[0] = v;
        out
    }

    /// Coefficients of `t^0, t^1, ..`.
    pub fn from_coeffs(coeffs: Vec<Vector<S>>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn coeff(&self, m: usize) -> &Vector<S> {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Vector<S>] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::from_i64(-1))
    }

    /// Applies a linear map to every coefficient.
    pub fn map(&self, f: &LinearEndo<S>) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| f.apply(a)).collect() }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(order + 1).cloned().collect();
        while coeffs.len() < order + 1 {
            coeffs.push(Vector::zeros(self.dim()));
        }
        Self { coeffs }
    }

    /// Formal `d/dt`, one order lower.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zeros(self.dim(), 0);
        }
        Self { coeffs: self.coeffs.iter().enumerate().skip(1).map(|(m, c)| c.scale(&S::from_i64(m as i64))).collect() }
    }

    /// `Σ c_m t^m` at a given `t`.
    pub fn evaluate(&self, t: &S) -> Vector<S> {
        let mut out = Vector::zeros(self.dim());
        let mut power = S::one();
        for c in &self.coeffs {
            out.axpy(&power, c);
            power *= t.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Vector::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Vector::max_abs).fold(0.0, f64::max)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> GradedLieElement<T> {
        GradedLieElement { coeffs: self.coeffs.iter().map(|c| c.map(f)).collect() }
    }

    /// One line per order: `t^m: [c_0, c_1, ..]`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            let coords: Vec<String> = c.coords().iter().map(format_scalar).collect();
            out.push_str(&alloc::format!("t^{m}: [{}]\n", coords.join(", ")));
        }
        out
    }
}

/// Cauchy product of graded elements through a bilinear map, truncated at `order`.
fn convolve<S: Scalar>(a: &GradedLieElement<S>, b: &GradedLieElement<S>, order: usize, f: impl Fn(&Vector<S>, &Vector<S>) -> Vector<S>) -> GradedLieElement<S> {
    let mut out = GradedLieElement::zeros(a.dim(), order);
    for (i, ai) in a.coeffs.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate().take(order + 1 - i) {
            if !bj.is_zero() {
                let v = f(ai, bj);
                out.coeffs[i + j] = out.coeffs[i + j].add(&v);
            }
        }
    }
    out
}

/// Bernoulli numbers `b_0..=b_n` with `b_1 = -1/2`, via the Akiyama–Tanigawa recurrence.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(n + 1);
    let mut row: Vec<Q> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(Q::from_ratio(1, m as i64 + 1));
        for j in (1..=m).rev() {
            row[j - 1] = Q::from_i64(j as i64) * (row[j - 1].clone() - row[j].clone());
        }
        out.push(row[0].clone());
    }
    // the recurrence yields b_1 = +1/2
    if n >= 1 {
        out[1] = Q::from_ratio(-1, 2);
    }
    out
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * Q::from_i64(k))
}

/// Lie-level coefficients of a series whose components must be primitive.
fn primitive_parts(series: &Series, env: &crate::env::Env) -> Result<GradedLieElement<Q>> {
    let n = env.dim();
    let mut coeffs = Vec::with_capacity(series.order() + 1);
    for (m, c) in series.coeffs().iter().enumerate() {
        if !env.is_primitive(c) || !c.non_lie_part().is_zero() {
            return Err(Error::PrimitivityFailure { degree: m });
        }
        coeffs.push(c.lie_part(n));
    }
    Ok(GradedLieElement::from_coeffs(coeffs))
}

/// `log(exp(xt) exp(yt))` through `t^N`, graded by joint degree in `x` and `y`.
pub fn bch(algebra: &LieAlgebra<Q>, x: &Vector<Q>, y: &Vector<Q>, order: usize) -> Result<GradedLieElement<Q>> {
    let env = crate::env::Env::new(algebra.clone(), order)?;
    let h = PlainHopf(&env);
    algebra.conform(x)?;
    algebra.conform(y)?;
    let ex = Series::monomial(env.lie(x), 1, order).exp(&h)?;
    let ey = Series::monomial(env.lie(y), 1, order).exp(&h)?;
    let log = ex.mul(&ey, &h).log(&h)?;
    primitive_parts(&log, &env)
}

/// Post-Lie Magnus expansion through `t^N` by the recursion
/// `χ_n = xⁿ/n! - Σ_{k=2}^{n} (1/k!) Σ_{p_1+⋯+p_k=n} χ_{p_1} ∗ ⋯ ∗ χ_{p_k}`.
///
/// Every `χ_n` must normalize to a pure length-one element; otherwise the
/// residual is reported as `CollapseFailure`.
pub fn postlie_magnus(star: &StarAlgebra, x: &Vector<Q>, order: usize) -> Result<GradedLieElement<Q>> {
    let env = star.plain();
    let n = env.dim();
    if x.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.dim() });
    }
    let mut chi = GradedLieElement::zeros(n, order);
    if order == 0 {
        return Ok(chi);
    }
    chi.coeffs[1] = x.clone();
    let xe = EnvElement::from_vector(x);
    // powers[k][m]: sum over compositions of m into k parts of χ_{p_1} ∗ ⋯ ∗ χ_{p_k}
    let mut powers: Vec<Vec<EnvElement>> = vec![vec![EnvElement::zero(); order + 1]; order + 1];
    powers[1][1] = xe.clone();
    let mut x_power = xe.clone();
    for m in 2..=order {
        x_power = env.mul_full(&x_power, &xe);
        let mut value = x_power.scale(&(Q::one() / factorial(m)));
        for k in 2..=m {
            let mut acc = EnvElement::zero();
            for p in 1..=m + 1 - k {
                let tail = &powers[k - 1][m - p];
                if tail.is_zero() || chi.coeffs[p].is_zero() {
                    continue;
                }
                acc.add_scaled(&star.mul_full(&EnvElement::from_vector(&chi.coeffs[p]), tail), &Q::one());
            }
            value.add_scaled(&acc, &-(Q::one() / factorial(k)));
            powers[k][m] = acc;
        }
        let residual = value.non_lie_part();
        if !residual.is_zero() {
            return Err(Error::CollapseFailure { order: m, residual: env.render(&residual) });
        }
        chi.coeffs[m] = value.lie_part(n);
        powers[1][m] = EnvElement::from_vector(&chi.coeffs[m]);
    }
    Ok(chi)
}

/// Both sides of `exp(xt) = exp∗(χ(xt))` through `t^N`.
#[derive(Clone, Debug)]
pub struct GroupLikeReport {
    pub ok: bool,
    pub first_mismatch: Option<usize>,
    pub chi: GradedLieElement<Q>,
    pub lhs: Series,
    pub rhs: Series,
}

/// Checks `exp(xt) = exp∗(χ(xt))` coefficient by coefficient. The right side
/// uses general star products of whole series, not the Lie-element shortcut of the recursion.
pub fn verify_grouplike_identity(star: &StarAlgebra, x: &Vector<Q>, order: usize) -> Result<GroupLikeReport> {
    let chi = postlie_magnus(star, x, order)?;
    let env = star.plain();
    let lhs = Series::monomial(EnvElement::from_vector(x), 1, order).exp(&PlainHopf(env))?;
    let c = Series::from_coeffs(chi.coeffs.iter().map(EnvElement::from_vector).collect());
    let rhs = c.exp(star)?;
    let first_mismatch = lhs.first_difference(&rhs);
    Ok(GroupLikeReport { ok: first_mismatch.is_none(), first_mismatch, chi, lhs, rhs })
}

/// Pre-Lie Magnus expansion `χ = Σ_k b_k/k! ℓ_χ^k(x)` with `ℓ_χ(y) = χ ▷ y`,
/// solved order by order. Requires a left pre-Lie product over an abelian bracket.
pub fn prelie_magnus(product: &BilinearProduct<Q>, bracket: &LieAlgebra<Q>, x: &Vector<Q>, order: usize) -> Result<GradedLieElement<Q>> {
    if !bracket.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let report = check_prelie(product, 0.0);
    if !report.ok {
        return Err(Error::NotPreLie { defect: report.worst_defect });
    }
    let n = product.dim();
    if x.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.dim() });
    }
    let b = bernoulli(order);
    let mut chi = GradedLieElement::zeros(n, order);
    if order == 0 {
        return Ok(chi);
    }
    chi.coeffs[1] = x.clone();
    // iterates[k][m] = [t^m] ℓ_χ^k(xt)
    let mut iterates = vec![vec![Vector::zeros(n); order + 1]; order + 1];
    iterates[0][1] = x.clone();
    for m in 2..=order {
        let mut value = Vector::zeros(n);
        for k in 1..m {
            let mut acc = Vector::zeros(n);
            for p in 1..m {
                let inner = &iterates[k - 1][m - p];
                if !inner.is_zero() && !chi.coeffs[p].is_zero() {
                    acc = acc.add(&product.apply_unchecked(&chi.coeffs[p], inner));
                }
            }
            value.axpy(&(b[k].clone() / factorial(k)), &acc);
            iterates[k][m] = acc;
        }
        chi.coeffs[m] = value;
    }
    Ok(chi)
}

/// `(χ₊, χ₋) = (R₊χ, -R₋χ)`, so that `χ = χ₊ + χ₋`.
pub fn chi_pm<S: Scalar>(chi: &GradedLieElement<S>, ctx: &RMatrixContext<S>) -> Result<(GradedLieElement<S>, GradedLieElement<S>)> {
    let n = ctx.algebra().dim();
    if chi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: chi.dim() });
    }
    let (r_plus, r_minus) = ctx.r_plus_minus();
    Ok((chi.map(r_plus), chi.map(r_minus).neg()))
}

fn check_dims<S: Scalar>(items: &[&GradedLieElement<S>], algebra: &LieAlgebra<S>) -> Result<()> {
    for g in items {
        if g.dim() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: g.dim() });
        }
    }
    Ok(())
}

/// `Σ_n c_n ad_β^n(v)` through `t^N`, with `ad` taken in `bar`.
fn ad_series<S: Scalar>(
    beta: &GradedLieElement<S>,
    v: &GradedLieElement<S>,
    bar: &LieAlgebra<S>,
    order: usize,
    coeff: impl Fn(usize) -> S,
) -> GradedLieElement<S> {
    let mut term = v.truncate(order);
    let mut out = term.scale(&coeff(0));
    for n in 1..=order {
        term = convolve(beta, &term, order, |a, b| bar.bracket_unchecked(a, b));
        if term.is_zero() {
            break;
        }
        out = out.add(&term.scale(&coeff(n)));
    }
    out
}

/// `dexp∗_β(v) = Σ_n ad_β^n(v) / (n+1)!` through `t^N`, brackets in `ḡ`.
pub fn dexp_star<S: Scalar>(beta: &GradedLieElement<S>, v: &GradedLieElement<S>, bar: &LieAlgebra<S>, order: usize) -> Result<GradedLieElement<S>> {
    check_dims(&[beta, v], bar)?;
    Ok(ad_series(beta, v, bar, order, |n| S::from_rational(&(Q::one() / factorial(n + 1)))))
}

/// `dexp∗⁻¹_β(v) = Σ_n b_n/n! ad_β^n(v)` through `t^N`, brackets in `ḡ`.
pub fn dexp_star_inv<S: Scalar>(beta: &GradedLieElement<S>, v: &GradedLieElement<S>, bar: &LieAlgebra<S>, order: usize) -> Result<GradedLieElement<S>> {
    check_dims(&[beta, v], bar)?;
    let b = bernoulli(order);
    Ok(ad_series(beta, v, bar, order, |n| S::from_rational(&(b[n].clone() / factorial(n)))))
}

/// `exp∗(β) ▷ x = Σ_k ℓ_β^k(x) / k!` through `t^N`, evaluated in `g` only.
fn exp_left_action<S: Scalar>(beta: &GradedLieElement<S>, x: &GradedLieElement<S>, product: &BilinearProduct<S>, order: usize) -> GradedLieElement<S> {
    let mut term = x.truncate(order);
    let mut out = term.clone();
    for k in 1..=order {
        term = convolve(beta, &term, order, |a, b| product.apply_unchecked(a, b));
        term = term.scale(&S::from_ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

/// Both sides of `χ̇ = dexp∗⁻¹_{-χ}(exp∗(-χ) ▷ x)` through `t^{N-1}`.
#[derive(Clone, Debug)]
pub struct OdeReport {
    pub ok: bool,
    pub lhs: GradedLieElement<Q>,
    pub rhs: GradedLieElement<Q>,
}

/// Checks the differential equation for `χ(xt)`. `exp∗(-χ)` is formed as a star
/// series in the enveloping algebra and then lifted onto `x`.
pub fn verify_chi_ode(star: &StarAlgebra, x: &Vector<Q>, order: usize) -> Result<OdeReport> {
    if order == 0 {
        return Err(Error::InvalidInput("the ODE check needs order at least 1".into()));
    }
    let chi = postlie_magnus(star, x, order)?;
    let n = x.dim();
    let lhs = chi.derivative();
    let minus_chi = chi.neg();
    let series = Series::from_coeffs(minus_chi.coeffs.iter().map(EnvElement::from_vector).collect());
    let exp = series.exp(star)?;
    let xe = EnvElement::from_vector(x);
    let mut acted = Vec::with_capacity(order);
    for (m, c) in exp.coeffs().iter().enumerate().take(order) {
        let v = star.lift(c, &xe);
        if !v.non_lie_part().is_zero() {
            return Err(Error::CollapseFailure { order: m, residual: star.plain().render(&v.non_lie_part()) });
        }
        acted.push(v.lie_part(n));
    }
    let acted = GradedLieElement::from_coeffs(acted);
    let rhs = dexp_star_inv(&minus_chi.truncate(order - 1), &acted, star.bar().algebra(), order - 1)?;
    Ok(OdeReport { ok: lhs == rhs, lhs, rhs })
}

/// `χ(xt)` through `t^N` from the differential equation, computed entirely in `g`:
/// `m χ_m = [t^{m-1}] dexp∗⁻¹_{-χ}(e^{ℓ_{-χ}} x)`, where the right side only
/// involves `χ_1..χ_{m-1}`. Works in float mode; agrees exactly with
/// [`postlie_magnus`] over the rationals.
pub fn chi_lie<S: Scalar>(product: &BilinearProduct<S>, bar: &LieAlgebra<S>, x: &Vector<S>, order: usize) -> Result<GradedLieElement<S>> {
    let n = bar.dim();
    if x.dim() != n || product.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.dim().max(product.dim()) });
    }
    let mut chi = GradedLieElement::zeros(n, order);
    if order == 0 {
        return Ok(chi);
    }
    chi.coeffs[1] = x.clone();
    let x_const = GradedLieElement::constant(x.clone(), order);
    for m in 2..=order {
        let known = chi.truncate(m - 1);
        let minus = known.neg();
        let acted = exp_left_action(&minus, &x_const.truncate(m - 1), product, m - 1);
        let rhs = ad_series(&minus, &acted, bar, m - 1, {
            let b = bernoulli(m - 1);
            move |k| S::from_rational(&(b[k].clone() / factorial(k)))
        });
        chi.coeffs[m] = rhs.coeffs[m - 1].scale(&S::from_ratio(1, m as i64));
    }
    Ok(chi)
}

#[cfg(test)]
mod tests;
