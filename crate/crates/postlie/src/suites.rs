//! Seeded randomized suites over the exact enveloping-algebra identities.
//!
//! Every suite draws from a `ChaCha8Rng` seeded by the caller, so a failing
//! case is reproduced by rerunning with the printed seed.

use postlie_core::env::{check_hopf_axioms, f_map, phi_multiplicativity, sts_product_check, Env, EnvElement, HopfStructure, Series, StarAlgebra};
use postlie_core::liealg::builtin;
use postlie_core::linalg::Matrix;
use postlie_core::magnus::{postlie_magnus, prelie_magnus, verify_grouplike_identity};
use postlie_core::{BilinearProduct, Builtin, LieAlgebra, LinearEndo, RMatrixContext, Rational, Result, Scalar, Theta, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ 4`, `1 ≤ q ≤ 3`.
pub fn small_rational(rng: &mut impl Rng) -> Q {
    Q::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Vector<Q> {
    Vector::new((0..dim).map(|_| small_rational(rng)).collect())
}

pub fn random_letters(rng: &mut impl Rng, dim: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..dim)).collect()
}

/// One to three random words of length at most `max_degree`, normalized and
/// combined with small coefficients.
pub fn random_element(rng: &mut impl Rng, env: &Env, max_degree: usize) -> EnvElement {
    let mut out = EnvElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(0..=max_degree);
        let word = env.pbw_normalize(&random_letters(rng, env.dim(), len)).expect("letters are in range");
        out.add_scaled(&word, &small_rational(rng));
    }
    out
}

/// A rank-one CYBE solution `R = a ⊗ φ` on `gl(n)` with `φ` vanishing on `[a, g]`,
/// together with its pre-Lie product `x ▷ y = [Rx, y] = φ(x)[a, y]`.
pub fn cybe_prelie(rng: &mut impl Rng, n: usize) -> Result<(RMatrixContext<Q>, BilinearProduct<Q>)> {
    let (g, _) = builtin::<Q>(Builtin::Gl(n))?;
    let dim = g.dim();
    loop {
        let a = Vector::new((0..dim).map(|_| Q::from_i64(rng.gen_range(-2..=2))).collect());
        let ad = g.ad(&a)?;
        // φ with φ ∘ ad_a = 0, i.e. φ in the kernel of ad_aᵀ
        let annihilator = ad.matrix().transpose().kernel(0.0);
        if ad.matrix().is_zero() || annihilator.is_empty() {
            continue;
        }
        let mut phi = Vector::zeros(dim);
        for v in &annihilator {
            phi.axpy(&Q::from_i64(rng.gen_range(-2..=2)), v);
        }
        if phi.is_zero() {
            continue;
        }
        let r = Matrix::from_fn(dim, dim, |row, col| a[row].clone() * phi[col].clone());
        let ctx = RMatrixContext::new(g.clone(), LinearEndo::from_matrix(r).expect("square"), Theta::Cybe)?;
        let product = BilinearProduct::from_fn(dim, |i, j| g.bracket(&ctx.r().apply(&g.basis(i)), &g.basis(j)).expect("basis vectors conform"));
        if product.is_zero() {
            continue;
        }
        return Ok((ctx, product));
    }
}

/// Outcome of a suite: how many cases ran and a line per failing case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: impl Into<String>, seed: u64) -> Self {
        Self { name: name.into(), seed, cases: 0, failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let verdict = if self.ok() { "ok".to_string() } else { format!("{} FAILED", self.failures.len()) };
        format!("{}: {} cases, {verdict} (seed {})", self.name, self.cases, self.seed)
    }
}

/// Coassociativity, counit, antipode and multiplicativity of `Δ` on random pairs.
pub fn hopf_suite<H: HopfStructure + ?Sized>(name: &str, h: &H, seed: u64, cases: usize, max_degree: usize) -> SuiteReport {
    let mut rng = rng(seed);
    let mut report = SuiteReport::new(name, seed);
    for case in 0..cases {
        let a = random_element(&mut rng, h.env(), max_degree);
        let b = random_element(&mut rng, h.env(), max_degree);
        let axioms = check_hopf_axioms(h, &a, &b);
        report.cases += 1;
        if !axioms.ok() {
            report.failures.push(format!("case {case}: {}", axioms.failures().join(", ")));
        }
    }
    report
}

/// `exp(xt) = exp∗(χ(xt))` through `t^N`, plus the collapse of `log∗(exp(xt))`:
/// each coefficient must be a pure Lie element equal to `χ_m`.
pub fn grouplike_suite(ctx: &RMatrixContext<Q>, seed: u64, cases: usize, order: usize) -> Result<SuiteReport> {
    let star = StarAlgebra::for_rmatrix(ctx, order)?;
    let mut rng = rng(seed);
    let mut report = SuiteReport::new("group-like", seed);
    let n = ctx.algebra().dim();
    for case in 0..cases {
        let x = random_vector(&mut rng, n);
        report.cases += 1;
        let grouplike = verify_grouplike_identity(&star, &x, order)?;
        if let Some(m) = grouplike.first_mismatch {
            report.failures.push(format!("case {case}: exp(xt) and exp*(chi) differ at t^{m}"));
        }
        let log: Series = grouplike.lhs.log(&star)?;
        for m in 0..=order {
            let c = log.coeff(m);
            if !c.non_lie_part().is_zero() {
                report.failures.push(format!("case {case}: log*(exp(xt)) has a length >= 2 part at t^{m}"));
            } else if c.lie_part(n) != *grouplike.chi.coeff(m) {
                report.failures.push(format!("case {case}: log*(exp(xt)) differs from chi at t^{m}"));
            }
        }
    }
    Ok(report)
}

/// `φ(w·w') = φ(w)∗φ(w')`, `φ∘φ⁻¹ = id`, `F ≡ φ` and
/// `F(a)∗B = Σ R₊(a₍₁₎)·B·S(R₋(a₍₂₎))` on random words of total length `≤ max_len`.
pub fn isomorphism_suite(ctx: &RMatrixContext<Q>, seed: u64, cases: usize, max_len: usize) -> Result<SuiteReport> {
    let star = StarAlgebra::for_rmatrix(ctx, max_len)?;
    let mut rng = rng(seed);
    let mut report = SuiteReport::new("isomorphism", seed);
    let n = ctx.algebra().dim();
    for case in 0..cases {
        let total = rng.gen_range(0..=max_len);
        let split = rng.gen_range(0..=total);
        let w = random_letters(&mut rng, n, split);
        let w2 = random_letters(&mut rng, n, total - split);
        report.cases += 1;
        let mut fail = |what: &str| report.failures.push(format!("case {case}: {what} fails on {w:?} {w2:?}"));
        if !phi_multiplicativity(&star, &w, &w2).holds() {
            fail("phi multiplicativity");
        }
        let joint: Vec<usize> = w.iter().chain(&w2).copied().collect();
        let letters: Vec<Vector<Q>> = joint.iter().map(|&i| Vector::basis(n, i)).collect();
        if star.phi_element(&star.phi_inverse(&letters)) != star.plain().pbw_normalize(&joint)? {
            fail("phi of phi inverse");
        }
        let a = star.bar().pbw_normalize(&joint)?;
        if f_map(star.plain(), ctx, &a) != star.phi_element(&a) {
            fail("F = phi");
        }
        let a = star.bar().pbw_normalize(&w)?;
        let b = star.plain().pbw_normalize(&w2)?;
        if !sts_product_check(&star, ctx, &a, &b).holds() {
            fail("F(a)*B factorization");
        }
    }
    Ok(report)
}

/// Pre-Lie expansion against the post-Lie recursion over the abelian bracket,
/// for pre-Lie products drawn from random CYBE solutions on `gl(2)` and `gl(3)`.
pub fn prelie_suite(seed: u64, cases: usize, order: usize) -> Result<SuiteReport> {
    let mut rng = rng(seed);
    let mut report = SuiteReport::new("pre-Lie", seed);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let (_, product) = cybe_prelie(&mut rng, n)?;
        let abelian = LieAlgebra::abelian(n * n);
        let x = random_vector(&mut rng, n * n);
        let pre = prelie_magnus(&product, &abelian, &x, order)?;
        let star = StarAlgebra::new(abelian, product, order)?;
        report.cases += 1;
        if pre != postlie_magnus(&star, &x, order)? {
            report.failures.push(format!("case {case}: expansions differ on gl({n})"));
        }
    }
    Ok(report)
}
