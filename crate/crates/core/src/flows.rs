//! Isospectral Lax flows `ẋ = [x, R₋x]` in float mode.
//!
//! The factorized solution is `x(t) = exp(-u) x₀ exp(u)` with `u = R₋χ(x₀t)`.
//! By default the Magnus coefficients are computed once per problem and rescaled
//! by `t^m`, so each grid point is independent. With a restart length the same
//! formula is applied piecewise, re-expanding `χ` at the current state.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::liealg::{builtin, Builtin, LieAlgebra};
use crate::linalg::Vector;
use crate::magnus::{chi_lie, GradedLieElement};
use crate::rmatrix::{splitting_r, RMatrixContext, Sign};

/// Default threshold on `‖x_N(t) - x_{N-1}(t)‖∞` before a series is flagged.
pub const DEFAULT_FLOW_TOLERANCE: f64 = 1e-9;
/// Default relative trace-power drift that makes an RK4 step size fail.
pub const DEFAULT_DRIFT_LIMIT: f64 = 1e-6;

/// A faithful matrix realization with a least-squares inverse.
#[derive(Clone, Debug)]
pub struct Realization {
    matrices: Vec<DMatrix<f64>>,
    gram_inverse: DMatrix<f64>,
}

impl Realization {
    pub fn of(algebra: &LieAlgebra<f64>) -> Result<Self> {
        let mats = algebra.realization().ok_or(Error::RealizationRequired)?;
        let matrices: Vec<DMatrix<f64>> = mats.iter().map(|m| DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])).collect();
        let n = matrices.len();
        let gram = DMatrix::from_fn(n, n, |i, j| matrices[i].dot(&matrices[j]));
        let gram_inverse = gram.try_inverse().ok_or_else(|| Error::BadDimensions("matrix realization is not faithful".into()))?;
        Ok(Self { matrices, gram_inverse })
    }

    pub fn size(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn to_matrix(&self, x: &Vector<f64>) -> DMatrix<f64> {
        let m = self.size();
        let mut out = DMatrix::zeros(m, m);
        for (c, mat) in x.coords().iter().zip(&self.matrices) {
            if *c != 0.0 {
                out += mat * *c;
            }
        }
        out
    }

    /// Coordinates of the closest element of the realized algebra.
    pub fn to_coords(&self, mat: &DMatrix<f64>) -> Vector<f64> {
        let b = DVector::from_iterator(self.matrices.len(), self.matrices.iter().map(|m| m.dot(mat)));
        Vector::new((&self.gram_inverse * b).iter().copied().collect())
    }
}

/// A point of the flow with its spectral invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub x: Vector<f64>,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex<f64>>,
    /// `F_k = tr(ρ(x)^k) / k` for `k = 1..=m`.
    pub trace_powers: Vec<f64>,
}

impl FlowState {
    pub fn new(t: f64, x: Vector<f64>, realization: &Realization) -> Self {
        let mat = realization.to_matrix(&x);
        let mut eigenvalues: Vec<Complex<f64>> = mat.complex_eigenvalues().iter().copied().collect();
        eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut trace_powers = Vec::with_capacity(mat.nrows());
        let mut power = mat.clone();
        for k in 1..=mat.nrows() {
            trace_powers.push(power.trace() / k as f64);
            power = &power * &mat;
        }
        Self { t, x, eigenvalues, trace_powers }
    }
}

/// Initial condition, time grid, and truncation order for `ẋ = [x, R₋x]`.
#[derive(Clone, Debug)]
pub struct FlowProblem {
    ctx: RMatrixContext<f64>,
    realization: Realization,
    x0: Vector<f64>,
    t_grid: Vec<f64>,
    order: usize,
    tau_flow: f64,
    drift_limit: f64,
    restart: Option<f64>,
}

impl FlowProblem {
    pub fn new(ctx: RMatrixContext<f64>, x0: Vector<f64>, t_grid: Vec<f64>, order: usize) -> Result<Self> {
        let realization = Realization::of(ctx.algebra())?;
        ctx.algebra().conform(&x0)?;
        if t_grid.is_empty() || t_grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("time grid must be a nonempty list of finite values".into()));
        }
        if order == 0 {
            return Err(Error::InvalidInput("truncation order must be at least 1".into()));
        }
        Ok(Self { ctx, realization, x0, t_grid, order, tau_flow: DEFAULT_FLOW_TOLERANCE, drift_limit: DEFAULT_DRIFT_LIMIT, restart: None })
    }

    pub fn with_tau_flow(mut self, tau: f64) -> Self {
        self.tau_flow = tau;
        self
    }

    pub fn with_drift_limit(mut self, limit: f64) -> Self {
        self.drift_limit = limit;
        self
    }

    /// Re-expand `χ` at the current state after every `length` units of time.
    /// Needs a nondecreasing grid starting at `t ≥ 0`.
    pub fn with_restart(mut self, length: f64) -> Self {
        self.restart = Some(length);
        self
    }

    pub fn restart(&self) -> Option<f64> {
        self.restart
    }

    pub fn ctx(&self) -> &RMatrixContext<f64> {
        &self.ctx
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn x0(&self) -> &Vector<f64> {
        &self.x0
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `χ(x₀t)` coefficients through the problem's order.
    pub fn chi(&self) -> Result<GradedLieElement<f64>> {
        chi_lie(&self.ctx.post_tensor(Sign::Minus), self.ctx.derived_algebra(), &self.x0, self.order)
    }
}

/// `[x, R₋x]`
pub fn lax_vector_field(ctx: &RMatrixContext<f64>, x: &Vector<f64>) -> Result<Vector<f64>> {
    ctx.algebra().conform(x)?;
    Ok(ctx.algebra().bracket_unchecked(x, &ctx.r_sign(Sign::Minus).apply(x)))
}

/// How `Ad_{exp(-u)} x₀` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EvaluationPath {
    /// `exp(-ρ(u)) ρ(x₀) exp(ρ(u))` with matrix exponentials.
    #[default]
    Matrix,
    /// `Σ_{n ≤ N} (-1)^n/n! ad_u^n x₀`.
    Adjoint,
}

#[derive(Clone, Debug)]
pub struct FactorizedSolution {
    pub states: Vec<FlowState>,
    /// Largest `‖x_N(t) - x_{N-1}(t)‖∞` over the grid.
    pub series_gap: f64,
    /// Set when `series_gap` exceeds the problem's flow tolerance.
    pub non_convergent: bool,
}

fn conjugate(problem: &FlowProblem, x0: &Vector<f64>, u: &Vector<f64>, path: EvaluationPath) -> Vector<f64> {
    match path {
        EvaluationPath::Matrix => {
            let r = &problem.realization;
            let um = r.to_matrix(u);
            let left = (-&um).exp();
            let right = um.exp();
            r.to_coords(&(left * r.to_matrix(x0) * right))
        }
        EvaluationPath::Adjoint => {
            let g = problem.ctx.algebra();
            let mut term = x0.clone();
            let mut out = x0.clone();
            for n in 1..=problem.order {
                term = g.bracket_unchecked(u, &term).scale(&(-1.0 / n as f64));
                out = out.add(&term);
            }
            out
        }
    }
}

/// `χ(x₀t)` through orders `N` and `N - 1` for one base point.
struct Expansion {
    base: Vector<f64>,
    chi: GradedLieElement<f64>,
    lower: GradedLieElement<f64>,
}

impl Expansion {
    fn at(problem: &FlowProblem, base: Vector<f64>) -> Result<Self> {
        let chi = chi_lie(&problem.ctx.post_tensor(Sign::Minus), problem.ctx.derived_algebra(), &base, problem.order)?;
        let lower = chi.truncate(problem.order - 1);
        Ok(Self { base, chi, lower })
    }

    /// The state after time `t` and the gap between orders `N` and `N - 1`.
    fn advance(&self, problem: &FlowProblem, t: f64, path: EvaluationPath) -> (Vector<f64>, f64) {
        let r_minus = problem.ctx.r_sign(Sign::Minus);
        let x = conjugate(problem, &self.base, &r_minus.apply(&self.chi.evaluate(&t)), path);
        let x_lower = conjugate(problem, &self.base, &r_minus.apply(&self.lower.evaluate(&t)), path);
        let gap = x.sub(&x_lower).max_abs();
        (x, gap)
    }
}

fn check_forward_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.windows(2).any(|w| w[1] < w[0]) || grid[0] < 0.0 {
        return Err(Error::InvalidInput(alloc::format!("{what} needs a nondecreasing grid starting at t ≥ 0")));
    }
    Ok(())
}

/// Evaluates the factorized solution on the time grid.
pub fn factorized_solution(problem: &FlowProblem, path: EvaluationPath) -> Result<FactorizedSolution> {
    let mut states = Vec::with_capacity(problem.t_grid.len());
    let mut series_gap: f64 = 0.0;
    match problem.restart {
        None => {
            let expansion = Expansion::at(problem, problem.x0.clone())?;
            for &t in &problem.t_grid {
                let (x, gap) = expansion.advance(problem, t, path);
                series_gap = series_gap.max(gap);
                states.push(FlowState::new(t, x, &problem.realization));
            }
        }
        Some(length) => {
            if !(length > 0.0 && length.is_finite()) {
                return Err(Error::InvalidInput("restart length must be positive".into()));
            }
            check_forward_grid(&problem.t_grid, "a restarted solution")?;
            let (mut x, mut t) = (problem.x0.clone(), 0.0);
            for &target in &problem.t_grid {
                let pieces = ((target - t) / length).ceil() as usize;
                let h = if pieces > 0 { (target - t) / pieces as f64 } else { 0.0 };
                for _ in 0..pieces {
                    let (next, gap) = Expansion::at(problem, x)?.advance(problem, h, path);
                    series_gap = series_gap.max(gap);
                    x = next;
                }
                t = target;
                states.push(FlowState::new(t, x.clone(), &problem.realization));
            }
        }
    }
    Ok(FactorizedSolution { states, series_gap, non_convergent: series_gap > problem.tau_flow })
}

fn rk4_step(ctx: &RMatrixContext<f64>, x: &Vector<f64>, h: f64) -> Vector<f64> {
    let g = ctx.algebra();
    let r_minus = ctx.r_sign(Sign::Minus);
    let f = |y: &Vector<f64>| g.bracket_unchecked(y, &r_minus.apply(y));
    let k1 = f(x);
    let k2 = f(&x.add(&k1.scale(&(h / 2.0))));
    let k3 = f(&x.add(&k2.scale(&(h / 2.0))));
    let k4 = f(&x.add(&k3.scale(&h)));
    let mut out = x.clone();
    out.axpy(&(h / 6.0), &k1);
    out.axpy(&(h / 3.0), &k2);
    out.axpy(&(h / 3.0), &k3);
    out.axpy(&(h / 6.0), &k4);
    out
}

/// Classical RK4 from `t = 0`, stepping exactly onto each grid point.
/// Fails with `StepTooLarge` when the relative trace-power drift exceeds the problem's limit.
pub fn rk4_reference(problem: &FlowProblem, step: f64) -> Result<Vec<FlowState>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    let grid = &problem.t_grid;
    check_forward_grid(grid, "RK4")?;
    let initial = FlowState::new(0.0, problem.x0.clone(), &problem.realization);
    let mut x = problem.x0.clone();
    let mut t = 0.0;
    let mut states = Vec::with_capacity(grid.len());
    for &target in grid {
        let eps = 1e-14 * target.abs().max(1.0);
        while target - t > eps {
            let h = step.min(target - t);
            x = rk4_step(&problem.ctx, &x, h);
            t += h;
        }
        t = target;
        let state = FlowState::new(t, x.clone(), &problem.realization);
        let drift = state.trace_powers.iter().zip(&initial.trace_powers).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())).fold(0.0, f64::max);
        if drift > problem.drift_limit {
            return Err(Error::StepTooLarge { step, drift, limit: problem.drift_limit });
        }
        states.push(state);
    }
    Ok(states)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    pub max_eig_drift: f64,
    pub max_trace_power_drift: f64,
}

/// Largest deviation of the sorted eigenvalues and of each `F_k` from the first state.
pub fn conservation_report(states: &[FlowState]) -> Result<ConservationReport> {
    let [first, rest @ ..] = states else {
        return Err(Error::InvalidInput("conservation report needs at least two states".into()));
    };
    if rest.is_empty() {
        return Err(Error::InvalidInput("conservation report needs at least two states".into()));
    }
    let mut report = ConservationReport { max_eig_drift: 0.0, max_trace_power_drift: 0.0 };
    for s in rest {
        for (a, b) in s.eigenvalues.iter().zip(&first.eigenvalues) {
            report.max_eig_drift = report.max_eig_drift.max((a - b).norm());
        }
        for (a, b) in s.trace_powers.iter().zip(&first.trace_powers) {
            report.max_trace_power_drift = report.max_trace_power_drift.max((a - b).abs());
        }
    }
    Ok(report)
}

/// Symmetric tridiagonal `x₀` in `gl(n)` under the upper/strictly-lower splitting.
pub fn toda_problem(n: usize, diag: &[f64], offdiag: &[f64], t_grid: Vec<f64>, order: usize) -> Result<FlowProblem> {
    if n < 2 || diag.len() != n || offdiag.len() != n - 1 {
        return Err(Error::BadDimensions(alloc::format!(
            "Toda problem of size {n} needs {n} diagonal and {} off-diagonal entries, got {} and {}",
            n.saturating_sub(1),
            diag.len(),
            offdiag.len()
        )));
    }
    let (g, split) = builtin::<f64>(Builtin::UpperLowerSplit(n))?;
    let split = split.expect("split builtin carries its splitting");
    let realization = Realization::of(&g)?;
    let x0_mat = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            diag[r]
        } else if r + 1 == c {
            offdiag[r]
        } else if c + 1 == r {
            offdiag[c]
        } else {
            0.0
        }
    });
    let x0 = realization.to_coords(&x0_mat);
    let ctx = splitting_r(g, &split.plus, &split.minus)?;
    FlowProblem::new(ctx, x0, t_grid, order)
}

/// `‖exp(x) - exp(χ₊) exp(χ₋)‖₂` at a given order, where `χ₊ = R₊χ` and `χ₋ = -R₋χ`.
pub fn factorization_residual(ctx: &RMatrixContext<f64>, x: &Vector<f64>, order: usize) -> Result<f64> {
    let realization = Realization::of(ctx.algebra())?;
    ctx.algebra().conform(x)?;
    let chi = chi_lie(&ctx.post_tensor(Sign::Minus), ctx.derived_algebra(), x, order)?;
    let total = chi.evaluate(&1.0);
    let (r_plus, r_minus) = ctx.r_plus_minus();
    let plus = realization.to_matrix(&r_plus.apply(&total)).exp();
    let minus = realization.to_matrix(&r_minus.apply(&total).neg()).exp();
    let diff = realization.to_matrix(x).exp() - plus * minus;
    Ok(diff.singular_values().max())
}

/// Evenly spaced grid with `points` entries on `[t0, t1]`.
pub fn linear_grid(t0: f64, t1: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![t0],
        _ => (0..points).map(|i| t0 + (t1 - t0) * i as f64 / (points - 1) as f64).collect(),
    }
}
