//! The `postlie` command line.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails, 2 on bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use postlie_core::env::{PlainHopf, StarAlgebra};
use postlie_core::flows::{factorization_residual, factorized_solution, linear_grid, rk4_reference, toda_problem, EvaluationPath, FlowProblem};
use postlie_core::liealg::builtin;
use postlie_core::magnus::{chi_lie, postlie_magnus, GradedLieElement};
use postlie_core::postlie::{check_postlie, AxiomReport};
use postlie_core::rmatrix::{check_pm_identities, describe_report, is_rmatrix, splitting_r, subalgebra_analysis};
use postlie_core::{
    BilinearProduct, Builtin, Error, Handedness, LieAlgebra, LinearEndo, PostLieStructure, RMatrixContext, Rational, Scalar, Sign, Theta, Vector,
    DEFAULT_TOLERANCE,
};
use serde_json::json;

use crate::io::{self, IoError};
use crate::structures::Structure;
use crate::suites;

type Q = Rational;

#[derive(Parser, Debug)]
#[command(name = "postlie", version, about = "Post-Lie Magnus expansions, r-matrix checks and isospectral flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    Matrix,
    Adjoint,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Arithmetic: exact rationals or f64. Each subcommand has a default.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 5)]
    pub order: usize,
    /// Algebra JSON file.
    #[arg(long, global = true)]
    pub algebra: Option<PathBuf>,
    /// r-matrix JSON file (needs --algebra).
    #[arg(long, global = true)]
    pub rmatrix: Option<PathBuf>,
    /// Splitting JSON file (needs --algebra).
    #[arg(long, global = true)]
    pub splitting: Option<PathBuf>,
    /// gl2-split, gl3-split, sl2-borel, sl2-identity, or an algebra name such as sl2, gl(3), so3.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    #[arg(long, global = true, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub t1: f64,
    /// Number of grid intervals on [t0, t1].
    #[arg(long, global = true, default_value_t = 20)]
    pub steps: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Float tolerance for validation and convergence flags.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Machine-readable JSON reports.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an algebra: antisymmetry, Jacobi, realization.
    CheckAlgebra,
    /// Check the modified classical Yang-Baxter equation and related identities.
    CheckRmatrix,
    /// Check post-Lie axioms of a product file or of the products of an r-matrix.
    CheckPostlie {
        #[arg(long)]
        product: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Side::Left)]
        handedness: Side,
    },
    /// Print the post-Lie Magnus expansion of x through t^N.
    Magnus {
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Use this product (over the algebra's bracket) instead of the r-matrix one.
        #[arg(long)]
        product: Option<PathBuf>,
    },
    /// Residual of exp(x) = exp(R₊χ) exp(-R₋χ) at orders N and N-1.
    Factorize {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Solve the Lax flow dx/dt = [x, R₋x] and write CSV.
    Flow {
        /// Initial condition (needs an r-matrix with a realization).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Toda start: diagonal entries.
        #[arg(long, allow_hyphen_values = true)]
        diag: Option<String>,
        /// Toda start: off-diagonal entries.
        #[arg(long, allow_hyphen_values = true)]
        offdiag: Option<String>,
        /// Re-expand χ after at most this much time.
        #[arg(long)]
        restart: Option<f64>,
        #[arg(long, value_enum, default_value_t = PathChoice::Matrix)]
        path: PathChoice,
        /// Also run RK4 with this step and report the largest gap.
        #[arg(long)]
        rk4_step: Option<f64>,
    },
    /// Number of terms in the set-partition expansion of φ on n letters.
    Bell {
        #[arg(long)]
        n: usize,
    },
    /// Seeded Hopf-axiom suites for the plain and the star structure.
    HopfSuite {
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::JacobiViolation { .. }
            | Error::RealizationMismatch { .. }
            | Error::NotAnRMatrix { .. }
            | Error::NotASubalgebra { .. }
            | Error::CollapseFailure { .. }
            | Error::PrimitivityFailure { .. }
            | Error::NotPreLie { .. }
            | Error::StepTooLarge { .. } => Failure::Check(format!("{e:?}: {e}")),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Core(e) => e.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Input(m) | Failure::Check(m)) = &f;
            let _ = writeln!(err, "error: {m}");
            f.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = &cli.config;
    match &cli.command {
        Command::CheckAlgebra => match mode(cfg, None)? {
            Mode::Exact => check_algebra::<Q>(cfg, out),
            Mode::Float => check_algebra::<f64>(cfg, out),
        },
        Command::CheckRmatrix => match mode(cfg, None)? {
            Mode::Exact => check_rmatrix::<Q>(cfg, out),
            Mode::Float => check_rmatrix::<f64>(cfg, out),
        },
        Command::CheckPostlie { product, handedness } => match mode(cfg, None)? {
            Mode::Exact => check_postlie_cmd::<Q>(cfg, product.as_deref(), *handedness, out),
            Mode::Float => check_postlie_cmd::<f64>(cfg, product.as_deref(), *handedness, out),
        },
        Command::Magnus { x, product } => magnus(cfg, x, product.as_deref(), out),
        Command::Factorize { x } => {
            mode(cfg, Some(Mode::Float))?;
            factorize(cfg, x, out)
        }
        Command::Flow { x, diag, offdiag, restart, path, rk4_step } => {
            mode(cfg, Some(Mode::Float))?;
            let toda = match (diag, offdiag) {
                (Some(d), Some(o)) => Some((d.as_str(), o.as_str())),
                (None, None) => None,
                _ => return Err(Failure::Input("--diag and --offdiag go together".into())),
            };
            flow(cfg, x.as_deref(), toda, *restart, *path, *rk4_step, out, err)
        }
        Command::Bell { n } => {
            mode(cfg, Some(Mode::Exact))?;
            bell(cfg, *n, out)
        }
        Command::HopfSuite { cases, max_degree } => {
            mode(cfg, Some(Mode::Exact))?;
            hopf_suite(cfg, *cases, *max_degree, out)
        }
    }
}

/// The requested mode, checked against a subcommand that needs a specific one.
fn mode(cfg: &RunConfig, required: Option<Mode>) -> Result<Mode, Failure> {
    match (cfg.mode, required) {
        (Some(m), Some(r)) if m != r => Err(Failure::Input(format!("this subcommand needs --mode {}", if r == Mode::Exact { "exact" } else { "float" }))),
        (Some(m), _) => Ok(m),
        (None, Some(r)) => Ok(r),
        (None, None) => Ok(Mode::Exact),
    }
}

fn tolerance<S: Scalar>(cfg: &RunConfig) -> f64 {
    if S::EXACT {
        0.0
    } else {
        cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(cfg: &RunConfig, out: &mut dyn Write, text: &str) -> Outcome {
    let result = match &cfg.output {
        Some(path) => fs::write(path, text),
        None => out.write_all(text.as_bytes()),
    };
    result.map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn emit_json(cfg: &RunConfig, out: &mut dyn Write, value: serde_json::Value) -> Outcome {
    emit(cfg, out, &format!("{}\n", serde_json::to_string_pretty(&value).expect("reports serialize")))
}

fn named_structure(cfg: &RunConfig) -> Option<Structure> {
    cfg.builtin.as_deref().and_then(|b| b.parse().ok())
}

/// Plus and minus index sets.
type IndexSplit = (Vec<usize>, Vec<usize>);

fn load_algebra<S: Scalar>(cfg: &RunConfig) -> Result<(LieAlgebra<S>, Option<IndexSplit>), Failure> {
    if let Some(s) = named_structure(cfg) {
        return Ok((s.context::<S>()?.algebra().clone(), None));
    }
    if let Some(name) = &cfg.builtin {
        let which: Builtin = name.parse()?;
        let (g, split) = builtin::<S>(which)?;
        return Ok((g.with_tol(tolerance::<S>(cfg)), split.map(|s| (s.plus, s.minus))));
    }
    match &cfg.algebra {
        Some(path) => Ok((io::parse_algebra(&read(path)?, tolerance::<S>(cfg))?, None)),
        None => Err(Failure::Input("give --builtin or --algebra".into())),
    }
}

/// The algebra, `R` and `θ` without validating `R`.
fn load_raw_rmatrix<S: Scalar>(cfg: &RunConfig) -> Result<(LieAlgebra<S>, LinearEndo<S>, Theta), Failure> {
    if let Some(s) = named_structure(cfg) {
        let ctx = s.context::<S>()?;
        return Ok((ctx.algebra().clone(), ctx.r().clone(), ctx.theta()));
    }
    let (g, builtin_split) = load_algebra::<S>(cfg)?;
    if let Some(path) = &cfg.rmatrix {
        let (r, theta) = io::parse_rmatrix(&read(path)?, g.dim())?;
        return Ok((g, r, theta));
    }
    let (plus, minus) = match (&cfg.splitting, builtin_split) {
        (Some(path), _) => io::parse_splitting(&read(path)?)?,
        (None, Some(split)) => split,
        (None, None) => return Err(Failure::Input("give --rmatrix, --splitting, or a named r-matrix structure".into())),
    };
    let ctx = splitting_r(g, &plus, &minus)?;
    Ok((ctx.algebra().clone(), ctx.r().clone(), Theta::Mcybe))
}

fn load_context<S: Scalar>(cfg: &RunConfig) -> Result<RMatrixContext<S>, Failure> {
    if let Some(s) = named_structure(cfg) {
        return Ok(s.context()?);
    }
    let (g, builtin_split) = load_algebra::<S>(cfg)?;
    if let Some(path) = &cfg.rmatrix {
        let (r, theta) = io::parse_rmatrix(&read(path)?, g.dim())?;
        return Ok(RMatrixContext::new(g, r, theta)?);
    }
    let (plus, minus) = match (&cfg.splitting, builtin_split) {
        (Some(path), _) => io::parse_splitting(&read(path)?)?,
        (None, Some(split)) => split,
        (None, None) => return Err(Failure::Input("give --rmatrix, --splitting, or a named r-matrix structure".into())),
    };
    Ok(splitting_r(g, &plus, &minus)?)
}

fn check_algebra<S: Scalar>(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let (g, _) = load_algebra::<S>(cfg)?;
    let defect = g.max_jacobi_defect();
    let realization = g.realization().map(|m| m[0].rows());
    if cfg.json {
        return emit_json(cfg, out, json!({"ok": true, "dim": g.dim(), "basis": g.labels(), "max_jacobi_defect": defect, "realization_size": realization}));
    }
    let mut text = format!("algebra: dim {} [{}]\nJacobi: ok (max defect {defect:e})\n", g.dim(), g.labels().join(", "));
    match realization {
        Some(m) => text.push_str(&format!("realization: {m}x{m} matrices, bracket-compatible\n")),
        None => text.push_str("realization: none\n"),
    }
    emit(cfg, out, &text)
}

fn check_rmatrix<S: Scalar>(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let (g, r, theta) = load_raw_rmatrix::<S>(cfg)?;
    let report = is_rmatrix(&g, &r, &theta.value::<S>());
    let mut ok = report.ok;
    let mut lines = vec![format!("theta = {}", format_theta(theta)), describe_report(&report)];
    let mut extra = json!({});
    if report.ok && theta == Theta::Mcybe {
        let pm = check_pm_identities(&g, &r);
        ok &= pm.ok;
        lines.push(format!("R± identities and morphisms: {} (max defect {:e})", ok_word(pm.ok), pm.worst_defect));
        let sub = subalgebra_analysis(&g, &r);
        lines.push(format!(
            "dim im R₊ = {}, dim im R₋ = {}, dim k₊ = {}, dim k₋ = {}, subalgebras {}, ideals {}",
            sub.dim_im_plus,
            sub.dim_im_minus,
            sub.dim_k_plus,
            sub.dim_k_minus,
            ok_word(sub.subalgebras_ok),
            ok_word(sub.ideals_ok)
        ));
        ok &= sub.subalgebras_ok && sub.ideals_ok;
        extra = json!({"pm_ok": pm.ok, "pm_worst_defect": pm.worst_defect, "dim_im_plus": sub.dim_im_plus,
            "dim_im_minus": sub.dim_im_minus, "dim_k_plus": sub.dim_k_plus, "dim_k_minus": sub.dim_k_minus,
            "subalgebras_ok": sub.subalgebras_ok, "ideals_ok": sub.ideals_ok});
    }
    if cfg.json {
        let mut value = json!({"ok": ok, "theta": format_theta(theta), "rmatrix_ok": report.ok,
            "worst_pair": report.worst_pair, "worst_defect": report.worst_defect_norm});
        value.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
        emit_json(cfg, out, value)?;
    } else {
        emit(cfg, out, &(lines.join("\n") + "\n"))?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("r-matrix checks failed".into()))
    }
}

fn format_theta(theta: Theta) -> &'static str {
    match theta {
        Theta::Cybe => "0",
        Theta::Mcybe => "1",
    }
}

fn ok_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn describe_axioms(name: &str, h: Handedness, r: &AxiomReport) -> String {
    match (r.ok, r.worst_triple, r.worst_axiom) {
        (true, _, _) => format!("{name}: {h} post-Lie ok"),
        (false, Some(t), Some(a)) => format!("{name}: {h} post-Lie FAILED, {a:?} axiom on {t:?}, defect {:e}", r.worst_defect),
        _ => format!("{name}: {h} post-Lie FAILED"),
    }
}

fn check_postlie_cmd<S: Scalar>(cfg: &RunConfig, product: Option<&Path>, side: Side, out: &mut dyn Write) -> Outcome {
    let mut checks: Vec<(String, Handedness, BilinearProduct<S>, LieAlgebra<S>)> = Vec::new();
    let mut derived_target = None;
    match product {
        Some(path) => {
            let (g, _) = load_algebra::<S>(cfg)?;
            let p = io::parse_product::<S>(&read(path)?)?;
            let h = if side == Side::Left { Handedness::Left } else { Handedness::Right };
            checks.push((path.display().to_string(), h, p, g));
        }
        None => {
            let ctx = load_context::<S>(cfg)?;
            let g = ctx.algebra().clone();
            checks.push(("x ▷₊ y = [R₊x, y]".into(), Handedness::Left, ctx.post_tensor(Sign::Plus), g.clone()));
            checks.push(("x ▷₋ y = [R₋x, y]".into(), Handedness::Right, ctx.post_tensor(Sign::Minus), g));
            derived_target = Some(ctx.derived_algebra().clone());
        }
    }
    let mut ok = true;
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    for (name, h, p, g) in checks {
        let report = check_postlie(&p, &g, h)?;
        lines.push(describe_axioms(&name, h, &report));
        let mut derived_ok = None;
        if report.ok {
            let derived = PostLieStructure::new(p, g, h)?.derived_bracket();
            let matches = match (&derived, &derived_target) {
                (Ok(d), Some(target)) => close(d.structure(), target.structure(), tolerance::<S>(cfg)),
                (Ok(_), None) => true,
                (Err(_), _) => false,
            };
            derived_ok = Some(matches);
            lines.push(format!("  derived bracket: {}", if matches { "ok" } else { "FAILED" }));
            ok &= matches;
        }
        ok &= report.ok;
        reports.push(json!({"product": name, "handedness": h.to_string(), "ok": report.ok, "worst_defect": report.worst_defect,
            "worst_triple": report.worst_triple, "derived_bracket_ok": derived_ok}));
    }
    if cfg.json {
        emit_json(cfg, out, json!({"ok": ok, "checks": reports}))?;
    } else {
        emit(cfg, out, &(lines.join("\n") + "\n"))?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("post-Lie checks failed".into()))
    }
}

fn close<S: Scalar>(a: &[S], b: &[S], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible(tol))
}

fn report_chi<S: Scalar>(cfg: &RunConfig, chi: &GradedLieElement<S>, labels: &[String], out: &mut dyn Write) -> Outcome {
    if cfg.json {
        let mut value = io::graded_to_json(chi);
        value["mode"] = json!(if S::EXACT { "exact" } else { "float" });
        value["basis"] = json!(labels);
        return emit_json(cfg, out, value);
    }
    let header = format!("chi through t^{} in basis [{}]\n", chi.order(), labels.join(", "));
    emit(cfg, out, &(header + &chi.render()))
}

fn magnus(cfg: &RunConfig, x: &str, product: Option<&Path>, out: &mut dyn Write) -> Outcome {
    match mode(cfg, None)? {
        Mode::Exact => {
            let (star, labels) = match product {
                Some(path) => {
                    let (g, _) = load_algebra::<Q>(cfg)?;
                    let p = io::parse_product::<Q>(&read(path)?)?;
                    let labels = g.labels().to_vec();
                    (StarAlgebra::new(g, p, cfg.order)?, labels)
                }
                None => {
                    let ctx = load_context::<Q>(cfg)?;
                    (StarAlgebra::for_rmatrix(&ctx, cfg.order)?, ctx.algebra().labels().to_vec())
                }
            };
            let x = io::parse_vector::<Q>(x, labels.len())?;
            report_chi(cfg, &postlie_magnus(&star, &x, cfg.order)?, &labels, out)
        }
        Mode::Float => {
            if product.is_some() {
                return Err(Failure::Input("--product needs --mode exact".into()));
            }
            let ctx = load_context::<f64>(cfg)?;
            let x = io::parse_vector::<f64>(x, ctx.algebra().dim())?;
            let chi = chi_lie(&ctx.post_tensor(Sign::Minus), ctx.derived_algebra(), &x, cfg.order)?;
            report_chi(cfg, &chi, ctx.algebra().labels(), out)
        }
    }
}

fn factorize(cfg: &RunConfig, x: &str, out: &mut dyn Write) -> Outcome {
    if cfg.order == 0 {
        return Err(Failure::Input("--order must be at least 1".into()));
    }
    let ctx = load_context::<f64>(cfg)?;
    let x = io::parse_vector::<f64>(x, ctx.algebra().dim())?;
    let at_n = factorization_residual(&ctx, &x, cfg.order)?;
    let below = factorization_residual(&ctx, &x, cfg.order - 1)?;
    if cfg.json {
        return emit_json(cfg, out, json!({"order": cfg.order, "residual": at_n, "residual_previous_order": below}));
    }
    let text = format!("‖exp(x) - exp(R₊χ) exp(-R₋χ)‖₂\n  N = {}: {at_n:e}\n  N = {}: {below:e}\n", cfg.order, cfg.order - 1);
    emit(cfg, out, &text)
}

fn parse_list(text: &str) -> Result<Vec<f64>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|c| c.trim().parse::<f64>().map_err(|_| Failure::Input(format!("cannot read `{}` as a number", c.trim())))).collect()
}

#[allow(clippy::too_many_arguments)]
fn flow(
    cfg: &RunConfig,
    x: Option<&str>,
    toda: Option<(&str, &str)>,
    restart: Option<f64>,
    path: PathChoice,
    rk4_step: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    if cfg.steps == 0 || cfg.t1 < cfg.t0 {
        return Err(Failure::Input("need --steps ≥ 1 and --t1 ≥ --t0".into()));
    }
    let grid = linear_grid(cfg.t0, cfg.t1, cfg.steps + 1);
    let mut problem = match (toda, x) {
        (Some((d, o)), None) => {
            let diag = parse_list(d)?;
            toda_problem(diag.len(), &diag, &parse_list(o)?, grid, cfg.order)?
        }
        (None, Some(x)) => {
            let ctx = load_context::<f64>(cfg)?;
            let x0 = io::parse_vector::<f64>(x, ctx.algebra().dim())?;
            FlowProblem::new(ctx, x0, grid, cfg.order)?
        }
        _ => return Err(Failure::Input("give either --x or --diag/--offdiag".into())),
    };
    if let Some(tau) = cfg.tolerance {
        problem = problem.with_tau_flow(tau);
    }
    if let Some(length) = restart {
        problem = problem.with_restart(length);
    }
    let path = if path == PathChoice::Matrix { EvaluationPath::Matrix } else { EvaluationPath::Adjoint };
    let sol = factorized_solution(&problem, path)?;
    let labels = problem.ctx().algebra().labels().to_vec();
    let mut csv_bytes = Vec::new();
    let report = io::write_flow_csv(&mut csv_bytes, &labels, &sol.states)?;
    let rk4_gap = match rk4_step {
        Some(h) => {
            let rk = rk4_reference(&problem, h)?;
            Some(sol.states.iter().zip(&rk).map(|(a, b)| a.x.sub(&b.x).max_abs()).fold(0.0, f64::max))
        }
        None => None,
    };
    let summary = if cfg.json {
        serde_json::to_string_pretty(&json!({"points": sol.states.len(), "max_eig_drift": report.max_eig_drift,
            "max_trace_power_drift": report.max_trace_power_drift, "series_gap": sol.series_gap,
            "non_convergent": sol.non_convergent, "rk4_gap": rk4_gap}))
        .expect("reports serialize")
            + "\n"
    } else {
        let mut s = format!(
            "{} points, eigenvalue drift {:e}, trace-power drift {:e}, order gap {:e}\n",
            sol.states.len(),
            report.max_eig_drift,
            report.max_trace_power_drift,
            sol.series_gap
        );
        if let Some(gap) = rk4_gap {
            s.push_str(&format!("largest gap to RK4: {gap:e}\n"));
        }
        s
    };
    let io_err = |e: std::io::Error| Failure::Input(format!("cannot write output: {e}"));
    match &cfg.output {
        Some(file) => {
            fs::write(file, &csv_bytes).map_err(io_err)?;
            out.write_all(summary.as_bytes()).map_err(io_err)?;
        }
        None => {
            out.write_all(&csv_bytes).map_err(io_err)?;
            err.write_all(summary.as_bytes()).map_err(io_err)?;
        }
    }
    if sol.non_convergent {
        writeln!(err, "warning: NonConvergentSeries, orders N and N-1 differ by {:e}", sol.series_gap).map_err(io_err)?;
    }
    Ok(())
}

fn star_for_suites(cfg: &RunConfig, max_len: usize) -> Result<StarAlgebra, Failure> {
    let ctx = if cfg.builtin.is_none() && cfg.algebra.is_none() { Structure::Sl2Borel.context::<Q>()? } else { load_context::<Q>(cfg)? };
    Ok(StarAlgebra::for_rmatrix(&ctx, max_len)?)
}

fn bell(cfg: &RunConfig, n: usize, out: &mut dyn Write) -> Outcome {
    if n == 0 || n > 10 {
        return Err(Failure::Input("--n must be between 1 and 10".into()));
    }
    let star = star_for_suites(cfg, n)?;
    let dim = star.plain().dim();
    let letters: Vec<Vector<Q>> = (0..n).map(|i| Vector::basis(dim, i % dim)).collect();
    let terms = star.phi_expansion(&letters).len();
    if cfg.json {
        return emit_json(cfg, out, json!({"n": n, "terms": terms}));
    }
    emit(cfg, out, &format!("{terms}\n"))
}

fn hopf_suite(cfg: &RunConfig, cases: usize, max_degree: usize, out: &mut dyn Write) -> Outcome {
    let star = star_for_suites(cfg, 2 * max_degree)?;
    let plain = suites::hopf_suite("plain (·, S)", &PlainHopf(star.plain()), cfg.seed, cases, max_degree);
    let starred = suites::hopf_suite("star (∗, S∗)", &star, cfg.seed, cases, max_degree);
    let ok = plain.ok() && starred.ok();
    if cfg.json {
        let entry = |r: &suites::SuiteReport| json!({"name": r.name, "cases": r.cases, "failures": r.failures});
        emit_json(cfg, out, json!({"seed": cfg.seed, "ok": ok, "suites": [entry(&plain), entry(&starred)]}))?;
    } else {
        let mut text = format!("seed {}\n", cfg.seed);
        for r in [&plain, &starred] {
            text.push_str(&r.summary());
            text.push('\n');
            for f in &r.failures {
                text.push_str(&format!("  {f}\n"));
            }
        }
        emit(cfg, out, &text)?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(format!("Hopf suite failed (seed {})", cfg.seed)))
    }
}
