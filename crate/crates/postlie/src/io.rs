//! JSON file formats and flow CSV output.
//!
//! Exact values travel as strings (`"p/q"` or `"p"`); plain JSON numbers are
//! accepted on input and read through their decimal text, so `0.25` stays exact.

use std::io::Write;

use postlie_core::flows::{ConservationReport, FlowState};
use postlie_core::linalg::Matrix;
use postlie_core::magnus::GradedLieElement;
use postlie_core::scalar::{format_scalar, parse_scalar};
use postlie_core::{BilinearProduct, LieAlgebra, LinearEndo, Scalar, Theta, Vector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read `{0}` as a scalar")]
    Scalar(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] postlie_core::Error),
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

pub type IoResult<T> = Result<T, IoError>;

/// A scalar as it appears in a file: a string or a bare number.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Number(serde_json::Number),
}

impl ScalarText {
    pub fn parse<S: Scalar>(&self) -> IoResult<S> {
        let text = match self {
            ScalarText::Text(s) => s.clone(),
            ScalarText::Number(n) => n.to_string(),
        };
        parse_scalar(&text).ok_or(IoError::Scalar(text))
    }

    pub fn of<S: Scalar>(value: &S) -> Self {
        ScalarText::Text(format_scalar(value))
    }
}

type Entry = (usize, usize, usize, ScalarText);

#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    pub structure: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<RealizationFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RealizationFile {
    pub size: usize,
    pub matrices: Vec<Vec<Vec<ScalarText>>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RMatrixFile {
    pub theta: ScalarText,
    pub matrix: Vec<Vec<ScalarText>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SplittingFile {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProductFile {
    pub dim: usize,
    pub product: Vec<Entry>,
}

fn entries<S: Scalar>(raw: &[Entry]) -> IoResult<Vec<(usize, usize, usize, S)>> {
    raw.iter().map(|(i, j, k, v)| Ok((*i, *j, *k, v.parse()?))).collect()
}

fn matrix<S: Scalar>(rows: &[Vec<ScalarText>], size: usize, what: &str) -> IoResult<Matrix<S>> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(IoError::Format(format!("{what} must be {size}x{size}")));
    }
    let rows = rows.iter().map(|r| r.iter().map(ScalarText::parse).collect::<IoResult<Vec<S>>>()).collect::<IoResult<_>>()?;
    Ok(Matrix::from_rows(rows).expect("rows checked above"))
}

fn rows_of<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<ScalarText>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(ScalarText::of).collect()).collect()
}

/// Reads and validates an algebra. Missing basis labels default to `x0, x1, ...`.
pub fn parse_algebra<S: Scalar>(text: &str, tol: f64) -> IoResult<LieAlgebra<S>> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    let labels = if file.basis.is_empty() { (0..file.dim).map(|i| format!("x{i}")).collect() } else { file.basis };
    let realization = match &file.realization {
        None => None,
        Some(r) => {
            if r.matrices.len() != file.dim {
                return Err(IoError::Format(format!("realization needs {} matrices, found {}", file.dim, r.matrices.len())));
            }
            Some(r.matrices.iter().map(|m| matrix(m, r.size, "realization matrix")).collect::<IoResult<_>>()?)
        }
    };
    Ok(LieAlgebra::with_tolerance(file.dim, labels, &entries(&file.structure)?, realization, tol)?)
}

pub fn algebra_to_json<S: Scalar>(g: &LieAlgebra<S>) -> String {
    let file = AlgebraFile {
        dim: g.dim(),
        basis: g.labels().to_vec(),
        structure: g.sparse_entries().into_iter().map(|(i, j, k, v)| (i, j, k, ScalarText::of(&v))).collect(),
        realization: g.realization().map(|ms| RealizationFile { size: ms.first().map_or(0, |m| m.rows()), matrices: ms.iter().map(rows_of).collect() }),
    };
    serde_json::to_string_pretty(&file).expect("algebra files always serialize")
}

/// Reads `R` (column convention: `R e_j` is column `j`) and `θ ∈ {0, 1}`.
pub fn parse_rmatrix<S: Scalar>(text: &str, dim: usize) -> IoResult<(LinearEndo<S>, Theta)> {
    let file: RMatrixFile = serde_json::from_str(text)?;
    let theta: S = file.theta.parse()?;
    let theta = Theta::from_value(&theta).ok_or_else(|| IoError::Format("theta must be 0 or 1".into()))?;
    let r = LinearEndo::from_matrix(matrix(&file.matrix, dim, "r-matrix")?).expect("square by construction");
    Ok((r, theta))
}

pub fn rmatrix_to_json<S: Scalar>(r: &LinearEndo<S>, theta: Theta) -> String {
    let file = RMatrixFile { theta: ScalarText::of(&theta.value::<S>()), matrix: rows_of(r.matrix()) };
    serde_json::to_string_pretty(&file).expect("r-matrix files always serialize")
}

pub fn parse_splitting(text: &str) -> IoResult<(Vec<usize>, Vec<usize>)> {
    let file: SplittingFile = serde_json::from_str(text)?;
    Ok((file.plus, file.minus))
}

pub fn parse_product<S: Scalar>(text: &str) -> IoResult<BilinearProduct<S>> {
    let file: ProductFile = serde_json::from_str(text)?;
    Ok(BilinearProduct::from_entries(file.dim, &entries(&file.product)?)?)
}

/// Nonzero entries `(i, j, k, c)` of `x_i ▷ x_j = Σ c x_k`.
pub fn product_to_json<S: Scalar>(p: &BilinearProduct<S>) -> String {
    let n = p.dim();
    let mut product = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = p.t(i, j, k);
                if !c.is_zero() {
                    product.push((i, j, k, ScalarText::of(c)));
                }
            }
        }
    }
    serde_json::to_string_pretty(&ProductFile { dim: n, product }).expect("product files always serialize")
}

/// `{"orders": [[...], ...]}`; exact coordinates as strings, floats as numbers.
pub fn graded_to_json<S: Scalar>(chi: &GradedLieElement<S>) -> Value {
    let orders: Vec<Vec<Value>> =
        chi.coeffs().iter().map(|c| c.coords().iter().map(|v| if S::EXACT { Value::String(format_scalar(v)) } else { json!(v.to_f64()) }).collect()).collect();
    json!({ "orders": orders })
}

pub fn parse_graded<S: Scalar>(value: &Value) -> IoResult<GradedLieElement<S>> {
    let orders: Vec<Vec<ScalarText>> = serde_json::from_value(value.get("orders").cloned().unwrap_or(Value::Null))?;
    let coeffs = orders.iter().map(|c| Ok(Vector::new(c.iter().map(ScalarText::parse).collect::<IoResult<_>>()?))).collect::<IoResult<Vec<_>>>()?;
    if coeffs.is_empty() || coeffs.iter().any(|c| c.dim() != coeffs[0].dim()) {
        return Err(IoError::Format("orders must be nonempty and of one dimension".into()));
    }
    Ok(GradedLieElement::from_coeffs(coeffs))
}

/// Comma-separated coordinates such as `1,-1/2,0.25`.
pub fn parse_vector<S: Scalar>(text: &str, dim: usize) -> IoResult<Vector<S>> {
    let coords = text.split(',').map(|c| parse_scalar(c).ok_or_else(|| IoError::Scalar(c.trim().to_string()))).collect::<IoResult<Vec<S>>>()?;
    if coords.len() != dim {
        return Err(IoError::Format(format!("expected {dim} coordinates, found {}", coords.len())));
    }
    Ok(Vector::new(coords))
}

/// One row per state: `t`, coordinates, eigenvalues as `(re, im)`, `F_k`, then
/// the running drift of the eigenvalues and of the `F_k` against the first row.
pub fn write_flow_csv<W: Write>(out: W, labels: &[String], states: &[FlowState]) -> IoResult<ConservationReport> {
    let mut w = csv::Writer::from_writer(out);
    let first = states.first().ok_or_else(|| IoError::Format("no states to write".into()))?;
    let mut header = vec!["t".to_string()];
    header.extend(labels.iter().cloned());
    for k in 0..first.eigenvalues.len() {
        header.push(format!("eig{k}_re"));
        header.push(format!("eig{k}_im"));
    }
    header.extend((1..=first.trace_powers.len()).map(|k| format!("F{k}")));
    header.push("eig_drift".into());
    header.push("trace_power_drift".into());
    w.write_record(&header)?;

    let mut report = ConservationReport { max_eig_drift: 0.0, max_trace_power_drift: 0.0 };
    for s in states {
        let eig = s.eigenvalues.iter().zip(&first.eigenvalues).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let tp = s.trace_powers.iter().zip(&first.trace_powers).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        report.max_eig_drift = report.max_eig_drift.max(eig);
        report.max_trace_power_drift = report.max_trace_power_drift.max(tp);
        let mut row = vec![s.t.to_string()];
        row.extend(s.x.coords().iter().map(f64::to_string));
        for e in &s.eigenvalues {
            row.push(e.re.to_string());
            row.push(e.im.to_string());
        }
        row.extend(s.trace_powers.iter().map(f64::to_string));
        row.push(eig.to_string());
        row.push(tp.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(report)
}
