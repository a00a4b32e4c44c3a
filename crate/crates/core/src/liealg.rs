//! Finite-dimensional Lie algebras given by structure constants.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{LinearEndo, Matrix, Vector};
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

/// A Lie algebra with basis `x_0..x_{n-1}` and `[x_i, x_j] = Σ_k C[i][j][k] x_k`.
///
/// Values are immutable once validated.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<S> {
    dim: usize,
    labels: Vec<String>,
    structure: Vec<S>,
    realization: Option<Vec<Matrix<S>>>,
    tol: f64,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds and validates an algebra from sparse entries `(i, j, k, value)` with `i < j`.
    /// The antisymmetric partner entries are filled in automatically.
    pub fn new(dim: usize, labels: Vec<String>, entries: &[(usize, usize, usize, S)], realization: Option<Vec<Matrix<S>>>) -> Result<Self> {
        Self::with_tolerance(dim, labels, entries, realization, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        dim: usize,
        labels: Vec<String>,
        entries: &[(usize, usize, usize, S)],
        realization: Option<Vec<Matrix<S>>>,
        tol: f64,
    ) -> Result<Self> {
        let mut structure = vec![S::zero(); dim * dim * dim];
        for (i, j, k, value) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidEntry { i, j, k, reason: "index out of range" });
            }
            if i >= j {
                return Err(Error::InvalidEntry { i, j, k, reason: "entries must have i < j" });
            }
            structure[(i * dim + j) * dim + k] += value.clone();
            structure[(j * dim + i) * dim + k] -= value.clone();
        }
        Self::from_dense(dim, labels, structure, realization, tol)
    }

    /// Builds and validates an algebra from a dense `n³` tensor.
    pub fn from_dense(dim: usize, labels: Vec<String>, structure: Vec<S>, realization: Option<Vec<Matrix<S>>>, tol: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimensions("dimension must be positive".into()));
        }
        if labels.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: labels.len() });
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, found: structure.len() });
        }
        let algebra = Self { dim, labels, structure, realization, tol };
        algebra.check_antisymmetry()?;
        algebra.check_jacobi()?;
        algebra.check_realization()?;
        Ok(algebra)
    }

    /// The zero bracket on `dim` generators.
    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            labels: (0..dim).map(|i| format!("x{i}")).collect(),
            structure: vec![S::zero(); dim * dim * dim],
            realization: None,
            tol: DEFAULT_TOLERANCE,
        }
    }

    fn check_antisymmetry(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in i..self.dim {
                for k in 0..self.dim {
                    let sum = self.c(i, j, k).clone() + self.c(j, i, k).clone();
                    if !sum.is_negligible(self.tol) {
                        return Err(Error::InvalidEntry { i, j, k, reason: "structure constants not antisymmetric" });
                    }
                }
            }
        }
        Ok(())
    }

    /// Jacobi defect `[[x_i,x_j],x_k] + [[x_k,x_i],x_j] + [[x_j,x_k],x_i]` in coordinate `l`.
    pub fn jacobi_defect(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        let mut sum = S::zero();
        for m in 0..self.dim {
            for (a, b, c) in [(i, j, k), (k, i, j), (j, k, i)] {
                let first = self.c(a, b, m);
                if first.is_zero() {
                    continue;
                }
                let second = self.c(m, c, l);
                if !second.is_zero() {
                    sum += first.clone() * second.clone();
                }
            }
        }
        sum
    }

    /// Largest Jacobi defect over all basis triples.
    pub fn max_jacobi_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        worst = worst.max(self.jacobi_defect(i, j, k, l).magnitude());
                    }
                }
            }
        }
        worst
    }

    fn check_jacobi(&self) -> Result<()> {
        // With antisymmetry in place, triples with a repeated index are automatic.
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let defect = self.jacobi_defect(i, j, k, l);
                        if !defect.is_negligible(self.tol) {
                            return Err(Error::JacobiViolation { i, j, k, l, defect: defect.to_string() });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_realization(&self) -> Result<()> {
        let Some(mats) = &self.realization else { return Ok(()) };
        if mats.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: mats.len() });
        }
        let m = mats[0].rows();
        if let Some(bad) = mats.iter().find(|a| a.rows() != m || a.cols() != m) {
            return Err(Error::BadDimensions(format!("realization matrices must all be {m}x{m}, found {}x{}", bad.rows(), bad.cols())));
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let lhs = self.realize_coords((0..self.dim).map(|k| self.c(i, j, k)));
                let rhs = mats[i].commutator(&mats[j]);
                if lhs.entries().iter().zip(rhs.entries()).any(|(a, b)| !(a.clone() - b.clone()).is_negligible(self.tol)) {
                    return Err(Error::RealizationMismatch { i, j });
                }
            }
        }
        Ok(())
    }

    fn realize_coords<'a>(&'a self, coords: impl Iterator<Item = &'a S>) -> Matrix<S> {
        let mats = self.realization.as_ref().expect("realization present");
        let m = mats[0].rows();
        let mut out = Matrix::zeros(m, m);
        for (c, mat) in coords.zip(mats) {
            if !c.is_zero() {
                out.axpy(c, mat);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Same algebra with a different float tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Structure constant `C[i][j][k]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure(&self) -> &[S] {
        &self.structure
    }

    pub fn realization(&self) -> Option<&[Matrix<S>]> {
        self.realization.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(|c| c.is_negligible(self.tol))
    }

    pub fn basis(&self, i: usize) -> Vector<S> {
        Vector::basis(self.dim, i)
    }

    pub fn zero(&self) -> Vector<S> {
        Vector::zeros(self.dim)
    }

    pub fn conform(&self, x: &Vector<S>) -> Result<()> {
        if x.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() })
        }
    }

    /// `[x, y]`
    pub fn bracket(&self, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
        self.conform(x)?;
        self.conform(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let w = x[i].clone() * y[j].clone();
                let row = &self.structure[(i * n + j) * n..(i * n + j + 1) * n];
                for (k, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += w.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// `[x_i, x_j]` as a vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector<S> {
        let n = self.dim;
        Vector::new(self.structure[(i * n + j) * n..(i * n + j + 1) * n].to_vec())
    }

    /// `ad_x = [x, ·]`
    pub fn ad(&self, x: &Vector<S>) -> Result<LinearEndo<S>> {
        self.conform(x)?;
        let cols: Vec<_> = (0..self.dim).map(|j| self.bracket_unchecked(x, &self.basis(j))).collect();
        Ok(LinearEndo::from_columns(&cols))
    }

    /// `ρ(x) = Σ x_i ρ(x_i)`
    pub fn realize(&self, x: &Vector<S>) -> Result<Matrix<S>> {
        self.conform(x)?;
        if self.realization.is_none() {
            return Err(Error::NoRealization);
        }
        Ok(self.realize_coords(x.coords().iter()))
    }

    /// Trace form `tr(ρ(x) ρ(y))` of the attached realization.
    pub fn trace_form(&self, x: &Vector<S>, y: &Vector<S>) -> Result<S> {
        let a = self.realize(x)?;
        let b = self.realize(y)?;
        Ok(a.mul(&b).trace())
    }

    /// Converts coefficients, e.g. exact to float. Validation is not repeated.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            dim: self.dim,
            labels: self.labels.clone(),
            structure: self.structure.iter().map(&f).collect(),
            realization: self.realization.as_ref().map(|ms| ms.iter().map(|m| m.map(&f)).collect()),
            tol: self.tol,
        }
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        self.map_scalar(Scalar::to_f64)
    }

    /// Sparse `(i, j, k, value)` entries with `i < j`, the inverse of [`LieAlgebra::new`].
    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, S)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Human-readable rendering of a vector, e.g. `2 E11 - 1/2 E21`.
    pub fn render(&self, x: &Vector<S>) -> String {
        let mut out = String::new();
        for (i, c) in x.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, text.as_str()),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                out.push_str(mag);
                out.push(' ');
            }
            out.push_str(&self.labels[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Built-in algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// `gl(n)`, basis `E_ij` in row-major order.
    Gl(usize),
    /// `sl(2)` with basis `(e, h, f)`.
    Sl2,
    /// `so(3)` with basis `L1, L2, L3`, `[L1, L2] = L3`.
    So3,
    /// `gl(n)` reordered so that the upper triangle (with diagonal) comes first
    /// and the strictly lower triangle second.
    UpperLowerSplit(usize),
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts `gl(3)`, `gl3`, `sl(2)`, `so(3)`, `upper_lower_split(3)`.
    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let unsupported = || Error::UnsupportedName(text.to_string());
        let arg = |prefix: &str| -> Option<usize> {
            let rest = compact.strip_prefix(prefix)?;
            let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            rest.parse().ok()
        };
        match compact.as_str() {
            "sl(2)" | "sl2" => return Ok(Builtin::Sl2),
            "so(3)" | "so3" => return Ok(Builtin::So3),
            _ => {}
        }
        if let Some(n) = arg("upper_lower_split") {
            return if n >= 2 { Ok(Builtin::UpperLowerSplit(n)) } else { Err(unsupported()) };
        }
        if let Some(n) = arg("gl") {
            return if n >= 2 { Ok(Builtin::Gl(n)) } else { Err(unsupported()) };
        }
        Err(unsupported())
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Gl(n) => write!(f, "gl({n})"),
            Builtin::Sl2 => f.write_str("sl(2)"),
            Builtin::So3 => f.write_str("so(3)"),
            Builtin::UpperLowerSplit(n) => write!(f, "upper_lower_split({n})"),
        }
    }
}

/// A decomposition `g = g₊ ⊕ g₋` into complementary basis index sets, with projections.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting<S> {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub pi_plus: LinearEndo<S>,
    pub pi_minus: LinearEndo<S>,
}

impl<S: Scalar> Splitting<S> {
    pub fn new(dim: usize, plus: Vec<usize>, minus: Vec<usize>) -> Self {
        let pi_plus = LinearEndo::projection(dim, &plus);
        let pi_minus = LinearEndo::projection(dim, &minus);
        Self { plus, minus, pi_plus, pi_minus }
    }
}

/// Builds a built-in algebra with its defining realization attached.
/// `UpperLowerSplit` also returns the splitting data.
pub fn builtin<S: Scalar>(which: Builtin) -> Result<(LieAlgebra<S>, Option<Splitting<S>>)> {
    match which {
        Builtin::Gl(n) if n >= 2 => {
            let order: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
            Ok((matrix_algebra(n, &order)?, None))
        }
        Builtin::UpperLowerSplit(n) if n >= 2 => {
            let mut order: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
            let upper = order.len();
            order.extend((0..n).flat_map(|i| (0..i).map(move |j| (i, j))));
            let algebra = matrix_algebra(n, &order)?;
            let split = Splitting::new(n * n, (0..upper).collect(), (upper..n * n).collect());
            Ok((algebra, Some(split)))
        }
        Builtin::Sl2 => Ok((sl2()?, None)),
        Builtin::So3 => Ok((so3()?, None)),
        other => Err(Error::UnsupportedName(other.to_string())),
    }
}

fn elementary<S: Scalar>(n: usize, i: usize, j: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = S::one();
    m
}

fn gl_label(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{},{}", i + 1, j + 1)
    }
}

/// `gl(n)` with the elementary matrices ordered as in `order`.
fn matrix_algebra<S: Scalar>(n: usize, order: &[(usize, usize)]) -> Result<LieAlgebra<S>> {
    let mut index = vec![0; n * n];
    for (pos, &(i, j)) in order.iter().enumerate() {
        index[i * n + j] = pos;
    }
    // [E_ij, E_kl] = δ_jk E_il - δ_li E_kj
    let mut entries = Vec::new();
    for (a, &(i, j)) in order.iter().enumerate() {
        for (b, &(k, l)) in order.iter().enumerate().skip(a + 1) {
            if j == k {
                entries.push((a, b, index[i * n + l], S::one()));
            }
            if l == i {
                entries.push((a, b, index[k * n + j], -S::one()));
            }
        }
    }
    let labels = order.iter().map(|&(i, j)| gl_label(n, i, j)).collect();
    let realization = order.iter().map(|&(i, j)| elementary(n, i, j)).collect();
    LieAlgebra::new(n * n, labels, &entries, Some(realization))
}

fn sl2<S: Scalar>() -> Result<LieAlgebra<S>> {
    let two = S::from_i64(2);
    // [e,h] = -2e, [e,f] = h, [h,f] = -2f
    let entries = [(0, 1, 0, -two.clone()), (0, 2, 1, S::one()), (1, 2, 2, -two)];
    let e = elementary(2, 0, 1);
    let f = elementary(2, 1, 0);
    let h = elementary(2, 0, 0).sub(&elementary(2, 1, 1));
    let labels = ["e", "h", "f"].iter().map(|s| s.to_string()).collect();
    LieAlgebra::new(3, labels, &entries, Some(vec![e, h, f]))
}

fn so3<S: Scalar>() -> Result<LieAlgebra<S>> {
    let entries = [(0, 1, 2, S::one()), (1, 2, 0, S::one()), (0, 2, 1, -S::one())];
    // (L_i)_{jk} = -ε_ijk
    let levi = |i: usize, j: usize, k: usize| -> i64 {
        if i == j || j == k || i == k {
            0
        } else if (i + 1) % 3 == j {
            1
        } else {
            -1
        }
    };
    let mats = (0..3).map(|i| Matrix::from_fn(3, 3, |j, k| S::from_i64(-levi(i, j, k)))).collect();
    let labels = ["L1", "L2", "L3"].iter().map(|s| s.to_string()).collect();
    LieAlgebra::new(3, labels, &entries, Some(mats))
}
