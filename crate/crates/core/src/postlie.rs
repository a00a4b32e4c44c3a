//! Post-Lie and pre-Lie products given by explicit structure tensors.
//!
//! Associators follow `a(x, y, z) = (x ∘ y) ∘ z - x ∘ (y ∘ z)`. With that
//! convention a left post-Lie product satisfies
//! `[x, y] ▷ z = a(x, y, z) - a(y, x, z)` and a right one
//! `[x, y] ◁ z = a(y, x, z) - a(x, y, z)`. Both act by derivations of `[·,·]`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{LinearEndo, Vector};
use crate::scalar::Scalar;

/// `x_i ∘ x_j = Σ_k T[i][j][k] x_k`
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearProduct<S> {
    dim: usize,
    tensor: Vec<S>,
}

impl<S: Scalar> BilinearProduct<S> {
    pub fn new(dim: usize, tensor: Vec<S>) -> Result<Self> {
        if tensor.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, found: tensor.len() });
        }
        Ok(Self { dim, tensor })
    }

    /// From sparse `(i, j, k, value)` entries; repeated entries add up.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, S)]) -> Result<Self> {
        let mut tensor = vec![S::zero(); dim * dim * dim];
        for (i, j, k, value) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::InvalidEntry { i: *i, j: *j, k: *k, reason: "index out of range" });
            }
            tensor[(i * dim + j) * dim + k] += value.clone();
        }
        Ok(Self { dim, tensor })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, tensor: vec![S::zero(); dim * dim * dim] }
    }

    /// Builds the tensor from the products of basis pairs.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vector<S>) -> Self {
        let mut tensor = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                debug_assert_eq!(v.dim(), dim);
                tensor.extend(v.into_coords());
            }
        }
        Self { dim, tensor }
    }

    /// The Lie bracket of `algebra` viewed as a product.
    pub fn from_bracket(algebra: &LieAlgebra<S>) -> Self {
        Self { dim: algebra.dim(), tensor: algebra.structure().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self, i: usize, j: usize, k: usize) -> &S {
        &self.tensor[(i * self.dim + j) * self.dim + k]
    }

    pub fn tensor(&self) -> &[S] {
        &self.tensor
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(Scalar::is_zero)
    }

    /// `x_i ∘ x_j`
    pub fn basis_product(&self, i: usize, j: usize) -> Vector<S> {
        let n = self.dim;
        Vector::new(self.tensor[(i * n + j) * n..(i * n + j + 1) * n].to_vec())
    }

    pub fn apply(&self, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
            }
        }
        Ok(self.apply_unchecked(x, y))
    }

    pub(crate) fn apply_unchecked(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let w = x[i].clone() * y[j].clone();
                for (k, t) in self.tensor[(i * n + j) * n..(i * n + j + 1) * n].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += w.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    /// Left multiplication `y ↦ x ∘ y` as a matrix.
    pub fn left_mul(&self, x: &Vector<S>) -> LinearEndo<S> {
        let cols: Vec<_> = (0..self.dim).map(|j| self.apply_unchecked(x, &Vector::basis(self.dim, j))).collect();
        LinearEndo::from_columns(&cols)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { dim: self.dim, tensor: self.tensor.iter().zip(&other.tensor).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { dim: self.dim, tensor: self.tensor.iter().zip(&other.tensor).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self { dim: self.dim, tensor: self.tensor.iter().map(|a| a.clone() * factor.clone()).collect() }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BilinearProduct<T> {
        BilinearProduct { dim: self.dim, tensor: self.tensor.iter().map(f).collect() }
    }

    /// `a(x_i, x_j, x_k) = (x_i ∘ x_j) ∘ x_k - x_i ∘ (x_j ∘ x_k)`
    pub fn associator(&self, i: usize, j: usize, k: usize) -> Vector<S> {
        let xk = Vector::basis(self.dim, k);
        let xi = Vector::basis(self.dim, i);
        let left = self.apply_unchecked(&self.basis_product(i, j), &xk);
        let right = self.apply_unchecked(&xi, &self.basis_product(j, k));
        left.sub(&right)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Handedness {
    Left,
    Right,
}

impl fmt::Display for Handedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Handedness::Left => "left",
            Handedness::Right => "right",
        })
    }
}

/// Which axiom a defect belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// `x ∘ [y, z] = [x ∘ y, z] + [y, x ∘ z]`
    Derivation,
    /// The bracket-associator relation of the given handedness.
    Associator,
    /// `a(x, y, z) = a(y, x, z)`
    PreLie,
}

/// Result of an axiom check over all basis triples.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub ok: bool,
    pub worst_defect: f64,
    pub worst_triple: Option<(usize, usize, usize)>,
    pub worst_axiom: Option<Axiom>,
}

impl AxiomReport {
    fn new() -> Self {
        Self { ok: true, worst_defect: 0.0, worst_triple: None, worst_axiom: None }
    }

    fn record<S: Scalar>(&mut self, axiom: Axiom, triple: (usize, usize, usize), defect: &Vector<S>, tol: f64) {
        let size = defect.max_abs();
        if !defect.is_negligible(tol) {
            self.ok = false;
        }
        if size > self.worst_defect || (self.worst_triple.is_none() && !defect.is_zero()) {
            self.worst_defect = size;
            self.worst_triple = Some(triple);
            self.worst_axiom = Some(axiom);
        }
    }
}

/// Evaluates both post-Lie axioms of the given handedness on all basis triples.
pub fn check_postlie<S: Scalar>(product: &BilinearProduct<S>, algebra: &LieAlgebra<S>, handedness: Handedness) -> Result<AxiomReport> {
    let n = algebra.dim();
    if product.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: product.dim() });
    }
    let tol = algebra.tolerance();
    let mut report = AxiomReport::new();
    let mut assoc = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                assoc.push(product.associator(i, j, k));
            }
        }
    }
    let a = |i: usize, j: usize, k: usize| &assoc[(i * n + j) * n + k];
    for i in 0..n {
        let xi = algebra.basis(i);
        for j in 0..n {
            let xj = algebra.basis(j);
            let xi_xj = product.basis_product(i, j);
            let bracket_ij = algebra.basis_bracket(i, j);
            for k in 0..n {
                let xk = algebra.basis(k);
                let lhs = product.apply_unchecked(&xi, &algebra.basis_bracket(j, k));
                let rhs = algebra.bracket_unchecked(&xi_xj, &xk).add(&algebra.bracket_unchecked(&xj, &product.basis_product(i, k)));
                report.record(Axiom::Derivation, (i, j, k), &lhs.sub(&rhs), tol);

                let lhs = product.apply_unchecked(&bracket_ij, &xk);
                let rhs = match handedness {
                    Handedness::Left => a(i, j, k).sub(a(j, i, k)),
                    Handedness::Right => a(j, i, k).sub(a(i, j, k)),
                };
                report.record(Axiom::Associator, (i, j, k), &lhs.sub(&rhs), tol);
            }
        }
    }
    Ok(report)
}

/// Left pre-Lie identity `a(x, y, z) = a(y, x, z)` on all basis triples.
pub fn check_prelie<S: Scalar>(product: &BilinearProduct<S>, tol: f64) -> AxiomReport {
    let n = product.dim();
    let mut report = AxiomReport::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let defect = product.associator(i, j, k).sub(&product.associator(j, i, k));
                report.record(Axiom::PreLie, (i, j, k), &defect, tol);
            }
        }
    }
    report
}

/// A product together with the Lie bracket it is post-Lie over.
#[derive(Clone, Debug, PartialEq)]
pub struct PostLieStructure<S> {
    product: BilinearProduct<S>,
    bracket_algebra: LieAlgebra<S>,
    handedness: Handedness,
}

impl<S: Scalar> PostLieStructure<S> {
    /// Validates the axioms for the stated handedness.
    pub fn new(product: BilinearProduct<S>, bracket_algebra: LieAlgebra<S>, handedness: Handedness) -> Result<Self> {
        let report = check_postlie(&product, &bracket_algebra, handedness)?;
        if !report.ok {
            return Err(Error::InvalidInput(alloc::format!(
                "not a {handedness} post-Lie product: {:?} defect {:e} at {:?}",
                report.worst_axiom.unwrap_or(Axiom::Derivation),
                report.worst_defect,
                report.worst_triple.unwrap_or_default()
            )));
        }
        Ok(Self { product, bracket_algebra, handedness })
    }

    pub fn product(&self) -> &BilinearProduct<S> {
        &self.product
    }

    pub fn bracket_algebra(&self) -> &LieAlgebra<S> {
        &self.bracket_algebra
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    fn shifted(&self, sign: i64) -> BilinearProduct<S> {
        let bracket = BilinearProduct::from_bracket(&self.bracket_algebra);
        self.product.add(&bracket.scale(&S::from_i64(sign)))
    }

    /// `x ◁ y = x ▷ y - [x, y]`
    pub fn to_right(&self) -> Result<Self> {
        if self.handedness != Handedness::Left {
            return Err(Error::InvalidInput("to_right expects a left post-Lie structure".to_string()));
        }
        Ok(Self { product: self.shifted(-1), bracket_algebra: self.bracket_algebra.clone(), handedness: Handedness::Right })
    }

    /// `x ▷ y = x ◁ y + [x, y]`
    pub fn to_left(&self) -> Result<Self> {
        if self.handedness != Handedness::Right {
            return Err(Error::InvalidInput("to_left expects a right post-Lie structure".to_string()));
        }
        Ok(Self { product: self.shifted(1), bracket_algebra: self.bracket_algebra.clone(), handedness: Handedness::Left })
    }

    /// `⟦x, y⟧ = x ▷ y - y ▷ x - [x, y]` of the left form, validated as a Lie algebra.
    pub fn derived_bracket(&self) -> Result<LieAlgebra<S>> {
        let left = match self.handedness {
            Handedness::Left => self.product.clone(),
            Handedness::Right => self.shifted(1),
        };
        let a = &self.bracket_algebra;
        let n = a.dim();
        let mut structure = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let v = left.basis_product(i, j).sub(&left.basis_product(j, i)).sub(&a.basis_bracket(i, j));
                structure.extend(v.into_coords());
            }
        }
        LieAlgebra::from_dense(n, a.labels().to_vec(), structure, None, a.tolerance())
    }

    /// Lie-admissible product `≻` whose commutator is the derived bracket:
    /// `x ▷ y - ½[x, y]` for left structures, `x ◁ y + ½[x, y]` for right ones.
    pub fn lie_admissible(&self) -> BilinearProduct<S> {
        let half = match self.handedness {
            Handedness::Left => S::from_ratio(-1, 2),
            Handedness::Right => S::from_ratio(1, 2),
        };
        self.product.add(&BilinearProduct::from_bracket(&self.bracket_algebra).scale(&half))
    }
}
