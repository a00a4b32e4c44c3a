use alloc::vec;
use alloc::vec::Vec;

use super::hopf::HopfStructure;
use super::{Env, EnvElement, Tensor, Q};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A polynomial `Σ_{m ≤ N} A_m t^m` in a formal parameter `t` with enveloping-algebra
/// coefficients. Products are exact through `t^N`: no word truncation is applied,
/// so identities such as `log(exp(A)) = A` hold coefficient by coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<EnvElement>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![EnvElement::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(EnvElement::one(), 0, order)
    }

    /// `A t^degree`
    pub fn monomial(a: EnvElement, degree: usize, order: usize) -> Self {
        let mut out = Self::zero(order);
        if degree <= order {
            out.coeffs[degree] = a;
        }
        out
    }

    /// Coefficients for `t^0, t^1, ..`; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<EnvElement>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &EnvElement {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[EnvElement] {
        &self.coeffs
    }

    pub fn add(&self, other: &Series) -> Series {
        Series { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Series) -> Series {
        Series { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    /// Cauchy product through `t^N` under the structure's multiplication.
    pub fn mul<H: HopfStructure + ?Sized>(&self, other: &Series, h: &H) -> Series {
        let n = self.order().min(other.order());
        let mut out = Series::zero(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = h.mul_full(&self.coeffs[i], &other.coeffs[j]);
                out.coeffs[i + j].add_scaled(&prod, &Q::one());
            }
        }
        out
    }

    /// `Σ_k A^k / k!`; the constant coefficient must vanish.
    pub fn exp<H: HopfStructure + ?Sized>(&self, h: &H) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInAugmentationIdeal);
        }
        let mut out = Series::one(self.order());
        let mut power = Series::one(self.order());
        for k in 1..=self.order() {
            power = power.mul(self, h).scale(&Q::from_ratio(1, k as i64));
            out = out.add(&power);
        }
        Ok(out)
    }

    /// `Σ_k (-1)^{k-1} (A - 1)^k / k`; the constant coefficient must be `1`.
    pub fn log<H: HopfStructure + ?Sized>(&self, h: &H) -> Result<Series> {
        if self.coeffs[0] != EnvElement::one() {
            return Err(Error::NotUnitNormalized);
        }
        let u = self.sub(&Series::one(self.order()));
        let mut out = Series::zero(self.order());
        let mut power = Series::one(self.order());
        for k in 1..=self.order() {
            power = power.mul(&u, h);
            out = out.add(&power.scale(&Q::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64)));
        }
        Ok(out)
    }

    /// Every coefficient is primitive.
    pub fn is_primitive(&self, env: &Env) -> bool {
        self.coeffs.iter().all(|c| env.is_primitive(c))
    }

    /// `Δ(A_m) = Σ_{i+j=m} A_i ⊗ A_j` for every `m ≤ N`, with `A_0 = 1`.
    pub fn is_grouplike(&self, env: &Env) -> bool {
        if self.coeffs[0] != EnvElement::one() {
            return false;
        }
        (1..=self.order()).all(|m| {
            let mut expected = Tensor::zero(2);
            for i in 0..=m {
                expected.add_scaled(&Tensor::product_of(&self.coeffs[i], &self.coeffs[m - i]), &Q::one());
            }
            env.coproduct(&self.coeffs[m]) == expected
        })
    }

    /// Index of the first coefficient where the series differ, if any.
    pub fn first_difference(&self, other: &Series) -> Option<usize> {
        let n = self.order().max(other.order());
        let zero = EnvElement::zero();
        (0..=n).find(|&m| self.coeffs.get(m).unwrap_or(&zero) != other.coeffs.get(m).unwrap_or(&zero))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(EnvElement::max_abs).fold(0.0, f64::max)
    }
}
