//! Dense linear maps `B^{⊗k} → B^{⊗l}` in the orthonormal tensor basis.
//!
//! Tensor indices are big-endian: the leftmost tensor factor is the most
//! significant digit of the flat index, matching the Kronecker product.

use std::fmt::Write as _;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("cannot compose: inner powers {left} and {right} differ")]
    PowerMismatch { left: usize, right: usize },
    #[error("operators act on algebras of different dimension ({0} vs {1})")]
    BaseMismatch(usize, usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("data length {got} does not match shape {rows}x{cols}")]
    Shape { rows: usize, cols: usize, got: usize },
}

/// Dense `n^l × n^k` matrix for a map `B^{⊗k} → B^{⊗l}` with `dim B = n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<S> {
    base_dim: usize,
    domain_power: usize,
    codomain_power: usize,
    data: Vec<S>,
}

pub(crate) fn ipow(n: usize, k: usize) -> usize {
    n.checked_pow(k as u32).expect("tensor power overflows usize")
}

impl<S: Scalar> Operator<S> {
    pub fn zeros(base_dim: usize, domain_power: usize, codomain_power: usize) -> Self {
        let len = ipow(base_dim, domain_power) * ipow(base_dim, codomain_power);
        Self { base_dim, domain_power, codomain_power, data: vec![S::zero(); len] }
    }

    pub fn identity(base_dim: usize, power: usize) -> Self {
        let mut op = Self::zeros(base_dim, power, power);
        for i in 0..op.rows() {
            op.set(i, i, S::one());
        }
        op
    }

    pub fn from_row_major(
        base_dim: usize,
        domain_power: usize,
        codomain_power: usize,
        data: Vec<S>,
    ) -> Result<Self, OperatorError> {
        let (rows, cols) = (ipow(base_dim, codomain_power), ipow(base_dim, domain_power));
        if data.len() != rows * cols {
            return Err(OperatorError::Shape { rows, cols, got: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(OperatorError::NonFinite);
        }
        Ok(Self { base_dim, domain_power, codomain_power, data })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn domain_power(&self) -> usize {
        self.domain_power
    }

    pub fn codomain_power(&self) -> usize {
        self.codomain_power
    }

    pub fn rows(&self) -> usize {
        ipow(self.base_dim, self.codomain_power)
    }

    pub fn cols(&self) -> usize {
        ipow(self.base_dim, self.domain_power)
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> S {
        self.data[row * self.cols() + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: S) {
        let c = self.cols();
        self.data[row * c + col] = v;
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Operator<S>) -> Result<Operator<S>, OperatorError> {
        if self.base_dim != other.base_dim {
            return Err(OperatorError::BaseMismatch(self.base_dim, other.base_dim));
        }
        if self.domain_power != other.codomain_power {
            return Err(OperatorError::PowerMismatch { left: self.domain_power, right: other.codomain_power });
        }
        let (r, inner, c) = (self.rows(), self.cols(), other.cols());
        let mut out = Operator::zeros(self.base_dim, other.domain_power, self.codomain_power);
        for i in 0..r {
            let row = &self.data[i * inner..(i + 1) * inner];
            let dst = &mut out.data[i * c..(i + 1) * c];
            for (t, &a) in row.iter().enumerate() {
                if a == S::zero() {
                    continue;
                }
                let src = &other.data[t * c..(t + 1) * c];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator<S>) -> Result<Operator<S>, OperatorError> {
        if self.base_dim != other.base_dim {
            return Err(OperatorError::BaseMismatch(self.base_dim, other.base_dim));
        }
        let mut out = Operator::zeros(
            self.base_dim,
            self.domain_power + other.domain_power,
            self.codomain_power + other.codomain_power,
        );
        let (r2, c2) = (other.rows(), other.cols());
        let oc = out.cols();
        for i1 in 0..self.rows() {
            for j1 in 0..self.cols() {
                let a = self.get(i1, j1);
                if a == S::zero() {
                    continue;
                }
                for i2 in 0..r2 {
                    let base = (i1 * r2 + i2) * oc + j1 * c2;
                    for j2 in 0..c2 {
                        out.data[base + j2] = a * other.get(i2, j2);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Hilbert-space adjoint; the basis is orthonormal and entries are real.
    pub fn adjoint(&self) -> Operator<S> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Operator::zeros(self.base_dim, self.codomain_power, self.domain_power);
        for i in 0..r {
            for j in 0..c {
                out.data[j * r + i] = self.data[i * c + j];
            }
        }
        out
    }

    pub fn scaled(&self, factor: S) -> Operator<S> {
        Operator { data: self.data.iter().map(|&x| x * factor).collect(), ..self.clone() }
    }

    /// Entrywise `max |self - other|`; `None` if the shapes differ.
    pub fn max_abs_diff(&self, other: &Operator<S>) -> Option<S> {
        if self.base_dim != other.base_dim
            || self.domain_power != other.domain_power
            || self.codomain_power != other.codomain_power
        {
            return None;
        }
        Some(self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).abs()).fold(S::zero(), S::max))
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().map(|x| x.abs()).fold(S::zero(), S::max)
    }

    /// Frobenius inner product `Tr(other^* self)`.
    pub fn frobenius_dot(&self, other: &Operator<S>) -> S {
        self.data.iter().zip(&other.data).map(|(&a, &b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Tab-separated rows, full round-trip precision.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let c = self.cols();
        for row in self.data.chunks(c.max(1)) {
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    s.push('\t');
                }
                let _ = write!(s, "{x:?}");
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_and_compose_interchange() {
        let a = Operator::from_row_major(2, 1, 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = Operator::from_row_major(2, 1, 1, vec![0.0, 1.0, -1.0, 0.5]).unwrap();
        let lhs = a.kron(&b).unwrap().compose(&b.kron(&a).unwrap()).unwrap();
        let rhs = a.compose(&b).unwrap().kron(&b.compose(&a).unwrap()).unwrap();
        assert_eq!(lhs.max_abs_diff(&rhs).unwrap(), 0.0);
    }

    #[test]
    fn adjoint_is_transpose() {
        let a = Operator::from_row_major(2, 0, 1, vec![1.0f32, 2.0]).unwrap();
        let t = a.adjoint();
        assert_eq!((t.rows(), t.cols()), (1, 2));
        assert_eq!(t.data(), &[1.0, 2.0]);
        assert_eq!(t.adjoint(), a);
    }

    #[test]
    fn shape_errors() {
        let id = Operator::<f64>::identity(3, 1);
        let eta = Operator::<f64>::zeros(3, 0, 1);
        assert!(eta.compose(&id).is_err());
        assert!(Operator::<f64>::from_row_major(2, 1, 1, vec![0.0; 3]).is_err());
        assert_eq!(Operator::<f64>::from_row_major(1, 0, 0, vec![f64::NAN]), Err(OperatorError::NonFinite));
    }

    #[test]
    fn tsv_round_trips_values() {
        let a = Operator::from_row_major(2, 1, 0, vec![0.1, 1.0 / 3.0]).unwrap();
        let tsv = a.to_tsv();
        let back: Vec<f64> = tsv.trim().split('\t').map(|x| x.parse().unwrap()).collect();
        assert_eq!(back, a.data());
    }
}
