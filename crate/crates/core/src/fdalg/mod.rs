//! Finite-dimensional C*-algebras `B = ⊕_T M_{n_T}(ℂ)` with a faithful positive
//! functional `ψ = ⊕_T Tr(Q_T ·)`, `Q_T` diagonal.
//!
//! Weights are exact rationals. Numeric maps are written in the orthonormal basis
//! `b_ij^T = Q_{j,T}^{-1/2} e_ij^T`, indexed block by block and row-major inside a
//! block.

mod file;
mod graph;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::operator::{Operator, OperatorError};
use crate::scalar::Scalar;
use crate::Rational;

pub use file::{parse_rational, AlgebraFile, BlockFile};
pub use graph::{
    analyze_graph, from_classical_graph, spectral_projections, GraphReport, QuantumGraph, SpectralProjection,
    DEFAULT_GRAPH_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FdAlgError {
    #[error("algebra has no blocks")]
    NoBlocks,
    #[error("block {0} has size 0")]
    ZeroSize(usize),
    #[error("block {block} has size {size} but {got} weights")]
    WeightCount { block: usize, size: usize, got: usize },
    #[error("weight {value} in block {block} is not positive (faithfulness)")]
    Faithfulness { block: usize, value: String },
    #[error("weights sum to {0}, not 1; pass normalize to rescale")]
    NotAState(String),
    #[error("m_k needs k >= 1")]
    Arity,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix size {got} does not match dim(B) = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("adjacency entry ({0}, {1}) is not 0 or 1")]
    NotAdjacency(usize, usize),
    #[error("d is not normal (||dd* - d*d|| = {0:e})")]
    NotNormal(f64),
    #[error("cannot parse algebra: {0}")]
    Parse(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// One matrix summand `M_{n_T}` with the diagonal of `Q_T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixBlock {
    pub size: usize,
    pub q: Vec<Rational>,
}

impl MatrixBlock {
    pub fn new(size: usize, q: Vec<Rational>) -> Self {
        Self { size, q }
    }

    /// `size` copies of the same weight.
    pub fn scalar(size: usize, q: Rational) -> Self {
        Self { size, q: vec![q; size] }
    }

    pub fn trace_q(&self) -> Rational {
        self.q.iter().sum()
    }

    pub fn trace_q_inv(&self) -> Rational {
        self.q.iter().map(|x| x.recip()).sum()
    }
}

/// Position of a basis element `b_ij^T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

/// Which structure map to materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureMap {
    /// Iterated multiplication `B^{⊗k} → B`.
    MultiplyK(usize),
    /// Adjoint of the binary multiplication.
    MultiplyStar,
    /// `η : ℂ → B`.
    Unit,
    /// `η*`.
    UnitStar,
}

/// `(B, ψ)` with cached invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    blocks: Vec<MatrixBlock>,
    offsets: Vec<usize>,
    basis: Vec<BasisIndex>,
    total_weight: Rational,
    delta: Option<Rational>,
    tracial: bool,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

impl AlgebraSpec {
    /// Validates the blocks. Without `normalize`, the weights must sum to one.
    pub fn new(blocks: Vec<MatrixBlock>, normalize: bool) -> Result<Self, FdAlgError> {
        let spec = Self::with_weights(blocks)?;
        if spec.total_weight.is_one() {
            return Ok(spec);
        }
        if !normalize {
            return Err(FdAlgError::NotAState(spec.total_weight.to_string()));
        }
        Ok(spec.rescaled(&spec.total_weight.recip()))
    }

    /// Any faithful positive functional, state or not.
    pub fn with_weights(blocks: Vec<MatrixBlock>) -> Result<Self, FdAlgError> {
        if blocks.is_empty() {
            return Err(FdAlgError::NoBlocks);
        }
        for (t, b) in blocks.iter().enumerate() {
            if b.size == 0 {
                return Err(FdAlgError::ZeroSize(t));
            }
            if b.q.len() != b.size {
                return Err(FdAlgError::WeightCount { block: t, size: b.size, got: b.q.len() });
            }
            if let Some(bad) = b.q.iter().find(|x| !x.is_positive()) {
                return Err(FdAlgError::Faithfulness { block: t, value: bad.to_string() });
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut basis = Vec::new();
        for (t, b) in blocks.iter().enumerate() {
            offsets.push(basis.len());
            for row in 0..b.size {
                for col in 0..b.size {
                    basis.push(BasisIndex { block: t, row, col });
                }
            }
        }
        let total_weight = blocks.iter().map(MatrixBlock::trace_q).sum();
        let first = blocks[0].trace_q_inv();
        let delta = blocks.iter().all(|b| b.trace_q_inv() == first).then_some(first);
        let tracial = blocks.iter().all(|b| b.q.iter().all(|x| *x == b.q[0]));
        Ok(Self { blocks, offsets, basis, total_weight, delta, tracial })
    }

    /// `ℂⁿ` with the uniform state.
    pub fn uniform_commutative(n: usize) -> Self {
        let q = rat(1, n as i64);
        Self::new(vec![MatrixBlock::scalar(1, q); n], false).expect("uniform state is valid")
    }

    /// `M_n` with the normalized trace.
    pub fn normalized_matrix(n: usize) -> Self {
        Self::new(vec![MatrixBlock::scalar(n, rat(1, n as i64))], false).expect("normalized trace is valid")
    }

    /// Every weight multiplied by `factor`.
    pub fn rescaled(&self, factor: &Rational) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| MatrixBlock { size: b.size, q: b.q.iter().map(|x| x * factor).collect() })
            .collect();
        Self::with_weights(blocks).expect("rescaling by a positive factor keeps validity")
    }

    /// The non-unital 1-form `ψ̃ = δψ` of a δ-form.
    pub fn one_form(&self) -> Result<Self, FdAlgError> {
        let delta = self.delta.clone().ok_or_else(|| FdAlgError::Hypothesis("ψ is not a δ-form".into()))?;
        Ok(self.rescaled(&delta))
    }

    pub fn blocks(&self) -> &[MatrixBlock] {
        &self.blocks
    }

    /// `dim B = Σ n_T²`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisIndex] {
        &self.basis
    }

    pub fn flat_index(&self, block: usize, row: usize, col: usize) -> usize {
        self.offsets[block] + row * self.blocks[block].size + col
    }

    pub fn weight(&self, block: usize, i: usize) -> &Rational {
        &self.blocks[block].q[i]
    }

    /// `ψ(1)`.
    pub fn total_weight(&self) -> &Rational {
        &self.total_weight
    }

    pub fn is_state(&self) -> bool {
        self.total_weight.is_one()
    }

    /// `Tr(Q_T^{-1})` for each block.
    pub fn inverse_traces(&self) -> Vec<Rational> {
        self.blocks.iter().map(MatrixBlock::trace_q_inv).collect()
    }

    pub fn is_delta_form(&self) -> bool {
        self.delta.is_some()
    }

    pub fn delta(&self) -> Option<&Rational> {
        self.delta.as_ref()
    }

    /// `ψ` is a trace iff every `Q_T` is scalar.
    pub fn is_tracial(&self) -> bool {
        self.tracial
    }

    /// `Σ_T Tr(Q_T) Tr(Q_T^{-1})`, the factor in the quantum dimension of `a(α)`.
    pub fn index_factor(&self) -> Rational {
        self.blocks.iter().map(|b| b.trace_q() * b.trace_q_inv()).sum()
    }

    /// Flags the `dim(B) >= 4` hypothesis of the intertwiner theorems.
    pub fn small_dimension_warning(&self) -> Option<String> {
        (self.dim() < 4).then(|| format!("dim(B) < 4 (dim(B) = {})", self.dim()))
    }

    /// `Q_{j,T}^{1/2}` for the basis element at `idx`, so that `e_ij = s · b_ij`.
    pub fn basis_scale<S: Scalar>(&self, idx: usize) -> S {
        let b = self.basis[idx];
        S::from_rational(self.weight(b.block, b.col)).sqrt()
    }

    /// Coordinates of `1_B = Σ Q_{i,T}^{1/2} b_ii^T`.
    pub fn unit_coordinates<S: Scalar>(&self) -> Vec<S> {
        self.basis
            .iter()
            .map(|b| if b.row == b.col { S::from_rational(self.weight(b.block, b.col)).sqrt() } else { S::zero() })
            .collect()
    }

    /// Matrix of a structure map in orthonormal coordinates.
    pub fn structure_operator<S: Scalar>(&self, kind: StructureMap) -> Result<Operator<S>, FdAlgError> {
        let n = self.dim();
        match kind {
            StructureMap::MultiplyK(0) => Err(FdAlgError::Arity),
            StructureMap::MultiplyK(1) => Ok(Operator::identity(n, 1)),
            StructureMap::MultiplyK(k) => {
                let m = self.multiplication::<S>();
                let mut acc = m.clone();
                for _ in 2..k {
                    acc = m.compose(&acc.kron(&Operator::identity(n, 1))?)?;
                }
                Ok(acc)
            }
            StructureMap::MultiplyStar => Ok(self.multiplication::<S>().adjoint()),
            StructureMap::Unit => Ok(Operator::from_row_major(n, 0, 1, self.unit_coordinates())?),
            StructureMap::UnitStar => Ok(Operator::from_row_major(n, 1, 0, self.unit_coordinates())?),
        }
    }

    /// `m(b_ij^T ⊗ b_kl^S) = δ_TS δ_jk Q_{j,T}^{-1/2} b_il^T`.
    fn multiplication<S: Scalar>(&self) -> Operator<S> {
        let n = self.dim();
        let mut m = Operator::zeros(n, 2, 1);
        for (x, bx) in self.basis.iter().enumerate() {
            let size = self.blocks[bx.block].size;
            let scale = S::from_rational(self.weight(bx.block, bx.col)).sqrt().recip();
            for l in 0..size {
                let y = self.flat_index(bx.block, bx.col, l);
                let out = self.flat_index(bx.block, bx.row, l);
                m.set(out, x * n + y, scale);
            }
        }
        m
    }
}

/// Maximum deviation of `m_k m_k^* - δ^{k-1} id` for `k = 1..=k_max`.
pub fn delta_identity_deviation<S: Scalar>(a: &AlgebraSpec, k_max: usize) -> Result<Vec<(usize, S)>, FdAlgError> {
    let delta = a.delta().ok_or_else(|| FdAlgError::Hypothesis("ψ is not a δ-form".into()))?;
    let delta = S::from_rational(delta);
    let id = Operator::<S>::identity(a.dim(), 1);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mk = a.structure_operator::<S>(StructureMap::MultiplyK(k))?;
        let lhs = mk.compose(&mk.adjoint())?;
        let rhs = id.scaled(delta.powi(k as i32 - 1));
        out.push((k, lhs.max_abs_diff(&rhs).expect("same shape")));
    }
    Ok(out)
}

/// `true` when a spec meets the weight lemma for multi-eigenvalue blocks: any
/// block with at least two eigenvalues and `Tr(Q_T) <= 1` has `Tr(Q_T^{-1}) >= 4`.
pub fn satisfies_inverse_trace_bound(a: &AlgebraSpec) -> bool {
    let four = Rational::from_integer(4.into());
    a.blocks().iter().all(|b| b.size < 2 || b.trace_q() > Rational::one() || b.trace_q_inv() >= four)
}

/// `Σ 1/x_i >= 4` whenever `n >= 2`, `x_i > 0` and `Σ x_i <= 1`. Returns `None`
/// when the hypotheses fail.
pub fn harmonic_bound_holds(xs: &[Rational]) -> Option<bool> {
    let positive = xs.iter().all(|x| x.is_positive());
    let total: Rational = xs.iter().sum();
    if xs.len() < 2 || !positive || total > Rational::one() {
        return None;
    }
    let inv: Rational = xs.iter().map(|x| x.recip()).sum();
    Some(inv >= Rational::from_integer(4.into()))
}
