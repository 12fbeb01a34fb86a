//! Noncrossing-partition intertwiner calculus for quantum automorphism groups of
//! finite-dimensional C*-algebras, and fusion rules of free wreath products.

pub mod fdalg;
pub mod fusionring;
pub mod linalg;
pub mod ncpart;
pub mod operator;
pub mod pmap;
pub mod scalar;
pub mod sparse;
pub mod wreath;

pub use fdalg::{AlgebraSpec, MatrixBlock, QuantumGraph, StructureMap};
pub use fusionring::{FusionRing, Label, RingError};
pub use ncpart::{compose, CompositionResult, NcError, NcPartition};
pub use operator::{Operator, OperatorError};
pub use pmap::{build_tp, gram_rank, verify_calculus, FormMode, TpBuilder};
pub use scalar::Scalar;
pub use sparse::SparseOperator;
pub use wreath::{FormalSum, Word, WreathError};

/// Exact rational used for state weights and δ values.
pub type Rational = num_rational::BigRational;

pub type Operator64 = Operator<f64>;
pub type Operator32 = Operator<f32>;
pub type SparseOperator64 = SparseOperator<f64>;
