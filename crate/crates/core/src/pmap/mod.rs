//! The linear maps `T_p : B^{⊗k} → B^{⊗l}` attached to noncrossing partitions.
//!
//! The `(lower, upper)` entry of `T_p` is `Π_v ψ((b_v↓)* b_v↑)`, where `b_v↑` is
//! the product of the basis elements on the upper points of block `v` taken left
//! to right, and `b_v↓` the product on its lower points, also left to right as
//! drawn. Lower points are numbered right to left, so `b_v↓` runs through them in
//! descending index order.

mod gram;
mod verify;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::fdalg::AlgebraSpec;
use crate::ncpart::{NcError, NcPartition};
use crate::operator::{ipow, Operator};
use crate::scalar::Scalar;
use crate::sparse::SparseOperator;

pub use gram::{gram_matrix, gram_rank, gram_rank_with_threshold, GramRank, DEFAULT_RANK_THRESHOLD};
pub use verify::{verify_calculus, verify_calculus_with, CalculusReport, CompositionTable, LawReport, VerifyOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PmapError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Partition(#[from] NcError),
    #[error("{points} points on dim(B) = {dim} gives {size} tensor entries, above the limit {limit}")]
    TooLarge { points: usize, dim: usize, size: usize, limit: usize },
}

/// Which state the operators are built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormMode {
    /// `ψ` itself, a δ-form state; composition picks up `δ^{cy}`.
    DeltaForm,
    /// The 1-form `ψ̃ = δψ`; composition picks up `ψ̃(1)^{cb}`.
    OneForm,
}

impl FormMode {
    pub fn name(self) -> &'static str {
        match self {
            FormMode::DeltaForm => "delta",
            FormMode::OneForm => "oneform",
        }
    }
}

impl std::str::FromStr for FormMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "delta" | "delta_form" | "delta-form" => Ok(FormMode::DeltaForm),
            "oneform" | "one_form" | "one-form" => Ok(FormMode::OneForm),
            other => Err(format!("unknown mode {other:?} (expected delta or oneform)")),
        }
    }
}

/// Order in which the lower basis elements of a block are multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LowerOrder {
    /// Left to right as drawn (descending point index).
    Picture,
    /// Ascending point index (right to left as drawn). Kept for comparison only:
    /// it breaks `T_p^* = T_{p*}` on noncommutative blocks.
    AscendingIndex,
}

/// Nonzero entries of `ψ((b_L)* b_U)` for a single block with `u` upper and `m`
/// lower points. Row-major in `indices`: `m` lower basis indices, then `u` upper.
struct BlockTensor<S> {
    width: usize,
    indices: Vec<u32>,
    values: Vec<S>,
}

/// Builds `T_p` for one algebra, caching the per-block coefficient tables.
pub struct TpBuilder<S> {
    algebra: AlgebraSpec,
    order: LowerOrder,
    inv_sqrt_q: Vec<Vec<S>>,
    q: Vec<Vec<S>>,
    cache: RwLock<HashMap<(usize, usize), Arc<BlockTensor<S>>>>,
}

impl<S: Scalar> TpBuilder<S> {
    pub fn new(algebra: &AlgebraSpec) -> Self {
        Self::with_order(algebra, LowerOrder::Picture)
    }

    /// Builder for `ψ` or for `ψ̃ = δψ`.
    pub fn for_mode(algebra: &AlgebraSpec, mode: FormMode) -> Result<Self, PmapError> {
        if !algebra.is_delta_form() {
            return Err(PmapError::Hypothesis("ψ is not a δ-form".into()));
        }
        match mode {
            FormMode::DeltaForm => Ok(Self::new(algebra)),
            FormMode::OneForm => Ok(Self::new(&algebra.one_form().expect("checked δ-form"))),
        }
    }

    pub(crate) fn with_order(algebra: &AlgebraSpec, order: LowerOrder) -> Self {
        let q: Vec<Vec<S>> = algebra.blocks().iter().map(|b| b.q.iter().map(S::from_rational).collect()).collect();
        let inv_sqrt_q = q.iter().map(|b| b.iter().map(|x| x.sqrt().recip()).collect()).collect();
        Self { algebra: algebra.clone(), order, inv_sqrt_q, q, cache: RwLock::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    fn block_tensor(&self, u: usize, m: usize) -> Arc<BlockTensor<S>> {
        if let Some(t) = self.cache.read().expect("cache lock").get(&(u, m)) {
            return Arc::clone(t);
        }
        let t = Arc::new(self.compute_block_tensor(u, m));
        self.cache.write().expect("cache lock").entry((u, m)).or_insert(t).clone()
    }

    /// Enumerates closed index walks `x_0 → x_1 → … → x_0` through the chain
    /// `b_{L_m}^* … b_{L_1}^* b_{U_1} … b_{U_u}` of matrix units inside each block.
    fn compute_block_tensor(&self, u: usize, m: usize) -> BlockTensor<S> {
        let len = u + m;
        let width = len;
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut walk = vec![0usize; len + 1];
        let mut slot = vec![0u32; width];
        for (t, block) in self.algebra.blocks().iter().enumerate() {
            let n = block.size;
            let total = ipow(n, len);
            for code in 0..total {
                let mut c = code;
                for x in walk.iter_mut().take(len).rev() {
                    *x = c % n;
                    c /= n;
                }
                walk[len] = walk[0];
                let mut value = self.q[t][walk[0]];
                for step in 0..len {
                    let (a, b) = (walk[step], walk[step + 1]);
                    // Steps 0..m are adjoints of the lower elements, last first.
                    let (row, col, scale) =
                        if step < m { (b, a, self.inv_sqrt_q[t][a]) } else { (a, b, self.inv_sqrt_q[t][b]) };
                    value *= scale;
                    let flat = self.algebra.flat_index(t, row, col) as u32;
                    if step < m {
                        slot[m - 1 - step] = flat;
                    } else {
                        slot[step] = flat;
                    }
                }
                indices.extend_from_slice(&slot);
                values.push(value);
            }
        }
        BlockTensor { width, indices, values }
    }

    /// `(row, col, value)` contributions of each block, to be multiplied out.
    fn block_contributions(&self, p: &NcPartition) -> Vec<Vec<(usize, usize, S)>> {
        let n = self.algebra.dim();
        let (k, l) = (p.upper_count(), p.lower_count());
        let mut out = Vec::with_capacity(p.block_count());
        for block in p.blocks() {
            let ups = p.block_upper_positions(block);
            let mut lows = p.block_lower_positions(block);
            if self.order == LowerOrder::AscendingIndex {
                lows.reverse();
            }
            let bt = self.block_tensor(ups.len(), lows.len());
            let m = lows.len();
            let row_w: Vec<usize> = lows.iter().map(|&t| ipow(n, l - 1 - t)).collect();
            let col_w: Vec<usize> = ups.iter().map(|&x| ipow(n, k - 1 - x)).collect();
            let entries = bt
                .indices
                .chunks_exact(bt.width)
                .zip(&bt.values)
                .map(|(idx, &v)| {
                    let row = idx[..m].iter().zip(&row_w).map(|(&i, &w)| i as usize * w).sum();
                    let col = idx[m..].iter().zip(&col_w).map(|(&i, &w)| i as usize * w).sum();
                    (row, col, v)
                })
                .collect();
            out.push(entries);
        }
        out
    }

    /// Calls `visit(row, col, value)` for every nonzero entry of `T_p`.
    pub fn for_each_entry(&self, p: &NcPartition, mut visit: impl FnMut(usize, usize, S)) {
        let parts = self.block_contributions(p);
        fn rec<S: Scalar>(
            parts: &[Vec<(usize, usize, S)>],
            row: usize,
            col: usize,
            val: S,
            visit: &mut impl FnMut(usize, usize, S),
        ) {
            match parts.split_first() {
                None => visit(row, col, val),
                Some((first, rest)) => {
                    for &(r, c, v) in first {
                        rec(rest, row + r, col + c, val * v, visit);
                    }
                }
            }
        }
        rec(&parts, 0, 0, S::one(), &mut visit);
    }

    pub fn sparse(&self, p: &NcPartition) -> SparseOperator<S> {
        let mut entries = Vec::new();
        self.for_each_entry(p, |r, c, v| entries.push((r, c, v)));
        SparseOperator::from_entries(self.algebra.dim(), p.upper_count(), p.lower_count(), entries)
    }

    pub fn dense(&self, p: &NcPartition) -> Operator<S> {
        let mut op = Operator::zeros(self.algebra.dim(), p.upper_count(), p.lower_count());
        self.for_each_entry(p, |r, c, v| op.set(r, c, v));
        op
    }
}

/// Dense `T_p` in orthonormal coordinates.
pub fn build_tp<S: Scalar>(a: &AlgebraSpec, p: &NcPartition) -> Operator<S> {
    TpBuilder::new(a).dense(p)
}

pub fn build_tp_sparse<S: Scalar>(a: &AlgebraSpec, p: &NcPartition) -> SparseOperator<S> {
    TpBuilder::new(a).sparse(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdalg::{rat, MatrixBlock, StructureMap};

    fn m2_skew() -> AlgebraSpec {
        AlgebraSpec::new(vec![MatrixBlock::new(2, vec![rat(1, 3), rat(2, 3)])], false).unwrap()
    }

    fn mixed() -> AlgebraSpec {
        AlgebraSpec::new(
            vec![MatrixBlock::new(2, vec![rat(1, 6), rat(1, 3)]), MatrixBlock::scalar(1, rat(1, 2))],
            false,
        )
        .unwrap()
    }

    fn close(a: &Operator<f64>, b: &Operator<f64>, tol: f64) -> bool {
        a.max_abs_diff(b).is_some_and(|d| d <= tol)
    }

    #[test]
    fn identity_partition_is_identity() {
        for a in [AlgebraSpec::uniform_commutative(4), m2_skew(), mixed()] {
            let t = build_tp::<f64>(&a, &NcPartition::identity(1));
            assert!(close(&t, &Operator::identity(a.dim(), 1), 1e-14));
        }
    }

    #[test]
    fn singleton_is_the_unit() {
        let a = AlgebraSpec::uniform_commutative(4);
        let t = build_tp::<f64>(&a, &NcPartition::unit());
        assert_eq!(t.data(), &[0.5, 0.5, 0.5, 0.5]);
        let b = mixed();
        let eta = b.structure_operator::<f64>(StructureMap::Unit).unwrap();
        assert!(close(&build_tp(&b, &NcPartition::unit()), &eta, 1e-14));
    }

    #[test]
    fn one_block_recovers_multiplication() {
        for a in [AlgebraSpec::uniform_commutative(5), m2_skew(), mixed()] {
            let m = a.structure_operator::<f64>(StructureMap::MultiplyK(2)).unwrap();
            let t = build_tp::<f64>(&a, &NcPartition::one_block(2, 1));
            assert!(close(&t, &m, 1e-13));
            let m3 = a.structure_operator::<f64>(StructureMap::MultiplyK(3)).unwrap();
            assert!(close(&build_tp(&a, &NcPartition::one_block(3, 1)), &m3, 1e-13));
            let ms = a.structure_operator::<f64>(StructureMap::MultiplyStar).unwrap();
            assert!(close(&build_tp(&a, &NcPartition::one_block(1, 2)), &ms, 1e-13));
        }
    }

    #[test]
    fn sparse_and_dense_agree() {
        let a = mixed();
        let b = TpBuilder::<f64>::new(&a);
        for p in crate::ncpart::enumerate_nc(2, 2).unwrap() {
            assert_eq!(b.sparse(&p).to_dense(), b.dense(&p));
        }
    }

    #[test]
    fn ascending_lower_order_breaks_adjoint_on_m2() {
        let a = m2_skew();
        let pic = TpBuilder::<f64>::new(&a);
        let asc = TpBuilder::<f64>::with_order(&a, LowerOrder::AscendingIndex);
        let mut worst_pic: f64 = 0.0;
        let mut worst_asc: f64 = 0.0;
        for (k, l) in [(1, 2), (2, 1), (1, 3), (2, 2)] {
            for p in crate::ncpart::enumerate_nc(k, l).unwrap() {
                let adj = p.adjoint();
                worst_pic = worst_pic.max(pic.dense(&p).adjoint().max_abs_diff(&pic.dense(&adj)).unwrap());
                worst_asc = worst_asc.max(asc.dense(&p).adjoint().max_abs_diff(&asc.dense(&adj)).unwrap());
            }
        }
        assert!(worst_pic < 1e-13, "{worst_pic}");
        assert!(worst_asc > 0.1, "{worst_asc}");
    }

    #[test]
    fn f32_builds() {
        let a = AlgebraSpec::normalized_matrix(2);
        let t = build_tp::<f32>(&a, &NcPartition::one_block(2, 1));
        let t64 = build_tp::<f64>(&a, &NcPartition::one_block(2, 1));
        for (x, y) in t.data().iter().zip(t64.data()) {
            assert!((f64::from(*x) - y).abs() < 1e-6);
        }
    }

    #[test]
    fn one_form_requires_delta() {
        let a = AlgebraSpec::new(
            vec![
                MatrixBlock::scalar(1, rat(1, 2)),
                MatrixBlock::scalar(1, rat(1, 3)),
                MatrixBlock::scalar(1, rat(1, 6)),
            ],
            false,
        )
        .unwrap();
        assert!(matches!(TpBuilder::<f64>::for_mode(&a, FormMode::OneForm), Err(PmapError::Hypothesis(_))));
        assert_eq!("oneform".parse::<FormMode>(), Ok(FormMode::OneForm));
        assert!("x".parse::<FormMode>().is_err());
    }
}
