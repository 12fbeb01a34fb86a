//! Gram matrices of `{T_p : p ∈ NC(k, l)}` and their numeric rank.

use rayon::prelude::*;

use super::{PmapError, TpBuilder};
use crate::fdalg::AlgebraSpec;
use crate::linalg::{numeric_rank, symmetric_eigenvalues};
use crate::ncpart::{catalan, enumerate_nc};
use crate::scalar::Scalar;

/// Eigenvalues at or below `threshold · λ_max` count as zero.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct GramRank {
    pub upper: usize,
    pub lower: usize,
    pub rank: usize,
    /// `|NC(k, l)| = C_{k+l}`.
    pub partitions: usize,
    /// Eigenvalues of the Gram matrix, largest first.
    pub eigenvalues: Vec<f64>,
    /// Set when `dim(B) < 4`; the rank is then not expected to be full.
    pub warning: Option<String>,
}

impl GramRank {
    pub fn is_full(&self) -> bool {
        self.rank == self.partitions
    }
}

/// `G_{pq} = Tr(T_q^* T_p)`, row-major over `enumerate_nc(k, l)`.
pub fn gram_matrix<S: Scalar>(a: &AlgebraSpec, k: usize, l: usize) -> Result<Vec<S>, PmapError> {
    let parts = enumerate_nc(k, l)?;
    let builder = TpBuilder::<S>::new(a);
    let ops: Vec<_> = parts.par_iter().map(|p| builder.dense(p)).collect();
    let n = ops.len();
    let rows: Vec<Vec<S>> =
        (0..n).into_par_iter().map(|i| (0..n).map(|j| ops[i].frobenius_dot(&ops[j])).collect()).collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn gram_rank(a: &AlgebraSpec, k: usize, l: usize) -> Result<GramRank, PmapError> {
    gram_rank_with_threshold::<f64>(a, k, l, DEFAULT_RANK_THRESHOLD)
}

pub fn gram_rank_with_threshold<S: Scalar>(
    a: &AlgebraSpec,
    k: usize,
    l: usize,
    threshold: f64,
) -> Result<GramRank, PmapError> {
    let g = gram_matrix::<S>(a, k, l)?;
    let n = catalan(k + l).expect("enumeration succeeded, so the count fits") as usize;
    let ev = symmetric_eigenvalues(n, &g);
    let rank = numeric_rank(&ev, S::from_f64(threshold).expect("finite threshold"));
    Ok(GramRank {
        upper: k,
        lower: l,
        rank,
        partitions: n,
        eigenvalues: ev.iter().map(|x| x.to_f64_lossy()).collect(),
        warning: a.small_dimension_warning(),
    })
}
