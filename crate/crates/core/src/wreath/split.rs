//! Splitting a general state into δ-forms on the summands that share a value of
//! `Tr(Q_T^{-1})`.

use super::WreathError;
use crate::fdalg::{AlgebraSpec, MatrixBlock};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct FreeComponent {
    /// Indices of the blocks of the original algebra, in order.
    pub blocks: Vec<usize>,
    /// `B_i` with `ψ_i = ψ(1_{B_i})^{-1} ψ|_{B_i}`, a state.
    pub algebra: AlgebraSpec,
    /// The shared value of `Tr(Q_T^{-1})` for `ψ|_{B_i}`.
    pub delta: Rational,
    /// `ψ(1_{B_i})`.
    pub weight: Rational,
    /// The δ of the renormalized state `ψ_i`, which is `weight · delta`.
    pub form_delta: Rational,
}

impl FreeComponent {
    /// `B_i` with the restricted, unnormalized functional `ψ|_{B_i}`.
    pub fn restriction(&self) -> AlgebraSpec {
        self.algebra.rescaled(&self.weight)
    }
}

/// Groups the blocks of a state by exact equality of `Tr(Q_T^{-1})`, in order of
/// first appearance. A δ-form gives a single component.
pub fn free_product_decomposition(a: &AlgebraSpec) -> Result<Vec<FreeComponent>, WreathError> {
    if !a.is_state() {
        return Err(WreathError::Hypothesis(format!("ψ(1) = {} is not 1", a.total_weight())));
    }
    let mut groups: Vec<(Rational, Vec<usize>)> = Vec::new();
    for (t, b) in a.blocks().iter().enumerate() {
        let key = b.trace_q_inv();
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.1.push(t),
            None => groups.push((key, vec![t])),
        }
    }
    groups
        .into_iter()
        .map(|(delta, blocks)| {
            let parts: Vec<MatrixBlock> = blocks.iter().map(|&t| a.blocks()[t].clone()).collect();
            let restriction = AlgebraSpec::with_weights(parts).expect("blocks of a valid algebra");
            let weight = restriction.total_weight().clone();
            let algebra = restriction.rescaled(&weight.recip());
            let form_delta = algebra.delta().cloned().expect("equal inverse traces survive rescaling");
            Ok(FreeComponent { blocks, algebra, delta, weight, form_delta })
        })
        .collect()
}

/// `Σ_i ψ(1_{B_i}) ψ_i = ψ`, block by block and exactly.
pub fn reassembly_holds(a: &AlgebraSpec, components: &[FreeComponent]) -> bool {
    let mut seen = vec![false; a.blocks().len()];
    for c in components {
        for (b, &t) in c.algebra.blocks().iter().zip(&c.blocks) {
            let Some(orig) = a.blocks().get(t) else { return false };
            if seen[t] || orig.size != b.size || orig.q.iter().zip(&b.q).any(|(x, y)| *x != y * &c.weight) {
                return false;
            }
            seen[t] = true;
        }
    }
    seen.iter().all(|&s| s)
}
