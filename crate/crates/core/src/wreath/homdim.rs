//! Hom-spaces between tensor products of basic representations, counted two ways:
//! by well-decorated noncrossing partitions, and through the fusion rules.

use std::collections::HashMap;
use std::str::FromStr;

use super::{decompose_basic_tensor, WreathError};
use crate::fdalg::AlgebraSpec;
use crate::fusionring::{FusionRing, Label};
use crate::ncpart::{for_each_nc, NcPartition, DEFAULT_POINT_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMethod {
    Partitions,
    Fusion,
    Both,
}

impl FromStr for HomMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "partitions" => Ok(HomMethod::Partitions),
            "fusion" => Ok(HomMethod::Fusion),
            "both" => Ok(HomMethod::Both),
            other => Err(format!("unknown method {other:?} (expected partitions, fusion or both)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedBlock {
    /// Upper positions, 0-based, left to right.
    pub upper: Vec<usize>,
    /// Lower positions as drawn, 0-based, left to right.
    pub lower: Vec<usize>,
    pub upper_labels: Vec<Label>,
    pub lower_labels: Vec<Label>,
    /// `dim Hom(α_U, β_L)`, with the unit standing in for an empty side.
    pub hom_dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedPartition {
    pub partition: NcPartition,
    pub blocks: Vec<DecoratedBlock>,
}

impl DecoratedPartition {
    pub fn is_well_decorated(&self) -> bool {
        self.blocks.iter().all(|b| b.hom_dim > 0)
    }

    /// `Π_v dim Hom(α_{U_v}, β_{L_v})`.
    pub fn weight(&self) -> Option<u64> {
        self.blocks.iter().try_fold(1u64, |acc, b| acc.checked_mul(b.hom_dim))
    }
}

fn check_arity(p: &NcPartition, upper: &[Label], lower: &[Label]) -> Result<(), WreathError> {
    if p.upper_count() != upper.len() || p.lower_count() != lower.len() {
        return Err(WreathError::Arity(format!(
            "partition in NC({},{}) decorated with {} upper and {} lower labels",
            p.upper_count(),
            p.lower_count(),
            upper.len(),
            lower.len()
        )));
    }
    Ok(())
}

type BlockKey = (Vec<Label>, Vec<Label>);

struct BlockHom<'r> {
    ring: &'r FusionRing,
    memo: HashMap<BlockKey, u64>,
}

impl BlockHom<'_> {
    fn get(&mut self, ups: Vec<Label>, lows: Vec<Label>) -> Result<u64, WreathError> {
        let key = (ups, lows);
        if let Some(&d) = self.memo.get(&key) {
            return Ok(d);
        }
        let d = self.ring.hom_dim(&key.0, &key.1)?;
        self.memo.insert(key, d);
        Ok(d)
    }
}

fn block_labels(
    p: &NcPartition,
    block: &[usize],
    upper: &[Label],
    lower: &[Label],
) -> (Vec<usize>, Vec<usize>, Vec<Label>, Vec<Label>) {
    let ups = p.block_upper_positions(block);
    let lows = p.block_lower_positions(block);
    let ul = ups.iter().map(|&i| upper[i]).collect();
    let ll = lows.iter().map(|&t| lower[t]).collect();
    (ups, lows, ul, ll)
}

/// Attaches labels to `p`: `upper[i]` on upper point `i` and `lower[j]` on the
/// `j`-th lower point from the left.
pub fn decorate(
    ring: &FusionRing,
    p: &NcPartition,
    upper: &[Label],
    lower: &[Label],
) -> Result<DecoratedPartition, WreathError> {
    check_arity(p, upper, lower)?;
    let mut blocks = Vec::with_capacity(p.block_count());
    for block in p.blocks() {
        let (ups, lows, ul, ll) = block_labels(p, block, upper, lower);
        let hom_dim = ring.hom_dim(&ul, &ll)?;
        blocks.push(DecoratedBlock { upper: ups, lower: lows, upper_labels: ul, lower_labels: ll, hom_dim });
    }
    Ok(DecoratedPartition { partition: p.clone(), blocks })
}

/// Visits the well-decorated partitions with their weight. A partition is
/// dropped at its first block with a zero Hom-space.
fn for_each_well_decorated(
    ring: &FusionRing,
    upper: &[Label],
    lower: &[Label],
    mut visit: impl FnMut(&NcPartition, u64) -> Result<(), WreathError>,
) -> Result<(), WreathError> {
    for &a in upper.iter().chain(lower) {
        ring.conj(a)?;
    }
    let mut homs = BlockHom { ring, memo: HashMap::new() };
    let mut failure = None;
    for_each_nc(upper.len(), lower.len(), DEFAULT_POINT_LIMIT, |p| {
        if failure.is_some() {
            return;
        }
        let mut weight = 1u64;
        for block in p.blocks() {
            let (_, _, ul, ll) = block_labels(&p, block, upper, lower);
            match homs.get(ul, ll) {
                Ok(0) => return,
                Ok(d) => match weight.checked_mul(d) {
                    Some(w) => weight = w,
                    None => {
                        failure = Some(WreathError::Overflow);
                        return;
                    }
                },
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
        if let Err(e) = visit(&p, weight) {
            failure = Some(e);
        }
    })?;
    failure.map_or(Ok(()), Err)
}

/// `NC_G(upper; lower)` in canonical order.
pub fn well_decorated_partitions(
    ring: &FusionRing,
    upper: &[Label],
    lower: &[Label],
) -> Result<Vec<DecoratedPartition>, WreathError> {
    let mut out = Vec::new();
    for_each_well_decorated(ring, upper, lower, |p, _| {
        out.push(decorate(ring, p, upper, lower)?);
        Ok(())
    })?;
    out.sort_by(|a, b| a.partition.cmp(&b.partition));
    Ok(out)
}

fn count_partitions(ring: &FusionRing, upper: &[Label], lower: &[Label]) -> Result<(u64, usize), WreathError> {
    let (mut total, mut count) = (0u64, 0usize);
    for_each_well_decorated(ring, upper, lower, |_, w| {
        total = total.checked_add(w).ok_or(WreathError::Overflow)?;
        count += 1;
        Ok(())
    })?;
    Ok((total, count))
}

fn count_fusion(ring: &FusionRing, upper: &[Label], lower: &[Label]) -> Result<u64, WreathError> {
    let a = decompose_basic_tensor(ring, upper)?;
    let b = decompose_basic_tensor(ring, lower)?;
    let total = a.iter().try_fold(0u64, |acc, (w, m)| {
        m.checked_mul(b.get(w)).and_then(|x| acc.checked_add(x)).ok_or(WreathError::Overflow)
    });
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomDimResult {
    pub value: u64,
    pub partitions: Option<u64>,
    pub fusion: Option<u64>,
    /// Number of well-decorated partitions, when they were enumerated.
    pub well_decorated: Option<usize>,
    /// Violated hypotheses of the theorems behind both counts.
    pub warnings: Vec<String>,
}

/// Hypotheses under which both counts equal `dim Hom(⊗ a(α_i), ⊗ a(β_j))`.
pub fn hypothesis_warnings(a: &AlgebraSpec) -> Vec<String> {
    let mut w: Vec<String> = a.small_dimension_warning().into_iter().collect();
    if !a.is_delta_form() {
        w.push("ψ is not a δ-form".into());
    }
    w
}

/// `dim Hom(a(α_1) ⊗ … ⊗ a(α_k), a(β_1) ⊗ … ⊗ a(β_l))`.
///
/// With [`HomMethod::Both`] the two counts must agree; a mismatch is an
/// [`WreathError::OracleDivergence`]. Violated hypotheses are reported in
/// `warnings` rather than refused.
pub fn wreath_hom_dim(
    ring: &FusionRing,
    a: &AlgebraSpec,
    upper: &[Label],
    lower: &[Label],
    method: HomMethod,
) -> Result<HomDimResult, WreathError> {
    let warnings = hypothesis_warnings(a);
    let (partitions, well_decorated) = match method {
        HomMethod::Partitions | HomMethod::Both => {
            let (v, c) = count_partitions(ring, upper, lower)?;
            (Some(v), Some(c))
        }
        HomMethod::Fusion => (None, None),
    };
    let fusion = match method {
        HomMethod::Fusion | HomMethod::Both => Some(count_fusion(ring, upper, lower)?),
        HomMethod::Partitions => None,
    };
    let value = match (partitions, fusion) {
        (Some(p), Some(f)) if p != f => return Err(WreathError::OracleDivergence { partitions: p, fusion: f }),
        (Some(v), _) | (None, Some(v)) => v,
        (None, None) => unreachable!("every method computes at least one count"),
    };
    Ok(HomDimResult { value, partitions, fusion, well_decorated, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpart::catalan;

    fn labels(r: &FusionRing, xs: &[&str]) -> Vec<Label> {
        xs.iter().map(|x| r.parse_label(x).unwrap()).collect()
    }

    #[test]
    fn catalan_lower_only() {
        let t = FusionRing::trivial();
        let a = AlgebraSpec::uniform_commutative(4);
        let r = wreath_hom_dim(&t, &a, &[], &labels(&t, &["1", "1", "1"]), HomMethod::Both).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.value, catalan(3).unwrap());
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn two_up_one_down() {
        let t = FusionRing::trivial();
        let a = AlgebraSpec::uniform_commutative(4);
        let one = labels(&t, &["1"]);
        let r = wreath_hom_dim(&t, &a, &labels(&t, &["1", "1"]), &one, HomMethod::Both).unwrap();
        assert_eq!((r.partitions, r.fusion), (Some(5), Some(5)));
    }

    #[test]
    fn su2_spin_one_pair() {
        let su2 = FusionRing::su2();
        let a = AlgebraSpec::uniform_commutative(4);
        let lower = labels(&su2, &["1", "1"]);
        let r = wreath_hom_dim(&su2, &a, &[], &lower, HomMethod::Both).unwrap();
        assert_eq!(r.value, 1);
        let wd = well_decorated_partitions(&su2, &[], &lower).unwrap();
        assert_eq!(wd.len(), 1);
        assert_eq!(wd[0].partition.block_count(), 1);
        assert!(wd[0].is_well_decorated());
    }

    #[test]
    fn orientation_matters_for_cyclic_labels() {
        let z3 = FusionRing::cyclic_dual(3).unwrap();
        let a = AlgebraSpec::uniform_commutative(4);
        let g = labels(&z3, &["g"]);
        let g2 = labels(&z3, &["g2"]);
        assert_eq!(wreath_hom_dim(&z3, &a, &g, &g, HomMethod::Both).unwrap().value, 1);
        assert_eq!(wreath_hom_dim(&z3, &a, &g, &g2, HomMethod::Both).unwrap().value, 0);
        // Hom(1, a(g) ⊗ a(g2)) is spanned by the pair block.
        assert_eq!(wreath_hom_dim(&z3, &a, &[], &labels(&z3, &["g", "g2"]), HomMethod::Both).unwrap().value, 1);
    }

    #[test]
    fn small_algebra_is_flagged() {
        let t = FusionRing::trivial();
        let a = AlgebraSpec::uniform_commutative(2);
        let r = wreath_hom_dim(&t, &a, &[], &labels(&t, &["1", "1"]), HomMethod::Partitions).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.warnings.iter().any(|w| w.contains("dim(B) < 4")));
    }

    #[test]
    fn decoration_arity_is_checked() {
        let t = FusionRing::trivial();
        let p = NcPartition::identity(2);
        assert!(matches!(decorate(&t, &p, &labels(&t, &["1"]), &[]), Err(WreathError::Arity(_))));
        let d = decorate(&t, &p, &labels(&t, &["1", "1"]), &labels(&t, &["1", "1"])).unwrap();
        assert_eq!(d.weight(), Some(1));
    }

    #[test]
    fn method_names() {
        assert_eq!("both".parse::<HomMethod>(), Ok(HomMethod::Both));
        assert!("all".parse::<HomMethod>().is_err());
    }
}
