//! Transport of fusion-semiring isomorphisms `R⁺(G₁) ≃ R⁺(G₂)` to the free
//! wreath products, `Φ(r_x) = r_{φ(x)}` letter by letter.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{word_involution, wreath_tensor, FormalSum, Word, WreathError};
use crate::fusionring::{FusionRing, Label};

/// Labels of an infinite domain on which the preconditions are checked.
const DOMAIN_SAMPLE: usize = 12;
const MAX_WORD_LEN: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelMap {
    Identity,
    /// Unlisted labels are fixed.
    Explicit(BTreeMap<Label, Label>),
}

impl LabelMap {
    pub fn apply(&self, a: Label) -> Label {
        match self {
            LabelMap::Identity => a,
            LabelMap::Explicit(m) => m.get(&a).copied().unwrap_or(a),
        }
    }

    pub fn apply_word(&self, x: &Word) -> Word {
        Word(x.0.iter().map(|&a| self.apply(a)).collect())
    }

    /// `identity`, or comma-separated `from:to` pairs such as `g:g2,g2:g`.
    /// Sources are read in `from`, targets in `to`.
    pub fn parse(from: &FusionRing, to: &FusionRing, s: &str) -> Result<Self, WreathError> {
        let s = s.trim();
        if s == "identity" {
            return Ok(LabelMap::Identity);
        }
        let mut m = BTreeMap::new();
        for pair in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| WreathError::Hypothesis(format!("label map entry {pair:?} is not from:to")))?;
            let a = from.parse_label(a)?;
            if m.insert(a, to.parse_label(b)?).is_some() {
                return Err(WreathError::Hypothesis(format!("label {} is mapped twice", from.format_label(a))));
            }
        }
        Ok(LabelMap::Explicit(m))
    }

    fn touched(&self) -> Vec<Label> {
        match self {
            LabelMap::Identity => Vec::new(),
            LabelMap::Explicit(m) => m.keys().copied().collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsoReport {
    pub precondition_failures: Vec<String>,
    pub pairs_checked: usize,
    /// Witnesses `(x, y, what failed)`, formatted in the source ring.
    pub failures: Vec<(String, String, String)>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.precondition_failures.is_empty() && self.failures.is_empty()
    }
}

fn domain(r1: &FusionRing, phi: &LabelMap) -> Vec<Label> {
    let mut d = r1.labels(r1.label_count().unwrap_or(DOMAIN_SAMPLE));
    d.extend(phi.touched().into_iter().filter(|a| r1.contains(*a)));
    d.sort();
    d.dedup();
    d
}

fn check_preconditions(r1: &FusionRing, r2: &FusionRing, phi: &LabelMap) -> Result<Vec<String>, WreathError> {
    let mut out = Vec::new();
    let name = |a: Label| r1.format_label(a);
    if phi.apply(r1.unit()) != r2.unit() {
        out.push("φ does not map the unit to the unit".into());
    }
    let dom = domain(r1, phi);
    for &a in &dom {
        if !r2.contains(phi.apply(a)) {
            out.push(format!("φ({}) is not a label of the target ring", name(a)));
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    let mut images: Vec<Label> = dom.iter().map(|&a| phi.apply(a)).collect();
    images.sort();
    images.dedup();
    if images.len() != dom.len() {
        out.push("φ is not injective".into());
    }
    if let (Some(n1), Some(n2)) = (r1.label_count(), r2.label_count()) {
        if n1 != n2 {
            out.push(format!("rings have {n1} and {n2} labels, so φ is not a bijection"));
        }
    }
    for &a in &dom {
        if phi.apply(r1.conj(a)?) != r2.conj(phi.apply(a))? {
            out.push(format!("φ does not commute with conjugation at {}", name(a)));
        }
    }
    for &a in &dom {
        for &b in &dom {
            for &(c, n) in r1.tensor(a, b)?.iter() {
                let m = r2.multiplicity(phi.apply(a), phi.apply(b), phi.apply(c))?;
                if m != n {
                    out.push(format!("N_{{{},{}}}^{} = {n} is sent to {m}", name(a), name(b), name(c)));
                }
            }
            let lhs: u64 = r1.tensor(a, b)?.iter().map(|e| e.1).sum();
            let rhs: u64 = r2.tensor(phi.apply(a), phi.apply(b))?.iter().map(|e| e.1).sum();
            if lhs != rhs {
                out.push(format!("{} ⊗ {} has {lhs} summands but its image has {rhs}", name(a), name(b)));
            }
        }
    }
    Ok(out)
}

fn random_word(rng: &mut ChaCha8Rng, dom: &[Label]) -> Word {
    let len = rng.gen_range(0..=MAX_WORD_LEN);
    Word((0..len).map(|_| dom[rng.gen_range(0..dom.len())]).collect())
}

/// Checks `Φ(r_x ⊗ r_y) = r_{φ(x)} ⊗ r_{φ(y)}` and `Φ(r_x̄) = (Φ r_x)‾` on
/// `samples` random word pairs, after validating `φ` on the label level.
pub fn verify_semiring_iso(
    r1: &FusionRing,
    r2: &FusionRing,
    phi: &LabelMap,
    samples: usize,
    seed: u64,
) -> Result<IsoReport, WreathError> {
    let mut report = IsoReport { precondition_failures: check_preconditions(r1, r2, phi)?, ..Default::default() };
    if !report.precondition_failures.is_empty() {
        return Ok(report);
    }
    let dom = domain(r1, phi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (x, y) = (random_word(&mut rng, &dom), random_word(&mut rng, &dom));
        let (px, py) = (phi.apply_word(&x), phi.apply_word(&y));
        let image: FormalSum = wreath_tensor(r1, &x, &y)?.map_words(|w| Ok(phi.apply_word(w)))?;
        if image != wreath_tensor(r2, &px, &py)? {
            report.failures.push((x.format(r1), y.format(r1), "tensor product".into()));
        }
        if phi.apply_word(&word_involution(r1, &x)?) != word_involution(r2, &px)? {
            report.failures.push((x.format(r1), y.format(r1), "conjugation".into()));
        }
        report.pairs_checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_automorphism() {
        let z3 = FusionRing::cyclic_dual(3).unwrap();
        let phi = LabelMap::parse(&z3, &z3, "g:g2,g2:g").unwrap();
        let r = verify_semiring_iso(&z3, &z3, &phi, 100, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.pairs_checked, 100);
    }

    #[test]
    fn su2_identity() {
        let su2 = FusionRing::su2();
        let phi = LabelMap::parse(&su2, &su2, "identity").unwrap();
        assert!(verify_semiring_iso(&su2, &su2, &phi, 100, 1).unwrap().passed());
    }

    #[test]
    fn z4_swap_is_rejected_before_sampling() {
        let z4 = FusionRing::cyclic_dual(4).unwrap();
        let phi = LabelMap::parse(&z4, &z4, "g:g2,g2:g").unwrap();
        let r = verify_semiring_iso(&z4, &z4, &phi, 100, 1).unwrap();
        assert!(!r.passed());
        assert!(!r.precondition_failures.is_empty());
        assert_eq!(r.pairs_checked, 0);
    }

    #[test]
    fn non_injective_map() {
        let z3 = FusionRing::cyclic_dual(3).unwrap();
        let phi = LabelMap::parse(&z3, &z3, "g:1").unwrap();
        let r = verify_semiring_iso(&z3, &z3, &phi, 10, 1).unwrap();
        assert!(r
            .precondition_failures
            .iter()
            .any(|f| f.contains("unit") || f.contains("injective") || f.contains("N_")));
    }

    #[test]
    fn bad_map_syntax() {
        let z3 = FusionRing::cyclic_dual(3).unwrap();
        assert!(LabelMap::parse(&z3, &z3, "g-g2").is_err());
        assert!(LabelMap::parse(&z3, &z3, "g:g2,g:1").is_err());
    }
}
