//! Consistency checks for fusion ring data.

use super::{FusionRing, Label, RingError};

/// Relative tolerance of the dimension checks.
const DIM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RingReport {
    pub labels_checked: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<String>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Labels whose cube fits in `budget`, at least two when the ring has them.
fn sample_size(r: &FusionRing, budget: usize) -> usize {
    let mut l = 1;
    while (l + 1) * (l + 1) * (l + 1) <= budget {
        l += 1;
    }
    let l = l.max(2);
    r.label_count().map_or(l, |n| n.min(l))
}

/// Checks conjugation, unit, Frobenius symmetry, conjugate uniqueness,
/// associativity and the dimension homomorphism on the first labels of the ring,
/// spending at most `budget` label triples.
pub fn validate_ring(r: &FusionRing, budget: usize) -> RingReport {
    let mut rep = RingReport::default();
    let labels = r.labels(sample_size(r, budget));
    let name = |a: Label| r.format_label(a);
    let record = |rep: &mut RingReport, e: RingError| rep.violations.push(e.to_string());

    match r.conj(Label::UNIT) {
        Ok(u) if u != Label::UNIT => rep.violations.push(format!("conj(1) = {} is not the unit", name(u))),
        Err(e) => record(&mut rep, e),
        _ => {}
    }
    for &a in &labels {
        rep.labels_checked += 1;
        if let Err(e) = check_label(r, a, &mut rep) {
            record(&mut rep, e);
        }
    }
    for &a in &labels {
        for &b in &labels {
            rep.pairs_checked += 1;
            if let Err(e) = check_pair(r, a, b, &mut rep) {
                record(&mut rep, e);
            }
        }
    }
    'outer: for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                if rep.triples_checked >= budget {
                    break 'outer;
                }
                rep.triples_checked += 1;
                if let Err(e) = check_triple(r, a, b, c, &mut rep) {
                    record(&mut rep, e);
                }
            }
        }
    }
    rep
}

fn check_label(r: &FusionRing, a: Label, rep: &mut RingReport) -> Result<(), RingError> {
    let n = |x: Label| r.format_label(x);
    let c = r.conj(a)?;
    let cc = r.conj(c)?;
    if cc != a {
        rep.violations.push(format!("conj is not involutive at {}: conj(conj) = {}", n(a), n(cc)));
    }
    if (r.dim(c)? - r.dim(a)?).abs() > DIM_TOL * r.dim(a)? {
        rep.violations.push(format!("dim({}) differs from dim of its conjugate", n(a)));
    }
    if r.qdim(a)? < r.dim(a)? * (1.0 - DIM_TOL) {
        rep.violations.push(format!("qdim({}) < dim({})", n(a), n(a)));
    }
    let single: &[(Label, u64)] = &[(a, 1)];
    if &*r.tensor(a, Label::UNIT)? != single || &*r.tensor(Label::UNIT, a)? != single {
        rep.violations.push(format!("unit law fails at {}", n(a)));
    }
    Ok(())
}

fn check_pair(r: &FusionRing, a: Label, b: Label, rep: &mut RingReport) -> Result<(), RingError> {
    let n = |x: Label| r.format_label(x);
    let d = r.tensor(a, b)?;
    let unit_mult = r.multiplicity(a, b, Label::UNIT)?;
    let expected = u64::from(r.conj(a)? == b);
    if unit_mult != expected {
        rep.violations.push(format!("N_{{{},{}}}^1 = {unit_mult}, expected {expected}", n(a), n(b)));
    }
    for (f, what) in
        [(FusionRing::dim as fn(&FusionRing, Label) -> Result<f64, RingError>, "dim"), (FusionRing::qdim, "qdim")]
    {
        let lhs = f(r, a)? * f(r, b)?;
        let mut rhs = 0.0;
        for &(c, m) in d.iter() {
            rhs += m as f64 * f(r, c)?;
        }
        if (lhs - rhs).abs() > DIM_TOL * lhs.max(1.0) {
            rep.violations.push(format!("{what} is not multiplicative on {}⊗{}: {lhs} vs {rhs}", n(a), n(b)));
        }
    }
    Ok(())
}

fn check_triple(r: &FusionRing, a: Label, b: Label, c: Label, rep: &mut RingReport) -> Result<(), RingError> {
    let n = |x: Label| r.format_label(x);
    let (ac, bc) = (r.conj(a)?, r.conj(b)?);
    let x = r.multiplicity(a, b, c)?;
    let y = r.multiplicity(ac, c, b)?;
    let z = r.multiplicity(c, bc, a)?;
    if x != y || x != z {
        rep.violations.push(format!("Frobenius symmetry fails at ({}, {}, {}): {x}, {y}, {z}", n(a), n(b), n(c)));
    }
    let left = r.tensor_decompose(&[a, b, c])?;
    let mut right = std::collections::BTreeMap::new();
    for &(bc_, m) in r.tensor(b, c)?.iter() {
        for &(g, k) in r.tensor(a, bc_)?.iter() {
            *right.entry(g).or_insert(0u64) += m * k;
        }
    }
    if left != right {
        rep.violations.push(format!("tensor product is not associative on ({}, {}, {})", n(a), n(b), n(c)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_pass() {
        for name in ["trivial", "cyclic_dual(2)", "cyclic_dual(3)", "cyclic_dual(7)", "integer_dual", "su2", "so3"] {
            let r = FusionRing::builtin(name).unwrap();
            let rep = validate_ring(&r, 200);
            assert!(rep.passed(), "{name}: {:?}", rep.violations);
            assert!(rep.triples_checked > 0);
        }
    }

    #[test]
    fn broken_conj_is_reported() {
        let r = FusionRing::from_json(
            r#"{"unit":"1","irreps":[{"id":"g","dim":1,"conj":"h"},{"id":"h","dim":1,"conj":"h"}],
                "tensor":{"g*g":{"h":1},"g*h":{"1":1},"h*g":{"1":1},"h*h":{"g":1}}}"#,
        )
        .unwrap();
        let rep = validate_ring(&r, 100);
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.contains("not involutive at g")), "{:?}", rep.violations);
    }

    #[test]
    fn missing_products_are_violations() {
        let r = FusionRing::from_json(r#"{"unit":"1","irreps":[{"id":"x","dim":2}]}"#).unwrap();
        let rep = validate_ring(&r, 50);
        assert!(rep.violations.iter().any(|v| v.contains("x*x")));
    }

    #[test]
    fn wrong_dimension_is_reported() {
        let r = FusionRing::from_json(r#"{"unit":"1","irreps":[{"id":"x","dim":2}],"tensor":{"x*x":{"1":1,"x":1}}}"#)
            .unwrap();
        let rep = validate_ring(&r, 50);
        assert!(rep.violations.iter().any(|v| v.contains("not multiplicative")));
    }
}
