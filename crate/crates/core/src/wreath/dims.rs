//! Classical and quantum dimensions of the irreducibles `r_x`, character moments
//! and the Kac criterion.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::{decompose_basic_tensor, wreath_tensor, Word, WreathError};
use crate::fdalg::AlgebraSpec;
use crate::fusionring::FusionRing;

/// Largest `k` accepted by [`moments`].
pub const MOMENT_LIMIT: usize = 30;

/// Labels of an infinite ring inspected by [`ring_is_kac`], besides the cached ones.
const KAC_SAMPLE: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct WordDims {
    pub dim: f64,
    pub qdim: f64,
    pub warnings: Vec<String>,
}

/// Memoized `(dim, qdim)` of `r_x` for one ring and one δ-form.
pub struct DimTable<'r> {
    ring: &'r FusionRing,
    dim_b: f64,
    index_factor: f64,
    memo: HashMap<Word, (f64, f64)>,
}

impl<'r> DimTable<'r> {
    pub fn new(ring: &'r FusionRing, a: &AlgebraSpec) -> Result<Self, WreathError> {
        if !a.is_delta_form() {
            return Err(WreathError::Hypothesis("ψ is not a δ-form".into()));
        }
        let index_factor = a.index_factor().to_f64().expect("finite rational");
        Ok(Self { ring, dim_b: a.dim() as f64, index_factor, memo: HashMap::new() })
    }

    /// `(dim r_x, qdim r_x)`.
    ///
    /// Words of length two or more are peeled at the first letter:
    /// `r_(α) ⊗ r_rest = r_x ⊕ (shorter words)`.
    pub fn dims(&mut self, x: &Word) -> Result<(f64, f64), WreathError> {
        if let Some(&d) = self.memo.get(x) {
            return Ok(d);
        }
        let d = match x.letters() {
            [] => (1.0, 1.0),
            &[a] => {
                let unit = if a == self.ring.unit() { 1.0 } else { 0.0 };
                (self.dim_b * self.ring.dim(a)? - unit, self.ring.qdim(a)? * self.index_factor - unit)
            }
            [a, rest @ ..] => {
                let (first, rest) = (Word::letter(*a), Word(rest.to_vec()));
                let (d1, q1) = self.dims(&first)?;
                let (dr, qr) = self.dims(&rest)?;
                let product = wreath_tensor(self.ring, &first, &rest)?;
                if product.get(x) != 1 {
                    return Err(WreathError::Hypothesis(format!(
                        "r_({}) occurs {} times in r_({}) ⊗ r_({})",
                        x.format(self.ring),
                        product.get(x),
                        first.format(self.ring),
                        rest.format(self.ring)
                    )));
                }
                let (mut d, mut q) = (d1 * dr, q1 * qr);
                for (w, m) in product.iter() {
                    if w != x {
                        let (dw, qw) = self.dims(w)?;
                        d -= m as f64 * dw;
                        q -= m as f64 * qw;
                    }
                }
                (d, q)
            }
        };
        for value in [d.0, d.1] {
            // NaN counts as a failure too.
            if value.is_nan() || value <= 0.0 {
                return Err(WreathError::NegativeDimension { word: x.format(self.ring), value });
            }
        }
        self.memo.insert(x.clone(), d);
        Ok(d)
    }
}

/// `dim` and `qdim` of `r_x`. A small algebra is flagged in `warnings`.
pub fn word_dims(ring: &FusionRing, a: &AlgebraSpec, x: &Word) -> Result<WordDims, WreathError> {
    let (dim, qdim) = DimTable::new(ring, a)?.dims(x)?;
    Ok(WordDims { dim, qdim, warnings: a.small_dimension_warning().into_iter().collect() })
}

/// `h(χ(a(1))^k)`: the multiplicity of `r_∅` in `a(1)^{⊗k}` for the trivial ring.
pub fn moments(k: usize) -> Result<u64, WreathError> {
    if k > MOMENT_LIMIT {
        return Err(WreathError::Limit(k, MOMENT_LIMIT));
    }
    let t = FusionRing::trivial();
    let sum = decompose_basic_tensor(&t, &vec![t.unit(); k])?;
    Ok(sum.get(&Word::empty()))
}

/// `dim = qdim` on every label of a finite ring, or on the cached and first
/// few labels of an infinite one.
pub fn ring_is_kac(ring: &FusionRing) -> bool {
    let mut labels = ring.labels(KAC_SAMPLE);
    for ((a, b), d) in ring.memo_entries() {
        labels.extend([a, b]);
        labels.extend(d.into_iter().map(|e| e.0));
    }
    labels.iter().all(|&a| match (ring.dim(a), ring.qdim(a)) {
        (Ok(d), Ok(q)) => (d - q).abs() <= 1e-9 * d.max(1.0),
        _ => false,
    })
}

/// The free wreath product is of Kac type iff `G` is and `ψ` is a trace.
pub fn kac_check(ring: &FusionRing, a: &AlgebraSpec) -> bool {
    a.is_tracial() && ring_is_kac(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdalg::{rat, MatrixBlock};
    use crate::ncpart::count_nc;

    fn w(r: &FusionRing, s: &str) -> Word {
        Word::parse(r, s).unwrap()
    }

    #[test]
    fn quantum_permutation_dimensions() {
        let t = FusionRing::trivial();
        for n in [4usize, 5, 6] {
            let a = AlgebraSpec::uniform_commutative(n);
            let mut table = DimTable::new(&t, &a).unwrap();
            let n = n as f64;
            assert_eq!(table.dims(&w(&t, "1")).unwrap().0, n - 1.0);
            assert_eq!(table.dims(&w(&t, "1,1")).unwrap().0, n * n - 3.0 * n + 1.0);
            assert_eq!(table.dims(&Word::empty()).unwrap(), (1.0, 1.0));
        }
    }

    #[test]
    fn qdim_of_spin_one_on_m2() {
        let su2 = FusionRing::su2();
        let a = AlgebraSpec::normalized_matrix(2);
        let d = word_dims(&su2, &a, &w(&su2, "1")).unwrap();
        assert_eq!(d.qdim, 8.0);
        assert_eq!(d.dim, 8.0);
    }

    #[test]
    fn requires_delta_form() {
        let a = AlgebraSpec::new(
            vec![
                MatrixBlock::scalar(1, rat(1, 2)),
                MatrixBlock::scalar(1, rat(1, 4)),
                MatrixBlock::scalar(1, rat(1, 4)),
            ],
            false,
        )
        .unwrap();
        assert!(matches!(word_dims(&FusionRing::trivial(), &a, &Word::empty()), Err(WreathError::Hypothesis(_))));
    }

    #[test]
    fn inconsistent_ring_gives_negative_dimension() {
        // A fake dimension of 1/10 makes dim r_(x,x) negative on ℂ⁴.
        let r = FusionRing::from_json(r#"{"unit":"1","irreps":[{"id":"x","dim":0.1}],"tensor":{"x*x":{"1":1,"x":3}}}"#)
            .unwrap();
        let a = AlgebraSpec::uniform_commutative(4);
        assert!(matches!(word_dims(&r, &a, &w(&r, "x,x")), Err(WreathError::NegativeDimension { .. })));
    }

    #[test]
    fn moments_are_catalan() {
        for k in 0..=10 {
            assert_eq!(moments(k).unwrap(), count_nc(0, k, 16).unwrap(), "k={k}");
        }
        assert_eq!(moments(4).unwrap(), 14);
        assert!(matches!(moments(MOMENT_LIMIT + 1), Err(WreathError::Limit(..))));
    }

    #[test]
    fn kac_examples() {
        let su2 = FusionRing::su2();
        assert!(kac_check(&su2, &AlgebraSpec::uniform_commutative(4)));
        let skew = AlgebraSpec::new(
            vec![MatrixBlock::scalar(1, rat(1, 2)), MatrixBlock::new(2, vec![rat(1, 3), rat(1, 6)])],
            false,
        )
        .unwrap();
        assert!(!kac_check(&su2, &skew));
        let q = FusionRing::from_json(r#"{"unit":"1","irreps":[{"id":"x","dim":2,"qdim":2.5}]}"#).unwrap();
        assert!(!kac_check(&q, &AlgebraSpec::uniform_commutative(4)));
    }
}
