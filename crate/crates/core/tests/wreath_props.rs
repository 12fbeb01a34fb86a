use proptest::prelude::*;

use wreathcat_core::fdalg::AlgebraSpec;
use wreathcat_core::fusionring::{FusionRing, Label};
use wreathcat_core::ncpart::count_nc;
use wreathcat_core::wreath::{
    moments, word_involution, wreath_hom_dim, wreath_tensor, DimTable, FormalSum, HomMethod, TensorCache, Word,
};

/// Rings with labels drawn from `0..n`.
fn rings() -> Vec<(FusionRing, u32)> {
    vec![
        (FusionRing::trivial(), 1),
        (FusionRing::cyclic_dual(2).unwrap(), 2),
        (FusionRing::cyclic_dual(3).unwrap(), 3),
        (FusionRing::su2(), 3),
    ]
}

fn word(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..16, 0..=max_len)
}

fn to_word(raw: &[u32], n: u32) -> Word {
    Word(raw.iter().map(|&a| Label(a % n)).collect())
}

fn conj_sum(ring: &FusionRing, s: &FormalSum) -> FormalSum {
    s.map_words(|w| Ok(word_involution(ring, w)?)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_law(r in 0usize..4, x in word(4)) {
        let (ring, n) = &rings()[r];
        let x = to_word(&x, *n);
        prop_assert_eq!(wreath_tensor(ring, &Word::empty(), &x).unwrap(), FormalSum::single(x.clone()));
        prop_assert_eq!(wreath_tensor(ring, &x, &Word::empty()).unwrap(), FormalSum::single(x));
    }

    #[test]
    fn trivial_summand_iff_conjugate(r in 0usize..4, x in word(4), y in word(4), force in any::<bool>()) {
        let (ring, n) = &rings()[r];
        let x = to_word(&x, *n);
        let y = if force { word_involution(ring, &x).unwrap() } else { to_word(&y, *n) };
        let expected = u64::from(y == word_involution(ring, &x).unwrap());
        prop_assert_eq!(wreath_tensor(ring, &x, &y).unwrap().get(&Word::empty()), expected);
    }

    #[test]
    fn associativity(r in 0usize..4, x in word(3), y in word(3), z in word(3)) {
        let (ring, n) = &rings()[r];
        let (x, y, z) = (to_word(&x, *n), to_word(&y, *n), to_word(&z, *n));
        let mut cache = TensorCache::new(ring);
        let xy = cache.tensor(&x, &y).unwrap().clone();
        let yz = cache.tensor(&y, &z).unwrap().clone();
        let left = cache.product(&xy, &FormalSum::single(z)).unwrap();
        let right = cache.product(&FormalSum::single(x), &yz).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn conjugation_is_anti_multiplicative(r in 0usize..4, x in word(3), y in word(3)) {
        let (ring, n) = &rings()[r];
        let (x, y) = (to_word(&x, *n), to_word(&y, *n));
        let lhs = conj_sum(ring, &wreath_tensor(ring, &x, &y).unwrap());
        let (xb, yb) = (word_involution(ring, &x).unwrap(), word_involution(ring, &y).unwrap());
        prop_assert_eq!(lhs, wreath_tensor(ring, &yb, &xb).unwrap());
        prop_assert_eq!(word_involution(ring, &xb).unwrap(), x);
    }

    #[test]
    fn dimension_homomorphism(r in 0usize..4, x in word(3), y in word(3), b in 0usize..3) {
        let (ring, n) = &rings()[r];
        let a = [AlgebraSpec::uniform_commutative(4), AlgebraSpec::uniform_commutative(5), AlgebraSpec::normalized_matrix(2)][b].clone();
        let (x, y) = (to_word(&x, *n), to_word(&y, *n));
        let mut table = DimTable::new(ring, &a).unwrap();
        let (dx, qx) = table.dims(&x).unwrap();
        let (dy, qy) = table.dims(&y).unwrap();
        let (mut d, mut q) = (0.0, 0.0);
        for (w, m) in wreath_tensor(ring, &x, &y).unwrap().iter() {
            let (dw, qw) = table.dims(w).unwrap();
            d += m as f64 * dw;
            q += m as f64 * qw;
        }
        prop_assert!((dx * dy - d).abs() <= 1e-6 * d.abs().max(1.0));
        prop_assert!((qx * qy - q).abs() <= 1e-6 * q.abs().max(1.0));
    }

    #[test]
    fn oracles_agree(r in 0usize..4, up in word(3), low in word(2)) {
        let (ring, n) = &rings()[r];
        let a = AlgebraSpec::uniform_commutative(4);
        let (up, low) = (to_word(&up, *n), to_word(&low, *n));
        let res = wreath_hom_dim(ring, &a, up.letters(), low.letters(), HomMethod::Both);
        prop_assert!(res.is_ok(), "{:?}", res);
    }
}

#[test]
fn moments_match_enumerator() {
    for k in 0..=12 {
        assert_eq!(moments(k).unwrap(), count_nc(0, k, 16).unwrap());
    }
}
