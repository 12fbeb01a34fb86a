//! Fusion rules of free wreath products `G ≀* G^aut(B, ψ)`.
//!
//! Irreducibles are indexed by words over the irreducible labels of `G`. The
//! basic representations decompose as `a(α) = r_(α)` for `α ≠ 1` and
//! `a(1) = r_∅ ⊕ r_(1)`.

mod dims;
mod homdim;
mod iso;
mod split;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::fusionring::{FusionRing, Label, RingError};
use crate::ncpart::NcError;

pub use dims::{kac_check, moments, ring_is_kac, word_dims, DimTable, WordDims, MOMENT_LIMIT};
pub use homdim::{
    decorate, hypothesis_warnings, well_decorated_partitions, wreath_hom_dim, DecoratedBlock, DecoratedPartition,
    HomDimResult, HomMethod,
};
pub use iso::{verify_semiring_iso, IsoReport, LabelMap};
pub use split::{free_product_decomposition, reassembly_holds, FreeComponent};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WreathError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Partition(#[from] NcError),
    #[error("word fusion needs two nonempty words")]
    EmptyFusion,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("oracle divergence: partitions give {partitions}, fusion rules give {fusion}")]
    OracleDivergence { partitions: u64, fusion: u64 },
    #[error("dimension of r_({word}) came out as {value}; the ring data is inconsistent")]
    NegativeDimension { word: String, value: f64 },
    #[error("multiplicity overflow")]
    Overflow,
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("{0} exceeds the supported limit {1}")]
    Limit(usize, usize),
}

/// A word `(α_1, …, α_k)` of irreducible labels; the empty word is `r_∅`.
///
/// Ordered by length, then lexicographically by label index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Label>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letter(a: Label) -> Self {
        Self(vec![a])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Label] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Comma-joined label names; the empty word is `""`.
    pub fn format(&self, ring: &FusionRing) -> String {
        self.0.iter().map(|&a| ring.format_label(a)).collect::<Vec<_>>().join(",")
    }

    pub fn parse(ring: &FusionRing, s: &str) -> Result<Self, RingError> {
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        s.split(',').map(|t| ring.parse_label(t)).collect::<Result<Vec<_>, _>>().map(Word)
    }
}

/// Display without a ring, by label index.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| format!("#{}", a.0)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// ℕ-linear combination of irreducibles `r_x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum(BTreeMap<Word, u64>);

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(w: Word) -> Self {
        Self(BTreeMap::from([(w, 1)]))
    }

    pub fn add(&mut self, w: Word, m: u64) -> Result<(), WreathError> {
        if m == 0 {
            return Ok(());
        }
        let e = self.0.entry(w).or_insert(0);
        *e = e.checked_add(m).ok_or(WreathError::Overflow)?;
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &FormalSum, m: u64) -> Result<(), WreathError> {
        for (w, &k) in &other.0 {
            self.add(w.clone(), k.checked_mul(m).ok_or(WreathError::Overflow)?)?;
        }
        Ok(())
    }

    pub fn get(&self, w: &Word) -> u64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.0.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies `f` to every word, merging collisions.
    pub fn map_words(&self, mut f: impl FnMut(&Word) -> Result<Word, WreathError>) -> Result<FormalSum, WreathError> {
        let mut out = FormalSum::new();
        for (w, &m) in &self.0 {
            out.add(f(w)?, m)?;
        }
        Ok(out)
    }

    /// `{"word": multiplicity}` in canonical order.
    pub fn to_json(&self, ring: &FusionRing) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            self.0.iter().map(|(w, &m)| (w.format(ring), serde_json::Value::from(m))).collect();
        serde_json::Value::Object(map)
    }
}

impl FromIterator<(Word, u64)> for FormalSum {
    fn from_iter<I: IntoIterator<Item = (Word, u64)>>(iter: I) -> Self {
        let mut s = FormalSum::new();
        for (w, m) in iter {
            s.add(w, m).expect("multiplicity overflow");
        }
        s
    }
}

/// `(α_1, …, α_k)‾ = (ᾱ_k, …, ᾱ_1)`.
pub fn word_involution(ring: &FusionRing, x: &Word) -> Result<Word, RingError> {
    x.0.iter().rev().map(|&a| ring.conj(a)).collect::<Result<Vec<_>, _>>().map(Word)
}

/// `x.y`: the last letter of `x` fused with the first letter of `y`.
pub fn word_fusion(ring: &FusionRing, x: &Word, y: &Word) -> Result<Vec<(Word, u64)>, WreathError> {
    let (Some((&a, xs)), Some((&b, ys))) = (x.0.split_last(), y.0.split_first()) else {
        return Err(WreathError::EmptyFusion);
    };
    let dec = ring.tensor(a, b)?;
    Ok(dec
        .iter()
        .map(|&(g, m)| {
            let mut w = xs.to_vec();
            w.push(g);
            w.extend_from_slice(ys);
            (Word(w), m)
        })
        .collect())
}

/// `r_x ⊗ r_y = Σ_{x = u,t; y = t̄,v} (r_{u,v} ⊕ ⊕_{w ∈ u.v} r_w)`, the fusion
/// words counted only when `u` and `v` are both nonempty.
pub fn wreath_tensor(ring: &FusionRing, x: &Word, y: &Word) -> Result<FormalSum, WreathError> {
    let mut out = FormalSum::new();
    for cut in (0..=x.len()).rev() {
        let (u, t) = x.0.split_at(cut);
        if t.len() > y.len() {
            break;
        }
        let tbar = word_involution(ring, &Word(t.to_vec()))?;
        if y.0[..t.len()] != tbar.0[..] {
            continue;
        }
        let (u, v) = (Word(u.to_vec()), Word(y.0[t.len()..].to_vec()));
        out.add(u.concat(&v), 1)?;
        if !u.is_empty() && !v.is_empty() {
            for (w, m) in word_fusion(ring, &u, &v)? {
                out.add(w, m)?;
            }
        }
    }
    Ok(out)
}

/// `Σ m_x m'_y r_x ⊗ r_y`, with products cached across calls.
pub struct TensorCache<'r> {
    ring: &'r FusionRing,
    memo: HashMap<(Word, Word), FormalSum>,
}

impl<'r> TensorCache<'r> {
    pub fn new(ring: &'r FusionRing) -> Self {
        Self { ring, memo: HashMap::new() }
    }

    pub fn tensor(&mut self, x: &Word, y: &Word) -> Result<&FormalSum, WreathError> {
        let key = (x.clone(), y.clone());
        if !self.memo.contains_key(&key) {
            let v = wreath_tensor(self.ring, x, y)?;
            self.memo.insert(key.clone(), v);
        }
        Ok(&self.memo[&key])
    }

    pub fn product(&mut self, a: &FormalSum, b: &FormalSum) -> Result<FormalSum, WreathError> {
        let mut out = FormalSum::new();
        for (x, m) in a.iter() {
            for (y, n) in b.iter() {
                let mn = m.checked_mul(n).ok_or(WreathError::Overflow)?;
                let t = self.tensor(x, y)?.clone();
                out.add_scaled(&t, mn)?;
            }
        }
        Ok(out)
    }
}

/// `a(α)` as a sum of irreducibles.
pub fn basic_representation(ring: &FusionRing, a: Label) -> FormalSum {
    let mut s = FormalSum::single(Word::letter(a));
    if a == ring.unit() {
        s.add(Word::empty(), 1).expect("small");
    }
    s
}

/// `a(α_1) ⊗ … ⊗ a(α_k)` decomposed into irreducibles `r_x`.
pub fn decompose_basic_tensor(ring: &FusionRing, labels: &[Label]) -> Result<FormalSum, WreathError> {
    let mut cache = TensorCache::new(ring);
    let mut acc = FormalSum::single(Word::empty());
    for &a in labels {
        ring.conj(a)?;
        acc = cache.product(&acc, &basic_representation(ring, a))?;
    }
    Ok(acc)
}
