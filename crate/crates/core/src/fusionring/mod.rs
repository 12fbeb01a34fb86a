//! Fusion rings: irreducible labels, unit, conjugation and tensor multiplicities.
//!
//! Built-in rings are rule based and may have infinitely many labels; every
//! binary product is memoized on first use. Table rings come from JSON.

mod table;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

pub use table::{IrrepFile, RingFile};
pub use validate::{validate_ring, RingReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unknown ring {0:?}")]
    UnknownRing(String),
    #[error("unknown label {label:?} in ring {ring}")]
    UnknownLabel { ring: String, label: String },
    #[error("ring table has no entry for {0}*{1}")]
    MissingProduct(String, String),
    #[error("invalid ring file: {0}")]
    Schema(String),
}

/// An irreducible of a fusion ring, as an opaque index.
///
/// `Label(0)` is always the unit. The meaning of other indices depends on the
/// ring; use [`FusionRing::format_label`] and [`FusionRing::parse_label`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label(pub u32);

impl Label {
    pub const UNIT: Label = Label(0);
}

/// Decomposition of a product: `(γ, N^γ)` sorted by label, multiplicities > 0.
pub type Decomposition = Arc<[(Label, u64)]>;

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Trivial,
    Cyclic(u32),
    /// ℤ with labels zigzag encoded: 0, 1, -1, 2, -2, …
    Integer,
    Su2,
    So3,
    Table(table::Table),
}

pub struct FusionRing {
    name: String,
    kind: Kind,
    memo: RwLock<HashMap<(Label, Label), Decomposition>>,
}

impl fmt::Debug for FusionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionRing").field("name", &self.name).finish_non_exhaustive()
    }
}

fn zigzag(n: i64) -> u32 {
    if n > 0 {
        (2 * n - 1) as u32
    } else {
        (-2 * n) as u32
    }
}

fn unzigzag(x: u32) -> i64 {
    let x = i64::from(x);
    if x % 2 == 1 {
        (x + 1) / 2
    } else {
        -x / 2
    }
}

impl FusionRing {
    fn with_kind(name: String, kind: Kind) -> Self {
        Self { name, kind, memo: RwLock::new(HashMap::new()) }
    }

    pub fn trivial() -> Self {
        Self::with_kind("trivial".into(), Kind::Trivial)
    }

    /// Dual of `ℤ_s`: group ring of `ℤ_s`, labels `1, g, g2, …`.
    pub fn cyclic_dual(s: u32) -> Result<Self, RingError> {
        if s == 0 {
            return Err(RingError::UnknownRing("cyclic_dual(0)".into()));
        }
        Ok(Self::with_kind(format!("cyclic_dual({s})"), Kind::Cyclic(s)))
    }

    /// Dual of `ℤ` (the circle group's irreducibles), labels `1, g, g-1, g2, …`.
    pub fn integer_dual() -> Self {
        Self::with_kind("integer_dual".into(), Kind::Integer)
    }

    /// Labels `0, 1, 2, …` with `n` of dimension `n + 1`.
    pub fn su2() -> Self {
        Self::with_kind("su2".into(), Kind::Su2)
    }

    /// Labels `0, 1, 2, …` with `n` of dimension `2n + 1`.
    pub fn so3() -> Self {
        Self::with_kind("so3".into(), Kind::So3)
    }

    /// `trivial`, `cyclic_dual(s)`, `integer_dual`, `su2` or `so3`.
    pub fn builtin(name: &str) -> Result<Self, RingError> {
        let n = name.trim();
        match n {
            "trivial" => return Ok(Self::trivial()),
            "integer_dual" | "integer" => return Ok(Self::integer_dual()),
            "su2" => return Ok(Self::su2()),
            "so3" => return Ok(Self::so3()),
            _ => {}
        }
        let arg = n
            .strip_prefix("cyclic_dual(")
            .or_else(|| n.strip_prefix("cyclic("))
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|s| s.trim().parse::<u32>().ok());
        match arg {
            Some(s) => Self::cyclic_dual(s),
            None => Err(RingError::UnknownRing(name.to_string())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, RingError> {
        let file: RingFile = serde_json::from_str(text).map_err(|e| RingError::Schema(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &RingFile) -> Result<Self, RingError> {
        Ok(Self::with_kind("table".into(), Kind::Table(table::Table::from_file(file)?)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> Label {
        Label::UNIT
    }

    /// Number of labels, or `None` for rings with infinitely many.
    pub fn label_count(&self) -> Option<usize> {
        match &self.kind {
            Kind::Trivial => Some(1),
            Kind::Cyclic(s) => Some(*s as usize),
            Kind::Table(t) => Some(t.len()),
            Kind::Integer | Kind::Su2 | Kind::So3 => None,
        }
    }

    /// The first `limit` labels in index order.
    pub fn labels(&self, limit: usize) -> Vec<Label> {
        let n = self.label_count().unwrap_or(usize::MAX).min(limit);
        (0..n as u32).map(Label).collect()
    }

    pub fn contains(&self, a: Label) -> bool {
        self.label_count().is_none_or(|n| (a.0 as usize) < n)
    }

    fn check(&self, a: Label) -> Result<(), RingError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(RingError::UnknownLabel { ring: self.name.clone(), label: format!("#{}", a.0) })
        }
    }

    pub fn conj(&self, a: Label) -> Result<Label, RingError> {
        self.check(a)?;
        Ok(match &self.kind {
            Kind::Trivial | Kind::Su2 | Kind::So3 => a,
            Kind::Cyclic(s) => Label((s - a.0 % s) % s),
            Kind::Integer => Label(zigzag(-unzigzag(a.0))),
            Kind::Table(t) => t.conj(a),
        })
    }

    pub fn dim(&self, a: Label) -> Result<f64, RingError> {
        self.check(a)?;
        Ok(match &self.kind {
            Kind::Trivial | Kind::Cyclic(_) | Kind::Integer => 1.0,
            Kind::Su2 => f64::from(a.0) + 1.0,
            Kind::So3 => 2.0 * f64::from(a.0) + 1.0,
            Kind::Table(t) => t.dim(a),
        })
    }

    pub fn qdim(&self, a: Label) -> Result<f64, RingError> {
        self.check(a)?;
        Ok(match &self.kind {
            Kind::Table(t) => t.qdim(a),
            _ => self.dim(a)?,
        })
    }

    /// `α ⊗ β = ⊕_γ N_{αβ}^γ γ`.
    pub fn tensor(&self, a: Label, b: Label) -> Result<Decomposition, RingError> {
        if let Some(d) = self.memo.read().expect("ring memo lock").get(&(a, b)) {
            return Ok(Arc::clone(d));
        }
        self.check(a)?;
        self.check(b)?;
        let d: Decomposition = self.compute_tensor(a, b)?.into();
        let mut memo = self.memo.write().expect("ring memo lock");
        Ok(Arc::clone(memo.entry((a, b)).or_insert(d)))
    }

    fn compute_tensor(&self, a: Label, b: Label) -> Result<Vec<(Label, u64)>, RingError> {
        Ok(match &self.kind {
            Kind::Trivial => vec![(Label::UNIT, 1)],
            Kind::Cyclic(s) => vec![(Label((a.0 + b.0) % s), 1)],
            Kind::Integer => vec![(Label(zigzag(unzigzag(a.0) + unzigzag(b.0))), 1)],
            Kind::Su2 => {
                let (x, y) = (a.0, b.0);
                (x.abs_diff(y)..=x + y).step_by(2).map(|c| (Label(c), 1)).collect()
            }
            Kind::So3 => {
                let (x, y) = (a.0, b.0);
                (x.abs_diff(y)..=x + y).map(|c| (Label(c), 1)).collect()
            }
            Kind::Table(t) => {
                t.tensor(a, b).ok_or_else(|| RingError::MissingProduct(self.format_label(a), self.format_label(b)))?
            }
        })
    }

    /// `N_{αβ}^γ`.
    pub fn multiplicity(&self, a: Label, b: Label, c: Label) -> Result<u64, RingError> {
        let d = self.tensor(a, b)?;
        Ok(d.binary_search_by_key(&c, |e| e.0).map_or(0, |i| d[i].1))
    }

    pub fn format_label(&self, a: Label) -> String {
        match &self.kind {
            Kind::Trivial => "1".into(),
            Kind::Cyclic(_) => power_name(i64::from(a.0)),
            Kind::Integer => power_name(unzigzag(a.0)),
            Kind::Su2 | Kind::So3 => a.0.to_string(),
            Kind::Table(t) => t.name(a).to_string(),
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<Label, RingError> {
        let t = s.trim();
        let unknown = || RingError::UnknownLabel { ring: self.name.clone(), label: s.to_string() };
        match &self.kind {
            Kind::Trivial => (t == "1").then_some(Label::UNIT).ok_or_else(unknown),
            Kind::Cyclic(n) => {
                let e = parse_power(t).ok_or_else(unknown)?;
                Ok(Label(e.rem_euclid(i64::from(*n)) as u32))
            }
            Kind::Integer => {
                let e = parse_power(t).ok_or_else(unknown)?;
                i32::try_from(e).map(|e| Label(zigzag(i64::from(e)))).map_err(|_| unknown())
            }
            Kind::Su2 | Kind::So3 => t.parse::<u32>().map(Label).map_err(|_| unknown()),
            Kind::Table(table) => table.find(t).ok_or_else(unknown),
        }
    }

    /// Snapshot of the memo table, for persistence.
    pub fn memo_entries(&self) -> Vec<((Label, Label), Vec<(Label, u64)>)> {
        let memo = self.memo.read().expect("ring memo lock");
        let mut v: Vec<_> = memo.iter().map(|(k, d)| (*k, d.to_vec())).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    /// Seeds the memo table with previously computed products.
    pub fn preload(&self, entries: impl IntoIterator<Item = ((Label, Label), Vec<(Label, u64)>)>) {
        let mut memo = self.memo.write().expect("ring memo lock");
        for (k, d) in entries {
            memo.entry(k).or_insert_with(|| d.into());
        }
    }

    /// Left-to-right fold of the binary tensor product; the empty word gives the unit.
    pub fn tensor_decompose(&self, word: &[Label]) -> Result<BTreeMap<Label, u64>, RingError> {
        let mut acc = BTreeMap::from([(Label::UNIT, 1u64)]);
        for (i, &x) in word.iter().enumerate() {
            self.check(x)?;
            if i == 0 {
                acc = BTreeMap::from([(x, 1)]);
                continue;
            }
            let mut next = BTreeMap::new();
            for (&g, &m) in &acc {
                for &(h, n) in self.tensor(g, x)?.iter() {
                    *next.entry(h).or_insert(0) += m * n;
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// `dim Hom(w1, w2) = Σ_γ mult_γ(w1) mult_γ(w2)`.
    pub fn hom_dim(&self, w1: &[Label], w2: &[Label]) -> Result<u64, RingError> {
        let a = self.tensor_decompose(w1)?;
        let b = self.tensor_decompose(w2)?;
        Ok(a.iter().map(|(g, m)| m * b.get(g).copied().unwrap_or(0)).sum())
    }
}

fn power_name(e: i64) -> String {
    match e {
        0 => "1".into(),
        1 => "g".into(),
        _ => format!("g{e}"),
    }
}

fn parse_power(t: &str) -> Option<i64> {
    match t {
        "1" => Some(0),
        "g" => Some(1),
        _ => t.strip_prefix('g')?.parse::<i64>().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(r: &FusionRing, s: &[&str]) -> Vec<Label> {
        s.iter().map(|x| r.parse_label(x).unwrap()).collect()
    }

    fn decomp(r: &FusionRing, d: &BTreeMap<Label, u64>) -> Vec<(String, u64)> {
        d.iter().map(|(l, m)| (r.format_label(*l), *m)).collect()
    }

    /// Chebyshev recursion for characters of SU(2): χ_{n+1} = x χ_n − χ_{n−1}.
    fn su2_character(n: usize) -> Vec<i64> {
        let mut prev = vec![1i64];
        let mut cur = vec![0i64, 1];
        if n == 0 {
            return prev;
        }
        for _ in 1..n {
            let mut next = vec![0i64; cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= c;
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Expands a polynomial in the χ_n basis by peeling off leading terms.
    fn in_character_basis(mut p: Vec<i64>) -> BTreeMap<u32, i64> {
        let mut out = BTreeMap::new();
        while let Some(deg) = p.iter().rposition(|&c| c != 0) {
            let c = p[deg];
            out.insert(deg as u32, c);
            for (i, x) in su2_character(deg).iter().enumerate() {
                p[i] -= c * x;
            }
        }
        out
    }

    #[test]
    fn cyclic_examples() {
        let r = FusionRing::cyclic_dual(3).unwrap();
        let [g, g2] = [r.parse_label("g").unwrap(), r.parse_label("g2").unwrap()];
        assert_eq!(&*r.tensor(g, g).unwrap(), &[(g2, 1)]);
        assert_eq!(&*r.tensor(g, g2).unwrap(), &[(Label::UNIT, 1)]);
        assert_eq!(r.conj(g).unwrap(), g2);
        let z2 = FusionRing::builtin("cyclic_dual(2)").unwrap();
        let w = labels(&z2, &["g", "g", "g"]);
        assert_eq!(decomp(&z2, &z2.tensor_decompose(&w).unwrap()), vec![("g".into(), 1)]);
    }

    #[test]
    fn su2_matches_character_oracle() {
        let r = FusionRing::su2();
        for a in 0..6u32 {
            for b in 0..6u32 {
                let oracle = in_character_basis(poly_mul(&su2_character(a as usize), &su2_character(b as usize)));
                let got: BTreeMap<u32, i64> =
                    r.tensor(Label(a), Label(b)).unwrap().iter().map(|(l, m)| (l.0, *m as i64)).collect();
                assert_eq!(got, oracle, "{a}x{b}");
            }
        }
        let w = labels(&r, &["1", "1", "1"]);
        assert_eq!(decomp(&r, &r.tensor_decompose(&w).unwrap()), vec![("1".into(), 2), ("3".into(), 1)]);
    }

    #[test]
    fn so3_is_even_part_of_su2() {
        let so3 = FusionRing::so3();
        let su2 = FusionRing::su2();
        assert_eq!(so3.tensor(Label(1), Label(1)).unwrap().iter().map(|e| e.0 .0).collect::<Vec<_>>(), vec![0, 1, 2]);
        for a in 0..5 {
            for b in 0..5 {
                let x: Vec<u32> = so3.tensor(Label(a), Label(b)).unwrap().iter().map(|e| 2 * e.0 .0).collect();
                let y: Vec<u32> = su2.tensor(Label(2 * a), Label(2 * b)).unwrap().iter().map(|e| e.0 .0).collect();
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn integer_labels() {
        let r = FusionRing::integer_dual();
        let names = ["1", "g", "g-1", "g2", "g-2"];
        for (i, n) in names.iter().enumerate() {
            assert_eq!(r.format_label(Label(i as u32)), *n);
            assert_eq!(r.parse_label(n).unwrap(), Label(i as u32));
        }
        let (g, gi) = (r.parse_label("g").unwrap(), r.parse_label("g-1").unwrap());
        assert_eq!(&*r.tensor(g, gi).unwrap(), &[(Label::UNIT, 1)]);
        assert_eq!(r.conj(r.parse_label("g5").unwrap()).unwrap(), r.parse_label("g-5").unwrap());
    }

    #[test]
    fn hom_dims() {
        let su2 = FusionRing::su2();
        assert_eq!(su2.hom_dim(&labels(&su2, &["1", "1"]), &labels(&su2, &["0"])).unwrap(), 1);
        let z3 = FusionRing::cyclic_dual(3).unwrap();
        assert_eq!(z3.hom_dim(&labels(&z3, &["g", "g"]), &labels(&z3, &["g2"])).unwrap(), 1);
        assert_eq!(z3.hom_dim(&labels(&z3, &["g"]), &labels(&z3, &["g2"])).unwrap(), 0);
        assert_eq!(su2.hom_dim(&[], &labels(&su2, &["1", "1"])).unwrap(), 1);
        assert_eq!(su2.tensor_decompose(&[]).unwrap(), BTreeMap::from([(Label::UNIT, 1)]));
    }

    #[test]
    fn errors() {
        assert!(matches!(FusionRing::builtin("su3"), Err(RingError::UnknownRing(_))));
        assert!(FusionRing::cyclic_dual(0).is_err());
        let z3 = FusionRing::cyclic_dual(3).unwrap();
        assert!(z3.parse_label("h").is_err());
        assert!(z3.tensor(Label(5), Label(0)).is_err());
        assert!(FusionRing::trivial().parse_label("g").is_err());
    }

    #[test]
    fn memo_round_trip() {
        let r = FusionRing::su2();
        r.tensor(Label(2), Label(3)).unwrap();
        let snap = r.memo_entries();
        assert_eq!(snap.len(), 1);
        let fresh = FusionRing::su2();
        fresh.preload(snap.clone());
        assert_eq!(fresh.memo_entries(), snap);
    }
}
