//! Sparse companion to [`Operator`] used by the bulk verification loops.
//!
//! Partition maps on matrix-unit bases are overwhelmingly zero: on `ℂⁿ` the map of
//! `p` has `n^{b(p)}` nonzeros out of `n^{k+l}`. Entries are kept sorted by
//! `(row, col)` with no duplicates and no stored zeros.

use std::collections::HashMap;

use crate::operator::{ipow, Operator};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<S> {
    base_dim: usize,
    domain_power: usize,
    codomain_power: usize,
    entries: Vec<(usize, usize, S)>,
}

impl<S: Scalar> SparseOperator<S> {
    /// Sorts and drops zeros. Duplicate positions are summed.
    pub fn from_entries(
        base_dim: usize,
        domain_power: usize,
        codomain_power: usize,
        mut entries: Vec<(usize, usize, S)>,
    ) -> Self {
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut out: Vec<(usize, usize, S)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => out.push((r, c, v)),
            }
        }
        out.retain(|e| e.2 != S::zero());
        Self { base_dim, domain_power, codomain_power, entries: out }
    }

    pub fn from_dense(op: &Operator<S>) -> Self {
        let c = op.cols();
        let entries =
            op.data().iter().enumerate().filter(|(_, v)| **v != S::zero()).map(|(i, &v)| (i / c, i % c, v)).collect();
        Self { base_dim: op.base_dim(), domain_power: op.domain_power(), codomain_power: op.codomain_power(), entries }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn domain_power(&self) -> usize {
        self.domain_power
    }

    pub fn codomain_power(&self) -> usize {
        self.codomain_power
    }

    pub fn rows(&self) -> usize {
        ipow(self.base_dim, self.codomain_power)
    }

    pub fn cols(&self) -> usize {
        ipow(self.base_dim, self.domain_power)
    }

    pub fn entries(&self) -> &[(usize, usize, S)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Operator<S> {
        let mut op = Operator::zeros(self.base_dim, self.domain_power, self.codomain_power);
        for &(r, c, v) in &self.entries {
            op.set(r, c, v);
        }
        op
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        Self { base_dim: self.base_dim, domain_power: self.codomain_power, codomain_power: self.domain_power, entries }
    }

    /// Ranges of `entries` sharing a row, in row order.
    fn row_ranges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.entries.len() {
            let row = self.entries[start].0;
            let mut end = start + 1;
            while end < self.entries.len() && self.entries[end].0 == row {
                end += 1;
            }
            out.push((row, start, end));
            start = end;
        }
        out
    }

    /// Kronecker product, produced directly in sorted order.
    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.base_dim, other.base_dim, "kron across different algebras");
        let (r2, c2) = (other.rows(), other.cols());
        let rows_a = self.row_ranges();
        let rows_b = other.row_ranges();
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for &(ra, sa, ea) in &rows_a {
            for &(rb, sb, eb) in &rows_b {
                let row = ra * r2 + rb;
                for &(_, ca, va) in &self.entries[sa..ea] {
                    for &(_, cb, vb) in &other.entries[sb..eb] {
                        entries.push((row, ca * c2 + cb, va * vb));
                    }
                }
            }
        }
        Self {
            base_dim: self.base_dim,
            domain_power: self.domain_power + other.domain_power,
            codomain_power: self.codomain_power + other.codomain_power,
            entries,
        }
    }

    /// `self ∘ other` with a hash accumulator.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.domain_power, other.codomain_power, "composition arity");
        let by_row = other.row_ranges();
        let mut index: HashMap<usize, (usize, usize)> = HashMap::with_capacity(by_row.len());
        for (r, s, e) in by_row {
            index.insert(r, (s, e));
        }
        let mut acc: HashMap<(usize, usize), S> = HashMap::new();
        for &(r, mid, a) in &self.entries {
            if let Some(&(s, e)) = index.get(&mid) {
                for &(_, c, b) in &other.entries[s..e] {
                    *acc.entry((r, c)).or_insert_with(S::zero) += a * b;
                }
            }
        }
        Self::from_entries(
            self.base_dim,
            other.domain_power,
            self.codomain_power,
            acc.into_iter().map(|((r, c), v)| (r, c, v)).collect(),
        )
    }

    pub fn scaled(&self, factor: S) -> Self {
        Self { entries: self.entries.iter().map(|&(r, c, v)| (r, c, v * factor)).collect(), ..self.clone() }
    }

    /// `max |self - other|` over the union of supports, by a sorted merge.
    pub fn max_abs_diff(&self, other: &Self) -> Option<S> {
        if self.base_dim != other.base_dim
            || self.domain_power != other.domain_power
            || self.codomain_power != other.codomain_power
        {
            return None;
        }
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut worst = S::zero();
        while i < a.len() || j < b.len() {
            let ka = a.get(i).map(|e| (e.0, e.1));
            let kb = b.get(j).map(|e| (e.0, e.1));
            let d = match (ka, kb) {
                (Some(x), Some(y)) if x == y => {
                    let d = (a[i].2 - b[j].2).abs();
                    i += 1;
                    j += 1;
                    d
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    a[i - 1].2.abs()
                }
                (Some(_), None) => {
                    i += 1;
                    a[i - 1].2.abs()
                }
                _ => {
                    j += 1;
                    b[j - 1].2.abs()
                }
            };
            worst = worst.max(d);
        }
        Some(worst)
    }
}

/// Reusable dense scratch buffer with touched-index tracking, so a product can be
/// formed and compared against a reference without clearing the whole buffer.
pub(crate) struct Accumulator<S> {
    /// Value and generation stamp side by side, so an update touches one cache line.
    slots: Vec<(S, u32)>,
    generation: u32,
    touched: Vec<u32>,
}

impl<S: Scalar> Accumulator<S> {
    pub fn new() -> Self {
        Self { slots: Vec::new(), generation: 1, touched: Vec::new() }
    }

    /// Clears the buffer and makes sure it holds `len` slots (at most `u32::MAX`).
    pub fn reset(&mut self, len: usize) {
        assert!(len <= u32::MAX as usize, "accumulator length {len} out of range");
        if self.slots.len() < len {
            self.slots.resize(len, (S::zero(), 0));
        }
        self.touched.clear();
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.slots.iter_mut().for_each(|s| s.1 = 0);
            self.generation = 1;
        }
    }

    #[inline]
    pub fn add(&mut self, i: usize, v: S) {
        let slot = &mut self.slots[i];
        if slot.1 != self.generation {
            *slot = (v, self.generation);
            self.touched.push(i as u32);
        } else {
            slot.0 += v;
        }
    }

    /// Calls `f(index, value)` on every touched slot.
    pub fn for_each_touched_mut(&mut self, mut f: impl FnMut(usize, &mut S)) {
        for &i in &self.touched {
            f(i as usize, &mut self.slots[i as usize].0);
        }
    }

    pub fn max_abs(&self) -> S {
        self.touched.iter().map(|&i| self.slots[i as usize].0.abs()).fold(S::zero(), S::max)
    }
}
