//! Numerical check of the tensor, adjoint and composition laws for `T_p`.
//!
//! Operators are kept as sorted sparse entry lists. Products are accumulated in
//! scratch buffers and compared against the reference operator there, so no pair
//! ever materializes a dense matrix.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{FormMode, PmapError, TpBuilder};
use crate::fdalg::AlgebraSpec;
use crate::ncpart::{compose, enumerate_nc, NcPartition};
use crate::operator::ipow;
use crate::scalar::Scalar;
use crate::sparse::Accumulator;

/// Largest scratch buffer `n^{points}` the verifier will allocate.
const SCRATCH_LIMIT: usize = 1 << 26;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub k_max: usize,
    /// Tolerance for the composition law.
    pub tol: f64,
    /// Tolerance for the tensor and adjoint laws.
    pub exact_tol: f64,
}

impl VerifyOptions {
    pub fn new(k_max: usize) -> Self {
        Self { k_max, tol: 1e-9, exact_tol: 1e-12 }
    }
}

/// Outcome of one law over all pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub checked: usize,
    pub max_deviation: f64,
    /// The pair attaining `max_deviation`.
    pub worst: Option<String>,
    pub tolerance: f64,
}

impl LawReport {
    fn new(tolerance: f64) -> Self {
        Self { checked: 0, max_deviation: 0.0, worst: None, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }

    fn absorb(&mut self, checked: usize, worst: Option<(f64, String)>) {
        self.checked += checked;
        if let Some((dev, what)) = worst {
            let dev = nan_high(dev);
            if self.worst.is_none() || dev > self.max_deviation {
                self.max_deviation = dev;
                self.worst = Some(what);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalculusReport {
    pub mode: FormMode,
    pub k_max: usize,
    /// `δ` for delta mode, `ψ̃(1)` for one-form mode.
    pub coefficient_base: f64,
    pub tensor: LawReport,
    pub adjoint: LawReport,
    pub composition: LawReport,
}

impl CalculusReport {
    pub fn passed(&self) -> bool {
        self.tensor.passed() && self.adjoint.passed() && self.composition.passed()
    }
}

/// Noncrossing partitions grouped by shape, with their pairwise compositions.
///
/// Depends only on `k_max`, so one table serves every algebra and mode.
pub struct CompositionTable {
    k_max: usize,
    shapes: HashMap<(usize, usize), Arc<Vec<NcPartition>>>,
    /// Position of each partition within its shape.
    position: HashMap<NcPartition, u32>,
    /// For `(k, l, m)`: row-major over `(p, q)`, the index of `qp` in `NC(k, m)`,
    /// `cy(p, q)` and `cb(p, q)`.
    triples: Vec<((usize, usize, usize), Vec<(u32, u8, u8)>)>,
}

impl CompositionTable {
    pub fn new(k_max: usize) -> Result<Self, PmapError> {
        let mut shapes = HashMap::new();
        for t in 0..=k_max {
            for k in 0..=t {
                shapes.insert((k, t - k), Arc::new(enumerate_nc(k, t - k)?));
            }
        }
        let position: HashMap<NcPartition, u32> =
            shapes.values().flat_map(|parts| parts.iter().enumerate().map(|(i, p)| (p.clone(), i as u32))).collect();
        let mut triples = Vec::new();
        for k in 0..=k_max {
            for l in 0..=k_max - k {
                for m in 0..=k_max - k - l {
                    let ps = &shapes[&(k, l)];
                    let qs = &shapes[&(l, m)];
                    let mut rows = Vec::with_capacity(ps.len() * qs.len());
                    for p in ps.iter() {
                        for q in qs.iter() {
                            let c = compose(q, p)?;
                            rows.push((position[&c.result], c.cycles as u8, c.central_blocks as u8));
                        }
                    }
                    triples.push(((k, l, m), rows));
                }
            }
        }
        Ok(Self { k_max, shapes, position, triples })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn pair_count(&self) -> usize {
        self.triples.iter().map(|(_, r)| r.len()).sum()
    }

    fn shape(&self, k: usize, l: usize) -> &Arc<Vec<NcPartition>> {
        &self.shapes[&(k, l)]
    }

    fn position(&self, p: &NcPartition) -> usize {
        self.position[p] as usize
    }
}

/// Nonzero `(row, col, value)` entries of one `T_p`, in no particular order.
type Entries<S> = Vec<(u32, u32, S)>;

/// Shapes are kept in memory while their total entry count stays below this.
const CACHE_ENTRY_LIMIT: usize = 1 << 27;

/// Slots of the per-`p` scratch buffer shared by a chunk of `q`s.
const CHUNK_LIMIT: usize = 1 << 16;

/// Regions up to this size use a plain buffer, cleared for every `p`.
const DENSE_LIMIT: usize = 1 << 12;

struct OpCache<'a, S> {
    builder: &'a TpBuilder<S>,
    table: &'a CompositionTable,
    cached_entries: usize,
    cached: HashMap<(usize, usize), Arc<Vec<Entries<S>>>>,
}

impl<'a, S: Scalar> OpCache<'a, S> {
    fn new(builder: &'a TpBuilder<S>, table: &'a CompositionTable) -> Self {
        Self { builder, table, cached_entries: 0, cached: HashMap::new() }
    }

    fn get(&mut self, k: usize, l: usize) -> Arc<Vec<Entries<S>>> {
        if let Some(s) = self.cached.get(&(k, l)) {
            return Arc::clone(s);
        }
        let builder = self.builder;
        let ops: Vec<Entries<S>> = self.table.shape(k, l).par_iter().map(|p| entries(builder, p)).collect();
        let size: usize = ops.iter().map(Vec::len).sum();
        let ops = Arc::new(ops);
        if self.cached_entries + size <= CACHE_ENTRY_LIMIT {
            self.cached_entries += size;
            self.cached.insert((k, l), Arc::clone(&ops));
        }
        ops
    }
}

/// Entries of `T_p` sorted by `(row, col)`.
fn entries<S: Scalar>(builder: &TpBuilder<S>, p: &NcPartition) -> Entries<S> {
    let mut out = Vec::new();
    builder.for_each_entry(p, |r, c, v| out.push((r as u32, c as u32, v)));
    out.sort_unstable_by_key(|e| (u64::from(e.0) << 32) | u64::from(e.1));
    out
}

/// Max deviation between `a ⊗ b` and `reference`, all sorted by `(row, col)`.
///
/// The Kronecker product is generated in sorted order one row pair at a time and
/// merged against the reference.
fn kron_deviation<S: Scalar>(
    a: &[(u32, u32, S)],
    b: &[(u32, u32, S)],
    reference: &[(u32, u32, S)],
    b_rows: u32,
    b_cols: u32,
) -> f64 {
    let mut worst = 0.0f64;
    let mut rest = reference;
    let mut note = |d: S| worst = f64::max(worst, nan_high(d.abs().to_f64_lossy()));
    for ra in a.chunk_by(|x, y| x.0 == y.0) {
        for rb in b.chunk_by(|x, y| x.0 == y.0) {
            let row = ra[0].0 * b_rows + rb[0].0;
            for &(_, ca, va) in ra {
                for &(_, cb, vb) in rb {
                    let key = (row, ca * b_cols + cb);
                    while let Some((&(r, c, v), tail)) = rest.split_first() {
                        if (r, c) >= key {
                            break;
                        }
                        note(v);
                        rest = tail;
                    }
                    match rest.split_first() {
                        Some((&(r, c, v), tail)) if (r, c) == key => {
                            note(v - va * vb);
                            rest = tail;
                        }
                        _ => note(va * vb),
                    }
                }
            }
        }
    }
    for &(_, _, v) in rest {
        note(v);
    }
    worst
}

/// Entries of several operators bucketed by column: `(operator, row, value)`.
struct ColumnIndex<S> {
    offsets: Vec<usize>,
    items: Vec<(u32, u32, S)>,
}

impl<S: Scalar> ColumnIndex<S> {
    fn new(ops: &[Entries<S>], cols: usize) -> Self {
        let mut offsets = vec![0usize; cols + 1];
        for op in ops {
            for &(_, c, _) in op {
                offsets[c as usize + 1] += 1;
            }
        }
        for i in 0..cols {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut items = vec![(0, 0, S::zero()); offsets[cols]];
        for (j, op) in ops.iter().enumerate() {
            for &(r, c, v) in op {
                let slot = &mut fill[c as usize];
                items[*slot] = (j as u32, r, v);
                *slot += 1;
            }
        }
        Self { offsets, items }
    }

    #[inline]
    fn column(&self, c: u32) -> &[(u32, u32, S)] {
        &self.items[self.offsets[c as usize]..self.offsets[c as usize + 1]]
    }
}

fn scratch_len(n: usize, points: usize) -> Result<usize, PmapError> {
    n.checked_pow(points as u32).filter(|&s| s <= SCRATCH_LIMIT).ok_or(PmapError::TooLarge {
        points,
        dim: n,
        size: n.saturating_pow(points as u32),
        limit: SCRATCH_LIMIT,
    })
}

/// Larger deviation wins; ties go to the smaller key, so the result does not
/// depend on how the work was split.
fn pick_worse<K: Ord>(a: Option<(f64, K)>, b: Option<(f64, K)>) -> Option<(f64, K)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            let (dx, dy) = (nan_high(x.0), nan_high(y.0));
            if dy > dx || (dy == dx && y.1 < x.1) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

fn nan_high(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Checks all laws for pairs with at most `k_max` glued points.
pub fn verify_calculus(a: &AlgebraSpec, k_max: usize, mode: FormMode) -> Result<CalculusReport, PmapError> {
    let table = CompositionTable::new(k_max)?;
    verify_calculus_with::<f64>(a, mode, &VerifyOptions::new(k_max), &table)
}

/// As [`verify_calculus`], reusing a precomputed composition table.
pub fn verify_calculus_with<S: Scalar>(
    a: &AlgebraSpec,
    mode: FormMode,
    opts: &VerifyOptions,
    table: &CompositionTable,
) -> Result<CalculusReport, PmapError> {
    if opts.k_max > table.k_max() {
        return Err(PmapError::Hypothesis(format!(
            "composition table covers {} points, {} requested",
            table.k_max(),
            opts.k_max
        )));
    }
    let builder = TpBuilder::<S>::for_mode(a, mode)?;
    let n = a.dim();
    scratch_len(n, opts.k_max)?;
    let base = match mode {
        FormMode::DeltaForm => S::from_rational(a.delta().expect("checked δ-form")),
        FormMode::OneForm => S::from_rational(builder.algebra().total_weight()),
    };
    let mut cache = OpCache::new(&builder, table);

    let adjoint = check_adjoint(&mut cache, opts)?;
    let tensor = check_tensor(&mut cache, opts)?;
    let composition = check_composition(&mut cache, opts, mode, base)?;
    Ok(CalculusReport { mode, k_max: opts.k_max, coefficient_base: base.to_f64_lossy(), tensor, adjoint, composition })
}

fn check_adjoint<S: Scalar>(cache: &mut OpCache<'_, S>, opts: &VerifyOptions) -> Result<LawReport, PmapError> {
    let n = cache.builder.algebra().dim();
    let mut report = LawReport::new(opts.exact_tol);
    for t in 0..=opts.k_max {
        let len = scratch_len(n, t)?;
        for k in 0..=t {
            let l = t - k;
            let ops = cache.get(k, l);
            let parts = cache.table.shape(k, l);
            let builder = cache.builder;
            // T_{p*} : B^{⊗l} → B^{⊗k}; compare with the transpose of T_p.
            let cols = ipow(n, l);
            let worst = (0..parts.len())
                .into_par_iter()
                .map_init(Accumulator::<S>::new, |acc, i| {
                    acc.reset(len);
                    builder.for_each_entry(&parts[i].adjoint(), |r, c, v| acc.add(r * cols + c, v));
                    for &(r, c, v) in &ops[i] {
                        acc.add(c as usize * cols + r as usize, -v);
                    }
                    Some((acc.max_abs().to_f64_lossy(), i))
                })
                .reduce(|| None, pick_worse);
            report.absorb(parts.len(), worst.map(|(d, i)| (d, format!("p={} in NC({k},{l})", parts[i]))));
        }
    }
    Ok(report)
}

fn check_tensor<S: Scalar>(cache: &mut OpCache<'_, S>, opts: &VerifyOptions) -> Result<LawReport, PmapError> {
    let n = cache.builder.algebra().dim();
    let mut report = LawReport::new(opts.exact_tol);
    let k_max = opts.k_max;
    for pa in 0..=k_max {
        for kp in 0..=pa {
            let lp = pa - kp;
            let ops_p = cache.get(kp, lp);
            let parts_p = Arc::clone(cache.table.shape(kp, lp));
            for qa in 0..=k_max - pa {
                scratch_len(n, pa + qa)?;
                for kq in 0..=qa {
                    let lq = qa - kq;
                    let ops_q = cache.get(kq, lq);
                    let ops_r = cache.get(kp + kq, lp + lq);
                    let table = cache.table;
                    let parts_q = table.shape(kq, lq);
                    let (rows_q, cols_q) = (ipow(n, lq) as u32, ipow(n, kq) as u32);
                    let worst = (0..parts_p.len())
                        .into_par_iter()
                        .map(|pi| {
                            let mut worst = None;
                            for qi in 0..parts_q.len() {
                                let ri = table.position(&parts_p[pi].tensor(&parts_q[qi]));
                                let d = kron_deviation(&ops_p[pi], &ops_q[qi], &ops_r[ri], rows_q, cols_q);
                                worst = pick_worse(worst, Some((d, (pi, qi))));
                            }
                            worst
                        })
                        .reduce(|| None, pick_worse);
                    report.absorb(
                        parts_p.len() * parts_q.len(),
                        worst.map(|(d, (pi, qi))| {
                            (d, format!("p={} in NC({kp},{lp}), q={} in NC({kq},{lq})", parts_p[pi], parts_q[qi]))
                        }),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// For each `p`, the products `T_q T_p` for a whole chunk of `q`s are accumulated
/// at once through a column index of the `q`s, so only nonzero products are
/// touched.
fn check_composition<S: Scalar>(
    cache: &mut OpCache<'_, S>,
    opts: &VerifyOptions,
    mode: FormMode,
    base: S,
) -> Result<LawReport, PmapError> {
    let n = cache.builder.algebra().dim();
    let mut report = LawReport::new(opts.tol);
    // Powers of the coefficient base, indexed by exponent.
    let inv_powers: Vec<S> = (0..=opts.k_max + 1).map(|e| base.powi(-(e as i32))).collect();
    let table = cache.table;
    for ((k, l, m), rows) in &table.triples {
        let (k, l, m) = (*k, *l, *m);
        if k + l + m > opts.k_max {
            continue;
        }
        // Each q gets a power-of-two segment of the scratch buffer.
        let shift = scratch_len(n, k + m)?.next_power_of_two().trailing_zeros();
        let ops_p = cache.get(k, l);
        let ops_q = cache.get(l, m);
        let ops_r = cache.get(k, m);
        let (np, nq) = (ops_p.len(), ops_q.len());
        let cols = ipow(n, k);
        let chunk = (CHUNK_LIMIT >> shift).clamp(1, nq);
        let mut worst_triple: Option<(f64, (usize, usize))> = None;
        for q0 in (0..nq).step_by(chunk) {
            let q1 = (q0 + chunk).min(nq);
            let index = ColumnIndex::new(&ops_q[q0..q1], ipow(n, l));
            let inv_powers = &inv_powers;
            let worst = (0..np)
                .into_par_iter()
                .map_init(
                    || (Accumulator::<S>::new(), Vec::new(), Vec::new()),
                    |(acc, dense, dev), pi| {
                        let row = &rows[pi * nq + q0..pi * nq + q1];
                        let scale = |e: &(u32, u8, u8)| {
                            inv_powers[match mode {
                                FormMode::DeltaForm => e.1,
                                FormMode::OneForm => e.2,
                            } as usize]
                        };
                        let region = (q1 - q0) << shift;
                        dev.clear();
                        dev.resize(q1 - q0, 0.0f64);
                        if region <= DENSE_LIMIT {
                            dense.clear();
                            dense.resize(region, S::zero());
                            for &(mid, c, a) in &ops_p[pi] {
                                for &(qi, r, b) in index.column(mid) {
                                    dense[((qi as usize) << shift) + r as usize * cols + c as usize] += a * b;
                                }
                            }
                            for (qi, (e, seg)) in row.iter().zip(dense.chunks_exact_mut(1 << shift)).enumerate() {
                                let f = scale(e);
                                seg.iter_mut().for_each(|v| *v *= f);
                                for &(r, c, v) in &ops_r[e.0 as usize] {
                                    seg[r as usize * cols + c as usize] -= v;
                                }
                                dev[qi] = seg.iter().fold(0.0, |d, v| f64::max(d, nan_high(v.abs().to_f64_lossy())));
                            }
                        } else {
                            acc.reset(region);
                            for &(mid, c, a) in &ops_p[pi] {
                                for &(qi, r, b) in index.column(mid) {
                                    let slot = ((qi as usize) << shift) + r as usize * cols + c as usize;
                                    acc.add(slot, a * b * scale(&row[qi as usize]));
                                }
                            }
                            for (qi, e) in row.iter().enumerate() {
                                for &(r, c, v) in &ops_r[e.0 as usize] {
                                    acc.add((qi << shift) + r as usize * cols + c as usize, -v);
                                }
                            }
                            acc.for_each_touched_mut(|i, v| {
                                let d = &mut dev[i >> shift];
                                *d = f64::max(*d, nan_high(v.abs().to_f64_lossy()));
                            });
                        }
                        dev.iter().enumerate().fold(None, |w, (qi, &d)| pick_worse(w, Some((d, (pi, q0 + qi)))))
                    },
                )
                .reduce(|| None, pick_worse);
            worst_triple = pick_worse(worst_triple, worst);
        }
        let parts_p = table.shape(k, l);
        let parts_q = table.shape(l, m);
        report.absorb(
            rows.len(),
            worst_triple.map(|(d, (pi, qi))| {
                let (_, cy, cb) = rows[pi * nq + qi];
                (d, format!("p={} in NC({k},{l}), q={} in NC({l},{m}), cy={cy}, cb={cb}", parts_p[pi], parts_q[qi]))
            }),
        );
    }
    Ok(report)
}
