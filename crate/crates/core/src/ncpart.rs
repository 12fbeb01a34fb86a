//! Noncrossing partitions between two rows of points and their diagram calculus.
//!
//! A partition `p ∈ NC(k, l)` lives on `k` upper and `l` lower points. Points are
//! numbered `1..=k` along the upper row from left to right and `k+1..=k+l` along
//! the lower row from *right to left*, so that reading the indices in order walks
//! once around the boundary of the strip. With this numbering the noncrossing
//! condition is the usual interval condition on `1..=k+l`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on `k + l` for enumeration.
pub const DEFAULT_POINT_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NcError {
    #[error("partition has {points} points, above the enumeration limit of {limit}")]
    SizeLimit { points: usize, limit: usize },
    #[error("arity mismatch: lower row has {lower} points but upper row of the next partition has {upper}")]
    Arity { lower: usize, upper: usize },
    #[error("blocks do not partition 1..={0}")]
    NotAPartition(usize),
    #[error("partition is crossing")]
    Crossing,
    #[error("empty block")]
    EmptyBlock,
    #[error("cannot parse partition: {0}")]
    Parse(String),
}

/// A noncrossing partition of `upper + lower` points, stored in canonical form:
/// each block sorted ascending, blocks sorted by their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NcPartition {
    upper: usize,
    lower: usize,
    blocks: Vec<Vec<usize>>,
}

/// Result of gluing two partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionResult {
    pub result: NcPartition,
    /// Number of blocks lying entirely on the glued row.
    pub central_blocks: usize,
    /// `l + b(qp) + cb(p,q) - b(p) - b(q)`, with `l` the glued-row size.
    pub cycles: usize,
}

impl NcPartition {
    /// Builds and validates a partition from arbitrary block lists.
    pub fn new(upper: usize, lower: usize, blocks: Vec<Vec<usize>>) -> Result<Self, NcError> {
        let n = upper + lower;
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(NcError::EmptyBlock);
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n || seen[x] {
                    return Err(NcError::NotAPartition(n));
                }
                seen[x] = true;
            }
        }
        if seen.iter().skip(1).any(|s| !s) {
            return Err(NcError::NotAPartition(n));
        }
        blocks.sort_unstable();
        let p = Self { upper, lower, blocks };
        if !p.is_noncrossing() {
            return Err(NcError::Crossing);
        }
        Ok(p)
    }

    /// Trusted constructor: blocks must already cover `1..=upper+lower`.
    fn from_blocks_unchecked(upper: usize, lower: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable();
        let p = Self { upper, lower, blocks };
        debug_assert!(p.is_noncrossing());
        p
    }

    /// The partition of zero points.
    pub fn empty() -> Self {
        Self { upper: 0, lower: 0, blocks: Vec::new() }
    }

    /// `k` vertical strings in `NC(k, k)`.
    pub fn identity(k: usize) -> Self {
        let blocks = (1..=k).map(|u| vec![u, 2 * k + 1 - u]).collect();
        Self::from_blocks_unchecked(k, k, blocks)
    }

    /// A single point in its own block, on the lower row: `NC(0, 1)`.
    pub fn unit() -> Self {
        Self::from_blocks_unchecked(0, 1, vec![vec![1]])
    }

    /// All `k + l` points in one block.
    pub fn one_block(upper: usize, lower: usize) -> Self {
        let n = upper + lower;
        if n == 0 {
            return Self::empty();
        }
        Self::from_blocks_unchecked(upper, lower, vec![(1..=n).collect()])
    }

    pub fn upper_count(&self) -> usize {
        self.upper
    }

    pub fn lower_count(&self) -> usize {
        self.lower
    }

    pub fn point_count(&self) -> usize {
        self.upper + self.lower
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `b(p)`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Upper points of a block, left to right (tensor positions `0..k`).
    pub fn block_upper_positions(&self, block: &[usize]) -> Vec<usize> {
        block.iter().filter(|&&x| x <= self.upper).map(|&x| x - 1).collect()
    }

    /// Lower points of a block as picture positions, left to right.
    pub fn block_lower_positions(&self, block: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = block.iter().filter(|&&x| x > self.upper).map(|&x| self.lower_position(x)).collect();
        v.sort_unstable();
        v
    }

    /// Picture position (0 = leftmost) of lower point `x`.
    pub fn lower_position(&self, x: usize) -> usize {
        debug_assert!(x > self.upper && x <= self.upper + self.lower);
        self.upper + self.lower - x
    }

    /// Point index of the lower point drawn at picture position `t`.
    pub fn lower_point_at(&self, t: usize) -> usize {
        self.upper + self.lower - t
    }

    /// Linear-time noncrossing check over the circular point order.
    pub fn is_noncrossing(&self) -> bool {
        let n = self.point_count();
        let mut owner = vec![usize::MAX; n + 1];
        let mut remaining = Vec::with_capacity(self.blocks.len());
        for (bi, b) in self.blocks.iter().enumerate() {
            for &x in b {
                owner[x] = bi;
            }
            remaining.push(b.len());
        }
        let mut opened = vec![false; self.blocks.len()];
        let mut stack: Vec<usize> = Vec::new();
        for &b in owner.iter().skip(1) {
            if b == usize::MAX {
                return false;
            }
            if opened[b] {
                while let Some(&top) = stack.last() {
                    if top == b {
                        break;
                    }
                    if remaining[top] != 0 {
                        return false;
                    }
                    stack.pop();
                }
            } else {
                opened[b] = true;
                stack.push(b);
            }
            remaining[b] -= 1;
        }
        true
    }

    /// Horizontal concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &NcPartition) -> NcPartition {
        let (kp, lp) = (self.upper, self.lower);
        let (kq, lq) = (other.upper, other.lower);
        let k = kp + kq;
        let mut blocks = Vec::with_capacity(self.blocks.len() + other.blocks.len());
        for b in &self.blocks {
            blocks.push(b.iter().map(|&x| if x <= kp { x } else { k + lq + (x - kp) }).collect());
        }
        for b in &other.blocks {
            blocks.push(b.iter().map(|&x| if x <= kq { kp + x } else { k + (x - kq) }).collect());
        }
        Self::from_blocks_unchecked(k, lp + lq, blocks)
    }

    /// Reflection across the horizontal midline; lands in `NC(l, k)`.
    pub fn adjoint(&self) -> NcPartition {
        let (k, l) = (self.upper, self.lower);
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| if x <= k { l + k + 1 - x } else { self.lower_position(x) + 1 }).collect())
            .collect();
        Self::from_blocks_unchecked(l, k, blocks)
    }

    /// Stacks `self` (on top) over `q` (below) and returns `q ∘ self`.
    pub fn then(&self, q: &NcPartition) -> Result<CompositionResult, NcError> {
        compose(q, self)
    }
}

/// Composition `qp`: the lower row of `p` is identified with the upper row of `q`.
pub fn compose(q: &NcPartition, p: &NcPartition) -> Result<CompositionResult, NcError> {
    if p.lower != q.upper {
        return Err(NcError::Arity { lower: p.lower, upper: q.upper });
    }
    let (k, l, m) = (p.upper, p.lower, q.lower);
    // Nodes: p's points 0..k+l, then q's points k+l..k+2l+m.
    let off = k + l;
    let mut uf = UnionFind::new(k + 2 * l + m);
    for b in &p.blocks {
        for w in b.windows(2) {
            uf.union(w[0] - 1, w[1] - 1);
        }
    }
    for b in &q.blocks {
        for w in b.windows(2) {
            uf.union(off + w[0] - 1, off + w[1] - 1);
        }
    }
    for t in 0..l {
        uf.union(p.lower_point_at(t) - 1, off + t);
    }

    let mut root_block: Vec<Option<usize>> = vec![None; k + 2 * l + m];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut place = |node: usize, point: usize, blocks: &mut Vec<Vec<usize>>| {
        let r = uf.find(node);
        match root_block[r] {
            Some(bi) => blocks[bi].push(point),
            None => {
                root_block[r] = Some(blocks.len());
                blocks.push(vec![point]);
            }
        }
    };
    for u in 1..=k {
        place(u - 1, u, &mut blocks);
    }
    for j in 1..=m {
        // q's lower point l+j becomes k+j; both rows are numbered right to left.
        place(off + l + j - 1, k + j, &mut blocks);
    }
    let mut central_roots: Vec<usize> = (0..l).map(|t| uf.find(off + t)).filter(|&r| root_block[r].is_none()).collect();
    central_roots.sort_unstable();
    central_roots.dedup();
    let central_blocks = central_roots.len();

    let result = NcPartition::from_blocks_unchecked(k, m, blocks);
    let cycles = (l + result.block_count() + central_blocks)
        .checked_sub(p.block_count() + q.block_count())
        .expect("cycle count is nonnegative");
    Ok(CompositionResult { result, central_blocks, cycles })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Calls `visit` on every noncrossing partition of `n` circularly ordered points.
///
/// Blocks are grown point by point. Joining point `i` to an open block closes
/// every block opened after it, which is exactly what keeps the result noncrossing.
fn for_each_block_structure(n: usize, visit: &mut dyn FnMut(&[Vec<usize>])) {
    fn rec(
        i: usize,
        n: usize,
        blocks: &mut Vec<Vec<usize>>,
        open: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if i > n {
            visit(blocks);
            return;
        }
        blocks.push(vec![i]);
        open.push(blocks.len() - 1);
        rec(i + 1, n, blocks, open, visit);
        open.pop();
        blocks.pop();

        for d in 0..open.len() {
            let b = open[d];
            let closed = open.split_off(d + 1);
            blocks[b].push(i);
            rec(i + 1, n, blocks, open, visit);
            blocks[b].pop();
            open.extend(closed);
        }
    }
    let mut blocks = Vec::new();
    let mut open = Vec::new();
    rec(1, n, &mut blocks, &mut open, visit);
}

/// Visits every element of `NC(k, l)` without materializing the list.
pub fn for_each_nc(
    upper: usize,
    lower: usize,
    limit: usize,
    mut visit: impl FnMut(NcPartition),
) -> Result<(), NcError> {
    let n = upper + lower;
    if n > limit {
        return Err(NcError::SizeLimit { points: n, limit });
    }
    for_each_block_structure(n, &mut |blocks| {
        visit(NcPartition { upper, lower, blocks: blocks.to_vec() });
    });
    Ok(())
}

/// All of `NC(k, l)` in canonical order, under the default point limit.
pub fn enumerate_nc(upper: usize, lower: usize) -> Result<Vec<NcPartition>, NcError> {
    enumerate_nc_with_limit(upper, lower, DEFAULT_POINT_LIMIT)
}

pub fn enumerate_nc_with_limit(upper: usize, lower: usize, limit: usize) -> Result<Vec<NcPartition>, NcError> {
    let mut out = Vec::new();
    for_each_nc(upper, lower, limit, |p| out.push(p))?;
    out.sort_unstable();
    Ok(out)
}

/// `|NC(k, l)|` by enumeration.
pub fn count_nc(upper: usize, lower: usize, limit: usize) -> Result<u64, NcError> {
    let mut count = 0u64;
    for_each_nc(upper, lower, limit, |_| count += 1)?;
    Ok(count)
}

/// Catalan number `C_n` from the convolution recurrence, `None` on overflow.
pub fn catalan(n: usize) -> Option<u64> {
    let mut c: Vec<u128> = vec![1];
    for i in 1..=n {
        let mut s: u128 = 0;
        for j in 0..i {
            s = s.checked_add(c[j].checked_mul(c[i - 1 - j])?)?;
        }
        c.push(s);
    }
    u64::try_from(c[n]).ok()
}

impl fmt::Display for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Block lists as written in text form, before the row sizes are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockList(pub Vec<Vec<usize>>);

impl FromStr for BlockList {
    type Err = NcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let blocks: Vec<Vec<usize>> = serde_json::from_str(s.trim()).map_err(|e| NcError::Parse(e.to_string()))?;
        Ok(BlockList(blocks))
    }
}

impl NcPartition {
    /// Parses the bracketed text form, e.g. `[[1,3],[2],[4,5]]`.
    pub fn parse(upper: usize, lower: usize, text: &str) -> Result<Self, NcError> {
        let BlockList(blocks) = text.parse()?;
        Self::new(upper, lower, blocks)
    }
}
