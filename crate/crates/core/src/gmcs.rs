//! Generalized maximum-consecutive-subsequence tree, parametric in the
//! number of columns m.
//!
//! Each element carries m column weights f_1..f_m; the tree answers the
//! one-dimensional problem of choosing m contiguous (possibly empty)
//! blocks V_1..V_m of the sequence so that the sum of f_j over V_j is
//! maximized. Elements before the first block and after the last belong
//! to no block.
//!
//! Per node the summary stores 1 + 2m + m(m+1)/2 scored values (13 when
//! m = 3):
//!
//! * `best` — the best assignment anywhere in the span, empty allowed;
//! * `anchored_left(s)` — blocks s..m, either all empty or with the
//!   span's first element covered;
//! * `anchored_right(e)` — blocks 1..e, either all empty or with the
//!   span's last element covered;
//! * `spanning(s, e)` — blocks s..e partitioning the whole span, so both
//!   endpoints are covered.
//!
//! Every value keeps the boundary tuple attaining it, so the root yields
//! a full witness without a second descent; sweep drivers that only need
//! values during enumeration can switch witness tracking off per tree and
//! recover the winning tuple with one tracked rebuild at the winning
//! setting. Merging two adjacent spans costs O(m^3); with m = 1 the
//! structure degenerates exactly to [`crate::mcs`].

use smallvec::SmallVec;
use std::error::Error;
use std::fmt;

/// Boundary tuples stay inline for m <= 7 (k <= 4 boxes).
pub type Bounds = SmallVec<[u32; 8]>;

/// Per-element column weights: entry j-1 is the element's contribution
/// when assigned to block j.
pub type ColumnWeights = Vec<f64>;

/// A value together with a view of the boundary tuple attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoredRef<'a> {
    pub value: f64,
    pub bounds: &'a [u32],
}

#[derive(Clone, Debug, PartialEq)]
pub enum GmcsError {
    ZeroColumns,
    ColumnCountMismatch {
        expected: usize,
        got: usize,
    },
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
}

impl fmt::Display for GmcsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GmcsError::ZeroColumns => write!(f, "column count m must be at least 1"),
            GmcsError::ColumnCountMismatch { expected, got } => {
                write!(f, "expected {expected} column weights, got {got}")
            }
            GmcsError::RaggedRow { row, expected, got } => {
                write!(f, "row {row} has {got} entries, expected {expected}")
            }
            GmcsError::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
        }
    }
}

impl Error for GmcsError {}

#[inline]
fn idx_left(s: usize) -> usize {
    s
}

#[inline]
fn idx_right(m: usize, e: usize) -> usize {
    m + e
}

#[inline]
fn idx_span(m: usize, s: usize, e: usize) -> usize {
    debug_assert!(1 <= s && s <= e && e <= m);
    // rows of the triangle: row s starts after (s-1) rows of lengths m, m-1, ...
    2 * m + 1 + (s - 1) * (2 * m - s + 2) / 2 + (e - s)
}

/// Number of scored values stored per node: 1 + 2m + m(m+1)/2.
pub fn summary_value_count(m: usize) -> usize {
    1 + 2 * m + m * (m + 1) / 2
}

/// Number of candidate evaluations one merge performs; O(m^3) with the
/// dominant term m^3/6 from the spanning values.
pub fn merge_candidate_count(m: usize) -> usize {
    let spanning = m * (m + 1) * (m + 2) / 6;
    let left = m + m * (m + 1) / 2;
    let right = left;
    let best = m + 2;
    spanning + left + right + best
}

/// Summary of one span: scored values laid out flat, witnesses in a
/// parallel array (empty when the owning tree has tracking off).
///
/// Layout: index 0 is `best`; 1..=m are `anchored_left(s)`; m+1..=2m are
/// `anchored_right(e)`; the upper triangle of `spanning(s, e)` follows in
/// row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct GNodeSummary {
    m: usize,
    values: Vec<f64>,
    wits: Vec<Bounds>,
}

impl GNodeSummary {
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    fn scored(&self, idx: usize) -> ScoredRef<'_> {
        ScoredRef {
            value: self.values[idx],
            bounds: self.wits.get(idx).map(|b| b.as_slice()).unwrap_or(&[]),
        }
    }

    pub fn best(&self) -> ScoredRef<'_> {
        self.scored(0)
    }

    /// Best assignment of blocks s..m anchored at the span's first
    /// element (or all empty). 1 <= s <= m.
    pub fn anchored_left(&self, s: usize) -> ScoredRef<'_> {
        self.scored(idx_left(s))
    }

    /// Best assignment of blocks 1..e anchored at the span's last element
    /// (or all empty). 1 <= e <= m.
    pub fn anchored_right(&self, e: usize) -> ScoredRef<'_> {
        self.scored(idx_right(self.m, e))
    }

    /// Best partition of the whole span into blocks s..e.
    pub fn spanning(&self, s: usize, e: usize) -> ScoredRef<'_> {
        self.scored(idx_span(self.m, s, e))
    }

    /// Raw value array (values-only comparisons for untracked trees).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn with_zeroes(m: usize, track: bool) -> Self {
        GNodeSummary {
            m,
            values: vec![0.0; summary_value_count(m)],
            wits: if track {
                vec![Bounds::new(); summary_value_count(m)]
            } else {
                Vec::new()
            },
        }
    }

    /// Summary of an empty span located at boundary `pos`.
    pub fn empty_span(m: usize, pos: u32) -> Self {
        let mut summary = Self::with_zeroes(m, true);
        summary.wits[0] = std::iter::repeat_n(pos, m + 1).collect();
        for s in 1..=m {
            summary.wits[idx_left(s)] = std::iter::repeat_n(pos, m - s + 2).collect();
        }
        for e in 1..=m {
            summary.wits[idx_right(m, e)] = std::iter::repeat_n(pos, e + 1).collect();
        }
        for s in 1..=m {
            for e in s..=m {
                summary.wits[idx_span(m, s, e)] = std::iter::repeat_n(pos, e - s + 2).collect();
            }
        }
        summary
    }

    /// Summary of the single element at sequence position `pos` with
    /// column weights `f` (length m >= 1).
    ///
    /// The spanning values must place the element in exactly one column of
    /// their range, so `spanning(s, e) = max of f over [s, e]`; anchored
    /// and best values additionally admit the empty assignment, and only
    /// strictly positive columns are worth covering.
    pub fn leaf(f: &[f64], pos: usize) -> Result<Self, GmcsError> {
        let m = f.len();
        if m == 0 {
            return Err(GmcsError::ZeroColumns);
        }
        let mut summary = Self::with_zeroes(m, true);
        summary.fill_leaf(f, pos as u32, true);
        Ok(summary)
    }

    /// Writes the step witness (entries `lo` up to column `split`, then
    /// `lo + 1`) for the index range `from_idx..=to_idx` of the boundary
    /// tuple. `split == usize::MAX` means "never step" (empty, all lo);
    /// `split == 0` means all hi.
    fn write_step(bounds: &mut Bounds, from_idx: usize, to_idx: usize, split: usize, lo: u32) {
        bounds.clear();
        for idx in from_idx..=to_idx {
            bounds.push(if split != usize::MAX && idx >= split {
                lo + 1
            } else {
                lo
            });
        }
    }

    /// Values-only leaf fill, mirroring [`Self::fill_leaf`].
    fn fill_leaf_values(&mut self, f: &[f64]) {
        let m = self.m;
        debug_assert_eq!(f.len(), m);
        for s in 1..=m {
            let mut best = f64::NEG_INFINITY;
            for e in s..=m {
                best = best.max(f[e - 1]);
                self.values[idx_span(m, s, e)] = best;
            }
        }
        let mut best = 0.0f64;
        for s in (1..=m).rev() {
            best = best.max(f[s - 1]);
            self.values[idx_left(s)] = best;
        }
        let mut best = 0.0f64;
        for e in 1..=m {
            best = best.max(f[e - 1]);
            self.values[idx_right(m, e)] = best;
        }
        self.values[0] = best.max(0.0);
    }

    fn fill_leaf(&mut self, f: &[f64], pos: u32, track: bool) {
        if !track {
            return self.fill_leaf_values(f);
        }
        debug_assert!(!self.wits.is_empty());
        let m = self.m;
        debug_assert_eq!(f.len(), m);
        // spanning(s, e): pick the best column in [s, e], smallest on ties.
        for s in 1..=m {
            let mut best = f[s - 1];
            let mut arg = s;
            for e in s..=m {
                if f[e - 1] > best {
                    best = f[e - 1];
                    arg = e;
                }
                let idx = idx_span(m, s, e);
                self.values[idx] = best;
                Self::write_step(&mut self.wits[idx], s - 1, e, arg, pos);
            }
        }
        // anchored_left(s): best column in [s, m] if positive, else empty.
        // Scanning s downward keeps the suffix maximum incremental.
        let mut best = 0.0f64;
        let mut arg = usize::MAX;
        for s in (1..=m).rev() {
            if f[s - 1] > best {
                best = f[s - 1];
                arg = s;
            }
            let idx = idx_left(s);
            self.values[idx] = best;
            Self::write_step(&mut self.wits[idx], s - 1, m, arg, pos);
        }
        // anchored_right(e): best column in [1, e] if positive, else empty
        // (empty means all boundaries at the right edge).
        let mut best = 0.0f64;
        let mut arg = 0usize; // all-hi when nothing positive
        for e in 1..=m {
            if f[e - 1] > best {
                best = f[e - 1];
                arg = e;
            }
            let idx = idx_right(m, e);
            self.values[idx] = best;
            Self::write_step(&mut self.wits[idx], 0, e, arg, pos);
        }
        // best: any positive column, else empty.
        let mut best = 0.0f64;
        let mut arg = usize::MAX;
        for j in 1..=m {
            if f[j - 1] > best {
                best = f[j - 1];
                arg = j;
            }
        }
        self.values[0] = best;
        Self::write_step(&mut self.wits[0], 0, m, arg, pos);
    }

    /// Merges two adjacent spans. Errors when the column counts differ.
    pub fn merge(left: &Self, right: &Self) -> Result<Self, GmcsError> {
        if left.m != right.m {
            return Err(GmcsError::ColumnCountMismatch {
                expected: left.m,
                got: right.m,
            });
        }
        let track = !left.wits.is_empty() && !right.wits.is_empty();
        let mut out = Self::with_zeroes(left.m, track);
        out.fill_merge(left, right, track);
        Ok(out)
    }

    /// Joins the witness of a left value (ending at the split) with the
    /// witness of a right value (starting at the split): the split
    /// boundary appears once.
    fn join(bounds: &mut Bounds, left: &Bounds, right: &Bounds) {
        bounds.clear();
        bounds.extend_from_slice(&left[..left.len() - 1]);
        bounds.extend_from_slice(&right[1..]);
    }

    /// Values-only merge: the same recurrences as [`Self::fill_merge`]
    /// without argmax bookkeeping, so the inner maxes compile branchless.
    fn fill_merge_values(&mut self, left: &Self, right: &Self) {
        let m = self.m;
        debug_assert_eq!(left.m, m);
        debug_assert_eq!(right.m, m);
        let lv = |i: usize| -> f64 {
            debug_assert!(i < left.values.len());
            unsafe { *left.values.get_unchecked(i) }
        };
        let rv = |i: usize| -> f64 {
            debug_assert!(i < right.values.len());
            unsafe { *right.values.get_unchecked(i) }
        };
        for s in 1..=m {
            for e in s..=m {
                let mut best = f64::NEG_INFINITY;
                for i in s..=e {
                    best = best.max(lv(idx_span(m, s, i)) + rv(idx_span(m, i, e)));
                }
                self.values[idx_span(m, s, e)] = best;
            }
        }
        for s in 1..=m {
            let mut best = lv(idx_left(s));
            for i in s..=m {
                best = best.max(lv(idx_span(m, s, i)) + rv(idx_left(i)));
            }
            self.values[idx_left(s)] = best;
        }
        for e in 1..=m {
            let mut best = rv(idx_right(m, e));
            for i in 1..=e {
                best = best.max(lv(idx_right(m, i)) + rv(idx_span(m, i, e)));
            }
            self.values[idx_right(m, e)] = best;
        }
        let mut best = lv(0).max(rv(0));
        for i in 1..=m {
            best = best.max(lv(idx_right(m, i)) + rv(idx_left(i)));
        }
        self.values[0] = best;
    }

    /// Recomputes this summary as the merge of `left` and `right`.
    /// Candidates are scanned in a fixed order (own value first where the
    /// recurrences list it first, boundary column ascending), and only a
    /// strictly larger value replaces the current one, which pins the
    /// witness deterministically. With m = 1 this reproduces
    /// [`crate::mcs::McsSummary::merge`] bit for bit.
    fn fill_merge(&mut self, left: &Self, right: &Self, track: bool) {
        if !track {
            return self.fill_merge_values(left, right);
        }
        debug_assert!(!self.wits.is_empty());
        let m = self.m;
        debug_assert_eq!(left.m, m);
        debug_assert_eq!(right.m, m);
        // Index helpers stay within summary_value_count(m) for 1 <= s <=
        // e <= m, so the candidate loops skip bounds checks.
        let lv = |i: usize| -> f64 {
            debug_assert!(i < left.values.len());
            unsafe { *left.values.get_unchecked(i) }
        };
        let rv = |i: usize| -> f64 {
            debug_assert!(i < right.values.len());
            unsafe { *right.values.get_unchecked(i) }
        };

        // spanning(s, e) = max over i in [s, e] of
        //   left.spanning(s, i) + right.spanning(i, e)
        for s in 1..=m {
            for e in s..=m {
                let mut best_val = f64::NEG_INFINITY;
                let mut best_i = s;
                for i in s..=e {
                    let v = lv(idx_span(m, s, i)) + rv(idx_span(m, i, e));
                    if v > best_val {
                        best_val = v;
                        best_i = i;
                    }
                }
                let idx = idx_span(m, s, e);
                self.values[idx] = best_val;
                Self::join(
                    &mut self.wits[idx],
                    &left.wits[idx_span(m, s, best_i)],
                    &right.wits[idx_span(m, best_i, e)],
                );
            }
        }

        // anchored_left(s) = max(left.anchored_left(s),
        //   max over i of left.spanning(s, i) + right.anchored_left(i))
        for s in 1..=m {
            let mut best_val = lv(idx_left(s));
            let mut best_i = usize::MAX;
            for i in s..=m {
                let v = lv(idx_span(m, s, i)) + rv(idx_left(i));
                if v > best_val {
                    best_val = v;
                    best_i = i;
                }
            }
            let idx = idx_left(s);
            self.values[idx] = best_val;
            if best_i == usize::MAX {
                self.wits[idx].clone_from(&left.wits[idx_left(s)]);
            } else {
                Self::join(
                    &mut self.wits[idx],
                    &left.wits[idx_span(m, s, best_i)],
                    &right.wits[idx_left(best_i)],
                );
            }
        }

        // anchored_right(e) = max(max over i of
        //   left.anchored_right(i) + right.spanning(i, e), right.anchored_right(e))
        for e in 1..=m {
            let mut best_val = f64::NEG_INFINITY;
            let mut best_i = usize::MAX;
            for i in 1..=e {
                let v = lv(idx_right(m, i)) + rv(idx_span(m, i, e));
                if v > best_val {
                    best_val = v;
                    best_i = i;
                }
            }
            if rv(idx_right(m, e)) > best_val {
                best_val = rv(idx_right(m, e));
                best_i = usize::MAX;
            }
            let idx = idx_right(m, e);
            self.values[idx] = best_val;
            if best_i == usize::MAX {
                self.wits[idx].clone_from(&right.wits[idx_right(m, e)]);
            } else {
                Self::join(
                    &mut self.wits[idx],
                    &left.wits[idx_right(m, best_i)],
                    &right.wits[idx_span(m, best_i, e)],
                );
            }
        }

        // best = max(left.best,
        //   max over i of left.anchored_right(i) + right.anchored_left(i),
        //   right.best)
        let mut best_val = lv(0);
        let mut best_i = usize::MAX;
        let mut from_right = false;
        for i in 1..=m {
            let v = lv(idx_right(m, i)) + rv(idx_left(i));
            if v > best_val {
                best_val = v;
                best_i = i;
            }
        }
        if rv(0) > best_val {
            best_val = rv(0);
            from_right = true;
        }
        self.values[0] = best_val;
        if from_right {
            self.wits[0].clone_from(&right.wits[0]);
        } else if best_i == usize::MAX {
            self.wits[0].clone_from(&left.wits[0]);
        } else {
            Self::join(
                &mut self.wits[0],
                &left.wits[idx_right(m, best_i)],
                &right.wits[idx_left(best_i)],
            );
        }
    }
}

/// Array-backed complete binary tree of [`GNodeSummary`] values with the
/// current leaf column weights, padded to a power of two with zero-weight
/// leaves.
#[derive(Clone, Debug)]
pub struct GMcsTree {
    n: usize,
    m: usize,
    leaf_base: usize,
    track: bool,
    /// 1-based heap layout, like [`crate::mcs::McsTree`].
    nodes: Vec<GNodeSummary>,
    /// Internal nodes with at least one real (non-padding) descendant, in
    /// the bottom-up order a rebuild must visit; padding-only subtrees
    /// never change after construction.
    live_internal: Vec<u32>,
    /// Flat n x m column weights, row-major.
    columns: Vec<f64>,
    merges: u64,
}

impl GMcsTree {
    fn zeroed_inner(n: usize, m: usize, track: bool) -> Result<Self, GmcsError> {
        if m == 0 {
            return Err(GmcsError::ZeroColumns);
        }
        let leaf_base = n.next_power_of_two().max(1);
        let mut nodes = vec![GNodeSummary::with_zeroes(m, track); 2 * leaf_base];
        let zero_row = vec![0.0; m];
        for pos in 0..leaf_base {
            nodes[leaf_base + pos].fill_leaf(&zero_row, pos as u32, track);
        }
        let mut live = vec![false; 2 * leaf_base];
        for pos in 0..n.min(leaf_base) {
            live[leaf_base + pos] = true;
        }
        live[leaf_base] = true; // the root chain stays live even for n = 0
        let mut live_internal = Vec::new();
        for v in (1..leaf_base).rev() {
            live[v] = live[2 * v] || live[2 * v + 1];
            if live[v] {
                live_internal.push(v as u32);
            }
        }
        let mut tree = GMcsTree {
            n,
            m,
            leaf_base,
            track,
            nodes,
            live_internal,
            columns: vec![0.0; n * m],
            merges: 0,
        };
        // one full pull-up so padding-only internals are consistent too
        for v in (1..leaf_base).rev() {
            tree.remerge(v);
        }
        tree.merges = 0;
        Ok(tree)
    }

    /// Tree over `n` elements with all-zero column weights and witness
    /// tracking on.
    pub fn zeroed(n: usize, m: usize) -> Result<Self, GmcsError> {
        Self::zeroed_inner(n, m, true)
    }

    /// Values-only variant for enumeration-heavy drivers: roughly twice as
    /// fast, but queried witnesses are empty. Recover the winning tuple
    /// with a tracked rebuild at the winning setting.
    pub fn zeroed_untracked(n: usize, m: usize) -> Result<Self, GmcsError> {
        Self::zeroed_inner(n, m, false)
    }

    /// Builds a tracked tree from per-element column weight rows.
    pub fn build(m: usize, rows: &[ColumnWeights]) -> Result<Self, GmcsError> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(GmcsError::RaggedRow {
                    row: i,
                    expected: m,
                    got: row.len(),
                });
            }
        }
        let mut tree = Self::zeroed(rows.len(), m)?;
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        tree.rebuild_from_flat(&flat);
        Ok(tree)
    }

    fn remerge(&mut self, v: usize) {
        let track = self.track;
        let (head, tail) = self.nodes.split_at_mut(2 * v);
        let (left, right) = (&tail[0], &tail[1]);
        head[v].fill_merge(left, right, track);
        self.merges += 1;
    }

    /// Replaces every leaf row from a flat n x m matrix and recomputes the
    /// live internal nodes; O(n) merges. The hot path of the sweep solver.
    pub fn rebuild_from_flat(&mut self, flat: &[f64]) {
        debug_assert_eq!(flat.len(), self.n * self.m);
        self.columns.copy_from_slice(flat);
        let track = self.track;
        for pos in 0..self.n {
            let row = &flat[pos * self.m..(pos + 1) * self.m];
            self.nodes[self.leaf_base + pos].fill_leaf(row, pos as u32, track);
        }
        let live = std::mem::take(&mut self.live_internal);
        for &v in &live {
            self.remerge(v as usize);
        }
        self.live_internal = live;
    }

    /// Replaces one element's column weights and re-merges its ancestors;
    /// O(log n) merges.
    pub fn update(&mut self, index: usize, f: &[f64]) -> Result<(), GmcsError> {
        if index >= self.n {
            return Err(GmcsError::IndexOutOfRange { index, len: self.n });
        }
        if f.len() != self.m {
            return Err(GmcsError::ColumnCountMismatch {
                expected: self.m,
                got: f.len(),
            });
        }
        self.columns[index * self.m..(index + 1) * self.m].copy_from_slice(f);
        let track = self.track;
        self.nodes[self.leaf_base + index].fill_leaf(f, index as u32, track);
        let mut v = (self.leaf_base + index) / 2;
        while v >= 1 {
            self.remerge(v);
            v /= 2;
        }
        Ok(())
    }

    /// The optimum over all boundary tuples together with a maximizing
    /// tuple `b_0 <= ... <= b_m` (block j covers elements with index in
    /// `[b_{j-1}, b_j)`), clamped to the real sequence. The tuple is empty
    /// on untracked trees.
    pub fn query(&self) -> (f64, Vec<u32>) {
        let root = self.root();
        let best = root.best();
        let bounds = best.bounds.iter().map(|&b| b.min(self.n as u32)).collect();
        (best.value, bounds)
    }

    pub fn root(&self) -> &GNodeSummary {
        &self.nodes[1]
    }

    /// All node summaries in heap order (for structural comparisons).
    pub fn nodes(&self) -> &[GNodeSummary] {
        &self.nodes[1..]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tracks_witnesses(&self) -> bool {
        self.track
    }

    pub fn leaf_columns(&self, index: usize) -> &[f64] {
        &self.columns[index * self.m..(index + 1) * self.m]
    }

    pub fn merge_count(&self) -> u64 {
        self.merges
    }

    /// Evaluates a boundary tuple against the current leaf columns.
    pub fn evaluate_bounds(&self, bounds: &[u32]) -> f64 {
        debug_assert_eq!(bounds.len(), self.m + 1);
        let mut total = 0.0;
        for j in 1..=self.m {
            for pos in bounds[j - 1]..bounds[j] {
                total += self.columns[pos as usize * self.m + (j - 1)];
            }
        }
        total
    }
}
