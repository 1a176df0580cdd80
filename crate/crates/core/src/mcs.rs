//! Maximum-consecutive-subsequence tree: a balanced binary tree over a
//! weight sequence supporting O(n) build, O(log n) point update, and
//! O(1) query of the best (possibly empty) block sum with its witness
//! interval.
//!
//! Each node summarizes its span with four values: the span total, the
//! best prefix-anchored block, the best block anywhere, and the best
//! suffix-anchored block, where the empty block always competes. Two
//! adjacent summaries merge in constant time, which is what makes the
//! point update logarithmic.

use std::error::Error;
use std::fmt;

/// Half-open index interval `[start, end)`; `start == end` is the empty
/// block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl Span {
    pub fn empty_at(pos: u32) -> Self {
        Span {
            start: pos,
            end: pos,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Summary of one span of the sequence.
///
/// Invariants: `best >= best_prefix >= 0` and `best >= best_suffix >= 0`;
/// `best_prefix` and `best_suffix` are at least `max(0, total)` since the
/// full span and the empty block are always candidates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McsSummary {
    /// Sum over the whole span.
    pub total: f64,
    /// Best block that is empty or starts at the span's first element.
    pub best_prefix: f64,
    /// Best block anywhere in the span, empty allowed.
    pub best: f64,
    /// Best block that is empty or ends at the span's last element.
    pub best_suffix: f64,
    pub prefix_span: Span,
    pub best_span: Span,
    pub suffix_span: Span,
}

impl McsSummary {
    /// Summary of the single element `weight` at sequence position `pos`.
    /// Only a strictly positive element is worth covering.
    pub fn leaf(weight: f64, pos: u32) -> Self {
        if weight > 0.0 {
            let span = Span {
                start: pos,
                end: pos + 1,
            };
            McsSummary {
                total: weight,
                best_prefix: weight,
                best: weight,
                best_suffix: weight,
                prefix_span: span,
                best_span: span,
                suffix_span: span,
            }
        } else {
            McsSummary {
                total: weight,
                best_prefix: 0.0,
                best: 0.0,
                best_suffix: 0.0,
                prefix_span: Span::empty_at(pos),
                best_span: Span::empty_at(pos),
                suffix_span: Span::empty_at(pos + 1),
            }
        }
    }

    /// Summary of an empty span located at `pos`.
    pub fn empty_at(pos: u32) -> Self {
        McsSummary {
            total: 0.0,
            best_prefix: 0.0,
            best: 0.0,
            best_suffix: 0.0,
            prefix_span: Span::empty_at(pos),
            best_span: Span::empty_at(pos),
            suffix_span: Span::empty_at(pos),
        }
    }

    /// Merges the summaries of two adjacent spans (`left` immediately
    /// before `right`). Ties keep the earlier-listed candidate, so
    /// witnesses are deterministic.
    pub fn merge(left: &Self, right: &Self) -> Self {
        let total = left.total + right.total;

        // best_prefix = max(P_l, total_l + P_r)
        let mut best_prefix = left.best_prefix;
        let mut prefix_span = left.prefix_span;
        let through = left.total + right.best_prefix;
        if through > best_prefix {
            best_prefix = through;
            prefix_span = Span {
                start: left.prefix_span.start,
                end: right.prefix_span.end,
            };
        }

        // best_suffix = max(S_l + total_r, S_r)
        let mut best_suffix = left.best_suffix + right.total;
        let mut suffix_span = Span {
            start: left.suffix_span.start,
            end: right.suffix_span.end,
        };
        if right.best_suffix > best_suffix {
            best_suffix = right.best_suffix;
            suffix_span = right.suffix_span;
        }

        // best = max(M_l, S_l + P_r, M_r)
        let mut best = left.best;
        let mut best_span = left.best_span;
        let crossing = left.best_suffix + right.best_prefix;
        if crossing > best {
            best = crossing;
            best_span = Span {
                start: left.suffix_span.start,
                end: right.prefix_span.end,
            };
        }
        if right.best > best {
            best = right.best;
            best_span = right.best_span;
        }

        McsSummary {
            total,
            best_prefix,
            best,
            best_suffix,
            prefix_span,
            best_span,
            suffix_span,
        }
    }

    #[cfg(test)]
    fn values(&self) -> (f64, f64, f64, f64) {
        (self.total, self.best_prefix, self.best, self.best_suffix)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TreeError {
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
        }
    }
}

impl Error for TreeError {}

/// Array-backed complete binary tree of [`McsSummary`] values, padded to
/// a power of two with zero-weight leaves that act as empty blocks.
#[derive(Clone, Debug)]
pub struct McsTree {
    len: usize,
    leaf_base: usize,
    /// 1-based heap layout: root at 1, children of v at 2v and 2v + 1.
    nodes: Vec<McsSummary>,
    weights: Vec<f64>,
    merges: u64,
}

impl McsTree {
    /// Builds the tree over `weights` in O(n).
    pub fn build(weights: &[f64]) -> Self {
        let len = weights.len();
        let leaf_base = len.next_power_of_two().max(1);
        let mut nodes = vec![McsSummary::empty_at(0); 2 * leaf_base];
        for pos in 0..leaf_base {
            let w = weights.get(pos).copied().unwrap_or(0.0);
            nodes[leaf_base + pos] = McsSummary::leaf(w, pos as u32);
        }
        let mut tree = McsTree {
            len,
            leaf_base,
            nodes,
            weights: weights.to_vec(),
            merges: 0,
        };
        for v in (1..leaf_base).rev() {
            tree.remerge(v);
        }
        tree
    }

    fn remerge(&mut self, v: usize) {
        let merged = McsSummary::merge(&self.nodes[2 * v], &self.nodes[2 * v + 1]);
        self.nodes[v] = merged;
        self.merges += 1;
    }

    /// Replaces the weight at `index` and re-merges its ancestors.
    pub fn update(&mut self, index: usize, weight: f64) -> Result<(), TreeError> {
        if index >= self.len {
            return Err(TreeError::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        self.weights[index] = weight;
        self.nodes[self.leaf_base + index] = McsSummary::leaf(weight, index as u32);
        let mut v = (self.leaf_base + index) / 2;
        while v >= 1 {
            self.remerge(v);
            v /= 2;
        }
        Ok(())
    }

    /// Best (possibly empty) block sum with its witness interval, clamped
    /// to the real sequence (padding contributes nothing).
    pub fn query(&self) -> (f64, Span) {
        let root = &self.nodes[1];
        let span = Span {
            start: root.best_span.start.min(self.len as u32),
            end: root.best_span.end.min(self.len as u32),
        };
        (root.best, span)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn root(&self) -> &McsSummary {
        &self.nodes[1]
    }

    /// All node summaries in heap order (for structural comparisons).
    pub fn nodes(&self) -> &[McsSummary] {
        &self.nodes[1..]
    }

    pub fn merge_count(&self) -> u64 {
        self.merges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: O(n^2) scan over all blocks, empty allowed.
    fn brute_best_block(weights: &[f64]) -> (f64, Span) {
        let mut best = 0.0;
        let mut span = Span::empty_at(0);
        for start in 0..weights.len() {
            let mut sum = 0.0;
            for end in start + 1..=weights.len() {
                sum += weights[end - 1];
                if sum > best {
                    best = sum;
                    span = Span {
                        start: start as u32,
                        end: end as u32,
                    };
                }
            }
        }
        (best, span)
    }

    fn sum_over(weights: &[f64], span: Span) -> f64 {
        weights[span.start as usize..span.end as usize].iter().sum()
    }

    #[test]
    fn merge_positive_then_negative() {
        let left = McsSummary::leaf(1.0, 0);
        let right = McsSummary::leaf(-2.0, 1);
        let merged = McsSummary::merge(&left, &right);
        assert_eq!(merged.values(), (-1.0, 1.0, 1.0, 0.0));
        assert_eq!(merged.best_span, Span { start: 0, end: 1 });
    }

    #[test]
    fn merge_with_empty_span_is_identity_on_values() {
        let a = McsSummary::merge(&McsSummary::leaf(2.0, 0), &McsSummary::leaf(-1.0, 1));
        let merged = McsSummary::merge(&McsSummary::empty_at(0), &a);
        assert_eq!(merged.values(), a.values());
        let merged_right = McsSummary::merge(&a, &McsSummary::empty_at(2));
        assert_eq!(merged_right.values(), a.values());
    }

    #[test]
    fn merge_two_positive_leaves() {
        let merged = McsSummary::merge(&McsSummary::leaf(2.0, 0), &McsSummary::leaf(3.0, 1));
        assert_eq!(merged.values(), (5.0, 5.0, 5.0, 5.0));
    }

    #[test]
    fn build_single_positive_leaf() {
        let tree = McsTree::build(&[5.0]);
        assert_eq!(tree.root().values(), (5.0, 5.0, 5.0, 5.0));
    }

    #[test]
    fn build_all_negative_has_empty_witness() {
        let tree = McsTree::build(&[-1.0, -2.0]);
        let (best, span) = tree.query();
        assert_eq!(best, 0.0);
        assert!(span.is_empty());
    }

    #[test]
    fn build_mixed_covers_all_three() {
        let tree = McsTree::build(&[2.0, -1.0, 3.0]);
        let (best, span) = tree.query();
        assert_eq!(best, 4.0);
        assert_eq!(span, Span { start: 0, end: 3 });
    }

    #[test]
    fn update_examples() {
        let mut tree = McsTree::build(&[1.0, -2.0, 3.0]);
        tree.update(1, 2.0).unwrap();
        assert_eq!(tree.query().0, 6.0);

        let before = tree.nodes().to_vec();
        tree.update(0, 1.0).unwrap();
        assert_eq!(tree.nodes(), &before[..], "no-op update changes nothing");

        let mut single = McsTree::build(&[-5.0]);
        single.update(0, -7.0).unwrap();
        assert_eq!(single.query().0, 0.0);

        assert_eq!(
            single.update(1, 0.0),
            Err(TreeError::IndexOutOfRange { index: 1, len: 1 })
        );
    }

    #[test]
    fn query_examples() {
        assert_eq!(McsTree::build(&[]).query(), (0.0, Span::empty_at(0)));
        let tree = McsTree::build(&[-1.0, 4.0, -1.0]);
        assert_eq!(tree.query(), (4.0, Span { start: 1, end: 2 }));
    }

    #[test]
    fn oracle_equivalence_on_random_sequences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let n = rng.random_range(0..=64);
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(-9i32..=9) as f64).collect();
            let tree = McsTree::build(&weights);
            let (best, span) = tree.query();
            let (expect, _) = brute_best_block(&weights);
            assert_eq!(best, expect, "weights {weights:?}");
            assert_eq!(
                sum_over(&weights, span),
                best,
                "witness must reproduce the value"
            );
        }
    }

    #[test]
    fn updates_match_fresh_build() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut weights: Vec<f64> = (0..37)
            .map(|_| rng.random_range(-9i32..=9) as f64)
            .collect();
        let mut tree = McsTree::build(&weights);
        for _ in 0..500 {
            let i = rng.random_range(0..weights.len());
            let w = rng.random_range(-9i32..=9) as f64;
            weights[i] = w;
            tree.update(i, w).unwrap();
            let fresh = McsTree::build(&weights);
            assert_eq!(tree.nodes(), fresh.nodes());
        }
    }

    proptest! {
        #[test]
        fn merge_is_associative_on_values(
            a in proptest::collection::vec(-9i64..=9, 1..6),
            b in proptest::collection::vec(-9i64..=9, 1..6),
            c in proptest::collection::vec(-9i64..=9, 1..6),
        ) {
            let summarize = |weights: &[i64], offset: u32| {
                let mut iter = weights
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| McsSummary::leaf(w as f64, offset + i as u32));
                let first = iter.next().unwrap();
                iter.fold(first, |acc, leaf| McsSummary::merge(&acc, &leaf))
            };
            let sa = summarize(&a, 0);
            let sb = summarize(&b, a.len() as u32);
            let sc = summarize(&c, (a.len() + b.len()) as u32);
            let left = McsSummary::merge(&McsSummary::merge(&sa, &sb), &sc);
            let right = McsSummary::merge(&sa, &McsSummary::merge(&sb, &sc));
            prop_assert_eq!(left.values(), right.values());
        }

        #[test]
        fn witness_reproduces_best(
            weights in proptest::collection::vec(-9i64..=9, 0..40)
        ) {
            let ws: Vec<f64> = weights.iter().map(|&w| w as f64).collect();
            let tree = McsTree::build(&ws);
            let (best, span) = tree.query();
            prop_assert!(best >= 0.0);
            prop_assert_eq!(sum_over(&ws, span), best);
        }
    }
}
