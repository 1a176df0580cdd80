//! Exhaustive reference solvers, deliberately independent of the tree and
//! sweep code paths.
//!
//! Candidate boxes are rank-space interval pairs: box edges can always be
//! moved to coordinate gaps without changing point membership, so this
//! finite enumeration is complete. Work budgets are explicit so callers
//! (and CI) cannot hang on oversized inputs.

use crate::cases::Shape;
use crate::model::{CoverageMode, Instance};
use std::error::Error;
use std::fmt;

/// Default work budget: the k-box oracle admits roughly n <= 9 for k = 2
/// and n <= 5 for k = 3.
pub const DEFAULT_WORK_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum OracleError {
    /// Estimated work exceeds the budget.
    SizeGuard {
        estimate: u128,
        budget: u64,
    },
    /// Hard cap of the bitmask scorer.
    TooManyPoints {
        n: usize,
        max: usize,
    },
    UnsupportedMode,
    KTooSmall,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::SizeGuard { estimate, budget } => {
                write!(f, "estimated work {estimate} exceeds budget {budget}")
            }
            OracleError::TooManyPoints { n, max } => {
                write!(f, "{n} points exceed the oracle cap of {max}")
            }
            OracleError::UnsupportedMode => {
                write!(
                    f,
                    "oracle scoring requires symmetric-difference or union mode"
                )
            }
            OracleError::KTooSmall => write!(f, "k must be at least 1"),
        }
    }
}

impl Error for OracleError {}

/// Exhaustive 1-D reference: the best split of `rows` (n elements with m
/// column weights each) into m contiguous blocks, over all nondecreasing
/// boundary tuples `0 <= b_0 <= ... <= b_m <= n`. Returns the maximum and
/// the lexicographically smallest maximizing tuple.
pub fn brute_force_1d(m: usize, rows: &[Vec<f64>]) -> Result<(f64, Vec<u32>), OracleError> {
    let n = rows.len();
    let tuples = binomial(n as u64 + m as u64 + 1, m as u64 + 1);
    let estimate = tuples as u128 * (m as u128 + 1);
    if estimate > 50_000_000 {
        return Err(OracleError::SizeGuard {
            estimate,
            budget: 50_000_000,
        });
    }
    // prefix[j][i] = sum of column j over the first i elements
    let mut prefix = vec![vec![0.0f64; n + 1]; m];
    for (j, pref) in prefix.iter_mut().enumerate() {
        for i in 0..n {
            pref[i + 1] = pref[i] + rows[i][j];
        }
    }
    let mut tuple = vec![0u32; m + 1];
    let mut best = f64::NEG_INFINITY;
    let mut best_tuple = vec![0u32; m + 1];
    enumerate_tuples(&mut tuple, 0, 0, n as u32, &mut |t| {
        let mut total = 0.0;
        for j in 1..=m {
            total += prefix[j - 1][t[j] as usize] - prefix[j - 1][t[j - 1] as usize];
        }
        if total > best {
            best = total;
            best_tuple.copy_from_slice(t);
        }
    });
    Ok((best, best_tuple))
}

fn enumerate_tuples(
    tuple: &mut [u32],
    depth: usize,
    low: u32,
    high: u32,
    visit: &mut impl FnMut(&[u32]),
) {
    if depth == tuple.len() {
        visit(tuple);
        return;
    }
    for v in low..=high {
        tuple[depth] = v;
        enumerate_tuples(tuple, depth + 1, v, high, visit);
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u64 = 1;
    for i in 0..k {
        result = result.saturating_mul(n - i) / (i + 1);
    }
    result
}

/// Exhaustive single-box reference over all O(n^4) rank rectangles plus
/// the empty box, via 2-D prefix sums. Guarded at n <= 40.
pub fn brute_force_single_box(instance: &Instance) -> Result<f64, OracleError> {
    let n = instance.n();
    if n > 40 {
        return Err(OracleError::SizeGuard {
            estimate: (n as u128).pow(4),
            budget: 40u64.pow(4),
        });
    }
    // grid[xr][yr] = weight of the point with x-rank xr and y-rank yr
    let mut prefix = vec![vec![0.0f64; n + 1]; n + 1];
    for (i, p) in instance.points().iter().enumerate() {
        prefix[i + 1][instance.y_rank(i) as usize] = p.w;
    }
    for xr in 1..=n {
        for yr in 1..=n {
            prefix[xr][yr] += prefix[xr - 1][yr] + prefix[xr][yr - 1] - prefix[xr - 1][yr - 1];
        }
    }
    let mut best = 0.0f64;
    for x1 in 1..=n {
        for x2 in x1..=n {
            for y1 in 1..=n {
                for y2 in y1..=n {
                    let sum = prefix[x2][y2] - prefix[x1 - 1][y2] - prefix[x2][y1 - 1]
                        + prefix[x1 - 1][y1 - 1];
                    if sum > best {
                        best = sum;
                    }
                }
            }
        }
    }
    Ok(best)
}

const MASK_CAP: usize = 64;

/// Bitmasks of point membership for every distinct rank rectangle,
/// including the empty box.
fn rectangle_masks(instance: &Instance) -> Vec<u64> {
    let n = instance.n();
    // x_masks[a][b]: points with x-rank in (a, b]; same for y.
    let mut x_masks = vec![vec![0u64; n + 1]; n + 1];
    let mut y_masks = vec![vec![0u64; n + 1]; n + 1];
    for a in 0..=n {
        for b in a + 1..=n {
            x_masks[a][b] = x_masks[a][b - 1] | (1u64 << (b - 1));
            let point = instance.index_of_y_rank(b as u32);
            y_masks[a][b] = y_masks[a][b - 1] | (1u64 << point);
        }
    }
    let mut masks = Vec::with_capacity(n * n * (n + 1) * (n + 1) / 4 + 1);
    masks.push(0u64);
    for x1 in 1..=n {
        for &xm in &x_masks[x1 - 1][x1..=n] {
            for y1 in 1..=n {
                for &ym in &y_masks[y1 - 1][y1..=n] {
                    masks.push(xm & ym);
                }
            }
        }
    }
    masks.sort_unstable();
    masks.dedup();
    masks
}

fn mask_weight(mut mask: u64, weights: &[f64]) -> f64 {
    let mut total = 0.0;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        total += weights[i];
        mask &= mask - 1;
    }
    total
}

/// Exhaustive k-box reference: the best total weight over all k-tuples of
/// rank rectangles (empty box included) scored by containment parity
/// (symmetric difference) or any-containment (union).
pub fn brute_force_k_box(
    instance: &Instance,
    k: usize,
    mode: CoverageMode,
) -> Result<f64, OracleError> {
    brute_force_k_box_with_budget(instance, k, mode, DEFAULT_WORK_BUDGET)
}

/// [`brute_force_k_box`] with an explicit work budget of
/// `(candidate boxes)^k` tuple evaluations.
pub fn brute_force_k_box_with_budget(
    instance: &Instance,
    k: usize,
    mode: CoverageMode,
    budget: u64,
) -> Result<f64, OracleError> {
    if k < 1 {
        return Err(OracleError::KTooSmall);
    }
    if mode == CoverageMode::SingleMatrix {
        return Err(OracleError::UnsupportedMode);
    }
    let n = instance.n();
    let intervals = (n * (n + 1) / 2) as u128;
    let candidates = intervals * intervals + 1;
    let estimate = candidates.saturating_pow(k as u32);
    if estimate > budget as u128 {
        return Err(OracleError::SizeGuard { estimate, budget });
    }
    if n > MASK_CAP {
        return Err(OracleError::TooManyPoints { n, max: MASK_CAP });
    }
    let weights: Vec<f64> = instance.points().iter().map(|p| p.w).collect();
    let masks = rectangle_masks(instance);

    // The score is symmetric in the boxes, so tuples are enumerated with
    // nondecreasing candidate index.
    struct Search<'a> {
        masks: &'a [u64],
        weights: &'a [f64],
        mode: CoverageMode,
    }

    impl Search<'_> {
        fn run(&self, remaining: usize, first: usize, parity: u64, any: u64, best: &mut f64) {
            if remaining == 0 {
                let covered = match self.mode {
                    CoverageMode::SymmetricDifference => parity,
                    _ => any,
                };
                let score = mask_weight(covered, self.weights);
                if score > *best {
                    *best = score;
                }
                return;
            }
            for (i, &mask) in self.masks.iter().enumerate().skip(first) {
                self.run(remaining - 1, i, parity ^ mask, any | mask, best);
            }
        }
    }

    let mut best = 0.0f64;
    Search {
        masks: &masks,
        weights: &weights,
        mode,
    }
    .run(k, 0, 0, 0, &mut best);
    Ok(best)
}

/// Exhaustive shape reference.
///
/// Annulus: every nested pair of rank rectangles (outer contains inner,
/// inner possibly empty) scored as outer minus the points falling in the
/// hole. Cross: every pair (vertical bar, horizontal bar) whose x-extents
/// nest one way and y-extents the other, scored as the union.
pub fn brute_force_shape(instance: &Instance, shape: Shape) -> Result<f64, OracleError> {
    brute_force_shape_with_budget(instance, shape, DEFAULT_WORK_BUDGET)
}

pub fn brute_force_shape_with_budget(
    instance: &Instance,
    shape: Shape,
    budget: u64,
) -> Result<f64, OracleError> {
    let n = instance.n();
    let intervals = (n * (n + 1) / 2) as u128;
    let rects = intervals * intervals + 1;
    let estimate = rects * rects;
    if estimate > budget as u128 {
        return Err(OracleError::SizeGuard { estimate, budget });
    }
    if n > MASK_CAP {
        return Err(OracleError::TooManyPoints { n, max: MASK_CAP });
    }
    let weights: Vec<f64> = instance.points().iter().map(|p| p.w).collect();
    let mut best = 0.0f64;

    // Rank rectangles as interval pairs ((x1, x2), (y1, y2)), 1-based
    // inclusive; (1, 0) stands for the empty interval.
    let mut rect_list: Vec<RankRect> = vec![((1, 0), (1, 0), 0)];
    rect_list.extend(rectangle_intervals(instance));

    for &(ax, ay, amask) in &rect_list {
        for &(bx, by, bmask) in &rect_list {
            let score = match shape {
                Shape::Annulus => {
                    // b must nest inside a (empty b always nests)
                    if !interval_contains(ax, bx) || !interval_contains(ay, by) {
                        continue;
                    }
                    mask_weight(amask & !bmask, &weights)
                }
                Shape::Cross => {
                    // a is the vertical bar, b the horizontal bar:
                    // a's x-extent inside b's, b's y-extent inside a's.
                    if !interval_contains(bx, ax) || !interval_contains(ay, by) {
                        continue;
                    }
                    mask_weight(amask | bmask, &weights)
                }
            };
            if score > best {
                best = score;
            }
        }
    }
    Ok(best)
}

/// True when interval `inner` lies within `outer` (empty nests anywhere).
fn interval_contains(outer: (usize, usize), inner: (usize, usize)) -> bool {
    inner.0 > inner.1 || (outer.0 <= inner.0 && inner.1 <= outer.1)
}

/// A rank rectangle: x-rank interval, y-rank interval, membership mask.
type RankRect = ((usize, usize), (usize, usize), u64);

fn rectangle_intervals(instance: &Instance) -> Vec<RankRect> {
    let n = instance.n();
    let mut out = Vec::new();
    for x1 in 1..=n {
        for x2 in x1..=n {
            let xmask: u64 = (x1..=x2).fold(0, |acc, r| acc | (1u64 << (r - 1)));
            for y1 in 1..=n {
                for y2 in y1..=n {
                    let ymask: u64 = (y1..=y2).fold(0, |acc, r| {
                        acc | (1u64 << instance.index_of_y_rank(r as u32))
                    });
                    out.push(((x1, x2), (y1, y2), xmask & ymask));
                }
            }
        }
    }
    out
}
