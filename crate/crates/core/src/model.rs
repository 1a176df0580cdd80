//! Domain model: weighted planar point sets in rank space, coverage
//! semantics, direct evaluation of box placements, and geometric
//! realization of combinatorial witnesses.
//!
//! All solver combinatorics run on x-ranks and y-ranks; raw coordinates
//! matter only here, when a witness is turned back into boxes or when a
//! placement is scored directly against the points.

use crate::cases::ActivationCase;
use std::error::Error;
use std::fmt;

/// A planar point with a signed weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedPoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

/// Coverage semantics for a set of boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverageMode {
    /// Points contained in an odd number of boxes.
    SymmetricDifference,
    /// Points contained in at least one box.
    Union,
    /// Coverage defined by a sector-activation matrix; not directly
    /// evaluable against boxes (see [`matrix_objective`]).
    SingleMatrix,
}

impl CoverageMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverageMode::SymmetricDifference => "symdiff",
            CoverageMode::Union => "union",
            CoverageMode::SingleMatrix => "single-matrix",
        }
    }
}

impl fmt::Display for CoverageMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CoverageMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symdiff" => Ok(CoverageMode::SymmetricDifference),
            "union" => Ok(CoverageMode::Union),
            "single-matrix" => Ok(CoverageMode::SingleMatrix),
            other => Err(format!("unknown coverage mode: {other}")),
        }
    }
}

/// Validation failure for raw input points.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceError {
    /// Two points share an x coordinate.
    DuplicateX(f64),
    /// Two points share a y coordinate.
    DuplicateY(f64),
    /// A coordinate or weight is NaN or infinite.
    NonFinite { index: usize },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::DuplicateX(x) => write!(f, "two points share x = {x}"),
            InstanceError::DuplicateY(y) => write!(f, "two points share y = {y}"),
            InstanceError::NonFinite { index } => {
                write!(f, "point {index} has a NaN or infinite component")
            }
        }
    }
}

impl Error for InstanceError {}

/// Errors from rank-space witness handling and direct evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    GapsNotSorted,
    GapOutOfRange {
        gap: u32,
        n: usize,
    },
    BoundsNotSorted,
    BoundOutOfRange {
        bound: u32,
        n: usize,
    },
    WitnessLengthMismatch {
        expected: usize,
        got: usize,
    },
    SectorIntervalOutOfRange {
        lo: usize,
        hi: usize,
        m: usize,
    },
    PointIndexOutOfRange {
        index: usize,
        n: usize,
    },
    /// `SingleMatrix` placements carry no box list to evaluate.
    MatrixModeNotDirect,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::GapsNotSorted => write!(f, "gap tuple is not nondecreasing"),
            ModelError::GapOutOfRange { gap, n } => {
                write!(f, "gap index {gap} outside 0..={n}")
            }
            ModelError::BoundsNotSorted => write!(f, "boundary tuple is not nondecreasing"),
            ModelError::BoundOutOfRange { bound, n } => {
                write!(f, "boundary index {bound} outside 0..={n}")
            }
            ModelError::WitnessLengthMismatch { expected, got } => {
                write!(f, "witness tuple has length {got}, expected {expected}")
            }
            ModelError::SectorIntervalOutOfRange { lo, hi, m } => {
                write!(f, "sector interval [{lo}, {hi}] outside 1..={m}")
            }
            ModelError::PointIndexOutOfRange { index, n } => {
                write!(f, "point index {index} outside instance of size {n}")
            }
            ModelError::MatrixModeNotDirect => {
                write!(f, "single-matrix placements are not evaluable from boxes")
            }
        }
    }
}

impl Error for ModelError {}

/// A validated point set in general position, sorted by x, with y-rank
/// index structures. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    points: Vec<WeightedPoint>,
    /// y_rank[i] is the 1-based rank of points[i] by decreasing y
    /// (rank 1 = topmost).
    y_rank: Vec<u32>,
    /// by_y_rank[r - 1] is the index into `points` of the point with
    /// y-rank r.
    by_y_rank: Vec<u32>,
    /// y coordinates sorted decreasing; ys_desc[r - 1] is the y of rank r.
    ys_desc: Vec<f64>,
}

/// Validates raw `(x, y, w)` triples into an [`Instance`].
///
/// Points are sorted by increasing x and assigned y-ranks by decreasing y.
/// Duplicate coordinates are rejected rather than perturbed; the empty
/// input is valid.
pub fn validate_instance(raw: &[(f64, f64, f64)]) -> Result<Instance, InstanceError> {
    for (i, &(x, y, w)) in raw.iter().enumerate() {
        if !(x.is_finite() && y.is_finite() && w.is_finite()) {
            return Err(InstanceError::NonFinite { index: i });
        }
    }
    let mut points: Vec<WeightedPoint> = raw
        .iter()
        .map(|&(x, y, w)| WeightedPoint { x, y, w })
        .collect();
    points.sort_by(|a, b| a.x.total_cmp(&b.x));
    for pair in points.windows(2) {
        if pair[0].x == pair[1].x {
            return Err(InstanceError::DuplicateX(pair[0].x));
        }
    }

    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[b].y.total_cmp(&points[a].y));
    for pair in order.windows(2) {
        if points[pair[0]].y == points[pair[1]].y {
            return Err(InstanceError::DuplicateY(points[pair[0]].y));
        }
    }

    let mut y_rank = vec![0u32; n];
    let mut by_y_rank = vec![0u32; n];
    let mut ys_desc = vec![0f64; n];
    for (r, &i) in order.iter().enumerate() {
        y_rank[i] = (r + 1) as u32;
        by_y_rank[r] = i as u32;
        ys_desc[r] = points[i].y;
    }
    Ok(Instance {
        points,
        y_rank,
        by_y_rank,
        ys_desc,
    })
}

impl Instance {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in increasing-x order.
    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    /// 1-based y-rank (rank 1 = topmost) of the point at x-position `index`.
    pub fn y_rank(&self, index: usize) -> u32 {
        self.y_rank[index]
    }

    /// Index (into x order) of the point with the given 1-based y-rank.
    pub fn index_of_y_rank(&self, rank: u32) -> usize {
        self.by_y_rank[rank as usize - 1] as usize
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.w).sum()
    }

    pub fn total_abs_weight(&self) -> f64 {
        self.points.iter().map(|p| p.w.abs()).sum()
    }

    /// Vertical separator for x-rank gap `b`: the midpoint between the x
    /// coordinates of ranks b and b+1, or a sentinel one unit outside the
    /// point set for b = 0 and b = n. Requires a nonempty instance.
    pub fn x_separator(&self, b: u32) -> f64 {
        let n = self.n();
        debug_assert!(n > 0, "separators are undefined for empty instances");
        let b = b as usize;
        if b == 0 {
            self.points[0].x - 1.0
        } else if b >= n {
            self.points[n - 1].x + 1.0
        } else {
            0.5 * (self.points[b - 1].x + self.points[b].x)
        }
    }

    /// Horizontal separator for y-rank gap `t`: a line strictly below the
    /// t topmost points and strictly above the rest, with sentinels one
    /// unit outside the point set for t = 0 and t = n.
    pub fn y_separator(&self, t: u32) -> f64 {
        let n = self.n();
        debug_assert!(n > 0, "separators are undefined for empty instances");
        let t = t as usize;
        if t == 0 {
            self.ys_desc[0] + 1.0
        } else if t >= n {
            self.ys_desc[n - 1] - 1.0
        } else {
            0.5 * (self.ys_desc[t - 1] + self.ys_desc[t])
        }
    }
}

/// An axis-aligned box. `empty` marks the canonical no-box placement,
/// used when an instance has no points to anchor separator geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisBox {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub empty: bool,
}

impl AxisBox {
    pub const EMPTY: AxisBox = AxisBox {
        x_lo: 0.0,
        x_hi: 0.0,
        y_lo: 0.0,
        y_hi: 0.0,
        empty: true,
    };

    pub fn contains(&self, p: &WeightedPoint) -> bool {
        !self.empty && self.x_lo <= p.x && p.x <= self.x_hi && self.y_lo <= p.y && p.y <= self.y_hi
    }
}

/// A solved placement: objective value plus the full combinatorial
/// witness (case, line gaps, block boundaries) and realized boxes.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub objective: f64,
    pub case_id: String,
    /// Nondecreasing y-rank gap indices of the horizontal lines, top to
    /// bottom (length m + 1 for an m-strip case; 2k for k boxes).
    pub line_gaps: Vec<u32>,
    /// Nondecreasing x-rank boundaries of the blocks (length m + 1).
    pub block_boundaries: Vec<u32>,
    /// Realized boxes; empty for single-matrix cases without a
    /// two-box decomposition.
    pub boxes: Vec<AxisBox>,
    pub mode: CoverageMode,
}

/// Index of the half-open rank cell `(gaps[i-1], gaps[i]]` containing
/// `rank`, or 0 when the rank falls before the first or after the last
/// gap. Shared by horizontal strips (y-ranks) and blocks (x-ranks).
pub fn gap_cell_index(rank: u32, gaps: &[u32]) -> usize {
    if gaps.is_empty() || rank <= gaps[0] || rank > gaps[gaps.len() - 1] {
        return 0;
    }
    for i in 1..gaps.len() {
        if gaps[i - 1] < rank && rank <= gaps[i] {
            return i;
        }
    }
    0
}

fn check_sorted_gaps(gaps: &[u32], n: usize, horizontal: bool) -> Result<(), ModelError> {
    for pair in gaps.windows(2) {
        if pair[0] > pair[1] {
            return Err(if horizontal {
                ModelError::GapsNotSorted
            } else {
                ModelError::BoundsNotSorted
            });
        }
    }
    for &g in gaps {
        if g as usize > n {
            return Err(if horizontal {
                ModelError::GapOutOfRange { gap: g, n }
            } else {
                ModelError::BoundOutOfRange { bound: g, n }
            });
        }
    }
    Ok(())
}

/// Horizontal strip index of a point under the given line gaps.
///
/// A gap index t places a line strictly below the t points of largest y.
/// Returns i >= 1 when the point's y-rank r satisfies
/// `gaps[i-1] < r <= gaps[i]`, and 0 when the point lies above the first
/// or below the last line.
pub fn strip_of(
    instance: &Instance,
    point_index: usize,
    line_gaps: &[u32],
) -> Result<usize, ModelError> {
    if point_index >= instance.n() {
        return Err(ModelError::PointIndexOutOfRange {
            index: point_index,
            n: instance.n(),
        });
    }
    check_sorted_gaps(line_gaps, instance.n(), true)?;
    Ok(gap_cell_index(instance.y_rank(point_index), line_gaps))
}

/// Direct evaluation of a box placement: the total weight of points
/// covered under the given mode. The reference scorer for solver output.
pub fn region_weight(
    instance: &Instance,
    boxes: &[AxisBox],
    mode: CoverageMode,
) -> Result<f64, ModelError> {
    if mode == CoverageMode::SingleMatrix {
        return Err(ModelError::MatrixModeNotDirect);
    }
    let mut total = 0.0;
    for p in instance.points() {
        let hits = boxes.iter().filter(|b| b.contains(p)).count();
        let covered = match mode {
            CoverageMode::SymmetricDifference => hits % 2 == 1,
            CoverageMode::Union => hits >= 1,
            CoverageMode::SingleMatrix => unreachable!(),
        };
        if covered {
            total += p.w;
        }
    }
    Ok(total)
}

/// Evaluates a sector-activation witness directly: each point in strip i
/// and block j contributes `matrix[i-1][j-1] * w`. Points outside all
/// strips or blocks contribute nothing.
pub fn matrix_objective(
    instance: &Instance,
    matrix: &[Vec<f64>],
    line_gaps: &[u32],
    block_boundaries: &[u32],
) -> Result<f64, ModelError> {
    let m = matrix.len();
    check_sorted_gaps(line_gaps, instance.n(), true)?;
    check_sorted_gaps(block_boundaries, instance.n(), false)?;
    let mut total = 0.0;
    for (i, p) in instance.points().iter().enumerate() {
        let strip = gap_cell_index(instance.y_rank(i), line_gaps);
        let block = gap_cell_index((i + 1) as u32, block_boundaries);
        if strip >= 1 && strip <= m && block >= 1 && block <= m {
            total += matrix[strip - 1][block - 1] * p.w;
        }
    }
    Ok(total)
}

/// Realizes the boxes of an activation case from a rank-space witness.
///
/// A box with column interval [c1, c2] and row interval [r1, r2] spans
/// from the separator of `block_boundaries[c1-1]` to that of
/// `block_boundaries[c2]` in x, and from the line gap `line_gaps[r1-1]`
/// down to `line_gaps[r2]` in y. Boxes assigned an empty span are still
/// emitted (they cover no points and leave the objective unchanged); no
/// input point ever lies on a realized edge. For an empty instance the
/// canonical empty box is emitted instead.
pub fn realize_geometry(
    instance: &Instance,
    case: &ActivationCase,
    line_gaps: &[u32],
    block_boundaries: &[u32],
) -> Result<Vec<AxisBox>, ModelError> {
    let n = instance.n();
    let expected = case.m + 1;
    if line_gaps.len() != expected {
        return Err(ModelError::WitnessLengthMismatch {
            expected,
            got: line_gaps.len(),
        });
    }
    if block_boundaries.len() != expected {
        return Err(ModelError::WitnessLengthMismatch {
            expected,
            got: block_boundaries.len(),
        });
    }
    check_sorted_gaps(line_gaps, n, true)?;
    check_sorted_gaps(block_boundaries, n, false)?;
    for rect in &case.decomposition {
        let ok = rect.row_lo >= 1
            && rect.row_lo <= rect.row_hi
            && rect.row_hi <= case.m
            && rect.col_lo >= 1
            && rect.col_lo <= rect.col_hi
            && rect.col_hi <= case.m;
        if !ok {
            return Err(ModelError::SectorIntervalOutOfRange {
                lo: rect.row_lo.min(rect.col_lo),
                hi: rect.row_hi.max(rect.col_hi),
                m: case.m,
            });
        }
    }
    if n == 0 {
        return Ok(vec![AxisBox::EMPTY; case.decomposition.len()]);
    }
    let boxes = case
        .decomposition
        .iter()
        .map(|rect| AxisBox {
            x_lo: instance.x_separator(block_boundaries[rect.col_lo - 1]),
            x_hi: instance.x_separator(block_boundaries[rect.col_hi]),
            y_lo: instance.y_separator(line_gaps[rect.row_hi]),
            y_hi: instance.y_separator(line_gaps[rect.row_lo - 1]),
            empty: false,
        })
        .collect();
    Ok(boxes)
}
