//! Sector-activation matrices and their enumeration.
//!
//! A case is an m x m matrix over the (strip, block) grid together with
//! its decomposition into k row-interval x column-interval boxes. For k
//! boxes there are 2k horizontal lines and 2k vertical boundaries; every
//! way of pairing lines into (top, bottom) pairs, pairing boundaries into
//! (left, right) pairs, and matching the two pairings yields one case.
//! That gives k! * ((2k-1)!!)^2 configurations: 18 for k = 2, 1350 for
//! k = 3. Built-in cross and annulus matrices and user-supplied
//! real-valued matrices run through the same solver as single cases.

use crate::model::CoverageMode;
use std::collections::HashSet;
use std::error::Error;
use std::fmt;

/// One box footprint on the m x m sector grid: the sectors
/// `[row_lo..row_hi] x [col_lo..col_hi]` (1-based, inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalRect {
    pub row_lo: usize,
    pub row_hi: usize,
    pub col_lo: usize,
    pub col_hi: usize,
}

/// An activation case: matrix, decomposition, and the coverage mode the
/// matrix was derived under.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivationCase {
    /// Stable identifier, e.g. `sd2-r00-c02-x1`; sorts in enumeration order.
    pub id: String,
    pub m: usize,
    pub matrix: Vec<Vec<f64>>,
    pub decomposition: Vec<IntervalRect>,
    pub mode: CoverageMode,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CaseError {
    KTooSmall,
    /// Case counts grow as k!((2k-1)!!)^2; enumeration beyond k = 3 must
    /// be requested explicitly.
    KTooLarge {
        k: usize,
        max: usize,
    },
}

impl fmt::Display for CaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseError::KTooSmall => write!(f, "k must be at least 1"),
            CaseError::KTooLarge { k, max } => {
                write!(f, "k = {k} exceeds the enumeration guard (max {max})")
            }
        }
    }
}

impl Error for CaseError {}

/// Matrix text parse failure.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixParseError {
    Empty,
    NonSquare { rows: usize, cols: usize },
    BadEntry { row: usize, token: String },
}

impl fmt::Display for MatrixParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixParseError::Empty => write!(f, "matrix text contains no entries"),
            MatrixParseError::NonSquare { rows, cols } => {
                write!(
                    f,
                    "matrix is not square: {rows} rows but a row of {cols} entries"
                )
            }
            MatrixParseError::BadEntry { row, token } => {
                write!(f, "row {row}: cannot parse entry {token:?}")
            }
        }
    }
}

impl Error for MatrixParseError {}

/// Shapes with a built-in single-matrix case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Cross,
    Annulus,
}

impl Shape {
    pub fn as_str(&self) -> &'static str {
        match self {
            Shape::Cross => "cross",
            Shape::Annulus => "annulus",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cross" => Ok(Shape::Cross),
            "annulus" => Ok(Shape::Annulus),
            other => Err(format!("unknown shape: {other}")),
        }
    }
}

const DEFAULT_MAX_K: usize = 3;

/// All pairings of `0..count` into unordered pairs, each pair stored as
/// (smaller, larger) and each pairing sorted by first element. `count`
/// must be even; there are (count - 1)!! pairings.
fn pairings(count: usize) -> Vec<Vec<(usize, usize)>> {
    fn recurse(
        remaining: &[usize],
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if remaining.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = remaining[0];
        for i in 1..remaining.len() {
            let partner = remaining[i];
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&v| v != first && v != partner)
                .collect();
            acc.push((first, partner));
            recurse(&rest, acc, out);
            acc.pop();
        }
    }
    debug_assert!(count.is_multiple_of(2));
    if count == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    recurse(&(0..count).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

/// Permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn recurse(k: usize, acc: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                acc.push(v);
                recurse(k, acc, used, out);
                acc.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    recurse(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// k! * ((2k-1)!!)^2, the number of raw configurations for k boxes.
pub fn configuration_count(k: usize) -> u64 {
    let factorial: u64 = (1..=k as u64).product();
    let double_factorial: u64 = (1..=2 * k as u64).filter(|v| v % 2 == 1).product();
    factorial * double_factorial * double_factorial
}

fn combine_matrix(m: usize, boxes: &[IntervalRect], mode: CoverageMode) -> Vec<Vec<f64>> {
    let mut counts = vec![vec![0usize; m]; m];
    for b in boxes {
        for row in counts.iter_mut().take(b.row_hi).skip(b.row_lo - 1) {
            for cell in row.iter_mut().take(b.col_hi).skip(b.col_lo - 1) {
                *cell += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| {
                    let active = match mode {
                        CoverageMode::SymmetricDifference => c % 2 == 1,
                        CoverageMode::Union => c >= 1,
                        CoverageMode::SingleMatrix => unreachable!(),
                    };
                    if active {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

fn matrix_key(matrix: &[Vec<f64>]) -> String {
    let mut key = String::new();
    for row in matrix {
        for &v in row {
            key.push_str(&format!("{v:?},"));
        }
        key.push(';');
    }
    key
}

fn decomposition_key(decomposition: &[IntervalRect]) -> Vec<IntervalRect> {
    let mut sorted = decomposition.to_vec();
    sorted.sort_unstable();
    sorted
}

/// An enumerated case family plus the raw configuration count observed
/// before deduplication.
#[derive(Clone, Debug)]
pub struct CaseSet {
    pub raw_configurations: usize,
    pub cases: Vec<ActivationCase>,
}

fn digits(value: usize) -> usize {
    value.max(1).to_string().len()
}

/// Enumerates every configuration for k boxes under the given mode.
///
/// Symmetric-difference cases are deduplicated on (matrix, unordered
/// decomposition); union cases on matrix alone, keeping the first
/// decomposition seen. No guard on k; callers guard.
pub fn enumerate_cases(k: usize, mode: CoverageMode) -> Result<CaseSet, CaseError> {
    if k < 1 {
        return Err(CaseError::KTooSmall);
    }
    debug_assert!(matches!(
        mode,
        CoverageMode::SymmetricDifference | CoverageMode::Union
    ));
    let m = 2 * k - 1;
    let prefix = match mode {
        CoverageMode::SymmetricDifference => "sd",
        _ => "un",
    };
    let line_pairings = pairings(2 * k);
    let perms = permutations(k);
    let pad_rc = digits(line_pairings.len() - 1);
    let pad_x = digits(perms.len() - 1);

    let mut raw = 0usize;
    let mut seen: HashSet<String> = HashSet::new();
    let mut cases = Vec::new();
    for (p, horizontal) in line_pairings.iter().enumerate() {
        for (q, vertical) in line_pairings.iter().enumerate() {
            for (b, perm) in perms.iter().enumerate() {
                raw += 1;
                let decomposition: Vec<IntervalRect> = (0..k)
                    .map(|i| {
                        let (top, bottom) = horizontal[i];
                        let (left, right) = vertical[perm[i]];
                        IntervalRect {
                            row_lo: top + 1,
                            row_hi: bottom,
                            col_lo: left + 1,
                            col_hi: right,
                        }
                    })
                    .collect();
                let matrix = combine_matrix(m, &decomposition, mode);
                let key = match mode {
                    CoverageMode::SymmetricDifference => format!(
                        "{}|{:?}",
                        matrix_key(&matrix),
                        decomposition_key(&decomposition)
                    ),
                    _ => matrix_key(&matrix),
                };
                if seen.insert(key) {
                    cases.push(ActivationCase {
                        id: format!("{prefix}{k}-r{p:0pad_rc$}-c{q:0pad_rc$}-x{b:0pad_x$}"),
                        m,
                        matrix,
                        decomposition,
                        mode,
                    });
                }
            }
        }
    }
    Ok(CaseSet {
        raw_configurations: raw,
        cases,
    })
}

fn guarded(k: usize) -> Result<(), CaseError> {
    if k > DEFAULT_MAX_K {
        return Err(CaseError::KTooLarge {
            k,
            max: DEFAULT_MAX_K,
        });
    }
    Ok(())
}

/// The canonical symmetric-difference cases for k boxes: 1 for k = 1,
/// the 18 three-by-three matrices for k = 2, 1350 for k = 3.
pub fn canonical_symdiff_cases(k: usize) -> Result<Vec<ActivationCase>, CaseError> {
    guarded(k)?;
    Ok(enumerate_cases(k, CoverageMode::SymmetricDifference)?.cases)
}

/// Union-mode cases: the same configurations with OR instead of parity,
/// deduplicated at the matrix level.
pub fn union_cases(k: usize) -> Result<Vec<ActivationCase>, CaseError> {
    guarded(k)?;
    Ok(enumerate_cases(k, CoverageMode::Union)?.cases)
}

/// Built-in single-matrix cases for cross- and annulus-shaped regions,
/// each with its natural two-box decomposition (vertical/horizontal bar
/// for the cross, outer/inner box for the annulus).
pub fn builtin_case(shape: Shape) -> ActivationCase {
    match shape {
        Shape::Cross => ActivationCase {
            id: "shape-cross".to_string(),
            m: 3,
            matrix: vec![
                vec![0.0, 1.0, 0.0],
                vec![1.0, 1.0, 1.0],
                vec![0.0, 1.0, 0.0],
            ],
            decomposition: vec![
                IntervalRect {
                    row_lo: 1,
                    row_hi: 3,
                    col_lo: 2,
                    col_hi: 2,
                },
                IntervalRect {
                    row_lo: 2,
                    row_hi: 2,
                    col_lo: 1,
                    col_hi: 3,
                },
            ],
            mode: CoverageMode::SingleMatrix,
        },
        Shape::Annulus => ActivationCase {
            id: "shape-annulus".to_string(),
            m: 3,
            matrix: vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 1.0],
            ],
            decomposition: vec![
                IntervalRect {
                    row_lo: 1,
                    row_hi: 3,
                    col_lo: 1,
                    col_hi: 3,
                },
                IntervalRect {
                    row_lo: 2,
                    row_hi: 2,
                    col_lo: 2,
                    col_hi: 2,
                },
            ],
            mode: CoverageMode::SingleMatrix,
        },
    }
}

/// True when the matrix is exactly reconstructed from the decomposition
/// under the case's combinator. Single-matrix cases with a decomposition
/// pass when either combinator reconstructs them; cases without a
/// decomposition are vacuously consistent. Never panics.
pub fn verify_case(case: &ActivationCase) -> bool {
    if case.matrix.len() != case.m || case.matrix.iter().any(|row| row.len() != case.m) {
        return false;
    }
    for rect in &case.decomposition {
        let ok = rect.row_lo >= 1
            && rect.row_lo <= rect.row_hi
            && rect.row_hi <= case.m
            && rect.col_lo >= 1
            && rect.col_lo <= rect.col_hi
            && rect.col_hi <= case.m;
        if !ok {
            return false;
        }
    }
    let matches =
        |mode: CoverageMode| combine_matrix(case.m, &case.decomposition, mode) == case.matrix;
    match case.mode {
        CoverageMode::SymmetricDifference => matches(CoverageMode::SymmetricDifference),
        CoverageMode::Union => matches(CoverageMode::Union),
        CoverageMode::SingleMatrix => {
            case.decomposition.is_empty()
                || matches(CoverageMode::SymmetricDifference)
                || matches(CoverageMode::Union)
        }
    }
}

/// Parses a square numeric matrix: rows separated by newlines or '/',
/// entries by whitespace or commas. Arbitrary real entries are accepted;
/// the result is a single-matrix case with no decomposition.
pub fn parse_matrix(text: &str) -> Result<ActivationCase, MatrixParseError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, line) in text.split(['\n', '/']).enumerate() {
        let tokens: Vec<&str> = line
            .split([' ', '\t', ','])
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(tokens.len());
        for token in tokens {
            let value: f64 = token.parse().map_err(|_| MatrixParseError::BadEntry {
                row: r + 1,
                token: token.to_string(),
            })?;
            if !value.is_finite() {
                return Err(MatrixParseError::BadEntry {
                    row: r + 1,
                    token: token.to_string(),
                });
            }
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(MatrixParseError::Empty);
    }
    let m = rows.len();
    for row in &rows {
        if row.len() != m {
            return Err(MatrixParseError::NonSquare {
                rows: m,
                cols: row.len(),
            });
        }
    }
    Ok(ActivationCase {
        id: format!("matrix-{m}x{m}"),
        m,
        matrix: rows,
        decomposition: Vec::new(),
        mode: CoverageMode::SingleMatrix,
    })
}
