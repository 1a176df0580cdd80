//! The sweep-line optimization driver.
//!
//! For every activation case the solver enumerates all nondecreasing
//! settings of the first m horizontal line gaps (m = 2k - 1), then sweeps
//! the last line downward over the remaining gap positions. The tree over
//! the x-sorted points is rebuilt in O(n) per setting; each sweep step
//! moves exactly one point into the bottom strip and costs O(log n), so
//! the whole run is O(n^{2k} log n) with one tree alive per worker.
//!
//! Work items (case x gap-prefix) are independent; a run with any worker
//! count returns the identical solution because candidates are reduced
//! under a total order: higher objective first, then smallest case id,
//! lexicographically smallest gap tuple, smallest boundary tuple.

use crate::cases::{self, ActivationCase};
use crate::gmcs::GMcsTree;
use crate::model::{
    gap_cell_index, realize_geometry, CoverageMode, Instance, ModelError, Solution,
};
use rayon::prelude::*;
use smallvec::SmallVec;
use std::error::Error;
use std::fmt;
use std::time::Instant;

type GapTuple = SmallVec<[u32; 8]>;

/// The 2k horizontal line positions of one setting, encoded as
/// nondecreasing y-rank gap indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSetting {
    gaps: Vec<u32>,
}

impl LineSetting {
    pub fn new(gaps: Vec<u32>, n: usize) -> Result<Self, ModelError> {
        for pair in gaps.windows(2) {
            if pair[0] > pair[1] {
                return Err(ModelError::GapsNotSorted);
            }
        }
        if let Some(&bad) = gaps.iter().find(|&&g| g as usize > n) {
            return Err(ModelError::GapOutOfRange { gap: bad, n });
        }
        Ok(LineSetting { gaps })
    }

    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }
}

/// Solver configuration. `cases` empty means "the canonical cases for the
/// mode and k"; `workers` must be positive; k > 3 (or a single matrix
/// wider than 5 strips) requires `allow_large_k`.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub k: usize,
    pub mode: CoverageMode,
    pub cases: Vec<ActivationCase>,
    pub workers: usize,
    pub record_all_cases: bool,
    pub allow_large_k: bool,
}

impl SolverConfig {
    pub fn new(k: usize, mode: CoverageMode) -> Self {
        SolverConfig {
            k,
            mode,
            cases: Vec::new(),
            workers: 1,
            record_all_cases: false,
            allow_large_k: false,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_cases(mut self, cases: Vec<ActivationCase>) -> Self {
        self.cases = cases;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveError {
    ZeroWorkers,
    KTooLarge {
        k: usize,
        max: usize,
    },
    NoCases,
    GridMismatch {
        case_id: String,
        expected: usize,
        got: usize,
    },
    CaseRejected {
        case_id: String,
    },
    Geometry(ModelError),
    Cases(cases::CaseError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::ZeroWorkers => write!(f, "worker count must be positive"),
            SolveError::KTooLarge { k, max } => write!(
                f,
                "k = {k} needs O(n^{}) time; pass allow_large_k to run beyond k = {max}",
                2 * k
            ),
            SolveError::NoCases => write!(f, "no activation cases to solve"),
            SolveError::GridMismatch {
                case_id,
                expected,
                got,
            } => {
                write!(f, "case {case_id} has m = {got}, expected {expected}")
            }
            SolveError::CaseRejected { case_id } => {
                write!(f, "case {case_id} fails matrix/decomposition verification")
            }
            SolveError::Geometry(e) => write!(f, "{e}"),
            SolveError::Cases(e) => write!(f, "{e}"),
        }
    }
}

impl Error for SolveError {}

impl From<ModelError> for SolveError {
    fn from(e: ModelError) -> Self {
        SolveError::Geometry(e)
    }
}

impl From<cases::CaseError> for SolveError {
    fn from(e: cases::CaseError) -> Self {
        SolveError::Cases(e)
    }
}

/// Counters for one solve run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolveStats {
    /// Fixed-gap settings processed (tree rebuilds).
    pub work_items: u64,
    /// Sweep steps processed (point updates).
    pub sweep_events: u64,
    pub wall_seconds: f64,
}

/// Best objective seen for one case (populated under `record_all_cases`).
#[derive(Clone, Debug, PartialEq)]
pub struct CaseObjective {
    pub case_id: String,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Solution,
    pub per_case: Vec<CaseObjective>,
    pub stats: SolveStats,
}

/// One candidate optimum with its full witness; ordering is the global
/// tie-break.
#[derive(Clone, Debug)]
struct Candidate {
    objective: f64,
    case_ord: usize,
    gaps: GapTuple,
    bounds: GapTuple,
}

impl Candidate {
    /// True when `self` beats `other` under the total order.
    fn beats(&self, other: &Candidate) -> bool {
        if self.objective != other.objective {
            return self.objective > other.objective;
        }
        let self_key = (self.case_ord, &self.gaps, &self.bounds);
        let other_key = (other.case_ord, &other.gaps, &other.bounds);
        self_key < other_key
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.beats(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Per-worker scratch: the tree plus the flat column-weight buffer. The
/// scan tree skips witness bookkeeping; the winning boundary tuple is
/// recovered afterwards by one tracked rebuild at the winning setting
/// (the swept state and a fresh build agree node for node).
struct Workspace {
    tree: GMcsTree,
    columns: Vec<f64>,
}

impl Workspace {
    fn new(n: usize, m: usize) -> Self {
        Workspace {
            tree: GMcsTree::zeroed_untracked(n, m).expect("m >= 1"),
            columns: vec![0.0; n * m],
        }
    }
}

/// Output of processing one work item.
#[derive(Clone, Debug, Default)]
struct ItemOutcome {
    best: Option<Candidate>,
    per_case_best: Vec<(usize, f64)>,
    settings: u64,
    events: u64,
}

/// Sweeps the last line over `[fixed.last(), n]` for one case and one
/// fixed-gap prefix, reporting the best state. The caller owns the tree
/// workspace; the tree is rebuilt once and then updated one point per
/// step.
fn sweep_one_setting(
    instance: &Instance,
    case: &ActivationCase,
    case_ord: usize,
    fixed: &[u32],
    ws: &mut Workspace,
    best: &mut Option<Candidate>,
    events: &mut u64,
) -> f64 {
    let n = instance.n();
    let m = case.m;
    let t_start = *fixed.last().expect("at least one fixed gap");

    // Initial state: last line coincides with the previous one, so the
    // bottom strip is empty and points below it contribute nothing.
    for (i, p) in instance.points().iter().enumerate() {
        let rank = instance.y_rank(i);
        let strip = if rank <= t_start {
            gap_cell_index(rank, fixed)
        } else {
            0
        };
        let row = &mut ws.columns[i * m..(i + 1) * m];
        if strip == 0 {
            row.fill(0.0);
        } else {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = case.matrix[strip - 1][j] * p.w;
            }
        }
    }
    ws.tree.rebuild_from_flat(&ws.columns);

    let mut case_best = f64::NEG_INFINITY;
    let mut gaps: GapTuple = fixed.iter().copied().collect();
    gaps.push(t_start);
    let last = gaps.len() - 1;

    let mut consider = |tree: &GMcsTree, gaps: &GapTuple, case_best: &mut f64| {
        let value = tree.root().best().value;
        if value > *case_best {
            *case_best = value;
        }
        let replace = match best {
            Some(b) => value > b.objective,
            None => true,
        };
        if replace {
            *best = Some(Candidate {
                objective: value,
                case_ord,
                gaps: gaps.clone(),
                bounds: GapTuple::new(),
            });
        }
    };

    consider(&ws.tree, &gaps, &mut case_best);
    let mut row: SmallVec<[f64; 8]> = SmallVec::new();
    for t in t_start + 1..=n as u32 {
        // The point with y-rank t enters the bottom strip.
        let point = instance.index_of_y_rank(t);
        let w = instance.points()[point].w;
        row.clear();
        row.extend(case.matrix[m - 1].iter().map(|&a| a * w));
        ws.tree
            .update(point, &row)
            .expect("sweep update stays in range");
        *events += 1;
        gaps[last] = t;
        consider(&ws.tree, &gaps, &mut case_best);
    }
    case_best
}

/// Enumerates all nondecreasing completions of `prefix` to length `len`
/// with values in `0..=n`, invoking `visit` on each complete tuple.
fn complete_tuples(prefix: &mut GapTuple, len: usize, n: u32, visit: &mut impl FnMut(&[u32])) {
    if prefix.len() == len {
        visit(prefix);
        return;
    }
    let low = prefix.last().copied().unwrap_or(0);
    for v in low..=n {
        prefix.push(v);
        complete_tuples(prefix, len, n, visit);
        prefix.pop();
    }
}

/// A parallel work item: one case and a short prefix of the fixed gaps.
#[derive(Clone, Debug)]
struct WorkItem {
    case_ord: usize,
    prefix: GapTuple,
}

fn process_item(
    instance: &Instance,
    cases: &[ActivationCase],
    item: &WorkItem,
    fixed_len: usize,
    ws: &mut Workspace,
) -> ItemOutcome {
    let case = &cases[item.case_ord];
    let mut outcome = ItemOutcome::default();
    let mut prefix = item.prefix.clone();
    let mut case_best = f64::NEG_INFINITY;
    let mut best = None;
    let mut events = 0u64;
    let mut settings = 0u64;
    complete_tuples(&mut prefix, fixed_len, instance.n() as u32, &mut |fixed| {
        settings += 1;
        let value = sweep_one_setting(
            instance,
            case,
            item.case_ord,
            fixed,
            ws,
            &mut best,
            &mut events,
        );
        if value > case_best {
            case_best = value;
        }
    });
    outcome.best = best;
    outcome.per_case_best = vec![(item.case_ord, case_best)];
    outcome.settings = settings;
    outcome.events = events;
    outcome
}

fn merge_outcomes(mut a: ItemOutcome, b: ItemOutcome) -> ItemOutcome {
    a.best = better(a.best, b.best);
    a.settings += b.settings;
    a.events += b.events;
    for (case_ord, value) in b.per_case_best {
        match a.per_case_best.iter_mut().find(|(c, _)| *c == case_ord) {
            Some((_, v)) => *v = v.max(value),
            None => a.per_case_best.push((case_ord, value)),
        }
    }
    a
}

const DEFAULT_MAX_K: usize = 3;

/// Default case families stop at k = 3: the configuration count
/// k!((2k-1)!!)^2 reaches 264600 at k = 4 and enumeration is out of
/// scope. `allow_large_k` lifts only the grid-size guard for explicit
/// case lists (wide single matrices).
fn default_cases(k: usize, mode: CoverageMode) -> Result<Vec<ActivationCase>, SolveError> {
    match mode {
        CoverageMode::SymmetricDifference | CoverageMode::Union => {
            if k <= DEFAULT_MAX_K {
                Ok(cases::enumerate_cases(k, mode)?.cases)
            } else {
                Err(SolveError::KTooLarge {
                    k,
                    max: DEFAULT_MAX_K,
                })
            }
        }
        CoverageMode::SingleMatrix => Err(SolveError::NoCases),
    }
}

/// Runs the full optimization and returns the best solution plus stats.
pub fn solve_with_report(
    instance: &Instance,
    config: &SolverConfig,
) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    if config.workers == 0 {
        return Err(SolveError::ZeroWorkers);
    }
    if config.k < 1 {
        return Err(SolveError::Cases(cases::CaseError::KTooSmall));
    }
    let mut case_list = if config.cases.is_empty() {
        default_cases(config.k, config.mode)?
    } else {
        config.cases.clone()
    };
    if case_list.is_empty() {
        return Err(SolveError::NoCases);
    }
    case_list.sort_by(|a, b| a.id.cmp(&b.id));

    // All cases must agree on the grid size; for matrix mode it comes
    // from the matrix itself, otherwise from k.
    let m = match config.mode {
        CoverageMode::SingleMatrix => case_list[0].m,
        _ => 2 * config.k - 1,
    };
    if m == 0 {
        return Err(SolveError::NoCases);
    }
    // Grid size m means m + 1 lines, i.e. O(n^{m+1} log n) work.
    if m > 2 * DEFAULT_MAX_K - 1 && !config.allow_large_k {
        return Err(SolveError::KTooLarge {
            k: m.div_ceil(2),
            max: DEFAULT_MAX_K,
        });
    }
    for case in &case_list {
        if case.m != m {
            return Err(SolveError::GridMismatch {
                case_id: case.id.clone(),
                expected: m,
                got: case.m,
            });
        }
        if !cases::verify_case(case) {
            return Err(SolveError::CaseRejected {
                case_id: case.id.clone(),
            });
        }
    }

    let n = instance.n();
    let fixed_len = m; // lines = m + 1, the last one sweeps
    let prefix_len = fixed_len.min(2);
    let mut items = Vec::new();
    for case_ord in 0..case_list.len() {
        let mut prefix = GapTuple::new();
        complete_tuples(&mut prefix, prefix_len, n as u32, &mut |p| {
            items.push(WorkItem {
                case_ord,
                prefix: p.iter().copied().collect(),
            });
        });
    }

    let outcome = if config.workers == 1 {
        let mut ws = Workspace::new(n, m);
        let mut acc = ItemOutcome::default();
        for item in &items {
            let out = process_item(instance, &case_list, item, fixed_len, &mut ws);
            acc = merge_outcomes(acc, out);
        }
        acc
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .expect("thread pool");
        pool.install(|| {
            items
                .par_iter()
                .map_init(
                    || Workspace::new(n, m),
                    |ws, item| process_item(instance, &case_list, item, fixed_len, ws),
                )
                .reduce(ItemOutcome::default, merge_outcomes)
        })
    };

    let best = outcome.best.expect("at least one setting is always swept");
    let case = &case_list[best.case_ord];
    let setting = LineSetting::new(best.gaps.to_vec(), n)?;
    let line_gaps: Vec<u32> = setting.gaps().to_vec();
    let block_boundaries = recover_bounds(instance, case, &line_gaps, best.objective);
    let boxes = if case.decomposition.is_empty() {
        Vec::new()
    } else {
        realize_geometry(instance, case, &line_gaps, &block_boundaries)?
    };
    let solution = Solution {
        objective: best.objective,
        case_id: case.id.clone(),
        line_gaps,
        block_boundaries,
        boxes,
        mode: config.mode,
    };

    let mut per_case = Vec::new();
    if config.record_all_cases {
        let mut ranked = outcome.per_case_best.clone();
        ranked.sort_by_key(|&(ord, _)| ord);
        per_case = ranked
            .into_iter()
            .map(|(ord, objective)| CaseObjective {
                case_id: case_list[ord].id.clone(),
                objective: objective.max(0.0),
            })
            .collect();
    }

    Ok(SolveReport {
        solution,
        per_case,
        stats: SolveStats {
            work_items: outcome.settings,
            sweep_events: outcome.events,
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Rebuilds a witness-tracking tree at the winning gap tuple and reads
/// the boundary tuple off the root; identical to the swept tree's state
/// by the sweep/rebuild equivalence.
fn recover_bounds(
    instance: &Instance,
    case: &ActivationCase,
    gaps: &[u32],
    objective: f64,
) -> Vec<u32> {
    let m = case.m;
    let rows: Vec<Vec<f64>> = instance
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let strip = gap_cell_index(instance.y_rank(i), gaps);
            match strip {
                0 => vec![0.0; m],
                s => case.matrix[s - 1].iter().map(|&a| a * p.w).collect(),
            }
        })
        .collect();
    let tree = GMcsTree::build(m, &rows).expect("witness recovery tree");
    let (value, bounds) = tree.query();
    debug_assert_eq!(value, objective);
    let _ = objective;
    bounds
}

/// Finds the best placement of k boxes under the configured mode.
pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<Solution, SolveError> {
    Ok(solve_with_report(instance, config)?.solution)
}

/// The k = 1 special case: one box, the classical maximum-weight box.
pub fn solve_single_box(instance: &Instance) -> Result<Solution, SolveError> {
    solve(
        instance,
        &SolverConfig::new(1, CoverageMode::SymmetricDifference),
    )
}

/// Optimizes a built-in shape (cross or annulus) as a single-matrix case;
/// the returned boxes are the shape's natural decomposition (bars for the
/// cross, outer/inner for the annulus).
pub fn solve_shape(instance: &Instance, shape: cases::Shape) -> Result<Solution, SolveError> {
    let case = cases::builtin_case(shape);
    let config = SolverConfig::new(2, CoverageMode::SingleMatrix).with_cases(vec![case]);
    solve(instance, &config)
}
