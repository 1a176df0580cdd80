//! Python bindings: validate-and-solve entry points for the box-coverage
//! solvers plus the exhaustive oracles, taking plain (x, y, w) tuples.

use boxsweep_core::cases::{self, parse_matrix, Shape};
use boxsweep_core::model::{self, validate_instance, CoverageMode, Instance};
use boxsweep_core::oracle;
use boxsweep_core::solver::{self, SolverConfig};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_instance(points: Vec<(f64, f64, f64)>) -> PyResult<Instance> {
    validate_instance(&points).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_mode(mode: &str) -> PyResult<CoverageMode> {
    match mode {
        "symdiff" => Ok(CoverageMode::SymmetricDifference),
        "union" => Ok(CoverageMode::Union),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'symdiff' or 'union', got {other:?}"
        ))),
    }
}

fn parse_shape(name: &str) -> PyResult<Shape> {
    name.parse().map_err(|e: String| PyValueError::new_err(e))
}

/// A solved placement: objective, winning case, rank-space witness, and
/// realized boxes as (x_lo, x_hi, y_lo, y_hi, empty) tuples.
#[pyclass(get_all, skip_from_py_object)]
#[derive(Clone)]
struct Solution {
    objective: f64,
    case_id: String,
    mode: String,
    line_gaps: Vec<u32>,
    block_boundaries: Vec<u32>,
    boxes: Vec<(f64, f64, f64, f64, bool)>,
}

#[pymethods]
impl Solution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(objective={}, case_id={:?}, mode={:?})",
            self.objective, self.case_id, self.mode
        )
    }
}

impl From<model::Solution> for Solution {
    fn from(s: model::Solution) -> Self {
        Solution {
            objective: s.objective,
            case_id: s.case_id,
            mode: s.mode.as_str().to_string(),
            line_gaps: s.line_gaps,
            block_boundaries: s.block_boundaries,
            boxes: s
                .boxes
                .iter()
                .map(|b| (b.x_lo, b.x_hi, b.y_lo, b.y_hi, b.empty))
                .collect(),
        }
    }
}

/// Best k boxes under symmetric-difference or union coverage.
#[pyfunction]
#[pyo3(signature = (points, k = 2, mode = "symdiff", workers = 1))]
fn solve(points: Vec<(f64, f64, f64)>, k: usize, mode: &str, workers: usize) -> PyResult<Solution> {
    let instance = to_instance(points)?;
    let config = SolverConfig::new(k, parse_mode(mode)?).with_workers(workers);
    solver::solve(&instance, &config)
        .map(Solution::from)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Best single box (classical maximum-weight box).
#[pyfunction]
fn solve_single_box(points: Vec<(f64, f64, f64)>) -> PyResult<Solution> {
    let instance = to_instance(points)?;
    solver::solve_single_box(&instance)
        .map(Solution::from)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Best cross- or annulus-shaped placement.
#[pyfunction]
fn solve_shape(points: Vec<(f64, f64, f64)>, name: &str) -> PyResult<Solution> {
    let instance = to_instance(points)?;
    solver::solve_shape(&instance, parse_shape(name)?)
        .map(Solution::from)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Best placement for an arbitrary m x m activation matrix.
#[pyfunction]
#[pyo3(signature = (points, matrix, workers = 1))]
fn solve_matrix(
    points: Vec<(f64, f64, f64)>,
    matrix: Vec<Vec<f64>>,
    workers: usize,
) -> PyResult<Solution> {
    let instance = to_instance(points)?;
    let text = matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| format!("{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n");
    let case = parse_matrix(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let config = SolverConfig::new(case.m.div_ceil(2), CoverageMode::SingleMatrix)
        .with_cases(vec![case])
        .with_workers(workers);
    solver::solve(&instance, &config)
        .map(Solution::from)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Exhaustive reference objective for k boxes (small instances only).
#[pyfunction]
#[pyo3(signature = (points, k = 2, mode = "symdiff"))]
fn oracle_objective(points: Vec<(f64, f64, f64)>, k: usize, mode: &str) -> PyResult<f64> {
    let instance = to_instance(points)?;
    let value = if mode == "single" {
        oracle::brute_force_single_box(&instance)
    } else {
        oracle::brute_force_k_box(&instance, k, parse_mode(mode)?)
    };
    value.map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Exhaustive reference objective for a cross or annulus.
#[pyfunction]
fn oracle_shape_objective(points: Vec<(f64, f64, f64)>, name: &str) -> PyResult<f64> {
    let instance = to_instance(points)?;
    oracle::brute_force_shape(&instance, parse_shape(name)?)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Total weight of the points covered by boxes (x_lo, x_hi, y_lo, y_hi)
/// under 'symdiff' or 'union'.
#[pyfunction]
fn region_weight(
    points: Vec<(f64, f64, f64)>,
    boxes: Vec<(f64, f64, f64, f64)>,
    mode: &str,
) -> PyResult<f64> {
    let instance = to_instance(points)?;
    let boxes: Vec<model::AxisBox> = boxes
        .into_iter()
        .map(|(x_lo, x_hi, y_lo, y_hi)| model::AxisBox {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            empty: false,
        })
        .collect();
    model::region_weight(&instance, &boxes, parse_mode(mode)?)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// The activation cases for k boxes as (id, matrix) pairs.
#[pyfunction]
#[pyo3(signature = (k = 2, mode = "symdiff"))]
fn activation_cases(k: usize, mode: &str) -> PyResult<Vec<(String, Vec<Vec<f64>>)>> {
    let cases = match mode {
        "symdiff" => cases::canonical_symdiff_cases(k),
        "union" => cases::union_cases(k),
        other => {
            return Err(PyValueError::new_err(format!(
                "mode must be 'symdiff' or 'union', got {other:?}"
            )))
        }
    }
    .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(cases.into_iter().map(|c| (c.id, c.matrix)).collect())
}

#[pymodule]
fn boxsweep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_single_box, m)?)?;
    m.add_function(wrap_pyfunction!(solve_shape, m)?)?;
    m.add_function(wrap_pyfunction!(solve_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_objective, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_shape_objective, m)?)?;
    m.add_function(wrap_pyfunction!(region_weight, m)?)?;
    m.add_function(wrap_pyfunction!(activation_cases, m)?)?;
    Ok(())
}
