//! File formats, instance generation, and result verification shared by
//! the command-line tools.
//!
//! Instances are plain text, one `x y w` (or `x, y, w`) triple per line
//! with `#` comments. Results are a single self-describing JSON document
//! so verification needs no side channel.

use crate::cases::ActivationCase;
use crate::model::{
    matrix_objective, region_weight, validate_instance, AxisBox, CoverageMode, Instance, Solution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::error::Error;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq)]
pub enum FormatError {
    Line { line: usize, message: String },
    Json(String),
    UnknownMode(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Line { line, message } => write!(f, "line {line}: {message}"),
            FormatError::Json(message) => write!(f, "result document: {message}"),
            FormatError::UnknownMode(mode) => write!(f, "unknown mode {mode:?}"),
        }
    }
}

impl Error for FormatError {}

/// Parses instance text into raw `(x, y, w)` triples.
pub fn parse_instance_text(text: &str) -> Result<Vec<(f64, f64, f64)>, FormatError> {
    let mut points = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let fields: Vec<&str> = line
            .split([' ', '\t', ','])
            .filter(|f| !f.is_empty())
            .collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 3 {
            return Err(FormatError::Line {
                line: i + 1,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let mut values = [0.0f64; 3];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| FormatError::Line {
                line: i + 1,
                message: format!("cannot parse {field:?} as a number"),
            })?;
        }
        points.push((values[0], values[1], values[2]));
    }
    Ok(points)
}

/// Formats raw triples back into instance text (round-trips through
/// [`parse_instance_text`]).
pub fn format_instance_text(points: &[(f64, f64, f64)], header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    for &(x, y, w) in points {
        out.push_str(&format!("{x:?} {y:?} {w:?}\n"));
    }
    out
}

/// Weight distribution for generated instances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightDist {
    /// Nonzero integers in `[-w, w]`.
    UniformInt { w: u32 },
    /// Magnitude uniform in `1..=w`, positive with probability `p`.
    Mixed { p: f64, w: u32 },
}

impl FromStr for WeightDist {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("uniform-int:") {
            let w: u32 = rest
                .parse()
                .map_err(|_| format!("bad uniform-int bound {rest:?}"))?;
            if w == 0 {
                return Err("uniform-int bound must be positive".to_string());
            }
            return Ok(WeightDist::UniformInt { w });
        }
        if let Some(rest) = s.strip_prefix("mixed:") {
            let (p, w) = rest
                .split_once(',')
                .ok_or_else(|| format!("mixed takes p,W, got {rest:?}"))?;
            let p: f64 = p.parse().map_err(|_| format!("bad probability {p:?}"))?;
            let w: u32 = w.parse().map_err(|_| format!("bad bound {w:?}"))?;
            if !(0.0..=1.0).contains(&p) || w == 0 {
                return Err(format!(
                    "mixed:p,W needs 0 <= p <= 1 and W >= 1, got {rest:?}"
                ));
            }
            return Ok(WeightDist::Mixed { p, w });
        }
        Err(format!("unknown weight distribution {s:?}"))
    }
}

/// Deterministically generates `n` points with pairwise-distinct x and y
/// coordinates (resampling on collision) and weights from `dist`.
pub fn generate_instance(
    n: usize,
    seed: u64,
    dist: WeightDist,
    coord_range: f64,
) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<f64> = Vec::with_capacity(n);
    let mut ys: Vec<f64> = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let x = loop {
            let c = (rng.random::<f64>() * 2.0 - 1.0) * coord_range;
            if !xs.contains(&c) {
                break c;
            }
        };
        let y = loop {
            let c = (rng.random::<f64>() * 2.0 - 1.0) * coord_range;
            if !ys.contains(&c) {
                break c;
            }
        };
        xs.push(x);
        ys.push(y);
        let w = match dist {
            WeightDist::UniformInt { w } => loop {
                let v = rng.random_range(-(w as i64)..=w as i64);
                if v != 0 {
                    break v as f64;
                }
            },
            WeightDist::Mixed { p, w } => {
                let magnitude = rng.random_range(1..=w as i64) as f64;
                if rng.random::<f64>() < p {
                    magnitude
                } else {
                    -magnitude
                }
            }
        };
        points.push((x, y, w));
    }
    points
}

/// Applies the deterministic pre-validation jitter `coord += u * eps`
/// with `u` uniform in (-1, 1) from the seeded generator.
pub fn apply_jitter(points: &mut [(f64, f64, f64)], eps: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in points.iter_mut() {
        p.0 += (rng.random::<f64>() * 2.0 - 1.0) * eps;
        p.1 += (rng.random::<f64>() * 2.0 - 1.0) * eps;
    }
}

/// SHA-256 over the validated instance's canonical text; permutation
/// invariant because validation sorts by x.
pub fn instance_digest(instance: &Instance) -> String {
    let mut hasher = Sha256::new();
    for p in instance.points() {
        hasher.update(format!("{:?},{:?},{:?}\n", p.x, p.y, p.w).as_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One realized box in the result document.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoxReport {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub empty: bool,
    /// Indices (x-sorted order) of the instance points inside this box.
    pub point_indices: Vec<usize>,
}

impl BoxReport {
    pub fn to_axis_box(&self) -> AxisBox {
        AxisBox {
            x_lo: self.x_lo,
            x_hi: self.x_hi,
            y_lo: self.y_lo,
            y_hi: self.y_hi,
            empty: self.empty,
        }
    }
}

/// Self-describing solver output; verification recomputes the objective
/// from these fields alone plus the instance file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResultDocument {
    pub objective: f64,
    pub mode: String,
    pub k: usize,
    pub case_id: String,
    pub matrix: Vec<Vec<f64>>,
    pub line_gaps: Vec<u32>,
    pub block_boundaries: Vec<u32>,
    pub boxes: Vec<BoxReport>,
    pub instance_digest: String,
    pub timing_seconds: f64,
}

pub fn build_result_document(
    instance: &Instance,
    solution: &Solution,
    case: &ActivationCase,
    k: usize,
    timing_seconds: f64,
) -> ResultDocument {
    let boxes = solution
        .boxes
        .iter()
        .map(|b| BoxReport {
            x_lo: b.x_lo,
            x_hi: b.x_hi,
            y_lo: b.y_lo,
            y_hi: b.y_hi,
            empty: b.empty,
            point_indices: instance
                .points()
                .iter()
                .enumerate()
                .filter(|(_, p)| b.contains(p))
                .map(|(i, _)| i)
                .collect(),
        })
        .collect();
    ResultDocument {
        objective: solution.objective,
        mode: solution.mode.as_str().to_string(),
        k,
        case_id: solution.case_id.clone(),
        matrix: case.matrix.clone(),
        line_gaps: solution.line_gaps.clone(),
        block_boundaries: solution.block_boundaries.clone(),
        boxes,
        instance_digest: instance_digest(instance),
        timing_seconds,
    }
}

pub fn result_to_json(doc: &ResultDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("result document serializes");
    text.push('\n');
    text
}

pub fn result_from_json(text: &str) -> Result<ResultDocument, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

/// Outcome of re-checking a result document against its instance.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub consistent: bool,
    pub reported: f64,
    pub recomputed: f64,
    pub digest_matches: bool,
}

/// Recomputes the reported objective: from the reported boxes for
/// symmetric-difference and union results, from the matrix witness for
/// single-matrix results. Exact for integer weights; a relative
/// `1e-9 * sum |w|` tolerance absorbs reordering error for real weights.
pub fn verify_result(
    instance: &Instance,
    doc: &ResultDocument,
) -> Result<VerifyOutcome, FormatError> {
    let mode = CoverageMode::from_str(&doc.mode)
        .map_err(|_| FormatError::UnknownMode(doc.mode.clone()))?;
    let recomputed = match mode {
        CoverageMode::SingleMatrix => {
            matrix_objective(instance, &doc.matrix, &doc.line_gaps, &doc.block_boundaries)
                .map_err(|e| FormatError::Json(e.to_string()))?
        }
        _ => {
            let boxes: Vec<AxisBox> = doc.boxes.iter().map(BoxReport::to_axis_box).collect();
            region_weight(instance, &boxes, mode).map_err(|e| FormatError::Json(e.to_string()))?
        }
    };
    let tolerance = 1e-9 * instance.total_abs_weight();
    Ok(VerifyOutcome {
        consistent: (recomputed - doc.objective).abs() <= tolerance,
        reported: doc.objective,
        recomputed,
        digest_matches: doc.instance_digest == instance_digest(instance),
    })
}

/// Parses, optionally jitters, and validates instance text in one step.
pub fn load_instance(text: &str, jitter: Option<(f64, u64)>) -> Result<Instance, Box<dyn Error>> {
    let mut points = parse_instance_text(text)?;
    if let Some((eps, seed)) = jitter {
        apply_jitter(&mut points, eps, seed);
    }
    Ok(validate_instance(&points)?)
}
