//! Maximum-weight box coverage for weighted planar point sets.
//!
//! Given points with positive or negative weights, this crate places k
//! axis-aligned boxes so that the total weight of the covered points is
//! maximized, where "covered" is one of three semantics:
//!
//! * symmetric difference — points inside an odd number of boxes,
//! * union — points inside at least one box,
//! * a single sector-activation matrix — each (strip, block) sector of a
//!   rank-space grid contributes its weight scaled by a matrix entry,
//!   which also expresses cross- and annulus-shaped regions.
//!
//! The solver reduces the planar problem to one-dimensional subproblems:
//! for every activation case it fixes all horizontal lines but the last,
//! sweeps the last line downward, and maintains a mergeable tree
//! ([`gmcs::GMcsTree`]) that answers "best split of the x-sorted sequence
//! into m contiguous blocks" after each O(log n) point update. Exhaustive
//! reference solvers in [`oracle`] validate every optimized path at small
//! instance sizes.

pub mod cases;
pub mod gmcs;
pub mod io;
pub mod mcs;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod svg;

pub use cases::{builtin_case, canonical_symdiff_cases, union_cases, ActivationCase, Shape};
pub use model::{
    region_weight, validate_instance, AxisBox, CoverageMode, Instance, Solution, WeightedPoint,
};
pub use solver::{solve, solve_shape, solve_single_box, SolverConfig};
