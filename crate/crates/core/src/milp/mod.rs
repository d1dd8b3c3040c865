//! Exact LP/MILP engine.
//!
//! Models are generic over the constraint scalar `F` and the objective type
//! `O`. The solvers in this crate use `F = Rational` with either rational
//! objectives or [`LogLinear`] objectives built from formal logarithms.

mod branch;
mod formal_log;
mod integralize;
mod model;
mod scalar;
mod simplex;
mod tu;

pub use branch::solve_milp;
pub use formal_log::{compare_log_combinations, FormalLog, LogLinear};
pub use integralize::integralize_solution;
pub use model::{DumpValue, MilpModel, MilpSolution, ProductRow, Relation, Row, Sense, Status, Variable};
pub use scalar::{ObjectiveValue, Scalar};
pub use simplex::solve_lp_exact;
pub use tu::{is_totally_unimodular, is_totally_unimodular_with_cap, DEFAULT_TU_CAP};
