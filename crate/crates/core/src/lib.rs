//! Constructive bribery in challenge-the-champ tournaments: exact solvers,
//! the reduction chain from Small k-Sum through product knapsack to cup
//! tournaments, brute-force oracles and seeded instance generators.

pub mod cup;
pub mod error;
pub mod generators;
pub mod instance;
pub mod io;
pub mod knapsack;
pub mod milp;
pub mod rational;
pub mod reductions;
pub mod solvers;
pub mod suites;

pub use error::{Error, Result};
pub use instance::{
    evaluate_plan, normalize_bribe_vector, normalize_instance, BribeEntry, BribePlan, BribeVector, CbcctInstance,
    PlanValue,
};

/// Exact arbitrary-precision fraction used for every probability.
pub type Rational = num_rational::BigRational;

/// MILP with rational constraints and a rational objective.
pub type RationalModel = milp::MilpModel<Rational, Rational>;

/// MILP with rational constraints and a formal-logarithm objective.
pub type LogModel = milp::MilpModel<Rational, milp::LogLinear>;
