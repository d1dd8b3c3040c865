//! CBCCT solvers: exhaustive search, the budget DP and the two MILP-based
//! algorithms parameterized by distinct bribe values and distinct
//! probability values.

mod brute;
mod dp;
mod fpt;

use std::fmt;
use std::str::FromStr;

pub use brute::{solve_bruteforce, solve_bruteforce_with_cap, DEFAULT_PLAN_CAP};
pub use dp::{dp_budget_sweep, solve_dp, solve_dp_with_cap, DEFAULT_DP_CELL_CAP};
pub use fpt::{
    build_bribe_value_milp, build_prob_value_milp, solve_fpt_bribe_values, solve_fpt_prob_values, FractionalColumn,
    IntegerColumn, IntegerKey, PlayerGroup, VariableMap,
};

use crate::instance::BribePlan;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BruteForce,
    Dp,
    FptBribeValues,
    FptProbValues,
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::BruteForce => "brute",
            Algorithm::Dp => "dp",
            Algorithm::FptBribeValues => "fpt-bribes",
            Algorithm::FptProbValues => "fpt-probs",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "brute" => Ok(Algorithm::BruteForce),
            "dp" => Ok(Algorithm::Dp),
            "fpt-bribes" => Ok(Algorithm::FptBribeValues),
            "fpt-probs" => Ok(Algorithm::FptProbValues),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

/// Outcome of a CBCCT solver.
///
/// `best_probability` and `witness` are `None` when no plan fits the budget.
/// For [`Algorithm::FptProbValues`] they describe a cheapest plan reaching
/// the threshold, which need not maximize the probability, and are only
/// present on yes-instances; `min_budget` is the cost of that plan, or
/// `None` when no plan reaches the threshold at any cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub algorithm: Algorithm,
    pub best_probability: Option<Rational>,
    pub witness: Option<BribePlan>,
    pub decision: bool,
    pub min_budget: Option<u64>,
}

impl SolveResult {
    fn maximum(algorithm: Algorithm, best: Option<(Rational, BribePlan)>, threshold: &Rational) -> Self {
        let decision = best.as_ref().is_some_and(|(p, _)| p >= threshold);
        let (best_probability, witness) = match best {
            Some((p, w)) => (Some(p), Some(w)),
            None => (None, None),
        };
        SolveResult {
            algorithm,
            best_probability,
            witness,
            decision,
            min_budget: None,
        }
    }
}

/// Dispatches to the solver for `algorithm` with default caps.
pub fn solve(inst: &crate::CbcctInstance, algorithm: Algorithm) -> crate::Result<SolveResult> {
    match algorithm {
        Algorithm::BruteForce => solve_bruteforce(inst),
        Algorithm::Dp => solve_dp(inst),
        Algorithm::FptBribeValues => solve_fpt_bribe_values(inst),
        Algorithm::FptProbValues => solve_fpt_prob_values(inst),
    }
}
