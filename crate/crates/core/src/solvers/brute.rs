use super::{Algorithm, SolveResult};
use crate::error::{check_cap, Result};
use crate::instance::{BribePlan, CbcctInstance};
use crate::Rational;

pub const DEFAULT_PLAN_CAP: u128 = 10_000_000;

/// Enumerates every plan in lexicographic order and keeps the first one of
/// maximum probability among those within budget.
pub fn solve_bruteforce(inst: &CbcctInstance) -> Result<SolveResult> {
    solve_bruteforce_with_cap(inst, DEFAULT_PLAN_CAP)
}

pub fn solve_bruteforce_with_cap(inst: &CbcctInstance, cap: u128) -> Result<SolveResult> {
    check_cap("brute-force plan count", inst.plan_count(), cap)?;
    let vectors = &inst.bribe_vectors;
    let n = vectors.len();
    let mut choices = vec![0usize; n];
    let mut best: Option<(Rational, BribePlan)> = None;
    loop {
        let cost = choices
            .iter()
            .zip(vectors)
            .fold(0u64, |acc, (&j, v)| acc.saturating_add(v.entries()[j].bribe));
        if cost <= inst.budget {
            let p = choices
                .iter()
                .zip(vectors)
                .fold(Rational::from_integer(1.into()), |acc, (&j, v)| {
                    acc * &v.entries()[j].losing_probability
                });
            if best.as_ref().map_or(true, |(b, _)| p > *b) {
                best = Some((p, BribePlan::new(choices.clone())));
            }
        }
        // Odometer step, last challenger fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(SolveResult::maximum(Algorithm::BruteForce, best, &inst.threshold));
            }
            i -= 1;
            choices[i] += 1;
            if choices[i] < vectors[i].len() {
                break;
            }
            choices[i] = 0;
        }
    }
}
