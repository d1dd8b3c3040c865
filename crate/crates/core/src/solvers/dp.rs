//! Budget DP over challengers.
//!
//! `S[i][b]` is the best probability over challengers `i..n` with total
//! bribe at most `b`; `S[n][b] = 1`. The table of smallest maximizing
//! entries is kept so that walking forward from `S[0][B]` yields the
//! lexicographically smallest optimal plan.
//!
//! Cell values are stored exactly but compactly: every probability is a
//! product of powers of one pairwise coprime integer basis, so a positive
//! cell is an exponent vector over that basis. A floating-point logarithm
//! with a certified error bound decides most comparisons; near-ties are
//! settled exactly on the exponent vectors.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::{Algorithm, SolveResult};
use crate::error::{check_cap, Error, Result};
use crate::instance::{BribePlan, CbcctInstance};
use crate::Rational;

/// Default bound on `n * B` table cells.
pub const DEFAULT_DP_CELL_CAP: u128 = 100_000_000;

pub fn solve_dp(inst: &CbcctInstance) -> Result<SolveResult> {
    solve_dp_with_cap(inst, DEFAULT_DP_CELL_CAP)
}

pub fn solve_dp_with_cap(inst: &CbcctInstance, cap: u128) -> Result<SolveResult> {
    let table = Table::build(inst, cap, true)?;
    let budget = table.budget;
    let best = match table.row[budget] {
        Cell::Infeasible => None,
        _ => {
            let mut choices = Vec::with_capacity(inst.num_challengers());
            let mut b = budget;
            for (i, entries) in table.entries.iter().enumerate() {
                let j = table.choice(i, b);
                choices.push(j);
                b -= entries[j].cost as usize;
            }
            Some((table.value(budget), BribePlan::new(choices)))
        }
    };
    Ok(SolveResult::maximum(Algorithm::Dp, best, &inst.threshold))
}

/// Best achievable probability for every budget `0..=B`; `None` where no
/// plan is affordable.
pub fn dp_budget_sweep(inst: &CbcctInstance) -> Result<Vec<Option<Rational>>> {
    check_cap("budget sweep length", u128::from(inst.budget) + 1, DEFAULT_DP_CELL_CAP)?;
    let table = Table::build(inst, DEFAULT_DP_CELL_CAP, false)?;
    let mut out: Vec<Option<Rational>> = (0..=table.budget)
        .map(|b| match table.row[b] {
            Cell::Infeasible => None,
            _ => Some(table.value(b)),
        })
        .collect();
    // Budgets past the total of all maximum bribes change nothing.
    let last = out.last().cloned().flatten();
    out.resize(inst.budget as usize + 1, last);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Cell {
    Infeasible,
    Zero,
    Positive,
}

struct Entry {
    cost: u64,
    zero: bool,
    exps: Vec<i64>,
    ln: f64,
}

enum Choices {
    None,
    Narrow(Vec<u8>),
    Wide(Vec<u32>),
}

struct Table {
    basis: Vec<BigUint>,
    entries: Vec<Vec<Entry>>,
    budget: usize,
    width: usize,
    choices: Choices,
    row: Vec<Cell>,
    ln: Vec<f64>,
    exps: Vec<i64>,
}

impl Table {
    fn build(inst: &CbcctInstance, cap: u128, keep_choices: bool) -> Result<Self> {
        let n = inst.num_challengers();
        let max_total = inst
            .bribe_vectors
            .iter()
            .fold(0u64, |acc, v| acc.saturating_add(v.entries().last().map_or(0, |e| e.bribe)));
        let budget64 = inst.budget.min(max_total);
        check_cap("DP table cells", n as u128 * u128::from(budget64), cap)?;
        let budget = usize::try_from(budget64).map_err(|_| Error::Overflow("sizing the DP table"))?;

        let mut raw = Vec::new();
        for v in &inst.bribe_vectors {
            for e in v.entries() {
                let p = &e.losing_probability;
                if !p.is_zero() {
                    raw.push(p.numer().magnitude().clone());
                    raw.push(p.denom().magnitude().clone());
                }
            }
        }
        let basis = coprime_basis(raw);
        let width = basis.len();
        check_cap("DP row exponents", width as u128 * (budget as u128 + 1), cap)?;
        let ln_basis: Vec<f64> = basis.iter().map(ln_biguint).collect();

        let eps = f64::EPSILON;
        let mut entry_error_total = 0.0f64;
        let mut magnitude_total = 0.0f64;
        let mut entries = Vec::with_capacity(n);
        for v in &inst.bribe_vectors {
            let mut row = Vec::with_capacity(v.len());
            let (mut worst_err, mut worst_mag) = (0.0f64, 0.0f64);
            for e in v.entries() {
                let p = &e.losing_probability;
                let (zero, exps) = if p.is_zero() {
                    (true, vec![0; width])
                } else {
                    let mut exps = factor(p.numer().magnitude(), &basis)?;
                    for (a, b) in exps.iter_mut().zip(factor(p.denom().magnitude(), &basis)?) {
                        *a -= b;
                    }
                    (false, exps)
                };
                let ln: f64 = exps.iter().zip(&ln_basis).map(|(&k, l)| k as f64 * l).sum();
                let err: f64 = exps
                    .iter()
                    .zip(&ln_basis)
                    .map(|(&k, l)| (k.unsigned_abs() as f64) * (l + 1.0))
                    .sum::<f64>()
                    * 4.0
                    * eps
                    * (width as f64 + 1.0);
                worst_err = worst_err.max(err);
                worst_mag = worst_mag.max(ln.abs() + err);
                row.push(Entry {
                    cost: e.bribe,
                    zero,
                    exps,
                    ln,
                });
            }
            entry_error_total += worst_err;
            magnitude_total += worst_mag;
            entries.push(row);
        }
        // Bound on the error of any cell's logarithm, doubled for the two
        // sides of a comparison and doubled again as margin.
        let cell_error = entry_error_total + (n as f64 + 1.0) * eps * (magnitude_total + 1.0);
        let slack = 4.0 * cell_error + f64::MIN_POSITIVE;

        let max_len = inst.max_vector_len();
        let cells = if keep_choices { n * (budget + 1) } else { 0 };
        let choices = if !keep_choices {
            Choices::None
        } else if max_len <= 256 {
            Choices::Narrow(vec![0; cells])
        } else {
            Choices::Wide(vec![0; cells])
        };

        let mut table = Table {
            basis,
            entries,
            budget,
            width,
            choices,
            row: vec![Cell::Positive; budget + 1],
            ln: vec![0.0; budget + 1],
            exps: vec![0; width * (budget + 1)],
        };
        let mut next_row = vec![Cell::Infeasible; budget + 1];
        let mut next_ln = vec![0.0; budget + 1];
        let mut next_exps = vec![0i64; width * (budget + 1)];
        for i in (0..n).rev() {
            std::mem::swap(&mut table.row, &mut next_row);
            std::mem::swap(&mut table.ln, &mut next_ln);
            std::mem::swap(&mut table.exps, &mut next_exps);
            let entries = &table.entries[i];
            for b in 0..=budget {
                // Best so far: (entry, source cell, kind).
                let mut best: Option<(usize, usize, Cell)> = None;
                for (j, e) in entries.iter().enumerate() {
                    if e.cost > b as u64 {
                        break;
                    }
                    let src = b - e.cost as usize;
                    let kind = match next_row[src] {
                        Cell::Infeasible => continue,
                        Cell::Zero => Cell::Zero,
                        Cell::Positive if e.zero => Cell::Zero,
                        Cell::Positive => Cell::Positive,
                    };
                    let better = match best {
                        None => true,
                        Some((_, _, Cell::Zero)) => kind == Cell::Positive,
                        Some((bj, bsrc, _)) => {
                            kind == Cell::Positive
                                && compare(
                                    width,
                                    slack,
                                    &table.basis,
                                    (&next_ln, &next_exps),
                                    (src, e),
                                    (bsrc, &entries[bj]),
                                ) == Ordering::Greater
                        }
                    };
                    if better {
                        best = Some((j, src, kind));
                    }
                }
                let out = &mut table.exps[b * width..(b + 1) * width];
                match best {
                    None => {
                        table.row[b] = Cell::Infeasible;
                    }
                    Some((j, src, kind)) => {
                        table.row[b] = kind;
                        if kind == Cell::Positive {
                            let e = &entries[j];
                            table.ln[b] = next_ln[src] + e.ln;
                            for ((o, s), d) in out.iter_mut().zip(&next_exps[src * width..(src + 1) * width]).zip(&e.exps) {
                                *o = s + d;
                            }
                        }
                        match &mut table.choices {
                            Choices::None => {}
                            Choices::Narrow(c) => c[i * (budget + 1) + b] = j as u8,
                            Choices::Wide(c) => c[i * (budget + 1) + b] = j as u32,
                        }
                    }
                }
            }
        }
        Ok(table)
    }

    fn choice(&self, i: usize, b: usize) -> usize {
        match &self.choices {
            Choices::None => unreachable!("choices were not kept"),
            Choices::Narrow(c) => c[i * (self.budget + 1) + b] as usize,
            Choices::Wide(c) => c[i * (self.budget + 1) + b] as usize,
        }
    }

    fn value(&self, b: usize) -> Rational {
        match self.row[b] {
            Cell::Infeasible => unreachable!("value of an infeasible cell"),
            Cell::Zero => Rational::zero(),
            Cell::Positive => {
                let exps = &self.exps[b * self.width..(b + 1) * self.width];
                let (num, den) = split_power_product(&self.basis, exps.iter().copied());
                Rational::new(num.into(), den.into())
            }
        }
    }
}

/// Compares `next[src_a] * a` with `next[src_b] * b` for positive values.
fn compare(
    width: usize,
    slack: f64,
    basis: &[BigUint],
    next: (&[f64], &[i64]),
    (src_a, a): (usize, &Entry),
    (src_b, b): (usize, &Entry),
) -> Ordering {
    let (ln, exps) = next;
    let diff = (ln[src_a] + a.ln) - (ln[src_b] + b.ln);
    if diff > slack {
        return Ordering::Greater;
    }
    if diff < -slack {
        return Ordering::Less;
    }
    let ea = &exps[src_a * width..(src_a + 1) * width];
    let eb = &exps[src_b * width..(src_b + 1) * width];
    let delta = (0..width).map(|k| ea[k] + a.exps[k] - eb[k] - b.exps[k]);
    if delta.clone().all(|d| d == 0) {
        return Ordering::Equal;
    }
    let (num, den) = split_power_product(basis, delta);
    num.cmp(&den)
}

/// `(prod_{e>0} q^e, prod_{e<0} q^-e)` over the basis.
fn split_power_product(basis: &[BigUint], exps: impl Iterator<Item = i64>) -> (BigUint, BigUint) {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (q, e) in basis.iter().zip(exps) {
        let power = Pow::pow(q, e.unsigned_abs());
        if e > 0 {
            num *= power;
        } else if e < 0 {
            den *= power;
        }
    }
    (num, den)
}

/// Pairwise coprime integers > 1 such that every input is a product of
/// their powers.
fn coprime_basis(values: Vec<BigUint>) -> Vec<BigUint> {
    let mut basis: Vec<BigUint> = Vec::new();
    let mut pending = values;
    while let Some(a) = pending.pop() {
        if a.is_one() || basis.contains(&a) {
            continue;
        }
        match basis.iter().position(|b| !a.gcd(b).is_one()) {
            Some(i) => {
                let b = basis.swap_remove(i);
                let g = a.gcd(&b);
                pending.push(&a / &g);
                pending.push(&b / &g);
                pending.push(g);
            }
            None => basis.push(a),
        }
    }
    basis.sort();
    basis
}

fn factor(value: &BigUint, basis: &[BigUint]) -> Result<Vec<i64>> {
    let mut rest = value.clone();
    let mut exps = vec![0i64; basis.len()];
    for (k, q) in basis.iter().enumerate() {
        while (&rest % q).is_zero() {
            rest /= q;
            exps[k] += 1;
        }
    }
    if rest.is_one() {
        Ok(exps)
    } else {
        Err(Error::invalid("probability does not factor over the coprime basis"))
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("in range").ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("in range").ln() + shift as f64 * std::f64::consts::LN_2
    }
}
