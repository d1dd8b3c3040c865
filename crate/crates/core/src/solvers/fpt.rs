//! MILP formulations whose integer-variable count depends only on the
//! number of distinct bribe values, respectively distinct probabilities.
//!
//! Challengers with identical (normalized) bribe vectors are
//! interchangeable and form one group. A group is determined by its value
//! set `V'` together with its probability profile `P`. Only realized
//! combinations produce columns.
//!
//! Row order puts every row touching a fractional column last, so the
//! fractional block is the tail of the constraint matrix. In that block each
//! fractional column has exactly two ones: one in a per-(value or
//! probability) linking row and one in its group's cardinality row.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Algorithm, SolveResult};
use crate::error::{Error, Result};
use crate::instance::{evaluate_plan, normalize_instance_with_map, BribePlan, BribeVector, CbcctInstance};
use crate::milp::{integralize_solution, solve_milp, FormalLog, LogLinear, Relation, Sense, Status};
use crate::{LogModel, Rational, RationalModel};

/// Challengers sharing one bribe vector, in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerGroup {
    pub vector: BribeVector,
    pub players: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerKey {
    /// Number of challengers with value set `value_sets[value_set]` bribed
    /// with `value`.
    BribeValue { value_set: usize, value: u64 },
    /// Number of challengers with profile `profiles[profile]` left at
    /// losing probability `probability`.
    Probability { profile: usize, probability: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerColumn {
    pub column: usize,
    pub key: IntegerKey,
}

/// Number of challengers of `groups[group]` taking entry `entry`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalColumn {
    pub column: usize,
    pub group: usize,
    pub entry: usize,
}

/// Correspondence between model columns and instance data.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableMap {
    pub groups: Vec<PlayerGroup>,
    /// Distinct value sets `V'` (bribe-value model only).
    pub value_sets: Vec<Vec<u64>>,
    /// Distinct probability profiles `P` (probability-value model only).
    pub profiles: Vec<Vec<Rational>>,
    pub integer_columns: Vec<IntegerColumn>,
    pub fractional_columns: Vec<FractionalColumn>,
}

impl VariableMap {
    /// Plan on the modeled instance from an assignment whose fractional
    /// columns are integral: within each group, players in input order take
    /// entries in vector order, as many per entry as its column says.
    pub fn plan(&self, x: &[Rational], num_challengers: usize) -> Result<BribePlan> {
        let mut counts: Vec<Vec<usize>> = self.groups.iter().map(|g| vec![0; g.vector.len()]).collect();
        for col in &self.fractional_columns {
            let v = &x[col.column];
            if !v.is_integer() || v.is_negative() {
                return Err(Error::Integralization(format!("column {} is not a natural number", col.column)));
            }
            counts[col.group][col.entry] = v.to_integer().to_usize().ok_or(Error::Overflow("reading a group count"))?;
        }
        let mut choices = vec![usize::MAX; num_challengers];
        for (group, count) in self.groups.iter().zip(&counts) {
            if count.iter().sum::<usize>() != group.players.len() {
                return Err(Error::Integralization("group counts do not cover the group".into()));
            }
            let mut players = group.players.iter();
            for (entry, &c) in count.iter().enumerate() {
                for &player in players.by_ref().take(c) {
                    choices[player] = entry;
                }
            }
        }
        if choices.contains(&usize::MAX) {
            return Err(Error::Integralization("some challenger received no entry".into()));
        }
        Ok(BribePlan::new(choices))
    }
}

fn group_players(inst: &CbcctInstance) -> Result<Vec<PlayerGroup>> {
    let mut index: HashMap<&BribeVector, usize> = HashMap::new();
    let mut groups: Vec<PlayerGroup> = Vec::new();
    for (i, v) in inst.bribe_vectors.iter().enumerate() {
        if !v.is_monotone() {
            return Err(Error::NotMonotone { challenger: i });
        }
        let g = *index.entry(v).or_insert_with(|| {
            groups.push(PlayerGroup {
                vector: v.clone(),
                players: Vec::new(),
            });
            groups.len() - 1
        });
        groups[g].players.push(i);
    }
    Ok(groups)
}

/// Position of `item` in `list`, appending it when absent.
fn intern<T: PartialEq>(list: &mut Vec<T>, item: T) -> usize {
    match list.iter().position(|x| *x == item) {
        Some(i) => i,
        None => {
            list.push(item);
            list.len() - 1
        }
    }
}

fn natural(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn natural64(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Model maximizing `sum log p * x_{P,v',V'}` subject to the budget row
/// `sum v' x_{v',V'} <= B`, the linking rows
/// `sum_P x_{P,v',V'} = x_{v',V'}` and the cardinality rows
/// `sum_{v'} x_{P,v',V'} = n_{P,V'}`.
pub fn build_bribe_value_milp(inst: &CbcctInstance) -> Result<(LogModel, VariableMap)> {
    let groups = group_players(inst)?;
    let mut map = VariableMap::default();
    let group_set: Vec<usize> = groups
        .iter()
        .map(|g| intern(&mut map.value_sets, g.vector.bribe_values()))
        .collect();

    let mut model = LogModel::new(Sense::Maximize);
    let mut int_col: Vec<Vec<usize>> = Vec::new();
    for (s, values) in map.value_sets.iter().enumerate() {
        let members: usize = groups
            .iter()
            .zip(&group_set)
            .filter(|(_, &gs)| gs == s)
            .map(|(g, _)| g.players.len())
            .sum();
        let mut cols = Vec::with_capacity(values.len());
        for &v in values {
            let c = model.add_variable(format!("b{s}_{v}"), true, Some(natural(members)));
            map.integer_columns.push(IntegerColumn {
                column: c,
                key: IntegerKey::BribeValue { value_set: s, value: v },
            });
            cols.push(c);
        }
        int_col.push(cols);
    }
    let mut frac_col: Vec<Vec<usize>> = Vec::new();
    for (g, group) in groups.iter().enumerate() {
        let mut cols = Vec::with_capacity(group.vector.len());
        for (e, entry) in group.vector.entries().iter().enumerate() {
            let c = model.add_variable(format!("f{g}_{}", entry.bribe), false, None);
            model.set_objective(c, LogLinear::log(&entry.losing_probability));
            map.fractional_columns.push(FractionalColumn {
                column: c,
                group: g,
                entry: e,
            });
            cols.push(c);
        }
        frac_col.push(cols);
    }

    let budget_row: Vec<(usize, Rational)> = map
        .value_sets
        .iter()
        .zip(&int_col)
        .flat_map(|(values, cols)| values.iter().zip(cols).map(|(&v, &c)| (c, natural64(v))))
        .filter(|(_, a)| !a.is_zero())
        .collect();
    model.add_row("budget", budget_row, Relation::Le, natural64(inst.budget));
    for (s, values) in map.value_sets.iter().enumerate() {
        for (pos, &v) in values.iter().enumerate() {
            let mut coeffs: Vec<(usize, Rational)> = groups
                .iter()
                .enumerate()
                .filter(|(g, _)| group_set[*g] == s)
                .map(|(g, _)| (frac_col[g][pos], Rational::one()))
                .collect();
            coeffs.push((int_col[s][pos], -Rational::one()));
            model.add_row(format!("link{s}_{v}"), coeffs, Relation::Eq, Rational::zero());
        }
    }
    for (g, group) in groups.iter().enumerate() {
        let coeffs = frac_col[g].iter().map(|&c| (c, Rational::one())).collect();
        model.add_row(format!("count{g}"), coeffs, Relation::Eq, natural(group.players.len()));
    }
    map.groups = groups;
    Ok((model, map))
}

/// Model minimizing the total bribe `sum v * x_{p,P,V'}` subject to the
/// product row `sum log p * x_{p,P} >= log t`, the linking rows
/// `sum_{V'} x_{p,P,V'} = x_{p,P}` and the cardinality rows
/// `sum_p x_{p,P,V'} = n_{P,V'}`.
///
/// When `t > 0`, columns with `p = 0` are fixed to 0 and a rational cut
/// `sum hi(log p) x_{p,P} >= lo(log t)` over the integer columns is added,
/// where `hi` and `lo` bound the logarithm from above and below. The cut is
/// implied by the product row; it only tightens the LP relaxations. The
/// product row is omitted when `t = 0`.
pub fn build_prob_value_milp(inst: &CbcctInstance) -> Result<(RationalModel, VariableMap)> {
    let groups = group_players(inst)?;
    let t = &inst.threshold;
    let mut map = VariableMap::default();
    let group_profile: Vec<usize> = groups
        .iter()
        .map(|g| intern(&mut map.profiles, g.vector.probability_profile()))
        .collect();

    let mut model = RationalModel::new(Sense::Minimize);
    let mut int_col: Vec<Vec<usize>> = Vec::new();
    for (pi, profile) in map.profiles.iter().enumerate() {
        let members: usize = groups
            .iter()
            .zip(&group_profile)
            .filter(|(_, &gp)| gp == pi)
            .map(|(g, _)| g.players.len())
            .sum();
        let mut cols = Vec::with_capacity(profile.len());
        for (pos, p) in profile.iter().enumerate() {
            let upper = if p.is_zero() && t.is_positive() { 0 } else { members };
            let c = model.add_variable(format!("p{pi}_{pos}"), true, Some(natural(upper)));
            map.integer_columns.push(IntegerColumn {
                column: c,
                key: IntegerKey::Probability {
                    profile: pi,
                    probability: p.clone(),
                },
            });
            cols.push(c);
        }
        int_col.push(cols);
    }
    let mut frac_col: Vec<Vec<usize>> = Vec::new();
    for (g, group) in groups.iter().enumerate() {
        let mut cols = Vec::with_capacity(group.vector.len());
        for (e, entry) in group.vector.entries().iter().enumerate() {
            let c = model.add_variable(format!("f{g}_{e}"), false, None);
            model.set_objective(c, natural64(entry.bribe));
            map.fractional_columns.push(FractionalColumn {
                column: c,
                group: g,
                entry: e,
            });
            cols.push(c);
        }
        frac_col.push(cols);
    }

    if t.is_positive() {
        let mut cut = Vec::new();
        let mut terms = Vec::new();
        for (profile, cols) in map.profiles.iter().zip(&int_col) {
            for (p, &c) in profile.iter().zip(cols) {
                terms.push((c, FormalLog::new(p.clone())?));
                if p.is_positive() {
                    let (_, hi) = ln_bounds(p);
                    if !hi.is_zero() {
                        cut.push((c, hi));
                    }
                }
            }
        }
        let (lo, _) = ln_bounds(t);
        model.add_row("probability_cut", cut, Relation::Ge, lo);
        model.add_product_row("probability", terms, FormalLog::new(t.clone())?);
    }
    for (pi, profile) in map.profiles.iter().enumerate() {
        for pos in 0..profile.len() {
            let mut coeffs: Vec<(usize, Rational)> = groups
                .iter()
                .enumerate()
                .filter(|(g, _)| group_profile[*g] == pi)
                .map(|(g, _)| (frac_col[g][pos], Rational::one()))
                .collect();
            coeffs.push((int_col[pi][pos], -Rational::one()));
            model.add_row(format!("link{pi}_{pos}"), coeffs, Relation::Eq, Rational::zero());
        }
    }
    for (g, group) in groups.iter().enumerate() {
        let coeffs = frac_col[g].iter().map(|&c| (c, Rational::one())).collect();
        model.add_row(format!("count{g}"), coeffs, Relation::Eq, natural(group.players.len()));
    }
    map.groups = groups;
    Ok((model, map))
}

/// Maximizes the champ's probability through the bribe-value model.
pub fn solve_fpt_bribe_values(inst: &CbcctInstance) -> Result<SolveResult> {
    let (norm, kept) = normalize_instance_with_map(inst);
    let (model, map) = build_bribe_value_milp(&norm)?;
    let mixed = solve_milp(&model)?;
    match mixed.status {
        Status::Optimal => {}
        Status::Infeasible => return Ok(SolveResult::maximum(Algorithm::FptBribeValues, None, &inst.threshold)),
        Status::Unbounded => return Err(Error::malformed("bribe-value model is unbounded")),
    }
    let integral = integralize_solution(&model, &mixed)?;
    let plan = original_plan(&map.plan(&integral.assignment, inst.num_challengers())?, &kept);
    let value = evaluate_plan(inst, &plan)?;
    let objective = integral.objective_value.as_ref().expect("optimal solution has a value");
    let expected = if objective.neg_inf_coefficient().is_positive() {
        Some(Rational::zero())
    } else {
        objective.exp_integral()
    };
    if expected.as_ref() != Some(&value.win_probability) || value.cost > inst.budget {
        return Err(Error::malformed("bribe-value optimum disagrees with its witness"));
    }
    Ok(SolveResult::maximum(
        Algorithm::FptBribeValues,
        Some((value.win_probability, plan)),
        &inst.threshold,
    ))
}

/// Decides the instance through the probability-value model: yes iff the
/// cheapest plan reaching the threshold costs at most `B`.
pub fn solve_fpt_prob_values(inst: &CbcctInstance) -> Result<SolveResult> {
    let (norm, kept) = normalize_instance_with_map(inst);
    let (model, map) = build_prob_value_milp(&norm)?;
    let mixed = solve_milp(&model)?;
    let no = SolveResult {
        algorithm: Algorithm::FptProbValues,
        best_probability: None,
        witness: None,
        decision: false,
        min_budget: None,
    };
    match mixed.status {
        Status::Optimal => {}
        Status::Infeasible => return Ok(no),
        Status::Unbounded => return Err(Error::malformed("probability-value model is unbounded")),
    }
    let integral = integralize_solution(&model, &mixed)?;
    let objective = integral.objective_value.as_ref().expect("optimal solution has a value");
    let min_budget = objective
        .to_integer()
        .to_u64()
        .ok_or(Error::Overflow("reading the minimum budget"))?;
    if min_budget > inst.budget {
        return Ok(SolveResult {
            min_budget: Some(min_budget),
            ..no
        });
    }
    let plan = original_plan(&map.plan(&integral.assignment, inst.num_challengers())?, &kept);
    let value = evaluate_plan(inst, &plan)?;
    if value.cost != min_budget || value.win_probability < inst.threshold {
        return Err(Error::malformed("probability-value optimum disagrees with its witness"));
    }
    Ok(SolveResult {
        algorithm: Algorithm::FptProbValues,
        best_probability: Some(value.win_probability),
        witness: Some(plan),
        decision: true,
        min_budget: Some(min_budget),
    })
}

fn original_plan(plan: &BribePlan, kept: &[Vec<usize>]) -> BribePlan {
    BribePlan::new(plan.choices.iter().zip(kept).map(|(&j, map)| map[j]).collect())
}

/// Grid for rounding logarithm bounds outward.
const LN_GRID_BITS: u32 = 30;

/// `(lo, hi)` with `lo <= ln x <= hi` for positive `x`, both on a dyadic grid.
fn ln_bounds(x: &Rational) -> (Rational, Rational) {
    assert!(x.is_positive());
    if *x < Rational::one() {
        let (lo, hi) = ln_bounds(&x.recip());
        return (-hi, -lo);
    }
    // x = 2^m * y with 1 <= y < 2.
    let mut m = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = Rational::from_integer(BigInt::from(2));
    let scale = |m: i64| num_traits::Pow::pow(&two, m as i32);
    let mut y = x / scale(m);
    if y < Rational::one() {
        m -= 1;
        y = x / scale(m);
    } else if y >= two {
        m += 1;
        y = x / scale(m);
    }
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let (ylo, yhi) = atanh2_bounds(&z);
    let (l2lo, l2hi) = atanh2_bounds(&Rational::new(BigInt::one(), BigInt::from(3)));
    let m = Rational::from_integer(BigInt::from(m));
    let lo = &m * l2lo + ylo;
    let hi = &m * l2hi + yhi;
    let grid = Rational::from_integer(BigInt::one() << LN_GRID_BITS);
    ((lo * &grid).floor() / &grid, (hi * &grid).ceil() / grid)
}

/// Bounds on `2 atanh(z) = ln((1+z)/(1-z))` for `0 <= z <= 1/2`.
fn atanh2_bounds(z: &Rational) -> (Rational, Rational) {
    const TERMS: u32 = 30;
    let grid = Rational::from_integer(BigInt::one() << 48);
    let z_lo = (z * &grid).floor() / &grid;
    let z_hi = (z * &grid).ceil() / &grid;
    let series = |z: &Rational| {
        let z2 = z * z;
        let mut power = z.clone();
        let mut sum = Rational::zero();
        for k in 0..TERMS {
            sum += &power / Rational::from_integer(BigInt::from(2 * k + 1));
            power *= &z2;
        }
        let tail = &power / (Rational::from_integer(BigInt::from(2 * TERMS + 1)) * (Rational::one() - &z2));
        let two = Rational::from_integer(BigInt::from(2));
        (sum * &two, tail * two)
    };
    let (lo, _) = series(&z_lo);
    let (hi, tail) = series(&z_hi);
    (lo, hi + tail)
}
