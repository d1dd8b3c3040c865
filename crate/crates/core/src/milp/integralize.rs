//! Rounding a mixed optimum to an all-integer one when the fractional block
//! is totally unimodular.

use std::cmp::Ordering;

use super::model::{MilpModel, MilpSolution, Status};
use super::scalar::{ObjectiveValue, Scalar};
use super::simplex::solve_lp_exact;
use super::tu::{is_totally_unimodular, DEFAULT_TU_CAP};
use crate::error::{Error, Result};

/// Fixes the integer columns of `mixed`, re-solves the LP over the
/// fractional columns on the tail rows with right-hand side
/// `b - A_int x_int`, and returns the resulting vertex.
///
/// The fractional submatrix is checked for total unimodularity when it fits
/// within [`DEFAULT_TU_CAP`]; larger blocks are taken on trust.
pub fn integralize_solution<F: Scalar, O: ObjectiveValue<F>>(
    model: &MilpModel<F, O>,
    mixed: &MilpSolution<F, O>,
) -> Result<MilpSolution<F, O>> {
    model.validate()?;
    if mixed.status != Status::Optimal {
        return Err(Error::Integralization(format!("input status is {}", mixed.status)));
    }
    let x = &mixed.assignment;
    if x.len() != model.num_variables() {
        return Err(Error::Integralization("assignment length differs from column count".into()));
    }
    let int_cols = model.integer_columns();
    if let Some(&j) = int_cols.iter().find(|&&j| !x[j].is_integral()) {
        return Err(Error::Integralization(format!(
            "integer column {} is fractional",
            model.variables[j].name
        )));
    }
    let frac_cols = model.fractional_columns();
    if frac_cols.is_empty() {
        return Ok(mixed.clone());
    }
    let tail = model.fractional_tail_start()?;

    let block = model.fractional_submatrix()?;
    if block.len() <= DEFAULT_TU_CAP && frac_cols.len() <= DEFAULT_TU_CAP && !is_totally_unimodular(&block)? {
        return Err(Error::Integralization("fractional submatrix is not totally unimodular".into()));
    }

    let mut restricted: MilpModel<F, O> = MilpModel::new(model.sense);
    let mut position = vec![usize::MAX; model.num_variables()];
    for &j in &frac_cols {
        let v = &model.variables[j];
        if let Some(u) = &v.upper {
            if !u.is_integral() {
                return Err(Error::Integralization(format!("column {} has a fractional upper bound", v.name)));
            }
        }
        position[j] = restricted.add_variable(v.name.clone(), false, v.upper.clone());
        restricted.set_objective(position[j], model.objective[j].clone());
    }
    for row in &model.rows[tail..] {
        let mut rhs = row.rhs.clone();
        let mut coeffs = Vec::new();
        for (j, a) in &row.coeffs {
            if model.variables[*j].integer {
                rhs = rhs - a.clone() * x[*j].clone();
            } else {
                coeffs.push((position[*j], a.clone()));
            }
        }
        if !rhs.is_integral() {
            return Err(Error::Integralization(format!("row {} has a fractional reduced right-hand side", row.name)));
        }
        restricted.add_row(row.name.clone(), coeffs, row.relation, rhs);
    }

    let sub = solve_lp_exact(&restricted)?;
    if sub.status != Status::Optimal {
        return Err(Error::Integralization(format!("restricted LP is {}", sub.status)));
    }
    let mut assignment = x.clone();
    for &j in &frac_cols {
        let v = sub.assignment[position[j]].clone();
        if !v.is_integral() {
            return Err(Error::Integralization(format!("vertex value of {} is fractional", model.variables[j].name)));
        }
        assignment[j] = v;
    }
    let value = model.objective_value(&assignment);
    let original = mixed
        .objective_value
        .clone()
        .unwrap_or_else(|| model.objective_value(x));
    if value.cmp_value(&original) != Ordering::Equal {
        return Err(Error::Integralization("objective changed; input was not optimal".into()));
    }
    Ok(MilpSolution {
        status: Status::Optimal,
        assignment,
        objective_value: Some(value),
    })
}
