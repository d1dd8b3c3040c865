//! Depth-first branch-and-bound over exact LP relaxations.

use std::cmp::Ordering;

use super::model::{MilpModel, MilpSolution, Sense, Status};
use super::scalar::{ObjectiveValue, Scalar};
use super::simplex::solve_with_bounds;
use crate::error::Result;

struct Node<F> {
    lower: Vec<F>,
    upper: Vec<Option<F>>,
}

/// Solves `model` to optimality with integral integer columns.
///
/// Branches on the lowest-index fractional integer column, exploring the
/// floor branch first. Product rows are left out of the relaxations and
/// decided exactly at integral points; a violated product row splits the
/// domain of its first unfixed column into below, at and above its value.
/// Among equally good solutions the first one found is kept.
pub fn solve_milp<F: Scalar, O: ObjectiveValue<F>>(model: &MilpModel<F, O>) -> Result<MilpSolution<F, O>> {
    model.validate()?;
    let n = model.num_variables();
    let root = Node {
        lower: vec![F::zero(); n],
        upper: model
            .variables
            .iter()
            .map(|v| match (&v.upper, v.integer) {
                (Some(u), true) => Some(u.floor_value()),
                (u, _) => u.clone(),
            })
            .collect(),
    };
    let better = |a: &O, b: &O| {
        let ord = a.cmp_value(b);
        match model.sense {
            Sense::Maximize => ord == Ordering::Greater,
            Sense::Minimize => ord == Ordering::Less,
        }
    };

    let mut incumbent: Option<(Vec<F>, O)> = None;
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        let relaxed = solve_with_bounds(model, &node.lower, &node.upper, &[]);
        match relaxed.status {
            Status::Infeasible => continue,
            Status::Unbounded => return Ok(MilpSolution::unbounded()),
            Status::Optimal => {}
        }
        let value = relaxed.objective_value.expect("optimal relaxation has a value");
        if let Some((_, best)) = &incumbent {
            if !better(&value, best) {
                continue;
            }
        }
        let x = relaxed.assignment;
        let fractional = (0..n).find(|&j| model.variables[j].integer && !x[j].is_integral());
        if let Some(j) = fractional {
            let mut up = Node {
                lower: node.lower.clone(),
                upper: node.upper.clone(),
            };
            up.lower[j] = x[j].ceil_value();
            let mut down = node;
            down.upper[j] = Some(x[j].floor_value());
            stack.push(up);
            stack.push(down);
            continue;
        }

        let violated = model
            .product_rows
            .iter()
            .find(|row| row.is_satisfied(&x) != Some(true));
        let Some(row) = violated else {
            incumbent = Some((x, value));
            continue;
        };
        let unfixed = row.terms.iter().map(|(j, _)| *j).find(|&j| match &node.upper[j] {
            Some(u) => node.lower[j] < *u,
            None => true,
        });
        let Some(j) = unfixed else {
            continue;
        };
        let v = x[j].clone();
        let mut children = Vec::with_capacity(3);
        if let Some(u) = &node.upper[j] {
            if v < *u {
                let mut above = Node {
                    lower: node.lower.clone(),
                    upper: node.upper.clone(),
                };
                above.lower[j] = v.clone() + F::one();
                children.push(above);
            }
        }
        let mut at = Node {
            lower: node.lower.clone(),
            upper: node.upper.clone(),
        };
        at.lower[j] = v.clone();
        at.upper[j] = Some(v.clone());
        children.push(at);
        if v > node.lower[j] {
            let mut below = node;
            below.upper[j] = Some(v - F::one());
            children.push(below);
        }
        stack.extend(children);
    }

    Ok(match incumbent {
        Some((assignment, value)) => MilpSolution {
            status: Status::Optimal,
            assignment,
            objective_value: Some(value),
        },
        None => MilpSolution::infeasible(),
    })
}
