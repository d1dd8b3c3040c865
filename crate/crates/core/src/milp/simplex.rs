//! Dense two-phase primal simplex with Bland's rule.
//!
//! Constraint data lives in the scalar `F`; reduced costs live in the
//! objective type `O`, which only needs to be an ordered vector space over
//! `F`. Every returned optimum is a basic feasible solution.

use std::cmp::Ordering;

use super::model::{MilpModel, MilpSolution, Relation, Sense, Status};
use super::scalar::{ObjectiveValue, Scalar};
use crate::error::Result;

/// Solves the LP relaxation of `model`: integrality flags and product rows
/// are ignored, upper bounds are kept.
pub fn solve_lp_exact<F: Scalar, O: ObjectiveValue<F>>(model: &MilpModel<F, O>) -> Result<MilpSolution<F, O>> {
    model.validate()?;
    let n = model.num_variables();
    let lower = vec![F::zero(); n];
    let upper: Vec<Option<F>> = model.variables.iter().map(|v| v.upper.clone()).collect();
    Ok(solve_with_bounds(model, &lower, &upper, &[]))
}

/// LP relaxation with per-column bounds replacing the model's own, plus
/// extra rows. Assumes a validated model.
pub(crate) fn solve_with_bounds<F: Scalar, O: ObjectiveValue<F>>(
    model: &MilpModel<F, O>,
    lower: &[F],
    upper: &[Option<F>],
    extra_rows: &[(Vec<(usize, F)>, Relation, F)],
) -> MilpSolution<F, O> {
    let n = model.num_variables();
    let mut rows: Vec<(Vec<F>, Relation, F)> = Vec::new();
    for row in &model.rows {
        let mut dense = vec![F::zero(); n];
        for (j, a) in &row.coeffs {
            dense[*j] = dense[*j].clone() + a.clone();
        }
        rows.push((dense, row.relation, row.rhs.clone()));
    }
    for (coeffs, rel, rhs) in extra_rows {
        let mut dense = vec![F::zero(); n];
        for (j, a) in coeffs {
            dense[*j] = dense[*j].clone() + a.clone();
        }
        rows.push((dense, *rel, rhs.clone()));
    }
    for j in 0..n {
        if let Some(u) = &upper[j] {
            if *u < lower[j] {
                return MilpSolution::infeasible();
            }
            rows.push((unit(n, j), Relation::Le, u.clone()));
        }
        if lower[j] > F::zero() {
            rows.push((unit(n, j), Relation::Ge, lower[j].clone()));
        }
    }

    let mut costs: Vec<O> = model.objective.clone();
    if model.sense == Sense::Minimize {
        costs = costs.iter().map(|c| c.scale(&-F::one())).collect();
    }

    let mut tableau = match Tableau::phase_one(n, rows) {
        Some(t) => t,
        None => return MilpSolution::infeasible(),
    };
    costs.resize(tableau.width(), O::zero_value());
    match tableau.optimize(&costs) {
        Pivoting::Optimal => {}
        Pivoting::Unbounded => return MilpSolution::unbounded(),
    }
    let mut x = vec![F::zero(); n];
    for (i, &b) in tableau.basis.iter().enumerate() {
        if b < n {
            x[b] = tableau.rhs[i].clone();
        }
    }
    let objective_value = model.objective_value(&x);
    MilpSolution {
        status: Status::Optimal,
        assignment: x,
        objective_value: Some(objective_value),
    }
}

fn unit<F: Scalar>(n: usize, j: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[j] = F::one();
    v
}

enum Pivoting {
    Optimal,
    Unbounded,
}

struct Tableau<F> {
    width: usize,
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
}

impl<F: Scalar> Tableau<F> {
    fn width(&self) -> usize {
        self.width
    }

    /// Builds the standard form with slacks and artificials, runs phase one
    /// and returns a feasible basis over structural and slack columns only,
    /// or `None` when the system is infeasible.
    fn phase_one(n: usize, mut rows: Vec<(Vec<F>, Relation, F)>) -> Option<Self> {
        for (coeffs, rel, rhs) in rows.iter_mut() {
            if *rhs < F::zero() {
                for a in coeffs.iter_mut() {
                    *a = -a.clone();
                }
                *rhs = -rhs.clone();
                *rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }
        let slacks = rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let artificials = rows.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let first_artificial = n + slacks;
        let width = first_artificial + artificials;

        let mut tab = Tableau {
            width,
            rows: Vec::with_capacity(rows.len()),
            rhs: Vec::with_capacity(rows.len()),
            basis: Vec::with_capacity(rows.len()),
        };
        let (mut s, mut a) = (n, first_artificial);
        for (coeffs, rel, rhs) in rows {
            let mut row = coeffs;
            row.resize(width, F::zero());
            match rel {
                Relation::Le => {
                    row[s] = F::one();
                    tab.basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -F::one();
                    s += 1;
                    row[a] = F::one();
                    tab.basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = F::one();
                    tab.basis.push(a);
                    a += 1;
                }
            }
            tab.rows.push(row);
            tab.rhs.push(rhs);
        }

        if artificials > 0 {
            let costs: Vec<F> = (0..width)
                .map(|j| if j >= first_artificial { -F::one() } else { F::zero() })
                .collect();
            // Phase one is bounded below by zero, so it always terminates optimal.
            let _ = tab.optimize(&costs);
            let infeasibility = tab
                .basis
                .iter()
                .zip(&tab.rhs)
                .filter(|(b, _)| **b >= first_artificial)
                .fold(F::zero(), |acc, (_, v)| acc + v.clone());
            if !infeasibility.is_zero() {
                return None;
            }
            let mut i = 0;
            while i < tab.rows.len() {
                if tab.basis[i] >= first_artificial {
                    match (0..first_artificial).find(|&j| !tab.rows[i][j].is_zero()) {
                        Some(j) => {
                            tab.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            // Redundant equality.
                            tab.rows.remove(i);
                            tab.rhs.remove(i);
                            tab.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
            for row in tab.rows.iter_mut() {
                row.truncate(first_artificial);
            }
            tab.width = first_artificial;
        }
        Some(tab)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.rows[r][q].clone();
        if !piv.is_one() {
            for a in self.rows[r].iter_mut() {
                if !a.is_zero() {
                    *a = a.clone() / piv.clone();
                }
            }
            self.rhs[r] = self.rhs[r].clone() / piv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][q].is_zero() {
                continue;
            }
            let f = self.rows[i][q].clone();
            for (a, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a = a.clone() - f.clone() * p.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        self.basis[r] = q;
    }

    /// Maximizes `costs . x` from the current feasible basis.
    fn optimize<O: ObjectiveValue<F>>(&mut self, costs: &[O]) -> Pivoting {
        let width = self.width();
        let mut reduced: Vec<O> = costs[..width].to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero_value() {
                continue;
            }
            for (d, a) in reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *d = d.sub_value(&cb.scale(a));
                }
            }
        }
        loop {
            let entering = (0..width).find(|&j| {
                !self.basis.contains(&j) && reduced[j].signum_value() == Ordering::Greater
            });
            let Some(q) = entering else {
                return Pivoting::Optimal;
            };
            let mut leaving: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if *a <= F::zero() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < best || (ratio == best && self.basis[i] < self.basis[r]) {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leaving else {
                return Pivoting::Unbounded;
            };
            self.pivot(r, q);
            let factor = reduced[q].clone();
            for (d, a) in reduced.iter_mut().zip(&self.rows[r]) {
                if !a.is_zero() {
                    *d = d.sub_value(&factor.scale(a));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::formal_log::LogLinear;
    use crate::milp::model::Sense;
    use crate::rational::{rat, rat_int};
    use crate::Rational;

    type Model = MilpModel<Rational, Rational>;

    fn int(v: i64) -> Rational {
        rat_int(v)
    }

    #[test]
    fn box_constraints() {
        let mut m = Model::new(Sense::Maximize);
        let x1 = m.add_variable("x1", false, None);
        let x2 = m.add_variable("x2", false, None);
        m.set_objective(x1, int(1));
        m.set_objective(x2, int(1));
        m.add_row("c1", vec![(x1, int(1))], Relation::Le, int(2));
        m.add_row("c2", vec![(x2, int(1))], Relation::Le, int(3));
        let s = solve_lp_exact(&m).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.assignment, vec![int(2), int(3)]);
        assert_eq!(s.objective_value, Some(int(5)));
    }

    #[test]
    fn two_constraint_vertex() {
        let mut m = Model::new(Sense::Maximize);
        let x1 = m.add_variable("x1", false, None);
        let x2 = m.add_variable("x2", false, None);
        m.set_objective(x1, int(2));
        m.set_objective(x2, int(1));
        m.add_row("c1", vec![(x1, int(1)), (x2, int(1))], Relation::Le, int(4));
        m.add_row("c2", vec![(x1, int(1))], Relation::Le, int(3));
        let s = solve_lp_exact(&m).unwrap();
        assert_eq!(s.assignment, vec![int(3), int(1)]);
        assert_eq!(s.objective_value, Some(int(7)));
    }

    #[test]
    fn infeasible_negative_bound() {
        let mut m = Model::new(Sense::Maximize);
        let x1 = m.add_variable("x1", false, None);
        m.set_objective(x1, int(1));
        m.add_row("c", vec![(x1, int(1))], Relation::Le, int(-1));
        assert_eq!(solve_lp_exact(&m).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut m = Model::new(Sense::Maximize);
        let x = m.add_variable("x", false, None);
        let y = m.add_variable("y", false, None);
        m.set_objective(x, int(1));
        m.add_row("c", vec![(x, int(1)), (y, int(-1))], Relation::Le, int(1));
        assert_eq!(solve_lp_exact(&m).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn minimization_with_equalities_and_redundancy() {
        // min x + 2y s.t. x + y = 3, 2x + 2y = 6 (redundant), y >= 1/2
        let mut m = Model::new(Sense::Minimize);
        let x = m.add_variable("x", false, None);
        let y = m.add_variable("y", false, None);
        m.set_objective(x, int(1));
        m.set_objective(y, int(2));
        m.add_row("e1", vec![(x, int(1)), (y, int(1))], Relation::Eq, int(3));
        m.add_row("e2", vec![(x, int(2)), (y, int(2))], Relation::Eq, int(6));
        m.add_row("g", vec![(y, int(1))], Relation::Ge, rat(1, 2));
        let s = solve_lp_exact(&m).unwrap();
        assert_eq!(s.assignment, vec![rat(5, 2), rat(1, 2)]);
        assert_eq!(s.objective_value, Some(rat(7, 2)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling example under textbook pivoting.
        let mut m = Model::new(Sense::Maximize);
        let x: Vec<usize> = (0..4).map(|j| m.add_variable(format!("x{j}"), false, None)).collect();
        m.set_objective(x[0], rat(3, 4));
        m.set_objective(x[1], int(-150));
        m.set_objective(x[2], rat(1, 50));
        m.set_objective(x[3], int(-6));
        m.add_row("r1", vec![(x[0], rat(1, 4)), (x[1], int(-60)), (x[2], rat(-1, 25)), (x[3], int(9))], Relation::Le, int(0));
        m.add_row("r2", vec![(x[0], rat(1, 2)), (x[1], int(-90)), (x[2], rat(-1, 50)), (x[3], int(3))], Relation::Le, int(0));
        m.add_row("r3", vec![(x[2], int(1))], Relation::Le, int(1));
        let s = solve_lp_exact(&m).unwrap();
        assert_eq!(s.objective_value, Some(rat(1, 20)));
    }

    #[test]
    fn log_objective_prefers_larger_product() {
        // Choose one unit among columns with log(1/2), log(3/4), log(0).
        let mut m: MilpModel<Rational, LogLinear> = MilpModel::new(Sense::Maximize);
        let cols: Vec<usize> = (0..3).map(|j| m.add_variable(format!("x{j}"), false, None)).collect();
        m.set_objective(cols[0], LogLinear::log(&rat(1, 2)));
        m.set_objective(cols[1], LogLinear::log(&rat(3, 4)));
        m.set_objective(cols[2], LogLinear::log(&rat(0, 1)));
        m.add_row("pick", cols.iter().map(|&j| (j, int(1))).collect(), Relation::Eq, int(2));
        let s = solve_lp_exact(&m).unwrap();
        assert_eq!(s.assignment, vec![int(0), int(2), int(0)]);
        assert_eq!(s.objective_value.unwrap().exp_integral(), Some(rat(9, 16)));
    }

    #[test]
    fn generic_over_machine_rationals_and_floats() {
        use num_rational::Ratio;
        let mut m: MilpModel<Ratio<i64>, Ratio<i64>> = MilpModel::new(Sense::Maximize);
        let x1 = m.add_variable("x1", false, None);
        let x2 = m.add_variable("x2", false, None);
        m.set_objective(x1, Ratio::from_integer(2));
        m.set_objective(x2, Ratio::from_integer(1));
        m.add_row("c1", vec![(x1, Ratio::from_integer(1)), (x2, Ratio::from_integer(1))], Relation::Le, Ratio::from_integer(4));
        m.add_row("c2", vec![(x1, Ratio::from_integer(1))], Relation::Le, Ratio::from_integer(3));
        let s = solve_lp_exact(&m).unwrap();
        assert_eq!(s.objective_value, Some(Ratio::from_integer(7)));

        let mut f: MilpModel<f64, f64> = MilpModel::new(Sense::Maximize);
        let a = f.add_variable("a", false, Some(2.0));
        let b = f.add_variable("b", false, Some(3.0));
        f.set_objective(a, 1.0);
        f.set_objective(b, 1.0);
        let s = solve_lp_exact(&f).unwrap();
        assert_eq!(s.objective_value, Some(5.0));
    }
}
