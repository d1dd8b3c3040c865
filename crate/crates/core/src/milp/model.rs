use std::fmt::{self, Write as _};

use super::formal_log::FormalLog;
use super::scalar::{ObjectiveValue, Scalar};
use crate::error::{Error, Result};
use crate::rational::format_rational;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds<F: PartialOrd>(&self, lhs: &F, rhs: &F) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A nonnegative column.
#[derive(Clone, Debug, PartialEq)]
pub struct Variable<F> {
    pub name: String,
    pub integer: bool,
    pub upper: Option<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row<F> {
    pub name: String,
    pub coeffs: Vec<(usize, F)>,
    pub relation: Relation,
    pub rhs: F,
}

impl<F: Scalar> Row<F> {
    pub fn activity(&self, x: &[F]) -> F {
        self.coeffs
            .iter()
            .fold(F::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())
    }

    pub fn is_satisfied(&self, x: &[F]) -> bool {
        self.relation.holds(&self.activity(x), &self.rhs)
    }
}

/// `sum_j log(q_j) * x_j >= log(bound)` over integer columns.
///
/// The row is decided exactly at integral points as
/// `prod_j q_j^{x_j} >= bound`; a bound of 0 is always satisfied.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductRow {
    pub name: String,
    pub terms: Vec<(usize, FormalLog)>,
    pub bound: FormalLog,
}

impl ProductRow {
    /// Exact check at an assignment whose referenced columns are naturals.
    /// `None` when a referenced column is not a natural number.
    pub fn is_satisfied<F: Scalar>(&self, x: &[F]) -> Option<bool> {
        use num_traits::{One, Pow};
        let mut product = Rational::one();
        for (j, q) in &self.terms {
            let k = x[*j].to_natural()?;
            product *= Pow::pow(q.argument(), k);
        }
        Some(product >= *self.bound.argument())
    }
}

/// `max` or `min` of `objective . x` subject to `rows`, `product_rows`,
/// `x >= 0`, per-column upper bounds and integrality flags.
#[derive(Clone, Debug, PartialEq)]
pub struct MilpModel<F, O> {
    pub variables: Vec<Variable<F>>,
    pub rows: Vec<Row<F>>,
    pub product_rows: Vec<ProductRow>,
    pub objective: Vec<O>,
    pub sense: Sense,
}

impl<F: Scalar, O: ObjectiveValue<F>> MilpModel<F, O> {
    pub fn new(sense: Sense) -> Self {
        MilpModel {
            variables: Vec::new(),
            rows: Vec::new(),
            product_rows: Vec::new(),
            objective: Vec::new(),
            sense,
        }
    }

    pub fn add_variable(&mut self, name: impl Into<String>, integer: bool, upper: Option<F>) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            integer,
            upper,
        });
        self.objective.push(O::zero_value());
        self.variables.len() - 1
    }

    pub fn set_objective(&mut self, column: usize, coefficient: O) {
        self.objective[column] = coefficient;
    }

    pub fn add_row(&mut self, name: impl Into<String>, coeffs: Vec<(usize, F)>, relation: Relation, rhs: F) -> usize {
        self.rows.push(Row {
            name: name.into(),
            coeffs,
            relation,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn add_product_row(&mut self, name: impl Into<String>, terms: Vec<(usize, FormalLog)>, bound: FormalLog) {
        self.product_rows.push(ProductRow {
            name: name.into(),
            terms,
            bound,
        });
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn integer_columns(&self) -> Vec<usize> {
        (0..self.variables.len()).filter(|&j| self.variables[j].integer).collect()
    }

    pub fn fractional_columns(&self) -> Vec<usize> {
        (0..self.variables.len()).filter(|&j| !self.variables[j].integer).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        if self.objective.len() != n {
            return Err(Error::malformed("objective length differs from column count"));
        }
        for row in &self.rows {
            if let Some((j, _)) = row.coeffs.iter().find(|(j, _)| *j >= n) {
                return Err(Error::malformed(format!("row {} references missing column {}", row.name, j)));
            }
        }
        for row in &self.product_rows {
            for (j, _) in &row.terms {
                if *j >= n {
                    return Err(Error::malformed(format!("row {} references missing column {}", row.name, j)));
                }
                if !self.variables[*j].integer {
                    return Err(Error::malformed(format!(
                        "product row {} references fractional column {}",
                        row.name, self.variables[*j].name
                    )));
                }
                if self.variables[*j].upper.is_none() {
                    return Err(Error::malformed(format!(
                        "product row {} references unbounded column {}",
                        row.name, self.variables[*j].name
                    )));
                }
            }
        }
        for v in &self.variables {
            if let Some(u) = &v.upper {
                if *u < F::zero() {
                    return Err(Error::malformed(format!("column {} has a negative upper bound", v.name)));
                }
            }
        }
        Ok(())
    }

    /// Index of the first row with a nonzero fractional-column coefficient,
    /// after checking that every later row also touches a fractional column
    /// and no earlier one does. Rows touching fractional columns form the
    /// tail block of the constraint matrix.
    pub fn fractional_tail_start(&self) -> Result<usize> {
        let touches: Vec<bool> = self
            .rows
            .iter()
            .map(|r| r.coeffs.iter().any(|(j, a)| !self.variables[*j].integer && !a.is_zero()))
            .collect();
        let start = touches.iter().position(|&t| t).unwrap_or(touches.len());
        if touches[start..].iter().all(|&t| t) {
            Ok(start)
        } else {
            Err(Error::malformed("rows touching fractional columns are not a tail block"))
        }
    }

    /// Dense coefficient matrix restricted to `rows x columns`.
    pub fn submatrix(&self, rows: &[usize], columns: &[usize]) -> Vec<Vec<F>> {
        rows.iter()
            .map(|&i| {
                let mut dense = vec![F::zero(); columns.len()];
                for (j, a) in &self.rows[i].coeffs {
                    if let Some(pos) = columns.iter().position(|c| c == j) {
                        dense[pos] = dense[pos].clone() + a.clone();
                    }
                }
                dense
            })
            .collect()
    }

    /// Constraint matrix of the fractional columns over the tail rows.
    pub fn fractional_submatrix(&self) -> Result<Vec<Vec<F>>> {
        let start = self.fractional_tail_start()?;
        let rows: Vec<usize> = (start..self.rows.len()).collect();
        Ok(self.submatrix(&rows, &self.fractional_columns()))
    }

    /// Objective value of an assignment.
    pub fn objective_value(&self, x: &[F]) -> O {
        self.objective
            .iter()
            .zip(x)
            .fold(O::zero_value(), |acc, (c, v)| acc.add_value(&c.scale(v)))
    }

    /// Linear rows, product rows, bounds, nonnegativity and integrality hold.
    pub fn is_feasible(&self, x: &[F]) -> bool {
        if x.len() != self.variables.len() {
            return false;
        }
        for (v, value) in self.variables.iter().zip(x) {
            if *value < F::zero() {
                return false;
            }
            if let Some(u) = &v.upper {
                if value > u {
                    return false;
                }
            }
            if v.integer && !value.is_integral() {
                return false;
            }
        }
        self.rows.iter().all(|r| r.is_satisfied(x))
            && self.product_rows.iter().all(|r| r.is_satisfied(x) == Some(true))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MilpSolution<F, O> {
    pub status: Status,
    /// One value per column; empty unless `status` is `Optimal`.
    pub assignment: Vec<F>,
    pub objective_value: Option<O>,
}

impl<F, O> MilpSolution<F, O> {
    pub fn infeasible() -> Self {
        MilpSolution {
            status: Status::Infeasible,
            assignment: Vec::new(),
            objective_value: None,
        }
    }

    pub fn unbounded() -> Self {
        MilpSolution {
            status: Status::Unbounded,
            assignment: Vec::new(),
            objective_value: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

/// Formatting of LP data in the plain-text model dump.
pub trait DumpValue {
    fn dump(&self) -> String;
}

impl DumpValue for Rational {
    fn dump(&self) -> String {
        format_rational(self)
    }
}

impl DumpValue for super::formal_log::LogLinear {
    fn dump(&self) -> String {
        self.to_string()
    }
}

impl<F: Scalar + DumpValue, O: ObjectiveValue<F> + DumpValue> MilpModel<F, O> {
    /// LP-style listing: rationals as `num/den`, logarithms as `log(num/den)`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        };
        let _ = writeln!(out, "{sense}");
        let terms: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero_value())
            .map(|(j, c)| format!("({}) {}", c.dump(), self.variables[j].name))
            .collect();
        let _ = writeln!(out, "  obj: {}", if terms.is_empty() { "0".to_string() } else { terms.join(" + ") });
        let _ = writeln!(out, "subject to");
        for row in &self.product_rows {
            let lhs: Vec<String> = row
                .terms
                .iter()
                .map(|(j, q)| format!("{} {}", q, self.variables[*j].name))
                .collect();
            let _ = writeln!(out, "  {}: {} >= {}", row.name, lhs.join(" + "), row.bound);
        }
        for row in &self.rows {
            let lhs: Vec<String> = row
                .coeffs
                .iter()
                .map(|(j, a)| format!("{} {}", a.dump(), self.variables[*j].name))
                .collect();
            let _ = writeln!(
                out,
                "  {}: {} {} {}",
                row.name,
                if lhs.is_empty() { "0".to_string() } else { lhs.join(" + ") },
                row.relation.symbol(),
                row.rhs.dump()
            );
        }
        let _ = writeln!(out, "bounds");
        for v in &self.variables {
            match &v.upper {
                Some(u) => {
                    let _ = writeln!(out, "  0 <= {} <= {}", v.name, u.dump());
                }
                None => {
                    let _ = writeln!(out, "  {} >= 0", v.name);
                }
            }
        }
        let ints: Vec<&str> = self
            .variables
            .iter()
            .filter(|v| v.integer)
            .map(|v| v.name.as_str())
            .collect();
        if !ints.is_empty() {
            let _ = writeln!(out, "general\n  {}", ints.join(" "));
        }
        let _ = write!(out, "end");
        out
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        };
        f.write_str(s)
    }
}
