//! Formal logarithms.
//!
//! `log q` is never evaluated numerically. A linear combination
//! `sum_i c_i log q_i` with rational `c_i` is compared with zero by clearing
//! denominators to integer exponents `k_i` and comparing
//! `prod_{k_i > 0} q_i^{k_i}` against `prod_{k_i < 0} q_i^{-k_i}` exactly.
//!
//! `log 0` is `-inf`. It is carried as a separate coefficient on an infinite
//! unit, which dominates every finite part in comparisons.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::scalar::ObjectiveValue;
use crate::error::{Error, Result};
use crate::rational::format_rational;
use crate::Rational;

/// `log(argument)` for a nonnegative rational argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalLog {
    argument: Rational,
}

impl FormalLog {
    pub fn new(argument: Rational) -> Result<Self> {
        if argument.is_negative() {
            return Err(Error::malformed(format!(
                "logarithm of negative value {}",
                format_rational(&argument)
            )));
        }
        Ok(FormalLog { argument })
    }

    pub fn argument(&self) -> &Rational {
        &self.argument
    }

    pub fn is_neg_infinite(&self) -> bool {
        self.argument.is_zero()
    }

    pub fn to_linear(&self) -> LogLinear {
        LogLinear::log(&self.argument)
    }
}

impl fmt::Display for FormalLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log({})", format_rational(&self.argument))
    }
}

/// `-omega * neg_inf + sum coef * log(base)` where `omega` is larger than any
/// finite value. Bases are positive and never 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogLinear {
    neg_inf: Rational,
    terms: BTreeMap<Rational, Rational>,
}

impl LogLinear {
    pub fn zero() -> Self {
        LogLinear::default()
    }

    pub fn log(argument: &Rational) -> Self {
        let mut out = LogLinear::zero();
        out.add_log(argument, &Rational::one());
        out
    }

    /// Adds `coef * log(argument)` in place.
    pub fn add_log(&mut self, argument: &Rational, coef: &Rational) {
        if coef.is_zero() || argument.is_one() {
            return;
        }
        if argument.is_zero() {
            self.neg_inf += coef;
            return;
        }
        let slot = self.terms.entry(argument.clone()).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(argument);
        }
    }

    /// Number of `-inf` units (coefficient of `log 0`).
    pub fn neg_inf_coefficient(&self) -> &Rational {
        &self.neg_inf
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    /// `exp` of the finite part, defined when every coefficient is an
    /// integer and no `-inf` part is present; `None` otherwise.
    pub fn exp_integral(&self) -> Option<Rational> {
        if !self.neg_inf.is_zero() {
            return None;
        }
        let mut acc = Rational::one();
        for (base, coef) in &self.terms {
            if !coef.is_integer() {
                return None;
            }
            let k = coef.to_integer().to_i32()?;
            acc *= Pow::pow(base, k);
        }
        Some(acc)
    }

    fn finite_sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut positive = Rational::one();
        let mut negative = Rational::one();
        for (base, coef) in &self.terms {
            let k = (coef * Rational::from_integer(lcm.clone())).to_integer();
            let e = k
                .abs()
                .to_u32()
                .expect("formal log exponent exceeds u32 range");
            let power: Rational = Pow::pow(base, e);
            if k.is_positive() {
                positive *= power;
            } else {
                negative *= power;
            }
        }
        positive.cmp(&negative)
    }
}

impl ObjectiveValue<Rational> for LogLinear {
    fn zero_value() -> Self {
        LogLinear::zero()
    }

    fn add_value(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.neg_inf += &other.neg_inf;
        for (base, coef) in &other.terms {
            out.add_log(base, coef);
        }
        out
    }

    fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return LogLinear::zero();
        }
        LogLinear {
            neg_inf: &self.neg_inf * factor,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (b.clone(), c * factor))
                .collect(),
        }
    }

    fn signum_value(&self) -> Ordering {
        if self.neg_inf.is_positive() {
            Ordering::Less
        } else if self.neg_inf.is_negative() {
            Ordering::Greater
        } else {
            self.finite_sign()
        }
    }
}

impl fmt::Display for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.neg_inf.is_zero() {
            parts.push(format!("{} log(0/1)", format_rational(&self.neg_inf)));
        }
        for (base, coef) in &self.terms {
            parts.push(format!("{} log({})", format_rational(coef), format_rational(base)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Compares `sum k_i log q_i` with `sum k'_i log q_i` for natural exponent
/// vectors via the formal-log route.
pub fn compare_log_combinations(bases: &[FormalLog], lhs: &[u64], rhs: &[u64]) -> Ordering {
    assert_eq!(bases.len(), lhs.len());
    assert_eq!(bases.len(), rhs.len());
    let mut diff = LogLinear::zero();
    for ((q, &a), &b) in bases.iter().zip(lhs).zip(rhs) {
        let k = Rational::from_integer(BigInt::from(a) - BigInt::from(b));
        diff.add_log(q.argument(), &k);
    }
    diff.signum_value()
}
