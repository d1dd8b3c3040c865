//! Challenge-the-champ bribery instances, bribe plans and their evaluation.
//!
//! A challenger's bribe vector lists `(bribe, losing probability)` pairs
//! with strictly increasing bribes. The champ wins the tournament with the
//! product of the selected losing probabilities, so challenger order never
//! matters and the champ itself carries no data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{check_probability, product};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BribeEntry {
    pub bribe: u64,
    /// Probability that the challenger loses against the champ after this bribe.
    #[serde(rename = "p", with = "crate::rational::serde_str")]
    pub losing_probability: Rational,
}

impl BribeEntry {
    pub fn new(bribe: u64, losing_probability: Rational) -> Self {
        BribeEntry {
            bribe,
            losing_probability,
        }
    }
}

/// Price menu of one challenger. Nonempty, bribes strictly increasing,
/// probabilities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBribeVector", into = "RawBribeVector")]
pub struct BribeVector {
    entries: Vec<BribeEntry>,
}

#[derive(Serialize, Deserialize)]
struct RawBribeVector {
    entries: Vec<BribeEntry>,
}

impl TryFrom<RawBribeVector> for BribeVector {
    type Error = Error;

    fn try_from(raw: RawBribeVector) -> Result<Self> {
        BribeVector::new(raw.entries)
    }
}

impl From<BribeVector> for RawBribeVector {
    fn from(v: BribeVector) -> Self {
        RawBribeVector { entries: v.entries }
    }
}

impl BribeVector {
    pub fn new(entries: Vec<BribeEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyBribeVector);
        }
        for (index, pair) in entries.windows(2).enumerate() {
            if pair[1].bribe <= pair[0].bribe {
                return Err(Error::BribeOrder {
                    index: index + 1,
                    previous: pair[0].bribe,
                    bribe: pair[1].bribe,
                });
            }
        }
        for e in &entries {
            check_probability(&e.losing_probability)?;
        }
        Ok(BribeVector { entries })
    }

    /// Convenience constructor from `(bribe, probability)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(b, p)| BribeEntry::new(b, p))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[BribeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, index: usize) -> Option<&BribeEntry> {
        self.entries.get(index)
    }

    /// Losing probabilities strictly increase along the vector.
    pub fn is_monotone(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[0].losing_probability < w[1].losing_probability)
    }

    /// The first entry is free, i.e. "no bribe" is an option.
    pub fn canonical_first_zero(&self) -> bool {
        self.entries[0].bribe == 0
    }

    pub fn bribe_values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.bribe).collect()
    }

    /// The set of probability values of this vector, in vector order.
    pub fn probability_profile(&self) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|e| e.losing_probability.clone())
            .collect()
    }

    /// Best losing probability purchasable with at most `budget`, if any
    /// entry is affordable.
    pub fn best_within(&self, budget: u64) -> Option<&Rational> {
        self.entries
            .iter()
            .filter(|e| e.bribe <= budget)
            .map(|e| &e.losing_probability)
            .max()
    }
}

/// Validates raw entries and normalizes them in one step.
pub fn normalize_entries(entries: Vec<BribeEntry>) -> Result<BribeVector> {
    Ok(normalize_bribe_vector(&BribeVector::new(entries)?))
}

/// Drops every entry that does not strictly raise the losing probability
/// over the entry kept before it.
///
/// Deleting entry `j + 1` whenever `p_j >= p_{j+1}` and repeating until no
/// such pair remains is the same as this single left-to-right pass. The
/// best probability purchasable at any budget is unchanged, because a
/// deleted entry is always dominated by a cheaper kept one.
pub fn normalize_bribe_vector(v: &BribeVector) -> BribeVector {
    let (normalized, _) = normalize_with_map(v);
    normalized
}

/// As [`normalize_bribe_vector`], also returning for each kept entry its
/// index in the original vector.
pub fn normalize_with_map(v: &BribeVector) -> (BribeVector, Vec<usize>) {
    let mut kept: Vec<usize> = Vec::with_capacity(v.len());
    for (j, e) in v.entries.iter().enumerate() {
        match kept.last() {
            Some(&last) if v.entries[last].losing_probability >= e.losing_probability => {}
            _ => kept.push(j),
        }
    }
    let entries = kept.iter().map(|&j| v.entries[j].clone()).collect();
    (BribeVector { entries }, kept)
}

/// Constructive bribery instance for a challenge-the-champ tournament.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct CbcctInstance {
    pub bribe_vectors: Vec<BribeVector>,
    pub budget: u64,
    pub threshold: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    players: Vec<BribeVector>,
    budget: u64,
    #[serde(with = "crate::rational::serde_str")]
    threshold: Rational,
}

impl TryFrom<RawInstance> for CbcctInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        CbcctInstance::new(raw.players, raw.budget, raw.threshold)
    }
}

impl From<CbcctInstance> for RawInstance {
    fn from(inst: CbcctInstance) -> Self {
        RawInstance {
            players: inst.bribe_vectors,
            budget: inst.budget,
            threshold: inst.threshold,
        }
    }
}

impl CbcctInstance {
    pub fn new(bribe_vectors: Vec<BribeVector>, budget: u64, threshold: Rational) -> Result<Self> {
        check_probability(&threshold)?;
        Ok(CbcctInstance {
            bribe_vectors,
            budget,
            threshold,
        })
    }

    pub fn num_challengers(&self) -> usize {
        self.bribe_vectors.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.bribe_vectors.iter().all(BribeVector::is_monotone)
    }

    pub fn max_vector_len(&self) -> usize {
        self.bribe_vectors.iter().map(BribeVector::len).max().unwrap_or(0)
    }

    /// Number of distinct bribe values over all challengers.
    pub fn distinct_bribe_values(&self) -> usize {
        let mut values: Vec<u64> = self
            .bribe_vectors
            .iter()
            .flat_map(|v| v.entries().iter().map(|e| e.bribe))
            .collect();
        values.sort_unstable();
        values.dedup();
        values.len()
    }

    pub fn distinct_probabilities(&self) -> usize {
        let mut values: Vec<&Rational> = self
            .bribe_vectors
            .iter()
            .flat_map(|v| v.entries().iter().map(|e| &e.losing_probability))
            .collect();
        values.sort();
        values.dedup();
        values.len()
    }

    /// Number of complete plans, `prod_i len_i`, saturating.
    pub fn plan_count(&self) -> u128 {
        self.bribe_vectors
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.len() as u128))
    }

    pub fn with_budget(&self, budget: u64) -> Self {
        CbcctInstance {
            budget,
            ..self.clone()
        }
    }

    pub fn with_threshold(&self, threshold: Rational) -> Result<Self> {
        CbcctInstance::new(self.bribe_vectors.clone(), self.budget, threshold)
    }
}

/// Replaces every bribe vector by its normalized (monotone) form.
///
/// Kept for API symmetry with [`normalize_bribe_vector`]; every vector in a
/// constructed instance already satisfies the ordering invariant, so this
/// cannot fail.
pub fn normalize_instance(inst: &CbcctInstance) -> CbcctInstance {
    CbcctInstance {
        bribe_vectors: inst.bribe_vectors.iter().map(normalize_bribe_vector).collect(),
        budget: inst.budget,
        threshold: inst.threshold.clone(),
    }
}

/// Normalized instance plus, per challenger, the original index of every
/// kept entry.
pub fn normalize_instance_with_map(inst: &CbcctInstance) -> (CbcctInstance, Vec<Vec<usize>>) {
    let (vectors, maps): (Vec<_>, Vec<_>) = inst.bribe_vectors.iter().map(normalize_with_map).unzip();
    (
        CbcctInstance {
            bribe_vectors: vectors,
            budget: inst.budget,
            threshold: inst.threshold.clone(),
        },
        maps,
    )
}

/// One selected entry (0-based) per challenger.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BribePlan {
    pub choices: Vec<usize>,
}

impl BribePlan {
    pub fn new(choices: Vec<usize>) -> Self {
        BribePlan { choices }
    }

    /// The plan that bribes nobody beyond each challenger's first entry.
    pub fn first_entries(n: usize) -> Self {
        BribePlan { choices: vec![0; n] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanValue {
    pub cost: u64,
    pub win_probability: Rational,
}

/// Total bribe and the champ's winning probability under `plan`.
///
/// Costs saturate at `u64::MAX`, which exceeds every representable budget.
pub fn evaluate_plan(inst: &CbcctInstance, plan: &BribePlan) -> Result<PlanValue> {
    if plan.choices.len() != inst.num_challengers() {
        return Err(Error::PlanLength {
            expected: inst.num_challengers(),
            got: plan.choices.len(),
        });
    }
    let mut cost = 0u64;
    let mut selected = Vec::with_capacity(plan.choices.len());
    for (challenger, (&choice, vector)) in plan.choices.iter().zip(&inst.bribe_vectors).enumerate() {
        let entry = vector.entry(choice).ok_or(Error::ChoiceOutOfRange {
            challenger,
            choice,
            len: vector.len(),
        })?;
        cost = cost.saturating_add(entry.bribe);
        selected.push(&entry.losing_probability);
    }
    Ok(PlanValue {
        cost,
        win_probability: product(selected),
    })
}
