//! Product knapsack, multicolored product knapsack and Small k-Sum, with
//! exhaustive and pseudo-polynomial oracles.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PkpItem {
    pub weight: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub profit: Rational,
}

impl PkpItem {
    pub fn new(weight: u64, profit: Rational) -> Self {
        PkpItem { weight, profit }
    }
}

/// Is there a subset of weight at most `capacity` whose profit product is
/// at least `target`?
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPkp", into = "RawPkp")]
pub struct PkpInstance {
    pub items: Vec<PkpItem>,
    pub capacity: u64,
    pub target: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawPkp {
    items: Vec<PkpItem>,
    capacity: u64,
    #[serde(with = "crate::rational::serde_str")]
    target: Rational,
}

impl TryFrom<RawPkp> for PkpInstance {
    type Error = Error;

    fn try_from(raw: RawPkp) -> Result<Self> {
        PkpInstance::new(raw.items, raw.capacity, raw.target)
    }
}

impl From<PkpInstance> for RawPkp {
    fn from(p: PkpInstance) -> Self {
        RawPkp {
            items: p.items,
            capacity: p.capacity,
            target: p.target,
        }
    }
}

impl PkpInstance {
    pub fn new(items: Vec<PkpItem>, capacity: u64, target: Rational) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("knapsack capacity must be positive"));
        }
        if !target.is_positive() {
            return Err(Error::invalid("knapsack target must be positive"));
        }
        if let Some(i) = items.iter().position(|it| !it.profit.is_positive()) {
            return Err(Error::invalid(format!("item {i} has a non-positive profit")));
        }
        Ok(PkpInstance {
            items,
            capacity,
            target,
        })
    }

    pub fn with_target(&self, target: Rational) -> Result<Self> {
        PkpInstance::new(self.items.clone(), self.capacity, target)
    }
}

/// Product knapsack with items partitioned into color classes; exactly one
/// item per class must be chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMpk", into = "RawMpk")]
pub struct MpkInstance {
    pub knapsack: PkpInstance,
    /// Item indices of every class, in class order.
    pub classes: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawMpk {
    items: Vec<PkpItem>,
    capacity: u64,
    #[serde(with = "crate::rational::serde_str")]
    target: Rational,
    classes: Vec<Vec<usize>>,
}

impl TryFrom<RawMpk> for MpkInstance {
    type Error = Error;

    fn try_from(raw: RawMpk) -> Result<Self> {
        MpkInstance::new(PkpInstance::new(raw.items, raw.capacity, raw.target)?, raw.classes)
    }
}

impl From<MpkInstance> for RawMpk {
    fn from(m: MpkInstance) -> Self {
        RawMpk {
            items: m.knapsack.items,
            capacity: m.knapsack.capacity,
            target: m.knapsack.target,
            classes: m.classes,
        }
    }
}

impl MpkInstance {
    pub fn new(knapsack: PkpInstance, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; knapsack.items.len()];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::invalid(format!("color class {c} is empty")));
            }
            for &i in class {
                match seen.get_mut(i) {
                    None => return Err(Error::invalid(format!("class {c} references missing item {i}"))),
                    Some(true) => return Err(Error::invalid(format!("item {i} appears in two classes"))),
                    Some(s) => *s = true,
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("item {i} belongs to no class")));
        }
        Ok(MpkInstance { knapsack, classes })
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn with_target(&self, target: Rational) -> Result<Self> {
        MpkInstance::new(self.knapsack.with_target(target)?, self.classes.clone())
    }
}

/// Is there a `k`-subset of `numbers` summing to `target`? Unshifted
/// instances have target 0 and numbers in `[-n^{2k}, n^{2k}]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallKSumInstance {
    pub numbers: Vec<i128>,
    pub k: usize,
    #[serde(default)]
    pub target: i128,
    #[serde(default)]
    pub shifted: bool,
}

impl SmallKSumInstance {
    /// Unshifted instance; checks the range invariant.
    pub fn new(numbers: Vec<i128>, k: usize) -> Result<Self> {
        let inst = SmallKSumInstance {
            numbers,
            k,
            target: 0,
            shifted: false,
        };
        inst.check_range()?;
        Ok(inst)
    }

    /// `n^{2k}`, the magnitude bound of unshifted numbers.
    pub fn magnitude_bound(&self) -> Result<i128> {
        checked_pow(self.numbers.len() as i128, 2 * self.k)
    }

    pub fn check_range(&self) -> Result<()> {
        if self.shifted {
            return Ok(());
        }
        let bound = self.magnitude_bound()?;
        match self.numbers.iter().position(|s| s.abs() > bound) {
            Some(i) => Err(Error::invalid(format!(
                "number {} at index {i} is outside [-{bound}, {bound}]",
                self.numbers[i]
            ))),
            None => Ok(()),
        }
    }
}

pub(crate) fn checked_pow(base: i128, exp: usize) -> Result<i128> {
    let exp = u32::try_from(exp).map_err(|_| Error::Overflow("raising to a power"))?;
    base.checked_pow(exp).ok_or(Error::Overflow("raising to a power"))
}

/// Outcome of a (multicolored) product knapsack oracle. `witness` lists item
/// indices in increasing order (PKP) or one item per class (MPK).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackResult {
    pub best_product: Option<Rational>,
    pub witness: Option<Vec<usize>>,
    pub decision: bool,
}

impl KnapsackResult {
    fn from_best(best: Option<(Rational, Vec<usize>)>, target: &Rational) -> Self {
        let decision = best.as_ref().is_some_and(|(p, _)| p >= target);
        let (best_product, witness) = match best {
            Some((p, w)) => (Some(p), Some(w)),
            None => (None, None),
        };
        KnapsackResult {
            best_product,
            witness,
            decision,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSumResult {
    pub decision: bool,
    /// Indices of the summands, increasing.
    pub witness: Option<Vec<usize>>,
}

pub const DEFAULT_PKP_ITEM_CAP: usize = 24;
pub const DEFAULT_PKP_DP_CAP: u128 = 10_000_000;
pub const DEFAULT_SELECTION_CAP: u128 = 10_000_000;

/// Best product over all subsets within capacity; among equal products the
/// first subset in increasing bitmask order (item 0 is the lowest bit).
pub fn solve_pkp_bruteforce(inst: &PkpInstance) -> Result<KnapsackResult> {
    let n = inst.items.len();
    check_cap("PKP brute-force items", n as u128, DEFAULT_PKP_ITEM_CAP as u128)?;
    // Depth-first over include/exclude decisions, pruned by capacity; ties
    // resolve to the smaller mask, which is the first in bitmask order.
    // Products are carried as unreduced fractions.
    let mut best: Option<(BigInt, BigInt, u32)> = None;
    let mut stack: Vec<(usize, u32, u64, BigInt, BigInt)> = vec![(0, 0, 0, BigInt::one(), BigInt::one())];
    while let Some((i, mask, weight, num, den)) = stack.pop() {
        if i == n {
            let better = match &best {
                None => true,
                Some((bn, bd, m)) => match (&num * bd).cmp(&(bn * &den)) {
                    Ordering::Greater => true,
                    Ordering::Equal => mask < *m,
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((num, den, mask));
            }
            continue;
        }
        let item = &inst.items[i];
        let with = weight.saturating_add(item.weight);
        if with <= inst.capacity {
            stack.push((i + 1, mask | 1 << i, with, &num * item.profit.numer(), &den * item.profit.denom()));
        }
        stack.push((i + 1, mask, weight, num, den));
    }
    let best = best.map(|(num, den, mask)| (Rational::new(num, den), mask));
    let best = best.map(|(p, mask)| (p, (0..n).filter(|i| mask >> i & 1 == 1).collect()));
    Ok(KnapsackResult::from_best(best, &inst.target))
}

/// Weight-indexed table of the best product; exact rationals per cell.
pub fn solve_pkp_dp(inst: &PkpInstance) -> Result<KnapsackResult> {
    let n = inst.items.len();
    let total: u64 = inst.items.iter().fold(0u64, |a, it| a.saturating_add(it.weight));
    let cap = inst.capacity.min(total);
    check_cap("PKP DP cells", (n as u128 + 1) * (u128::from(cap) + 1), DEFAULT_PKP_DP_CAP)?;
    let width = cap as usize + 1;
    let mut best = vec![Rational::one(); width];
    let mut take = vec![false; n * width];
    for (i, item) in inst.items.iter().enumerate() {
        if item.weight > cap {
            continue;
        }
        let w0 = item.weight as usize;
        for w in (w0..width).rev() {
            let candidate = &best[w - w0] * &item.profit;
            if candidate > best[w] {
                best[w] = candidate;
                take[i * width + w] = true;
            }
        }
    }
    let mut witness = Vec::new();
    let mut w = cap as usize;
    for i in (0..n).rev() {
        if take[i * width + w] {
            witness.push(i);
            w -= inst.items[i].weight as usize;
        }
    }
    witness.reverse();
    let value = best[cap as usize].clone();
    Ok(KnapsackResult::from_best(Some((value, witness)), &inst.target))
}

/// Best product over selections of exactly one item per class within
/// capacity, in lexicographic order of in-class positions; the first
/// maximizer is kept.
pub fn solve_mpk_bruteforce(inst: &MpkInstance) -> Result<KnapsackResult> {
    let count = inst
        .classes
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    check_cap("MPK selections", count, DEFAULT_SELECTION_CAP)?;
    let items = &inst.knapsack.items;
    let k = inst.classes.len();
    let mut pos = vec![0usize; k];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        let chosen: Vec<usize> = pos.iter().zip(&inst.classes).map(|(&p, c)| c[p]).collect();
        let weight = chosen.iter().fold(0u64, |a, &i| a.saturating_add(items[i].weight));
        if weight <= inst.knapsack.capacity {
            let product = chosen.iter().fold(Rational::one(), |acc, &i| acc * &items[i].profit);
            if best.as_ref().map_or(true, |(b, _)| product > *b) {
                best = Some((product, chosen));
            }
        }
        let mut c = k;
        loop {
            if c == 0 {
                return Ok(KnapsackResult::from_best(best, &inst.knapsack.target));
            }
            c -= 1;
            pos[c] += 1;
            if pos[c] < inst.classes[c].len() {
                break;
            }
            pos[c] = 0;
        }
    }
}

/// First `k`-subset in lexicographic index order summing to the target.
pub fn solve_small_ksum_bruteforce(inst: &SmallKSumInstance) -> Result<KSumResult> {
    let n = inst.numbers.len();
    let k = inst.k;
    if k > n {
        return Ok(KSumResult {
            decision: false,
            witness: None,
        });
    }
    check_cap("k-subsets", binomial(n, k), DEFAULT_SELECTION_CAP)?;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut sum: i128 = 0;
        for &i in &idx {
            sum = sum.checked_add(inst.numbers[i]).ok_or(Error::Overflow("summing a k-subset"))?;
        }
        if sum == inst.target {
            return Ok(KSumResult {
                decision: true,
                witness: Some(idx),
            });
        }
        // Next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(KSumResult {
                    decision: false,
                    witness: None,
                });
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Product of the profits of `witness`; `None` if any index is out of range.
pub fn selection_product(items: &[PkpItem], witness: &[usize]) -> Option<Rational> {
    witness
        .iter()
        .try_fold(Rational::one(), |acc, &i| items.get(i).map(|it| acc * &it.profit))
}

/// Largest number of items that fit together, found by packing the
/// lightest items first.
pub fn max_items_fitting(inst: &PkpInstance) -> usize {
    let mut weights: Vec<u64> = inst.items.iter().map(|it| it.weight).collect();
    weights.sort_unstable();
    let mut total = 0u64;
    weights
        .iter()
        .take_while(|&&w| {
            total = total.saturating_add(w);
            total <= inst.capacity
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn items(pairs: &[(u64, Rational)]) -> Vec<PkpItem> {
        pairs.iter().map(|(w, p)| PkpItem::new(*w, p.clone())).collect()
    }

    fn pkp(capacity: u64, target: Rational) -> PkpInstance {
        PkpInstance::new(items(&[(2, rat_int(3)), (3, rat_int(4)), (4, rat_int(5))]), capacity, target).unwrap()
    }

    #[test]
    fn pkp_examples() {
        let r = solve_pkp_bruteforce(&pkp(5, rat_int(12))).unwrap();
        assert_eq!(r.best_product, Some(rat_int(12)));
        assert_eq!(r.witness, Some(vec![0, 1]));
        assert!(r.decision);
        let r = solve_pkp_bruteforce(&pkp(4, rat_int(12))).unwrap();
        assert_eq!(r.best_product, Some(rat_int(5)));
        assert!(!r.decision);
        let empty = PkpInstance::new(vec![], 1, rat_int(1)).unwrap();
        let r = solve_pkp_bruteforce(&empty).unwrap();
        assert_eq!(r.best_product, Some(rat_int(1)));
        assert_eq!(r.witness, Some(vec![]));
        assert!(r.decision);
    }

    #[test]
    fn pkp_dp_agrees_on_examples() {
        for inst in [
            pkp(5, rat_int(12)),
            pkp(4, rat_int(12)),
            PkpInstance::new(vec![], 1, rat_int(1)).unwrap(),
        ] {
            let a = solve_pkp_bruteforce(&inst).unwrap();
            let b = solve_pkp_dp(&inst).unwrap();
            assert_eq!(a.best_product, b.best_product);
            assert_eq!(a.decision, b.decision);
            assert_eq!(selection_product(&inst.items, b.witness.as_ref().unwrap()), b.best_product);
        }
    }

    #[test]
    fn pkp_dp_heavy_item_and_zero_weights() {
        let heavy = PkpInstance::new(items(&[(9, rat_int(7))]), 3, rat_int(2)).unwrap();
        assert_eq!(solve_pkp_dp(&heavy).unwrap().best_product, Some(rat_int(1)));
        let free = PkpInstance::new(items(&[(0, rat_int(2)), (0, rat(1, 2)), (0, rat_int(3))]), 1, rat_int(1)).unwrap();
        let r = solve_pkp_dp(&free).unwrap();
        assert_eq!(r.best_product, Some(rat_int(6)));
        assert_eq!(r.witness, Some(vec![0, 2]));
    }

    fn mpk(target: Rational) -> MpkInstance {
        let knapsack = PkpInstance::new(
            items(&[(1, rat(1, 2)), (3, rat(3, 4)), (0, rat(1, 3)), (2, rat(2, 3))]),
            3,
            target,
        )
        .unwrap();
        MpkInstance::new(knapsack, vec![vec![0, 1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn mpk_examples() {
        let r = solve_mpk_bruteforce(&mpk(rat(1, 3))).unwrap();
        assert_eq!(r.best_product, Some(rat(1, 3)));
        assert_eq!(r.witness, Some(vec![0, 3]));
        assert!(r.decision);
        let r = solve_mpk_bruteforce(&mpk(rat(1, 2))).unwrap();
        assert_eq!(r.best_product, Some(rat(1, 3)));
        assert!(!r.decision);
        let none = MpkInstance::new(PkpInstance::new(vec![], 1, rat_int(1)).unwrap(), vec![]).unwrap();
        let r = solve_mpk_bruteforce(&none).unwrap();
        assert_eq!(r.best_product, Some(rat_int(1)));
        assert_eq!(r.witness, Some(vec![]));
    }

    #[test]
    fn mpk_overweight_is_no() {
        let knapsack = PkpInstance::new(items(&[(5, rat(1, 2))]), 3, rat(1, 4)).unwrap();
        let inst = MpkInstance::new(knapsack, vec![vec![0]]).unwrap();
        let r = solve_mpk_bruteforce(&inst).unwrap();
        assert_eq!(r.best_product, None);
        assert!(!r.decision);
    }

    #[test]
    fn mpk_partition_validation() {
        let knapsack = PkpInstance::new(items(&[(1, rat(1, 2)), (2, rat(1, 2))]), 3, rat(1, 4)).unwrap();
        assert!(MpkInstance::new(knapsack.clone(), vec![vec![0]]).is_err());
        assert!(MpkInstance::new(knapsack.clone(), vec![vec![0, 1], vec![1]]).is_err());
        assert!(MpkInstance::new(knapsack.clone(), vec![vec![0, 1], vec![]]).is_err());
        assert!(MpkInstance::new(knapsack, vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn ksum_examples() {
        let r = solve_small_ksum_bruteforce(&SmallKSumInstance::new(vec![-1, 1, 2], 2).unwrap()).unwrap();
        assert!(r.decision);
        assert_eq!(r.witness, Some(vec![0, 1]));
        let r = solve_small_ksum_bruteforce(&SmallKSumInstance::new(vec![1, 2, 4], 2).unwrap()).unwrap();
        assert!(!r.decision);
        let r = solve_small_ksum_bruteforce(&SmallKSumInstance::new(vec![1, -1], 0).unwrap()).unwrap();
        assert!(r.decision);
        assert_eq!(r.witness, Some(vec![]));
    }

    #[test]
    fn ksum_range_invariant() {
        // n = 2, k = 1: bound 4.
        assert!(SmallKSumInstance::new(vec![4, -4], 1).is_ok());
        assert!(SmallKSumInstance::new(vec![5, 0], 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = mpk(rat(1, 3));
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"profit\":\"1/2\""));
        let back: MpkInstance = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let k = SmallKSumInstance::new(vec![-1, 1, 2], 2).unwrap();
        let back: SmallKSumInstance = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        assert_eq!(back, k);
        let k: SmallKSumInstance = serde_json::from_str(r#"{"numbers":[1,-1],"k":2}"#).unwrap();
        assert_eq!(k.target, 0);
        assert!(!k.shifted);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(30, 15), 155_117_520);
    }
}
