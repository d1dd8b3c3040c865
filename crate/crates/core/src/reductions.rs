//! Instance transformers along the chain Small k-Sum -> product knapsack ->
//! multicolored product knapsack -> CBCCT -> cup bribery, and a verifier
//! comparing oracle decisions on both sides.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::cup::{CupInstance, PairVector};
use crate::error::{Error, Result};
use crate::instance::{BribeEntry, BribePlan, BribeVector, CbcctInstance};
use crate::knapsack::{checked_pow, MpkInstance, PkpInstance, PkpItem, SmallKSumInstance};
use crate::Rational;

/// `2n^{2k} + n^{k^2}`.
pub fn ksum_shift(n: usize, k: usize) -> Result<i128> {
    let a = checked_pow(n as i128, 2 * k)?;
    let b = checked_pow(n as i128, k.checked_mul(k).ok_or(Error::Overflow("squaring k"))?)?;
    a.checked_mul(2)
        .and_then(|x| x.checked_add(b))
        .ok_or(Error::Overflow("computing the k-Sum shift"))
}

/// Adds `2n^{2k} + n^{k^2}` to every number; the target becomes `k` times
/// the shift. A `k`-subset sums to 0 iff its shifted copy sums to the
/// shifted target.
pub fn shift_ksum(inst: &SmallKSumInstance) -> Result<SmallKSumInstance> {
    if inst.shifted {
        return Err(Error::invalid("instance is already shifted"));
    }
    if inst.target != 0 {
        return Err(Error::invalid("unshifted instances have target 0"));
    }
    inst.check_range()?;
    let n = inst.numbers.len();
    let k = inst.k;
    let shift = ksum_shift(n, k)?;
    let bound = inst.magnitude_bound()?;
    let tail = checked_pow(n as i128, k * k)?;
    let numbers = inst
        .numbers
        .iter()
        .map(|&s| s.checked_add(shift).ok_or(Error::Overflow("shifting a number")))
        .collect::<Result<Vec<i128>>>()?;
    for &s in &numbers {
        assert!(
            bound + tail <= s && s <= 3 * bound + tail,
            "shifted number {s} outside its proven range"
        );
    }
    let target = (k as i128)
        .checked_mul(shift)
        .ok_or(Error::Overflow("computing the shifted target"))?;
    Ok(SmallKSumInstance {
        numbers,
        k,
        target,
        shifted: true,
    })
}

/// Item weights `s'_i`, profits `(1 - s'_i / T^2)^{-1}`, capacity `T` and
/// target `(1 - 1/T + 1/(2T^2))^{-1}`. Profits stay exact rationals.
pub fn ksum_to_pkp(inst: &SmallKSumInstance) -> Result<PkpInstance> {
    if !inst.shifted {
        return Err(Error::invalid("k-Sum instance must be shifted first"));
    }
    if inst.target <= 0 {
        return Err(Error::invalid("shifted target must be positive"));
    }
    let t = BigInt::from(inst.target);
    let t2 = &t * &t;
    let mut items = Vec::with_capacity(inst.numbers.len());
    for &s in &inst.numbers {
        let weight = u64::try_from(s).map_err(|_| Error::invalid(format!("shifted number {s} is not a valid weight")))?;
        let denom = &t2 - BigInt::from(s);
        if !denom.is_positive() {
            return Err(Error::invalid(format!("shifted number {s} is at least T^2")));
        }
        items.push(PkpItem::new(weight, Rational::new(t2.clone(), denom)));
    }
    let capacity = u64::try_from(inst.target).map_err(|_| Error::Overflow("converting the capacity"))?;
    let two_t2 = BigInt::from(2) * &t2;
    let target = Rational::new(two_t2.clone(), two_t2 - BigInt::from(2) * &t + 1);
    PkpInstance::new(items, capacity, target)
}

/// Proof-size assumptions of the k-Sum to product knapsack argument.
pub fn ksum_preconditions_met(shifted: &SmallKSumInstance) -> bool {
    shifted.k >= 4 && shifted.target >= 4
}

/// Product knapsack as a multicolored one: item `i` becomes class
/// `{(0, 1), (w_i, v_i)}`, the zero-weight profit-1 dummy standing for
/// "item not taken". The dummy of class `i` is item `2i`.
pub fn pkp_to_mpk(inst: &PkpInstance) -> Result<MpkInstance> {
    let mut items = Vec::with_capacity(2 * inst.items.len());
    let mut classes = Vec::with_capacity(inst.items.len());
    for (i, item) in inst.items.iter().enumerate() {
        items.push(PkpItem::new(0, Rational::one()));
        items.push(item.clone());
        classes.push(vec![2 * i, 2 * i + 1]);
    }
    MpkInstance::new(PkpInstance::new(items, inst.capacity, inst.target.clone())?, classes)
}

/// One challenger per color class with entries `(w, v)` sorted by weight,
/// budget `C` and threshold `V`. Among items of equal weight only the most
/// profitable is kept.
pub fn mpk_to_cbcct(inst: &MpkInstance) -> Result<CbcctInstance> {
    mpk_to_cbcct_with_map(inst).map(|(c, _)| c)
}

/// As [`mpk_to_cbcct`], also returning for each challenger the item index
/// behind every entry.
pub fn mpk_to_cbcct_with_map(inst: &MpkInstance) -> Result<(CbcctInstance, Vec<Vec<usize>>)> {
    let items = &inst.knapsack.items;
    let one = Rational::one();
    let mut vectors = Vec::with_capacity(inst.classes.len());
    let mut maps = Vec::with_capacity(inst.classes.len());
    for (c, class) in inst.classes.iter().enumerate() {
        let mut members: Vec<usize> = class.clone();
        for &i in &members {
            let p = &items[i].profit;
            if !p.is_positive() || *p > one {
                return Err(Error::invalid(format!("item {i} has profit outside (0, 1]")));
            }
        }
        members.sort_by(|&a, &b| items[a].weight.cmp(&items[b].weight).then(items[b].profit.cmp(&items[a].profit)));
        let mut entries: Vec<BribeEntry> = Vec::new();
        let mut map: Vec<usize> = Vec::new();
        for (pos, &i) in members.iter().enumerate() {
            if pos > 0 {
                let prev = members[pos - 1];
                if items[prev].weight == items[i].weight {
                    if items[prev].profit == items[i].profit {
                        return Err(Error::invalid(format!(
                            "class {c} has items {prev} and {i} with equal weight and profit"
                        )));
                    }
                    continue;
                }
            }
            entries.push(BribeEntry::new(items[i].weight, items[i].profit.clone()));
            map.push(i);
        }
        vectors.push(BribeVector::new(entries)?);
        maps.push(map);
    }
    let target = &inst.knapsack.target;
    if *target > one {
        return Err(Error::invalid("target exceeds 1 and cannot be a probability threshold"));
    }
    Ok((CbcctInstance::new(vectors, inst.knapsack.capacity, target.clone())?, maps))
}

/// Leaf position (1-based) of main player `i` (1-based challenger index).
pub fn main_player_position(i: usize) -> usize {
    (1usize << (i - 1)) + 1
}

/// Cup on `2^n` players for `n` challengers. Player 0 is the favorite at
/// position 1, player `i` in `1..=n` is challenger `i` at position
/// `2^{i-1} + 1`, and dummies fill the remaining positions in order.
///
/// The pair `(i, 0)` carries challenger `i`'s bribe vector and is pair
/// `i - 1`, so a CBCCT plan maps onto the first `n` pair choices. Main
/// players beat dummies surely, every other meeting is even, and pairs
/// that cannot meet are omitted. All vectors except the first `n` have the
/// single entry at price 0.
pub fn cbcct_to_cup(inst: &CbcctInstance) -> Result<CupInstance> {
    let n = inst.num_challengers();
    if n == 0 {
        return Err(Error::invalid("the cup construction needs at least one challenger"));
    }
    if n >= usize::BITS as usize - 1 {
        return Err(Error::Overflow("sizing the bracket"));
    }
    let size = 1usize << n;
    let mut seeding = vec![0usize; size];
    seeding[0] = 1;
    for i in 1..=n {
        seeding[i] = main_player_position(i);
    }
    let mut used = vec![false; size + 1];
    for &p in &seeding[..=n] {
        used[p] = true;
    }
    let mut free = (1..=size).filter(|&p| !used[p]);
    for slot in seeding.iter_mut().skip(n + 1) {
        *slot = free.next().expect("positions match players");
    }

    let is_main = |p: usize| p >= 1 && p <= n;
    let is_dummy = |p: usize| p > n;
    let surely = BribeVector::from_pairs([(0, Rational::one())])?;
    let even = BribeVector::from_pairs([(0, Rational::new(BigInt::one(), BigInt::from(2)))])?;
    let mut pairs: Vec<PairVector> = (1..=n)
        .map(|i| PairVector {
            player: i,
            opponent: 0,
            vector: inst.bribe_vectors[i - 1].clone(),
        })
        .collect();

    // Possible subtree winners, by leaf position.
    let mut leaves = vec![0usize; size];
    for (p, &pos) in seeding.iter().enumerate() {
        leaves[pos - 1] = p;
    }
    let mut level: Vec<Vec<usize>> = leaves.iter().map(|&p| vec![p]).collect();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len() / 2);
        for halves in level.chunks(2) {
            let mut winners = Vec::new();
            let mut beats = vec![Vec::new(); 2];
            for &a in &halves[0] {
                for &b in &halves[1] {
                    let (x, y) = (a.min(b), a.max(b));
                    let dummy_vs_main = is_main(x) && !is_main(y);
                    if x == 0 && is_main(y) {
                        // Challenger pair, already stored.
                    } else if dummy_vs_main {
                        pairs.push(PairVector {
                            player: y,
                            opponent: x,
                            vector: surely.clone(),
                        });
                    } else {
                        pairs.push(PairVector {
                            player: x,
                            opponent: y,
                            vector: even.clone(),
                        });
                    }
                    // Only a dummy facing a main player is certain to lose.
                    if !(is_dummy(a) && is_main(b)) {
                        beats[0].push(a);
                    }
                    if !(is_dummy(b) && is_main(a)) {
                        beats[1].push(b);
                    }
                }
            }
            for side in beats {
                for p in side {
                    if !winners.contains(&p) {
                        winners.push(p);
                    }
                }
            }
            next.push(winners);
        }
        level = next;
    }
    CupInstance::new(size, 0, seeding, pairs, inst.budget, inst.threshold.clone())
}

/// Cup pair choices realizing a CBCCT plan on the image of [`cbcct_to_cup`].
pub fn cup_choices_for_plan(cup: &CupInstance, plan: &BribePlan) -> Vec<usize> {
    let mut choices = vec![0; cup.pairs.len()];
    choices[..plan.choices.len()].copy_from_slice(&plan.choices);
    choices
}

/// Decisions and witnesses of both sides of a reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport<S, T> {
    pub source_decision: bool,
    pub target_decision: bool,
    pub source_witness: Option<S>,
    pub target_witness: Option<T>,
    /// Both decisions agree.
    pub equivalent: bool,
}

impl<S, T> ReductionReport<S, T> {
    pub fn passed(&self) -> bool {
        self.equivalent
    }
}

/// Runs both oracles and compares their decisions.
pub fn verify_reduction<A, B, S, T>(
    source: &A,
    target: &B,
    source_oracle: impl FnOnce(&A) -> Result<(bool, Option<S>)>,
    target_oracle: impl FnOnce(&B) -> Result<(bool, Option<T>)>,
) -> Result<ReductionReport<S, T>> {
    let (source_decision, source_witness) = source_oracle(source)?;
    let (target_decision, target_witness) = target_oracle(target)?;
    Ok(ReductionReport {
        source_decision,
        target_decision,
        source_witness,
        target_witness,
        equivalent: source_decision == target_decision,
    })
}

/// Oracle adapters returning `(decision, witness)`.
pub mod oracles {
    use super::*;
    use crate::cup::solve_cup_bruteforce;
    use crate::knapsack::{solve_mpk_bruteforce, solve_pkp_bruteforce, solve_small_ksum_bruteforce};
    use crate::solvers::solve_bruteforce;

    pub fn ksum(inst: &SmallKSumInstance) -> Result<(bool, Option<Vec<usize>>)> {
        let r = solve_small_ksum_bruteforce(inst)?;
        Ok((r.decision, r.witness))
    }

    pub fn pkp(inst: &PkpInstance) -> Result<(bool, Option<Vec<usize>>)> {
        let r = solve_pkp_bruteforce(inst)?;
        Ok((r.decision, r.witness.filter(|_| r.decision)))
    }

    pub fn mpk(inst: &MpkInstance) -> Result<(bool, Option<Vec<usize>>)> {
        let r = solve_mpk_bruteforce(inst)?;
        Ok((r.decision, r.witness.filter(|_| r.decision)))
    }

    pub fn cbcct(inst: &CbcctInstance) -> Result<(bool, Option<BribePlan>)> {
        let r = solve_bruteforce(inst)?;
        Ok((r.decision, r.witness.filter(|_| r.decision)))
    }

    pub fn cup(inst: &CupInstance) -> Result<(bool, Option<Vec<usize>>)> {
        let r = solve_cup_bruteforce(inst)?;
        Ok((r.decision, r.witness.filter(|_| r.decision)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cup::{bracket_distribution, cup_win_probability, solve_cup_bruteforce};
    use crate::instance::evaluate_plan;
    use crate::knapsack::solve_mpk_bruteforce;
    use crate::rational::{rat, rat_int};
    use crate::solvers::solve_bruteforce;

    #[test]
    fn shift_examples() {
        let s = shift_ksum(&SmallKSumInstance::new(vec![-1, 1, 2], 2).unwrap()).unwrap();
        assert_eq!(s.numbers, vec![242, 244, 245]);
        assert_eq!(s.target, 486);
        assert!(s.shifted);
        let s = shift_ksum(&SmallKSumInstance::new(vec![0], 1).unwrap()).unwrap();
        assert_eq!(s.numbers, vec![3]);
        assert_eq!(s.target, 3);
    }

    #[test]
    fn shift_preserves_decisions() {
        for (nums, k) in [(vec![-1, 1, 2], 2), (vec![1, 2, 4], 2), (vec![0], 1), (vec![3, -2, -1, 5], 3)] {
            let src = SmallKSumInstance::new(nums, k).unwrap();
            let dst = shift_ksum(&src).unwrap();
            let r = verify_reduction(&src, &dst, oracles::ksum, oracles::ksum).unwrap();
            assert!(r.passed());
        }
    }

    #[test]
    fn pkp_image_values() {
        let src = SmallKSumInstance::new(vec![-1, 1, 2], 2).unwrap();
        let pkp = ksum_to_pkp(&shift_ksum(&src).unwrap()).unwrap();
        assert_eq!(pkp.items[0].weight, 242);
        assert_eq!(pkp.items[0].profit, rat(236196, 235954));
        assert_eq!(pkp.capacity, 486);
        assert_eq!(pkp.target, rat(472392, 471421));
        assert!(crate::knapsack::max_items_fitting(&pkp) <= 2);
        let r = verify_reduction(&src, &pkp, oracles::ksum, oracles::pkp).unwrap();
        assert!(r.passed());
        assert!(r.source_decision);
    }

    #[test]
    fn ksum_to_pkp_requires_shift() {
        assert!(ksum_to_pkp(&SmallKSumInstance::new(vec![1], 1).unwrap()).is_err());
    }

    fn mpk(target: Rational) -> MpkInstance {
        let knapsack = PkpInstance::new(
            vec![
                PkpItem::new(1, rat(1, 2)),
                PkpItem::new(3, rat(3, 4)),
                PkpItem::new(0, rat(1, 3)),
                PkpItem::new(2, rat(2, 3)),
            ],
            3,
            target,
        )
        .unwrap();
        MpkInstance::new(knapsack, vec![vec![0, 1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn mpk_image() {
        let c = mpk_to_cbcct(&mpk(rat(1, 3))).unwrap();
        assert_eq!(c.bribe_vectors[0], BribeVector::from_pairs([(1, rat(1, 2)), (3, rat(3, 4))]).unwrap());
        assert_eq!(c.bribe_vectors[1], BribeVector::from_pairs([(0, rat(1, 3)), (2, rat(2, 3))]).unwrap());
        assert_eq!(c.budget, 3);
        assert_eq!(c.threshold, rat(1, 3));
        for t in [rat(1, 3), rat(1, 2)] {
            let src = mpk(t);
            let dst = mpk_to_cbcct(&src).unwrap();
            let r = verify_reduction(&src, &dst, oracles::mpk, oracles::cbcct).unwrap();
            assert!(r.passed());
            assert_eq!(
                solve_mpk_bruteforce(&src).unwrap().best_product,
                solve_bruteforce(&dst).unwrap().best_probability
            );
        }
    }

    #[test]
    fn mpk_single_item() {
        let knapsack = PkpInstance::new(vec![PkpItem::new(0, rat_int(1))], 1, rat_int(1)).unwrap();
        let c = mpk_to_cbcct(&MpkInstance::new(knapsack, vec![vec![0]]).unwrap()).unwrap();
        assert_eq!(c.num_challengers(), 1);
        assert!(solve_bruteforce(&c).unwrap().decision);
    }

    #[test]
    fn mpk_weight_ties() {
        let items = vec![PkpItem::new(1, rat(1, 4)), PkpItem::new(1, rat(1, 2)), PkpItem::new(0, rat(1, 8))];
        let inst = MpkInstance::new(PkpInstance::new(items, 2, rat(1, 4)).unwrap(), vec![vec![0, 1, 2]]).unwrap();
        let (c, map) = mpk_to_cbcct_with_map(&inst).unwrap();
        assert_eq!(c.bribe_vectors[0], BribeVector::from_pairs([(0, rat(1, 8)), (1, rat(1, 2))]).unwrap());
        assert_eq!(map, vec![vec![2, 1]]);
        let items = vec![PkpItem::new(1, rat(1, 4)), PkpItem::new(1, rat(1, 4))];
        let inst = MpkInstance::new(PkpInstance::new(items, 2, rat(1, 4)).unwrap(), vec![vec![0, 1]]).unwrap();
        assert!(mpk_to_cbcct(&inst).is_err());
        let items = vec![PkpItem::new(1, rat(3, 2))];
        let inst = MpkInstance::new(PkpInstance::new(items, 2, rat(1, 4)).unwrap(), vec![vec![0]]).unwrap();
        assert!(mpk_to_cbcct(&inst).is_err());
    }

    #[test]
    fn pkp_as_mpk_keeps_decisions() {
        let pkp = PkpInstance::new(
            vec![PkpItem::new(2, rat_int(3)), PkpItem::new(3, rat_int(4)), PkpItem::new(4, rat_int(5))],
            5,
            rat_int(12),
        )
        .unwrap();
        for target in [rat_int(12), rat_int(13), rat_int(1)] {
            let src = pkp.with_target(target).unwrap();
            let dst = pkp_to_mpk(&src).unwrap();
            assert!(verify_reduction(&src, &dst, oracles::pkp, oracles::mpk).unwrap().passed());
        }
    }

    fn cbcct(budget: u64, t: Rational) -> CbcctInstance {
        let c1 = BribeVector::from_pairs([(0, rat(1, 2)), (1, rat(1, 1))]).unwrap();
        let c2 = BribeVector::from_pairs([(0, rat(1, 3)), (2, rat(2, 3))]).unwrap();
        CbcctInstance::new(vec![c1, c2], budget, t).unwrap()
    }

    #[test]
    fn cup_image_layout() {
        let cup = cbcct_to_cup(&cbcct(1, rat(1, 3))).unwrap();
        assert_eq!(cup.num_players, 4);
        assert_eq!(cup.seeding, vec![1, 2, 3, 4]);
        let r = solve_cup_bruteforce(&cup).unwrap();
        assert_eq!(r.best_probability, Some(rat(1, 3)));
        assert!(r.decision);

        let c3 = BribeVector::from_pairs([(0, rat(1, 4))]).unwrap();
        let mut three = cbcct(1, rat(1, 3));
        three.bribe_vectors.push(c3);
        let cup = cbcct_to_cup(&three).unwrap();
        assert_eq!(cup.num_players, 8);
        assert_eq!(cup.seeding[3], 5);
        assert_eq!(cup.seeding.len() - 4, 4);

        let one = CbcctInstance::new(vec![BribeVector::from_pairs([(0, rat(1, 2))]).unwrap()], 0, rat(1, 2)).unwrap();
        let cup = cbcct_to_cup(&one).unwrap();
        assert_eq!(cup.num_players, 2);
        assert_eq!(cup.pairs.len(), 1);
    }

    #[test]
    fn cup_image_matches_every_plan() {
        let mut inst = cbcct(2, rat(1, 2));
        inst.bribe_vectors.push(BribeVector::from_pairs([(0, rat(1, 4)), (1, rat(3, 4))]).unwrap());
        let cup = cbcct_to_cup(&inst).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let plan = BribePlan::new(vec![a, b, c]);
                    let choices = cup_choices_for_plan(&cup, &plan);
                    let total: Rational = bracket_distribution(&cup, &choices).unwrap().iter().sum();
                    assert_eq!(total, rat_int(1));
                    assert_eq!(
                        cup_win_probability(&cup, &choices).unwrap(),
                        evaluate_plan(&inst, &plan).unwrap().win_probability
                    );
                }
            }
        }
        let r = verify_reduction(&inst, &cup, oracles::cbcct, oracles::cup).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn favorite_faces_each_challenger_in_turn() {
        // With the favorite winning surely, the round-i opponent is challenger i.
        let vectors = (0..3).map(|_| BribeVector::from_pairs([(0, rat_int(1))]).unwrap()).collect();
        let inst = CbcctInstance::new(vectors, 0, rat_int(1)).unwrap();
        let cup = cbcct_to_cup(&inst).unwrap();
        for i in 1..=3usize {
            let lo = main_player_position(i);
            let hi = 1usize << i;
            let in_block: Vec<usize> = (0..cup.num_players)
                .filter(|&p| (lo..=hi).contains(&cup.seeding[p]))
                .collect();
            assert!(in_block.contains(&i));
            assert!(in_block.iter().all(|&p| p == i || p > 3));
        }
        assert_eq!(cup_win_probability(&cup, &vec![0; cup.pairs.len()]).unwrap(), rat_int(1));
    }

    #[test]
    fn corrupted_target_fails() {
        let src = cbcct(1, rat(1, 3));
        let mut cup = cbcct_to_cup(&src).unwrap();
        cup.threshold = rat(1, 2);
        let r = verify_reduction(&src, &cup, oracles::cbcct, oracles::cup).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn cup_requires_a_challenger() {
        let empty = CbcctInstance::new(vec![], 0, rat_int(1)).unwrap();
        assert!(cbcct_to_cup(&empty).is_err());
    }
}
