//! Seeded instance generators.
//!
//! Every instance is drawn from its own ChaCha8 stream keyed by
//! `(seed, index)`, so instance `i` of a batch does not depend on how many
//! instances precede it or on which worker produces it.

use rand::seq::{index::sample, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cup::{CupInstance, PairVector};
use crate::error::{Error, Result};
use crate::instance::{normalize_entries, BribeEntry, BribeVector, CbcctInstance};
use crate::knapsack::{MpkInstance, PkpInstance, PkpItem, SmallKSumInstance};
use crate::rational::{check_probability, product};
use crate::Rational;

/// The random stream of instance `index` under `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// How a CBCCT threshold is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdPolicy {
    /// A point `lo + u (hi - lo)` with `u` uniform in `{0, 1/16, ..., 1}`,
    /// where `lo` and `hi` are the smallest and largest win probabilities
    /// over all plans regardless of cost.
    Interpolated,
    Fixed(#[serde(with = "crate::rational::serde_str")] Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbcctParams {
    pub n: usize,
    pub max_len: usize,
    pub budget: u64,
    pub value_pool: Vec<u64>,
    #[serde(with = "rational_vec")]
    pub prob_pool: Vec<Rational>,
    pub threshold: ThresholdPolicy,
    /// Normalize each vector after drawing it.
    pub normalize: bool,
    /// Start every vector with bribe 0; the remaining bribes come from the
    /// nonzero pool values.
    #[serde(default)]
    pub zero_first: bool,
}

impl CbcctParams {
    pub fn new(n: usize, max_len: usize, budget: u64, value_pool: Vec<u64>, prob_pool: Vec<Rational>) -> Self {
        CbcctParams {
            n,
            max_len,
            budget,
            value_pool,
            prob_pool,
            threshold: ThresholdPolicy::Interpolated,
            normalize: true,
            zero_first: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.value_pool.is_empty() || self.prob_pool.is_empty() {
            return Err(Error::invalid("pools must be nonempty"));
        }
        if self.max_len == 0 {
            return Err(Error::invalid("vectors need at least one entry"));
        }
        let values = self.bribe_values();
        let available = values.len() + usize::from(self.zero_first);
        if available < self.max_len {
            return Err(Error::invalid(format!(
                "{} distinct bribe values cannot fill vectors of length {}",
                available,
                self.max_len
            )));
        }
        self.prob_pool.iter().try_for_each(check_probability)
    }

    /// Sorted distinct pool values, without 0 when `zero_first` is set.
    fn bribe_values(&self) -> Vec<u64> {
        let mut values = self.value_pool.clone();
        if self.zero_first {
            values.retain(|&v| v != 0);
        }
        values.sort_unstable();
        values.dedup();
        values
    }

    fn draw_bribes(&self, rng: &mut ChaCha8Rng, values: &[u64], len: usize) -> Vec<u64> {
        let fixed = usize::from(self.zero_first);
        let mut bribes: Vec<u64> = sample(rng, values.len(), len - fixed).into_iter().map(|i| values[i]).collect();
        if self.zero_first {
            bribes.push(0);
        }
        bribes.sort_unstable();
        bribes
    }
}

/// Vector lengths are uniform in `1..=max_len`; bribes are distinct pool
/// values, probabilities are drawn from the pool with replacement.
pub fn gen_cbcct(seed: u64, index: u64, params: &CbcctParams) -> Result<CbcctInstance> {
    params.validate()?;
    let mut rng = instance_rng(seed, index);
    let values = params.bribe_values();
    let mut vectors = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        let len = rng.gen_range(1..=params.max_len);
        let bribes = params.draw_bribes(&mut rng, &values, len);
        let entries: Vec<BribeEntry> = bribes
            .into_iter()
            .map(|b| BribeEntry::new(b, params.prob_pool.choose(&mut rng).expect("nonempty pool").clone()))
            .collect();
        vectors.push(if params.normalize {
            normalize_entries(entries)?
        } else {
            BribeVector::new(entries)?
        });
    }
    let threshold = draw_threshold(&mut rng, &params.threshold, &vectors);
    CbcctInstance::new(vectors, params.budget, threshold)
}

fn draw_threshold(rng: &mut ChaCha8Rng, policy: &ThresholdPolicy, vectors: &[BribeVector]) -> Rational {
    match policy {
        ThresholdPolicy::Fixed(t) => t.clone(),
        ThresholdPolicy::Interpolated => {
            let lo = product(vectors.iter().map(|v| v.entries().iter().map(|e| &e.losing_probability).min().expect("nonempty")));
            let hi = product(vectors.iter().map(|v| v.entries().iter().map(|e| &e.losing_probability).max().expect("nonempty")));
            let u = Rational::new(rng.gen_range(0..=16).into(), 16.into());
            &lo + (hi - &lo) * u
        }
    }
}

/// Like [`gen_cbcct`], but vector 0 and every vector that came out monotone
/// get a forced inversion in their first two entries, so normalization has
/// something to delete.
pub fn gen_non_monotone_cbcct(seed: u64, index: u64, params: &CbcctParams) -> Result<CbcctInstance> {
    params.validate()?;
    if params.max_len < 2 || params.prob_pool.len() < 2 {
        return Err(Error::invalid("non-monotone vectors need two entries and two probabilities"));
    }
    let mut rng = instance_rng(seed, index);
    let values = params.bribe_values();
    let mut probs = params.prob_pool.clone();
    probs.sort();
    probs.dedup();
    let mut vectors = Vec::with_capacity(params.n);
    for i in 0..params.n {
        let len = rng.gen_range(2..=params.max_len);
        let bribes = params.draw_bribes(&mut rng, &values, len);
        let mut entries: Vec<BribeEntry> = bribes
            .into_iter()
            .map(|b| BribeEntry::new(b, probs.choose(&mut rng).expect("nonempty pool").clone()))
            .collect();
        // The first vector always holds an inversion.
        if i == 0 || !entries.windows(2).any(|w| w[0].losing_probability >= w[1].losing_probability) {
            let hi = rng.gen_range(1..probs.len());
            let lo = rng.gen_range(0..hi);
            entries[0].losing_probability = probs[hi].clone();
            entries[1].losing_probability = probs[lo].clone();
        }
        vectors.push(BribeVector::new(entries)?);
    }
    let threshold = draw_threshold(&mut rng, &params.threshold, &vectors);
    CbcctInstance::new(vectors, params.budget, threshold)
}

/// Uniform numbers in `[-min(bound, n^{2k}), min(bound, n^{2k})]`. With
/// `planted`, `k` random positions are overwritten by a zero-sum tuple.
pub fn gen_ksum(seed: u64, index: u64, n: usize, k: usize, bound: i128, planted: bool) -> Result<SmallKSumInstance> {
    if k > n {
        return Err(Error::invalid("k exceeds n"));
    }
    if bound < 0 {
        return Err(Error::invalid("bound must be nonnegative"));
    }
    let limit = crate::knapsack::checked_pow(n as i128, 2 * k).map_or(bound, |b| b.min(bound));
    let mut rng = instance_rng(seed, index);
    let mut numbers: Vec<i128> = (0..n).map(|_| rng.gen_range(-limit..=limit)).collect();
    if planted && k > 0 {
        let positions = sample(&mut rng, n, k).into_vec();
        loop {
            let head: Vec<i128> = (0..k - 1).map(|_| rng.gen_range(-limit..=limit)).collect();
            let last = -head.iter().sum::<i128>();
            if last.abs() <= limit {
                for (&p, v) in positions.iter().zip(head.into_iter().chain([last])) {
                    numbers[p] = v;
                }
                break;
            }
        }
    }
    SmallKSumInstance::new(numbers, k)
}

/// Random profit `a/d` with `1 <= a <= d <= max_den`.
fn unit_profit(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let a = rng.gen_range(1..=d);
    crate::rational::rat(a, d)
}

/// Product knapsack with weights in `0..=max_weight`, profits in `(0, 1]`
/// scaled by a random integer factor in `1..=max_scale`, and capacity and
/// target taken from a random subset.
pub fn gen_pkp(seed: u64, index: u64, n: usize, max_weight: u64, max_scale: i64) -> Result<PkpInstance> {
    let mut rng = instance_rng(seed, index);
    let items: Vec<PkpItem> = (0..n)
        .map(|_| {
            let w = rng.gen_range(0..=max_weight);
            let p = unit_profit(&mut rng, 6) * Rational::from_integer(rng.gen_range(1..=max_scale.max(1)).into());
            PkpItem::new(w, p)
        })
        .collect();
    let subset: Vec<&PkpItem> = items.iter().filter(|_| rng.gen_bool(0.5)).collect();
    let capacity = subset.iter().map(|i| i.weight).sum::<u64>().max(1);
    let target = product(subset.iter().map(|i| &i.profit));
    PkpInstance::new(items, capacity, target)
}

/// Multicolored product knapsack with the given class sizes. Weights within
/// a class are distinct values in `0..=max_weight`; profits lie in `(0, 1]`.
/// Capacity is the weight of one random selection. With `planted` the
/// target is that selection's product, so the instance is a yes-instance;
/// otherwise it is the product of the most profitable item of every class,
/// reachable only when some such selection fits.
pub fn gen_mpk(seed: u64, index: u64, class_sizes: &[usize], max_weight: u64, planted: bool) -> Result<MpkInstance> {
    if class_sizes.contains(&0) {
        return Err(Error::invalid("classes must be nonempty"));
    }
    if class_sizes.iter().any(|&s| s as u64 > max_weight.saturating_add(1)) {
        return Err(Error::invalid("class larger than the number of distinct weights"));
    }
    let mut rng = instance_rng(seed, index);
    let mut items = Vec::new();
    let mut classes = Vec::with_capacity(class_sizes.len());
    for &size in class_sizes {
        let weights = sample(&mut rng, max_weight as usize + 1, size);
        let mut class = Vec::with_capacity(size);
        for w in weights {
            class.push(items.len());
            items.push(PkpItem::new(w as u64, unit_profit(&mut rng, 8)));
        }
        classes.push(class);
    }
    let first: Vec<usize> = classes.iter().map(|c| *c.choose(&mut rng).expect("nonempty class")).collect();
    let capacity: u64 = first.iter().map(|&i| items[i].weight).sum();
    let target = if planted {
        product(first.iter().map(|&i| &items[i].profit))
    } else {
        classes
            .iter()
            .map(|c| c.iter().map(|&i| items[i].profit.clone()).max().expect("nonempty class"))
            .product()
    };
    MpkInstance::new(PkpInstance::new(items, capacity.max(1), target)?, classes)
}

/// Cup on `2^rounds` players with a random seeding and one random vector
/// for every unordered pair, oriented at random. Favorite is player 0.
pub fn gen_cup(seed: u64, index: u64, rounds: u32, params: &CbcctParams) -> Result<CupInstance> {
    params.validate()?;
    let mut rng = instance_rng(seed, index);
    let players = 1usize << rounds;
    let mut seeding: Vec<usize> = (1..=players).collect();
    seeding.shuffle(&mut rng);
    let values = params.bribe_values();
    let mut pairs = Vec::new();
    for a in 0..players {
        for b in a + 1..players {
            let len = rng.gen_range(1..=params.max_len);
            let bribes = params.draw_bribes(&mut rng, &values, len);
            let entries = bribes
                .into_iter()
                .map(|v| BribeEntry::new(v, params.prob_pool.choose(&mut rng).expect("nonempty pool").clone()))
                .collect();
            let (player, opponent) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            pairs.push(PairVector {
                player,
                opponent,
                vector: normalize_entries(entries)?,
            });
        }
    }
    let threshold = match &params.threshold {
        ThresholdPolicy::Fixed(t) => t.clone(),
        ThresholdPolicy::Interpolated => Rational::new(rng.gen_range(0..=8).into(), 8.into()),
    };
    CupInstance::new(players, 0, seeding, pairs, params.budget, threshold)
}

/// Uniform random entry choice for every pair of a cup.
pub fn random_cup_choices(seed: u64, index: u64, cup: &CupInstance) -> Vec<usize> {
    let mut rng = instance_rng(seed, index);
    cup.pairs.iter().map(|p| rng.gen_range(0..p.vector.len())).collect()
}

/// The probabilities `{1/4, 1/2, 3/4, 1}`.
pub fn quarter_pool() -> Vec<Rational> {
    (1..=4).map(|a| crate::rational::rat(a, 4)).collect()
}

#[allow(clippy::ptr_arg)]
mod rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &Vec<Rational>, s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
