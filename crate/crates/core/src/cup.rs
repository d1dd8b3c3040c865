//! Cup (single-elimination) tournaments with pairwise bribe vectors.
//!
//! Players are `0..num_players`; `seeding[p]` is the 1-based leaf position
//! of player `p`. Leaves `2i - 1` and `2i` meet in round 1, and so on up the
//! bracket. A pair vector keyed `(player, opponent)` lists the probability
//! that `player` loses to `opponent` at each price. Only pairs that can
//! meet need a vector; each unordered pair is stored at most once.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::instance::BribeVector;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVector {
    pub player: usize,
    pub opponent: usize,
    pub vector: BribeVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCup", into = "RawCup")]
pub struct CupInstance {
    pub num_players: usize,
    pub favorite: usize,
    pub seeding: Vec<usize>,
    pub pairs: Vec<PairVector>,
    pub budget: u64,
    pub threshold: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawCup {
    players: usize,
    favorite: usize,
    seeding: Vec<usize>,
    pairs: Vec<PairVector>,
    budget: u64,
    #[serde(with = "crate::rational::serde_str")]
    threshold: Rational,
}

impl TryFrom<RawCup> for CupInstance {
    type Error = Error;

    fn try_from(raw: RawCup) -> Result<Self> {
        CupInstance::new(raw.players, raw.favorite, raw.seeding, raw.pairs, raw.budget, raw.threshold)
    }
}

impl From<CupInstance> for RawCup {
    fn from(c: CupInstance) -> Self {
        RawCup {
            players: c.num_players,
            favorite: c.favorite,
            seeding: c.seeding,
            pairs: c.pairs,
            budget: c.budget,
            threshold: c.threshold,
        }
    }
}

impl CupInstance {
    pub fn new(
        num_players: usize,
        favorite: usize,
        seeding: Vec<usize>,
        pairs: Vec<PairVector>,
        budget: u64,
        threshold: Rational,
    ) -> Result<Self> {
        if !num_players.is_power_of_two() {
            return Err(Error::invalid(format!("{num_players} players is not a power of two")));
        }
        if favorite >= num_players {
            return Err(Error::invalid("favorite is not a player"));
        }
        if seeding.len() != num_players {
            return Err(Error::invalid("seeding length differs from player count"));
        }
        let mut taken = vec![false; num_players];
        for &pos in &seeding {
            if pos == 0 || pos > num_players || std::mem::replace(&mut taken[pos - 1], true) {
                return Err(Error::invalid("seeding is not a bijection onto 1..=players"));
            }
        }
        let mut seen = HashMap::new();
        for (k, pair) in pairs.iter().enumerate() {
            if pair.player >= num_players || pair.opponent >= num_players || pair.player == pair.opponent {
                return Err(Error::invalid(format!("pair {k} has invalid players")));
            }
            let key = (pair.player.min(pair.opponent), pair.player.max(pair.opponent));
            if seen.insert(key, k).is_some() {
                return Err(Error::invalid(format!("pair {k} repeats an earlier pair")));
            }
        }
        crate::rational::check_probability(&threshold)?;
        Ok(CupInstance {
            num_players,
            favorite,
            seeding,
            pairs,
            budget,
            threshold,
        })
    }

    /// Number of bribe combinations, saturating.
    pub fn combination_count(&self) -> u128 {
        self.pairs
            .iter()
            .fold(1u128, |acc, p| acc.saturating_mul(p.vector.len() as u128))
    }

    /// Players by leaf position.
    fn leaves(&self) -> Vec<usize> {
        let mut leaves = vec![0; self.num_players];
        for (p, &pos) in self.seeding.iter().enumerate() {
            leaves[pos - 1] = p;
        }
        leaves
    }
}

/// Winning probability of `favorite` under one entry choice per pair
/// (indexed like `pairs`).
pub fn cup_win_probability(inst: &CupInstance, choices: &[usize]) -> Result<Rational> {
    let dist = bracket_distribution(inst, choices)?;
    Ok(dist[inst.favorite].clone())
}

/// Winning probability of every player under one entry choice per pair.
pub fn bracket_distribution(inst: &CupInstance, choices: &[usize]) -> Result<Vec<Rational>> {
    if choices.len() != inst.pairs.len() {
        return Err(Error::PlanLength {
            expected: inst.pairs.len(),
            got: choices.len(),
        });
    }
    let mut lose: HashMap<(usize, usize), Rational> = HashMap::new();
    for (k, (pair, &c)) in inst.pairs.iter().zip(choices).enumerate() {
        let entry = pair.vector.entry(c).ok_or(Error::ChoiceOutOfRange {
            challenger: k,
            choice: c,
            len: pair.vector.len(),
        })?;
        let p = entry.losing_probability.clone();
        lose.insert((pair.opponent, pair.player), Rational::one() - &p);
        lose.insert((pair.player, pair.opponent), p);
    }
    // Winner distributions of the current round's subtrees, sparse.
    let mut level: Vec<Vec<(usize, Rational)>> = inst.leaves().into_iter().map(|p| vec![(p, Rational::one())]).collect();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len() / 2);
        for pair in level.chunks(2) {
            let (left, right) = (&pair[0], &pair[1]);
            let mut merged = Vec::new();
            for (side, other) in [(left, right), (right, left)] {
                for (p, wp) in side {
                    let mut beat = Rational::zero();
                    for (q, wq) in other {
                        let l = lose.get(&(*q, *p)).ok_or_else(|| {
                            Error::invalid(format!("players {p} and {q} can meet but have no pair vector"))
                        })?;
                        if !l.is_zero() {
                            beat += wq * l;
                        }
                    }
                    let w = wp * beat;
                    if !w.is_zero() {
                        merged.push((*p, w));
                    }
                }
            }
            next.push(merged);
        }
        level = next;
    }
    let mut out = vec![Rational::zero(); inst.num_players];
    for (p, w) in level.pop().unwrap_or_default() {
        out[p] = w;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupResult {
    pub best_probability: Option<Rational>,
    /// One entry per pair.
    pub witness: Option<Vec<usize>>,
    pub decision: bool,
}

pub const DEFAULT_CUP_CAP: u128 = 1_000_000;

/// Best favorite winning probability over every bribe combination within
/// budget; the first maximizer in lexicographic order is kept.
pub fn solve_cup_bruteforce(inst: &CupInstance) -> Result<CupResult> {
    check_cap("cup bribe combinations", inst.combination_count(), DEFAULT_CUP_CAP)?;
    let m = inst.pairs.len();
    let mut choices = vec![0usize; m];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        let cost = choices
            .iter()
            .zip(&inst.pairs)
            .fold(0u64, |acc, (&c, p)| acc.saturating_add(p.vector.entries()[c].bribe));
        if cost <= inst.budget {
            let p = cup_win_probability(inst, &choices)?;
            if best.as_ref().map_or(true, |(b, _)| p > *b) {
                best = Some((p, choices.clone()));
            }
        }
        let mut i = m;
        loop {
            if i == 0 {
                let decision = best.as_ref().is_some_and(|(p, _)| *p >= inst.threshold);
                let (best_probability, witness) = match best {
                    Some((p, w)) => (Some(p), Some(w)),
                    None => (None, None),
                };
                return Ok(CupResult {
                    best_probability,
                    witness,
                    decision,
                });
            }
            i -= 1;
            choices[i] += 1;
            if choices[i] < inst.pairs[i].vector.len() {
                break;
            }
            choices[i] = 0;
        }
    }
}

/// Cup on `2^rounds` players seeded in index order, where every pair has
/// the single entry `(0, lose(a, b))` keyed `(a, b)` with `a < b`.
pub fn uniform_cup(rounds: u32, lose: impl Fn(usize, usize) -> Rational) -> Result<CupInstance> {
    let n = 1usize << rounds;
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push(PairVector {
                player: a,
                opponent: b,
                vector: BribeVector::from_pairs([(0, lose(a, b))])?,
            });
        }
    }
    CupInstance::new(n, 0, (1..=n).collect(), pairs, 0, Rational::zero())
}
