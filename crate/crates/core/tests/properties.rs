//! Invariants checked against independent oracles on random inputs.

use num_traits::{One, Pow, Signed, Zero};
use proptest::prelude::*;

use champ_bribery::cup::{bracket_distribution, cup_win_probability};
use champ_bribery::generators::{gen_cbcct, gen_ksum, gen_mpk, CbcctParams};
use champ_bribery::knapsack::{max_items_fitting, solve_mpk_bruteforce, solve_small_ksum_bruteforce, SmallKSumInstance};
use champ_bribery::milp::{
    compare_log_combinations, is_totally_unimodular, solve_lp_exact, solve_milp, FormalLog, MilpModel, Relation, Sense,
    Status,
};
use champ_bribery::rational::{rat, rat_int};
use champ_bribery::reductions::{
    cbcct_to_cup, cup_choices_for_plan, ksum_to_pkp, main_player_position, mpk_to_cbcct, oracles, shift_ksum,
    verify_reduction,
};
use champ_bribery::solvers::{
    dp_budget_sweep, solve_bruteforce, solve_dp, solve_fpt_bribe_values, solve_fpt_prob_values,
};
use champ_bribery::{
    evaluate_plan, normalize_bribe_vector, normalize_instance, BribeEntry, BribePlan, BribeVector, CbcctInstance,
    Rational,
};

const PROBS: [(i64, i64); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];

fn prob() -> impl Strategy<Value = Rational> {
    (0..PROBS.len()).prop_map(|i| rat(PROBS[i].0, PROBS[i].1))
}

/// Vectors with distinct sorted bribes in 0..=8; probabilities unrestricted,
/// so most vectors are not monotone.
fn vector() -> impl Strategy<Value = BribeVector> {
    (proptest::sample::subsequence((0u64..=8).collect::<Vec<_>>(), 1..=3), proptest::collection::vec(prob(), 3))
        .prop_map(|(bribes, ps)| {
            BribeVector::new(bribes.into_iter().zip(ps).map(|(b, p)| BribeEntry::new(b, p)).collect()).unwrap()
        })
}

fn instance(max_n: usize) -> impl Strategy<Value = CbcctInstance> {
    (proptest::collection::vec(vector(), 0..=max_n), 0u64..=15, prob())
        .prop_map(|(vs, b, t)| CbcctInstance::new(vs, b, t).unwrap())
}

/// Largest probability purchasable with at most `budget`, by scanning
/// single entries.
fn best_single(v: &BribeVector, budget: u64) -> Option<Rational> {
    v.entries()
        .iter()
        .filter(|e| e.bribe <= budget)
        .map(|e| e.losing_probability.clone())
        .max()
}

fn plans(inst: &CbcctInstance) -> Vec<BribePlan> {
    let mut out = vec![Vec::new()];
    for v in &inst.bribe_vectors {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..v.len()).map(move |j| {
                    let mut q = p.clone();
                    q.push(j);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(BribePlan::new).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalization_is_idempotent_and_monotone(v in vector()) {
        let once = normalize_bribe_vector(&v);
        prop_assert!(once.is_monotone());
        prop_assert_eq!(normalize_bribe_vector(&once), once.clone());
        for b in 0..=9 {
            prop_assert_eq!(best_single(&v, b), best_single(&once, b));
        }
    }

    #[test]
    fn plan_values_are_exact_and_order_free(inst in instance(5), seed in any::<u64>()) {
        let choices: Vec<usize> = inst
            .bribe_vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (seed as usize).wrapping_add(i * 7) % v.len())
            .collect();
        let value = evaluate_plan(&inst, &BribePlan::new(choices.clone())).unwrap();
        let mut cost = 0;
        let mut p = Rational::one();
        for (v, &j) in inst.bribe_vectors.iter().zip(&choices) {
            cost += v.entries()[j].bribe;
            p *= &v.entries()[j].losing_probability;
        }
        prop_assert_eq!(value.cost, cost);
        prop_assert_eq!(&value.win_probability, &p);
        // Reversed challenger order.
        let rev = CbcctInstance::new(inst.bribe_vectors.iter().rev().cloned().collect(), inst.budget, inst.threshold.clone()).unwrap();
        let rev_choices: Vec<usize> = choices.iter().rev().cloned().collect();
        let value_rev = evaluate_plan(&rev, &BribePlan::new(rev_choices)).unwrap();
        prop_assert_eq!(value_rev.cost, cost);
        prop_assert_eq!(value_rev.win_probability, p);
    }

    #[test]
    fn brute_force_matches_plan_enumeration(inst in instance(4)) {
        let best = plans(&inst)
            .iter()
            .map(|p| evaluate_plan(&inst, p).unwrap())
            .filter(|v| v.cost <= inst.budget)
            .map(|v| v.win_probability)
            .max();
        let r = solve_bruteforce(&inst).unwrap();
        prop_assert_eq!(&r.best_probability, &best);
        prop_assert_eq!(r.decision, best.is_some_and(|b| b >= inst.threshold));
        if let Some(w) = &r.witness {
            let v = evaluate_plan(&inst, w).unwrap();
            prop_assert!(v.cost <= inst.budget);
            prop_assert_eq!(Some(v.win_probability), r.best_probability);
        }
    }

    #[test]
    fn dp_matches_brute_force(inst in instance(5)) {
        let brute = solve_bruteforce(&inst).unwrap();
        let dp = solve_dp(&inst).unwrap();
        prop_assert_eq!(&dp.best_probability, &brute.best_probability);
        prop_assert_eq!(dp.decision, brute.decision);
        if let Some(w) = &dp.witness {
            let v = evaluate_plan(&inst, w).unwrap();
            prop_assert!(v.cost <= inst.budget);
            prop_assert_eq!(Some(v.win_probability), dp.best_probability);
        }
    }

    #[test]
    fn budget_sweep_matches_brute_force_per_budget(inst in instance(4)) {
        let sweep = dp_budget_sweep(&inst).unwrap();
        prop_assert_eq!(sweep.len() as u64, inst.budget + 1);
        for (b, value) in sweep.iter().enumerate() {
            prop_assert_eq!(value, &solve_bruteforce(&inst.with_budget(b as u64)).unwrap().best_probability);
        }
        prop_assert_eq!(sweep, dp_budget_sweep(&normalize_instance(&inst)).unwrap());
    }

    #[test]
    fn decisions_ignore_challenger_order(inst in instance(5), rotate in 0usize..5) {
        let mut vs = inst.bribe_vectors.clone();
        if !vs.is_empty() {
            let k = rotate % vs.len();
            vs.rotate_left(k);
        }
        let moved = CbcctInstance::new(vs, inst.budget, inst.threshold.clone()).unwrap();
        prop_assert_eq!(solve_dp(&inst).unwrap().best_probability, solve_dp(&moved).unwrap().best_probability);
    }

    #[test]
    fn cup_image_reproduces_every_plan(inst in instance(3)) {
        prop_assume!(inst.num_challengers() >= 1);
        let cup = cbcct_to_cup(&inst).unwrap();
        for plan in plans(&inst) {
            let choices = cup_choices_for_plan(&cup, &plan);
            let dist = bracket_distribution(&cup, &choices).unwrap();
            prop_assert!(dist.iter().sum::<Rational>().is_one());
            prop_assert_eq!(
                cup_win_probability(&cup, &choices).unwrap(),
                evaluate_plan(&inst, &plan).unwrap().win_probability
            );
        }
        let r = verify_reduction(&inst, &cup, oracles::cbcct, oracles::cup).unwrap();
        prop_assert!(r.equivalent);
    }

    #[test]
    fn formal_logs_compare_like_products(
        qs in proptest::collection::vec((1i64..=12, 1i64..=12), 1..=4),
        ks in proptest::collection::vec((0u64..=6, 0u64..=6), 4),
    ) {
        let bases: Vec<Rational> = qs.iter().map(|&(a, b)| rat(a, b)).collect();
        let lhs: Vec<u64> = ks.iter().take(bases.len()).map(|k| k.0).collect();
        let rhs: Vec<u64> = ks.iter().take(bases.len()).map(|k| k.1).collect();
        let logs: Vec<FormalLog> = bases.iter().cloned().map(|q| FormalLog::new(q).unwrap()).collect();
        let pow = |k: &[u64]| bases.iter().zip(k).fold(Rational::one(), |acc, (q, &e)| acc * Pow::pow(q, e as u32));
        prop_assert_eq!(compare_log_combinations(&logs, &lhs, &rhs), pow(&lhs).cmp(&pow(&rhs)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fpt_solvers_match_brute_force(inst in instance(4)) {
        let brute = solve_bruteforce(&inst).unwrap();
        let fpt = solve_fpt_bribe_values(&inst).unwrap();
        prop_assert_eq!(&fpt.best_probability, &brute.best_probability);
        prop_assert_eq!(fpt.decision, brute.decision);
        let probs = solve_fpt_prob_values(&inst).unwrap();
        prop_assert_eq!(probs.decision, brute.decision);
        if let Some(w) = &probs.witness {
            let v = evaluate_plan(&inst, w).unwrap();
            prop_assert!(v.cost <= inst.budget && v.win_probability >= inst.threshold);
        }
        // The minimum budget is the smallest budget whose optimum reaches t.
        let sweep = dp_budget_sweep(&inst.with_budget(40)).unwrap();
        let first = sweep.iter().position(|v| v.as_ref().is_some_and(|p| *p >= inst.threshold));
        prop_assert_eq!(probs.min_budget, first.map(|b| b as u64));
    }
}

/// Determinant by fraction-free elimination, independent of the TU checker.
fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let delta = &f * &m[c][k];
                m[r][k] -= delta;
            }
        }
    }
    d
}

fn all_minors_unimodular(a: &[Vec<Rational>]) -> bool {
    let (rows, cols) = (a.len(), a[0].len());
    for rmask in 1u32..1 << rows {
        for cmask in 1u32..1 << cols {
            if rmask.count_ones() != cmask.count_ones() {
                continue;
            }
            let sub: Vec<Vec<Rational>> = (0..rows)
                .filter(|r| rmask >> r & 1 == 1)
                .map(|r| (0..cols).filter(|c| cmask >> c & 1 == 1).map(|c| a[r][c].clone()).collect())
                .collect();
            if det(sub).abs() > Rational::one() {
                return false;
            }
        }
    }
    true
}

fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in 0..cols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

type Model = MilpModel<Rational, Rational>;

/// `max c x` subject to `A x <= b`, `x >= 0`, with every column of `A`
/// holding a positive entry so the optimum is finite.
fn packing_lp(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> Model {
    let mut m = Model::new(Sense::Maximize);
    let xs: Vec<usize> = (0..c.len()).map(|j| m.add_variable(format!("x{j}"), false, None)).collect();
    for (&x, &cj) in xs.iter().zip(c) {
        m.set_objective(x, rat_int(cj));
    }
    for (i, row) in a.iter().enumerate() {
        let coeffs = row.iter().enumerate().map(|(j, &v)| (xs[j], rat_int(v))).collect();
        m.add_row(format!("r{i}"), coeffs, Relation::Le, rat_int(b[i]));
    }
    m
}

fn packing() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>, Vec<i64>)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(rows, cols)| {
        (
            proptest::collection::vec(proptest::collection::vec(0i64..=3, cols), rows),
            proptest::collection::vec(0i64..=6, rows),
            proptest::collection::vec(-2i64..=4, cols),
        )
            .prop_filter("every column bounded", move |(a, _, _)| (0..cols).all(|j| a.iter().any(|r| r[j] > 0)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tu_check_matches_determinants(a in proptest::collection::vec(proptest::collection::vec(-1i64..=1, 3), 1..=4)) {
        let m: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&v| rat_int(v)).collect()).collect();
        prop_assert_eq!(is_totally_unimodular(&m).unwrap(), all_minors_unimodular(&m));
    }

    #[test]
    fn lp_optimum_is_a_vertex((a, b, c) in packing()) {
        let m = packing_lp(&a, &b, &c);
        let s = solve_lp_exact(&m).unwrap();
        prop_assert_eq!(s.status, Status::Optimal);
        let x = &s.assignment;
        let cols = c.len();
        let mut tight: Vec<Vec<Rational>> = Vec::new();
        for (i, row) in a.iter().enumerate() {
            let act: Rational = row.iter().zip(x).map(|(&v, xj)| rat_int(v) * xj).sum();
            prop_assert!(act <= rat_int(b[i]));
            if act == rat_int(b[i]) {
                tight.push(row.iter().map(|&v| rat_int(v)).collect());
            }
        }
        for (j, xj) in x.iter().enumerate() {
            prop_assert!(!xj.is_negative());
            if xj.is_zero() {
                tight.push((0..cols).map(|k| rat_int(i64::from(k == j))).collect());
            }
        }
        prop_assert_eq!(rank(tight), cols);
    }

    #[test]
    fn lp_duality((a, b, c) in packing()) {
        let primal = solve_lp_exact(&packing_lp(&a, &b, &c)).unwrap();
        // min b y subject to A^T y >= c, y >= 0.
        let mut dual = Model::new(Sense::Minimize);
        let ys: Vec<usize> = (0..b.len()).map(|i| dual.add_variable(format!("y{i}"), false, None)).collect();
        for (&y, &bi) in ys.iter().zip(&b) {
            dual.set_objective(y, rat_int(bi));
        }
        for (j, &cj) in c.iter().enumerate() {
            let coeffs = a.iter().enumerate().map(|(i, row)| (ys[i], rat_int(row[j]))).collect();
            dual.add_row(format!("c{j}"), coeffs, Relation::Ge, rat_int(cj));
        }
        let dual = solve_lp_exact(&dual).unwrap();
        prop_assert_eq!(dual.status, Status::Optimal);
        prop_assert_eq!(primal.objective_value, dual.objective_value);
    }

    #[test]
    fn milp_matches_enumeration((a, b, c) in packing()) {
        let mut m = packing_lp(&a, &b, &c);
        for v in &mut m.variables {
            v.integer = true;
        }
        let s = solve_milp(&m).unwrap();
        let cols = c.len();
        let mut best: Option<i64> = None;
        let mut x = vec![0i64; cols];
        'points: loop {
            if a.iter().zip(&b).all(|(row, &bi)| row.iter().zip(&x).map(|(v, xj)| v * xj).sum::<i64>() <= bi) {
                let val = c.iter().zip(&x).map(|(cj, xj)| cj * xj).sum::<i64>();
                best = Some(best.map_or(val, |bv| bv.max(val)));
            }
            for j in 0..cols {
                x[j] += 1;
                if x[j] <= 6 {
                    continue 'points;
                }
                x[j] = 0;
            }
            break;
        }
        prop_assert_eq!(s.status, Status::Optimal);
        prop_assert_eq!(s.objective_value, best.map(rat_int));
        prop_assert!(s.assignment.iter().all(|v| v.is_integer()));
    }

    #[test]
    fn shift_and_pkp_preserve_ksum_decisions(seed in any::<u64>(), n in 1usize..=5, k in 1usize..=3, planted in any::<bool>()) {
        prop_assume!(k <= n);
        let src = gen_ksum(seed, 0, n, k, 4, planted).unwrap();
        let shifted = shift_ksum(&src).unwrap();
        prop_assert_eq!(
            solve_small_ksum_bruteforce(&src).unwrap().decision,
            solve_small_ksum_bruteforce(&shifted).unwrap().decision
        );
        let pkp = ksum_to_pkp(&shifted).unwrap();
        prop_assert!(max_items_fitting(&pkp) <= k);
        prop_assert!(verify_reduction(&src, &pkp, oracles::ksum, oracles::pkp).unwrap().equivalent);
    }

    #[test]
    fn mpk_optimum_carries_over(seed in any::<u64>(), sizes in proptest::collection::vec(1usize..=3, 1..=4), planted in any::<bool>()) {
        let src = gen_mpk(seed, 0, &sizes, 5, planted).unwrap();
        let dst = mpk_to_cbcct(&src).unwrap();
        prop_assert_eq!(solve_mpk_bruteforce(&src).unwrap().best_product, solve_bruteforce(&dst).unwrap().best_probability);
        if planted {
            prop_assert!(solve_mpk_bruteforce(&src).unwrap().decision);
        }
    }
}

#[test]
fn favorite_meets_challenger_i_in_round_i() {
    // With every main-versus-dummy meeting decided for the main player and
    // the favorite winning every match, the favorite's round-i opponent is
    // challenger i with certainty.
    for n in 1..=4usize {
        let vectors = (0..n).map(|_| BribeVector::from_pairs([(0, rat_int(1))]).unwrap()).collect();
        let inst = CbcctInstance::new(vectors, 0, rat_int(1)).unwrap();
        let cup = cbcct_to_cup(&inst).unwrap();
        let choices = vec![0; cup.pairs.len()];
        for i in 1..=n {
            // The block of leaves the favorite meets in round i.
            let block: Vec<usize> = (0..cup.num_players)
                .filter(|&p| (main_player_position(i)..=1 << i).contains(&cup.seeding[p]))
                .collect();
            // Challenger i is the only main player there, so it wins the
            // block surely.
            assert!(block.contains(&i));
            assert!(block.iter().all(|&p| p == i || p > n));
        }
        assert!(cup_win_probability(&cup, &choices).unwrap().is_one());
        assert!(bracket_distribution(&cup, &choices).unwrap()[0].is_one());
    }
}

#[test]
fn generated_cbcct_is_byte_identical() {
    let params = CbcctParams::new(5, 3, 10, (0..=6).collect(), vec![rat(1, 4), rat(1, 2), rat(3, 4)]);
    for index in 0..20 {
        let a = serde_json::to_string(&gen_cbcct(99, index, &params).unwrap()).unwrap();
        let b = serde_json::to_string(&gen_cbcct(99, index, &params).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn ksum_generator_respects_range() {
    for index in 0..50 {
        let inst = gen_ksum(3, index, 4, 2, i128::MAX, index % 2 == 0).unwrap();
        let bound = inst.magnitude_bound().unwrap();
        assert!(inst.numbers.iter().all(|s| s.abs() <= bound));
        if index % 2 == 0 {
            assert!(solve_small_ksum_bruteforce(&inst).unwrap().decision);
        }
        assert!(SmallKSumInstance::new(inst.numbers.clone(), inst.k).is_ok());
    }
}
