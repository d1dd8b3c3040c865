//! Worked examples through the public API, one group per module.

use champ_bribery::cup::{solve_cup_bruteforce, uniform_cup, CupInstance};
use champ_bribery::generators::quarter_pool;
use champ_bribery::io::parse_instance;
use champ_bribery::knapsack::{solve_mpk_bruteforce, MpkInstance, PkpInstance, PkpItem, SmallKSumInstance};
use champ_bribery::rational::{format_rational, rat, rat_int};
use champ_bribery::reductions::{cbcct_to_cup, ksum_to_pkp, mpk_to_cbcct, oracles, shift_ksum, verify_reduction};
use champ_bribery::solvers::{solve, solve_bruteforce, Algorithm};
use champ_bribery::suites::agreement_instance;
use champ_bribery::{evaluate_plan, normalize_instance, BribePlan, BribeVector, CbcctInstance, Rational};

const ALL: [Algorithm; 4] = [
    Algorithm::BruteForce,
    Algorithm::Dp,
    Algorithm::FptBribeValues,
    Algorithm::FptProbValues,
];

fn two_challengers(budget: u64, threshold: Rational) -> CbcctInstance {
    let c1 = BribeVector::from_pairs([(0, rat(1, 2)), (1, rat_int(1))]).unwrap();
    let c2 = BribeVector::from_pairs([(0, rat(1, 3)), (2, rat(2, 3))]).unwrap();
    CbcctInstance::new(vec![c1, c2], budget, threshold).unwrap()
}

#[test]
fn two_challenger_example_every_solver() {
    let yes = two_challengers(1, rat(1, 3));
    let no = two_challengers(2, rat(1, 2));
    for algo in ALL {
        let r = solve(&yes, algo).unwrap();
        assert!(r.decision, "{algo}");
        assert_eq!(r.best_probability, Some(rat(1, 3)), "{algo}");
        assert!(!solve(&no, algo).unwrap().decision, "{algo}");
    }
    assert_eq!(solve(&no, Algorithm::Dp).unwrap().best_probability, Some(rat(1, 3)));
    assert_eq!(solve(&yes, Algorithm::BruteForce).unwrap().witness, Some(BribePlan::new(vec![1, 0])));
    assert_eq!(solve(&no, Algorithm::BruteForce).unwrap().witness, Some(BribePlan::new(vec![0, 1])));
}

#[test]
fn plan_evaluation() {
    let inst = two_challengers(1, rat(1, 3));
    let v = evaluate_plan(&inst, &BribePlan::new(vec![1, 0])).unwrap();
    assert_eq!((v.cost, v.win_probability), (1, rat(1, 3)));
    let v = evaluate_plan(&inst, &BribePlan::new(vec![0, 0])).unwrap();
    assert_eq!((v.cost, v.win_probability), (0, rat(1, 6)));
    assert!(evaluate_plan(&inst, &BribePlan::new(vec![2, 0])).is_err());
    let empty = CbcctInstance::new(vec![], 0, rat_int(1)).unwrap();
    let v = evaluate_plan(&empty, &BribePlan::new(vec![])).unwrap();
    assert_eq!((v.cost, v.win_probability), (0, rat_int(1)));
}

#[test]
fn degenerate_instances() {
    let empty = CbcctInstance::new(vec![], 0, rat_int(1)).unwrap();
    for algo in ALL {
        assert!(solve(&empty, algo).unwrap().decision, "{algo}");
    }
    let single = CbcctInstance::new(
        vec![BribeVector::from_pairs([(0, rat(1, 4)), (5, rat(3, 4))]).unwrap()],
        5,
        rat(3, 4),
    )
    .unwrap();
    for algo in ALL {
        assert!(solve(&single, algo).unwrap().decision, "{algo}");
    }
    let top = CbcctInstance::new(
        vec![BribeVector::from_pairs([(0, rat(1, 2)), (4, rat_int(1))]).unwrap()],
        3,
        rat_int(1),
    )
    .unwrap();
    let r = solve(&top, Algorithm::FptProbValues).unwrap();
    assert_eq!(r.min_budget, Some(4));
    assert!(!r.decision);
    let zero_threshold = two_challengers(0, rat_int(0));
    let r = solve(&zero_threshold, Algorithm::FptProbValues).unwrap();
    assert_eq!(r.min_budget, Some(0));
    assert!(r.decision);
}

#[test]
fn identical_challengers_reach_top_power() {
    let v = BribeVector::from_pairs([(0, rat(1, 4)), (2, rat(1, 2)), (3, rat(3, 4))]).unwrap();
    let inst = CbcctInstance::new(vec![v; 5], 15, rat_int(0)).unwrap();
    for algo in [Algorithm::BruteForce, Algorithm::Dp, Algorithm::FptBribeValues] {
        assert_eq!(solve(&inst, algo).unwrap().best_probability, Some(rat(243, 1024)), "{algo}");
    }
}

#[test]
fn normalization_examples() {
    let v = BribeVector::from_pairs([(0, rat(1, 2)), (3, rat(1, 2))]).unwrap();
    let inst = CbcctInstance::new(vec![v], 3, rat(1, 2)).unwrap();
    let norm = normalize_instance(&inst);
    assert_eq!(norm.bribe_vectors[0], BribeVector::from_pairs([(0, rat(1, 2))]).unwrap());
    assert_eq!(
        solve_bruteforce(&inst).unwrap().best_probability,
        solve_bruteforce(&norm).unwrap().best_probability
    );
    let monotone = two_challengers(1, rat(1, 3));
    assert_eq!(normalize_instance(&monotone), monotone);
}

#[test]
fn cbcct_json_schema() {
    let text = r#"{"players": [{"entries": [{"bribe": 0, "p": "1/2"}, {"bribe": 1, "p": "1"}]},
                               {"entries": [{"bribe": 0, "p": "1/3"}, {"bribe": 2, "p": "2/3"}]}],
                   "budget": 1, "threshold": "1/3"}"#;
    let inst: CbcctInstance = parse_instance(text).unwrap();
    assert_eq!(inst, two_challengers(1, rat(1, 3)));
    let back = serde_json::to_value(&inst).unwrap();
    assert_eq!(back["players"][0]["entries"][1]["p"], "1/1");
    assert!(parse_instance::<CbcctInstance>(r#"{"players": [], "budget": 0, "threshold": "3/2"}"#).is_err());
    let unsorted = r#"{"players": [{"entries": [{"bribe": 2, "p": "1/2"}, {"bribe": 1, "p": "1"}]}], "budget": 0, "threshold": "0"}"#;
    assert!(parse_instance::<CbcctInstance>(unsorted).is_err());
}

#[test]
fn ksum_chain_example() {
    let src = SmallKSumInstance::new(vec![-1, 1, 2], 2).unwrap();
    let shifted = shift_ksum(&src).unwrap();
    assert_eq!((shifted.numbers.clone(), shifted.target), (vec![242, 244, 245], 486));
    let pkp = ksum_to_pkp(&shifted).unwrap();
    // 236196/235954 in lowest terms.
    assert_eq!(format_rational(&pkp.items[0].profit), "118098/117977");
    assert_eq!(pkp.items[0].profit, rat(236196, 235954));
    assert_eq!(pkp.target, rat(472392, 471421));
    assert!(verify_reduction(&src, &pkp, oracles::ksum, oracles::pkp).unwrap().equivalent);
}

#[test]
fn mpk_example_both_thresholds() {
    for (target, decision) in [(rat(1, 3), true), (rat(1, 2), false)] {
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
        let mpk = MpkInstance::new(knapsack, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(solve_mpk_bruteforce(&mpk).unwrap().decision, decision);
        let cbcct = mpk_to_cbcct(&mpk).unwrap();
        let r = verify_reduction(&mpk, &cbcct, oracles::mpk, oracles::cbcct).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.target_decision, decision);
    }
}

#[test]
fn cup_examples() {
    let image = cbcct_to_cup(&two_challengers(1, rat(1, 3))).unwrap();
    let r = solve_cup_bruteforce(&image).unwrap();
    assert_eq!(r.best_probability, Some(rat(1, 3)));
    assert!(r.decision);

    let single = uniform_cup(2, |_, _| rat(1, 2)).unwrap();
    assert_eq!(single.combination_count(), 1);
    assert_eq!(solve_cup_bruteforce(&single).unwrap().best_probability, Some(rat(1, 4)));

    let text = r#"{"players": 2, "favorite": 0, "seeding": [1, 2],
                   "pairs": [{"player": 1, "opponent": 0, "vector": {"entries": [{"bribe": 0, "p": "1/2"}, {"bribe": 1, "p": "1"}]}}],
                   "budget": 1, "threshold": "1"}"#;
    let cup: CupInstance = parse_instance(text).unwrap();
    assert!(solve_cup_bruteforce(&cup).unwrap().decision);
}

/// Pinned regression band for the threshold policy on the solver-agreement
/// batch (measured at 265/500 for seed 7).
#[test]
fn agreement_batch_yes_rate() {
    let yes = (0..500)
        .filter(|&i| solve_bruteforce(&agreement_instance(7, i).unwrap()).unwrap().decision)
        .count();
    assert!((200..=300).contains(&yes), "{yes}/500 yes-instances");
    assert_eq!(quarter_pool().len(), 4);
}
