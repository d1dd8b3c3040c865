//! Seeded verification suites shared by the `verify` command and the
//! acceptance tests. Each suite returns a [`SuiteReport`] counting checks
//! that passed and describing every failure.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Pow, Zero};
use rand::Rng;

use crate::cup::{bracket_distribution, cup_win_probability};
use crate::error::{Error, Result};
use crate::generators::{
    gen_cbcct, gen_cup, gen_mpk, gen_non_monotone_cbcct, instance_rng, quarter_pool, random_cup_choices,
    CbcctParams,
};
use crate::instance::{evaluate_plan, normalize_instance, BribePlan, CbcctInstance};
use crate::knapsack::{max_items_fitting, SmallKSumInstance};
use crate::milp::{
    compare_log_combinations, integralize_solution, is_totally_unimodular, solve_lp_exact, solve_milp, FormalLog,
    MilpModel, MilpSolution, ObjectiveValue, Relation, Scalar, Sense, Status, DEFAULT_TU_CAP,
};
use crate::rational::{format_rational, rat, rat_int};
use crate::reductions::{
    cbcct_to_cup, cup_choices_for_plan, ksum_preconditions_met, ksum_to_pkp, mpk_to_cbcct, oracles, shift_ksum,
    verify_reduction,
};
use crate::solvers::{
    build_bribe_value_milp, build_prob_value_milp, dp_budget_sweep, solve_bruteforce, solve_dp,
    solve_fpt_bribe_values, solve_fpt_prob_values,
};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    SolverAgreement,
    Normalization,
    DpScale,
    MilpIntegrality,
    KsumChain,
    MpkToCbcct,
    CbcctToCup,
    MilpContracts,
    BracketNormalization,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::SolverAgreement,
        Suite::Normalization,
        Suite::DpScale,
        Suite::MilpIntegrality,
        Suite::KsumChain,
        Suite::MpkToCbcct,
        Suite::CbcctToCup,
        Suite::MilpContracts,
        Suite::BracketNormalization,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Suite::SolverAgreement => "solver-agreement",
            Suite::Normalization => "normalization",
            Suite::DpScale => "dp-scale",
            Suite::MilpIntegrality => "milp-integrality",
            Suite::KsumChain => "ksum-chain",
            Suite::MpkToCbcct => "mpk-cbcct",
            Suite::CbcctToCup => "cbcct-cup",
            Suite::MilpContracts => "milp-contracts",
            Suite::BracketNormalization => "bracket-normalization",
        }
    }

    /// Instance count of the acceptance run. The k-Sum chain is exhaustive
    /// and ignores counts.
    pub fn default_count(&self) -> usize {
        match self {
            Suite::SolverAgreement => 500,
            Suite::Normalization => 200,
            Suite::DpScale => 1,
            Suite::MilpIntegrality => 100,
            Suite::KsumChain => 0,
            Suite::MpkToCbcct => 200,
            Suite::CbcctToCup => 100,
            Suite::MilpContracts => 1000,
            Suite::BracketNormalization => 100,
        }
    }

    /// Wall-clock limit of the acceptance run.
    pub fn time_limit(&self) -> Duration {
        Duration::from_secs(match self {
            Suite::SolverAgreement | Suite::MilpIntegrality | Suite::CbcctToCup => 120,
            Suite::Normalization | Suite::KsumChain | Suite::MpkToCbcct => 60,
            Suite::DpScale | Suite::MilpContracts | Suite::BracketNormalization => 30,
        })
    }

    pub fn run(&self, seed: u64, count: usize) -> SuiteReport {
        let start = Instant::now();
        let mut report = SuiteReport::new(*self);
        let outcome = match self {
            Suite::SolverAgreement => solver_agreement(&mut report, seed, count),
            Suite::Normalization => normalization(&mut report, seed, count),
            Suite::DpScale => dp_scale(&mut report, seed),
            Suite::MilpIntegrality => milp_integrality(&mut report, seed, count),
            Suite::KsumChain => ksum_chain(&mut report),
            Suite::MpkToCbcct => mpk_chain(&mut report, seed, count),
            Suite::CbcctToCup => cup_chain(&mut report, seed, count),
            Suite::MilpContracts => milp_contracts(&mut report, seed, count),
            Suite::BracketNormalization => bracket(&mut report, seed, count),
        };
        if let Err(e) = outcome {
            report.fail(format!("aborted: {e}"));
        }
        report.elapsed = start.elapsed();
        report
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.label() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite {s}")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<String>,
    /// Observations that are not failures, such as yes-rates or checks
    /// skipped for size.
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            total: 0,
            passed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(failure());
        }
    }

    fn fail(&mut self, failure: String) {
        self.total += 1;
        self.failures.push(failure);
    }

    pub fn passed_all(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total
    }

    pub fn within(&self, limit: Duration) -> bool {
        self.elapsed < limit
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} pass ({} ms)",
            self.suite,
            self.passed,
            self.total,
            self.elapsed.as_millis()
        )
    }
}

/// A second stream per instance for suite-level knobs, disjoint from the
/// streams the generators use.
fn knob_rng(seed: u64, index: u64) -> rand_chacha::ChaCha8Rng {
    instance_rng(seed, index | 1 << 63)
}

fn show(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "none".into(), format_rational)
}

/// The acceptance parameters of solver agreement for instance `index`:
/// `n <= 6`, vectors of length at most 3, `B <= 20`, quarter probabilities.
pub fn agreement_instance(seed: u64, index: u64) -> Result<CbcctInstance> {
    let mut knobs = knob_rng(seed, index);
    let n = knobs.gen_range(1..=6);
    let budget = knobs.gen_range(0..=20);
    let mut params = CbcctParams::new(n, 3, budget, (0..=20).collect(), quarter_pool());
    params.normalize = index % 2 == 0;
    params.zero_first = index % 3 != 0;
    gen_cbcct(seed, index, &params)
}

fn solver_agreement(report: &mut SuiteReport, seed: u64, count: usize) -> Result<()> {
    let mut yes = 0;
    for index in 0..count as u64 {
        let inst = agreement_instance(seed, index)?;
        let brute = solve_bruteforce(&inst)?;
        let dp = solve_dp(&inst)?;
        let fpt = solve_fpt_bribe_values(&inst)?;
        let probs = solve_fpt_prob_values(&inst)?;
        yes += usize::from(brute.decision);
        let ok = brute.best_probability == dp.best_probability
            && brute.best_probability == fpt.best_probability
            && brute.decision == dp.decision
            && brute.decision == fpt.decision
            && brute.decision == probs.decision;
        report.check(ok, || {
            format!(
                "instance {index}: brute {} {}, dp {} {}, fpt-bribes {} {}, fpt-probs {}",
                show(&brute.best_probability),
                brute.decision,
                show(&dp.best_probability),
                dp.decision,
                show(&fpt.best_probability),
                fpt.decision,
                probs.decision
            )
        });
    }
    report.notes.push(format!("yes-instances: {yes}/{count}"));
    Ok(())
}

fn normalization(report: &mut SuiteReport, seed: u64, count: usize) -> Result<()> {
    for index in 0..count as u64 {
        let mut knobs = knob_rng(seed, index);
        let n = knobs.gen_range(1..=6);
        let budget = knobs.gen_range(0..=20);
        let mut params = CbcctParams::new(n, 4, budget, (0..=12).collect(), quarter_pool());
        params.prob_pool.insert(0, Rational::zero());
        let raw = gen_non_monotone_cbcct(seed, index, &params)?;
        let normalized = normalize_instance(&raw);
        let before = dp_budget_sweep(&raw)?;
        let after = dp_budget_sweep(&normalized)?;
        report.check(before == after && !raw.is_monotone() && normalized.is_monotone(), || {
            format!("instance {index}: budget sweeps differ")
        });
    }
    Ok(())
}

/// The single large DP instance: 1000 challengers, `B = 10^5`, vectors of
/// length up to 4 starting at bribe 0, further bribes below 2000 and
/// probabilities in eighths.
pub fn dp_scale_instance(seed: u64) -> Result<CbcctInstance> {
    let eighths = (1..=8).map(|a| rat(a, 8)).collect();
    let mut params = CbcctParams::new(1000, 4, 100_000, (0..2000).collect(), eighths);
    params.normalize = false;
    params.zero_first = true;
    gen_cbcct(seed, 0, &params)
}

fn dp_scale(report: &mut SuiteReport, seed: u64) -> Result<()> {
    let inst = dp_scale_instance(seed)?;
    let result = solve_dp(&inst)?;
    let best = result.best_probability.clone();
    let witness = result
        .witness
        .as_ref()
        .map(|plan| evaluate_plan(&inst, plan))
        .transpose()?;
    report.check(
        witness
            .as_ref()
            .is_some_and(|v| Some(&v.win_probability) == best.as_ref() && v.cost <= inst.budget),
        || "witness does not reproduce the optimum exactly".into(),
    );
    // The optimum dominates the unbribed plan and every single upgrade
    // that fits on its own.
    let base = evaluate_plan(&inst, &BribePlan::first_entries(inst.num_challengers()))?;
    let fits = base.cost <= inst.budget;
    report.check(!fits || best.as_ref().is_some_and(|b| *b >= base.win_probability), || {
        "optimum below the unbribed plan".into()
    });
    report.notes.push(format!(
        "best probability has a {}-bit denominator",
        best.as_ref().map_or(0, |b| b.denom().bits())
    ));
    Ok(())
}

fn milp_integrality(report: &mut SuiteReport, seed: u64, count: usize) -> Result<()> {
    let mut tu_checked = 0;
    let mut infeasible = 0;
    for index in 0..count as u64 {
        let inst = normalize_instance(&agreement_instance(seed, index)?);
        // Infeasibility is expected exactly when no plan is affordable
        // (bribe values) or no plan reaches the threshold (probabilities).
        let outcome = if index % 2 == 0 {
            let (model, _) = build_bribe_value_milp(&inst)?;
            let none_affordable = solve_bruteforce(&inst)?.best_probability.is_none();
            check_integrality(report, index, &model, none_affordable)?
        } else {
            let (model, _) = build_prob_value_milp(&inst)?;
            let unbounded = inst.with_budget(u64::MAX);
            let unreachable = solve_bruteforce(&unbounded)?.best_probability.is_none_or(|p| p < inst.threshold);
            check_integrality(report, index, &model, unreachable)?
        };
        tu_checked += usize::from(outcome.0);
        infeasible += usize::from(outcome.1);
    }
    report
        .notes
        .push(format!("fractional blocks within the TU cap: {tu_checked}/{count}"));
    report.notes.push(format!("infeasible models, confirmed by brute force: {infeasible}"));
    Ok(())
}

/// Returns whether the TU check ran and whether the model was infeasible.
fn check_integrality<O: ObjectiveValue<Rational> + PartialEq>(
    report: &mut SuiteReport,
    index: u64,
    model: &MilpModel<Rational, O>,
    expect_infeasible: bool,
) -> Result<(bool, bool)> {
    let block = model.fractional_submatrix()?;
    let width = block.first().map_or(0, Vec::len);
    let within = block.len() <= DEFAULT_TU_CAP && width <= DEFAULT_TU_CAP;
    if within {
        report.check(is_totally_unimodular(&block)?, || {
            format!("model {index}: fractional block is not totally unimodular")
        });
    }
    let mixed = solve_milp(model)?;
    let infeasible = mixed.status == Status::Infeasible;
    report.check(infeasible == expect_infeasible && mixed.status != Status::Unbounded, || {
        format!("model {index}: solve_milp returned {}", mixed.status)
    });
    if mixed.status == Status::Optimal {
        let integral = integralize_solution(model, &mixed)?;
        report.check(
            integral.assignment.iter().all(Scalar::is_integral)
                && integral.objective_value == mixed.objective_value
                && model.is_feasible(&integral.assignment),
            || format!("model {index}: integralized solution differs"),
        );
    }
    Ok((within, infeasible))
}

/// Advances `v` to the next tuple of `[lo, hi]^len` with the last position
/// fastest; false after the last tuple.
fn next_tuple(v: &mut [i128], lo: i128, hi: i128) -> bool {
    for x in v.iter_mut().rev() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

/// Every k-Sum instance with `1 <= n <= 6`, `k` in `{2, 3}` and entries in
/// `[-3, 3]`, enumerated as sequences. For `n = 1` the range invariant
/// narrows the entries to `[-1, 1]`.
fn ksum_chain(report: &mut SuiteReport) -> Result<()> {
    let mut flagged = 0usize;
    let mut yes = 0usize;
    for k in 2..=3usize {
        for n in 1..=6usize {
            let limit = 3i128.min((n as i128).pow(2 * k as u32));
            let mut numbers = vec![-limit; n];
            loop {
                let src = SmallKSumInstance::new(numbers.clone(), k)?;
                let shifted = shift_ksum(&src)?;
                let pkp = ksum_to_pkp(&shifted)?;
                let r = verify_reduction(&src, &pkp, oracles::ksum, oracles::pkp)?;
                yes += usize::from(r.source_decision);
                let ok = r.equivalent && max_items_fitting(&pkp) <= k;
                if !ok && !ksum_preconditions_met(&shifted) {
                    flagged += 1;
                }
                report.check(ok, || format!("k={k} S={numbers:?}: k-Sum {} vs PKP {}", r.source_decision, r.target_decision));
                if !next_tuple(&mut numbers, -limit, limit) {
                    break;
                }
            }
        }
    }
    report.notes.push(format!("yes-instances: {yes}/{}", report.total));
    report
        .notes
        .push(format!("mismatches on instances below the k >= 4 size precondition: {flagged}"));
    Ok(())
}

fn mpk_chain(report: &mut SuiteReport, seed: u64, count: usize) -> Result<()> {
    let mut yes = 0;
    for index in 0..count as u64 {
        let mut knobs = knob_rng(seed, index);
        let classes = knobs.gen_range(1..=4);
        let sizes: Vec<usize> = (0..classes).map(|_| knobs.gen_range(1..=3)).collect();
        let src = gen_mpk(seed, index, &sizes, 6, index % 2 == 0)?;
        let dst = mpk_to_cbcct(&src)?;
        let r = verify_reduction(&src, &dst, oracles::mpk, oracles::cbcct)?;
        yes += usize::from(r.source_decision);
        let best_src = crate::knapsack::solve_mpk_bruteforce(&src)?.best_product;
        let best_dst = solve_bruteforce(&dst)?.best_probability;
        report.check(r.equivalent && best_src == best_dst, || {
            format!(
                "instance {index}: MPK {} ({}) vs CBCCT {} ({})",
                r.source_decision,
                show(&best_src),
                r.target_decision,
                show(&best_dst)
            )
        });
    }
    report.notes.push(format!("yes-instances: {yes}/{count}"));
    Ok(())
}

/// Challenger counts 1..=5, so roughly half of a batch is small enough for
/// the cup side.
pub fn cup_source_instance(seed: u64, index: u64) -> Result<CbcctInstance> {
    let mut knobs = knob_rng(seed, index);
    let n = knobs.gen_range(1..=5);
    let budget = knobs.gen_range(0..=10);
    gen_cbcct(seed, index, &CbcctParams::new(n, 3, budget, (0..=5).collect(), quarter_pool()))
}

fn cup_chain(report: &mut SuiteReport, seed: u64, count: usize) -> Result<()> {
    let mut eligible = 0;
    let mut per_plan = 0;
    for index in 0..count as u64 {
        let src = cup_source_instance(seed, index)?;
        if src.num_challengers() > 3 {
            continue;
        }
        eligible += 1;
        let cup = cbcct_to_cup(&src)?;
        let r = verify_reduction(&src, &cup, oracles::cbcct, oracles::cup)?;
        report.check(r.equivalent, || {
            format!("instance {index}: CBCCT {} vs cup {}", r.source_decision, r.target_decision)
        });
        if per_plan < 20 {
            per_plan += 1;
            let mut plan = vec![0usize; src.num_challengers()];
            'plans: loop {
                let bribe = BribePlan::new(plan.clone());
                let choices = cup_choices_for_plan(&cup, &bribe);
                let direct = evaluate_plan(&src, &bribe)?.win_probability;
                let bracket = cup_win_probability(&cup, &choices)?;
                report.check(direct == bracket, || {
                    format!("instance {index} plan {plan:?}: evaluate_plan {direct} vs cup {bracket}")
                });
                for i in (0..plan.len()).rev() {
                    plan[i] += 1;
                    if plan[i] < src.bribe_vectors[i].len() {
                        continue 'plans;
                    }
                    plan[i] = 0;
                }
                break;
            }
        }
    }
    report
        .notes
        .push(format!("instances with at most 3 challengers: {eligible}/{count}; per-plan instances: {per_plan}"));
    Ok(())
}

fn milp_contracts(report: &mut SuiteReport, seed: u64, count: usize) -> Result<()> {
    worked_examples(report)?;
    for index in 0..count as u64 {
        let mut rng = instance_rng(seed, index);
        let m = rng.gen_range(1..=4);
        let bases: Vec<Rational> = (0..m).map(|_| rat(rng.gen_range(1..=9), rng.gen_range(1..=9))).collect();
        let lhs: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=5)).collect();
        let rhs: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=5)).collect();
        let logs = bases.iter().cloned().map(FormalLog::new).collect::<Result<Vec<_>>>()?;
        let power = |k: &[u64]| -> Rational {
            bases
                .iter()
                .zip(k)
                .fold(Rational::one(), |acc, (q, &e)| acc * Pow::pow(q, e as u32))
        };
        let expected = power(&lhs).cmp(&power(&rhs));
        let got = compare_log_combinations(&logs, &lhs, &rhs);
        report.check(got == expected, || {
            format!("draw {index}: bases {bases:?} exponents {lhs:?} vs {rhs:?}: {got:?} != {expected:?}")
        });
    }
    Ok(())
}

type Model = MilpModel<Rational, Rational>;

fn lp_check(
    report: &mut SuiteReport,
    name: &str,
    solution: Result<MilpSolution<Rational, Rational>>,
    status: Status,
    point: Option<Vec<Rational>>,
    objective: Option<Rational>,
) {
    let ok = match &solution {
        Ok(s) => s.status == status && point.as_ref().is_none_or(|p| *p == s.assignment) && s.objective_value == objective,
        Err(_) => false,
    };
    report.check(ok, || format!("{name}: got {solution:?}"));
}

/// The worked LP, MILP, TU and integralization examples.
fn worked_examples(report: &mut SuiteReport) -> Result<()> {
    let int = rat_int;

    let mut m = Model::new(Sense::Maximize);
    let x1 = m.add_variable("x1", false, None);
    let x2 = m.add_variable("x2", false, None);
    m.set_objective(x1, int(1));
    m.set_objective(x2, int(1));
    m.add_row("c1", vec![(x1, int(1))], Relation::Le, int(2));
    m.add_row("c2", vec![(x2, int(1))], Relation::Le, int(3));
    lp_check(report, "box LP", solve_lp_exact(&m), Status::Optimal, Some(vec![int(2), int(3)]), Some(int(5)));

    let mut m = Model::new(Sense::Maximize);
    let x1 = m.add_variable("x1", false, None);
    let x2 = m.add_variable("x2", false, None);
    m.set_objective(x1, int(2));
    m.set_objective(x2, int(1));
    m.add_row("c1", vec![(x1, int(1)), (x2, int(1))], Relation::Le, int(4));
    m.add_row("c2", vec![(x1, int(1))], Relation::Le, int(3));
    lp_check(report, "vertex LP", solve_lp_exact(&m), Status::Optimal, Some(vec![int(3), int(1)]), Some(int(7)));

    let mut m = Model::new(Sense::Maximize);
    let x1 = m.add_variable("x1", false, None);
    m.set_objective(x1, int(1));
    m.add_row("c", vec![(x1, int(1))], Relation::Le, int(-1));
    lp_check(report, "infeasible LP", solve_lp_exact(&m), Status::Infeasible, None, None);

    let mut m = Model::new(Sense::Maximize);
    let x = m.add_variable("x", true, None);
    m.set_objective(x, int(1));
    m.add_row("c", vec![(x, int(2))], Relation::Le, int(3));
    lp_check(report, "floor MILP", solve_milp(&m), Status::Optimal, Some(vec![int(1)]), Some(int(1)));

    let mut m = Model::new(Sense::Maximize);
    let x = m.add_variable("x", true, None);
    let y = m.add_variable("y", false, None);
    m.set_objective(x, int(1));
    m.set_objective(y, int(1));
    m.add_row("c1", vec![(x, int(1)), (y, int(2))], Relation::Le, int(4));
    m.add_row("c2", vec![(x, int(1))], Relation::Le, int(1));
    lp_check(
        report,
        "mixed MILP",
        solve_milp(&m),
        Status::Optimal,
        Some(vec![int(1), rat(3, 2)]),
        Some(rat(5, 2)),
    );

    let mut m = Model::new(Sense::Maximize);
    let x = m.add_variable("x", true, None);
    m.set_objective(x, int(1));
    m.add_row("lo", vec![(x, int(1))], Relation::Ge, rat(1, 3));
    m.add_row("hi", vec![(x, int(1))], Relation::Le, rat(2, 3));
    lp_check(report, "empty integer slice", solve_milp(&m), Status::Infeasible, None, None);

    let identity: Vec<Vec<Rational>> = (0..4)
        .map(|i| (0..4).map(|j| int(i64::from(i == j))).collect())
        .collect();
    let tu = |rows: &[&[i64]]| -> Vec<Vec<Rational>> { rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect() };
    report.check(is_totally_unimodular(&identity)?, || "identity is not TU".into());
    report.check(!is_totally_unimodular(&tu(&[&[1, 1], &[-1, 1]]))?, || "[[1,1],[-1,1]] is TU".into());
    report.check(is_totally_unimodular(&tu(&[&[1, 0], &[1, 1], &[0, 1]]))?, || {
        "[[1,0],[1,1],[0,1]] is not TU".into()
    });

    // Supply s <= 2 shipped along four routes to two unit demands.
    let mut m = Model::new(Sense::Maximize);
    let s = m.add_variable("s", true, Some(int(2)));
    let r: Vec<usize> = (1..=4).map(|i| m.add_variable(format!("r{i}"), false, None)).collect();
    for (&j, c) in r.iter().zip([1, 2, 1, 2]) {
        m.set_objective(j, int(c));
    }
    let mut supply: Vec<(usize, Rational)> = r.iter().map(|&j| (j, int(1))).collect();
    supply.push((s, int(-1)));
    m.add_row("supply", supply, Relation::Eq, int(0));
    m.add_row("d1", vec![(r[0], int(1)), (r[2], int(1))], Relation::Eq, int(1));
    m.add_row("d2", vec![(r[1], int(1)), (r[3], int(1))], Relation::Eq, int(1));
    let half = rat(1, 2);
    let mixed = MilpSolution {
        status: Status::Optimal,
        assignment: vec![int(2), half.clone(), half.clone(), half.clone(), half],
        objective_value: Some(int(3)),
    };
    let out = integralize_solution(&m, &mixed)?;
    report.check(
        out.assignment.iter().all(|v| v.is_integer())
            && out.assignment[0] == int(2)
            && out.objective_value == Some(int(3))
            && m.is_feasible(&out.assignment),
        || format!("transportation block: got {out:?}"),
    );
    Ok(())
}

fn bracket(report: &mut SuiteReport, seed: u64, count: usize) -> Result<()> {
    let mut pool = quarter_pool();
    pool.insert(0, Rational::zero());
    for index in 0..count as u64 {
        let rounds = knob_rng(seed, index).gen_range(1..=3);
        let cup = gen_cup(seed, index, rounds, &CbcctParams::new(0, 3, 0, (0..=4).collect(), pool.clone()))?;
        let choices = random_cup_choices(seed, index | 1 << 62, &cup);
        let total: Rational = bracket_distribution(&cup, &choices)?.iter().sum();
        report.check(total.is_one(), || format!("instance {index}: root mass {total}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.label().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        for s in [
            Suite::SolverAgreement,
            Suite::Normalization,
            Suite::MilpIntegrality,
            Suite::MpkToCbcct,
            Suite::CbcctToCup,
            Suite::MilpContracts,
            Suite::BracketNormalization,
        ] {
            let r = s.run(11, 8);
            assert!(r.passed_all(), "{r}: {:?}", r.failures);
            assert!(r.total > 0);
        }
    }
}
