use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use champ_bribery::cup::{solve_cup_bruteforce, CupInstance};
use champ_bribery::generators::{
    gen_cbcct, gen_cup, gen_ksum, gen_mpk, gen_pkp, CbcctParams, ThresholdPolicy,
};
use champ_bribery::io::{parse_instance, render_instance};
use champ_bribery::knapsack::{MpkInstance, PkpInstance, SmallKSumInstance};
use champ_bribery::rational::{format_rational, parse_rational, rat};
use champ_bribery::reductions::{cbcct_to_cup, ksum_shift, ksum_to_pkp, mpk_to_cbcct, pkp_to_mpk, shift_ksum};
use champ_bribery::solvers::{solve, Algorithm};
use champ_bribery::suites::Suite;
use champ_bribery::{CbcctInstance, Rational};

#[derive(Parser)]
#[command(name = "champ", version, about = "Bribery in challenge-the-champ and cup tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; exit 0 on yes, 1 on no, 2 on error.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "dp")]
        algo: SolveAlgo,
    },
    /// Transform an instance along the reduction chain.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        from: Kind,
        #[arg(long)]
        to: Kind,
        /// Color classes for product knapsack to multicolored knapsack.
        #[arg(long)]
        partition: Option<Partition>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a seeded random instance.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        #[arg(long, global = true, default_value_t = 1)]
        seed: u64,
        /// Position of the instance within its seeded batch.
        #[arg(long, global = true, default_value_t = 0)]
        index: u64,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Run verification suites and print a pass/fail table.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Instances per suite; defaults to the acceptance count.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Time a solver over a grid of generated instances and print CSV.
    Bench {
        #[arg(long, default_value = "dp")]
        algo: SolveAlgo,
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 1000])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1000u64, 100_000])]
        budget: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Bribes beyond the free first entry are drawn from 1..max_bribe.
        #[arg(long, default_value_t = 2000)]
        max_bribe: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveAlgo {
    Brute,
    Dp,
    FptBribes,
    FptProbs,
    CupBrute,
}

impl SolveAlgo {
    fn cbcct(self) -> Option<Algorithm> {
        match self {
            SolveAlgo::Brute => Some(Algorithm::BruteForce),
            SolveAlgo::Dp => Some(Algorithm::Dp),
            SolveAlgo::FptBribes => Some(Algorithm::FptBribeValues),
            SolveAlgo::FptProbs => Some(Algorithm::FptProbValues),
            SolveAlgo::CupBrute => None,
        }
    }
}

/// Instance families in reduction-chain order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Kind {
    Ksum,
    Pkp,
    Mpk,
    Cbcct,
    Cup,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Partition {
    /// One class per item plus a zero-weight, profit-1 dummy.
    Singleton,
}

#[derive(Subcommand)]
enum GenFamily {
    Cbcct(CbcctArgs),
    Ksum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Largest magnitude, further capped by n^(2k).
        #[arg(long, default_value_t = i128::MAX)]
        bound: i128,
        #[arg(long)]
        planted: bool,
    },
    Pkp {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
        #[arg(long, default_value_t = 1)]
        max_scale: i64,
    },
    Mpk {
        /// Class sizes, e.g. 2,3,1.
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        max_weight: u64,
        #[arg(long)]
        planted: bool,
    },
    Cup {
        #[arg(long)]
        rounds: u32,
        #[command(flatten)]
        vectors: CbcctArgs,
    },
}

#[derive(Args)]
struct CbcctArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    #[arg(long, default_value_t = 2)]
    budget: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [0u64, 1, 2])]
    values: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values = ["1/4", "1/2", "3/4"], value_parser = rational_arg)]
    probs: Vec<Rational>,
    /// A fixed threshold; by default one is interpolated between the
    /// smallest and largest plan probabilities.
    #[arg(long, value_parser = rational_arg)]
    threshold: Option<Rational>,
    #[arg(long)]
    no_normalize: bool,
    #[arg(long)]
    zero_first: bool,
}

impl CbcctArgs {
    fn params(&self) -> CbcctParams {
        let mut p = CbcctParams::new(self.n, self.max_len, self.budget, self.values.clone(), self.probs.clone());
        if let Some(t) = &self.threshold {
            p.threshold = ThresholdPolicy::Fixed(t.clone());
        }
        p.normalize = !self.no_normalize;
        p.zero_first = self.zero_first;
        p
    }
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn show(p: Option<&Rational>) -> String {
    p.map_or_else(|| "none".into(), format_rational)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_solve(file: &Path, algo: SolveAlgo) -> Result<bool> {
    let text = read(file)?;
    let start = Instant::now();
    let decision = match algo.cbcct() {
        Some(algorithm) => {
            let inst: CbcctInstance = parse_instance(&text).context("parsing CBCCT instance")?;
            let r = solve(&inst, algorithm)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            println!("{} {}", if r.decision { "yes" } else { "no" }, show(r.best_probability.as_ref()));
            if let Some(w) = &r.witness {
                println!("witness: {}", join(&w.choices));
                println!("cost: {}", champ_bribery::evaluate_plan(&inst, w)?.cost);
            }
            if let Some(b) = r.min_budget {
                println!("min_budget: {b}");
            }
            println!("wall_ms: {ms:.3}");
            r.decision
        }
        None => {
            let inst: CupInstance = parse_instance(&text).context("parsing cup instance")?;
            let r = solve_cup_bruteforce(&inst)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            println!("{} {}", if r.decision { "yes" } else { "no" }, show(r.best_probability.as_ref()));
            if let Some(w) = &r.witness {
                println!("witness: {}", join(w));
            }
            println!("wall_ms: {ms:.3}");
            r.decision
        }
    };
    Ok(decision)
}

enum Any {
    Ksum(SmallKSumInstance),
    Pkp(PkpInstance),
    Mpk(MpkInstance),
    Cbcct(CbcctInstance),
    Cup(CupInstance),
}

fn cmd_reduce(file: &Path, from: Kind, to: Kind, partition: Option<Partition>, output: Option<&Path>) -> Result<()> {
    if from >= to {
        bail!("no reduction from {from:?} to {to:?}; the chain runs ksum -> pkp -> mpk -> cbcct -> cup");
    }
    if from <= Kind::Pkp && to >= Kind::Mpk && partition.is_none() {
        bail!("pkp -> mpk needs a partition policy: pass --partition singleton");
    }
    let text = read(file)?;
    let mut current = match from {
        Kind::Ksum => Any::Ksum(parse_instance(&text)?),
        Kind::Pkp => Any::Pkp(parse_instance(&text)?),
        Kind::Mpk => Any::Mpk(parse_instance(&text)?),
        Kind::Cbcct => Any::Cbcct(parse_instance(&text)?),
        Kind::Cup => unreachable!("cup is the end of the chain"),
    };
    let mut header = vec![format!("champ reduce --from {from:?} --to {to:?}").to_lowercase()];
    let mut chain = vec![format!("{from:?}").to_lowercase()];
    let mut kind = from;
    while kind < to {
        current = match current {
            Any::Ksum(inst) => {
                let shifted = if inst.shifted {
                    inst
                } else {
                    header.push(format!(
                        "k-Sum shifted by 2n^(2k) + n^(k^2) = {}",
                        ksum_shift(inst.numbers.len(), inst.k)?
                    ));
                    shift_ksum(&inst)?
                };
                Any::Pkp(ksum_to_pkp(&shifted)?)
            }
            Any::Pkp(inst) => {
                header.push("partition: singleton classes, each with a zero-weight profit-1 dummy".into());
                Any::Mpk(pkp_to_mpk(&inst)?)
            }
            Any::Mpk(inst) => Any::Cbcct(mpk_to_cbcct(&inst)?),
            Any::Cbcct(inst) => Any::Cup(cbcct_to_cup(&inst)?),
            Any::Cup(_) => unreachable!("loop stops before cup"),
        };
        kind = match kind {
            Kind::Ksum => Kind::Pkp,
            Kind::Pkp => Kind::Mpk,
            Kind::Mpk => Kind::Cbcct,
            Kind::Cbcct | Kind::Cup => Kind::Cup,
        };
        chain.push(format!("{kind:?}").to_lowercase());
    }
    header.insert(1, format!("chain: {}", chain.join(" -> ")));
    let text = match &current {
        Any::Ksum(i) => render_instance(i, &header)?,
        Any::Pkp(i) => render_instance(i, &header)?,
        Any::Mpk(i) => render_instance(i, &header)?,
        Any::Cbcct(i) => render_instance(i, &header)?,
        Any::Cup(i) => render_instance(i, &header)?,
    };
    emit(output, &text)
}

fn cmd_gen(family: &GenFamily, seed: u64, index: u64, output: Option<&Path>) -> Result<()> {
    let header = vec![format!("champ gen seed {seed} index {index}")];
    let text = match family {
        GenFamily::Cbcct(args) => render_instance(&gen_cbcct(seed, index, &args.params())?, &header)?,
        GenFamily::Ksum { n, k, bound, planted } => {
            render_instance(&gen_ksum(seed, index, *n, *k, *bound, *planted)?, &header)?
        }
        GenFamily::Pkp { n, max_weight, max_scale } => {
            render_instance(&gen_pkp(seed, index, *n, *max_weight, *max_scale)?, &header)?
        }
        GenFamily::Mpk { classes, max_weight, planted } => {
            render_instance(&gen_mpk(seed, index, classes, *max_weight, *planted)?, &header)?
        }
        GenFamily::Cup { rounds, vectors } => render_instance(&gen_cup(seed, index, *rounds, &vectors.params())?, &header)?,
    };
    emit(output, &text)
}

fn cmd_verify(suite: &str, count: Option<usize>, seed: u64) -> Result<bool> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let mut all = true;
    for s in suites {
        let r = s.run(seed, count.unwrap_or_else(|| s.default_count()));
        let ok = r.passed_all();
        all &= ok;
        println!("{:<22} {:>4} {}/{} pass  {} ms", s.label(), if ok { "ok" } else { "FAIL" }, r.passed, r.total, r.elapsed.as_millis());
        for note in &r.notes {
            println!("    {note}");
        }
        for failure in r.failures.iter().take(10) {
            println!("    failure: {failure}");
        }
    }
    Ok(all)
}

#[derive(serde::Serialize)]
struct BenchRow {
    algo: String,
    n: usize,
    #[serde(rename = "B")]
    budget: u64,
    #[serde(rename = "v_#")]
    values: usize,
    #[serde(rename = "p_#")]
    probabilities: usize,
    wall_ms: String,
    decision: &'static str,
}

fn cmd_bench(algo: SolveAlgo, ns: &[usize], budgets: &[u64], max_len: usize, max_bribe: u64, seed: u64) -> Result<()> {
    let Some(algorithm) = algo.cbcct() else {
        bail!("bench runs CBCCT solvers only");
    };
    let eighths: Vec<Rational> = (1..=8).map(|a| rat(a, 8)).collect();
    let mut out = csv::Writer::from_writer(std::io::stdout());
    for (i, &n) in ns.iter().enumerate() {
        for (j, &budget) in budgets.iter().enumerate() {
            let mut params = CbcctParams::new(n, max_len, budget, (0..max_bribe.max(2)).collect(), eighths.clone());
            params.zero_first = true;
            let inst = gen_cbcct(seed, (i * budgets.len() + j) as u64, &params)?;
            let start = Instant::now();
            let r = solve(&inst, algorithm)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            out.serialize(BenchRow {
                algo: algorithm.label().into(),
                n,
                budget,
                values: inst.distinct_bribe_values(),
                probabilities: inst.distinct_probabilities(),
                wall_ms: format!("{ms:.3}"),
                decision: if r.decision { "yes" } else { "no" },
            })?;
            out.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let code = |ok: bool| if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    match cli.command {
        Command::Solve { file, algo } => cmd_solve(&file, algo).map(code),
        Command::Reduce {
            file,
            from,
            to,
            partition,
            output,
        } => cmd_reduce(&file, from, to, partition, output.as_deref()).map(|()| ExitCode::SUCCESS),
        Command::Gen {
            family,
            seed,
            index,
            output,
        } => cmd_gen(&family, seed, index, output.as_deref()).map(|()| ExitCode::SUCCESS),
        Command::Verify { suite, count, seed } => cmd_verify(&suite, count, seed).map(code),
        Command::Bench {
            algo,
            n,
            budget,
            max_len,
            max_bribe,
            seed,
        } => cmd_bench(algo, &n, &budget, max_len, max_bribe, seed).map(|()| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
