//! `fgsim sweep`: verify many random instances per size and summarize.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::Args;
use fgsim_core::verify::{oracle, verify_built, VerifyReport};
use fgsim_core::{builders, Error, Gate, Problem};
use rayon::prelude::*;

use crate::{generate, parse_problem, CmdResult, Failure, RunConfig};

#[derive(Args)]
pub struct SweepArgs {
    #[arg(value_parser = parse_problem)]
    problem: Problem,
    /// Instance sizes: `4`, `1..8` (inclusive) or `2,4,8`.
    #[arg(long, value_parser = parse_list)]
    n: List,
    /// OV dimension values.
    #[arg(long, value_parser = parse_list)]
    d: Option<List>,
    /// 3-SUM bound values.
    #[arg(long = "bound", short = 'U', value_parser = parse_list)]
    bound: Option<List>,
    /// NWT weight bound values.
    #[arg(long = "m", short = 'M', value_parser = parse_list)]
    m: Option<List>,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    config: RunConfig,
    /// Append one control cell whose circuit has its phase gate removed; the
    /// sweep then must report a failure.
    #[arg(long)]
    mutated_control: bool,
    /// Allow sizes above the default budgets.
    #[arg(long)]
    no_budget: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct List(Vec<i64>);

/// `a..b` inclusive, a comma list, or a single value.
pub fn parse_list(s: &str) -> Result<List, String> {
    let int = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (int(a)?, int(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        Ok(List((a..=b).collect()))
    } else {
        s.split(',').map(int).collect::<Result<_, _>>().map(List)
    }
}

/// Seed for one trial; distinct cells and trials get unrelated streams.
fn trial_seed(base: u64, n: i64, size: i64, trial: u64) -> u64 {
    let mut h = base ^ 0x9e37_79b9_7f4a_7c15;
    for v in [n as u64, size as u64, trial] {
        h = (h ^ v).wrapping_mul(0x0100_0000_01b3).rotate_left(29);
    }
    h
}

struct Cell {
    n: i64,
    size: i64,
    passed: u64,
    trials: u64,
    skipped: Option<String>,
    max_ratio: f64,
    seconds: f64,
}

fn run_trial(
    problem: Problem,
    n: i64,
    size: i64,
    seed: u64,
    config: &RunConfig,
) -> Result<Vec<VerifyReport>, Failure> {
    let inst = generate(problem, n as usize, size, seed)?;
    crate::verify_modes(&inst, config)
}

fn run_cell(a: &SweepArgs, n: i64, size: i64) -> Result<Cell, Failure> {
    let start = Instant::now();
    let mut cell = Cell {
        n,
        size,
        passed: 0,
        trials: a.trials,
        skipped: None,
        max_ratio: 0.0,
        seconds: 0.0,
    };
    if a.trials > 0 {
        if let Err(Error::Infeasible(why)) = generate(a.problem, n as usize, size, 0) {
            cell.skipped = Some(why);
            return Ok(cell);
        }
    }
    let results: Vec<Result<Vec<VerifyReport>, Failure>> = (0..a.trials)
        .into_par_iter()
        .map(|t| run_trial(a.problem, n, size, trial_seed(a.seed, n, size, t), &a.config))
        .collect();
    for r in results {
        let reports = r?;
        if reports.iter().all(|r| r.pass) {
            cell.passed += 1;
        }
        for r in &reports {
            cell.max_ratio = cell.max_ratio.max(r.gates.max_ratio());
        }
    }
    cell.seconds = start.elapsed().as_secs_f64();
    Ok(cell)
}

/// Removes the phase gate (or failing that, an H) from the first trial
/// instance of the first cell that has a witness, and re-verifies it.
fn control(a: &SweepArgs, cells: &[(i64, i64)]) -> Result<(String, bool), Failure> {
    let mode = a.config.mode.modes()[0];
    for &(n, size) in cells {
        for t in 0..a.trials.max(1) {
            let inst = match generate(a.problem, n as usize, size, trial_seed(a.seed, n, size, t)) {
                Ok(i) => i,
                Err(Error::Infeasible(_)) => break,
                Err(e) => return Err(e.into()),
            };
            let counts = oracle(&inst);
            if counts.s == 0 {
                continue;
            }
            let built = builders::build(&inst, mode)?;
            let gates = built.circuit.gates();
            let (idx, what) = match gates.iter().position(|g| matches!(g, Gate::Z(_))) {
                Some(i) => (i, "Z"),
                None => (gates.iter().position(Gate::is_h).expect("circuit has an H layer"), "H"),
            };
            let report = verify_built(&built.without_gate(idx), counts, a.config.options())?;
            let label = format!("control n={n} {}={size} trial={t} ({what} gate {idx} removed)", size_name(a.problem));
            return Ok((label, report.pass));
        }
    }
    Err(Failure::Input(anyhow!("no instance in the sweep has a witness to mutate")))
}

fn size_name(p: Problem) -> &'static str {
    match p {
        Problem::Ov => "d",
        Problem::ThreeSum => "U",
        Problem::Nwt => "M",
    }
}

pub fn cmd_sweep(a: SweepArgs) -> CmdResult {
    let sizes = match a.problem {
        Problem::Ov => a.d.clone(),
        Problem::ThreeSum => a.bound.clone(),
        Problem::Nwt => a.m.clone(),
    }
    .map(|l| l.0)
    .ok_or_else(|| anyhow!("{} sweep needs a size list (--d, --bound or --m)", a.problem))?;
    if a.n.0.iter().any(|&n| n < 1) {
        return Err(anyhow!("--n values must be positive").into());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.config.jobs.max(1))
        .build()
        .context("thread pool")?;
    let grid: Vec<(i64, i64)> = a
        .n
        .0
        .iter()
        .flat_map(|&n| sizes.iter().map(move |&s| (n, s)))
        .collect();
    if !a.no_budget {
        for &(n, size) in &grid {
            crate::check_budget(a.problem, n, size)?;
        }
    }

    let name = size_name(a.problem);
    let mut out = String::new();
    writeln!(out, "{:<10} {:>6} {:>7} {:>7} {:>10} {:>9}", a.problem.to_string(), "n", name, "passed", "max_ratio", "seconds").unwrap();
    let (mut passed, mut total) = (0u64, 0u64);
    for &(n, size) in &grid {
        let cell = pool.install(|| run_cell(&a, n, size))?;
        match &cell.skipped {
            Some(why) => writeln!(out, "{:<10} {:>6} {:>7} skipped: {why}", "", cell.n, cell.size).unwrap(),
            None => {
                writeln!(
                    out,
                    "{:<10} {:>6} {:>7} {:>7} {:>10.4} {:>9.3}",
                    "",
                    cell.n,
                    cell.size,
                    format!("{}/{}", cell.passed, cell.trials),
                    cell.max_ratio,
                    cell.seconds
                )
                .unwrap();
                passed += cell.passed;
                total += cell.trials;
            }
        }
        print!("{out}");
        out.clear();
    }
    println!("total {passed}/{total}");

    let mut ok = passed == total;
    if a.mutated_control {
        if grid.is_empty() {
            return Err(anyhow!("--mutated-control needs at least one cell").into());
        }
        let (label, pass) = pool.install(|| control(&a, &grid))?;
        println!("{label}: {}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch("sweep reported failures".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("1..4").unwrap(), List(vec![1, 2, 3, 4]));
        assert_eq!(parse_list("1..=2").unwrap(), List(vec![1, 2]));
        assert_eq!(parse_list("3").unwrap(), List(vec![3]));
        assert_eq!(parse_list("1,8,64").unwrap(), List(vec![1, 8, 64]));
        assert!(parse_list("4..1").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn seeds_differ() {
        let a = trial_seed(0, 4, 2, 0);
        assert_ne!(a, trial_seed(0, 4, 2, 1));
        assert_ne!(a, trial_seed(0, 2, 4, 0));
        assert_ne!(a, trial_seed(1, 4, 2, 0));
    }
}
