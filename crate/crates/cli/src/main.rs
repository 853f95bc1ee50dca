//! `fgsim`: generate instances, build circuits, simulate and verify.
//!
//! Exit codes: 0 success, 1 an exact comparison failed, 2 bad input,
//! 3 a resource cap (dense qubit cap) was exceeded.

mod instance_file;
mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fgsim_core::circuit::text::{built_from_text, built_to_text};
use fgsim_core::generate::{random_nwt, random_ov, random_threesum};
use fgsim_core::sim::{simulate_dense, simulate_pathsum, DEFAULT_DENSE_CAP};
use fgsim_core::verify::{oracle, verify_built, VerifyOptions, VerifyReport, DENSE_TOLERANCE};
use fgsim_core::{builders, BuiltCircuit, Instance, Mode, Problem};

use instance_file::InstanceFile;

#[derive(Parser)]
#[command(name = "fgsim", version, about = "Gap-encoding circuits: build, simulate, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file from a seed.
    Gen(GenArgs),
    /// Build the circuit for an instance and write it in text form.
    Build(BuildArgs),
    /// Simulate an instance or a built circuit and print p_acc.
    Simulate(SimulateArgs),
    /// Check p_acc against the brute-force gap for one instance.
    Verify(VerifyArgs),
    /// Run `verify` over a grid of sizes and random trials.
    Sweep(sweep::SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Qram,
    Explicit,
    Both,
}

impl ModeArg {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Qram => vec![Mode::Qram],
            ModeArg::Explicit => vec![Mode::Explicit],
            ModeArg::Both => vec![Mode::Qram, Mode::Explicit],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Pathsum,
    Dense,
    Both,
}

#[derive(Args, Clone)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    /// `pathsum` gives the exact p_acc; `dense` and `both` add the dense
    /// state-vector cross-check.
    #[arg(long, value_enum, default_value = "pathsum")]
    pub backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: u32,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl RunConfig {
    pub fn options(&self) -> VerifyOptions {
        VerifyOptions {
            dense_cap: (self.backend != BackendArg::Pathsum).then_some(self.dense_cap),
            parallel: self.jobs > 1,
            order_seed: None,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_parser = parse_problem)]
    problem: Problem,
    #[arg(long)]
    n: usize,
    /// OV vector dimension.
    #[arg(long)]
    d: Option<usize>,
    /// 3-SUM bound `U`.
    #[arg(long = "bound", short = 'U')]
    bound: Option<i64>,
    /// NWT weight bound `M`.
    #[arg(long = "m", short = 'M')]
    m: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow sizes above the default budgets.
    #[arg(long)]
    no_budget: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "qram")]
    mode: ModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Instance JSON or a built circuit written by `build`.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "qram")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "pathsum")]
    backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[command(flatten)]
    config: RunConfig,
    /// Write the report here; `.json` gives JSON, anything else key: value
    /// text.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn parse_problem(s: &str) -> Result<Problem, String> {
    s.parse()
}

/// Why a command did not succeed; maps onto the exit codes.
#[derive(Debug)]
pub enum Failure {
    Mismatch(String),
    Input(anyhow::Error),
    Cap(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<fgsim_core::Error>() {
            Some(c @ fgsim_core::Error::DenseCapExceeded { .. }) => Failure::Cap(c.to_string()),
            _ => Failure::Input(e),
        }
    }
}

impl From<fgsim_core::Error> for Failure {
    fn from(e: fgsim_core::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    InstanceFile::parse(&read(path)?)?.to_instance()
}

pub fn generate(problem: Problem, n: usize, size: i64, seed: u64) -> fgsim_core::Result<Instance> {
    Ok(match problem {
        Problem::Ov => random_ov(n, size as usize, seed)?.into(),
        Problem::ThreeSum => random_threesum(n, size, seed)?.into(),
        Problem::Nwt => random_nwt(n, size, seed)?.into(),
    })
}

/// Largest (n, size parameter) per problem that keeps path-sum branch counts
/// at or below 2^24 and explicit-mode gate counts at or below 10^7.
pub fn budget(problem: Problem) -> (i64, i64) {
    match problem {
        Problem::Ov => (8, 4),
        Problem::ThreeSum => (6, 64),
        Problem::Nwt => (6, 3),
    }
}

pub fn check_budget(problem: Problem, n: i64, size: i64) -> anyhow::Result<()> {
    let (max_n, max_size) = budget(problem);
    if n > max_n || size > max_size {
        bail!("{problem} n={n} size={size} exceeds the budget n <= {max_n}, size <= {max_size} (pass --no-budget to override)");
    }
    Ok(())
}

fn single_mode(mode: ModeArg) -> anyhow::Result<Mode> {
    match mode {
        ModeArg::Qram => Ok(Mode::Qram),
        ModeArg::Explicit => Ok(Mode::Explicit),
        ModeArg::Both => bail!("this command takes a single mode"),
    }
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let (size, name) = match a.problem {
        Problem::Ov => (a.d.map(|d| d as i64), "--d"),
        Problem::ThreeSum => (a.bound, "--bound"),
        Problem::Nwt => (a.m, "--m"),
    };
    let size = size.ok_or_else(|| anyhow!("{} needs {name}", a.problem))?;
    let inst = generate(a.problem, a.n, size, a.seed)?;
    if !a.no_budget {
        check_budget(a.problem, a.n as i64, size)?;
    }
    emit(a.out.as_deref(), &InstanceFile::from_instance(&inst, Some(a.seed)).to_json())?;
    Ok(())
}

fn cmd_build(a: BuildArgs) -> CmdResult {
    let inst = load_instance(&a.input)?;
    let built = builders::build(&inst, single_mode(a.mode)?)?;
    emit(a.out.as_deref(), &built_to_text(&built))?;
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let text = read(&a.input)?;
    let built: BuiltCircuit = if text.trim_start().starts_with("built") {
        built_from_text(&text)?
    } else {
        let inst = InstanceFile::parse(&text)?.to_instance()?;
        builders::build(&inst, single_mode(a.mode)?)?
    };
    let mut out = String::new();
    out.push_str(&format!("problem: {}\nmode: {}\nqubits: {}\n", built.problem, built.mode, built.circuit.n_qubits()));
    let exact = if a.backend != BackendArg::Dense {
        let o = simulate_pathsum(&built.circuit)?;
        out.push_str(&format!(
            "branches: {}\nsigned_sum: {}\np_acc: {}\n",
            o.branches, o.signed_sum, o.p_acc_exact
        ));
        Some(o.p_acc_exact.to_f64())
    } else {
        None
    };
    let mut agree = true;
    if a.backend != BackendArg::Pathsum {
        let p = simulate_dense(&built.circuit, a.dense_cap)?;
        out.push_str(&format!("p_acc_dense: {p:e}\n"));
        if let Some(e) = exact {
            agree = (p - e).abs() <= DENSE_TOLERANCE;
            out.push_str(&format!("backends_agree: {agree}\n"));
        }
    }
    emit(a.out.as_deref(), &out)?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Mismatch("dense and path-sum disagree".into()))
    }
}

pub fn verify_modes(inst: &Instance, config: &RunConfig) -> Result<Vec<VerifyReport>, Failure> {
    let counts = oracle(inst);
    let mut reports = Vec::new();
    for mode in config.mode.modes() {
        let built = builders::build(inst, mode)?;
        reports.push(verify_built(&built, counts, config.options())?);
    }
    Ok(reports)
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let inst = load_instance(&a.input)?;
    let reports = verify_modes(&inst, &a.config)?;
    let text: Vec<String> = reports.iter().map(VerifyReport::to_text).collect();
    let text = text.join("---\n");
    print!("{text}");
    if let Some(path) = &a.out {
        let body = if path.extension().is_some_and(|e| e == "json") {
            let mut s = serde_json::to_string_pretty(&reports).expect("reports serialize");
            s.push('\n');
            s
        } else {
            text.clone()
        };
        emit(Some(path), &body)?;
    }
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Mismatch("identity check failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => sweep::cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("fgsim: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("fgsim: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("fgsim: {msg}");
            ExitCode::from(3)
        }
    }
}
