//! `keccak-forge` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or
//! validation error.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::PossibleValue;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circuit::Circuit;
use crate::estimator::pipeline::{random_target, DEFAULT_DIGEST_WIDTH};
use crate::estimator::{render, run_pipeline, CostModel, CountingMode, PipelineConfig, Scenario, Timing};
use crate::grover::{self, GroverParams, GroverSimulator, MAX_SIM_QUBITS};
use crate::hexbits;
use crate::keccak_ref::{self, KeccakParams, KeccakState};
use crate::sim::{self, BasisState, Sampling};
use crate::synth::{self, OracleSpec, SynthesisStrategy, RESULT, STATE};

pub use config::{FileConfig, CONFIG_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_TRIALS: usize = 100;
const DEFAULT_GATE_TIME_NS: f64 = 50.0;
const DEFAULT_GATES_PER_SECOND: f64 = 1000.0;
const DEFAULT_ERROR_RATE: f64 = 1e-3;
const DEFAULT_LOGICAL_ERROR_RATE: f64 = 1e-6;
const DEFAULT_QEC_OVERHEAD: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Optimistic,
    Conservative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Equivalence,
    Ancilla,
    Reversibility,
}

impl ValueEnum for SynthesisStrategy {
    fn value_variants<'a>() -> &'a [Self] {
        &[SynthesisStrategy::Flat, SynthesisStrategy::Verified]
    }

    fn to_possible_value(&self) -> Option<PossibleValue> {
        Some(PossibleValue::new(self.as_str()))
    }
}

impl ValueEnum for CountingMode {
    fn value_variants<'a>() -> &'a [Self] {
        &[CountingMode::Headline, CountingMode::Exact]
    }

    fn to_possible_value(&self) -> Option<PossibleValue> {
        Some(PossibleValue::new(self.as_str()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "keccak-forge",
    version,
    about = "Reversible Keccak oracles and Grover resource estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a permutation or oracle netlist and print its gate counts.
    Synth(SynthArgs),
    /// Check equivalence, ancilla cleanliness and reversibility.
    Verify(VerifyArgs),
    /// End-to-end resource and feasibility report.
    Estimate(EstimateArgs),
    /// Statevector Grover sweep against the closed form.
    GroverDemo(GroverArgs),
    /// Run a netlist on one basis state.
    Simulate(SimulateArgs),
    /// Apply the reference permutation to a hex state.
    Permute(PermuteArgs),
}

#[derive(Debug, Args)]
struct KeccakArgs {
    /// Lane width w in {1, 2, 4, 8, 16, 32, 64}; the state has 25w bits [default: 64].
    #[arg(long)]
    lane_width: Option<u32>,
    /// Number of rounds [default: 3].
    #[arg(long)]
    rounds: Option<usize>,
    /// Index of the first round constant [default: 0].
    #[arg(long)]
    round_offset: Option<usize>,
    /// Circuit construction [default: paper].
    #[arg(long)]
    strategy: Option<SynthesisStrategy>,
}

#[derive(Debug, Args)]
struct DigestArgs {
    /// Compared digest width, capped at the state size.
    #[arg(long)]
    digest_width: Option<usize>,
    /// Target digest as hex; seeded random when absent.
    #[arg(long)]
    target: Option<String>,
    /// Seed for random targets and sampled checks [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    keccak: KeccakArgs,
    #[command(flatten)]
    digest: DigestArgs,
    /// Append the uncompute pass.
    #[arg(long)]
    include_inverse: bool,
    /// Two-qubit gates charged per Toffoli [default: 10].
    #[arg(long)]
    decomp_factor: Option<u64>,
    /// Netlist destination; stdout when absent (stats then go to stderr).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    keccak: KeccakArgs,
    #[command(flatten)]
    digest: DigestArgs,
    /// Random states per check [default: 100].
    #[arg(long)]
    trials: Option<usize>,
    /// Checks to run; all when absent.
    #[arg(long, value_delimiter = ',')]
    check: Vec<CheckKind>,
    /// Enumerate every state for the equivalence check.
    #[arg(long)]
    exhaustive: bool,
    /// Verify this netlist instead of synthesizing one.
    #[arg(long)]
    netlist: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    keccak: KeccakArgs,
    /// Count the uncompute pass as part of the oracle.
    #[arg(long)]
    include_inverse: bool,
    /// Two-qubit gates charged per Toffoli [default: 10].
    #[arg(long)]
    decomp_factor: Option<u64>,
    /// Headline forward-only counts or the full oracle [default: paper].
    #[arg(long)]
    counting_mode: Option<CountingMode>,
    /// log2 of the Grover search space [default: 57.8].
    #[arg(long)]
    log2_search_space: Option<f64>,
    /// Number of marked elements [default: 1].
    #[arg(long)]
    marked_count: Option<u64>,
    /// Optimistic scenario gate time [default: 50].
    #[arg(long)]
    gate_time_ns: Option<f64>,
    /// Conservative scenario throughput [default: 1000].
    #[arg(long)]
    gates_per_second: Option<f64>,
    /// Physical error rate per gate [default: 1e-3].
    #[arg(long)]
    error_rate: Option<f64>,
    /// Logical error rate per gate after correction [default: 1e-6].
    #[arg(long)]
    logical_error_rate: Option<f64>,
    /// Physical qubits per logical qubit [default: 1000].
    #[arg(long)]
    qec_overhead: Option<u64>,
    /// Scenarios to report; both when absent.
    #[arg(long, value_delimiter = ',')]
    scenario: Vec<ScenarioKind>,
    /// Output format [default: text].
    #[arg(long)]
    format: Option<Format>,
    /// Seed for the exact-mode target digest [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Exact-mode digest width [default: 256].
    #[arg(long)]
    digest_width: Option<usize>,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GroverArgs {
    /// Search register width.
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// Marked basis states, decimal or 0x-prefixed hex.
    #[arg(long, value_delimiter = ',')]
    marked: Vec<String>,
    /// Last iteration count of the sweep; defaults to twice the optimum minus one.
    #[arg(long)]
    max_k: Option<u64>,
    /// Output format [default: text].
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Netlist to run.
    #[arg(long)]
    netlist: PathBuf,
    /// Input state over all wires as hex; all-zero when absent.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Debug, Args)]
struct PermuteArgs {
    #[command(flatten)]
    keccak: KeccakArgs,
    /// State as hex; all-zero when absent.
    #[arg(long)]
    input: Option<String>,
    /// Apply the inverse permutation.
    #[arg(long)]
    inverse: bool,
}

type CliResult = Result<i32, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn keccak_params(a: &KeccakArgs, f: &FileConfig) -> Result<(KeccakParams, SynthesisStrategy), String> {
    let d = KeccakParams::default();
    let params = KeccakParams::new(
        pick(a.lane_width, f.lane_width, d.lane_width()),
        pick(a.rounds, f.rounds, d.rounds()),
        pick(a.round_offset, f.round_offset, d.round_offset()),
    )
    .map_err(err)?;
    Ok((params, pick(a.strategy, f.strategy, SynthesisStrategy::default())))
}

fn target_digest(a: &DigestArgs, f: &FileConfig, params: &KeccakParams) -> Result<Vec<bool>, String> {
    let width = pick(a.digest_width, f.digest_width, DEFAULT_DIGEST_WIDTH).min(params.state_bits());
    if width == 0 {
        return Err("--digest-width must be positive".into());
    }
    match &a.target {
        Some(hex) => {
            let words = hexbits::decode(hex, width).map_err(err)?;
            Ok((0..width).map(|i| words[i / 64] >> (i % 64) & 1 == 1).collect())
        }
        None => Ok(random_target(width, pick(a.seed, f.seed, 0))),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(err),
    }
}

fn cmd_synth(a: SynthArgs, f: &FileConfig, out: &mut dyn Write, errout: &mut dyn Write) -> CliResult {
    let (params, strategy) = keccak_params(&a.keccak, f)?;
    let include_inverse = a.include_inverse || f.include_inverse.unwrap_or(false);
    let cost = CostModel::new(
        pick(a.decomp_factor, f.decomp_factor, CostModel::DEFAULT_DECOMP_FACTOR),
        CountingMode::Exact,
    )
    .map_err(err)?;
    let mut spec = OracleSpec::new(params, strategy).with_inverse_pass(include_inverse);
    if a.digest.digest_width.is_some() || a.digest.target.is_some() {
        spec = spec.with_target(target_digest(&a.digest, f, &params)?);
    }
    let circuit = synth::synth_oracle(&spec).map_err(err)?;
    let stats = format!("wires={} {}\n", circuit.wire_count(), circuit.stats(&cost));
    match &a.out {
        Some(p) => {
            emit(out, Some(p), &circuit.to_text())?;
            out.write_all(stats.as_bytes()).map_err(err)?;
        }
        None => {
            out.write_all(circuit.to_text().as_bytes()).map_err(err)?;
            errout.write_all(stats.as_bytes()).map_err(err)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, f: &FileConfig, out: &mut dyn Write) -> CliResult {
    let (params, strategy) = keccak_params(&a.keccak, f)?;
    let trials = pick(a.trials, f.trials, DEFAULT_TRIALS);
    if trials == 0 {
        return Err("--trials must be positive".into());
    }
    let seed = pick(a.digest.seed, f.seed, 0);
    let checks = if a.check.is_empty() {
        vec![CheckKind::Equivalence, CheckKind::Ancilla, CheckKind::Reversibility]
    } else {
        a.check.clone()
    };

    let (forward, oracle) = match &a.netlist {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let c = Circuit::from_text(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            (c.clone(), c)
        }
        None => {
            let spec = OracleSpec::new(params, strategy)
                .with_target(target_digest(&a.digest, f, &params)?)
                .with_inverse_pass(true);
            (
                synth::synth_permutation(&params, strategy),
                synth::synth_oracle(&spec).map_err(err)?,
            )
        }
    };

    let mut reports = serde_json::Map::new();
    for check in checks {
        let (name, report) = match check {
            CheckKind::Equivalence => {
                let width = forward.registers().require(STATE).map_err(err)?.width;
                if width != params.state_bits() {
                    return Err(format!(
                        "state register has {width} wires, parameters need {}",
                        params.state_bits()
                    ));
                }
                let sampling = if a.exhaustive {
                    Sampling::Exhaustive
                } else {
                    Sampling::Random { trials, seed }
                };
                let r = sim::check_equivalence(&forward, sim::keccak_reference(params), STATE, sampling);
                ("equivalence", r.map_err(err)?)
            }
            CheckKind::Ancilla => {
                let names: Vec<&str> = oracle
                    .registers()
                    .iter()
                    .map(|r| r.name.as_str())
                    .filter(|&n| n != STATE && n != RESULT)
                    .collect();
                (
                    "ancilla_clean",
                    sim::check_ancilla_clean(&oracle, &names, trials, seed).map_err(err)?,
                )
            }
            CheckKind::Reversibility => (
                "reversibility",
                sim::check_reversibility(&oracle, trials, seed).map_err(err)?,
            ),
        };
        reports.insert(name.into(), serde_json::to_value(report).map_err(err)?);
    }
    let pass = reports.values().all(|r| r["pass"] == json!(true));
    let doc = json!({
        "lane_width": params.lane_width(),
        "rounds": params.rounds(),
        "round_offset": params.round_offset(),
        "strategy": strategy.as_str(),
        "netlist": a.netlist.is_some(),
        "checks": reports,
        "pass": pass,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(err)? + "\n";
    emit(out, a.out.as_deref(), &text)?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn estimate_config(a: &EstimateArgs, f: &FileConfig) -> Result<PipelineConfig, String> {
    let (params, strategy) = keccak_params(&a.keccak, f)?;
    let cost = CostModel::new(
        pick(a.decomp_factor, f.decomp_factor, CostModel::DEFAULT_DECOMP_FACTOR),
        pick(a.counting_mode, f.counting_mode, CountingMode::default()),
    )
    .map_err(err)?;
    let d = GroverParams::default();
    let grover = GroverParams::new(
        pick(a.log2_search_space, f.log2_search_space, d.log2_search_space()),
        pick(a.marked_count, f.marked_count, d.marked_count()),
    )
    .map_err(err)?;

    let kinds = if !a.scenario.is_empty() {
        a.scenario.clone()
    } else {
        f.scenario
            .clone()
            .unwrap_or_else(|| vec![ScenarioKind::Optimistic, ScenarioKind::Conservative])
    };
    let physical_error_rate = pick(a.error_rate, f.error_rate, DEFAULT_ERROR_RATE);
    let logical_error_rate = pick(a.logical_error_rate, f.logical_error_rate, DEFAULT_LOGICAL_ERROR_RATE);
    let qec_overhead = pick(a.qec_overhead, f.qec_overhead, DEFAULT_QEC_OVERHEAD);
    let scenarios = kinds
        .iter()
        .map(|k| {
            let (name, timing) = match k {
                ScenarioKind::Optimistic => (
                    Scenario::OPTIMISTIC,
                    Timing::GateTimeNs(pick(a.gate_time_ns, f.gate_time_ns, DEFAULT_GATE_TIME_NS)),
                ),
                ScenarioKind::Conservative => (
                    Scenario::CONSERVATIVE,
                    Timing::GatesPerSecond(pick(a.gates_per_second, f.gates_per_second, DEFAULT_GATES_PER_SECOND)),
                ),
            };
            let s = Scenario {
                name: name.into(),
                timing,
                physical_error_rate,
                logical_error_rate,
                qec_overhead,
            };
            s.validate().map_err(err).map(|_| s)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let digest_width = pick(a.digest_width, f.digest_width, DEFAULT_DIGEST_WIDTH);
    if digest_width == 0 {
        return Err("--digest-width must be positive".into());
    }
    let thresholds = f.thresholds.clone().unwrap_or_default();
    thresholds.validate().map_err(err)?;
    Ok(PipelineConfig {
        params,
        strategy,
        include_inverse: a.include_inverse || f.include_inverse.unwrap_or(false),
        cost,
        grover,
        scenarios,
        thresholds,
        digest_width,
        seed: pick(a.seed, f.seed, 0),
    })
}

fn cmd_estimate(a: EstimateArgs, f: &FileConfig, out: &mut dyn Write) -> CliResult {
    let cfg = estimate_config(&a, f)?;
    let report = run_pipeline(&cfg).map_err(err)?;
    let text = match pick(a.format, f.format, Format::Text) {
        Format::Text => render::to_text(&report),
        Format::Json => render::to_json(&report),
        Format::Csv => render::to_csv(&report),
    };
    emit(out, a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn parse_index(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| format!("invalid marked state {s:?}"))
}

fn cmd_grover_demo(a: GroverArgs, f: &FileConfig, out: &mut dyn Write) -> CliResult {
    if a.n > MAX_SIM_QUBITS {
        return Err(format!(
            "--n {} exceeds the simulator cap of {MAX_SIM_QUBITS} qubits",
            a.n
        ));
    }
    let size = 1u64 << a.n;
    let mut marked: Vec<u64> = if a.marked.is_empty() {
        vec![0]
    } else {
        a.marked.iter().map(|s| parse_index(s)).collect::<Result<_, _>>()?
    };
    marked.sort_unstable();
    marked.dedup();
    if let Some(&bad) = marked.iter().find(|&&m| m >= size) {
        return Err(format!("marked state {bad} outside 0..{size}"));
    }

    let params = GroverParams::new(a.n as f64, marked.len() as u64).map_err(err)?;
    let optimal = grover::iterations(&params);
    let max_k = a.max_k.unwrap_or((2 * optimal).saturating_sub(1));
    let mut sim = GroverSimulator::new(a.n, |x| marked.binary_search(&x).is_ok()).map_err(err)?;
    let mut rows = Vec::new();
    for k in 0..=max_k {
        if k > 0 {
            sim.step().map_err(err)?;
        }
        rows.push((k, sim.success_probability(), grover::success_probability(&params, k)));
    }
    let (peak_k, peak_p, _) = rows
        .iter()
        .copied()
        .fold((0, f64::MIN, 0.0), |best, r| if r.1 > best.1 { r } else { best });
    let max_diff = rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max);

    let text = match pick(a.format, f.format, Format::Text) {
        Format::Json => {
            let doc = json!({
                "n": a.n,
                "marked": marked,
                "optimal_k": optimal,
                "rows": rows.iter().map(|r| json!({"k": r.0, "simulated": r.1, "closed_form": r.2})).collect::<Vec<_>>(),
                "peak": {"k": peak_k, "probability": peak_p},
                "max_abs_diff": max_diff,
            });
            serde_json::to_string_pretty(&doc).map_err(err)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("k,simulated,closed_form\n");
            for r in &rows {
                s += &format!("{},{},{}\n", r.0, r.1, r.2);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "n={} N={} marked={} optimal_k={}\n{:>4}  {:>14}  {:>14}  {:>10}\n",
                a.n,
                size,
                marked.len(),
                optimal,
                "k",
                "simulated",
                "closed_form",
                "abs_diff"
            );
            for r in &rows {
                s += &format!(
                    "{:>4}  {:>14.10}  {:>14.10}  {:>10.3e}\n",
                    r.0,
                    r.1,
                    r.2,
                    (r.1 - r.2).abs()
                );
            }
            s += &format!("peak k={peak_k} p={peak_p:.10}\nmax_abs_diff={max_diff:.3e}\n");
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(err)?;
    Ok(EXIT_OK)
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> CliResult {
    let text = std::fs::read_to_string(&a.netlist).map_err(|e| format!("{}: {e}", a.netlist.display()))?;
    let c = Circuit::from_text(&text).map_err(|e| format!("{}: {e}", a.netlist.display()))?;
    let input = match &a.input {
        Some(hex) => BasisState::from_hex(c.wire_count(), hex).map_err(err)?,
        None => BasisState::zero(c.wire_count()),
    };
    let output = sim::run(&c, &input).map_err(err)?;
    writeln!(out, "{}", output.to_hex()).map_err(err)?;
    Ok(EXIT_OK)
}

fn cmd_permute(a: PermuteArgs, f: &FileConfig, out: &mut dyn Write) -> CliResult {
    let (params, _) = keccak_params(&a.keccak, f)?;
    let state = match &a.input {
        Some(hex) => KeccakState::from_hex(params.lane_width(), hex),
        None => KeccakState::zero(params.lane_width()),
    }
    .map_err(err)?;
    let result = if a.inverse {
        keccak_ref::inverse_permute(&state, &params)
    } else {
        keccak_ref::permute(&state, &params)
    }
    .map_err(err)?;
    writeln!(out, "{}", result.to_hex()).map_err(err)?;
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the chosen subcommand.
pub fn run<I, T>(args: I, config: Option<&Path>, out: &mut dyn Write, errout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { errout } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let file = match config {
        Some(p) => match FileConfig::load(p) {
            Ok(f) => f,
            Err(e) => {
                let _ = writeln!(errout, "error: config {e}");
                return EXIT_USAGE;
            }
        },
        None => FileConfig::default(),
    };
    let result = match cli.command {
        Command::Synth(a) => cmd_synth(a, &file, out, errout),
        Command::Verify(a) => cmd_verify(a, &file, out),
        Command::Estimate(a) => cmd_estimate(a, &file, out),
        Command::GroverDemo(a) => cmd_grover_demo(a, &file, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Permute(a) => cmd_permute(a, &file, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(errout, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Process entry point: real argv, stdio, and the config named by
/// [`CONFIG_ENV`].
pub fn main_entry() -> i32 {
    let config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(
        std::env::args_os(),
        config.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}
