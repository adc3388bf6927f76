//! Acceptance suite. Each criterion prints exactly one PASS/FAIL line with its
//! measured figures and wall time; the process exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use keccak_forge::circuit::{Circuit, GateKind};
use keccak_forge::cli;
use keccak_forge::estimator::pipeline::{random_target, DEFAULT_DIGEST_WIDTH};
use keccak_forge::estimator::{
    gates_per_oracle, run_pipeline, CostModel, CountingMode, PipelineConfig, Scenario, Thresholds, Timing,
};
use keccak_forge::grover::{self, GroverParams, GroverSimulator};
use keccak_forge::keccak_ref::{self, KeccakParams, KeccakState};
use keccak_forge::sim::{self, BasisState, Sampling};
use keccak_forge::synth::{self, OracleSpec, SynthesisStrategy, RESULT, STATE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn within(actual: f64, expected: f64, rel: f64) -> bool {
    ((actual - expected) / expected).abs() <= rel
}

fn pct(actual: f64, expected: f64) -> f64 {
    100.0 * (actual - expected) / expected
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "flat synthesis counts",
        budget: Duration::from_secs(1),
        run: flat_synthesis_counts,
    },
    Criterion {
        id: 2,
        name: "headline resource figures",
        budget: Duration::from_secs(1),
        run: headline_figures,
    },
    Criterion {
        id: 3,
        name: "verified circuit equals reference",
        budget: Duration::from_secs(120),
        run: verified_equivalence,
    },
    Criterion {
        id: 4,
        name: "Keccak-f[1600] zero-state vector",
        budget: Duration::from_secs(1),
        run: zero_state_vector,
    },
    Criterion {
        id: 5,
        name: "oracle ancilla cleanliness and reversibility",
        budget: Duration::from_secs(60),
        run: oracle_hygiene,
    },
    Criterion {
        id: 6,
        name: "Grover statevector vs closed form",
        budget: Duration::from_secs(60),
        run: grover_agreement,
    },
    Criterion {
        id: 7,
        name: "comparator truth table and cost",
        budget: Duration::from_secs(60),
        run: comparator,
    },
    Criterion {
        id: 8,
        name: "report tables and reproducible JSON",
        budget: Duration::from_secs(60),
        run: report_fidelity,
    },
];

fn main() {
    // keep panic messages inside the single result line
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; over time budget")),
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if result.is_err() {
            failed += 1;
        }
        println!(
            "criterion {} [{tag}] {}: {detail} ({:.2}s, budget {}s)",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn default_params() -> KeccakParams {
    KeccakParams::new(64, 3, 0).unwrap()
}

fn flat_synthesis_counts() -> Outcome {
    let c = synth::synth_permutation(&default_params(), SynthesisStrategy::Flat);
    let s = c.stats(&CostModel::default());
    ensure!(s.toffoli_count == 9600, "toffoli={} want 9600", s.toffoli_count);
    ensure!(c.wire_count() == 3200, "wires={} want 3200", c.wire_count());
    Ok(format!("toffoli={} wires={}", s.toffoli_count, c.wire_count()))
}

fn default_scenarios() -> Vec<Scenario> {
    let base = |name: &str, timing| Scenario {
        name: name.into(),
        timing,
        physical_error_rate: 1e-3,
        logical_error_rate: 1e-6,
        qec_overhead: 1000,
    };
    vec![
        base(Scenario::OPTIMISTIC, Timing::GateTimeNs(50.0)),
        base(Scenario::CONSERVATIVE, Timing::GatesPerSecond(1000.0)),
    ]
}

fn default_config() -> PipelineConfig {
    PipelineConfig {
        params: default_params(),
        strategy: SynthesisStrategy::Flat,
        include_inverse: false,
        cost: CostModel::new(10, CountingMode::Headline).unwrap(),
        grover: GroverParams::new(57.8, 1).unwrap(),
        scenarios: default_scenarios(),
        thresholds: Thresholds::default(),
        digest_width: DEFAULT_DIGEST_WIDTH,
        seed: 0,
    }
}

fn headline_figures() -> Outcome {
    let r = run_pipeline(&default_config()).map_err(|e| e.to_string())?;
    let gpo = r.counts.gates_per_oracle;
    ensure!(gpo == 96_000, "gates/oracle={gpo} want 96000");

    let it = r.grover.estimate.iterations as f64;
    ensure!(within(it, 3.89e8, 0.02), "iterations={it} ({:+.2}%)", pct(it, 3.89e8));
    let total = r.counts.total_2q_gates;
    ensure!(
        within(total, 7.47e13, 0.02),
        "total={total:e} ({:+.2}%)",
        pct(total, 7.47e13)
    );

    let [opt, cons] = [&r.scenarios[0], &r.scenarios[1]];
    ensure!(opt.scenario.name == Scenario::OPTIMISTIC, "scenario order");
    let (oy, od, cy) = (opt.runtime.years, opt.runtime.days, cons.runtime.years);
    ensure!(
        within(oy, 0.118, 0.02),
        "optimistic years={oy} ({:+.2}%)",
        pct(oy, 0.118)
    );
    ensure!(within(od, 43.0, 0.02), "optimistic days={od} ({:+.2}%)", pct(od, 43.0));
    ensure!(
        within(cy, 2367.0, 0.02),
        "conservative years={cy} ({:+.2}%)",
        pct(cy, 2367.0)
    );

    for s in &r.scenarios {
        ensure!(
            s.physical_qubits == 3_200_000,
            "{} physical qubits={}",
            s.scenario.name,
            s.physical_qubits
        );
        ensure!(
            s.physical_error_probability >= 1.0 - 1e-9 && s.logical_error_probability >= 1.0 - 1e-9,
            "{} P(error) nisq={} ft={}",
            s.scenario.name,
            s.physical_error_probability,
            s.logical_error_probability
        );
    }
    Ok(format!(
        "gpo={gpo} iterations={it} ({:+.2}%) total={total:.4e} ({:+.2}%) optimistic={oy:.4}y/{od:.2}d ({:+.2}%) \
         conservative={cy:.1}y ({:+.2}%) physical_qubits=3200000 P(error)>=1-1e-9",
        pct(it, 3.89e8),
        pct(total, 7.47e13),
        pct(oy, 0.118),
        pct(cy, 2367.0)
    ))
}

fn verified_equivalence() -> Outcome {
    let mut parts = Vec::new();
    for rounds in 1..=3 {
        let p = KeccakParams::new(1, rounds, 0).unwrap();
        let c = synth::synth_permutation(&p, SynthesisStrategy::Verified);
        let r = sim::check_equivalence(&c, sim::keccak_reference(p), STATE, Sampling::Exhaustive)
            .map_err(|e| e.to_string())?;
        ensure!(r.trials == 1 << 25, "w=1 r={rounds} covered {} inputs", r.trials);
        ensure!(r.pass, "w=1 r={rounds} counterexample {:?}", r.counterexample);
        parts.push(format!("w=1 r={rounds} 2^25 exhaustive"));
    }
    for w in [8, 64] {
        let p = KeccakParams::new(w, 3, 0).unwrap();
        let c = synth::synth_permutation(&p, SynthesisStrategy::Verified);
        let sampling = Sampling::Random {
            trials: 1000,
            seed: 0xACCE97 + w as u64,
        };
        let r = sim::check_equivalence(&c, sim::keccak_reference(p), STATE, sampling).map_err(|e| e.to_string())?;
        ensure!(r.pass, "w={w} r=3 counterexample {:?}", r.counterexample);
        parts.push(format!("w={w} r=3 {} random", r.trials));
    }
    Ok(parts.join(", "))
}

const ZERO_STATE_F1600: [u64; 25] = [
    0xF1258F7940E1DDE7,
    0x84D5CCF933C0478A,
    0xD598261EA65AA9EE,
    0xBD1547306F80494D,
    0x8B284E056253D057,
    0xFF97A42D7F8E6FD4,
    0x90FEE5A0A44647C4,
    0x8C5BDA0CD6192E76,
    0xAD30A6F71B19059C,
    0x30935AB7D08FFC64,
    0xEB5AA93F2317D635,
    0xA9A6E6260D712103,
    0x81A57C16DBCF555F,
    0x43B831CD0347C826,
    0x01F22F1A11A5569F,
    0x05E5635A21D9AE61,
    0x64BEFEF28CC970F2,
    0x613670957BC46611,
    0xB87C5A554FD00ECB,
    0x8C3EE88A1CCF32C8,
    0x940C7922AE3A2614,
    0x1841F924A2C509E4,
    0x16F53526E70465C2,
    0x75F644E97F30A13B,
    0xEAF1FF7B5CECA249,
];

fn zero_state_vector() -> Outcome {
    let p = KeccakParams::new(64, 24, 0).unwrap();
    let out = keccak_ref::permute(&KeccakState::zero(64).unwrap(), &p).map_err(|e| e.to_string())?;
    if let Some(i) = (0..25).find(|&i| out.lanes()[i] != ZERO_STATE_F1600[i]) {
        return Err(format!(
            "lane {i}: {:016X} want {:016X}",
            out.lanes()[i],
            ZERO_STATE_F1600[i]
        ));
    }
    Ok("all 25 lanes match".into())
}

fn without_gate(c: &Circuit, index: usize) -> Circuit {
    let mut m = Circuit::new(c.registers().clone(), c.label());
    for (i, &g) in c.gates().iter().enumerate() {
        if i != index {
            m.push(g).unwrap();
        }
    }
    m
}

fn scratch_registers(c: &Circuit) -> Vec<&str> {
    c.registers()
        .iter()
        .map(|r| r.name.as_str())
        .filter(|&n| n != STATE && n != RESULT && !n.is_empty())
        .collect()
}

fn clean(c: &Circuit, trials: usize, seed: u64) -> Result<bool, String> {
    let regs = scratch_registers(c);
    sim::check_ancilla_clean(c, &regs, trials, seed)
        .map(|r| r.pass)
        .map_err(|e| e.to_string())
}

fn position(c: &Circuit, range: std::ops::Range<usize>, nth_ccx: usize) -> Option<usize> {
    range.filter(|&i| c.gates()[i].kind() == GateKind::Ccx).nth(nth_ccx)
}

fn last_ccx(c: &Circuit, range: std::ops::Range<usize>) -> Option<usize> {
    range.rev().find(|&i| c.gates()[i].kind() == GateKind::Ccx)
}

fn oracle_hygiene() -> Outcome {
    const TRIALS: usize = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut summary = Vec::new();
    for strategy in [SynthesisStrategy::Flat, SynthesisStrategy::Verified] {
        for (w, m) in [(8u32, 64usize), (64, 256)] {
            let p = KeccakParams::new(w, 3, 0).unwrap();
            let tag = format!("{} w={w}", strategy.as_str());
            let forward = synth::synth_permutation(&p, strategy);

            // a target equal to the forward image of a known input must fire
            let mut input = BasisState::zero(forward.wire_count());
            input.write(0, &BasisState::random(p.state_bits(), &mut rng));
            let image = sim::run(&forward, &input).unwrap();
            let target: Vec<bool> = (0..m).map(|i| image.get(i)).collect();
            let spec = OracleSpec::new(p, strategy)
                .with_target(target.clone())
                .with_inverse_pass(true);
            let oracle = synth::synth_oracle(&spec).map_err(|e| e.to_string())?;

            ensure!(clean(&oracle, TRIALS, 17)?, "{tag}: scratch registers left dirty");
            let rev = sim::check_reversibility(&oracle, TRIALS, 23).map_err(|e| e.to_string())?;
            ensure!(rev.pass, "{tag}: not reversible");

            let mut full = BasisState::zero(oracle.wire_count());
            full.write(0, &input.slice(0..p.state_bits()));
            let out = sim::run(&oracle, &full).unwrap();
            let result = oracle.registers().require(RESULT).unwrap().offset;
            let mut expect = full.clone();
            expect.set(result, true);
            ensure!(out == expect, "{tag}: matching digest did not flip result alone");

            // mutations: drop one uncompute Toffoli and expect the check to notice
            let f = forward.len();
            let cmp_len = synth::synth_comparator(m, &target).unwrap().len();
            let mut mutants = vec![("comparator ladder", last_ccx(&oracle, f..f + cmp_len))];
            match strategy {
                // second CCX of the first chi gadget
                SynthesisStrategy::Flat => mutants.push(("chi uncompute", position(&oracle, 0..f, 1))),
                SynthesisStrategy::Verified => {
                    mutants.push(("inverse pass", position(&oracle, f + cmp_len..oracle.len(), 0)))
                }
            }
            for (what, at) in mutants {
                let at = at.ok_or_else(|| format!("{tag}: no {what} Toffoli found"))?;
                let mutant = without_gate(&oracle, at);
                ensure!(
                    !clean(&mutant, TRIALS, 17)?,
                    "{tag}: missing {what} Toffoli went undetected"
                );
            }
            summary.push(tag);
        }
    }
    Ok(format!(
        "{} clean and reversible on {TRIALS} states, all mutants caught",
        summary.join(", ")
    ))
}

fn grover_agreement() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=10u32 {
        let size = 1u64 << n;
        for marked in [1u64, 2, 4] {
            if marked >= size {
                continue;
            }
            let stride = size / marked;
            let is_marked = |x: u64| x % stride == 3 % stride && x / stride < marked;
            let params = GroverParams::new(n as f64, marked).map_err(|e| e.to_string())?;
            let opt = grover::iterations(&params).max(1);
            let mut sim = GroverSimulator::new(n, is_marked).map_err(|e| e.to_string())?;
            for k in 0..=2 * opt {
                if k > 0 {
                    sim.step().map_err(|e| e.to_string())?;
                }
                let diff = (sim.success_probability() - grover::success_probability(&params, k)).abs();
                worst = worst.max(diff);
                cases += 1;
            }
        }
    }
    ensure!(worst <= 1e-8, "max |sim - closed form| = {worst:e}");

    let p4 = grover::grover_simulate(2, |x| x == 1, 1).map_err(|e| e.to_string())?;
    ensure!((p4 - 1.0).abs() <= 1e-12, "N=4 k=1 gives {p4}");
    let p16 = grover::grover_simulate(4, |x| x == 11, 3).map_err(|e| e.to_string())?;
    ensure!((p16 - 0.9613).abs() <= 1e-4, "N=16 k=3 gives {p16}");
    Ok(format!(
        "{cases} (n, M, k) cases, max diff {worst:.1e}; N=4 k=1 p={p4:.12}; N=16 k=3 p={p16:.6}"
    ))
}

fn comparator() -> Outcome {
    let mut rows = 0u64;
    for m in 1..=10usize {
        let wires = 2 * m;
        let result_bit = 2 * m - 1;
        for t in 0..1u64 << m {
            let target: Vec<bool> = (0..m).map(|j| t >> j & 1 == 1).collect();
            let c = synth::synth_comparator(m, &target).map_err(|e| e.to_string())?;
            ensure!(c.wire_count() == wires, "m={m}: {} wires", c.wire_count());
            for x in 0..1u64 << m {
                for r in 0..2u64 {
                    let input = BasisState::from_u64(wires, x | r << result_bit);
                    let out = sim::run(&c, &input).unwrap();
                    let flipped = r ^ u64::from(x == t);
                    let expect = BasisState::from_u64(wires, x | flipped << result_bit);
                    ensure!(
                        out == expect,
                        "m={m} target={t:#x} input={x:#x} result={r}: got {}",
                        out.to_hex()
                    );
                    rows += 1;
                }
            }
        }
    }

    let target = random_target(256, 3);
    let c = synth::synth_comparator(256, &target).map_err(|e| e.to_string())?;
    let cost = CostModel::new(10, CountingMode::Exact).unwrap();
    let s = c.stats(&cost);
    let equiv = gates_per_oracle(&s, &cost);
    ensure!(s.toffoli_count == 510, "m=256 toffoli={}", s.toffoli_count);
    ensure!(within(equiv as f64, 5100.0, 0.01), "m=256 2Q equivalent={equiv}");
    Ok(format!(
        "{rows} truth-table rows for m<=10; m=256 toffoli={} cnot={} 2Q equivalent={equiv}",
        s.toffoli_count, s.cnot_count
    ))
}

fn cli_stdout(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("keccak-forge").chain(args.iter().copied());
    let code = cli::run(argv, None, &mut out, &mut err);
    ensure!(code == 0, "{args:?} exited {code}: {}", String::from_utf8_lossy(&err));
    String::from_utf8(out).map_err(|e| e.to_string())
}

fn report_fidelity() -> Outcome {
    let text = cli_stdout(&["estimate"])?;
    // the Toffoli row is judged feasible; every other row fails
    let table1 = [
        ("Logical Qubits", "INFEASIBLE"),
        ("Toffoli Gates (per oracle)", "FEASIBLE"),
        ("Total 2Q Gate Depth", "INFEASIBLE"),
        ("Error Rate Tolerance", "INFEASIBLE"),
        ("Physical Qubits (with QEC)", "SEVERE"),
    ];
    for (row, verdict) in table1 {
        let line = text
            .lines()
            .find(|l| l.trim_start().starts_with(row))
            .ok_or_else(|| format!("Table 1 row {row:?} missing"))?;
        ensure!(
            line.split_whitespace().last() == Some(verdict),
            "Table 1 row {row:?} reads {line:?}, want {verdict}"
        );
    }

    let header = text
        .lines()
        .find(|l| l.trim_start().starts_with("Dimension"))
        .ok_or("Table 2 header missing")?;
    ensure!(
        header.contains("optimistic") && header.contains("conservative"),
        "Table 2 header {header:?}"
    );
    let mut verdict_rows = 0;
    for dim in [
        "Physical Qubits",
        "Execution Time",
        "Error Accumulation",
        "Cryptanalytic Utility",
    ] {
        ensure!(
            text.lines().any(|l| l.trim_start().starts_with(dim)),
            "Table 2 row {dim:?} missing"
        );
    }
    for line in text.lines() {
        let words: Vec<&str> = line.split_whitespace().collect();
        if let Some(i) = words.iter().position(|&w| w == "Feasible?" || w == "Practical?") {
            if i + 1 == words.len() || words[0] == "Resource" {
                continue;
            }
            ensure!(words[i + 1..] == ["NO", "NO"], "Table 2 line {line:?}");
            verdict_rows += 1;
        }
    }
    ensure!(verdict_rows == 4, "{verdict_rows} Table 2 verdict rows, want 4");

    let a = cli_stdout(&["estimate", "--format", "json"])?;
    let b = cli_stdout(&["estimate", "--format", "json"])?;
    ensure!(a == b, "default JSON differs between runs");
    let exact = [
        "estimate",
        "--format",
        "json",
        "--counting-mode",
        "exact",
        "--seed",
        "42",
    ];
    ensure!(
        cli_stdout(&exact)? == cli_stdout(&exact)?,
        "seeded exact-mode JSON differs between runs"
    );

    let v: serde_json::Value = serde_json::from_str(&a).map_err(|e| e.to_string())?;
    let cells = v["table2"].as_array().ok_or("no table2 in JSON")?;
    ensure!(cells.len() == 8, "{} Table 2 cells in JSON", cells.len());
    ensure!(
        cells.iter().all(|c| c["feasible"] == false),
        "a Table 2 cell is feasible"
    );
    Ok(format!(
        "5 Table 1 verdicts, 4x2 Table 2 matrix all NO, JSON byte-identical ({} bytes)",
        a.len()
    ))
}
