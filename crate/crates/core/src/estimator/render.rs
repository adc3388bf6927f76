//! Text, JSON and CSV renderings of a [`FeasibilityReport`].

use std::fmt::Write as _;

use super::report::{Span, Table2Cell, TABLE2_DIMENSIONS};
use super::FeasibilityReport;

/// `1234567` → `"1,234,567"`.
pub fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// Integers below 10^9 with separators, everything else in scientific form.
pub fn amount(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e9 {
        let s = thousands(x.abs() as u64);
        if x < 0.0 {
            format!("-{s}")
        } else {
            s
        }
    } else if x != 0.0 && x.abs() < 1.0 {
        format!("{x:e}")
    } else {
        format!("{x:.3e}")
    }
}

fn span(s: Option<Span>) -> String {
    match s {
        None => "N/A".into(),
        Some(s) if s.min == s.max => amount(s.min),
        Some(s) => format!("{}-{}", amount(s.min), amount(s.max)),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

pub fn to_json(report: &FeasibilityReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn to_text(r: &FeasibilityReport) -> String {
    let mut o = String::new();
    let i = &r.inputs;
    let c = &r.counts;
    let g = &r.grover;

    writeln!(
        o,
        "Keccak-f[{}] rounds={} offset={} strategy={} counting={} decomp_factor={}",
        25 * i["lane_width"].as_u64().unwrap_or(0),
        i["rounds"],
        i["round_offset"],
        i["strategy"].as_str().unwrap_or("?"),
        i["counting_mode"].as_str().unwrap_or("?"),
        i["decomp_factor"],
    )
    .unwrap();
    writeln!(o).unwrap();

    let kv = |o: &mut String, k: &str, v: String| writeln!(o, "  {k:<28}{v}").unwrap();
    writeln!(o, "Oracle").unwrap();
    kv(&mut o, "logical qubits", thousands(c.logical_qubits));
    kv(&mut o, "forward toffoli", thousands(c.forward.toffoli_count));
    kv(&mut o, "forward cnot", thousands(c.forward.cnot_count));
    kv(&mut o, "forward x", thousands(c.forward.x_count));
    kv(&mut o, "forward layered depth", thousands(c.forward.depth));
    kv(&mut o, "oracle toffoli", thousands(c.oracle.toffoli_count));
    kv(&mut o, "oracle cnot", thousands(c.oracle.cnot_count));
    kv(&mut o, "2Q gates per oracle", thousands(c.gates_per_oracle));
    kv(&mut o, "2Q gates per diffusion", thousands(c.diffusion_gates));
    writeln!(o).unwrap();

    writeln!(o, "Grover").unwrap();
    kv(&mut o, "log2 N", format!("{}", g.params.log2_search_space()));
    kv(&mut o, "N", amount(g.search_space));
    kv(&mut o, "sqrt N", amount(g.estimate.sqrt_n));
    kv(&mut o, "iterations", amount(g.estimate.iterations as f64));
    kv(
        &mut o,
        "success probability",
        format!("{:.6}", g.estimate.success_probability),
    );
    kv(
        &mut o,
        "speedup",
        format!("2^{} -> 2^{}", g.speedup.classical_log2, g.speedup.quantum_log2),
    );
    kv(&mut o, "total 2Q gates", amount(c.total_2q_gates));
    writeln!(o).unwrap();

    writeln!(o, "Scenarios").unwrap();
    for s in &r.scenarios {
        writeln!(o, "  {} ({})", s.scenario.name, s.scenario.timing.describe()).unwrap();
        kv(&mut o, "  runtime seconds", amount(s.runtime.seconds));
        kv(&mut o, "  runtime days", format!("{:.2}", s.runtime.days));
        kv(&mut o, "  runtime years", format!("{:.4}", s.runtime.years));
        kv(
            &mut o,
            &format!("  P(error) at {:e}", s.scenario.physical_error_rate),
            format!("{:.12}", s.physical_error_probability),
        );
        kv(
            &mut o,
            &format!("  P(error) at {:e}", s.scenario.logical_error_rate),
            format!("{:.12}", s.logical_error_probability),
        );
        kv(&mut o, "  QEC overhead", thousands(s.scenario.qec_overhead));
        kv(&mut o, "  physical qubits", thousands(s.physical_qubits));
    }
    writeln!(o).unwrap();

    writeln!(o, "Table 1: resource requirements").unwrap();
    writeln!(
        o,
        "  {:<28}{:<16}{:<16}{:<20}Feasible?",
        "Resource", "Requirement", "Current NISQ", "Early FT"
    )
    .unwrap();
    for row in &r.table1 {
        writeln!(
            o,
            "  {:<28}{:<16}{:<16}{:<20}{}",
            row.resource,
            amount(row.requirement),
            span(row.nisq),
            span(row.early_ft),
            row.verdict.as_str()
        )
        .unwrap();
    }
    writeln!(
        o,
        "  (Total 2Q Gate Depth is count-based; layered depth is listed above.)"
    )
    .unwrap();
    writeln!(o).unwrap();

    writeln!(o, "Table 2: infeasibility matrix").unwrap();
    let names: Vec<&str> = r.scenarios.iter().map(|s| s.scenario.name.as_str()).collect();
    write!(o, "  {:<24}{:<12}", "Dimension", "Metric").unwrap();
    for n in &names {
        write!(o, "{n:<18}").unwrap();
    }
    writeln!(o).unwrap();
    for dim in TABLE2_DIMENSIONS {
        let cells: Vec<&Table2Cell> = r.table2.iter().filter(|c| c.dimension == dim).collect();
        let Some(first) = cells.first() else { continue };
        let utility = first.metric == "Practical?";
        write!(o, "  {:<24}{:<12}", dim, first.metric).unwrap();
        for cell in &cells {
            write!(o, "{:<18}", cell.display).unwrap();
        }
        writeln!(o).unwrap();
        if !utility {
            write!(o, "  {:<24}{:<12}", "", "Feasible?").unwrap();
            for cell in &cells {
                write!(o, "{:<18}", yes_no(cell.feasible)).unwrap();
            }
            writeln!(o).unwrap();
        }
    }
    // trailing padding is noise in diffs
    o.lines().map(|l| l.trim_end()).collect::<Vec<_>>().join("\n") + "\n"
}

/// One `table,row,column,value` record per reported figure.
pub fn to_csv(r: &FeasibilityReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut put = |table: &str, row: &str, column: &str, value: String| {
        w.write_record([table, row, column, value.as_str()])
            .expect("in-memory write");
    };
    put("table", "row", "column", "value".into());

    let c = &r.counts;
    for (name, s) in [
        ("forward", Some(c.forward)),
        ("oracle", Some(c.oracle)),
        ("diffusion", c.diffusion),
    ] {
        let Some(s) = s else { continue };
        put("counts", name, "x", s.x_count.to_string());
        put("counts", name, "cnot", s.cnot_count.to_string());
        put("counts", name, "toffoli", s.toffoli_count.to_string());
        put("counts", name, "depth", s.depth.to_string());
    }
    put("counts", "oracle", "logical_qubits", c.logical_qubits.to_string());
    put("counts", "oracle", "gates_per_oracle", c.gates_per_oracle.to_string());
    put("counts", "diffusion", "gates", c.diffusion_gates.to_string());
    put("counts", "grover", "total_2q_gates", c.total_2q_gates.to_string());

    let g = &r.grover;
    put(
        "grover",
        "search",
        "log2_search_space",
        g.params.log2_search_space().to_string(),
    );
    put("grover", "search", "marked_count", g.params.marked_count().to_string());
    put("grover", "search", "sqrt_n", g.estimate.sqrt_n.to_string());
    put("grover", "search", "iterations", g.estimate.iterations.to_string());
    put(
        "grover",
        "search",
        "success_probability",
        g.estimate.success_probability.to_string(),
    );

    for s in &r.scenarios {
        let n = s.scenario.name.as_str();
        put("scenario", n, "timing", s.scenario.timing.describe());
        put("scenario", n, "seconds", s.runtime.seconds.to_string());
        put("scenario", n, "days", s.runtime.days.to_string());
        put("scenario", n, "years", s.runtime.years.to_string());
        put(
            "scenario",
            n,
            "physical_error_probability",
            s.physical_error_probability.to_string(),
        );
        put(
            "scenario",
            n,
            "logical_error_probability",
            s.logical_error_probability.to_string(),
        );
        put("scenario", n, "physical_qubits", s.physical_qubits.to_string());
    }

    for row in &r.table1 {
        put("table1", row.resource, "requirement", row.requirement.to_string());
        put("table1", row.resource, "current_nisq", span(row.nisq));
        put("table1", row.resource, "early_ft", span(row.early_ft));
        put("table1", row.resource, "verdict", row.verdict.as_str().into());
    }
    for cell in &r.table2 {
        let col = format!("{}:{}", cell.scenario, cell.metric);
        put("table2", cell.dimension, &col, cell.display.clone());
        put(
            "table2",
            cell.dimension,
            &format!("{}:feasible", cell.scenario),
            yes_no(cell.feasible).into(),
        );
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
