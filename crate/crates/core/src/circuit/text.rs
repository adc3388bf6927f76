//! Line-oriented netlist format.
//!
//! ```text
//! # comment
//! LABEL free text
//! WIRES 3
//! REG state 0 2
//! REG result 2 1
//! X 0
//! CNOT 0 1
//! CCX 0 1 2
//! ```
//!
//! `WIRES` precedes every `REG`; registers precede every gate and must tile
//! `[0, WIRES)` in order. `LABEL` is optional and holds the rest of its line.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, CircuitError, Gate, RegisterMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown gate or directive {0:?}")]
    UnknownKeyword(String),
    #[error("{keyword} takes {expected} operand(s), got {actual}")]
    Arity {
        keyword: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("invalid integer {0:?}")]
    Integer(String),
    #[error("WIRES must appear exactly once, before registers and gates")]
    Wires,
    #[error("register {name:?} starts at {offset}, expected {expected}")]
    RegisterGap {
        name: String,
        offset: usize,
        expected: usize,
    },
    #[error("registers cover {covered} wires but WIRES is {total}")]
    Coverage { covered: usize, total: usize },
    #[error("REG after the first gate")]
    LateRegister,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl Circuit {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.label.is_empty() {
            writeln!(out, "LABEL {}", self.label).unwrap();
        }
        writeln!(out, "WIRES {}", self.wire_count()).unwrap();
        for r in self.registers.iter() {
            writeln!(out, "REG {} {} {}", r.name, r.offset, r.width).unwrap();
        }
        for g in &self.gates {
            writeln!(out, "{g}").unwrap();
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Circuit, ParseError> {
        let mut label = String::new();
        let mut total: Option<usize> = None;
        let mut registers = RegisterMap::new();
        let mut gates: Vec<Gate> = Vec::new();

        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let err = |kind| ParseError { line, kind };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            if keyword == "LABEL" {
                label = rest.trim().to_string();
                continue;
            }
            let ops: Vec<&str> = rest.split_whitespace().collect();
            let arity = |kw: &'static str, n: usize| {
                if ops.len() == n {
                    Ok(())
                } else {
                    Err(err(ParseErrorKind::Arity {
                        keyword: kw,
                        expected: n,
                        actual: ops.len(),
                    }))
                }
            };
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(ParseErrorKind::Integer(s.to_string())))
            };

            match keyword {
                "WIRES" => {
                    arity("WIRES", 1)?;
                    if total.is_some() || !gates.is_empty() {
                        return Err(err(ParseErrorKind::Wires));
                    }
                    total = Some(int(ops[0])?);
                }
                "REG" => {
                    arity("REG", 3)?;
                    if total.is_none() {
                        return Err(err(ParseErrorKind::Wires));
                    }
                    if !gates.is_empty() {
                        return Err(err(ParseErrorKind::LateRegister));
                    }
                    let (offset, width) = (int(ops[1])?, int(ops[2])?);
                    if offset != registers.total() {
                        return Err(err(ParseErrorKind::RegisterGap {
                            name: ops[0].to_string(),
                            offset,
                            expected: registers.total(),
                        }));
                    }
                    registers.add(ops[0], width).map_err(|e| err(e.into()))?;
                }
                "X" | "CNOT" | "CCX" => {
                    let Some(total) = total else {
                        return Err(err(ParseErrorKind::Wires));
                    };
                    if gates.is_empty() && registers.total() != total {
                        return Err(err(ParseErrorKind::Coverage {
                            covered: registers.total(),
                            total,
                        }));
                    }
                    let gate = match keyword {
                        "X" => {
                            arity("X", 1)?;
                            Gate::x(int(ops[0])?)
                        }
                        "CNOT" => {
                            arity("CNOT", 2)?;
                            Gate::cnot(int(ops[0])?, int(ops[1])?)
                        }
                        _ => {
                            arity("CCX", 3)?;
                            Gate::ccx(int(ops[0])?, int(ops[1])?, int(ops[2])?)
                        }
                    };
                    gate.validate(total).map_err(|e| err(e.into()))?;
                    gates.push(gate);
                }
                other => return Err(err(ParseErrorKind::UnknownKeyword(other.to_string()))),
            }
        }

        let last_line = src.lines().count().max(1);
        let total = total.ok_or(ParseError {
            line: last_line,
            kind: ParseErrorKind::Wires,
        })?;
        if registers.total() != total {
            return Err(ParseError {
                line: last_line,
                kind: ParseErrorKind::Coverage {
                    covered: registers.total(),
                    total,
                },
            });
        }
        Ok(Circuit {
            registers,
            gates,
            label,
        })
    }
}
