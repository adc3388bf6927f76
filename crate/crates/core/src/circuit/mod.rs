//! Reversible netlists over {X, CNOT, CCX}.
//!
//! A [`Circuit`] is a flat wire space partitioned by a [`RegisterMap`] into
//! named, contiguous registers, plus an ordered gate list. All three gate
//! kinds are involutions, so inverting a circuit only reverses gate order.

mod text;

use std::fmt;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::estimator::CostModel;

pub use text::{ParseError, ParseErrorKind};

pub type Wire = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("wire {wire} is out of range for a {total}-wire circuit")]
    WireOutOfRange { wire: Wire, total: usize },
    #[error("gate {0} uses wire {1} more than once")]
    DuplicateWire(Gate, Wire),
    #[error("register {0:?} already exists")]
    DuplicateRegister(String),
    #[error("unknown register {0:?}")]
    UnknownRegister(String),
    #[error("circuits have different wire counts ({0} vs {1})")]
    WidthMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    X,
    Cnot,
    Ccx,
}

impl GateKind {
    pub fn control_count(self) -> usize {
        match self {
            GateKind::X => 0,
            GateKind::Cnot => 1,
            GateKind::Ccx => 2,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Ccx => "CCX",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    controls: [Wire; 2],
    target: Wire,
}

impl Gate {
    pub fn x(target: Wire) -> Self {
        Self {
            kind: GateKind::X,
            controls: [0; 2],
            target,
        }
    }

    pub fn cnot(control: Wire, target: Wire) -> Self {
        Self {
            kind: GateKind::Cnot,
            controls: [control, 0],
            target,
        }
    }

    pub fn ccx(c1: Wire, c2: Wire, target: Wire) -> Self {
        Self {
            kind: GateKind::Ccx,
            controls: [c1, c2],
            target,
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> Wire {
        self.target
    }

    pub fn controls(&self) -> &[Wire] {
        &self.controls[..self.kind.control_count()]
    }

    /// Controls followed by the target.
    pub fn wires(&self) -> impl Iterator<Item = Wire> + '_ {
        self.controls().iter().copied().chain(std::iter::once(self.target))
    }

    pub fn validate(&self, total: usize) -> Result<(), CircuitError> {
        let wires: Vec<Wire> = self.wires().collect();
        for (i, &w) in wires.iter().enumerate() {
            if w >= total {
                return Err(CircuitError::WireOutOfRange { wire: w, total });
            }
            if wires[..i].contains(&w) {
                return Err(CircuitError::DuplicateWire(*self, w));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Register {
    pub name: String,
    pub offset: usize,
    pub width: usize,
}

impl Register {
    pub fn wires(&self) -> Range<Wire> {
        self.offset..self.offset + self.width
    }

    /// `i`-th wire of the register.
    pub fn wire(&self, i: usize) -> Wire {
        assert!(i < self.width, "{}[{i}] out of range (width {})", self.name, self.width);
        self.offset + i
    }
}

/// Disjoint, contiguous registers covering `[0, total)` in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RegisterMap {
    registers: Vec<Register>,
    total: usize,
}

impl RegisterMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a register after the last one and returns its wire range.
    pub fn add(&mut self, name: &str, width: usize) -> Result<Range<Wire>, CircuitError> {
        if self.get(name).is_some() {
            return Err(CircuitError::DuplicateRegister(name.to_string()));
        }
        let reg = Register {
            name: name.to_string(),
            offset: self.total,
            width,
        };
        let range = reg.wires();
        self.total += width;
        self.registers.push(reg);
        Ok(range)
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Register, CircuitError> {
        self.get(name)
            .ok_or_else(|| CircuitError::UnknownRegister(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Register> {
        self.registers.iter()
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    registers: RegisterMap,
    gates: Vec<Gate>,
    label: String,
}

impl Circuit {
    pub fn new(registers: RegisterMap, label: impl Into<String>) -> Self {
        Self {
            registers,
            gates: Vec::new(),
            label: label.into(),
        }
    }

    pub fn registers(&self) -> &RegisterMap {
        &self.registers
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn wire_count(&self) -> usize {
        self.registers.total()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.wire_count())?;
        self.gates.push(gate);
        Ok(())
    }

    /// Value-style [`push`](Self::push).
    pub fn append(mut self, gate: Gate) -> Result<Self, CircuitError> {
        self.push(gate)?;
        Ok(self)
    }

    /// Appends all gates of `other`, which must share this circuit's wire space.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.wire_count() != self.wire_count() {
            return Err(CircuitError::WidthMismatch(self.wire_count(), other.wire_count()));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            registers: self.registers.clone(),
            gates: self.gates.iter().rev().copied().collect(),
            label: self.label.clone(),
        }
    }

    /// Moves this circuit's gates into a wider register map whose first
    /// `wire_count()` wires coincide with the current ones.
    pub fn widen(self, registers: RegisterMap) -> Result<Circuit, CircuitError> {
        if registers.total() < self.wire_count() {
            return Err(CircuitError::WidthMismatch(registers.total(), self.wire_count()));
        }
        Ok(Circuit {
            registers,
            gates: self.gates,
            label: self.label,
        })
    }

    pub fn stats(&self, cost: &CostModel) -> GateStats {
        let mut s = GateStats::default();
        for g in &self.gates {
            match g.kind {
                GateKind::X => s.x_count += 1,
                GateKind::Cnot => s.cnot_count += 1,
                GateKind::Ccx => s.toffoli_count += 1,
            }
        }
        s.depth = self.depth();
        s.two_qubit_equiv = s.cnot_count + cost.decomp_factor * s.toffoli_count;
        s
    }

    /// ASAP layering: a gate lands one layer after the latest gate sharing any
    /// of its wires. Connectivity is ignored.
    pub fn depth(&self) -> u64 {
        let mut level = vec![0u64; self.wire_count()];
        let mut depth = 0;
        for g in &self.gates {
            let layer = g.wires().map(|w| level[w]).max().unwrap_or(0) + 1;
            for w in g.wires() {
                level[w] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }
}

/// Exact gate tallies for one circuit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateStats {
    pub x_count: u64,
    pub cnot_count: u64,
    pub toffoli_count: u64,
    pub depth: u64,
    /// `cnot_count + decomp_factor * toffoli_count`.
    pub two_qubit_equiv: u64,
}

impl GateStats {
    pub fn gate_count(&self) -> u64 {
        self.x_count + self.cnot_count + self.toffoli_count
    }
}

impl fmt::Display for GateStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x={} cnot={} toffoli={} depth={} two_qubit_equiv={}",
            self.x_count, self.cnot_count, self.toffoli_count, self.depth, self.two_qubit_equiv
        )
    }
}
