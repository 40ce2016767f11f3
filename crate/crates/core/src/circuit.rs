use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrError {
    #[error("wire {wire} out of range for width {width}")]
    OutOfRange { wire: usize, width: usize },
    #[error("wire {0} used twice in one gate")]
    DuplicateWire(usize),
    #[error("wire map sends two wires to {0}")]
    NonInjective(usize),
    #[error("wire map has {got} entries, circuit has width {want}")]
    MapLength { got: usize, want: usize },
    #[error("register {0} already defined")]
    DuplicateRegister(String),
    #[error("wire {0} belongs to more than one register")]
    SharedWire(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
}

impl GateKind {
    pub const ALL: [GateKind; 3] = [GateKind::Not, GateKind::Cnot, GateKind::Toffoli];

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::Not => "x",
            GateKind::Cnot => "cx",
            GateKind::Toffoli => "ccx",
        }
    }
}

/// One reversible primitive. Every variant is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not { target: usize },
    Cnot { control: usize, target: usize },
    Toffoli { controls: [usize; 2], target: usize },
}

impl Gate {
    pub fn not(target: usize) -> Self {
        Gate::Not { target }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::Toffoli {
            controls: [c1, c2],
            target,
        }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not { .. } => GateKind::Not,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Toffoli { .. } => GateKind::Toffoli,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::Not { target } | Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } => {
                target
            }
        }
    }

    pub fn controls(&self) -> &[usize] {
        match self {
            Gate::Not { .. } => &[],
            Gate::Cnot { control, .. } => std::slice::from_ref(control),
            Gate::Toffoli { controls, .. } => controls,
        }
    }

    /// Controls followed by the target.
    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls()
            .iter()
            .copied()
            .chain(std::iter::once(self.target()))
    }

    pub fn check(&self, width: usize) -> Result<(), IrError> {
        let mut seen = [usize::MAX; 3];
        for (i, w) in self.wires().enumerate() {
            if w >= width {
                return Err(IrError::OutOfRange { wire: w, width });
            }
            if seen[..i].contains(&w) {
                return Err(IrError::DuplicateWire(w));
            }
            seen[i] = w;
        }
        Ok(())
    }

    pub fn remap(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::Not { target } => Gate::not(map[target]),
            Gate::Cnot { control, target } => Gate::cnot(map[control], map[target]),
            Gate::Toffoli {
                controls: [a, b],
                target,
            } => Gate::toffoli(map[a], map[b], map[target]),
        }
    }

    /// Applies the gate to bit-sliced lanes, one `u64` per wire.
    #[inline]
    pub fn apply_lanes(&self, lanes: &mut [u64]) {
        match *self {
            Gate::Not { target } => lanes[target] = !lanes[target],
            Gate::Cnot { control, target } => lanes[target] ^= lanes[control],
            Gate::Toffoli {
                controls: [a, b],
                target,
            } => lanes[target] ^= lanes[a] & lanes[b],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().mnemonic())?;
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WireRole {
    Operand {
        register: String,
        bit: usize,
        preserved: bool,
    },
    Ancilla,
    /// Enters 0, is set to the value by NOT gates at the start and cleared at the end.
    Constant(bool),
    Result {
        register: String,
        bit: usize,
    },
    CarryOut {
        register: String,
        bit: usize,
    },
}

impl WireRole {
    pub fn keyword(&self) -> &'static str {
        match self {
            WireRole::Operand { .. } => "operand",
            WireRole::Ancilla => "ancilla",
            WireRole::Constant(false) => "const0",
            WireRole::Constant(true) => "const1",
            WireRole::Result { .. } => "result",
            WireRole::CarryOut { .. } => "carryout",
        }
    }

    /// Wires that must read 0 before and after the circuit runs.
    pub fn is_clean(&self) -> bool {
        matches!(self, WireRole::Ancilla | WireRole::Constant(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub not: usize,
    pub cnot: usize,
    pub toffoli: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.not + self.cnot + self.toffoli
    }

    pub fn get(&self, kind: GateKind) -> usize {
        match kind {
            GateKind::Not => self.not,
            GateKind::Cnot => self.cnot,
            GateKind::Toffoli => self.toffoli,
        }
    }
}

/// Per-kind delays for [`Circuit::weighted_depth`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthWeights {
    pub not: Rational64,
    pub cnot: Rational64,
    pub toffoli: Rational64,
}

impl DepthWeights {
    pub fn unit() -> Self {
        let one = Rational64::from_integer(1);
        DepthWeights {
            not: one,
            cnot: one,
            toffoli: one,
        }
    }

    /// Two Toffolis make one QFA delay; CNOT and NOT are free.
    pub fn qfa() -> Self {
        let zero = Rational64::from_integer(0);
        DepthWeights {
            not: zero,
            cnot: zero,
            toffoli: Rational64::new(1, 2),
        }
    }

    pub fn of(&self, kind: GateKind) -> Rational64 {
        match kind {
            GateKind::Not => self.not,
            GateKind::Cnot => self.cnot,
            GateKind::Toffoli => self.toffoli,
        }
    }
}

/// A gate list over a fixed number of wires, with named registers and a role per wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    registers: IndexMap<String, Vec<usize>>,
    roles: Vec<WireRole>,
    boundary: BTreeSet<usize>,
    notes: Vec<String>,
}

impl Circuit {
    /// All wires start as ancillas with no registers.
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
            registers: IndexMap::new(),
            roles: vec![WireRole::Ancilla; width],
            boundary: BTreeSet::new(),
            notes: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn registers(&self) -> &IndexMap<String, Vec<usize>> {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&[usize]> {
        self.registers.get(name).map(Vec::as_slice)
    }

    pub fn roles(&self) -> &[WireRole] {
        &self.roles
    }

    pub fn role(&self, wire: usize) -> &WireRole {
        &self.roles[wire]
    }

    pub fn boundary(&self) -> &BTreeSet<usize> {
        &self.boundary
    }

    pub fn is_boundary(&self, wire: usize) -> bool {
        self.boundary.contains(&wire)
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn append_gate(&mut self, gate: Gate) -> Result<(), IrError> {
        gate.check(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn with_gate(mut self, gate: Gate) -> Result<Self, IrError> {
        self.append_gate(gate)?;
        Ok(self)
    }

    pub fn add_register(&mut self, name: &str, wires: Vec<usize>) -> Result<(), IrError> {
        if self.registers.contains_key(name) {
            return Err(IrError::DuplicateRegister(name.to_string()));
        }
        for &w in &wires {
            if w >= self.width {
                return Err(IrError::OutOfRange {
                    wire: w,
                    width: self.width,
                });
            }
            if self.registers.values().any(|r| r.contains(&w)) {
                return Err(IrError::SharedWire(w));
            }
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(IrError::SharedWire(w[0]));
        }
        self.registers.insert(name.to_string(), wires);
        Ok(())
    }

    pub fn set_role(&mut self, wire: usize, role: WireRole) -> Result<(), IrError> {
        if wire >= self.width {
            return Err(IrError::OutOfRange {
                wire,
                width: self.width,
            });
        }
        self.roles[wire] = role;
        Ok(())
    }

    pub fn set_boundary(&mut self, wire: usize, flag: bool) -> Result<(), IrError> {
        if wire >= self.width {
            return Err(IrError::OutOfRange {
                wire,
                width: self.width,
            });
        }
        if flag {
            self.boundary.insert(wire);
        } else {
            self.boundary.remove(&wire);
        }
        Ok(())
    }

    pub fn add_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Same wires, registers and roles; gate order reversed.
    pub fn inverse(&self) -> Circuit {
        let mut inv = self.clone();
        inv.gates.reverse();
        inv
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g.kind() {
                GateKind::Not => c.not += 1,
                GateKind::Cnot => c.cnot += 1,
                GateKind::Toffoli => c.toffoli += 1,
            }
        }
        c
    }

    /// Longest weighted path where gates sharing a wire are ordered.
    pub fn weighted_depth(&self, weights: &DepthWeights) -> Rational64 {
        depth_of(self.width, &self.gates, weights)
    }

    pub fn unit_depth(&self) -> u64 {
        self.weighted_depth(&DepthWeights::unit()).to_integer() as u64
    }

    pub fn qfa_depth(&self) -> Rational64 {
        self.weighted_depth(&DepthWeights::qfa())
    }

    pub(crate) fn from_parts(
        width: usize,
        gates: Vec<Gate>,
        registers: IndexMap<String, Vec<usize>>,
        roles: Vec<WireRole>,
        boundary: BTreeSet<usize>,
        notes: Vec<String>,
    ) -> Circuit {
        debug_assert_eq!(roles.len(), width);
        Circuit {
            width,
            gates,
            registers,
            roles,
            boundary,
            notes,
        }
    }
}

pub(crate) fn depth_of(width: usize, gates: &[Gate], weights: &DepthWeights) -> Rational64 {
    let zero = Rational64::from_integer(0);
    let mut finish = vec![zero; width];
    let mut best = zero;
    for g in gates {
        let start = g.wires().map(|w| finish[w]).max().unwrap_or(zero);
        let end = start + weights.of(g.kind());
        for w in g.wires() {
            finish[w] = end;
        }
        best = best.max(end);
    }
    best
}

/// Places circuits on an outer wire space. Only gates are carried over.
pub fn compose(
    outer_width: usize,
    placements: &[(&Circuit, &[usize])],
) -> Result<Circuit, IrError> {
    let mut out = Circuit::new(outer_width);
    for (circuit, map) in placements {
        if map.len() != circuit.width() {
            return Err(IrError::MapLength {
                got: map.len(),
                want: circuit.width(),
            });
        }
        let mut seen = vec![false; outer_width];
        for &w in map.iter() {
            if w >= outer_width {
                return Err(IrError::OutOfRange {
                    wire: w,
                    width: outer_width,
                });
            }
            if seen[w] {
                return Err(IrError::NonInjective(w));
            }
            seen[w] = true;
        }
        out.gates
            .extend(circuit.gates().iter().map(|g| g.remap(map)));
    }
    Ok(out)
}
