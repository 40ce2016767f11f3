use std::collections::BTreeSet;
use std::ops::Range;

use indexmap::IndexMap;

use crate::circuit::{Circuit, Gate, WireRole};

/// Grows a circuit wire by wire. Gates are checked in debug builds only;
/// builders in this crate are trusted, the public `Circuit` API is not.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    roles: Vec<WireRole>,
    registers: IndexMap<String, Vec<usize>>,
    boundary: BTreeSet<usize>,
    notes: Vec<String>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn width(&self) -> usize {
        self.roles.len()
    }

    pub fn alloc(&mut self, role: WireRole) -> usize {
        self.roles.push(role);
        self.roles.len() - 1
    }

    pub fn ancilla(&mut self) -> usize {
        self.alloc(WireRole::Ancilla)
    }

    pub fn ancillas(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.ancilla()).collect()
    }

    /// Allocates `n` operand wires and registers them.
    pub fn operand(&mut self, name: &str, n: usize, preserved: bool) -> Vec<usize> {
        let wires: Vec<usize> = (0..n)
            .map(|bit| {
                self.alloc(WireRole::Operand {
                    register: name.to_string(),
                    bit,
                    preserved,
                })
            })
            .collect();
        self.name_register(name, wires.clone());
        wires
    }

    /// Allocates `n` fresh result wires and registers them.
    pub fn result(&mut self, name: &str, n: usize) -> Vec<usize> {
        let wires: Vec<usize> = (0..n)
            .map(|bit| {
                self.alloc(WireRole::Result {
                    register: name.to_string(),
                    bit,
                })
            })
            .collect();
        self.name_register(name, wires.clone());
        wires
    }

    /// Registers already-allocated wires and relabels them as results.
    pub fn mark_result(&mut self, name: &str, wires: &[usize]) {
        for (bit, &w) in wires.iter().enumerate() {
            self.roles[w] = WireRole::Result {
                register: name.to_string(),
                bit,
            };
        }
        self.name_register(name, wires.to_vec());
    }

    pub fn mark_carry_out(&mut self, name: &str, wires: &[usize]) {
        for (bit, &w) in wires.iter().enumerate() {
            self.roles[w] = WireRole::CarryOut {
                register: name.to_string(),
                bit,
            };
        }
        self.name_register(name, wires.to_vec());
    }

    /// Constant wires holding `value`; NOT gates prepare the set bits.
    pub fn constant(&mut self, name: &str, value: u128, n: usize) -> Vec<usize> {
        let wires: Vec<usize> = (0..n)
            .map(|i| self.alloc(WireRole::Constant((value >> i) & 1 == 1)))
            .collect();
        self.name_register(name, wires.clone());
        self.prepare_constants(&wires);
        wires
    }

    /// NOT on every constant-1 wire of the list; used at start and again at the end.
    pub fn prepare_constants(&mut self, wires: &[usize]) {
        for &w in wires {
            if self.roles[w] == WireRole::Constant(true) {
                self.x(w);
            }
        }
    }

    pub fn name_register(&mut self, name: &str, wires: Vec<usize>) {
        let prev = self.registers.insert(name.to_string(), wires);
        debug_assert!(prev.is_none(), "register {name} defined twice");
    }

    pub fn set_boundary(&mut self, wire: usize) {
        self.boundary.insert(wire);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn gate(&mut self, g: Gate) {
        debug_assert!(g.check(self.width()).is_ok(), "bad gate {g}");
        self.gates.push(g);
    }

    pub fn x(&mut self, t: usize) {
        self.gate(Gate::not(t));
    }

    pub fn cx(&mut self, c: usize, t: usize) {
        self.gate(Gate::cnot(c, t));
    }

    pub fn ccx(&mut self, a: usize, b: usize, t: usize) {
        self.gate(Gate::toffoli(a, b, t));
    }

    /// Appends `block` with its wire i sent to `wires[i]`.
    pub fn place(&mut self, block: &Circuit, wires: &[usize]) {
        assert_eq!(block.width(), wires.len(), "placement arity");
        for g in block.gates() {
            self.gate(g.remap(wires));
        }
    }

    pub fn mark(&self) -> usize {
        self.gates.len()
    }

    pub fn since(&self, start: usize) -> Range<usize> {
        start..self.gates.len()
    }

    pub fn gates_in(&self, range: Range<usize>) -> &[Gate] {
        &self.gates[range]
    }

    /// Appends the inverse of an earlier stretch of gates.
    pub fn undo(&mut self, range: Range<usize>) {
        let rev: Vec<Gate> = self.gates[range].iter().rev().copied().collect();
        self.gates.extend(rev);
    }

    pub fn finish(self) -> Circuit {
        let width = self.roles.len();
        Circuit::from_parts(
            width,
            self.gates,
            self.registers,
            self.roles,
            self.boundary,
            self.notes,
        )
    }
}
