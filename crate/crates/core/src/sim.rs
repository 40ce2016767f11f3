//! Basis-state evaluation. Every gate is a permutation of basis states, so a bit
//! vector is the complete state.

use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};

/// Largest width accepted by [`truth_table`] and exhaustive permutation checks.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("state has {got} bits, circuit has {want} wires")]
    LengthMismatch { got: usize, want: usize },
    #[error("width {width} exceeds the exhaustive limit {limit}")]
    TooWide { width: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: Vec<bool>,
}

impl BasisState {
    pub fn zeros(len: usize) -> Self {
        BasisState {
            bits: vec![false; len],
        }
    }

    /// Bit `i` of `value` goes on wire `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        BasisState {
            bits: (0..len).map(|i| i < 64 && (value >> i) & 1 == 1).collect(),
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BasisState { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn to_u64(&self) -> u64 {
        self.bits
            .iter()
            .take(64)
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    /// Reads wires as a little-endian integer.
    pub fn read(&self, wires: &[usize]) -> u128 {
        wires
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &w)| acc | (u128::from(self.bits[w]) << i))
    }

    pub fn write(&mut self, wires: &[usize], value: u128) {
        for (i, &w) in wires.iter().enumerate() {
            self.bits[w] = i < 128 && (value >> i) & 1 == 1;
        }
    }

    fn apply(&mut self, g: &Gate) {
        match *g {
            Gate::Not { target } => self.bits[target] ^= true,
            Gate::Cnot { control, target } => self.bits[target] ^= self.bits[control],
            Gate::Toffoli {
                controls: [a, b],
                target,
            } => self.bits[target] ^= self.bits[a] & self.bits[b],
        }
    }
}

impl fmt::Display for BasisState {
    /// Highest wire first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn run(c: &Circuit, state: &BasisState) -> Result<BasisState, SimError> {
    if state.len() != c.width() {
        return Err(SimError::LengthMismatch {
            got: state.len(),
            want: c.width(),
        });
    }
    let mut s = state.clone();
    for g in c.gates() {
        s.apply(g);
    }
    Ok(s)
}

/// Runs 64 basis states at once; `lanes[w]` holds wire `w` for every lane.
pub fn run_lanes(c: &Circuit, lanes: &mut [u64]) {
    run_lanes_prefix(c, c.len(), lanes);
}

/// Runs only the first `upto` gates.
pub fn run_lanes_prefix(c: &Circuit, upto: usize, lanes: &mut [u64]) {
    assert_eq!(lanes.len(), c.width(), "lane count must equal width");
    for g in &c.gates()[..upto] {
        g.apply_lanes(lanes);
    }
}

/// Anything that maps basis indices to basis indices; lets tests feed a broken evaluator
/// to the permutation check.
pub trait BasisEvaluator: Sync {
    fn width(&self) -> usize;
    fn eval(&self, input: u64) -> u64;
}

impl BasisEvaluator for Circuit {
    fn width(&self) -> usize {
        Circuit::width(self)
    }

    fn eval(&self, input: u64) -> u64 {
        let w = Circuit::width(self);
        let mut lanes: Vec<u64> = (0..w).map(|i| (input >> i) & 1).collect();
        run_lanes(self, &mut lanes);
        lanes
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b & 1) << i))
    }
}

/// Rows in ascending input order; bit `i` of a pattern is wire `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub width: usize,
    pub rows: Vec<(u64, u64)>,
}

impl TruthTable {
    pub fn output(&self, input: u64) -> u64 {
        self.rows[input as usize].1
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.rows.len()];
        self.rows
            .iter()
            .all(|&(_, o)| !std::mem::replace(&mut seen[o as usize], true))
    }

    /// Columns highest wire first, input and output separated by three spaces.
    pub fn render(&self) -> String {
        let pat = |v: u64| -> String {
            (0..self.width)
                .rev()
                .map(|i| if (v >> i) & 1 == 1 { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        for &(i, o) in &self.rows {
            out.push_str(&pat(i));
            out.push_str("   ");
            out.push_str(&pat(o));
            out.push('\n');
        }
        out
    }
}

pub fn truth_table(c: &Circuit) -> Result<TruthTable, SimError> {
    truth_table_with_limit(c, EXHAUSTIVE_LIMIT)
}

pub fn truth_table_with_limit(c: &Circuit, limit: usize) -> Result<TruthTable, SimError> {
    let width = c.width();
    if width > limit {
        return Err(SimError::TooWide { width, limit });
    }
    let total = 1u64 << width;
    let mut rows = Vec::with_capacity(total as usize);
    let mut lanes = vec![0u64; width];
    let mut base = 0u64;
    while base < total {
        let count = (total - base).min(64);
        for (w, lane) in lanes.iter_mut().enumerate() {
            *lane = (0..count).fold(0, |acc, k| acc | ((((base + k) >> w) & 1) << k));
        }
        run_lanes(c, &mut lanes);
        for k in 0..count {
            let out = lanes
                .iter()
                .enumerate()
                .fold(0, |acc, (w, &l)| acc | (((l >> k) & 1) << w));
            rows.push((base + k, out));
        }
        base += count;
    }
    Ok(TruthTable { width, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3);
        let s = BasisState::from_u64(0b101, 3);
        assert_eq!(run(&c, &s).unwrap(), s);
    }

    #[test]
    fn length_mismatch() {
        let c = Circuit::new(3);
        assert_eq!(
            run(&c, &BasisState::zeros(2)),
            Err(SimError::LengthMismatch { got: 2, want: 3 })
        );
    }

    #[test]
    fn lanes_agree_with_scalar() {
        let mut c = Circuit::new(3);
        c.append_gate(Gate::toffoli(0, 1, 2)).unwrap();
        c.append_gate(Gate::cnot(2, 0)).unwrap();
        c.append_gate(Gate::not(1)).unwrap();
        for v in 0..8 {
            let s = run(&c, &BasisState::from_u64(v, 3)).unwrap();
            assert_eq!(s.to_u64(), c.eval(v));
        }
    }

    #[test]
    fn display_puts_high_wire_first() {
        assert_eq!(BasisState::from_u64(0b0011, 4).to_string(), "0011");
        assert_eq!(BasisState::from_u64(0b1000, 4).to_string(), "1000");
    }

    #[test]
    fn too_wide_for_table() {
        let c = Circuit::new(21);
        assert!(matches!(truth_table(&c), Err(SimError::TooWide { .. })));
    }
}
