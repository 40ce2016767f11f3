use crate::circuit::{Circuit, WireRole};
use crate::verify::Assignment;

/// Where a builder put its operands and results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    /// Operand registers and their widths, in allocation order.
    pub operands: Vec<(String, usize)>,
    pub ancillas: Vec<usize>,
    pub carry_out: Option<usize>,
    /// Registers whose weighted sum is the result: (name, weight shift).
    pub outputs: Vec<(String, u32)>,
}

impl Layout {
    pub fn new(c: &Circuit, outputs: Vec<(String, u32)>) -> Self {
        let mut operands = Vec::new();
        for (name, ws) in c.registers() {
            if ws
                .iter()
                .any(|&w| matches!(c.role(w), WireRole::Operand { .. }))
            {
                operands.push((name.clone(), ws.len()));
            }
        }
        let ancillas = c
            .roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == WireRole::Ancilla)
            .map(|(w, _)| w)
            .collect();
        let carry_out = c
            .roles()
            .iter()
            .position(|r| matches!(r, WireRole::CarryOut { .. }));
        Layout {
            operands,
            ancillas,
            carry_out,
            outputs,
        }
    }

    /// Weighted sum of the output registers.
    pub fn output_value(&self, values: &Assignment) -> u128 {
        self.outputs
            .iter()
            .map(|(r, shift)| values.get(r).copied().unwrap_or(0) << shift)
            .sum()
    }
}
