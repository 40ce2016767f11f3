//! OpenQASM 2.0 export, plus a reader for the subset we emit.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate};
use crate::netlist::ParseError;

pub const HEADER_LINES: usize = 3;

pub fn export(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.width());
    for g in c.gates() {
        let _ = match *g {
            Gate::Not { target } => writeln!(out, "x q[{target}];"),
            Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
            Gate::Toffoli {
                controls: [a, b],
                target,
            } => writeln!(out, "ccx q[{a}],q[{b}],q[{target}];"),
        };
    }
    out
}

/// Reads back x/cx/ccx statements over a single `q` register. Registers and roles are lost.
pub fn import(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let bad = |m: &str| ParseError {
            line: ln,
            message: m.to_string(),
        };
        let stmt = line.strip_suffix(';').ok_or_else(|| bad("missing `;`"))?;
        if let Some(n) = stmt
            .strip_prefix("qreg q[")
            .and_then(|s| s.strip_suffix(']'))
        {
            let n = n.parse().map_err(|_| bad("bad qreg size"))?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| bad("gate before qreg"))?;
        let (op, args) = stmt
            .split_once(' ')
            .ok_or_else(|| bad("expected operands"))?;
        let wires = args
            .split(',')
            .map(|a| {
                a.trim()
                    .strip_prefix("q[")
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| bad("expected q[i]"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = match (op, wires.as_slice()) {
            ("x", [t]) => Gate::not(*t),
            ("cx", [a, t]) => Gate::cnot(*a, *t),
            ("ccx", [a, b, t]) => Gate::toffoli(*a, *b, *t),
            _ => return Err(bad("unsupported statement")),
        };
        c.append_gate(g).map_err(|e| bad(&e.to_string()))?;
    }
    circuit.ok_or(ParseError {
        line: text.lines().count().max(1),
        message: "no qreg declaration".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_is_header_only() {
        let text = export(&Circuit::new(2));
        assert_eq!(text.lines().count(), HEADER_LINES);
    }

    #[test]
    fn gates_survive_import() {
        let mut c = Circuit::new(3);
        c.append_gate(Gate::toffoli(0, 1, 2)).unwrap();
        c.append_gate(Gate::cnot(2, 0)).unwrap();
        c.append_gate(Gate::not(1)).unwrap();
        let back = import(&export(&c)).unwrap();
        assert_eq!(back.gates(), c.gates());
        assert_eq!(back.width(), 3);
        assert!(import("qreg q[2];\nh q[0];\n").is_err());
    }
}
