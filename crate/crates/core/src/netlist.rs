//! Line-oriented text form of a [`Circuit`].
//!
//! ```text
//! qubits 4
//! reg A 0
//! role 0 operand A 0 preserved
//! ccx 1 2 3
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use indexmap::IndexMap;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, WireRole};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn emit(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", c.width());
    for note in c.notes() {
        if note.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {note}");
        }
    }
    for (name, wires) in c.registers() {
        out.push_str("reg ");
        out.push_str(name);
        for w in wires {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    for (i, role) in c.roles().iter().enumerate() {
        let _ = write!(out, "role {i} {}", role.keyword());
        match role {
            WireRole::Operand {
                register,
                bit,
                preserved,
            } => {
                let tag = if *preserved { "preserved" } else { "clobbered" };
                let _ = write!(out, " {register} {bit} {tag}");
            }
            WireRole::Result { register, bit } | WireRole::CarryOut { register, bit } => {
                let _ = write!(out, " {register} {bit}");
            }
            WireRole::Ancilla | WireRole::Constant(_) => {}
        }
        if c.is_boundary(i) {
            out.push_str(" boundary");
        }
        out.push('\n');
    }
    for g in c.gates() {
        let _ = writeln!(out, "{g}");
    }
    out
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut width: Option<usize> = None;
    let mut notes = Vec::new();
    let mut registers: IndexMap<String, Vec<usize>> = IndexMap::new();
    let mut roles: Vec<Option<WireRole>> = Vec::new();
    let mut boundary = BTreeSet::new();
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        if let Some(rest) = raw.strip_prefix('#') {
            notes.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&head) = toks.first() else {
            continue;
        };
        let num = |s: &str| -> Result<usize, ParseError> {
            s.parse::<usize>()
                .map_err(|_| err(ln, format!("expected a non-negative integer, found `{s}`")))
        };
        if head == "qubits" {
            if width.is_some() {
                return Err(err(ln, "duplicate qubits header"));
            }
            if toks.len() != 2 {
                return Err(err(ln, "expected `qubits <N>`"));
            }
            let n = num(toks[1])?;
            width = Some(n);
            roles = vec![None; n];
            continue;
        }
        let Some(n) = width else {
            return Err(err(ln, "missing `qubits <N>` header"));
        };
        let wire = |s: &str| -> Result<usize, ParseError> {
            let w = num(s)?;
            if w >= n {
                return Err(err(ln, format!("wire {w} out of range for {n} qubits")));
            }
            Ok(w)
        };
        match head {
            "reg" => {
                let name = toks
                    .get(1)
                    .ok_or_else(|| err(ln, "expected `reg <name> <wires...>`"))?;
                let wires = toks[2..]
                    .iter()
                    .map(|t| wire(t))
                    .collect::<Result<Vec<_>, _>>()?;
                for &w in &wires {
                    if registers.values().flatten().any(|&x| x == w) {
                        return Err(err(ln, format!("wire {w} already in a register")));
                    }
                }
                if registers.insert(name.to_string(), wires).is_some() {
                    return Err(err(ln, format!("register {name} defined twice")));
                }
            }
            "role" => {
                if toks.len() < 3 {
                    return Err(err(ln, "expected `role <wire> <kind> [meta]`"));
                }
                let w = wire(toks[1])?;
                let mut meta: Vec<&str> = toks[3..].to_vec();
                if meta.last() == Some(&"boundary") {
                    meta.pop();
                    boundary.insert(w);
                }
                let reg_bit = |meta: &[&str]| -> Result<(String, usize), ParseError> {
                    if meta.len() < 2 {
                        return Err(err(ln, "expected register name and bit"));
                    }
                    Ok((meta[0].to_string(), num(meta[1])?))
                };
                let role = match toks[2] {
                    "operand" => {
                        if meta.len() != 3 {
                            return Err(err(
                                ln,
                                "expected `operand <reg> <bit> preserved|clobbered`",
                            ));
                        }
                        let (register, bit) = reg_bit(&meta)?;
                        let preserved = match meta[2] {
                            "preserved" => true,
                            "clobbered" => false,
                            other => return Err(err(ln, format!("unknown operand tag `{other}`"))),
                        };
                        WireRole::Operand {
                            register,
                            bit,
                            preserved,
                        }
                    }
                    "result" | "carryout" => {
                        if meta.len() != 2 {
                            return Err(err(ln, "expected `<reg> <bit>`"));
                        }
                        let (register, bit) = reg_bit(&meta)?;
                        if toks[2] == "result" {
                            WireRole::Result { register, bit }
                        } else {
                            WireRole::CarryOut { register, bit }
                        }
                    }
                    kind @ ("ancilla" | "const0" | "const1") => {
                        if !meta.is_empty() {
                            return Err(err(ln, format!("unexpected metadata after {kind}")));
                        }
                        match kind {
                            "ancilla" => WireRole::Ancilla,
                            "const0" => WireRole::Constant(false),
                            _ => WireRole::Constant(true),
                        }
                    }
                    other => return Err(err(ln, format!("unknown role `{other}`"))),
                };
                if roles[w].replace(role).is_some() {
                    return Err(err(ln, format!("wire {w} given two roles")));
                }
            }
            "x" | "cx" | "ccx" => {
                let arity = match head {
                    "x" => 1,
                    "cx" => 2,
                    _ => 3,
                };
                if toks.len() != arity + 1 {
                    return Err(err(ln, format!("`{head}` takes {arity} wire(s)")));
                }
                let ws = toks[1..]
                    .iter()
                    .map(|t| wire(t))
                    .collect::<Result<Vec<_>, _>>()?;
                let g = match arity {
                    1 => Gate::not(ws[0]),
                    2 => Gate::cnot(ws[0], ws[1]),
                    _ => Gate::toffoli(ws[0], ws[1], ws[2]),
                };
                g.check(n).map_err(|e| err(ln, e.to_string()))?;
                gates.push(g);
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let width =
        width.ok_or_else(|| err(text.lines().count().max(1), "missing `qubits <N>` header"))?;
    let roles = roles
        .into_iter()
        .map(|r| r.unwrap_or(WireRole::Ancilla))
        .collect();
    Ok(Circuit::from_parts(
        width, gates, registers, roles, boundary, notes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::CircuitBuilder;

    fn sample() -> Circuit {
        let mut b = CircuitBuilder::new();
        let a = b.operand("A", 2, true);
        let k = b.constant("P", 0b1, 1);
        let s = b.result("S", 1);
        let t = b.ancilla();
        b.set_boundary(t);
        b.note("P = 1");
        b.ccx(a[0], a[1], s[0]);
        b.cx(k[0], t);
        b.cx(k[0], t);
        b.prepare_constants(&k);
        b.mark_carry_out("CO", &[t]);
        b.finish()
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = emit(&sample());
        let back = parse(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(emit(&back), text);
    }

    #[test]
    fn errors_cite_lines() {
        let e = parse("qubits 2\nreg A 0\ncx 0 5\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse("qubits 2\n\nccx 0 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse("cx 0 1\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse("qubits 3\ncx 1 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse("qubits 2\nrole 0 bogus\n").is_err());
    }
}
