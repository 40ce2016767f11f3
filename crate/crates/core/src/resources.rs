//! Qubit, gate and depth counts, closed-form cost formulas, and the
//! carry-save vs ripple-carry scaling table.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use thiserror::Error;

use crate::circuit::{Circuit, GateCounts, WireRole};
use crate::registry::{Built, Construction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResourceError {
    #[error("unknown formula `{0}`")]
    UnknownFormula(String),
    #[error("formula `{name}` needs N >= {min}")]
    Domain { name: String, min: u64 },
}

pub const FORMULAS: [&str; 6] = [
    "tree_qubits",
    "tree_delay",
    "csa_input_qubits",
    "csa_input_delay",
    "mul_adder_qubits",
    "mul_total_qubits",
];

/// ceil(log2 n) for n >= 1.
pub fn ceil_log2(n: u64) -> u64 {
    u64::from(64 - (n.max(1) - 1).leading_zeros())
}

/// `n` is the number of inputs (or operand width for the multiplier formulas),
/// `l` the bit width where the formula has one.
pub fn formula_value(name: &str, n: u64, l: u64) -> Result<i64, ResourceError> {
    let need = |min: u64| {
        if n < min {
            Err(ResourceError::Domain {
                name: name.to_string(),
                min,
            })
        } else {
            Ok(())
        }
    };
    let (n_i, l_i) = (n as i64, l as i64);
    let lg = ceil_log2(n) as i64;
    match name {
        "tree_qubits" => need(1).map(|_| (2 * n_i - 2) * l_i),
        "tree_delay" => need(1).map(|_| 4 * lg - 5),
        "csa_input_qubits" => need(1).map(|_| (4 * n_i - 2) * l_i),
        "csa_input_delay" => need(1).map(|_| 4 * lg - 1),
        "mul_adder_qubits" => need(1).map(|_| 8 * n_i * n_i - 4 * n_i),
        "mul_total_qubits" => need(1).map(|_| 8 * n_i * n_i),
        _ => Err(ResourceError::UnknownFormula(name.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// measured <= 2 * formula
    WithinBound,
    Informational,
}

impl Relation {
    pub fn between(formula: Rational64, measured: Rational64) -> Relation {
        if measured == formula {
            Relation::Equal
        } else if measured <= formula * 2 {
            Relation::WithinBound
        } else {
            Relation::Informational
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equal => "equal",
            Relation::WithinBound => "within-bound",
            Relation::Informational => "informational",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaEntry {
    pub name: String,
    /// What the measured figure counts.
    pub measures: &'static str,
    pub formula: Rational64,
    pub measured: Rational64,
    pub relation: Relation,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoleCounts {
    pub operand: usize,
    pub ancilla: usize,
    pub constant: usize,
    pub result: usize,
    pub carry_out: usize,
}

impl RoleCounts {
    pub fn total(&self) -> usize {
        self.operand + self.ancilla + self.constant + self.result + self.carry_out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceReport {
    pub label: String,
    pub qubits: usize,
    pub roles: RoleCounts,
    /// Wires flagged as boundary (sum/carry bits outside the L-bit core).
    pub boundary: usize,
    pub gates: GateCounts,
    pub unit_depth: u64,
    pub qfa_depth: Rational64,
    pub formulas: Vec<FormulaEntry>,
}

pub fn measure(c: &Circuit) -> ResourceReport {
    let mut roles = RoleCounts::default();
    for r in c.roles() {
        match r {
            WireRole::Operand { .. } => roles.operand += 1,
            WireRole::Ancilla => roles.ancilla += 1,
            WireRole::Constant(_) => roles.constant += 1,
            WireRole::Result { .. } => roles.result += 1,
            WireRole::CarryOut { .. } => roles.carry_out += 1,
        }
    }
    ResourceReport {
        label: String::new(),
        qubits: c.width(),
        roles,
        boundary: c.boundary().len(),
        gates: c.gate_counts(),
        unit_depth: c.unit_depth(),
        qfa_depth: c.qfa_depth(),
        formulas: Vec::new(),
    }
}

fn entry(name: &str, measures: &'static str, n: u64, l: u64, measured: Rational64) -> FormulaEntry {
    let formula = Rational64::from_integer(formula_value(name, n, l).expect("known formula"));
    FormulaEntry {
        name: name.to_string(),
        measures,
        formula,
        measured,
        relation: Relation::between(formula, measured),
    }
}

/// [`measure`] plus the formula comparisons that apply to the construction.
pub fn measure_built(b: &Built) -> ResourceReport {
    let mut r = measure(&b.circuit);
    let p = &b.params;
    r.label = format!("{}", b.construction);
    let core = Rational64::from_integer((r.qubits - r.boundary) as i64);
    let tree = match b.construction {
        Construction::Tree => Some((p.inputs.unwrap_or_default(), p.width.unwrap_or_default())),
        Construction::Csa42 => Some((4, p.n.unwrap_or_default())),
        _ => None,
    };
    if let Some((inputs, l)) = tree {
        let (inputs, l) = (inputs as u64, l as u64);
        r.label = format!("{} inputs {inputs} width {l}", b.construction);
        r.formulas
            .push(entry("tree_qubits", "core wires", inputs, l, core));
        r.formulas
            .push(entry("tree_delay", "qfa depth", inputs, l, r.qfa_depth));
        if inputs % 2 == 0 {
            r.formulas
                .push(entry("csa_input_qubits", "core wires", inputs / 2, l, core));
            r.formulas.push(entry(
                "csa_input_delay",
                "qfa depth",
                inputs / 2,
                l,
                r.qfa_depth,
            ));
        }
    }
    if b.construction == Construction::Csmul {
        let n = p.n.unwrap_or_default() as u64;
        r.label = format!("csmul n {n}");
        let adder = Rational64::from_integer((r.qubits - r.roles.operand) as i64);
        r.formulas
            .push(entry("mul_adder_qubits", "non-operand wires", n, 0, adder));
        let total = Rational64::from_integer(r.qubits as i64);
        r.formulas
            .push(entry("mul_total_qubits", "all wires", n, 0, total));
    }
    r
}

fn ratio(x: Rational64) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl ResourceReport {
    /// Stable key order.
    pub fn key_values(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("label".to_string(), self.label.clone()),
            ("qubits".into(), self.qubits.to_string()),
            ("qubits.operand".into(), self.roles.operand.to_string()),
            ("qubits.ancilla".into(), self.roles.ancilla.to_string()),
            ("qubits.constant".into(), self.roles.constant.to_string()),
            ("qubits.result".into(), self.roles.result.to_string()),
            ("qubits.carryout".into(), self.roles.carry_out.to_string()),
            ("qubits.boundary".into(), self.boundary.to_string()),
            (
                "qubits.core".into(),
                (self.qubits - self.boundary).to_string(),
            ),
            ("gates.x".into(), self.gates.not.to_string()),
            ("gates.cx".into(), self.gates.cnot.to_string()),
            ("gates.ccx".into(), self.gates.toffoli.to_string()),
            ("gates.total".into(), self.gates.total().to_string()),
            ("depth.unit".into(), self.unit_depth.to_string()),
            ("depth.qfa".into(), ratio(self.qfa_depth)),
        ];
        for f in &self.formulas {
            let k = format!("formula.{}", f.name);
            kv.push((format!("{k}.formula"), ratio(f.formula)));
            kv.push((format!("{k}.measured"), ratio(f.measured)));
            kv.push((format!("{k}.measures"), f.measures.to_string()));
            kv.push((format!("{k}.relation"), f.relation.to_string()));
        }
        kv
    }

    pub fn render_key_values(&self) -> String {
        self.key_values()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.label.is_empty() {
            writeln!(f, "{}", self.label)?;
        }
        let r = &self.roles;
        writeln!(
            f,
            "qubits  {:>6}  (operand {}, ancilla {}, const {}, result {}, carryout {}; boundary {})",
            self.qubits, r.operand, r.ancilla, r.constant, r.result, r.carry_out, self.boundary
        )?;
        writeln!(
            f,
            "gates   {:>6}  (x {}, cx {}, ccx {})",
            self.gates.total(),
            self.gates.not,
            self.gates.cnot,
            self.gates.toffoli
        )?;
        writeln!(f, "depth   {:>6}  unit", self.unit_depth)?;
        writeln!(f, "depth   {:>6}  qfa", ratio(self.qfa_depth))?;
        if !self.formulas.is_empty() {
            writeln!(f)?;
            writeln!(
                f,
                "{:<18} {:>8} {:>9}  {:<14} counts",
                "formula", "value", "measured", "relation"
            )?;
            for e in &self.formulas {
                writeln!(
                    f,
                    "{:<18} {:>8} {:>9}  {:<14} {}",
                    e.name,
                    ratio(e.formula),
                    ratio(e.measured),
                    e.relation.to_string(),
                    e.measures
                )?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: u64,
    /// N * 4 log2 N
    pub cs_delay: f64,
    /// N^3
    pub ripple_delay: f64,
    pub delay_ratio: f64,
    /// N^3 / (10 N), the constant 10 standing in for log2 1000.
    pub normalized_speedup: BigRational,
    pub cs_qubits: BigInt,
    pub ripple_qubits: BigInt,
    pub qubit_factor: BigRational,
}

pub const SPEEDUP_LOG_CONSTANT: u64 = 10;

pub fn scaling_report(ns: &[u64]) -> Vec<ScalingRow> {
    ns.iter()
        .map(|&n| {
            let nf = n as f64;
            let cs_delay = nf * 4.0 * nf.log2();
            let ripple_delay = nf.powi(3);
            let big = BigInt::from(n);
            let cube = &big * &big * &big;
            let cs_qubits = &big * &big;
            ScalingRow {
                n,
                cs_delay,
                ripple_delay,
                delay_ratio: ripple_delay / cs_delay,
                normalized_speedup: BigRational::new(
                    cube,
                    BigInt::from(SPEEDUP_LOG_CONSTANT) * &big,
                ),
                qubit_factor: BigRational::new(cs_qubits.clone(), big.clone()),
                cs_qubits,
                ripple_qubits: big,
            }
        })
        .collect()
}

pub fn render_scaling(rows: &[ScalingRow]) -> String {
    let mut out = format!(
        "{:>8} {:>14} {:>14} {:>12} {:>14} {:>12} {:>12}\n",
        "N", "cs delay", "ripple delay", "ratio", "speedup/10", "cs qubits", "qubit factor"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>8} {:>14.1} {:>14.3e} {:>12.1} {:>14} {:>12} {:>12}\n",
            r.n,
            r.cs_delay,
            r.ripple_delay,
            r.delay_ratio,
            r.normalized_speedup,
            r.cs_qubits,
            r.qubit_factor
        ));
    }
    out.push_str("speedup/10 = N^3 / (10 N), 10 taken as log2 of 1000\n");
    out
}
