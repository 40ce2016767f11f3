//! Oracle checks over exhaustive or sampled input domains, with ancilla and
//! operand hygiene enforced on every point.

use std::fmt;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{compose, Circuit, WireRole};
use crate::sim::{run_lanes, BasisEvaluator, EXHAUSTIVE_LIMIT};

/// Register name to little-endian value.
pub type Assignment = IndexMap<String, u128>;

pub const DEFAULT_SEED: u64 = 0x5eed_c5a0;

/// Widest input domain we will enumerate.
pub const MAX_EXHAUSTIVE_INPUT_BITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown register {0}")]
    UnknownRegister(String),
    #[error("register {0} is wider than 128 bits")]
    RegisterTooWide(String),
    #[error("operand wire {0} is not driven by the encoder")]
    UncoveredOperand(usize),
    #[error("exhaustive domain of {0} input bits is too large")]
    DomainTooLarge(usize),
    #[error("width {width} exceeds the exhaustive limit {limit}")]
    TooWide { width: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    ValueMismatch,
    AncillaDirty,
    OperandClobbered,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureKind::ValueMismatch => "value-mismatch",
            FailureKind::AncillaDirty => "ancilla-dirty",
            FailureKind::OperandClobbered => "operand-clobbered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub input: Assignment,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub trials: u64,
    pub counterexample: Option<Counterexample>,
    pub failure: Option<FailureKind>,
}

impl VerificationReport {
    fn pass(trials: u64) -> Self {
        VerificationReport {
            passed: true,
            trials,
            counterexample: None,
            failure: None,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return write!(f, "pass ({} cases)", self.trials);
        }
        write!(f, "FAIL after {} cases", self.trials)?;
        if let Some(kind) = self.failure {
            write!(f, ": {kind}")?;
        }
        if let Some(cx) = &self.counterexample {
            write!(
                f,
                "\n  input:    {}\n  expected: {}\n  actual:   {}",
                render(&cx.input),
                cx.expected,
                cx.actual
            )?;
        }
        Ok(())
    }
}

pub fn render(a: &Assignment) -> String {
    a.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

/// Which registers are swept and which are pinned. Ancilla and constant wires always enter 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoder {
    pub inputs: Vec<String>,
    pub fixed: Assignment,
}

impl Encoder {
    /// Sweeps every register that holds operand wires.
    pub fn operands(c: &Circuit) -> Self {
        let inputs = c
            .registers()
            .iter()
            .filter(|(_, ws)| {
                ws.iter()
                    .any(|&w| matches!(c.role(w), WireRole::Operand { .. }))
            })
            .map(|(n, _)| n.clone())
            .collect();
        Encoder {
            inputs,
            fixed: Assignment::new(),
        }
    }

    pub fn fix(mut self, register: &str, value: u128) -> Self {
        self.inputs.retain(|r| r != register);
        self.fixed.insert(register.to_string(), value);
        self
    }

    pub fn input_bits(&self, c: &Circuit) -> usize {
        self.inputs
            .iter()
            .map(|r| c.register(r).map_or(0, <[usize]>::len))
            .sum()
    }
}

type ExactFn<'a> = dyn Fn(&Assignment) -> Assignment + Sync + 'a;
type PredicateFn<'a> = dyn Fn(&Assignment, &Assignment) -> Result<(), String> + Sync + 'a;

pub enum Oracle<'a> {
    /// Expected values for the listed registers.
    Exact(Box<ExactFn<'a>>),
    /// Inspects (inputs, all register values after the run); `Err` carries the expectation.
    Predicate(Box<PredicateFn<'a>>),
}

impl<'a> Oracle<'a> {
    pub fn exact(f: impl Fn(&Assignment) -> Assignment + Sync + 'a) -> Self {
        Oracle::Exact(Box::new(f))
    }

    pub fn predicate(
        f: impl Fn(&Assignment, &Assignment) -> Result<(), String> + Sync + 'a,
    ) -> Self {
        Oracle::Predicate(Box::new(f))
    }
}

/// Builds an assignment from literal pairs.
pub fn assign<const K: usize>(pairs: [(&str, u128); K]) -> Assignment {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

struct Plan<'c> {
    circuit: &'c Circuit,
    inputs: Vec<(String, Vec<usize>)>,
    fixed: Vec<(Vec<usize>, u128)>,
    fixed_assign: Assignment,
    preserved: Vec<usize>,
    clean: Vec<usize>,
}

impl<'c> Plan<'c> {
    fn new(c: &'c Circuit, enc: &Encoder) -> Result<Self, VerifyError> {
        let lookup = |r: &str| -> Result<Vec<usize>, VerifyError> {
            let ws = c
                .register(r)
                .ok_or_else(|| VerifyError::UnknownRegister(r.to_string()))?;
            if ws.len() > 128 {
                return Err(VerifyError::RegisterTooWide(r.to_string()));
            }
            Ok(ws.to_vec())
        };
        let inputs = enc
            .inputs
            .iter()
            .map(|r| Ok((r.clone(), lookup(r)?)))
            .collect::<Result<Vec<_>, VerifyError>>()?;
        let fixed = enc
            .fixed
            .iter()
            .map(|(r, &v)| Ok((lookup(r)?, v)))
            .collect::<Result<Vec<_>, VerifyError>>()?;
        let mut driven = vec![false; c.width()];
        for w in inputs
            .iter()
            .flat_map(|(_, ws)| ws)
            .chain(fixed.iter().flat_map(|(ws, _)| ws))
        {
            driven[*w] = true;
        }
        let mut preserved = Vec::new();
        let mut clean = Vec::new();
        for (w, role) in c.roles().iter().enumerate() {
            match role {
                WireRole::Operand { preserved: p, .. } => {
                    if !driven[w] {
                        return Err(VerifyError::UncoveredOperand(w));
                    }
                    if *p {
                        preserved.push(w);
                    }
                }
                r if r.is_clean() => clean.push(w),
                _ => {}
            }
        }
        Ok(Plan {
            circuit: c,
            inputs,
            fixed,
            fixed_assign: enc.fixed.clone(),
            preserved,
            clean,
        })
    }

    fn read_all(&self, lanes: &[u64], k: usize) -> Assignment {
        self.circuit
            .registers()
            .iter()
            .map(|(name, ws)| {
                let v = ws.iter().take(128).enumerate().fold(0u128, |acc, (i, &w)| {
                    acc | (u128::from((lanes[w] >> k) & 1) << i)
                });
                (name.clone(), v)
            })
            .collect()
    }

    /// Checks one 64-lane batch; returns the first failing lane.
    fn check_batch(
        &self,
        points: &[Vec<u128>],
        oracle: &Oracle<'_>,
    ) -> Option<(usize, FailureKind, Counterexample)> {
        let c = self.circuit;
        let mut lanes = vec![0u64; c.width()];
        for (ws, v) in &self.fixed {
            for (i, &w) in ws.iter().enumerate() {
                if (v >> i) & 1 == 1 {
                    lanes[w] = u64::MAX;
                }
            }
        }
        for (k, point) in points.iter().enumerate() {
            for ((_, ws), v) in self.inputs.iter().zip(point) {
                for (i, &w) in ws.iter().enumerate() {
                    lanes[w] |= (((v >> i) & 1) as u64) << k;
                }
            }
        }
        let before = lanes.clone();
        run_lanes(c, &mut lanes);
        let clobbered = self
            .preserved
            .iter()
            .fold(0u64, |acc, &w| acc | (lanes[w] ^ before[w]));
        let dirty = self.clean.iter().fold(0u64, |acc, &w| acc | lanes[w]);

        for (k, point) in points.iter().enumerate() {
            let mut input = Assignment::new();
            for ((name, _), v) in self.inputs.iter().zip(point) {
                input.insert(name.clone(), *v);
            }
            for (name, v) in &self.fixed_assign {
                input.insert(name.clone(), *v);
            }
            let actual = self.read_all(&lanes, k);
            let value_fail = match oracle {
                Oracle::Exact(f) => {
                    let want = f(&input);
                    let bad = want.iter().any(|(r, v)| actual.get(r) != Some(v));
                    bad.then(|| {
                        let got: Assignment = want
                            .keys()
                            .map(|r| (r.clone(), actual.get(r).copied().unwrap_or(0)))
                            .collect();
                        (render(&want), render(&got))
                    })
                }
                Oracle::Predicate(f) => f(&input, &actual).err().map(|m| (m, render(&actual))),
            };
            if let Some((expected, got)) = value_fail {
                return Some((
                    k,
                    FailureKind::ValueMismatch,
                    Counterexample {
                        input,
                        expected,
                        actual: got,
                    },
                ));
            }
            if (clobbered >> k) & 1 == 1 {
                let before_vals = self.read_all(&before, k);
                let regs: Vec<&String> = self
                    .inputs
                    .iter()
                    .map(|(n, _)| n)
                    .filter(|n| before_vals.get(*n) != actual.get(*n))
                    .collect();
                let pick = |a: &Assignment| {
                    regs.iter()
                        .map(|n| format!("{n}={}", a[*n]))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                return Some((
                    k,
                    FailureKind::OperandClobbered,
                    Counterexample {
                        expected: pick(&before_vals),
                        actual: pick(&actual),
                        input,
                    },
                ));
            }
            if (dirty >> k) & 1 == 1 {
                let wires: Vec<String> = self
                    .clean
                    .iter()
                    .filter(|&&w| (lanes[w] >> k) & 1 == 1)
                    .map(|w| format!("q{w}=1"))
                    .collect();
                return Some((
                    k,
                    FailureKind::AncillaDirty,
                    Counterexample {
                        input,
                        expected: "all ancilla and constant wires 0".into(),
                        actual: wires.join(" "),
                    },
                ));
            }
        }
        None
    }
}

pub fn verify_against_oracle(
    c: &Circuit,
    encoder: &Encoder,
    oracle: &Oracle<'_>,
    domain: Domain,
) -> Result<VerificationReport, VerifyError> {
    let plan = Plan::new(c, encoder)?;
    let widths: Vec<usize> = plan.inputs.iter().map(|(_, ws)| ws.len()).collect();
    let total: u64 = match domain {
        Domain::Exhaustive => {
            let bits: usize = widths.iter().sum();
            if bits > MAX_EXHAUSTIVE_INPUT_BITS {
                return Err(VerifyError::DomainTooLarge(bits));
            }
            1u64 << bits
        }
        Domain::Sample { count, .. } => count,
    };
    if let Oracle::Exact(f) = oracle {
        let probe: Assignment = plan
            .inputs
            .iter()
            .map(|(n, _)| (n.clone(), 0))
            .chain(plan.fixed_assign.clone())
            .collect();
        if let Some(r) = f(&probe).keys().find(|r| c.register(r).is_none()) {
            return Err(VerifyError::UnknownRegister(r.clone()));
        }
    }
    let batches = total.div_ceil(64);
    let point_batch = |b: u64| -> Vec<Vec<u128>> {
        let lo = b * 64;
        let hi = (lo + 64).min(total);
        match domain {
            Domain::Exhaustive => (lo..hi)
                .map(|p| {
                    let mut shift = 0;
                    widths
                        .iter()
                        .map(|&w| {
                            let v = ((p >> shift) as u128) & mask(w);
                            shift += w;
                            v
                        })
                        .collect()
                })
                .collect(),
            Domain::Sample { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(b);
                (lo..hi)
                    .map(|_| {
                        widths
                            .iter()
                            .map(|&w| rng.random::<u128>() & mask(w))
                            .collect()
                    })
                    .collect()
            }
        }
    };
    let failure = (0..batches).into_par_iter().find_map_first(|b| {
        plan.check_batch(&point_batch(b), oracle)
            .map(|(k, kind, cx)| (b * 64 + k as u64, kind, cx))
    });
    Ok(match failure {
        None => VerificationReport::pass(total),
        Some((index, kind, cx)) => VerificationReport {
            passed: false,
            trials: index + 1,
            counterexample: Some(cx),
            failure: Some(kind),
        },
    })
}

fn mask(w: usize) -> u128 {
    if w >= 128 {
        u128::MAX
    } else {
        (1u128 << w) - 1
    }
}

/// Injectivity over every basis state; the lowest colliding input is reported.
pub fn verify_permutation(e: &dyn BasisEvaluator) -> Result<VerificationReport, VerifyError> {
    let width = e.width();
    if width > EXHAUSTIVE_LIMIT {
        return Err(VerifyError::TooWide {
            width,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let total = 1u64 << width;
    let outputs: Vec<u64> = (0..total).into_par_iter().map(|i| e.eval(i)).collect();
    let mut first_seen: Vec<Option<u64>> = vec![None; total as usize];
    for (i, &o) in outputs.iter().enumerate() {
        if o >= total {
            return Ok(collision(i as u64, None, o));
        }
        if let Some(j) = first_seen[o as usize] {
            return Ok(collision(i as u64, Some(j), o));
        }
        first_seen[o as usize] = Some(i as u64);
    }
    Ok(VerificationReport::pass(total))
}

fn collision(i: u64, j: Option<u64>, out: u64) -> VerificationReport {
    let mut input = Assignment::new();
    input.insert("state".into(), u128::from(i));
    let expected = match j {
        Some(j) => format!("an output distinct from that of state {j}"),
        None => "an output inside the state space".into(),
    };
    VerificationReport {
        passed: false,
        trials: i + 1,
        counterexample: Some(Counterexample {
            input,
            expected,
            actual: format!("state {out}"),
        }),
        failure: Some(FailureKind::ValueMismatch),
    }
}

/// Runs `c` then its inverse and checks every wire returns to its input value.
/// Exhaustive up to `exhaustive_width` wires, otherwise `samples` seeded random states.
pub fn check_round_trip(
    c: &Circuit,
    exhaustive_width: usize,
    samples: u64,
    seed: u64,
) -> VerificationReport {
    let width = c.width();
    let identity: Vec<usize> = (0..width).collect();
    let inv = c.inverse();
    let both = compose(width, &[(c, &identity), (&inv, &identity)])
        .expect("identity placement is always valid");
    let exhaustive = width <= exhaustive_width;
    let total = if exhaustive { 1u64 << width } else { samples };
    let batches = total.div_ceil(64);
    let bad = (0..batches).into_par_iter().find_map_first(|b| {
        let lo = b * 64;
        let n = (total - lo).min(64) as usize;
        let mut lanes = vec![0u64; width];
        if exhaustive {
            for (w, lane) in lanes.iter_mut().enumerate() {
                *lane = (0..n as u64).fold(0, |acc, k| acc | ((((lo + k) >> w) & 1) << k));
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            for lane in lanes.iter_mut() {
                *lane = rng.random();
            }
        }
        let before = lanes.clone();
        run_lanes(&both, &mut lanes);
        let live = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let diff = lanes
            .iter()
            .zip(&before)
            .fold(0u64, |acc, (a, b)| acc | (a ^ b))
            & live;
        (diff != 0).then(|| lo + u64::from(diff.trailing_zeros()))
    });
    match bad {
        None => VerificationReport::pass(total),
        Some(i) => {
            let mut input = Assignment::new();
            input.insert("point".into(), u128::from(i));
            VerificationReport {
                passed: false,
                trials: i + 1,
                counterexample: Some(Counterexample {
                    input,
                    expected: "input state restored".into(),
                    actual: "state changed".into(),
                }),
                failure: Some(FailureKind::ValueMismatch),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::CircuitBuilder;

    /// B ^= A, with one ancilla borrowed and returned.
    fn xor_into() -> Circuit {
        let mut b = CircuitBuilder::new();
        let a = b.operand("A", 2, true);
        let t = b.operand("B", 2, false);
        let z = b.ancilla();
        for i in 0..2 {
            b.cx(a[i], z);
            b.cx(z, t[i]);
            b.cx(a[i], z);
        }
        b.finish()
    }

    #[test]
    fn exact_oracle_passes() {
        let c = xor_into();
        let o = Oracle::exact(|i| assign([("B", i["A"] ^ i["B"])]));
        let r = verify_against_oracle(&c, &Encoder::operands(&c), &o, Domain::Exhaustive).unwrap();
        assert!(r.passed);
        assert_eq!(r.trials, 16);
    }

    #[test]
    fn wrong_oracle_reports_lowest_input() {
        let c = xor_into();
        let o = Oracle::exact(|i| assign([("B", i["A"] ^ i["B"] ^ 1)]));
        let r = verify_against_oracle(&c, &Encoder::operands(&c), &o, Domain::Exhaustive).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failure, Some(FailureKind::ValueMismatch));
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.input, assign([("A", 0), ("B", 0)]));
    }

    #[test]
    fn dirty_ancilla_detected() {
        let mut b = CircuitBuilder::new();
        let a = b.operand("A", 1, true);
        let z = b.ancilla();
        b.cx(a[0], z);
        let c = b.finish();
        let o = Oracle::exact(|_| Assignment::new());
        let r = verify_against_oracle(&c, &Encoder::operands(&c), &o, Domain::Exhaustive).unwrap();
        assert_eq!(r.failure, Some(FailureKind::AncillaDirty));
        assert_eq!(r.counterexample.unwrap().input, assign([("A", 1)]));
    }

    #[test]
    fn clobbered_operand_detected() {
        let mut b = CircuitBuilder::new();
        let a = b.operand("A", 1, true);
        let t = b.operand("T", 1, true);
        b.cx(t[0], a[0]);
        let c = b.finish();
        let o = Oracle::exact(|_| Assignment::new());
        let r = verify_against_oracle(&c, &Encoder::operands(&c), &o, Domain::Exhaustive).unwrap();
        assert_eq!(r.failure, Some(FailureKind::OperandClobbered));
    }

    #[test]
    fn encoder_must_cover_operands() {
        let c = xor_into();
        let enc = Encoder {
            inputs: vec!["A".into()],
            fixed: Assignment::new(),
        };
        let o = Oracle::exact(|_| Assignment::new());
        assert!(matches!(
            verify_against_oracle(&c, &enc, &o, Domain::Exhaustive),
            Err(VerifyError::UncoveredOperand(_))
        ));
        let enc = Encoder::operands(&c).fix("Z", 0);
        assert_eq!(
            verify_against_oracle(&c, &enc, &o, Domain::Exhaustive),
            Err(VerifyError::UnknownRegister("Z".into()))
        );
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = xor_into();
        let seen = std::sync::Mutex::new(Vec::new());
        let o = Oracle::predicate(|i, _| {
            seen.lock().unwrap().push(i.clone());
            Ok(())
        });
        let d = Domain::Sample {
            count: 100,
            seed: 7,
        };
        verify_against_oracle(&c, &Encoder::operands(&c), &o, d).unwrap();
        let mut first = std::mem::take(&mut *seen.lock().unwrap());
        verify_against_oracle(&c, &Encoder::operands(&c), &o, d).unwrap();
        let mut second = std::mem::take(&mut *seen.lock().unwrap());
        first.sort_by_key(|a| (a["A"], a["B"]));
        second.sort_by_key(|a| (a["A"], a["B"]));
        assert_eq!(first.len(), 100);
        assert_eq!(first, second);
    }

    struct Squash;

    impl BasisEvaluator for Squash {
        fn width(&self) -> usize {
            3
        }
        fn eval(&self, input: u64) -> u64 {
            input & 0b011
        }
    }

    #[test]
    fn permutation_check_catches_collision() {
        let r = verify_permutation(&Squash).unwrap();
        assert!(!r.passed);
        assert_eq!(r.counterexample.unwrap().input["state"], 4);
        assert!(verify_permutation(&xor_into()).unwrap().passed);
    }

    #[test]
    fn round_trip_identity() {
        let c = xor_into();
        assert!(check_round_trip(&c, 12, 1000, 1).passed);
        assert!(check_round_trip(&c, 0, 1000, 1).passed);
    }
}
