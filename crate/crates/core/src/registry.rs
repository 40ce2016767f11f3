//! Named constructions with default parameters and their reference oracles.

use std::fmt;
use std::str::FromStr;

use crate::adders::{
    build_csa_3to2, build_csa_4to2, build_qfa, build_qha, build_qmg, build_ripple_adder, build_sum,
    build_tree_adder,
};
use crate::circuit::Circuit;
use crate::error::BuildError;
use crate::layout::Layout;
use crate::modular::{
    build_final_normalizer, build_mod_csa, build_mod_multiplier, build_modexp_normalized,
    make_modulus_context, ModulusContext, Probe,
};
use crate::multiplier::build_cs_multiplier;
use crate::reference::{classical_full_add, modexp_u64};
use crate::sim::run_lanes_prefix;
use crate::verify::{
    assign, verify_against_oracle, Assignment, Domain, Encoder, Oracle, VerificationReport,
    VerifyError,
};

/// Sweep every input when there are at most this many input bits.
pub const EXHAUSTIVE_INPUT_BITS: usize = 16;
pub const DEFAULT_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    Qfa,
    Qmg,
    Qha,
    Sum,
    Ripple,
    Csa32,
    Csa42,
    Tree,
    Csmul,
    Modcsa,
    Modmul,
    Modexp,
    Normalize,
}

impl Construction {
    pub const ALL: [Construction; 13] = [
        Construction::Qfa,
        Construction::Qmg,
        Construction::Qha,
        Construction::Sum,
        Construction::Ripple,
        Construction::Csa32,
        Construction::Csa42,
        Construction::Tree,
        Construction::Csmul,
        Construction::Modcsa,
        Construction::Modmul,
        Construction::Modexp,
        Construction::Normalize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Qfa => "qfa",
            Construction::Qmg => "qmg",
            Construction::Qha => "qha",
            Construction::Sum => "sum",
            Construction::Ripple => "ripple",
            Construction::Csa32 => "csa32",
            Construction::Csa42 => "csa42",
            Construction::Tree => "tree",
            Construction::Csmul => "csmul",
            Construction::Modcsa => "modcsa",
            Construction::Modmul => "modmul",
            Construction::Modexp => "modexp",
            Construction::Normalize => "normalize",
        }
    }

    pub fn is_modular(self) -> bool {
        matches!(
            self,
            Construction::Modcsa
                | Construction::Modmul
                | Construction::Modexp
                | Construction::Normalize
        )
    }

    /// Smallest parameters the builder accepts.
    pub fn smallest(self) -> Params {
        let mut p = Params::default();
        match self {
            Construction::Ripple
            | Construction::Csa32
            | Construction::Csa42
            | Construction::Csmul => p.n = Some(1),
            Construction::Tree => {
                p.inputs = Some(3);
                p.width = Some(1);
            }
            Construction::Modexp => {
                p.bits = Some(4);
                p.modulus = Some(3);
                p.base = Some(0);
                p.expwidth = Some(1);
            }
            c if c.is_modular() => {
                p.bits = Some(4);
                p.modulus = Some(3);
            }
            _ => {}
        }
        p
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| BuildError::Invalid(format!("unknown construction `{s}`")))
    }
}

/// Unset fields take the defaults listed in [`Params::resolved`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<usize>,
    pub inputs: Option<usize>,
    pub width: Option<usize>,
    pub bits: Option<u32>,
    pub modulus: Option<u64>,
    pub base: Option<u64>,
    pub expwidth: Option<usize>,
}

impl Params {
    pub fn resolved(&self, c: Construction) -> Params {
        Params {
            n: Some(
                self.n
                    .unwrap_or(if c == Construction::Csmul { 2 } else { 4 }),
            ),
            inputs: Some(self.inputs.unwrap_or(8)),
            width: Some(self.width.unwrap_or(2)),
            bits: Some(self.bits.unwrap_or(4)),
            modulus: Some(self.modulus.unwrap_or(3)),
            base: Some(self.base.unwrap_or(2)),
            expwidth: Some(self.expwidth.unwrap_or(2)),
        }
    }
}

pub struct Built {
    pub construction: Construction,
    pub params: Params,
    pub circuit: Circuit,
    pub layout: Layout,
    pub ctx: Option<ModulusContext>,
    pub probe: Option<Probe>,
}

pub fn build(c: Construction, params: &Params) -> Result<Built, BuildError> {
    let p = params.resolved(c);
    let n = p.n.unwrap_or_default();
    let ctx = if c.is_modular() {
        Some(make_modulus_context(
            p.bits.unwrap_or_default(),
            p.modulus.unwrap_or_default(),
        )?)
    } else {
        None
    };
    let mut probe = None;
    let (circuit, layout) = match c {
        Construction::Qfa => single(build_qfa(), &[("C", 0), ("D", 1)]),
        Construction::Qmg => single(build_qmg(), &[("D", 1)]),
        Construction::Qha => single(build_qha(), &[("B", 0), ("C", 1)]),
        Construction::Sum => single(build_sum(), &[("C", 0)]),
        Construction::Ripple => build_ripple_adder(n)?,
        Construction::Csa32 => build_csa_3to2(n)?,
        Construction::Csa42 => build_csa_4to2(n)?,
        Construction::Tree => {
            build_tree_adder(p.inputs.unwrap_or_default(), p.width.unwrap_or_default())?
        }
        Construction::Csmul => {
            let (c, m) = build_cs_multiplier(n)?;
            (c, m.layout)
        }
        Construction::Modcsa => {
            let (c, m) = build_mod_csa(ctx.as_ref().expect("modular"))?;
            probe = m.probe;
            (c, m.layout)
        }
        Construction::Modmul => build_mod_multiplier(ctx.as_ref().expect("modular"))?,
        Construction::Modexp => {
            let (c, m) = build_modexp_normalized(
                ctx.as_ref().expect("modular"),
                p.base.unwrap_or_default(),
                p.expwidth.unwrap_or_default(),
            )?;
            (c, m.layout)
        }
        Construction::Normalize => {
            let (c, m) = build_final_normalizer(ctx.as_ref().expect("modular"))?;
            (c, m.layout)
        }
    };
    Ok(Built {
        construction: c,
        params: p,
        circuit,
        layout,
        ctx,
        probe,
    })
}

fn single(c: Circuit, outputs: &[(&str, u32)]) -> (Circuit, Layout) {
    let layout = Layout::new(
        &c,
        outputs.iter().map(|(r, s)| (r.to_string(), *s)).collect(),
    );
    (c, layout)
}

fn bit(v: u128) -> bool {
    v & 1 == 1
}

impl Built {
    pub fn encoder(&self) -> Encoder {
        Encoder::operands(&self.circuit)
    }

    /// Exhaustive up to [`EXHAUSTIVE_INPUT_BITS`] input bits, sampled above.
    pub fn default_domain(&self, samples: u64, seed: u64) -> Domain {
        if self.encoder().input_bits(&self.circuit) <= EXHAUSTIVE_INPUT_BITS {
            Domain::Exhaustive
        } else {
            Domain::Sample {
                count: samples,
                seed,
            }
        }
    }

    pub fn oracle(&self) -> Oracle<'_> {
        let layout = &self.layout;
        let value = move |out: &Assignment| layout.output_value(out);
        match self.construction {
            Construction::Qfa => Oracle::exact(|i| {
                let (s, k) = classical_full_add(bit(i["A"]), bit(i["B"]), bit(i["C"]));
                assign([("C", u128::from(s)), ("D", u128::from(k) ^ i["D"])])
            }),
            Construction::Qmg => Oracle::exact(|i| {
                let (_, k) = classical_full_add(bit(i["A"]), bit(i["B"]), bit(i["C"]));
                assign([("C", i["C"]), ("D", u128::from(k) ^ i["D"])])
            }),
            Construction::Qha => Oracle::exact(|i| {
                assign([("B", i["A"] ^ i["B"]), ("C", i["C"] ^ (i["A"] & i["B"]))])
            }),
            Construction::Sum => Oracle::exact(|i| assign([("C", i["A"] ^ i["B"] ^ i["C"])])),
            Construction::Ripple => {
                let n = self.params.n.unwrap_or_default();
                Oracle::exact(move |i| {
                    let total = i["A"] + i["B"];
                    assign([("B", total & ((1 << n) - 1)), ("CO", total >> n)])
                })
            }
            Construction::Csa32 => Oracle::predicate(move |i, o| {
                let want = i["A"] + i["B"] + i["C"];
                let xor = i["A"] ^ i["B"] ^ i["C"];
                if value(o) != want {
                    return Err(format!("C + 2K = {want}"));
                }
                if o["C"] != xor {
                    return Err(format!("C = A^B^C = {xor}"));
                }
                Ok(())
            }),
            Construction::Csa42 | Construction::Tree => Oracle::predicate(move |i, o| {
                let want: u128 = i.values().sum();
                (value(o) == want)
                    .then_some(())
                    .ok_or_else(|| format!("S + K = {want}"))
            }),
            Construction::Csmul => Oracle::predicate(move |i, o| {
                let want = (i["XS"] + 2 * i["XK"]) * (i["YS"] + 2 * i["YK"]);
                (value(o) == want)
                    .then_some(())
                    .ok_or_else(|| format!("PS + PK = {want}"))
            }),
            Construction::Modcsa | Construction::Modmul => {
                let ctx = self.ctx.expect("modular");
                let modular = self.construction;
                Oracle::predicate(move |i, o| {
                    let m = u128::from(ctx.m);
                    let want = if modular == Construction::Modcsa {
                        (i["A"] + i["B"] + i["C"]) % m
                    } else {
                        (i["XS"] + 2 * i["XK"]) * (i["YS"] + 2 * i["YK"]) % m
                    };
                    let got = value(o);
                    if got % m != want {
                        return Err(format!("value congruent to {want} mod {m}"));
                    }
                    if got >> ctx.n != 0 {
                        return Err(format!("value below 2^{}", ctx.n));
                    }
                    Ok(())
                })
            }
            Construction::Modexp => {
                let ctx = self.ctx.expect("modular");
                let a = self.params.base.unwrap_or_default();
                Oracle::exact(move |i| {
                    let r = modexp_u64(a, i["E"] as u64, ctx.m).expect("modulus is non-zero");
                    assign([("R", u128::from(r))])
                })
            }
            Construction::Normalize => {
                let ctx = self.ctx.expect("modular");
                Oracle::predicate(move |i, o| {
                    let v = i["S"] + 2 * i["K"];
                    // Inputs at or above 2^N are outside the contract.
                    if v >> ctx.n != 0 {
                        return Ok(());
                    }
                    let want = v % u128::from(ctx.m);
                    (o["R"] == want)
                        .then_some(())
                        .ok_or_else(|| format!("R = {want}"))
                })
            }
        }
    }

    pub fn verify(&self, domain: Domain) -> Result<VerificationReport, VerifyError> {
        verify_against_oracle(&self.circuit, &self.encoder(), &self.oracle(), domain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeReport {
    pub cases: u64,
    /// Inputs for which both probe wires were 1.
    pub both_set: u64,
}

/// Runs the prefix up to the probe gate over every operand assignment and
/// counts how often both probe wires are 1.
pub fn check_probe(c: &Circuit, probe: &Probe) -> Result<ProbeReport, VerifyError> {
    let enc = Encoder::operands(c);
    let bits = enc.input_bits(c);
    if bits > crate::verify::MAX_EXHAUSTIVE_INPUT_BITS {
        return Err(VerifyError::DomainTooLarge(bits));
    }
    let inputs: Vec<usize> = enc
        .inputs
        .iter()
        .flat_map(|r| c.register(r).expect("encoder names registers").to_vec())
        .collect();
    let total = 1u64 << bits;
    let mut both_set = 0;
    let mut lanes = vec![0u64; c.width()];
    let mut base = 0;
    while base < total {
        let count = (total - base).min(64);
        lanes.iter_mut().for_each(|l| *l = 0);
        for (j, &w) in inputs.iter().enumerate() {
            lanes[w] = (0..count).fold(0, |acc, k| acc | ((((base + k) >> j) & 1) << k));
        }
        run_lanes_prefix(c, probe.gate, &mut lanes);
        let live = if count == 64 {
            u64::MAX
        } else {
            (1 << count) - 1
        };
        both_set += u64::from((lanes[probe.wires[0]] & lanes[probe.wires[1]] & live).count_ones());
        base += count;
    }
    Ok(ProbeReport {
        cases: total,
        both_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Construction::ALL {
            assert_eq!(c.name().parse::<Construction>().unwrap(), c);
        }
        assert!("nope".parse::<Construction>().is_err());
    }

    #[test]
    fn smallest_params_build() {
        for c in Construction::ALL {
            build(c, &c.smallest()).unwrap_or_else(|e| panic!("{c}: {e}"));
        }
    }
}
