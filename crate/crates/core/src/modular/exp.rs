use crate::adders::compress::Row;
use crate::builder::CircuitBuilder;
use crate::circuit::Circuit;
use crate::error::BuildError;
use crate::layout::Layout;
use crate::modular::csa::{context_note, mod_tree};
use crate::modular::mul::pack_rows;
use crate::modular::normalize::{emit_normalizer, normalizer_stages};
use crate::modular::{FoldConstants, ModulusContext};

#[derive(Debug, Clone)]
pub struct ModexpLayout {
    pub layout: Layout,
    /// a^(2^i) mod M for each exponent bit.
    pub stage_constants: Vec<u64>,
}

struct Chain {
    s: Vec<usize>,
    k: Vec<usize>,
    constants: Vec<u64>,
    consts: FoldConstants,
    one: Vec<usize>,
}

fn check(ctx: &ModulusContext, a: u64, m: usize) -> Result<(), BuildError> {
    if a >= ctx.m {
        return Err(BuildError::BaseTooLarge { a, m: ctx.m });
    }
    if m == 0 {
        return Err(BuildError::ZeroWidth);
    }
    Ok(())
}

/// Accumulator starts at 1; stage i multiplies by a^(2^i) mod M when E_i is
/// set and by 1 otherwise. Intermediate accumulators stay as results.
fn emit_chain(
    b: &mut CircuitBuilder,
    ctx: &ModulusContext,
    a: u64,
    m: usize,
    last: (&str, &str),
) -> Chain {
    b.note(context_note(ctx));
    b.note(format!("base {a} exponent bits {m}"));
    let consts = FoldConstants::alloc(b, ctx);
    let e = b.operand("E", m, true);
    let one = b.constant("ONE", 1, 1);
    let mut acc = vec![(0u32, one[0])];
    let mut c = a % ctx.m;
    let mut constants = Vec::with_capacity(m);
    let mut result = (Vec::new(), Vec::new());
    for (i, &ei) in e.iter().enumerate() {
        constants.push(c);
        let ne = b.ancilla();
        b.cx(ei, ne);
        b.x(ne);
        let mut bits = Vec::new();
        let start = b.mark();
        for &(p, w) in &acc {
            let on = (u128::from(c) * u128::from(ctx.pow2(p)) % u128::from(ctx.m)) as u64;
            let off = ctx.pow2(p);
            for bit in 0..ctx.n - 2 {
                let (x, y) = ((on >> bit) & 1 == 1, (off >> bit) & 1 == 1);
                if !(x || y) {
                    continue;
                }
                let t = b.ancilla();
                match (x, y) {
                    (true, true) => b.cx(w, t),
                    (true, false) => b.ccx(w, ei, t),
                    _ => b.ccx(w, ne, t),
                }
                bits.push((bit, t));
            }
        }
        let create = b.since(start);
        let out = mod_tree(b, pack_rows(&bits), ctx, &consts);
        b.undo(create);
        b.x(ne);
        b.cx(ei, ne);
        if i + 1 == m {
            b.mark_result(last.0, &out.s);
            b.mark_result(last.1, &out.k);
        } else {
            b.mark_result(&format!("S{}", i + 1), &out.s);
            b.mark_result(&format!("K{}", i + 1), &out.k);
        }
        acc = Row::from_wires(&out.s, 0)
            .bits()
            .iter()
            .chain(Row::from_wires(&out.k, 1).bits())
            .copied()
            .collect();
        result = (out.s, out.k);
        c = (u128::from(c) * u128::from(c) % u128::from(ctx.m)) as u64;
    }
    Chain {
        s: result.0,
        k: result.1,
        constants,
        consts,
        one,
    }
}

/// Carry-save accumulator (S, K) congruent to a^E mod M.
pub fn build_modexp(
    ctx: &ModulusContext,
    a: u64,
    m: usize,
) -> Result<(Circuit, ModexpLayout), BuildError> {
    check(ctx, a, m)?;
    let mut b = CircuitBuilder::new();
    let chain = emit_chain(&mut b, ctx, a, m, ("S", "K"));
    chain.consts.release(&mut b);
    b.prepare_constants(&chain.one);
    let c = b.finish();
    let layout = Layout::new(&c, vec![("S".into(), 0), ("K".into(), 1)]);
    Ok((
        c,
        ModexpLayout {
            layout,
            stage_constants: chain.constants,
        },
    ))
}

/// The chain followed by the normalizer: R = a^E mod M exactly.
pub fn build_modexp_normalized(
    ctx: &ModulusContext,
    a: u64,
    m: usize,
) -> Result<(Circuit, ModexpLayout), BuildError> {
    check(ctx, a, m)?;
    let mut b = CircuitBuilder::new();
    let chain = emit_chain(&mut b, ctx, a, m, ("S", "K"));
    b.note(format!("normalizer stages {}", normalizer_stages(ctx)));
    let out = emit_normalizer(&mut b, &chain.s, &chain.k, ctx);
    chain.consts.release(&mut b);
    b.prepare_constants(&chain.one);
    b.mark_result("R", &out.residue);
    b.mark_result("F", &out.flags);
    let c = b.finish();
    let layout = Layout::new(&c, vec![("R".into(), 0)]);
    Ok((
        c,
        ModexpLayout {
            layout,
            stage_constants: chain.constants,
        },
    ))
}
