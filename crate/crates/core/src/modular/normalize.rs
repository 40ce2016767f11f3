use crate::adders::ripple::emit_ripple;
use crate::builder::CircuitBuilder;
use crate::circuit::Circuit;
use crate::error::BuildError;
use crate::layout::Layout;
use crate::modular::csa::context_note;
use crate::modular::ModulusContext;

#[derive(Debug, Clone)]
pub struct NormalizerLayout {
    pub layout: Layout,
    pub stages: u64,
}

/// Conditional subtractions needed for any input below 2^N.
pub fn normalizer_stages(ctx: &ModulusContext) -> u64 {
    ((1u64 << ctx.n) - 1).div_ceil(ctx.m)
}

pub(crate) struct Normalized {
    pub residue: Vec<usize>,
    pub flags: Vec<usize>,
}

/// Collapses (S, K) into a binary register with a ripple adder, then runs the
/// trial subtractions. Each stage leaves [V < M] on a fresh flag wire.
pub(crate) fn emit_normalizer(
    b: &mut CircuitBuilder,
    s: &[usize],
    k: &[usize],
    ctx: &ModulusContext,
) -> Normalized {
    let w = ctx.n as usize + 2;
    let v = b.ancillas(w);
    for (i, &x) in s.iter().enumerate() {
        b.cx(x, v[i]);
    }
    let mut shifted = vec![b.ancilla()];
    shifted.extend_from_slice(k);
    while shifted.len() < w {
        shifted.push(b.ancilla());
    }
    let carries = b.ancillas(w);
    emit_ripple(b, &shifted, &v, &carries, None);

    let modulus = b.constant("MOD", u128::from(ctx.m), w);
    let add_back = b.ancillas(w);
    let spill = b.ancilla();
    let set_bits: Vec<usize> = (0..w).filter(|&j| (ctx.m >> j) & 1 == 1).collect();
    let mut flags = Vec::new();
    for _ in 0..normalizer_stages(ctx) {
        let f = b.ancilla();
        // ~V + M overflows exactly when V < M; flipping back leaves V - M.
        for &x in &v {
            b.x(x);
        }
        emit_ripple(b, &modulus, &v, &carries, Some(f));
        for &x in &v {
            b.x(x);
        }
        for &j in &set_bits {
            b.cx(f, add_back[j]);
        }
        emit_ripple(b, &add_back, &v, &carries, Some(spill));
        b.cx(f, spill);
        for &j in &set_bits {
            b.cx(f, add_back[j]);
        }
        flags.push(f);
    }
    b.prepare_constants(&modulus);
    Normalized { residue: v, flags }
}

/// S (N bits) and K (N-1 bits, weight offset 1) to the residue R in [0, M).
pub fn build_final_normalizer(
    ctx: &ModulusContext,
) -> Result<(Circuit, NormalizerLayout), BuildError> {
    let n = ctx.n as usize;
    let mut b = CircuitBuilder::new();
    b.note(context_note(ctx));
    let s = b.operand("S", n, true);
    let k = b.operand("K", n - 1, true);
    let out = emit_normalizer(&mut b, &s, &k, ctx);
    b.mark_result("R", &out.residue);
    b.mark_result("F", &out.flags);
    let c = b.finish();
    let layout = Layout::new(&c, vec![("R".into(), 0)]);
    Ok((
        c,
        NormalizerLayout {
            layout,
            stages: normalizer_stages(ctx),
        },
    ))
}
