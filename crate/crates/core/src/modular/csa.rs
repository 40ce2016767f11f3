use crate::adders::compress::{compress_in_place, Row};
use crate::builder::CircuitBuilder;
use crate::circuit::Circuit;
use crate::error::BuildError;
use crate::layout::Layout;
use crate::modular::{FoldConstants, ModulusContext};

/// The two carries that meet at weight 2^(N-1) in the fourth stage, and the
/// gate index at which they are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probe {
    pub gate: usize,
    pub wires: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct ModCsaLayout {
    pub layout: Layout,
    pub probe: Option<Probe>,
}

pub(crate) struct ModOutput {
    /// Weights 2^0 .. 2^(N-1).
    pub s: Vec<usize>,
    /// Weights 2^1 .. 2^(N-1).
    pub k: Vec<usize>,
    pub probe: Option<Probe>,
}

/// `h * value` as a row of Toffolis against the constant wires.
fn fold_row(b: &mut CircuitBuilder, h: Option<usize>, consts: &[usize], value: u64) -> Row {
    let Some(h) = h else {
        return Row::default();
    };
    let bits = (0..consts.len())
        .filter(|&k| (value >> k) & 1 == 1)
        .map(|k| {
            let t = b.ancilla();
            b.ccx(h, consts[k], t);
            (k as u32, t)
        })
        .collect();
    Row::new(bits)
}

/// Up to three rows with weights below 2^N to a fresh (S, K) pair congruent
/// mod M whose value is below 2^N. Inputs and all scratch wires are restored.
pub(crate) fn mod_compress(
    b: &mut CircuitBuilder,
    rows: &[&Row],
    ctx: &ModulusContext,
    consts: &FoldConstants,
) -> ModOutput {
    let top = ctx.n - 1;
    debug_assert!(rows.iter().all(|r| r.max_pos().is_none_or(|p| p <= top)));
    let start = b.mark();
    let mut fresh = |b: &mut CircuitBuilder| b.ancilla();

    let st1 = compress_in_place(b, rows, None, &mut fresh);
    let (s1, s1_hi) = st1.sum.split_at(top);
    let (k1, k1_hi) = st1.carry.split_at(top);
    let p_from_sum = fold_row(b, s1_hi.at(top), &consts.p, ctx.p);
    let p_from_carry = fold_row(b, k1_hi.at(top), &consts.p, ctx.p);
    let q_row = fold_row(b, k1_hi.at(top + 1), &consts.q, ctx.q);

    let st2 = compress_in_place(b, &[&s1, &k1, &q_row], None, &mut fresh);
    let st3 = compress_in_place(b, &[&st2.sum, &st2.carry, &p_from_sum], None, &mut fresh);
    let probe = match (st2.carry.at(top), st3.carry.at(top)) {
        (Some(x), Some(y)) => Some(Probe {
            gate: b.mark(),
            wires: [x, y],
        }),
        _ => None,
    };
    // Those two carries are never both set, so the top column needs no carry.
    let st4 = compress_in_place(
        b,
        &[&st3.sum, &st3.carry, &p_from_carry],
        Some(top),
        &mut fresh,
    );

    let (mut s, mut k) = (st4.sum, st4.carry);
    for _ in 0..ctx.trim_passes() {
        let (s_lo, s_hi) = s.split_at(top);
        let (k_lo, k_hi) = k.split_at(top);
        let f1 = fold_row(b, s_hi.at(top), &consts.p, ctx.p);
        let f2 = fold_row(b, k_hi.at(top), &consts.p, ctx.p);
        let a = compress_in_place(b, &[&s_lo, &f1, &f2], None, &mut fresh);
        let c = compress_in_place(b, &[&a.sum, &a.carry, &k_lo], None, &mut fresh);
        s = c.sum;
        k = c.carry;
    }
    debug_assert!(s.max_pos().is_none_or(|p| p <= top));
    debug_assert!(k.max_pos().is_none_or(|p| p <= top));
    let forward = b.since(start);

    let out_s = b.ancillas(ctx.n as usize);
    let out_k = b.ancillas(ctx.n as usize - 1);
    for &(p, w) in s.bits() {
        b.cx(w, out_s[p as usize]);
    }
    for &(p, w) in k.bits() {
        b.cx(w, out_k[p as usize - 1]);
    }
    b.undo(forward);
    ModOutput {
        s: out_s,
        k: out_k,
        probe,
    }
}

/// Greedy triples of modular compressors; every non-final unit is uncomputed.
pub(crate) fn mod_tree(
    b: &mut CircuitBuilder,
    rows: Vec<Row>,
    ctx: &ModulusContext,
    consts: &FoldConstants,
) -> ModOutput {
    let mut live: Vec<Row> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut units = Vec::new();
    while live.len() > 3 {
        let mut next = Vec::new();
        for chunk in live.chunks(3) {
            if chunk.len() < 3 {
                next.extend(chunk.iter().cloned());
                continue;
            }
            let start = b.mark();
            let out = mod_compress(b, &[&chunk[0], &chunk[1], &chunk[2]], ctx, consts);
            units.push(b.since(start));
            next.push(Row::from_wires(&out.s, 0));
            next.push(Row::from_wires(&out.k, 1));
        }
        live = next;
    }
    let refs: Vec<&Row> = live.iter().collect();
    let mut out = mod_compress(b, &refs, ctx, consts);
    out.probe = None;
    for u in units.into_iter().rev() {
        b.undo(u);
    }
    out
}

pub(crate) fn context_note(ctx: &ModulusContext) -> String {
    format!(
        "N {} M {} P {} Q {} trims {}",
        ctx.n,
        ctx.m,
        ctx.p,
        ctx.q,
        ctx.trim_passes()
    )
}

/// A, B, C of N bits each to S (N bits) and K (N-1 bits at weight offset 1).
pub fn build_mod_csa(ctx: &ModulusContext) -> Result<(Circuit, ModCsaLayout), BuildError> {
    let n = ctx.n as usize;
    let mut b = CircuitBuilder::new();
    b.note(context_note(ctx));
    let consts = FoldConstants::alloc(&mut b, ctx);
    let rows: Vec<Row> = ["A", "B", "C"]
        .iter()
        .map(|r| Row::from_wires(&b.operand(r, n, true), 0))
        .collect();
    let out = mod_compress(&mut b, &[&rows[0], &rows[1], &rows[2]], ctx, &consts);
    consts.release(&mut b);
    b.mark_result("S", &out.s);
    b.mark_result("K", &out.k);
    let c = b.finish();
    let layout = Layout::new(&c, vec![("S".into(), 0), ("K".into(), 1)]);
    Ok((
        c,
        ModCsaLayout {
            layout,
            probe: out.probe,
        },
    ))
}
