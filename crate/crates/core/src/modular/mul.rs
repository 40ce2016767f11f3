use crate::adders::compress::Row;
use crate::builder::CircuitBuilder;
use crate::circuit::Circuit;
use crate::error::BuildError;
use crate::layout::Layout;
use crate::modular::csa::{context_note, mod_tree};
use crate::modular::{FoldConstants, ModulusContext};

/// First-fit packing of weighted bits into rows with distinct weights.
pub(crate) fn pack_rows(bits: &[(u32, usize)]) -> Vec<Row> {
    let mut rows: Vec<Vec<(u32, usize)>> = Vec::new();
    for &(p, w) in bits {
        match rows.iter_mut().find(|r| r.iter().all(|b| b.0 != p)) {
            Some(r) => r.push((p, w)),
            None => rows.push(vec![(p, w)]),
        }
    }
    rows.into_iter().map(Row::new).collect()
}

/// Weighted wires of a carry-save operand: S at 2^i, K at 2^(i+1).
pub(crate) fn operand_bits(s: &[usize], k: &[usize]) -> Vec<(u32, usize)> {
    s.iter()
        .enumerate()
        .map(|(i, &w)| (i as u32, w))
        .chain(k.iter().enumerate().map(|(i, &w)| (i as u32 + 1, w)))
        .collect()
}

/// X, Y in carry-save form below 2^N to (PS, PK) congruent to X*Y mod M.
/// Each product bit x_p*y_q stands for the classical constant 2^(p+q) mod M.
pub fn build_mod_multiplier(ctx: &ModulusContext) -> Result<(Circuit, Layout), BuildError> {
    let n = ctx.n as usize;
    let mut b = CircuitBuilder::new();
    b.note(context_note(ctx));
    let consts = FoldConstants::alloc(&mut b, ctx);
    let xs = b.operand("XS", n, true);
    let xk = b.operand("XK", n - 1, true);
    let ys = b.operand("YS", n, true);
    let yk = b.operand("YK", n - 1, true);

    let mut terms = Vec::new();
    for &(px, x) in &operand_bits(&xs, &xk) {
        for &(py, y) in &operand_bits(&ys, &yk) {
            let c = ctx.pow2(px + py);
            for bit in 0..ctx.n - 2 {
                if (c >> bit) & 1 == 1 {
                    terms.push((bit, x, y, b.ancilla()));
                }
            }
        }
    }
    let start = b.mark();
    for &(_, x, y, t) in &terms {
        b.ccx(x, y, t);
    }
    let create = b.since(start);
    let bits: Vec<(u32, usize)> = terms.iter().map(|&(p, _, _, t)| (p, t)).collect();
    let out = mod_tree(&mut b, pack_rows(&bits), ctx, &consts);
    b.undo(create);
    consts.release(&mut b);
    b.mark_result("PS", &out.s);
    b.mark_result("PK", &out.k);
    let c = b.finish();
    let layout = Layout::new(&c, vec![("PS".into(), 0), ("PK".into(), 1)]);
    Ok((c, layout))
}
