//! Carry-save multiplier: Toffoli partial products, tree reduction, Toffoli uncompute.

use std::ops::Range;

use num_rational::Rational64;

use crate::adders::compress::Row;
use crate::adders::tree::reduce_rows;
use crate::builder::CircuitBuilder;
use crate::circuit::Circuit;
use crate::error::BuildError;
use crate::layout::Layout;

/// Which half of a carry-save operand a bit comes from. Carry bits weigh one place more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Half {
    Sum,
    Carry,
}

impl Half {
    pub fn offset(self) -> u32 {
        match self {
            Half::Sum => 0,
            Half::Carry => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialProductTerm {
    pub x: (Half, usize),
    pub y: (Half, usize),
    pub shift: u32,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialProductPlan {
    pub n: usize,
    pub terms: Vec<PartialProductTerm>,
    pub rows: usize,
}

impl PartialProductPlan {
    pub fn row(&self, r: usize) -> impl Iterator<Item = &PartialProductTerm> {
        self.terms.iter().filter(move |t| t.row == r)
    }
}

/// One row per (y bit, x half): YS0·XS, YS0·XK, YS1·XS, ... then the YK bits.
pub fn plan_partial_products(n: usize) -> Result<PartialProductPlan, BuildError> {
    if n == 0 {
        return Err(BuildError::ZeroWidth);
    }
    let mut terms = Vec::with_capacity(4 * n * n);
    let mut row = 0;
    for yh in [Half::Sum, Half::Carry] {
        for j in 0..n {
            for xh in [Half::Sum, Half::Carry] {
                for i in 0..n {
                    terms.push(PartialProductTerm {
                        x: (xh, i),
                        y: (yh, j),
                        shift: (i + j) as u32 + xh.offset() + yh.offset(),
                        row,
                    });
                }
                row += 1;
            }
        }
    }
    Ok(PartialProductPlan {
        n,
        terms,
        rows: row,
    })
}

#[derive(Debug, Clone)]
pub struct MultiplierLayout {
    pub layout: Layout,
    pub plan: PartialProductPlan,
    pub create: Range<usize>,
    pub destroy: Range<usize>,
    /// QFA-weighted depth of the reduction tree built on its own.
    pub tree_depth: Rational64,
}

/// `copies` wires carrying the value of `src`, made by a CNOT doubling tree.
pub(crate) fn fan_out(b: &mut CircuitBuilder, src: usize, copies: usize) -> Vec<usize> {
    let mut out = vec![src];
    while out.len() < copies {
        let have = out.len();
        for i in 0..have.min(copies - have) {
            let w = b.ancilla();
            b.cx(out[i], w);
            out.push(w);
        }
    }
    out
}

fn tree_only_depth(row_shapes: &[Vec<u32>], n: usize) -> Rational64 {
    let mut b = CircuitBuilder::new();
    let rows = row_shapes
        .iter()
        .map(|ps| Row::new(ps.iter().map(|&p| (p, b.ancilla())).collect()))
        .collect();
    reduce_rows(&mut b, rows, n);
    b.finish().qfa_depth()
}

/// Operands XS, XK, YS, YK are n bits each, K halves at weight offset 1.
/// Product lands in PS and PK.
pub fn build_cs_multiplier(n: usize) -> Result<(Circuit, MultiplierLayout), BuildError> {
    let plan = plan_partial_products(n)?;
    let mut b = CircuitBuilder::new();
    let xs = b.operand("XS", n, true);
    let xk = b.operand("XK", n, true);
    let ys = b.operand("YS", n, true);
    let yk = b.operand("YK", n, true);
    let pick = |h: Half, s: &[usize], k: &[usize], i: usize| match h {
        Half::Sum => s[i],
        Half::Carry => k[i],
    };

    // Every x bit feeds 2n Toffolis and so does every y bit; fan out so the
    // create layer is wire-disjoint.
    let copies = 2 * n;
    let fan_start = b.mark();
    let mut xcopies = Vec::new();
    let mut ycopies = Vec::new();
    for h in [Half::Sum, Half::Carry] {
        for i in 0..n {
            let xw = pick(h, &xs, &xk, i);
            xcopies.push(fan_out(&mut b, xw, copies));
            let yw = pick(h, &ys, &yk, i);
            ycopies.push(fan_out(&mut b, yw, copies));
        }
    }
    let fan = b.since(fan_start);
    let idx = |h: Half, i: usize| h.offset() as usize * n + i;

    let mut rows: Vec<Vec<(u32, usize)>> = vec![Vec::new(); plan.rows];
    let targets: Vec<usize> = plan.terms.iter().map(|_| b.ancilla()).collect();
    let create_start = b.mark();
    for (t, &target) in plan.terms.iter().zip(&targets) {
        // x copy chosen by the y bit's slot and vice versa, so no two Toffolis share a control.
        let xw = xcopies[idx(t.x.0, t.x.1)][idx(t.y.0, t.y.1)];
        let yw = ycopies[idx(t.y.0, t.y.1)][idx(t.x.0, t.x.1)];
        b.ccx(xw, yw, target);
        rows[t.row].push((t.shift, target));
    }
    let create = b.since(create_start);

    let shapes: Vec<Vec<u32>> = rows
        .iter()
        .map(|r| r.iter().map(|b| b.0).collect())
        .collect();
    let red = reduce_rows(&mut b, rows.into_iter().map(Row::new).collect(), n);

    let destroy_start = b.mark();
    b.undo(create.clone());
    let destroy = b.since(destroy_start);
    b.undo(fan);

    let (ps, ps_off) = red.sum.dense(&mut b);
    let (pk, pk_off) = red.carry.dense(&mut b);
    b.mark_result("PS", &ps);
    b.mark_result("PK", &pk);
    b.note(format!(
        "carry-save multiplier n {n}, {} partial-product rows",
        plan.rows
    ));
    let c = b.finish();
    let layout = Layout::new(&c, vec![("PS".into(), ps_off), ("PK".into(), pk_off)]);
    Ok((
        c,
        MultiplierLayout {
            layout,
            plan,
            create,
            destroy,
            tree_depth: tree_only_depth(&shapes, n),
        },
    ))
}

/// Value of a carry-save operand pair.
pub fn cs_operand(s: u128, k: u128) -> u128 {
    s + 2 * k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run, BasisState};

    #[test]
    fn plan_sizes() {
        let p = plan_partial_products(1).unwrap();
        assert_eq!(p.terms.len(), 4);
        let p = plan_partial_products(2).unwrap();
        assert_eq!(p.terms.len(), 16);
        assert_eq!(p.rows, 8);
        for r in 0..p.rows {
            let shifts: Vec<u32> = p.row(r).map(|t| t.shift).collect();
            assert_eq!(shifts.len(), 2);
            assert_ne!(shifts[0], shifts[1]);
        }
        assert!(plan_partial_products(0).is_err());
    }

    #[test]
    fn three_times_three() {
        let (c, m) = build_cs_multiplier(2).unwrap();
        let mut s = BasisState::zeros(c.width());
        s.write(c.register("XS").unwrap(), 3);
        s.write(c.register("YS").unwrap(), 1);
        s.write(c.register("YK").unwrap(), 1);
        let out = run(&c, &s).unwrap();
        let vals = c
            .registers()
            .iter()
            .map(|(k, ws)| (k.clone(), out.read(ws)))
            .collect();
        assert_eq!(m.layout.output_value(&vals), 9);
    }

    #[test]
    fn destroy_mirrors_create() {
        let (c, m) = build_cs_multiplier(2).unwrap();
        let create = &c.gates()[m.create.clone()];
        let destroy: Vec<_> = c.gates()[m.destroy.clone()].iter().rev().copied().collect();
        assert_eq!(create, &destroy[..]);
        assert_eq!(create.len(), 16);
    }

    #[test]
    fn depth_is_tree_plus_one_qfa() {
        for n in 1..=4 {
            let (c, m) = build_cs_multiplier(n).unwrap();
            assert_eq!(
                c.qfa_depth(),
                m.tree_depth + Rational64::from_integer(1),
                "n={n}"
            );
        }
    }
}
