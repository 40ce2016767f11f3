use std::ops::Range;

use crate::adders::blocks::qmg;
use crate::adders::compress::{columns, compress_in_place, Row};
use crate::builder::CircuitBuilder;
use crate::circuit::{Circuit, Gate};
use crate::error::BuildError;
use crate::layout::Layout;

pub(crate) struct Reduced {
    pub sum: Row,
    pub carry: Row,
    /// Number of 3->2 levels before the final stage.
    pub levels: usize,
}

struct Group {
    gates: Range<usize>,
    restore: Vec<Gate>,
    carry_id: Option<usize>,
}

/// Reduces rows to (sum, carry) with every input wire restored and every
/// intermediate wire cleared. Carry wires past `row_width` in one row are
/// flagged as boundary wires.
pub(crate) fn reduce_rows(b: &mut CircuitBuilder, inputs: Vec<Row>, row_width: usize) -> Reduced {
    let mut live: Vec<(usize, Row)> = inputs
        .into_iter()
        .filter(|r| !r.is_empty())
        .enumerate()
        .collect();
    let mut next_id = live.len();
    let mut groups: Vec<Group> = Vec::new();
    let mut levels = 0;
    let fresh_row = |b: &mut CircuitBuilder, count: &mut usize| {
        let w = b.ancilla();
        if *count >= row_width {
            b.set_boundary(w);
        }
        *count += 1;
        w
    };

    while live.len() > 3 {
        levels += 1;
        live.sort_by_key(|(id, r)| (r.min_pos(), *id));
        let mut next = Vec::new();
        for chunk in live.chunks(3) {
            if chunk.len() < 3 {
                next.extend(chunk.iter().cloned());
                continue;
            }
            let start = b.mark();
            let mut count = 0;
            let rows = [&chunk[0].1, &chunk[1].1, &chunk[2].1];
            let out = compress_in_place(b, &rows, None, &mut |b| fresh_row(b, &mut count));
            let gates = b.since(start);
            let (sid, kid) = (next_id, next_id + 1);
            next_id += 2;
            if !out.sum.is_empty() {
                next.push((sid, out.sum));
            }
            let carry_id = (!out.carry.is_empty()).then(|| {
                next.push((kid, out.carry));
                kid
            });
            groups.push(Group {
                gates,
                restore: out.restore,
                carry_id,
            });
        }
        live = next;
    }

    live.sort_by_key(|(id, r)| (r.min_pos(), *id));
    // The last group's carry row takes the final sum; its carries are never read again.
    let absorb_id = groups.last().and_then(|g| g.carry_id);
    let absorb =
        absorb_id.and_then(|id| live.iter().find(|(i, _)| *i == id).map(|(_, r)| r.clone()));
    let rows: Vec<&Row> = live.iter().map(|(_, r)| r).collect();
    let cols = columns(&rows);

    let mut count = 0;
    let mut kbits = Vec::new();
    for (&pos, ws) in &cols {
        match ws[..] {
            [x, y, z] => {
                let k = fresh_row(b, &mut count);
                qmg(b, x, y, z, k);
                kbits.push((pos + 1, k));
            }
            [x, y] => {
                let k = fresh_row(b, &mut count);
                b.ccx(x, y, k);
                kbits.push((pos + 1, k));
            }
            _ => {}
        }
    }
    let mut sbits = Vec::new();
    for (&pos, ws) in &cols {
        let target = match absorb.as_ref().and_then(|r| r.at(pos)) {
            Some(z) => z,
            None => {
                let s = b.ancilla();
                if absorb.is_some() {
                    b.set_boundary(s);
                }
                s
            }
        };
        for &w in ws {
            if w != target {
                b.cx(w, target);
            }
        }
        sbits.push((pos, target));
    }

    for (i, g) in groups.iter().enumerate().rev() {
        if absorb.is_some() && i + 1 == groups.len() {
            for &gate in &g.restore {
                b.gate(gate);
            }
        } else {
            b.undo(g.gates.clone());
        }
    }
    Reduced {
        sum: Row::new(sbits),
        carry: Row::new(kbits),
        levels,
    }
}

/// Letters while they cannot collide with the S and K outputs.
pub(crate) fn input_names(n: usize) -> Vec<String> {
    if n <= 10 {
        (0..n)
            .map(|i| char::from(b'A' + i as u8).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("I{i}")).collect()
    }
}

pub(crate) fn build_tree_named<S: AsRef<str>>(
    names: &[S],
    l: usize,
) -> Result<(Circuit, Layout), BuildError> {
    let mut b = CircuitBuilder::new();
    let rows = names
        .iter()
        .map(|n| Row::from_wires(&b.operand(n.as_ref(), l, true), 0))
        .collect();
    let red = reduce_rows(&mut b, rows, l);
    let (s, s_off) = red.sum.dense(&mut b);
    let (k, k_off) = red.carry.dense(&mut b);
    b.mark_result("S", &s);
    b.mark_result("K", &k);
    b.note(format!(
        "inputs {} width {} levels {}",
        names.len(),
        l,
        red.levels
    ));
    let c = b.finish();
    let layout = Layout::new(&c, vec![("S".into(), s_off), ("K".into(), k_off)]);
    Ok((c, layout))
}

/// N inputs of L bits to a carry-save pair; every input is passed through.
pub fn build_tree_adder(n_inputs: usize, l: usize) -> Result<(Circuit, Layout), BuildError> {
    if n_inputs < 3 {
        return Err(BuildError::TooFewInputs(n_inputs));
    }
    if l == 0 {
        return Err(BuildError::ZeroWidth);
    }
    build_tree_named(&input_names(n_inputs), l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run, BasisState};
    use num_rational::Rational64;

    fn core_wires(c: &Circuit) -> usize {
        c.width() - c.boundary().len()
    }

    #[test]
    fn eight_inputs_one_to_eight() {
        let (c, l) = build_tree_adder(8, 2).unwrap();
        let mut s = BasisState::zeros(c.width());
        for (i, name) in input_names(8).iter().enumerate() {
            s.write(c.register(name).unwrap(), (i as u128 + 1) % 4);
        }
        let out = run(&c, &s).unwrap();
        let vals = c
            .registers()
            .iter()
            .map(|(k, ws)| (k.clone(), out.read(ws)))
            .collect();
        let want: u128 = (1..=8).map(|v| v % 4).sum();
        assert_eq!(l.output_value(&vals), want);
    }

    #[test]
    fn core_count_matches_closed_form() {
        for n in [4, 8, 16] {
            for l in 1..=4 {
                let (c, _) = build_tree_adder(n, l).unwrap();
                assert_eq!(core_wires(&c), (2 * n - 2) * l, "N={n} L={l}");
            }
        }
    }

    #[test]
    fn depth_grows_by_four() {
        let d: Vec<Rational64> = [4, 8, 16]
            .iter()
            .map(|&n| build_tree_adder(n, 4).unwrap().0.qfa_depth())
            .collect();
        assert_eq!(d[1] - d[0], Rational64::from_integer(4));
        assert_eq!(d[2] - d[1], Rational64::from_integer(4));
    }

    #[test]
    fn rejects_small() {
        assert_eq!(
            build_tree_adder(2, 4).unwrap_err(),
            BuildError::TooFewInputs(2)
        );
        assert_eq!(build_tree_adder(3, 0).unwrap_err(), BuildError::ZeroWidth);
    }
}
