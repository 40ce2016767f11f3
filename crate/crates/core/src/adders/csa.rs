use crate::adders::blocks::qfa;
use crate::adders::tree::build_tree_named;
use crate::adders::BuildError;
use crate::builder::CircuitBuilder;
use crate::circuit::{Circuit, WireRole};
use crate::layout::Layout;

/// One QFA per slice. C is overwritten with the sum vector; K gets carries at weight 2^(i+1).
pub fn build_csa_3to2(n: usize) -> Result<(Circuit, Layout), BuildError> {
    if n == 0 {
        return Err(BuildError::ZeroWidth);
    }
    let mut b = CircuitBuilder::new();
    let mut regs: [Vec<usize>; 4] = Default::default();
    for i in 0..n {
        for (r, (name, preserved)) in [("A", true), ("B", true), ("C", false)].iter().enumerate() {
            regs[r].push(b.alloc(WireRole::Operand {
                register: name.to_string(),
                bit: i,
                preserved: *preserved,
            }));
        }
        regs[3].push(b.alloc(WireRole::Result {
            register: "K".into(),
            bit: i,
        }));
    }
    for (name, ws) in ["A", "B", "C", "K"].iter().zip(&regs) {
        b.name_register(name, ws.clone());
    }
    for (((&a, &bb), &c), &k) in regs[0].iter().zip(&regs[1]).zip(&regs[2]).zip(&regs[3]) {
        qfa(&mut b, a, bb, c, k);
    }
    let c = b.finish();
    let layout = Layout::new(&c, vec![("C".into(), 0), ("K".into(), 1)]);
    Ok((c, layout))
}

/// Four n-bit inputs to (S, K), all inputs preserved. Width 6n plus one boundary sum wire.
pub fn build_csa_4to2(n: usize) -> Result<(Circuit, Layout), BuildError> {
    if n == 0 {
        return Err(BuildError::ZeroWidth);
    }
    build_tree_named(&["A", "B", "C", "D"], n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run, BasisState};

    #[test]
    fn all_sevens() {
        let (c, l) = build_csa_3to2(3).unwrap();
        assert_eq!(c.width(), 12);
        let mut s = BasisState::zeros(12);
        for r in ["A", "B", "C"] {
            s.write(c.register(r).unwrap(), 7);
        }
        let out = run(&c, &s).unwrap();
        assert_eq!(out.read(c.register("C").unwrap()), 7);
        assert_eq!(out.read(c.register("K").unwrap()), 7);
        let vals = [("C", 7), ("K", 7)]
            .map(|(k, v)| (k.to_string(), v))
            .into_iter()
            .collect();
        assert_eq!(l.output_value(&vals), 21);
    }

    #[test]
    fn four_to_two_value() {
        let (c, l) = build_csa_4to2(3).unwrap();
        assert_eq!(c.width(), 6 * 3 + 1);
        let mut s = BasisState::zeros(c.width());
        for (r, v) in [("A", 5), ("B", 6), ("C", 3), ("D", 7)] {
            s.write(c.register(r).unwrap(), v);
        }
        let out = run(&c, &s).unwrap();
        let vals = c
            .registers()
            .iter()
            .map(|(k, ws)| (k.clone(), out.read(ws)))
            .collect();
        assert_eq!(l.output_value(&vals), 21);
        assert!(build_csa_4to2(0).is_err());
    }
}
