use crate::adders::blocks::{qmg, sum3};
use crate::adders::BuildError;
use crate::builder::CircuitBuilder;
use crate::circuit::{Circuit, WireRole};
use crate::layout::Layout;

/// `bb <- a + bb (mod 2^n)`, carry into `carry_out` when given.
/// `carries[0]` is the carry-in and must be 0; all of `carries` end as they started.
pub(crate) fn emit_ripple(
    b: &mut CircuitBuilder,
    a: &[usize],
    bb: &[usize],
    carries: &[usize],
    carry_out: Option<usize>,
) {
    let n = a.len();
    assert!(bb.len() == n && carries.len() == n);
    let next = |i: usize| {
        if i + 1 < n {
            Some(carries[i + 1])
        } else {
            carry_out
        }
    };
    for i in 0..n {
        if let Some(t) = next(i) {
            qmg(b, carries[i], a[i], bb[i], t);
        }
    }
    for i in (0..n).rev() {
        if i + 1 < n {
            qmg(b, carries[i], a[i], bb[i], carries[i + 1]);
        }
        sum3(b, carries[i], a[i], bb[i]);
    }
}

/// Wires interleave per slice as (carry_i, A_i, B_i), then the carry-out.
pub fn build_ripple_adder(n: usize) -> Result<(Circuit, Layout), BuildError> {
    if n == 0 {
        return Err(BuildError::ZeroWidth);
    }
    let mut b = CircuitBuilder::new();
    let mut a = Vec::with_capacity(n);
    let mut bb = Vec::with_capacity(n);
    let mut carries = Vec::with_capacity(n);
    for i in 0..n {
        carries.push(b.ancilla());
        a.push(b.alloc(WireRole::Operand {
            register: "A".into(),
            bit: i,
            preserved: true,
        }));
        bb.push(b.alloc(WireRole::Operand {
            register: "B".into(),
            bit: i,
            preserved: false,
        }));
    }
    let co = b.ancilla();
    b.name_register("A", a.clone());
    b.name_register("B", bb.clone());
    b.mark_carry_out("CO", &[co]);
    emit_ripple(&mut b, &a, &bb, &carries, Some(co));
    let c = b.finish();
    let layout = Layout::new(&c, vec![("B".into(), 0), ("CO".into(), n as u32)]);
    Ok((c, layout))
}
