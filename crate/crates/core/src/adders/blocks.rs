use crate::builder::CircuitBuilder;
use crate::circuit::Circuit;

/// c <- a^b^c, d <- d ^ maj(a,b,c)
pub(crate) fn qfa(b: &mut CircuitBuilder, a: usize, bb: usize, c: usize, d: usize) {
    b.ccx(bb, c, d);
    b.cx(bb, c);
    b.ccx(a, c, d);
    b.cx(a, c);
}

/// d <- d ^ maj(a,b,c); a, b, c unchanged
pub(crate) fn qmg(b: &mut CircuitBuilder, a: usize, bb: usize, c: usize, d: usize) {
    b.ccx(bb, c, d);
    b.cx(bb, c);
    b.ccx(a, c, d);
    b.cx(bb, c);
}

/// bb <- a^bb, c <- c ^ (a & bb)
pub(crate) fn qha(b: &mut CircuitBuilder, a: usize, bb: usize, c: usize) {
    b.ccx(a, bb, c);
    b.cx(a, bb);
}

/// t <- x ^ y ^ t
pub(crate) fn sum3(b: &mut CircuitBuilder, x: usize, y: usize, t: usize) {
    b.cx(x, t);
    b.cx(y, t);
}

fn one_bit(b: &mut CircuitBuilder, name: &str, preserved: bool) -> usize {
    b.operand(name, 1, preserved)[0]
}

/// Wires A, B, C, D = 0..4; C ends as the sum, D as D xor carry.
pub fn build_qfa() -> Circuit {
    let mut b = CircuitBuilder::new();
    let a = one_bit(&mut b, "A", true);
    let bb = one_bit(&mut b, "B", true);
    let c = one_bit(&mut b, "C", false);
    let d = one_bit(&mut b, "D", false);
    qfa(&mut b, a, bb, c, d);
    b.finish()
}

pub fn build_qmg() -> Circuit {
    let mut b = CircuitBuilder::new();
    let a = one_bit(&mut b, "A", true);
    let bb = one_bit(&mut b, "B", true);
    let c = one_bit(&mut b, "C", true);
    let d = one_bit(&mut b, "D", false);
    qmg(&mut b, a, bb, c, d);
    b.finish()
}

/// Wires A, B, C = 0..3; B ends as the sum, C as C xor carry.
pub fn build_qha() -> Circuit {
    let mut b = CircuitBuilder::new();
    let a = one_bit(&mut b, "A", true);
    let bb = one_bit(&mut b, "B", false);
    let c = one_bit(&mut b, "C", false);
    qha(&mut b, a, bb, c);
    b.finish()
}

/// Three-input xor onto wire 2.
pub fn build_sum() -> Circuit {
    let mut b = CircuitBuilder::new();
    let a = one_bit(&mut b, "A", true);
    let bb = one_bit(&mut b, "B", true);
    let t = one_bit(&mut b, "C", false);
    sum3(&mut b, a, bb, t);
    b.finish()
}
