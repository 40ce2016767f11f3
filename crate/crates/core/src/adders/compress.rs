//! Bit rows with arbitrary weights, and the in-place 3->2 step shared by the
//! tree adder, the multiplier and the modular compressor.

use std::collections::BTreeMap;

use crate::adders::blocks::{qfa, qha};
use crate::builder::CircuitBuilder;
use crate::circuit::Gate;

/// Wires tagged with their bit weight, ascending and unique by weight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Row {
    bits: Vec<(u32, usize)>,
}

impl Row {
    pub fn new(mut bits: Vec<(u32, usize)>) -> Self {
        bits.sort_unstable_by_key(|b| b.0);
        debug_assert!(bits.windows(2).all(|p| p[0].0 < p[1].0), "duplicate weight");
        Row { bits }
    }

    pub fn from_wires(wires: &[usize], offset: u32) -> Self {
        Row {
            bits: wires
                .iter()
                .enumerate()
                .map(|(i, &w)| (offset + i as u32, w))
                .collect(),
        }
    }

    pub fn bits(&self) -> &[(u32, usize)] {
        &self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn min_pos(&self) -> Option<u32> {
        self.bits.first().map(|b| b.0)
    }

    pub fn max_pos(&self) -> Option<u32> {
        self.bits.last().map(|b| b.0)
    }

    pub fn at(&self, pos: u32) -> Option<usize> {
        self.bits
            .binary_search_by_key(&pos, |b| b.0)
            .ok()
            .map(|i| self.bits[i].1)
    }

    pub fn wires(&self) -> Vec<usize> {
        self.bits.iter().map(|b| b.1).collect()
    }

    /// Splits at `pos`: bits below, and bits at or above.
    pub fn split_at(&self, pos: u32) -> (Row, Row) {
        let (lo, hi): (Vec<_>, Vec<_>) = self.bits.iter().partition(|b| b.0 < pos);
        (Row { bits: lo }, Row { bits: hi })
    }

    /// Contiguous wire list from the lowest weight up; gaps become fresh wires.
    pub fn dense(&self, b: &mut CircuitBuilder) -> (Vec<usize>, u32) {
        let Some(lo) = self.min_pos() else {
            return (Vec::new(), 0);
        };
        let hi = self.max_pos().unwrap_or(lo);
        let wires = (lo..=hi)
            .map(|p| self.at(p).unwrap_or_else(|| b.ancilla()))
            .collect();
        (wires, lo)
    }
}

/// Wires per weight, in row order.
pub(crate) fn columns(rows: &[&Row]) -> BTreeMap<u32, Vec<usize>> {
    let mut cols: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for r in rows {
        for &(p, w) in r.bits() {
            cols.entry(p).or_default().push(w);
        }
    }
    cols
}

pub(crate) struct Compressed {
    pub sum: Row,
    pub carry: Row,
    /// CNOTs that put the overwritten input wires back while keeping the carries.
    pub restore: Vec<Gate>,
}

/// Sums land on the last wire of each column, carries on fresh wires from `fresh`.
/// At weight `xor_only` a two-bit column is combined by one CNOT with no carry.
pub(crate) fn compress_in_place(
    b: &mut CircuitBuilder,
    rows: &[&Row],
    xor_only: Option<u32>,
    fresh: &mut dyn FnMut(&mut CircuitBuilder) -> usize,
) -> Compressed {
    assert!(rows.len() <= 3, "3->2 step takes at most three rows");
    let mut sum = Vec::new();
    let mut carry = Vec::new();
    let mut restore = Vec::new();
    for (pos, ws) in columns(rows) {
        match ws[..] {
            [x, y, z] => {
                assert_ne!(xor_only, Some(pos), "three bits at a carry-free weight");
                let k = fresh(b);
                qfa(b, x, y, z, k);
                sum.push((pos, z));
                carry.push((pos + 1, k));
                restore.extend([Gate::cnot(x, z), Gate::cnot(y, z)]);
            }
            [x, y] => {
                if xor_only == Some(pos) {
                    b.cx(x, y);
                } else {
                    let k = fresh(b);
                    qha(b, x, y, k);
                    carry.push((pos + 1, k));
                }
                sum.push((pos, y));
                restore.push(Gate::cnot(x, y));
            }
            [x] => sum.push((pos, x)),
            _ => unreachable!(),
        }
    }
    Compressed {
        sum: Row::new(sum),
        carry: Row::new(carry),
        restore,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_queries() {
        let r = Row::new(vec![(3, 10), (1, 11)]);
        assert_eq!(r.min_pos(), Some(1));
        assert_eq!(r.at(3), Some(10));
        assert_eq!(r.at(2), None);
        let (lo, hi) = r.split_at(2);
        assert_eq!(lo.wires(), vec![11]);
        assert_eq!(hi.wires(), vec![10]);
        let mut b = CircuitBuilder::new();
        b.ancillas(12);
        let (ws, off) = r.dense(&mut b);
        assert_eq!((ws.len(), off), (3, 1));
        assert_eq!(ws[0], 11);
        assert_eq!(ws[2], 10);
    }
}
