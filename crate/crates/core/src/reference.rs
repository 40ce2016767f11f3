//! Classical oracles.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
}

/// (sum, carry-out)
pub fn classical_full_add(a: bool, b: bool, cin: bool) -> (bool, bool) {
    (a ^ b ^ cin, (a & b) | (a & cin) | (b & cin))
}

/// (sum, carry-out)
pub fn classical_half_add(a: bool, b: bool) -> (bool, bool) {
    (a ^ b, a & b)
}

/// An integer held as two weighted bit vectors; `carry_bits[i]` weighs `2^(i + offset)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrySaveNumber {
    pub sum_bits: Vec<bool>,
    pub carry_bits: Vec<bool>,
    pub offset: u32,
}

impl CarrySaveNumber {
    pub fn from_values(sum: u128, carry: u128, width: usize, offset: u32) -> Self {
        let bits = |v: u128| (0..width).map(|i| (v >> i) & 1 == 1).collect();
        CarrySaveNumber {
            sum_bits: bits(sum),
            carry_bits: bits(carry),
            offset,
        }
    }

    pub fn value(&self) -> BigUint {
        cs_value(self)
    }
}

pub fn cs_value(x: &CarrySaveNumber) -> BigUint {
    let mut v = BigUint::zero();
    for (i, &b) in x.sum_bits.iter().enumerate() {
        if b {
            v.set_bit(i as u64, true);
        }
    }
    let mut k = BigUint::zero();
    for (i, &b) in x.carry_bits.iter().enumerate() {
        if b {
            k.set_bit(i as u64 + u64::from(x.offset), true);
        }
    }
    v + k
}

/// Bitwise full adders over three equal-length vectors, carries at offset 1.
pub fn carry_save_add(a: &[bool], b: &[bool], c: &[bool]) -> CarrySaveNumber {
    assert!(
        a.len() == b.len() && b.len() == c.len(),
        "operand lengths differ"
    );
    let (sum_bits, carry_bits) = a
        .iter()
        .zip(b)
        .zip(c)
        .map(|((&x, &y), &z)| classical_full_add(x, y, z))
        .unzip();
    CarrySaveNumber {
        sum_bits,
        carry_bits,
        offset: 1,
    }
}

/// Square-and-multiply.
pub fn classical_modexp(a: &BigUint, e: &BigUint, m: &BigUint) -> Result<BigUint, ReferenceError> {
    if m.is_zero() {
        return Err(ReferenceError::ZeroModulus);
    }
    let mut result = BigUint::one() % m;
    let mut base = a % m;
    for i in 0..e.bits() {
        if e.bit(i) {
            result = result * &base % m;
        }
        base = &base * &base % m;
    }
    Ok(result)
}

pub fn modexp_u64(a: u64, e: u64, m: u64) -> Result<u64, ReferenceError> {
    let r = classical_modexp(&a.into(), &e.into(), &m.into())?;
    Ok(r.iter_u64_digits().next().unwrap_or(0))
}
