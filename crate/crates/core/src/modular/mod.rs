//! Arithmetic modulo M kept in a redundant carry-save form below 2^N.

mod csa;
mod exp;
mod mul;
mod normalize;

use num_bigint::BigUint;

use crate::builder::CircuitBuilder;
use crate::error::BuildError;

pub use csa::{build_mod_csa, ModCsaLayout, Probe};
pub use exp::{build_modexp, build_modexp_normalized, ModexpLayout};
pub use mul::build_mod_multiplier;
pub use normalize::{build_final_normalizer, normalizer_stages, NormalizerLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulusContext {
    /// Data width N.
    pub n: u32,
    pub m: u64,
    /// 2^(N-1) mod M
    pub p: u64,
    /// 2^N mod M
    pub q: u64,
}

impl ModulusContext {
    /// 2^e mod M
    pub fn pow2(&self, e: u32) -> u64 {
        let mut r = 1 % self.m;
        for _ in 0..e {
            r = (r * 2) % self.m;
        }
        r
    }

    /// Fold-and-recompress passes after the four main stages; enough to bring
    /// any stage-four output below 2^N.
    pub fn trim_passes(&self) -> u32 {
        let drop = (1u64 << (self.n - 1)) - self.p;
        (((1u64 << self.n) - 3) / drop + 1) as u32
    }
}

pub fn make_modulus_context(n: u32, m: u64) -> Result<ModulusContext, BuildError> {
    if !(4..=62).contains(&n) {
        return Err(BuildError::DataWidth(n));
    }
    if m < 3 || m > 1u64 << (n - 2) {
        return Err(BuildError::ModulusRange { n, m });
    }
    let mut ctx = ModulusContext { n, m, p: 0, q: 0 };
    ctx.p = ctx.pow2(n - 1);
    ctx.q = ctx.pow2(n);
    Ok(ctx)
}

/// (x mod 2^N) + (x >> N) * Q
pub fn mod_fold_reference(x: &BigUint, ctx: &ModulusContext) -> BigUint {
    let low = x & ((BigUint::from(1u8) << ctx.n) - 1u8);
    low + (x >> ctx.n) * ctx.q
}

/// P and Q held on constant wires, N-2 bits each.
#[derive(Debug, Clone)]
pub(crate) struct FoldConstants {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl FoldConstants {
    pub fn alloc(b: &mut CircuitBuilder, ctx: &ModulusContext) -> Self {
        let w = (ctx.n - 2) as usize;
        FoldConstants {
            p: b.constant("P", u128::from(ctx.p), w),
            q: b.constant("Q", u128::from(ctx.q), w),
        }
    }

    pub fn release(&self, b: &mut CircuitBuilder) {
        b.prepare_constants(&self.p);
        b.prepare_constants(&self.q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let c = make_modulus_context(4, 3).unwrap();
        assert_eq!((c.p, c.q), (2, 1));
        let c = make_modulus_context(5, 7).unwrap();
        assert_eq!((c.p, c.q), (2, 4));
        assert_eq!(
            make_modulus_context(4, 5),
            Err(BuildError::ModulusRange { n: 4, m: 5 })
        );
        assert!(make_modulus_context(4, 2).is_err());
        assert!(make_modulus_context(3, 2).is_err());
    }

    #[test]
    fn fold_examples() {
        let c = make_modulus_context(4, 3).unwrap();
        assert_eq!(mod_fold_reference(&45u32.into(), &c), 15u32.into());
        assert_eq!(mod_fold_reference(&9u32.into(), &c), 9u32.into());
        assert_eq!(mod_fold_reference(&16u32.into(), &c), BigUint::from(c.q));
    }
}
