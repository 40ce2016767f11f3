//! Primitive cells and the adder networks built from them.

pub mod blocks;
pub mod compress;
pub mod csa;
pub mod ripple;
pub mod tree;

pub use crate::error::BuildError;
pub use blocks::{build_qfa, build_qha, build_qmg, build_sum};
pub use compress::Row;
pub use csa::{build_csa_3to2, build_csa_4to2};
pub use ripple::build_ripple_adder;
pub use tree::build_tree_adder;
