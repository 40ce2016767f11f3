//! Reversible carry-save arithmetic over NOT, CNOT and Toffoli.

pub mod adders;
pub mod builder;
pub mod circuit;
pub mod error;
pub mod layout;
pub mod modular;
pub mod multiplier;
pub mod netlist;
pub mod qasm;
pub mod reference;
pub mod registry;
pub mod resources;
pub mod sim;
pub mod verify;

pub use builder::CircuitBuilder;
pub use circuit::{compose, Circuit, DepthWeights, Gate, GateCounts, GateKind, IrError, WireRole};
pub use error::BuildError;
pub use layout::Layout;
pub use sim::{run, truth_table, BasisState, TruthTable};
pub use verify::{
    verify_against_oracle, verify_permutation, Domain, Encoder, Oracle, VerificationReport,
};
