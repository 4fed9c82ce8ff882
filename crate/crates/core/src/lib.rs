//! Decision diagrams for matrix functions (DDMFs) and functional
//! equivalence checking of semi-classical quantum circuits.
//!
//! A semi-classical circuit is a network of controlled-U gates in which,
//! for every classical input, each control qubit holds `|0⟩` or `|1⟩` when
//! its gate fires. Under that restriction each qubit's output is a matrix
//! function of the inputs, which [`dd::DdmfManager`] represents canonically.

pub mod bench;
pub mod circuit;
pub mod dd;
pub mod exact;
pub mod oracle;
pub mod verifier;

pub use circuit::{parse, Circuit, Gate};
pub use dd::{DdError, DdmfManager, DdmfRef};
pub use exact::{CycNumber, DyadicAngle, GateKind, Ring, Unitary2};
pub use verifier::{check_equivalence, CheckOptions, Verdict, VerificationReport};
