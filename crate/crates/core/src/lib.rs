//! Reversible-circuit synthesis of reduced-round Keccak-f permutations, exact
//! simulation of the resulting netlists, and Grover resource estimation.

pub mod circuit;
pub mod cli;
pub mod estimator;
pub mod grover;
pub mod hexbits;
pub mod keccak_ref;
pub mod sim;
pub mod synth;
