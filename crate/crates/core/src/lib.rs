//! Greedy "Galois duel" firing sequences in exact arithmetic.
//!
//! Two equally poor shooters take turns; whoever is behind in cumulative
//! win probability keeps shooting until they catch up. As the miss
//! probability `q` tends to 1 the turn order becomes the Thue-Morse
//! sequence. This crate generates the sequence exactly, compares it with
//! Thue-Morse, isolates the roots of the `±1` polynomials that decide each
//! turn, and relates the sequence to expansions in the base `1 + 1/n`.

pub mod beta;
pub mod cli;
pub mod duel;
pub mod error;
pub mod numerics;
pub mod sign;
pub mod simulate;
pub mod thresholds;
pub mod thue_morse;

pub use error::{Error, Result};
pub use numerics::{ExactRational, IntPoly, IsolationInterval, Sign, SignPolynomial};
pub use sign::{Alphabet, PlayerSign};
