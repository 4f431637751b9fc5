//! Witness encryption for Exact Cover over a composite-order graded
//! encoding, plus the zeroizing attack that breaks the encoding's
//! symmetric variant.
//!
//! The pipeline, end to end:
//!
//! 1. [`reductions`] turns a Sudoku or pentomino puzzle into an Exact
//!    Cover instance and maps covers back to puzzle moves.
//! 2. [`exact_cover`] solves instances directly (Algorithm X), which
//!    is how a witness holder finds their witness.
//! 3. [`witness_enc`] encrypts a message bit string against an
//!    instance; anyone holding an exact cover can decrypt.
//! 4. [`clt`] is the underlying graded encoding: encode, add,
//!    multiply, zero-test.
//! 5. [`attack`] demonstrates why the symmetric variant with published
//!    low-level encodings must never be used: it factors the modulus.
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability; the `cltwe` binary exposes the same operations on
//! files.
//!
//! Security caveat: encryptions of different messages against the same
//! instance are only heuristically indistinguishable, and multi-bit
//! messages leak equality between bit positions through the shared
//! instance. This crate is a research artifact, not a production
//! cryptosystem.

pub mod attack;
pub mod cli;
pub mod clt;
pub mod exact_cover;
pub mod format;
pub mod params;
pub mod reductions;
pub mod rng;
pub mod witness_enc;

pub use clt::{Encoding, LevelVector, PlaintextVector, PublicParams, SecretState};
pub use exact_cover::{ExactCoverInstance, Witness};
pub use params::{attack_demo_params, derive_params, SystemParams};
pub use witness_enc::{decrypt, encrypt, Ciphertext, MessageBits};
