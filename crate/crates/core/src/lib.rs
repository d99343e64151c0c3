//! Laboratory for the binary adder channel with two independent,
//! uniformly random interference words, each known non-causally to one of
//! the two transmitters and to nobody else.
//!
//! The crate has three layers:
//!
//! * exact finite-blocklength machinery: GF(2) words and matrices
//!   ([`gf2`]), coset-leader tables for linear codes ([`code`]), the
//!   channel itself ([`channel`]), and the syndrome scheme that achieves
//!   its capacity with zero decoding errors ([`scheme`]);
//! * single-letter computations: the capacity formula, the best known
//!   auxiliary-variable rate expression and its concave envelope, and the
//!   strict gap between them ([`single_letter`]);
//! * companions: the modulo-two-sum source-coding problem where the same
//!   syndrome trick beats compress-and-forward ([`korner_marton`]), and
//!   the real-valued analogue with Gaussian noise and modulo-lattice
//!   strategies ([`gaussian`]).
//!
//! Everything randomized takes an explicit seed and names its generator,
//! so every number in every report is reproducible.

pub mod channel;
pub mod code;
mod error;
pub mod gaussian;
pub mod gf2;
pub mod korner_marton;
pub mod scheme;
pub mod single_letter;

pub use error::{Error, Result};
