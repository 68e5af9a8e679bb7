//! Channels with state under causal CSIT: capacity formulas, exact linear
//! programs for non-signaling assisted coding, classical brute force, and the
//! authentication coding scheme.

pub mod capacity;
pub mod classical;
pub mod cli;
pub mod channel;
pub mod error;
pub mod lp;
pub mod rational;
pub mod scheme;
pub mod seq;
pub mod typemap;

pub use error::{Error, Result};
pub use rational::Rational;
