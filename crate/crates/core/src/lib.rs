//! Wire and gate cutting by quasiprobability decomposition.
//!
//! The crate is organised bottom-up: [`linsim`] simulates states and
//! channels, [`circuit`] holds the circuit representation and partitioner,
//! [`qpd`] the decomposition algebra, [`cuts`] the concrete decompositions and
//! [`estimator`] the exact and sampled recombination.

pub mod error;
pub mod linalg;
pub mod circuit;
pub mod cuts;
pub mod estimator;
pub mod linsim;
pub mod qpd;

pub use error::{Error, Result};
