//! Linear deterministic relay networks over GF(q).
//!
//! The deterministic model captures wireless signal interaction with exact
//! field arithmetic: broadcast appears as one transmit port feeding several
//! receive ports, interference as a receive port summing several transmit
//! ports over GF(q), and path loss as truncation of the weaker symbols. The
//! unicast capacity of such a network is the minimum over all
//! source-destination node cuts of the rank of the cut's transfer matrix.
//!
//! This crate computes that capacity constructively: [`pathfinder`] grows
//! linearly independent source-destination paths one at a time, rewiring
//! earlier paths inside single layers whenever a naive extension would go
//! linearly dependent, and stops exactly at the min-cut value. [`oracle`]
//! recomputes the same number by exhaustive cut enumeration at test scale,
//! and [`codec`] turns the committed paths into one-symbol relay mappings
//! plus an exact end-to-end decode, demonstrating that the capacity is
//! achievable.

#![forbid(unsafe_code)]

pub mod codec;
pub mod field;
pub mod linalg;
pub mod network;
pub mod oracle;
pub mod pathfinder;

#[cfg(test)]
pub(crate) mod testutil;

pub use field::{Fe, Field, FieldError};
pub use linalg::{LinalgError, Matching, Matrix};
pub use network::{
    Channel, GainSpec, InputId, Network, NetworkError, Node, NodeId, OutputId, RandomParams,
    Violation,
};
pub use oracle::{capacity_bits, cut_value, min_cut_exhaustive, Cut, OracleError};
pub use pathfinder::{find_paths, PathError, PathSet, SdPath, Search};
