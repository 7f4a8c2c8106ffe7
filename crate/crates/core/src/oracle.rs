//! Ground truth by exhaustion: enumerate every source-destination node
//! partition and compute its exact cut value, the sum of per-layer block
//! ranks of the partition's transfer matrix.

use std::collections::BTreeSet;
use std::fmt;

use crate::network::{InputId, Network, NetworkError, NodeId, OutputId};

/// Cap on intermediate nodes for exhaustive enumeration. 2^24 partitions is
/// the most this oracle will walk.
pub const DEFAULT_NODE_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// A partition that does not separate the source from the destination,
    /// or does not cover the node set.
    InvalidPartition(String),
    /// More intermediate nodes than the enumeration bound allows.
    TooLarge { intermediate: usize, bound: usize },
    Network(NetworkError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::InvalidPartition(s) => write!(f, "invalid partition: {s}"),
            OracleError::TooLarge { intermediate, bound } => write!(
                f,
                "{intermediate} intermediate nodes exceed the exhaustive bound of {bound}"
            ),
            OracleError::Network(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<NetworkError> for OracleError {
    fn from(e: NetworkError) -> Self {
        OracleError::Network(e)
    }
}

/// A source-destination cut: a partition of the nodes with the source on
/// one side and the destination on the other.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub v1: BTreeSet<NodeId>,
    pub v2: BTreeSet<NodeId>,
    /// Sum of block ranks across the cut.
    pub value: usize,
    /// value * log2(q).
    pub value_bits: f64,
}

/// Options for [`min_cut_exhaustive_with`]. The monotone restriction skips
/// partitions whose source side is not closed under channel predecessors;
/// it is an opt-in optimization, cross-checked against the full enumeration
/// in tests, and off by default.
#[derive(Debug, Clone, Default)]
pub struct OracleOptions {
    pub node_bound: Option<usize>,
    pub monotone_only: bool,
}

/// The value of one cut: the rank of the transfer matrix from all inputs on
/// the source side to all outputs on the destination side. Channels only
/// cross adjacent layers, so the matrix is block diagonal with one block per
/// layer cut and its rank is the sum of the block ranks.
pub fn cut_value(net: &Network, v1: &BTreeSet<NodeId>) -> Result<usize, OracleError> {
    let source = net
        .source()
        .ok_or_else(|| OracleError::InvalidPartition("network lacks a single source".into()))?;
    let dest = net
        .destination()
        .ok_or_else(|| OracleError::InvalidPartition("network lacks a single destination".into()))?;
    if !v1.contains(&source) {
        return Err(OracleError::InvalidPartition("source not in v1".into()));
    }
    if v1.contains(&dest) {
        return Err(OracleError::InvalidPartition("destination in v1".into()));
    }
    for id in v1 {
        if net.node(*id).is_none() {
            return Err(OracleError::InvalidPartition(format!("unknown node {id}")));
        }
    }
    Ok(cut_value_unchecked(net, v1))
}

fn cut_value_unchecked(net: &Network, v1: &BTreeSet<NodeId>) -> usize {
    let mut total = 0;
    for layer in 1..net.num_layers() {
        let ins: Vec<InputId> = net
            .layer_inputs(layer)
            .into_iter()
            .filter(|i| v1.contains(&net.input_owner(*i)))
            .collect();
        let outs: Vec<OutputId> = net
            .layer_outputs(layer + 1)
            .into_iter()
            .filter(|o| !v1.contains(&net.output_owner(*o)))
            .collect();
        if ins.is_empty() || outs.is_empty() {
            continue;
        }
        total += net
            .transfer_matrix(&ins, &outs)
            .expect("layer sets are on one cut")
            .rank();
    }
    total
}

/// Capacity in bits: cut value times log2 of the field order.
pub fn capacity_bits(value: usize, q: u32) -> f64 {
    value as f64 * (q as f64).log2()
}

/// Exact minimum over all 2^n source-destination partitions, with a witness.
/// Ties prefer the lexicographically smallest v1 (as a sorted id list).
pub fn min_cut_exhaustive(net: &Network) -> Result<Cut, OracleError> {
    min_cut_exhaustive_with(net, &OracleOptions::default())
}

pub fn min_cut_exhaustive_with(net: &Network, opts: &OracleOptions) -> Result<Cut, OracleError> {
    let source = net
        .source()
        .ok_or_else(|| OracleError::InvalidPartition("network lacks a single source".into()))?;
    let dest = net
        .destination()
        .ok_or_else(|| OracleError::InvalidPartition("network lacks a single destination".into()))?;
    let intermediate: Vec<NodeId> = net
        .nodes()
        .map(|n| n.id)
        .filter(|&id| id != source && id != dest)
        .collect();
    let bound = opts.node_bound.unwrap_or(DEFAULT_NODE_BOUND);
    if intermediate.len() > bound {
        return Err(OracleError::TooLarge { intermediate: intermediate.len(), bound });
    }
    // Predecessor closure test for the monotone restriction: v1 closed under
    // channel predecessors.
    let predecessors: Vec<(NodeId, NodeId)> = net
        .channels()
        .iter()
        .map(|c| (net.output_owner(c.output), net.input_owner(c.input)))
        .collect();

    let mut best: Option<Cut> = None;
    for mask in 0u64..(1u64 << intermediate.len()) {
        let mut v1: BTreeSet<NodeId> = BTreeSet::new();
        v1.insert(source);
        for (bit, id) in intermediate.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                v1.insert(*id);
            }
        }
        if opts.monotone_only {
            let closed = predecessors
                .iter()
                .all(|(node, pred)| !v1.contains(node) || v1.contains(pred));
            if !closed {
                continue;
            }
        }
        let value = cut_value_unchecked(net, &v1);
        let better = match &best {
            None => true,
            Some(b) => value < b.value || (value == b.value && v1 < b.v1),
        };
        if better {
            let v2: BTreeSet<NodeId> = net.nodes().map(|n| n.id).filter(|id| !v1.contains(id)).collect();
            best = Some(Cut {
                value,
                value_bits: capacity_bits(value, net.field().q()),
                v1,
                v2,
            });
        }
    }
    Ok(best.expect("at least the trivial partition exists"))
}
