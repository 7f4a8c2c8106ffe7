//! One-symbol relay coding over a committed path set.
//!
//! Each intermediate node simply copies the symbol heard on a used receive
//! port to the paired used transmit port. The destination hears K linear
//! combinations of the K source symbols; the combining matrix is the product
//! of the per-cut used transfer matrices in path basis, full rank by
//! construction, so one exact linear solve recovers the symbols.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Fe, Field};
use crate::linalg::{LinalgError, Matrix};
use crate::network::{InputId, Network, NodeId, OutputId};
use crate::pathfinder::PathSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodecError {
    /// A layer's used transfer matrix is singular: the path set was not
    /// linearly independent (upstream bug).
    RankViolation { cut: usize },
    DimensionMismatch { expected: usize, found: usize },
    Linalg(LinalgError),
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::RankViolation { cut } => {
                write!(f, "used transfer matrix at cut {cut} is singular")
            }
            CodecError::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} symbols, found {found}")
            }
            CodecError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CodecError {}

impl From<LinalgError> for CodecError {
    fn from(e: LinalgError) -> Self {
        CodecError::Linalg(e)
    }
}

/// Concrete relay instructions for one committed path set.
#[derive(Debug, Clone)]
pub struct RelayPlan {
    field: Field,
    k: usize,
    /// Per intermediate node: used receive port -> used transmit port.
    node_maps: BTreeMap<NodeId, BTreeMap<OutputId, InputId>>,
    /// Used K x K transfer matrix per cut, labeled by port ids.
    layer_matrices: Vec<Matrix>,
    /// Source transmit ports in path order.
    source_inputs: Vec<InputId>,
    /// Destination receive ports in path order.
    dest_outputs: Vec<OutputId>,
    /// Path-basis combining matrices per cut: entry (p, p') is the
    /// coefficient of the channel from path p's transmit port to path p''s
    /// receive port.
    path_basis: Vec<Matrix>,
}

impl RelayPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn source_inputs(&self) -> &[InputId] {
        &self.source_inputs
    }

    pub fn dest_outputs(&self) -> &[OutputId] {
        &self.dest_outputs
    }

    pub fn node_map(&self, node: NodeId) -> Option<&BTreeMap<OutputId, InputId>> {
        self.node_maps.get(&node)
    }

    pub fn layer_matrix(&self, cut: usize) -> &Matrix {
        &self.layer_matrices[cut - 1]
    }
}

/// Builds the relay plan induced by a path set: per-node port bijections and
/// per-cut used transfer matrices.
pub fn build_relay_plan(net: &Network, paths: &PathSet) -> Result<RelayPlan, CodecError> {
    let k = paths.k();
    let lambda = net.num_layers();
    for path in &paths.paths {
        if path.len() != lambda - 1 {
            return Err(CodecError::DimensionMismatch {
                expected: lambda - 1,
                found: path.len(),
            });
        }
    }
    let mut node_maps: BTreeMap<NodeId, BTreeMap<OutputId, InputId>> = BTreeMap::new();
    for path in &paths.paths {
        for w in path.windows(2) {
            let (_, y_in) = w[0];
            let (x_out, _) = w[1];
            let node = net.output_owner(y_in);
            debug_assert_eq!(node, net.input_owner(x_out));
            node_maps.entry(node).or_default().insert(y_in, x_out);
        }
    }
    let mut layer_matrices = Vec::with_capacity(lambda - 1);
    let mut path_basis = Vec::with_capacity(lambda - 1);
    for cut in 1..lambda {
        let ins = paths.used_inputs(cut);
        let outs = paths.used_outputs(cut);
        let t = net
            .transfer_matrix(&ins, &outs)
            .map_err(|_| CodecError::RankViolation { cut })?;
        if k > 0 && !t.is_full_rank() {
            return Err(CodecError::RankViolation { cut });
        }
        layer_matrices.push(t);
        // Path basis: row p = path p's input at this cut, column p' = path
        // p''s output at the next layer.
        let row_ids: Vec<u32> = (0..k as u32).collect();
        let mut data = Vec::with_capacity(k * k);
        for p in 0..k {
            let x = paths.paths[p][cut - 1].0;
            for path_q in paths.paths.iter() {
                let y = path_q[cut - 1].1;
                data.push(net.coeff(x, y).unwrap_or(Fe::ZERO));
            }
        }
        path_basis.push(
            Matrix::new(net.field().clone(), row_ids.clone(), row_ids, data)
                .expect("square path-basis matrix"),
        );
    }
    Ok(RelayPlan {
        field: net.field().clone(),
        k,
        node_maps,
        layer_matrices,
        source_inputs: paths.paths.iter().map(|p| p[0].0).collect(),
        dest_outputs: paths.paths.iter().map(|p| p[lambda - 2].1).collect(),
        path_basis,
    })
}

/// The end-to-end K x K combining matrix in path basis: the ordered product
/// of the per-cut matrices. Full rank whenever the plan came from a
/// committed path set.
pub fn end_to_end_matrix(plan: &RelayPlan) -> Result<Matrix, CodecError> {
    let k = plan.k;
    let labels: Vec<u32> = (0..k as u32).collect();
    let mut acc = {
        let mut m = Matrix::zero(plan.field.clone(), labels.clone(), labels.clone())
            .expect("unique labels");
        for i in 0..k {
            m.set_idx(i, i, Fe::ONE);
        }
        m
    };
    for t in &plan.path_basis {
        acc = acc.mul(t)?;
    }
    if k > 0 && !acc.is_full_rank() {
        return Err(CodecError::RankViolation { cut: 0 });
    }
    Ok(acc)
}

/// Pushes one symbol per path through the full network map: used source
/// ports transmit the symbols, every other port transmits zero, every
/// receive port hears the field sum of its incoming channels, and each
/// relay forwards along its plan bijection. Returns the destination's
/// observations in path order.
pub fn transmit(net: &Network, plan: &RelayPlan, symbols: &[Fe]) -> Result<Vec<Fe>, CodecError> {
    if symbols.len() != plan.k {
        return Err(CodecError::DimensionMismatch { expected: plan.k, found: symbols.len() });
    }
    let field = net.field();
    let mut tx: BTreeMap<InputId, Fe> = BTreeMap::new();
    for (port, &sym) in plan.source_inputs.iter().zip(symbols) {
        tx.insert(*port, sym);
    }
    let lambda = net.num_layers();
    let mut rx: BTreeMap<OutputId, Fe> = BTreeMap::new();
    for layer in 1..lambda {
        rx.clear();
        for ch in net.channels() {
            if net.input_layer(ch.input) != layer {
                continue;
            }
            let x = tx.get(&ch.input).copied().unwrap_or(Fe::ZERO);
            if x.is_zero() {
                continue;
            }
            let cur = rx.get(&ch.output).copied().unwrap_or(Fe::ZERO);
            rx.insert(ch.output, field.add(cur, field.mul(ch.coeff, x)));
        }
        tx.clear();
        for (node, map) in &plan.node_maps {
            if net.node(*node).map(|n| n.layer) != Some(layer + 1) {
                continue;
            }
            for (y, x) in map {
                tx.insert(*x, rx.get(y).copied().unwrap_or(Fe::ZERO));
            }
        }
    }
    Ok(plan
        .dest_outputs
        .iter()
        .map(|y| rx.get(y).copied().unwrap_or(Fe::ZERO))
        .collect())
}

/// Recovers the source symbols from destination observations by solving the
/// K x K linear system against the end-to-end matrix.
pub fn decode(plan: &RelayPlan, observations: &[Fe]) -> Result<Vec<Fe>, CodecError> {
    if observations.len() != plan.k {
        return Err(CodecError::DimensionMismatch { expected: plan.k, found: observations.len() });
    }
    if plan.k == 0 {
        return Ok(Vec::new());
    }
    let t = end_to_end_matrix(plan)?;
    Ok(t.solve_left(observations)?)
}
