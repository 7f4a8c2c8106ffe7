//! Layered deterministic network model.
//!
//! Terminology follows the channel's point of view: an *input* x is the
//! transmitting end of a channel and an *output* y the receiving end. A node
//! owns the inputs it transmits on and the outputs it receives on, so the
//! source holds only inputs and the destination only outputs. Channels run
//! from an input in layer i to an output in layer i+1 and carry a fixed
//! nonzero coefficient over GF(q); an output that hears several inputs sums
//! them over the field.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{Fe, Field, FieldError};
use crate::linalg::{LinalgError, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InputId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutputId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for InputId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for OutputId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    /// 1-based layer index.
    pub layer: usize,
    /// Transmit ports, toward the next layer.
    pub inputs: Vec<InputId>,
    /// Receive ports, from the previous layer.
    pub outputs: Vec<OutputId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Channel {
    pub input: InputId,
    pub output: OutputId,
    pub coeff: Fe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkError {
    Field(FieldError),
    Linalg(LinalgError),
    /// A port or node reference that does not resolve.
    Dangling(String),
    /// Structural impossibility at construction (duplicate ids, bad layer index).
    Malformed(String),
    /// transfer_matrix was asked for sets that do not sit on one layer cut.
    LayerMismatch,
    /// A gain exceeds the word length.
    GainExceedsWordLength { from: NodeId, to: NodeId, gain: u32, word_length: u32 },
    /// Bad generator parameters.
    InvalidParams(String),
    Parse(String),
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::Field(e) => write!(f, "{e}"),
            NetworkError::Linalg(e) => write!(f, "{e}"),
            NetworkError::Dangling(s) => write!(f, "dangling reference: {s}"),
            NetworkError::Malformed(s) => write!(f, "malformed network: {s}"),
            NetworkError::LayerMismatch => write!(f, "input and output sets do not span one layer cut"),
            NetworkError::GainExceedsWordLength { from, to, gain, word_length } => write!(
                f,
                "gain {gain} from node {from} to node {to} exceeds word length {word_length}"
            ),
            NetworkError::InvalidParams(s) => write!(f, "invalid parameters: {s}"),
            NetworkError::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl std::error::Error for NetworkError {}

impl From<FieldError> for NetworkError {
    fn from(e: FieldError) -> Self {
        NetworkError::Field(e)
    }
}

impl From<LinalgError> for NetworkError {
    fn from(e: LinalgError) -> Self {
        NetworkError::Linalg(e)
    }
}

/// A violation of the layered-model invariants. Violations are data: a
/// network carrying them can be constructed and inspected, it just is not a
/// valid layered deterministic network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SingleSource { found: usize },
    SingleDestination { found: usize },
    SourceHasOutputs,
    DestinationHasInputs,
    ChannelLayerSpan { input: InputId, output: OutputId },
    NonzeroCoefficient { input: InputId, output: OutputId },
    DuplicateChannel { input: InputId, output: OutputId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SingleSource { found } => write!(f, "layer 1 must hold exactly one node, found {found}"),
            Violation::SingleDestination { found } => {
                write!(f, "the last layer must hold exactly one node, found {found}")
            }
            Violation::SourceHasOutputs => write!(f, "the source node must hold only channel inputs"),
            Violation::DestinationHasInputs => write!(f, "the destination node must hold only channel outputs"),
            Violation::ChannelLayerSpan { input, output } => {
                write!(f, "channel ({input},{output}) does not connect adjacent layers")
            }
            Violation::NonzeroCoefficient { input, output } => {
                write!(f, "channel ({input},{output}) carries a zero coefficient")
            }
            Violation::DuplicateChannel { input, output } => {
                write!(f, "more than one channel between input {input} and output {output}")
            }
        }
    }
}

/// Immutable layered network. Construction resolves all references and
/// freezes adjacency in ascending-id order; the layered-model invariants
/// are checked separately by [`Network::validate`].
#[derive(Debug, Clone)]
pub struct Network {
    field: Field,
    num_layers: usize,
    nodes: BTreeMap<NodeId, Node>,
    /// Nodes per layer (1-based; index 0 unused), ascending.
    layers: Vec<Vec<NodeId>>,
    channels: Vec<Channel>,
    coeff: BTreeMap<(InputId, OutputId), Fe>,
    input_owner: BTreeMap<InputId, NodeId>,
    output_owner: BTreeMap<OutputId, NodeId>,
    /// Channels from each input, ascending by output id.
    adj_out: BTreeMap<InputId, Vec<(OutputId, Fe)>>,
}

impl Network {
    pub fn new(
        field: Field,
        num_layers: usize,
        nodes: Vec<Node>,
        channels: Vec<Channel>,
    ) -> Result<Network, NetworkError> {
        if num_layers < 2 {
            return Err(NetworkError::Malformed("a network needs at least two layers".into()));
        }
        let mut node_map = BTreeMap::new();
        let mut layers = vec![Vec::new(); num_layers + 1];
        let mut input_owner = BTreeMap::new();
        let mut output_owner = BTreeMap::new();
        for node in nodes {
            if node.layer == 0 || node.layer > num_layers {
                return Err(NetworkError::Malformed(format!(
                    "node {} has layer {} outside 1..={}",
                    node.id, node.layer, num_layers
                )));
            }
            for &i in &node.inputs {
                if input_owner.insert(i, node.id).is_some() {
                    return Err(NetworkError::Malformed(format!("input {i} owned by two nodes")));
                }
            }
            for &o in &node.outputs {
                if output_owner.insert(o, node.id).is_some() {
                    return Err(NetworkError::Malformed(format!("output {o} owned by two nodes")));
                }
            }
            layers[node.layer].push(node.id);
            if node_map.insert(node.id, node.clone()).is_some() {
                return Err(NetworkError::Malformed(format!("duplicate node id {}", node.id)));
            }
        }
        for layer in layers.iter_mut() {
            layer.sort();
        }
        let mut adj_out: BTreeMap<InputId, Vec<(OutputId, Fe)>> = BTreeMap::new();
        let mut coeff = BTreeMap::new();
        for ch in &channels {
            if !input_owner.contains_key(&ch.input) {
                return Err(NetworkError::Dangling(format!("channel input {}", ch.input)));
            }
            if !output_owner.contains_key(&ch.output) {
                return Err(NetworkError::Dangling(format!("channel output {}", ch.output)));
            }
            if ch.coeff.value() >= field.q() {
                return Err(NetworkError::Field(FieldError::OutOfRange {
                    value: ch.coeff.value(),
                    q: field.q(),
                }));
            }
            coeff.insert((ch.input, ch.output), ch.coeff);
            adj_out.entry(ch.input).or_default().push((ch.output, ch.coeff));
        }
        for list in adj_out.values_mut() {
            list.sort_by_key(|&(o, _)| o);
            list.dedup_by_key(|&mut (o, _)| o);
        }
        // Ports with no channels still need adjacency entries.
        for &i in input_owner.keys() {
            adj_out.entry(i).or_default();
        }
        Ok(Network {
            field,
            num_layers,
            nodes: node_map,
            layers,
            channels,
            coeff,
            input_owner,
            output_owner,
            adj_out,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    /// Node ids in the given 1-based layer, ascending.
    pub fn layer_nodes(&self, layer: usize) -> &[NodeId] {
        &self.layers[layer]
    }

    pub fn source(&self) -> Option<NodeId> {
        match self.layers[1].as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    pub fn destination(&self) -> Option<NodeId> {
        match self.layers[self.num_layers].as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn coeff(&self, input: InputId, output: OutputId) -> Option<Fe> {
        self.coeff.get(&(input, output)).copied()
    }

    /// Channels leaving an input, ascending by output id.
    pub fn channels_from(&self, input: InputId) -> &[(OutputId, Fe)] {
        self.adj_out.get(&input).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn input_owner(&self, input: InputId) -> NodeId {
        self.input_owner[&input]
    }

    pub fn output_owner(&self, output: OutputId) -> NodeId {
        self.output_owner[&output]
    }

    pub fn input_layer(&self, input: InputId) -> usize {
        self.nodes[&self.input_owner[&input]].layer
    }

    pub fn output_layer(&self, output: OutputId) -> usize {
        self.nodes[&self.output_owner[&output]].layer
    }

    pub fn total_inputs(&self) -> usize {
        self.input_owner.len()
    }

    pub fn total_outputs(&self) -> usize {
        self.output_owner.len()
    }

    /// All inputs in the given layer, ascending.
    pub fn layer_inputs(&self, layer: usize) -> Vec<InputId> {
        let mut v: Vec<InputId> = self
            .layers[layer]
            .iter()
            .flat_map(|n| self.nodes[n].inputs.iter().copied())
            .collect();
        v.sort();
        v
    }

    /// All outputs in the given layer, ascending.
    pub fn layer_outputs(&self, layer: usize) -> Vec<OutputId> {
        let mut v: Vec<OutputId> = self
            .layers[layer]
            .iter()
            .flat_map(|n| self.nodes[n].outputs.iter().copied())
            .collect();
        v.sort();
        v
    }

    /// Checks every model invariant and returns the violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.layers[1].len() != 1 {
            out.push(Violation::SingleSource { found: self.layers[1].len() });
        }
        if self.layers[self.num_layers].len() != 1 {
            out.push(Violation::SingleDestination {
                found: self.layers[self.num_layers].len(),
            });
        }
        if let Some(s) = self.source() {
            if !self.nodes[&s].outputs.is_empty() {
                out.push(Violation::SourceHasOutputs);
            }
        }
        if let Some(d) = self.destination() {
            if !self.nodes[&d].inputs.is_empty() {
                out.push(Violation::DestinationHasInputs);
            }
        }
        let mut seen = BTreeSet::new();
        for ch in &self.channels {
            let li = self.input_layer(ch.input);
            let lo = self.output_layer(ch.output);
            if lo != li + 1 {
                out.push(Violation::ChannelLayerSpan { input: ch.input, output: ch.output });
            }
            if ch.coeff.is_zero() {
                out.push(Violation::NonzeroCoefficient { input: ch.input, output: ch.output });
            }
            if !seen.insert((ch.input, ch.output)) {
                out.push(Violation::DuplicateChannel { input: ch.input, output: ch.output });
            }
        }
        out
    }

    /// The transfer matrix between a set of inputs in one layer and a set of
    /// outputs in the next: entry (v, w) is the coefficient of channel (v, w)
    /// and zero where no channel exists. Rows and columns are ordered
    /// ascending by id.
    pub fn transfer_matrix(&self, ins: &[InputId], outs: &[OutputId]) -> Result<Matrix, NetworkError> {
        let mut ins = ins.to_vec();
        let mut outs = outs.to_vec();
        ins.sort();
        ins.dedup();
        outs.sort();
        outs.dedup();
        if !ins.is_empty() && !outs.is_empty() {
            let li = self.input_layer(*ins.first().ok_or(NetworkError::LayerMismatch)?);
            if ins.iter().any(|&i| self.input_layer(i) != li)
                || outs.iter().any(|&o| self.output_layer(o) != li + 1)
            {
                return Err(NetworkError::LayerMismatch);
            }
        }
        let row_labels: Vec<u32> = ins.iter().map(|i| i.0).collect();
        let col_labels: Vec<u32> = outs.iter().map(|o| o.0).collect();
        let mut m = Matrix::zero(self.field.clone(), row_labels, col_labels)?;
        for (r, &i) in ins.iter().enumerate() {
            for (c, &o) in outs.iter().enumerate() {
                if let Some(coeff) = self.coeff(i, o) {
                    m.set_idx(r, c, coeff);
                }
            }
        }
        Ok(m)
    }

    /// Stable content digest used to identify a network in reports.
    pub fn digest(&self) -> String {
        let json = self.to_json();
        // FNV-1a, enough to tell fixtures apart in reports.
        let mut h: u64 = 0xcbf29ce484222325;
        for b in json.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NodeFile {
    id: u32,
    layer: usize,
    inputs: Vec<u32>,
    outputs: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ChannelFile {
    input: u32,
    output: u32,
    coeff: u32,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduction_poly: Option<Vec<u32>>,
    num_layers: usize,
    nodes: Vec<NodeFile>,
    channels: Vec<ChannelFile>,
}

impl Network {
    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            q: self.field.q(),
            reduction_poly: self.field.reduction_poly(),
            num_layers: self.num_layers,
            nodes: self
                .nodes
                .values()
                .map(|n| NodeFile {
                    id: n.id.0,
                    layer: n.layer,
                    inputs: n.inputs.iter().map(|i| i.0).collect(),
                    outputs: n.outputs.iter().map(|o| o.0).collect(),
                })
                .collect(),
            channels: self
                .channels
                .iter()
                .map(|c| ChannelFile {
                    input: c.input.0,
                    output: c.output.0,
                    coeff: c.coeff.value(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("network serializes")
    }

    pub fn from_json(text: &str) -> Result<Network, NetworkError> {
        let file: NetworkFile =
            serde_json::from_str(text).map_err(|e| NetworkError::Parse(e.to_string()))?;
        let field = Field::new(file.q)?;
        if let Some(poly) = &file.reduction_poly {
            let canonical = field.reduction_poly().unwrap_or_default();
            if *poly != canonical {
                return Err(NetworkError::Field(FieldError::ReductionPolyMismatch {
                    expected: canonical,
                    found: poly.clone(),
                }));
            }
        }
        let nodes = file
            .nodes
            .into_iter()
            .map(|n| Node {
                id: NodeId(n.id),
                layer: n.layer,
                inputs: n.inputs.into_iter().map(InputId).collect(),
                outputs: n.outputs.into_iter().map(OutputId).collect(),
            })
            .collect();
        let channels = file
            .channels
            .into_iter()
            .map(|c| {
                Ok(Channel {
                    input: InputId(c.input),
                    output: OutputId(c.output),
                    coeff: field.element(c.coeff)?,
                })
            })
            .collect::<Result<Vec<_>, FieldError>>()?;
        Network::new(field, file.num_layers, nodes, channels)
    }
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

impl Network {
    /// GraphViz rendering with one cluster per layer. Channels in
    /// `highlight` are drawn bold.
    pub fn to_dot(&self, highlight: &[(InputId, OutputId)]) -> String {
        use std::fmt::Write;
        let bold: BTreeSet<(InputId, OutputId)> = highlight.iter().copied().collect();
        let mut s = String::new();
        writeln!(s, "digraph network {{").unwrap();
        writeln!(s, "  rankdir=LR;").unwrap();
        writeln!(s, "  node [shape=box];").unwrap();
        for layer in 1..=self.num_layers {
            writeln!(s, "  subgraph cluster_layer_{layer} {{").unwrap();
            writeln!(s, "    label=\"layer {layer}\";").unwrap();
            writeln!(s, "    style=dashed;").unwrap();
            for id in &self.layers[layer] {
                let n = &self.nodes[id];
                let ins: Vec<String> = n.inputs.iter().map(|i| format!("x{i}")).collect();
                let outs: Vec<String> = n.outputs.iter().map(|o| format!("y{o}")).collect();
                writeln!(
                    s,
                    "    n{} [label=\"n{}|{}|{}\"];",
                    id,
                    id,
                    outs.join(" "),
                    ins.join(" ")
                )
                .unwrap();
            }
            writeln!(s, "  }}").unwrap();
        }
        for ch in &self.channels {
            let from = self.input_owner(ch.input);
            let to = self.output_owner(ch.output);
            let mut attrs = vec![format!("label=\"x{}->y{} ({})\"", ch.input, ch.output, ch.coeff)];
            if bold.contains(&(ch.input, ch.output)) {
                attrs.push("style=bold".into());
                attrs.push("penwidth=2.5".into());
            }
            writeln!(s, "  n{from} -> n{to} [{}];", attrs.join(", ")).unwrap();
        }
        writeln!(s, "}}").unwrap();
        s
    }
}

// ---------------------------------------------------------------------------
// Gain-based construction
// ---------------------------------------------------------------------------

/// A wireless-style description: nodes with integer gains between adjacent
/// layers and a word length n. Each node exposes n transmit bits and n
/// receive bits ordered most-significant first; a gain of g delivers the g
/// most significant transmitted bits, shifted down by the path loss n - g.
#[derive(Debug, Clone)]
pub struct GainSpec {
    pub word_length: u32,
    /// Node ids per layer, outermost index = layer - 1.
    pub layers: Vec<Vec<NodeId>>,
    /// (from, to, gain) for node pairs in adjacent layers.
    pub gains: Vec<(NodeId, NodeId, u32)>,
}

impl Network {
    /// Builds the binary network induced by a [`GainSpec`]: for every pair
    /// (u, v) with gain g, channel k of u feeds bit k + (n - g) of v for
    /// 1 <= k <= g, all with coefficient 1 over GF(2). Colliding
    /// contributions at one receive bit stay as separate unit channels; the
    /// receiver adds them over GF(2).
    pub fn from_gains(spec: &GainSpec) -> Result<Network, NetworkError> {
        let n = spec.word_length;
        if n == 0 {
            return Err(NetworkError::InvalidParams("word length must be positive".into()));
        }
        let field = Field::new(2)?;
        let num_layers = spec.layers.len();
        if num_layers < 2 {
            return Err(NetworkError::InvalidParams("need at least two layers".into()));
        }
        let mut layer_of = BTreeMap::new();
        for (li, ids) in spec.layers.iter().enumerate() {
            for id in ids {
                if layer_of.insert(*id, li + 1).is_some() {
                    return Err(NetworkError::Malformed(format!("node {id} listed twice")));
                }
            }
        }
        // Ports: receive bits first, then transmit bits, per node in layer
        // order; the source gets no receive bits and the destination no
        // transmit bits.
        let mut nodes = Vec::new();
        let mut next_input = 1u32;
        let mut next_output = 1u32;
        let mut tx_ports: BTreeMap<NodeId, Vec<InputId>> = BTreeMap::new();
        let mut rx_ports: BTreeMap<NodeId, Vec<OutputId>> = BTreeMap::new();
        for (li, ids) in spec.layers.iter().enumerate() {
            let layer = li + 1;
            for &id in ids {
                let outputs: Vec<OutputId> = if layer == 1 {
                    Vec::new()
                } else {
                    (0..n)
                        .map(|_| {
                            let o = OutputId(next_output);
                            next_output += 1;
                            o
                        })
                        .collect()
                };
                let inputs: Vec<InputId> = if layer == num_layers {
                    Vec::new()
                } else {
                    (0..n)
                        .map(|_| {
                            let i = InputId(next_input);
                            next_input += 1;
                            i
                        })
                        .collect()
                };
                tx_ports.insert(id, inputs.clone());
                rx_ports.insert(id, outputs.clone());
                nodes.push(Node { id, layer, inputs, outputs });
            }
        }
        let mut channels = Vec::new();
        for &(from, to, gain) in &spec.gains {
            if gain == 0 {
                continue;
            }
            if gain > n {
                return Err(NetworkError::GainExceedsWordLength { from, to, gain, word_length: n });
            }
            let lf = *layer_of
                .get(&from)
                .ok_or_else(|| NetworkError::Dangling(format!("gain source node {from}")))?;
            let lt = *layer_of
                .get(&to)
                .ok_or_else(|| NetworkError::Dangling(format!("gain target node {to}")))?;
            if lt != lf + 1 {
                return Err(NetworkError::InvalidParams(format!(
                    "gain between non-adjacent layers {lf} and {lt}"
                )));
            }
            let tx = &tx_ports[&from];
            let rx = &rx_ports[&to];
            for k in 1..=gain {
                // Bit k of the transmitter lands at bit k + (n - gain) of
                // the receiver; both sides are 1-based, MSB first.
                let rx_bit = k + (n - gain);
                channels.push(Channel {
                    input: tx[(k - 1) as usize],
                    output: rx[(rx_bit - 1) as usize],
                    coeff: Fe::ONE,
                });
            }
        }
        Network::new(field, num_layers, nodes, channels)
    }
}

// ---------------------------------------------------------------------------
// Seeded random instances
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct RandomParams {
    pub num_layers: usize,
    pub max_nodes_per_layer: u32,
    pub max_inputs_per_node: u32,
    pub max_outputs_per_node: u32,
    /// Probability that any given (input, output) pair across a layer cut
    /// carries a channel.
    pub density: f64,
    pub q: u32,
    pub seed: u64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            num_layers: 4,
            max_nodes_per_layer: 3,
            max_inputs_per_node: 3,
            max_outputs_per_node: 3,
            density: 0.6,
            q: 2,
            seed: 0,
        }
    }
}

impl Network {
    /// Deterministic function of the parameters: the same seed always yields
    /// the same network. Source-destination connectivity is not guaranteed,
    /// so the capacity may be zero.
    pub fn random(params: &RandomParams) -> Result<Network, NetworkError> {
        if params.num_layers < 2 {
            return Err(NetworkError::InvalidParams("num_layers must be at least 2".into()));
        }
        if params.max_nodes_per_layer == 0
            || params.max_inputs_per_node == 0
            || params.max_outputs_per_node == 0
        {
            return Err(NetworkError::InvalidParams("node and port bounds must be positive".into()));
        }
        if !(0.0..=1.0).contains(&params.density) {
            return Err(NetworkError::InvalidParams("density must lie in [0, 1]".into()));
        }
        let field = Field::new(params.q)?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut nodes = Vec::new();
        let mut next_node = 0u32;
        let mut next_input = 0u32;
        let mut next_output = 0u32;
        for layer in 1..=params.num_layers {
            let count = if layer == 1 || layer == params.num_layers {
                1
            } else {
                rng.gen_range(1..=params.max_nodes_per_layer) as usize
            };
            for _ in 0..count {
                let id = NodeId(next_node);
                next_node += 1;
                let n_out = if layer == 1 {
                    0
                } else {
                    rng.gen_range(1..=params.max_outputs_per_node)
                };
                let n_in = if layer == params.num_layers {
                    0
                } else {
                    rng.gen_range(1..=params.max_inputs_per_node)
                };
                let outputs = (0..n_out)
                    .map(|_| {
                        let o = OutputId(next_output);
                        next_output += 1;
                        o
                    })
                    .collect();
                let inputs = (0..n_in)
                    .map(|_| {
                        let i = InputId(next_input);
                        next_input += 1;
                        i
                    })
                    .collect();
                nodes.push(Node { id, layer, inputs, outputs });
            }
        }
        let mut channels = Vec::new();
        for layer in 1..params.num_layers {
            let ins: Vec<InputId> = nodes
                .iter()
                .filter(|n| n.layer == layer)
                .flat_map(|n| n.inputs.iter().copied())
                .collect();
            let outs: Vec<OutputId> = nodes
                .iter()
                .filter(|n| n.layer == layer + 1)
                .flat_map(|n| n.outputs.iter().copied())
                .collect();
            for &i in &ins {
                for &o in &outs {
                    if rng.gen_bool(params.density) {
                        let coeff = field.element(rng.gen_range(1..params.q.max(2))).unwrap();
                        channels.push(Channel { input: i, output: o, coeff });
                    }
                }
            }
        }
        Network::new(field, params.num_layers, nodes, channels)
    }
}
