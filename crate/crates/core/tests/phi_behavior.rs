//! Operation-level tests of the phi-function rewiring: which row deletions
//! are accepted, which nodes and inputs get re-explored, and how the state
//! unwinds when every continuation fails.

use std::collections::BTreeMap;

use detflow::field::Field;
use detflow::network::{Channel, InputId, Network, Node, NodeId, OutputId};
use detflow::pathfinder::{PathSet, Search};

fn node(id: u32, layer: usize, inputs: &[u32], outputs: &[u32]) -> Node {
    Node {
        id: NodeId(id),
        layer,
        inputs: inputs.iter().map(|&v| InputId(v)).collect(),
        outputs: outputs.iter().map(|&v| OutputId(v)).collect(),
    }
}

fn channels(field: &Field, edges: &[(u32, u32)]) -> Vec<Channel> {
    edges
        .iter()
        .map(|&(i, o)| Channel {
            input: InputId(i),
            output: OutputId(o),
            coeff: field.element(1).unwrap(),
        })
        .collect()
}

/// A four-row relay stage where three committed paths use (1,1), (3,3),
/// (4,4) and a fourth iteration arrives at the node holding inputs 2 and 3.
/// Input 2's only channel lands on output 2, co-located with used output 1,
/// so taking it triggers the phi-function there. The stage matrix restricted
/// to rows {1,2,3,4} and columns {2,3,4} admits exactly two full-rank
/// deletions: dropping row 3 or row 4 (dropping row 1 loses rank).
fn phi_stage_network() -> Network {
    let field = Field::new(2).unwrap();
    let nodes = vec![
        node(0, 1, &[101, 102, 103, 104], &[]),
        node(1, 2, &[1], &[201]),
        node(2, 2, &[2, 3], &[202, 205]),
        node(3, 2, &[4], &[203]),
        node(4, 3, &[301], &[1, 2]),
        node(5, 3, &[302], &[3]),
        node(6, 3, &[303], &[4]),
        node(7, 4, &[], &[401, 402, 403]),
    ];
    let edges = [
        (101, 201),
        (102, 202),
        (103, 203),
        (104, 205),
        (1, 1),
        (1, 2),
        (1, 3),
        (2, 2),
        (3, 1),
        (3, 3),
        (3, 4),
        (4, 3),
        (4, 4),
        (301, 401),
        (302, 402),
        (303, 403),
    ];
    let field2 = field.clone();
    Network::new(field, 4, nodes, channels(&field2, &edges)).unwrap()
}

fn phi_stage_paths() -> PathSet {
    PathSet {
        paths: vec![
            vec![(InputId(101), OutputId(201)), (InputId(1), OutputId(1)), (InputId(301), OutputId(401))],
            vec![(InputId(102), OutputId(202)), (InputId(3), OutputId(3)), (InputId(302), OutputId(402))],
            vec![(InputId(103), OutputId(203)), (InputId(4), OutputId(4)), (InputId(303), OutputId(403))],
        ],
    }
}

#[test]
fn phi_tries_exactly_the_full_rank_deletions() {
    let net = phi_stage_network();
    let mut s = Search::with_paths(&net, &phi_stage_paths()).unwrap();
    s.enable_trace();
    // The destination side is saturated (three receive ports, three paths),
    // so the fourth iteration must fail; both phi branches get exercised.
    assert!(!s.run_iteration());
    let trace = s.trace().to_string();
    assert!(trace.contains("phi cut=2 y=1"), "{trace}");
    // Dropping row 3 rewires to {(1,3),(2,2),(4,4)} and re-explores the
    // freed input 3 at its already-visited node.
    assert!(trace.contains("update cut=2 used={(1,3),(2,2),(4,4)}"), "{trace}");
    let after_first = trace.split("update cut=2 used={(1,3),(2,2),(4,4)}").nth(1).unwrap();
    assert!(after_first.contains("explore-input x=3"), "{trace}");
    // Dropping row 4 rewires to {(1,3),(2,2),(3,4)} and frees input 4.
    assert!(trace.contains("update cut=2 used={(1,3),(2,2),(3,4)}"), "{trace}");
    // Dropping row 1 loses rank, so no rewiring ever matches it: row 1 keeps
    // its wiring in every cut-2 update.
    for line in trace.lines().filter(|l| l.starts_with("update cut=2")) {
        assert!(line.contains("(1,"), "row 1 must stay used: {line}");
    }
    // The failed iteration restores the committed wiring exactly.
    assert_eq!(
        s.used_edges(2),
        vec![
            (InputId(1), OutputId(1)),
            (InputId(3), OutputId(3)),
            (InputId(4), OutputId(4)),
        ]
    );
    assert_eq!(s.k(), 3);
}

#[test]
fn phi_skips_outputs_already_rewired_this_iteration() {
    let net = phi_stage_network();
    let mut s = Search::with_paths(&net, &phi_stage_paths()).unwrap();
    s.enable_trace();
    assert!(!s.run_iteration());
    let trace = s.trace();
    // The once-per-output guard: each output appears in at most one phi
    // event per iteration.
    let mut seen = BTreeMap::new();
    for line in trace.lines().filter(|l| l.starts_with("phi ")) {
        *seen.entry(line.to_string()).or_insert(0) += 1;
    }
    for (line, count) in seen {
        assert_eq!(count, 1, "{line} ran more than once");
    }
}

/// Loads the broadcast-layer fixture and drives the exploration of input 2
/// from a state where a partial path has reached the node holding inputs
/// 1 and 2 (three perceived edges at the feeder cut). Taking (2,2) reaches
/// the node holding used output 1, and the phi-function there admits both
/// deletions of the used stage rows {3, 4}.
#[test]
fn phi_on_broadcast_layer_explores_both_freed_rows() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/ex1-layer.json"
    ))
    .unwrap();
    let net = Network::from_json(&text).unwrap();
    let seed = PathSet {
        paths: vec![
            vec![(InputId(101), OutputId(202)), (InputId(3), OutputId(1)), (InputId(301), OutputId(401))],
            vec![(InputId(102), OutputId(203)), (InputId(4), OutputId(3)), (InputId(302), OutputId(402))],
        ],
    };
    let mut s = Search::with_paths(&net, &seed).unwrap();
    s.enable_trace();
    // Perceive the partial path's feeder edge (104, 201) alongside the two
    // committed ones, as if the iteration had walked it.
    let mut feeder: BTreeMap<InputId, OutputId> = BTreeMap::new();
    feeder.insert(InputId(101), OutputId(202));
    feeder.insert(InputId(102), OutputId(203));
    feeder.insert(InputId(104), OutputId(201));
    s.update(1, feeder).unwrap();
    let reached = s.explore_input(InputId(2));
    let trace = s.trace().to_string();
    assert!(trace.contains("edge x=2 y=2 extend"), "{trace}");
    assert!(trace.contains("phi cut=2 y=1"), "{trace}");
    // Both stage deletions are full rank: dropping row 3 gives
    // {(2,2),(4,3)}, dropping row 4 gives {(2,2),(3,3)}.
    assert!(trace.contains("update cut=2 used={(2,2),(4,3)}"), "{trace}");
    // The destination has four receive rows, so this exploration completes
    // a third path inside the first branch.
    assert!(reached, "{trace}");
}

/// The phi-function returns false and leaves the wiring untouched when
/// every rewiring branch dead-ends.
#[test]
fn phi_returns_false_and_restores_on_dead_ends() {
    // Shrink the stage network so nothing past the relay row can extend:
    // the destination has a single receive port, already used.
    let field = Field::new(2).unwrap();
    let nodes = vec![
        node(0, 1, &[101, 102], &[]),
        node(1, 2, &[1], &[201]),
        node(2, 2, &[2], &[202]),
        node(3, 3, &[301], &[1, 2]),
        node(4, 4, &[], &[401]),
    ];
    let edges = [
        (101, 201),
        (102, 202),
        (1, 1),
        (1, 2),
        (2, 2),
        (301, 401),
    ];
    let field2 = field.clone();
    let net = Network::new(field, 4, nodes, channels(&field2, &edges)).unwrap();
    let seeded = PathSet {
        paths: vec![vec![
            (InputId(101), OutputId(201)),
            (InputId(1), OutputId(1)),
            (InputId(301), OutputId(401)),
        ]],
    };
    let mut s = Search::with_paths(&net, &seeded).unwrap();
    let before = s.used_edges(2);
    // Arrival premise: the partial path sits at the node of input 2, having
    // crossed the feeder cut.
    let mut feeder: BTreeMap<InputId, OutputId> = BTreeMap::new();
    feeder.insert(InputId(101), OutputId(201));
    feeder.insert(InputId(102), OutputId(202));
    s.update(1, feeder).unwrap();
    // (2,2) extends the stage cut and lands on the node of used output 1,
    // but the freed path has nowhere to go: the only forward port is used.
    assert!(!s.phi_function(InputId(2), OutputId(2), OutputId(1)));
    s.restore();
    assert_eq!(s.used_edges(2), before);
}
