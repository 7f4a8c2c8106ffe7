//! Hand-built networks shared by the unit tests.

use crate::field::Field;
use crate::network::{Channel, InputId, Network, Node, NodeId, OutputId};

pub fn node(id: u32, layer: usize, inputs: &[u32], outputs: &[u32]) -> Node {
    Node {
        id: NodeId(id),
        layer,
        inputs: inputs.iter().map(|&v| InputId(v)).collect(),
        outputs: outputs.iter().map(|&v| OutputId(v)).collect(),
    }
}

/// The two-relay-row binary network used across the crate's tests:
/// S{x1,x2} -> A1{y1,y2;x3}, A2{y3;x4} -> B1{y6;x5}, B2{y7;x6,x7} -> D{y8,y9}.
/// Broadcast at x1 (feeds y1 and y3), interference at y6 and y7 (each sums
/// x3 and x4). Its min-cut over GF(2) is 1: the middle cut matrix is all-ones.
pub fn two_row_binary() -> Network {
    let field = Field::new(2).unwrap();
    build_two_row(field, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1])
}

/// Same topology with per-channel coefficients over an arbitrary field.
/// Channel order: (1,1),(1,3),(2,2),(3,6),(3,7),(4,6),(4,7),(5,9),(6,8),(7,9).
pub fn build_two_row(field: Field, coeffs: &[u32; 10]) -> Network {
    let nodes = vec![
        node(0, 1, &[1, 2], &[]),
        node(1, 2, &[3], &[1, 2]),
        node(2, 2, &[4], &[3]),
        node(3, 3, &[5], &[6]),
        node(4, 3, &[6, 7], &[7]),
        node(5, 4, &[], &[8, 9]),
    ];
    let edges = [
        (1, 1),
        (1, 3),
        (2, 2),
        (3, 6),
        (3, 7),
        (4, 6),
        (4, 7),
        (5, 9),
        (6, 8),
        (7, 9),
    ];
    let channels = edges
        .iter()
        .zip(coeffs.iter())
        .map(|(&(i, o), &c)| Channel {
            input: InputId(i),
            output: OutputId(o),
            coeff: field.element(c).unwrap(),
        })
        .collect();
    Network::new(field, 4, nodes, channels).unwrap()
}

/// GF(4) variant of [`two_row_binary`] where channel (4,7) carries
/// coefficient 2, making the middle cut full rank.
pub fn two_row_gf4() -> Network {
    let field = Field::new(4).unwrap();
    build_two_row(field, &[1, 1, 1, 1, 1, 1, 2, 1, 1, 1])
}

/// Four parallel relay rows with the five-input broadcast layer used by the
/// rewiring tests: S fans out to A1..A4, the A-layer transmits x1..x5 into
/// the B-layer receive ports y1..y5, and each B row forwards to D.
///
/// Middle-cut channels: (x1,y1),(x2,y2),(x3,y1),(x3,y3),(x4,y3),(x4,y4),
/// (x5,y1),(x5,y4),(x5,y5). S reaches A2 first, then A3, then A4, then A1.
pub fn broadcast_row_binary() -> Network {
    let field = Field::new(2).unwrap();
    let nodes = vec![
        node(0, 1, &[101, 102, 103, 104], &[]),
        node(1, 2, &[1, 2], &[201]),
        node(2, 2, &[3], &[202]),
        node(3, 2, &[4], &[203]),
        node(4, 2, &[5], &[204]),
        node(5, 3, &[301], &[1, 2]),
        node(6, 3, &[302], &[3]),
        node(7, 3, &[303], &[4]),
        node(8, 3, &[304], &[5]),
        node(9, 4, &[], &[401, 402, 403, 404]),
    ];
    let edges = [
        (101, 202),
        (102, 203),
        (103, 204),
        (104, 201),
        (1, 1),
        (2, 2),
        (3, 1),
        (3, 3),
        (4, 3),
        (4, 4),
        (5, 1),
        (5, 4),
        (5, 5),
        (301, 401),
        (302, 402),
        (303, 403),
        (304, 404),
    ];
    let channels = edges
        .iter()
        .map(|&(i, o)| Channel {
            input: InputId(i),
            output: OutputId(o),
            coeff: field.element(1).unwrap(),
        })
        .collect();
    Network::new(field, 4, nodes, channels).unwrap()
}

/// The cross-layer rewiring network: S{x1,x2} -> A1{y1;x3}, A2{y2;x4},
/// A3{y3;x5} -> B1{y4;x6}, B2{y5;x7} -> D{y6,y7}, all coefficients 1 over
/// GF(2). Finding a second path requires substituting a dependent row at
/// the middle cut and rewiring the first cut behind it.
pub fn cross_layer_binary() -> Network {
    let field = Field::new(2).unwrap();
    let nodes = vec![
        node(0, 1, &[1, 2], &[]),
        node(1, 2, &[3], &[1]),
        node(2, 2, &[4], &[2]),
        node(3, 2, &[5], &[3]),
        node(4, 3, &[6], &[4]),
        node(5, 3, &[7], &[5]),
        node(6, 4, &[], &[6, 7]),
    ];
    let edges = [
        (1, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 4),
        (4, 5),
        (5, 4),
        (5, 5),
        (6, 6),
        (7, 7),
    ];
    let channels = edges
        .iter()
        .map(|&(i, o)| Channel {
            input: InputId(i),
            output: OutputId(o),
            coeff: field.element(1).unwrap(),
        })
        .collect();
    Network::new(field, 4, nodes, channels).unwrap()
}
