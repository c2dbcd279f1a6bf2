//! Symbolic one-block simulation of the full network.
//!
//! Each level carries a [`Symbols`] mask naming the message bits that are
//! XORed onto it: bit `m` is A's message bit `m + 1` and bit `64 + m` is B's.

use super::{rank_of_masks, DiamondParams, Node, Relay};

pub type Symbols = u128;

pub const A_SYMBOLS: Symbols = u64::MAX as u128;
pub const B_SHIFT: u32 = 64;

pub fn a_part(s: Symbols) -> u64 {
    s as u64
}

pub fn b_part(s: Symbols) -> u64 {
    (s >> B_SHIFT) as u64
}

/// Symbolic transmit vector: message bit `m + 1` sits on level `placement[m]`.
pub fn transmit_symbols(levels: usize, placement: &[usize], node: Node) -> Vec<Symbols> {
    let shift = match node {
        Node::A => 0,
        Node::B => B_SHIFT,
    };
    let mut x = vec![0; levels];
    for (m, &l) in placement.iter().enumerate() {
        x[l - 1] ^= 1 << (shift + m as u32);
    }
    x
}

/// A relay's linear map on its full received vector: `rows[l]` is the mask
/// of received levels XORed onto output level `l + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelayOperator {
    pub inputs: usize,
    pub rows: Vec<u64>,
}

impl RelayOperator {
    pub fn outputs(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, y: &[Symbols]) -> Vec<Symbols> {
        debug_assert_eq!(y.len(), self.inputs);
        self.rows
            .iter()
            .map(|&mask| {
                let mut v = 0;
                let mut m = mask;
                while m != 0 {
                    let j = m.trailing_zeros() as usize;
                    v ^= y[j];
                    m &= m - 1;
                }
                v
            })
            .collect()
    }
}

/// Every intermediate signal of one block, bottom level first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub tx: [Vec<Symbols>; 2],
    pub relay_in: [Vec<Symbols>; 2],
    pub relay_out: [Vec<Symbols>; 2],
    /// Indexed by node: A then B.
    pub rx: [Vec<Symbols>; 2],
}

impl Snapshot {
    pub fn rank_ab(&self) -> usize {
        rank_of_masks(self.rx[1].iter().map(|&s| a_part(s) as u128))
    }

    pub fn rank_ba(&self) -> usize {
        rank_of_masks(self.rx[0].iter().map(|&s| b_part(s) as u128))
    }
}

pub fn node_index(node: Node) -> usize {
    match node {
        Node::A => 0,
        Node::B => 1,
    }
}

pub fn relay_inputs(params: &DiamondParams, xa: &[Symbols], xb: &[Symbols]) -> [Vec<Symbols>; 2] {
    Relay::BOTH.map(|k| {
        let mut y = vec![0; params.relay_in_levels(k)];
        for (node, x) in [(Node::A, xa), (Node::B, xb)] {
            let n = params.uplink(node, k);
            let q = x.len();
            for j in 0..n {
                y[j] ^= x[q - n + j];
            }
        }
        y
    })
}

/// Received vectors at A and B given both relays' outputs.
pub fn node_inputs(params: &DiamondParams, outputs: &[Vec<Symbols>; 2]) -> [Vec<Symbols>; 2] {
    [Node::A, Node::B].map(|node| {
        let mut y = vec![0; params.node_rx_levels(node)];
        for k in Relay::BOTH {
            let t = &outputs[k.index()];
            let n = params.downlink(k, node);
            let q = t.len();
            for j in 0..n {
                y[j] ^= t[q - n + j];
            }
        }
        y
    })
}

pub fn simulate(
    params: &DiamondParams,
    placements: [&[usize]; 2],
    operators: [&RelayOperator; 2],
) -> Snapshot {
    let xa = transmit_symbols(params.node_tx_levels(Node::A), placements[0], Node::A);
    let xb = transmit_symbols(params.node_tx_levels(Node::B), placements[1], Node::B);
    let relay_in = relay_inputs(params, &xa, &xb);
    let relay_out = [operators[0].apply(&relay_in[0]), operators[1].apply(&relay_in[1])];
    let rx = node_inputs(params, &relay_out);
    Snapshot { tx: [xa, xb], relay_in, relay_out, rx }
}

/// `(rank at B of A's message, rank at A of B's message)`.
pub fn ranks(params: &DiamondParams, placements: [&[usize]; 2], operators: [&RelayOperator; 2]) -> (usize, usize) {
    let s = simulate(params, placements, operators);
    (s.rank_ab(), s.rank_ba())
}
