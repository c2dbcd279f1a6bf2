//! Channel parameters, level vectors, GF(2) matrices and the propagation
//! rules of the two-way linear deterministic diamond channel.
//!
//! A link of gain `n` from a transmitter with `q` levels delivers the top `n`
//! transmitted levels onto the receiver's bottom `n` levels. Contributions
//! from different transmitters add modulo 2.

mod level;
mod matrix;
pub mod network;

use std::fmt;
use std::str::FromStr;

pub use level::LevelVector;
pub use matrix::{rank_of_masks, BinaryMatrix};

use thiserror::Error;

/// Largest gain accepted for any link. Symbolic simulation packs each
/// direction's message bits into 64-bit halves of a `u128`.
pub const MAX_GAIN: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("expected 8 comma-separated gains, found {0}")]
    Arity(usize),
    #[error("could not parse gain {0:?}")]
    Parse(String),
    #[error("gain {0} exceeds the supported maximum of {MAX_GAIN}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relay {
    R1,
    R2,
}

impl Relay {
    pub const BOTH: [Relay; 2] = [Relay::R1, Relay::R2];

    pub fn index(self) -> usize {
        match self {
            Relay::R1 => 0,
            Relay::R2 => 1,
        }
    }

    pub fn from_index(i: usize) -> Relay {
        match i {
            0 => Relay::R1,
            1 => Relay::R2,
            _ => panic!("relay index {i} out of range"),
        }
    }

    pub fn other(self) -> Relay {
        match self {
            Relay::R1 => Relay::R2,
            Relay::R2 => Relay::R1,
        }
    }
}

impl fmt::Display for Relay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    A,
    B,
}

impl Node {
    pub fn other(self) -> Node {
        match self {
            Node::A => Node::B,
            Node::B => Node::A,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Node::A => "A",
            Node::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// A to B.
    Forward,
    /// B to A.
    Backward,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn source(self) -> Node {
        match self {
            Direction::Forward => Node::A,
            Direction::Backward => Node::B,
        }
    }

    pub fn destination(self) -> Node {
        self.source().other()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// The four gains that serve one direction: source to each relay (`up`)
/// and each relay to the destination (`down`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneWay {
    pub up: [usize; 2],
    pub down: [usize; 2],
}

impl OneWay {
    pub fn new(up1: usize, up2: usize, down1: usize, down2: usize) -> Self {
        OneWay { up: [up1, up2], down: [down1, down2] }
    }

    pub fn source_levels(&self) -> usize {
        self.up[0].max(self.up[1])
    }

    pub fn destination_levels(&self) -> usize {
        self.down[0].max(self.down[1])
    }

    /// True when some link of this direction has zero gain.
    pub fn is_degenerate(&self) -> bool {
        self.up.contains(&0) || self.down.contains(&0)
    }

    /// The same direction with the relays relabeled.
    pub fn swap_relays(&self) -> OneWay {
        OneWay { up: [self.up[1], self.up[0]], down: [self.down[1], self.down[0]] }
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.up[0], self.up[1], self.down[0], self.down[1]]
    }
}

impl fmt::Display for OneWay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.up[0], self.up[1], self.down[0], self.down[1])
    }
}

/// The eight link gains of the two-way diamond, in the order
/// A→R1, A→R2, R1→B, R2→B, B→R1, B→R2, R1→A, R2→A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiamondParams {
    gains: [usize; 8],
}

impl DiamondParams {
    pub fn new(gains: [usize; 8]) -> Result<Self, ParamError> {
        if let Some(&g) = gains.iter().find(|&&g| g > MAX_GAIN) {
            return Err(ParamError::TooLarge(g));
        }
        Ok(DiamondParams { gains })
    }

    /// Panics when a gain exceeds [`MAX_GAIN`]. Intended for literals.
    pub fn of(gains: [usize; 8]) -> Self {
        Self::new(gains).expect("invalid gains")
    }

    pub fn from_directions(forward: OneWay, backward: OneWay) -> Result<Self, ParamError> {
        let [a, b, c, d] = forward.as_array();
        let [e, f, g, h] = backward.as_array();
        Self::new([a, b, c, d, e, f, g, h])
    }

    pub fn gains(&self) -> [usize; 8] {
        self.gains
    }

    pub fn forward(&self) -> OneWay {
        let g = &self.gains;
        OneWay::new(g[0], g[1], g[2], g[3])
    }

    pub fn backward(&self) -> OneWay {
        let g = &self.gains;
        OneWay::new(g[4], g[5], g[6], g[7])
    }

    pub fn direction(&self, dir: Direction) -> OneWay {
        match dir {
            Direction::Forward => self.forward(),
            Direction::Backward => self.backward(),
        }
    }

    /// Exchanges the roles of A and B, so the backward channel becomes the forward one.
    pub fn swap_direction(&self) -> DiamondParams {
        let g = &self.gains;
        DiamondParams { gains: [g[4], g[5], g[6], g[7], g[0], g[1], g[2], g[3]] }
    }

    pub fn swap_relays(&self) -> DiamondParams {
        let g = &self.gains;
        DiamondParams { gains: [g[1], g[0], g[3], g[2], g[5], g[4], g[7], g[6]] }
    }

    /// Gain from `node` to `relay`.
    pub fn uplink(&self, node: Node, relay: Relay) -> usize {
        match node {
            Node::A => self.gains[relay.index()],
            Node::B => self.gains[4 + relay.index()],
        }
    }

    /// Gain from `relay` to `node`.
    pub fn downlink(&self, relay: Relay, node: Node) -> usize {
        match node {
            Node::B => self.gains[2 + relay.index()],
            Node::A => self.gains[6 + relay.index()],
        }
    }

    /// Number of transmit levels at `node` (the strongest uplink).
    pub fn node_tx_levels(&self, node: Node) -> usize {
        self.uplink(node, Relay::R1).max(self.uplink(node, Relay::R2))
    }

    /// Number of receive levels at `node` (the strongest downlink).
    pub fn node_rx_levels(&self, node: Node) -> usize {
        self.downlink(Relay::R1, node).max(self.downlink(Relay::R2, node))
    }

    pub fn relay_in_levels(&self, relay: Relay) -> usize {
        self.uplink(Node::A, relay).max(self.uplink(Node::B, relay))
    }

    pub fn relay_out_levels(&self, relay: Relay) -> usize {
        self.downlink(relay, Node::A).max(self.downlink(relay, Node::B))
    }
}

impl fmt::Display for DiamondParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.gains.iter().map(usize::to_string).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for DiamondParams {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 8 {
            return Err(ParamError::Arity(parts.len()));
        }
        let mut gains = [0; 8];
        for (g, p) in gains.iter_mut().zip(&parts) {
            *g = p.parse().map_err(|_| ParamError::Parse(p.to_string()))?;
        }
        Self::new(gains)
    }
}

/// Matrix (relay input levels × `source` transmit levels) giving the
/// contribution of `source` at `relay`.
pub fn relay_receive_matrix(params: &DiamondParams, relay: Relay, source: Node) -> BinaryMatrix {
    let n = params.uplink(source, relay);
    let q_src = params.node_tx_levels(source);
    let mut m = BinaryMatrix::zeros(params.relay_in_levels(relay), q_src);
    for j in 1..=n {
        m.set(j - 1, q_src - n + j - 1, true);
    }
    m
}

/// Matrix (relay output levels × relay input levels) keeping the bottom
/// levels of the received signal that the relay can retransmit.
pub fn relay_truncate_matrix(params: &DiamondParams, relay: Relay) -> BinaryMatrix {
    let q_in = params.relay_in_levels(relay);
    let q_out = params.relay_out_levels(relay);
    let mut m = BinaryMatrix::zeros(q_out, q_in);
    for j in 0..q_in.min(q_out) {
        m.set(j, j, true);
    }
    m
}

/// The relay's working vector: the bottom `min(in, out)` received levels,
/// zero-padded on top to the relay's output length.
///
/// # Panics
/// When `y` does not have the relay's input length.
pub fn relay_input_truncate(params: &DiamondParams, relay: Relay, y: &LevelVector) -> LevelVector {
    assert_eq!(y.len(), params.relay_in_levels(relay), "received vector has wrong length for {relay}");
    relay_truncate_matrix(params, relay).mul_vec(y)
}

/// Matrix (`dest` receive levels × relay output levels) giving the
/// contribution of `relay` at `dest`.
pub fn node_receive_matrix(params: &DiamondParams, relay: Relay, dest: Node) -> BinaryMatrix {
    let n = params.downlink(relay, dest);
    let q_out = params.relay_out_levels(relay);
    let mut m = BinaryMatrix::zeros(params.node_rx_levels(dest), q_out);
    for j in 1..=n {
        m.set(j - 1, q_out - n + j - 1, true);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p: DiamondParams = "6,2,3,7,6,3,4,8".parse().unwrap();
        assert_eq!(p.to_string(), "6,2,3,7,6,3,4,8");
        assert_eq!(p.forward(), OneWay::new(6, 2, 3, 7));
        assert_eq!(p.backward(), OneWay::new(6, 3, 4, 8));
        assert_eq!("1,2".parse::<DiamondParams>(), Err(ParamError::Arity(2)));
        assert!(matches!("1,2,3,4,5,6,7,x".parse::<DiamondParams>(), Err(ParamError::Parse(_))));
        assert_eq!("1,2,3,4,5,6,7,65".parse::<DiamondParams>(), Err(ParamError::TooLarge(65)));
    }

    #[test]
    fn derived_level_counts() {
        let p = DiamondParams::of([6, 2, 3, 7, 6, 3, 4, 8]);
        assert_eq!(p.node_tx_levels(Node::A), 6);
        assert_eq!(p.node_rx_levels(Node::B), 7);
        assert_eq!(p.node_tx_levels(Node::B), 6);
        assert_eq!(p.node_rx_levels(Node::A), 8);
        assert_eq!(p.relay_in_levels(Relay::R1), 6);
        assert_eq!(p.relay_in_levels(Relay::R2), 3);
        assert_eq!(p.relay_out_levels(Relay::R1), 4);
        assert_eq!(p.relay_out_levels(Relay::R2), 8);
    }

    #[test]
    fn relay_sees_top_levels_bottom_aligned() {
        // A reaches the relay with 3 levels and B with 6.
        let p = DiamondParams::of([3, 0, 1, 0, 6, 0, 1, 0]);
        let ha = relay_receive_matrix(&p, Relay::R1, Node::A);
        let hb = relay_receive_matrix(&p, Relay::R1, Node::B);
        let xa = LevelVector::from_top_down(&[1, 0, 1]);
        let xb = LevelVector::from_top_down(&[0, 1, 1, 0, 1, 1]);
        let y = ha.mul_vec(&xa).xor(&hb.mul_vec(&xb));
        // [b6, b5, b4, b3+a3, b2+a2, b1+a1]
        assert_eq!(y, LevelVector::from_top_down(&[0, 1, 1, 1, 1, 0]));
    }

    #[test]
    fn truncation_pads_or_cuts() {
        let p = DiamondParams::of([6, 0, 7, 0, 0, 0, 0, 0]);
        let y = LevelVector::from_top_down(&[1, 0, 0, 0, 0, 1]);
        assert_eq!(relay_input_truncate(&p, Relay::R1, &y), LevelVector::from_top_down(&[0, 1, 0, 0, 0, 0, 1]));
        let p = DiamondParams::of([6, 0, 4, 0, 0, 0, 0, 0]);
        assert_eq!(relay_input_truncate(&p, Relay::R1, &y), LevelVector::from_top_down(&[0, 0, 0, 1]));
    }

    #[test]
    fn node_sees_relay_top_levels() {
        let p = DiamondParams::of([6, 2, 3, 7, 0, 0, 0, 0]);
        let h1 = node_receive_matrix(&p, Relay::R1, Node::B);
        let h2 = node_receive_matrix(&p, Relay::R2, Node::B);
        assert_eq!((h1.rows(), h1.cols()), (7, 3));
        assert_eq!((h2.rows(), h2.cols()), (7, 7));
        assert_eq!(h2, BinaryMatrix::identity(7));
        for j in 0..3 {
            assert!(h1.get(j, j));
        }
        assert_eq!(h1.rank(), 3);
    }

    #[test]
    fn zero_gain_gives_zero_matrix() {
        let p = DiamondParams::of([0, 2, 3, 0, 1, 1, 1, 1]);
        assert!(relay_receive_matrix(&p, Relay::R1, Node::A).is_zero());
        assert!(node_receive_matrix(&p, Relay::R2, Node::B).is_zero());
    }
}
