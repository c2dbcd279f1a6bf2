//! End-to-end GF(2) maps, rank-based decodability, decoding, and the
//! per-tuple verification pipeline with its exhaustive sweep.

mod diagram;
pub mod oracle;
mod search;
mod sweep;

use std::fmt;

use thiserror::Error;

use crate::cases::{capacity_pair, classify, CapacityPair, CaseLabel};
use crate::detmodel::{
    node_receive_matrix, relay_receive_matrix, relay_truncate_matrix, BinaryMatrix, DiamondParams, Direction,
    LevelVector, Node, Relay,
};
use oracle::Precoders;
use crate::strategies::{candidates, Adjustment, RelayStrategy, StrategyAssignment, StrategyId, Tier, TransmitPlan};

pub use diagram::{Diagram, DiagramError, Row, Section};
pub use search::{local_search, overlap_levels, suppress, SearchBudget};
pub use sweep::{sweep, CaseCell, SweepFilter, SweepReport};

/// Linear maps from each message to each node's received vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndToEndMaps {
    /// A's message bits to B's received levels.
    pub ab: BinaryMatrix,
    /// B's own bits to B's received levels.
    pub bb: BinaryMatrix,
    /// B's message bits to A's received levels.
    pub ba: BinaryMatrix,
    /// A's own bits to A's received levels.
    pub aa: BinaryMatrix,
}

impl EndToEndMaps {
    /// Received vector at `node` for the given messages.
    pub fn received(&self, node: Node, a_bits: &LevelVector, b_bits: &LevelVector) -> LevelVector {
        match node {
            Node::B => self.ab.mul_vec(a_bits).xor(&self.bb.mul_vec(b_bits)),
            Node::A => self.ba.mul_vec(b_bits).xor(&self.aa.mul_vec(a_bits)),
        }
    }
}

fn placement_matrix(plan: &TransmitPlan) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(plan.levels, plan.message_len());
    for (col, &level) in plan.placement.iter().enumerate() {
        m.set(level - 1, col, true);
    }
    m
}

/// The relay map as a matrix on the full received vector.
pub fn relay_full_matrix(strategy: &RelayStrategy, params: &DiamondParams, relay: Relay) -> BinaryMatrix {
    if strategy.adjustment == Adjustment::Tuned {
        strategy.matrix.clone()
    } else {
        strategy.matrix.mul(&relay_truncate_matrix(params, relay))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("assignment does not fit the tuple: {0}")]
    Shape(String),
    #[error("message map has rank {rank} but {needed} bits were sent")]
    Undecodable { rank: usize, needed: usize },
    #[error("received vector is inconsistent with the message map")]
    Inconsistent,
}

fn check_shapes(params: &DiamondParams, a: &StrategyAssignment) -> Result<(), VerifyError> {
    for k in Relay::BOTH {
        let s = &a.relays[k.index()];
        let q_out = params.relay_out_levels(k);
        let want_cols = if s.adjustment == Adjustment::Tuned { params.relay_in_levels(k) } else { q_out };
        if s.matrix.rows() != q_out || s.matrix.cols() != want_cols {
            return Err(VerifyError::Shape(format!(
                "{k} map is {}x{}, expected {q_out}x{want_cols}",
                s.matrix.rows(),
                s.matrix.cols()
            )));
        }
    }
    for (node, plan) in [(Node::A, &a.plans[0]), (Node::B, &a.plans[1])] {
        if plan.levels != params.node_tx_levels(node) || !plan.is_injective() {
            return Err(VerifyError::Shape(format!("{node} plan does not fit {} levels", params.node_tx_levels(node))));
        }
    }
    Ok(())
}

/// Composes placement, uplinks, relay maps and downlinks over GF(2).
pub fn build_end_to_end(params: &DiamondParams, a: &StrategyAssignment) -> Result<EndToEndMaps, VerifyError> {
    check_shapes(params, a)?;
    let pa = placement_matrix(&a.plans[0]);
    let pb = placement_matrix(&a.plans[1]);
    let through = |src: Node, dst: Node, placement: &BinaryMatrix| {
        let mut total = BinaryMatrix::zeros(params.node_rx_levels(dst), placement.cols());
        for k in Relay::BOTH {
            let relay = relay_full_matrix(&a.relays[k.index()], params, k);
            let path = node_receive_matrix(params, k, dst)
                .mul(&relay)
                .mul(&relay_receive_matrix(params, k, src))
                .mul(placement);
            total = total.add(&path);
        }
        total
    };
    Ok(EndToEndMaps {
        ab: through(Node::A, Node::B, &pa),
        bb: through(Node::B, Node::B, &pb),
        ba: through(Node::B, Node::A, &pb),
        aa: through(Node::A, Node::A, &pa),
    })
}

/// Recovers the peer's message in direction `dir` from the destination's
/// received vector and its own bits.
pub fn decode(maps: &EndToEndMaps, received: &LevelVector, own: &LevelVector, dir: Direction) -> Result<LevelVector, VerifyError> {
    let (msg, own_map) = match dir {
        Direction::Forward => (&maps.ab, &maps.bb),
        Direction::Backward => (&maps.ba, &maps.aa),
    };
    let rank = msg.rank();
    if rank < msg.cols() {
        return Err(VerifyError::Undecodable { rank, needed: msg.cols() });
    }
    let clean = received.xor(&own_map.mul_vec(own));
    msg.solve(&clean).ok_or(VerifyError::Inconsistent)
}

/// Which step of the verification pipeline produced the reported assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    /// The selection table's assignment.
    Primary,
    /// Another strategy of the same family.
    Fallback,
    /// A candidate with overlapping levels silenced at one relay.
    Suppressed(Relay),
    /// Local search over relay maps and placements.
    Search,
    /// Exhaustive search over placements and relay maps.
    Exhaustive,
    /// Nothing reached both capacities.
    Fail,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Primary => f.write_str("primary"),
            Stage::Fallback => f.write_str("fallback"),
            Stage::Suppressed(k) => write!(f, "suppress-{k}"),
            Stage::Search => f.write_str("search"),
            Stage::Exhaustive => f.write_str("exhaustive"),
            Stage::Fail => f.write_str("fail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub params: DiamondParams,
    /// Forward then backward label; `None` for a direction with a zero gain.
    pub labels: [Option<CaseLabel>; 2],
    pub strategies: [StrategyId; 2],
    pub stage: Stage,
    pub rank_ab: usize,
    pub rank_ba: usize,
    pub capacity: CapacityPair,
    pub pass: bool,
    pub assignment: StrategyAssignment,
}

impl VerifyReport {
    fn new(params: &DiamondParams, stage: Stage, assignment: StrategyAssignment) -> Self {
        let (rank_ab, rank_ba) = assignment.ranks(params);
        let capacity = capacity_pair(params);
        VerifyReport {
            params: *params,
            labels: [classify(params, Direction::Forward).ok(), classify(params, Direction::Backward).ok()],
            strategies: assignment.ids(),
            stage,
            rank_ab,
            rank_ba,
            capacity,
            pass: rank_ab == capacity.ab && rank_ba == capacity.ba,
            assignment,
        }
    }

    pub fn summary(&self) -> TupleSummary {
        TupleSummary {
            params: self.params,
            labels: self.labels,
            strategies: self.strategies,
            stage: self.stage,
            rank_ab: self.rank_ab,
            rank_ba: self.rank_ba,
            capacity: self.capacity,
            pass: self.pass,
        }
    }

    /// One plain-text record: space-separated `key=value` fields.
    pub fn record(&self) -> String {
        self.summary().record()
    }

    pub fn diagram(&self) -> Diagram {
        Diagram::symbolic(&self.params, &self.assignment)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |l: &Option<CaseLabel>| l.map_or("degenerate".to_string(), |l| l.to_string());
        writeln!(f, "params     {}", self.params)?;
        writeln!(f, "cases      forward {} / backward {}", label(&self.labels[0]), label(&self.labels[1]))?;
        writeln!(f, "relays     R1 {} / R2 {}", self.strategies[0], self.strategies[1])?;
        writeln!(f, "stage      {}", self.stage)?;
        writeln!(f, "A -> B     rank {} of {}", self.rank_ab, self.capacity.ab)?;
        writeln!(f, "B -> A     rank {} of {}", self.rank_ba, self.capacity.ba)?;
        write!(f, "verdict    {}", if self.pass { "pass" } else { "FAIL" })
    }
}

/// A report without the assignment, as kept for every tuple of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleSummary {
    pub params: DiamondParams,
    pub labels: [Option<CaseLabel>; 2],
    pub strategies: [StrategyId; 2],
    pub stage: Stage,
    pub rank_ab: usize,
    pub rank_ba: usize,
    pub capacity: CapacityPair,
    pub pass: bool,
}

impl TupleSummary {
    /// Fields: `params fwd bwd r1 r2 stage rank_ab c_ab rank_ba c_ba pass`.
    pub fn record(&self) -> String {
        let label = |l: &Option<CaseLabel>| l.map_or("degenerate".to_string(), |l| l.to_string());
        format!(
            "params={} fwd={} bwd={} r1={} r2={} stage={} rank_ab={} c_ab={} rank_ba={} c_ba={} pass={}",
            self.params,
            label(&self.labels[0]),
            label(&self.labels[1]),
            self.strategies[0],
            self.strategies[1],
            self.stage,
            self.rank_ab,
            self.capacity.ab,
            self.rank_ba,
            self.capacity.ba,
            u8::from(self.pass)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub suppression: bool,
    pub search: Option<SearchBudget>,
    /// Largest exhaustive search attempted, in bits of search-space size.
    pub exhaustive_log2: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { suppression: true, search: Some(SearchBudget::default()), exhaustive_log2: Some(24.0) }
    }
}

impl VerifyOptions {
    /// Table and family candidates only.
    pub fn table_only() -> Self {
        VerifyOptions { suppression: false, search: None, exhaustive_log2: None }
    }
}

pub fn verify_tuple(params: &DiamondParams) -> VerifyReport {
    verify_tuple_with(params, &VerifyOptions::default())
}

/// Runs the pipeline: table candidates, the rest of the family, overlap
/// suppression on every candidate, local search from the first table
/// candidate, then exhaustive search when the space is small. Reports
/// the first assignment reaching both capacities, or the first table
/// candidate on failure.
pub fn verify_tuple_with(params: &DiamondParams, opts: &VerifyOptions) -> VerifyReport {
    let cands = candidates(params);
    let target = capacity_pair(params);
    let hits = |a: &StrategyAssignment| a.ranks(params) == (target.ab, target.ba);
    for c in &cands {
        if hits(&c.assignment) {
            let stage = if c.tier == Tier::Table { Stage::Primary } else { Stage::Fallback };
            return VerifyReport::new(params, stage, c.assignment.clone());
        }
    }
    if opts.suppression {
        for c in &cands {
            for k in Relay::BOTH {
                if let Some(a) = suppress(params, &c.assignment, k) {
                    if hits(&a) {
                        return VerifyReport::new(params, Stage::Suppressed(k), a);
                    }
                }
            }
        }
    }
    let first = cands[0].assignment.clone();
    if let Some(budget) = opts.search {
        if let Some(a) = local_search(params, &first, budget) {
            return VerifyReport::new(params, Stage::Search, a);
        }
    }
    if let Some(limit) = opts.exhaustive_log2 {
        if let Some(a) = oracle::exhaustive(params, Precoders::Placements, limit).assignment(params, first.ids()) {
            return VerifyReport::new(params, Stage::Exhaustive, a);
        }
    }
    VerifyReport::new(params, Stage::Fail, first)
}

/// Report for a caller-supplied assignment, bypassing the pipeline.
pub fn verify_assignment(params: &DiamondParams, assignment: &StrategyAssignment) -> Result<VerifyReport, VerifyError> {
    check_shapes(params, assignment)?;
    let stage = if assignment.achieves_capacity(params) { Stage::Primary } else { Stage::Fail };
    Ok(VerifyReport::new(params, stage, assignment.clone()))
}
