use crate::cases::capacity_pair;
use crate::detmodel::network::{a_part, b_part, ranks, relay_inputs, transmit_symbols, RelayOperator, Symbols};
use crate::detmodel::{BinaryMatrix, DiamondParams, Node, Relay};
use crate::strategies::{Adjustment, RelayStrategy, StrategyAssignment, TransmitPlan};

use super::relay_full_matrix;

fn relay_outputs(params: &DiamondParams, a: &StrategyAssignment) -> [Vec<Symbols>; 2] {
    let xa = transmit_symbols(params.node_tx_levels(Node::A), &a.plans[0].placement, Node::A);
    let xb = transmit_symbols(params.node_tx_levels(Node::B), &a.plans[1].placement, Node::B);
    let y = relay_inputs(params, &xa, &xb);
    Relay::BOTH.map(|k| a.relays[k.index()].operator(params, k).apply(&y[k.index()]))
}

/// Output levels (1 = bottom) of `relay` whose content duplicates what the
/// other relay puts on the same received level at a node: A's part is
/// compared at B and B's part at A.
pub fn overlap_levels(params: &DiamondParams, a: &StrategyAssignment, relay: Relay) -> Vec<usize> {
    let out = relay_outputs(params, a);
    let other = relay.other();
    let (mine, theirs) = (&out[relay.index()], &out[other.index()]);
    let mut hits = Vec::new();
    for (l, &s) in mine.iter().enumerate() {
        let p = mine.len() - l;
        let dup = [(Node::B, a_part as fn(Symbols) -> u64), (Node::A, b_part)].iter().any(|&(node, part)| {
            let n = params.downlink(relay, node);
            let m = params.downlink(other, node);
            if p > n || part(s) == 0 {
                return false;
            }
            // Same received level j = n - p + 1 from the other relay's position m - j + 1.
            let j = n - p + 1;
            if j > m {
                return false;
            }
            let q = m - j + 1;
            part(theirs[theirs.len() - q]) == part(s)
        });
        if dup {
            hits.push(l + 1);
        }
    }
    hits
}

/// The assignment with `relay`'s overlapping output levels silenced, or
/// `None` when it has none.
pub fn suppress(params: &DiamondParams, a: &StrategyAssignment, relay: Relay) -> Option<StrategyAssignment> {
    let levels = overlap_levels(params, a, relay);
    if levels.is_empty() {
        return None;
    }
    let mut out = a.clone();
    let s = &mut out.relays[relay.index()];
    for &l in &levels {
        for j in 0..s.matrix.cols() {
            s.matrix.set(l - 1, j, false);
        }
    }
    s.adjustment = Adjustment::Suppressed(levels);
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Upper bound on rank evaluations.
    pub evaluations: usize,
    /// 1 tries single moves; 2 also tries pairs of moves.
    pub depth: u8,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { evaluations: 400_000, depth: 2 }
    }
}

#[derive(Clone)]
struct State {
    ops: [RelayOperator; 2],
    plans: [Vec<usize>; 2],
}

#[derive(Clone, Copy)]
enum Move {
    Flip { relay: usize, row: usize, col: usize },
    Swap { relay: usize, rows: (usize, usize) },
    Place { node: usize, bit: usize, level: usize },
}

impl State {
    fn apply(&self, mv: Move) -> State {
        let mut s = self.clone();
        match mv {
            Move::Flip { relay, row, col } => s.ops[relay].rows[row] ^= 1 << col,
            Move::Swap { relay, rows: (i, j) } => s.ops[relay].rows.swap(i, j),
            Move::Place { node, bit, level } => s.plans[node][bit] = level,
        }
        s
    }

    fn moves(&self, tx_levels: [usize; 2]) -> Vec<Move> {
        let mut out = Vec::new();
        for (relay, op) in self.ops.iter().enumerate() {
            for row in 0..op.outputs() {
                for col in 0..op.inputs {
                    out.push(Move::Flip { relay, row, col });
                }
            }
        }
        for (relay, op) in self.ops.iter().enumerate() {
            for i in 0..op.outputs() {
                for j in i + 1..op.outputs() {
                    if op.rows[i] != op.rows[j] {
                        out.push(Move::Swap { relay, rows: (i, j) });
                    }
                }
            }
        }
        for node in 0..2 {
            for bit in 0..self.plans[node].len() {
                for level in 1..=tx_levels[node] {
                    if !self.plans[node].contains(&level) {
                        out.push(Move::Place { node, bit, level });
                    }
                }
            }
        }
        out
    }
}

/// Hill climbing on `rank_ab + rank_ba` from `start`. A move flips one
/// relay entry, exchanges two relay output rows, or moves one message bit
/// to an idle level. Single moves are tried before pairs, and the first
/// improvement in a fixed order is taken.
pub fn local_search(params: &DiamondParams, start: &StrategyAssignment, budget: SearchBudget) -> Option<StrategyAssignment> {
    let c = capacity_pair(params);
    let goal = c.ab + c.ba;
    let tx = [params.node_tx_levels(Node::A), params.node_tx_levels(Node::B)];
    let mut left = budget.evaluations;
    let mut score = |s: &State| -> Option<usize> {
        if left == 0 {
            return None;
        }
        left -= 1;
        let (ab, ba) = ranks(params, [&s.plans[0], &s.plans[1]], [&s.ops[0], &s.ops[1]]);
        Some(ab + ba)
    };
    let ops = Relay::BOTH.map(|k| {
        let m = relay_full_matrix(&start.relays[k.index()], params, k);
        RelayOperator { inputs: m.cols(), rows: (0..m.rows()).map(|l| m.row_mask(l) as u64).collect() }
    });
    let mut state = State { ops, plans: [start.plans[0].placement.clone(), start.plans[1].placement.clone()] };
    let mut current = score(&state)?;
    'climb: while current < goal {
        let moves = state.moves(tx);
        for &mv in &moves {
            let next = state.apply(mv);
            let v = score(&next)?;
            if v > current {
                state = next;
                current = v;
                continue 'climb;
            }
        }
        if budget.depth >= 2 {
            for &mv in &moves {
                let mid = state.apply(mv);
                for mv2 in mid.moves(tx) {
                    let next = mid.apply(mv2);
                    let v = score(&next)?;
                    if v > current {
                        state = next;
                        current = v;
                        continue 'climb;
                    }
                }
            }
        }
        return None;
    }
    let relays = Relay::BOTH.map(|k| {
        let op = &state.ops[k.index()];
        let masks: Vec<u128> = op.rows.iter().map(|&r| r as u128).collect();
        RelayStrategy {
            id: start.relays[k.index()].id,
            matrix: BinaryMatrix::from_row_masks(&masks, op.inputs),
            adjustment: Adjustment::Tuned,
        }
    });
    let [pa, pb] = state.plans;
    Some(StrategyAssignment {
        relays,
        plans: [TransmitPlan { levels: tx[0], placement: pa }, TransmitPlan { levels: tx[1], placement: pb }],
    })
}
