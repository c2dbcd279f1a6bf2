use std::fmt;

use thiserror::Error;

use crate::cases::one_way_capacity;
use crate::detmodel::network::{ranks, RelayOperator};
use crate::detmodel::{BinaryMatrix, DiamondParams, OneWay, Relay};

use super::plan::plan_one_way;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyId {
    /// Relay strategies 0 to 8.
    S(u8),
    /// Repetitions merged from both directions: `forward` and `backward`
    /// name the repetition strategy (0, 2 or 6) serving each direction.
    Combined { forward: u8, backward: u8 },
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyId::S(n) => write!(f, "S{n}"),
            StrategyId::Combined { forward, backward } => write!(f, "({forward},{backward})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Adjustment {
    None,
    /// Output levels (1 = bottom) forced to zero.
    Suppressed(Vec<usize>),
    /// Found by local search. The matrix acts on the full received vector.
    Tuned,
}

/// One relay's linear map.
///
/// Unless the strategy is [`Adjustment::Tuned`], `matrix` is
/// output levels × output levels and acts on the truncated received vector;
/// row `l` and column `j` are level `l + 1` and level `j + 1`, bottom first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelayStrategy {
    pub id: StrategyId,
    pub matrix: BinaryMatrix,
    pub adjustment: Adjustment,
}

impl RelayStrategy {
    /// The map applied to the relay's full received vector.
    pub fn operator(&self, params: &DiamondParams, relay: Relay) -> RelayOperator {
        let q_in = params.relay_in_levels(relay);
        let q_out = params.relay_out_levels(relay);
        let rows = if self.adjustment == Adjustment::Tuned {
            assert_eq!((self.matrix.rows(), self.matrix.cols()), (q_out, q_in), "tuned map has wrong shape");
            (0..q_out).map(|l| self.matrix.row_mask(l) as u64).collect()
        } else {
            assert_eq!((self.matrix.rows(), self.matrix.cols()), (q_out, q_out), "strategy matrix has wrong shape");
            let keep = if q_in.min(q_out) == 64 { u64::MAX } else { (1u64 << q_in.min(q_out)) - 1 };
            (0..q_out).map(|l| self.matrix.row_mask(l) as u64 & keep).collect()
        };
        RelayOperator { inputs: q_in, rows }
    }

    /// Input levels combined onto output level `level` beyond its single
    /// reversal source, as listed in level diagrams.
    pub fn extra_sources(&self, level: usize) -> Vec<usize> {
        let row = level - 1;
        let ones: Vec<usize> = (0..self.matrix.cols()).filter(|&j| self.matrix.get(row, j)).map(|j| j + 1).collect();
        if self.adjustment == Adjustment::Tuned || ones.len() > 1 {
            ones
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("{id} needs blocks of length {first} and {second} starting at position {start}, outside 1..={levels}")]
    BadBlocks { id: StrategyId, start: i64, first: i64, second: i64, levels: usize },
    #[error("strategy {0} is not defined")]
    Unknown(StrategyId),
    #[error("{0}")]
    Invalid(String),
}

/// A relay map described in output positions (1 = top output level) over
/// the truncated received levels (1 = bottom). Plain reversal is the
/// identity in these coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Positional {
    /// `order[p - 1]` is the received level sent at position `p`.
    pub order: Option<Vec<usize>>,
    /// `(received level, position)` pairs XORed on top of the ordering.
    pub repeats: Vec<(usize, usize)>,
}

impl Positional {
    pub fn reversal() -> Self {
        Positional::default()
    }

    pub fn with_repeats(repeats: Vec<(usize, usize)>) -> Self {
        Positional { order: None, repeats }
    }

    /// Level-frame matrix for a relay with `levels` output levels.
    pub fn to_matrix(&self, levels: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(levels, levels);
        for p in 1..=levels {
            let src = match &self.order {
                Some(order) => order[p - 1],
                None => p,
            };
            m.set(levels - p, src - 1, true);
        }
        for &(src, pos) in &self.repeats {
            if src <= levels && pos <= levels {
                m.flip(levels - pos, src - 1);
            }
        }
        m
    }
}

/// Reversal with the `first` positions starting at `start` moved behind
/// the following `second` positions.
pub fn block_swap(id: StrategyId, levels: usize, start: i64, first: i64, second: i64) -> Result<Positional, StrategyError> {
    if first < 0 || second < 0 || start < 1 || start + first + second - 1 > levels as i64 {
        return Err(StrategyError::BadBlocks { id, start, first, second, levels });
    }
    let (s, f, n) = (start as usize, first as usize, second as usize);
    let mut order: Vec<usize> = (1..=levels).collect();
    order[s - 1..s - 1 + f + n].rotate_left(f);
    Ok(Positional { order: Some(order), repeats: Vec::new() })
}

/// Forward rank at B of a one-way channel with the given relay maps.
fn one_way_rank(g: &OneWay, maps: [&Positional; 2]) -> usize {
    let params = DiamondParams::from_directions(*g, OneWay::new(0, 0, 0, 0)).expect("gains already validated");
    let plan = plan_one_way(g);
    let ops = Relay::BOTH.map(|k| {
        let m = maps[k.index()].to_matrix(params.relay_out_levels(k));
        RelayStrategy { id: StrategyId::S(0), matrix: m, adjustment: Adjustment::None }.operator(&params, k)
    });
    ranks(&params, [&plan.placement, &[]], [&ops[0], &ops[1]]).0
}

/// Repetitions at `relay` for a one-way channel: for each target position
/// from `span + 1` to `top`, the first unused source level in `1..=span`
/// whose copy raises B's rank. Stops once the capacity is reached.
pub fn greedy_repeats(g: &OneWay, relay: Relay, span: usize, top: usize) -> Vec<(usize, usize)> {
    let c = one_way_capacity(g);
    let plain = Positional::reversal();
    let rank_with = |reps: &[(usize, usize)]| {
        let r = Positional::with_repeats(reps.to_vec());
        match relay {
            Relay::R1 => one_way_rank(g, [&r, &plain]),
            Relay::R2 => one_way_rank(g, [&plain, &r]),
        }
    };
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; span + 1];
    let mut current = rank_with(&reps);
    for dst in span + 1..=top {
        if current == c {
            break;
        }
        for src in 1..=span {
            if used[src] {
                continue;
            }
            reps.push((src, dst));
            let r = rank_with(&reps);
            if r > current {
                used[src] = true;
                current = r;
                break;
            }
            reps.pop();
        }
    }
    reps
}

/// Strategy 2 repetitions at R2 for a forward Case 3.1.2 Type 1 channel.
pub fn strategy2_repeats(g: &OneWay) -> Vec<(usize, usize)> {
    greedy_repeats(g, Relay::R2, g.up[1], g.down[1])
}

/// Strategy 6 repetitions at R1 for a forward Case 4.1.2 Type 1 channel.
pub fn strategy6_repeats(g: &OneWay) -> Vec<(usize, usize)> {
    let span = (g.down[0] + g.up[0]).saturating_sub(g.up[1]);
    greedy_repeats(g, Relay::R1, span, g.down[0])
}

/// Relay maps of strategy `n` for a tuple whose forward direction is in
/// its Type 1 orientation. Returns the pair for (R1, R2); the relay not
/// named by the strategy keeps plain reversal.
pub fn build_strategy(params: &DiamondParams, n: u8) -> Result<[(StrategyId, Positional); 2], StrategyError> {
    let g = params.forward();
    let [a1, a2] = g.up.map(|v| v as i64);
    let [b1, b2] = g.down.map(|v| v as i64);
    let q1 = params.relay_out_levels(Relay::R1);
    let q2 = params.relay_out_levels(Relay::R2);
    let id = StrategyId::S(n);
    let s0 = (StrategyId::S(0), Positional::reversal());
    let at_r1 = |p: Positional| [(id, p), s0.clone()];
    let at_r2 = |p: Positional| [s0.clone(), (id, p)];
    Ok(match n {
        0 => [s0.clone(), s0.clone()],
        1 => at_r2(block_swap(id, q2, 1, b1 - (a1 - a2), a1 - b1)?),
        2 => at_r2(Positional::with_repeats(strategy2_repeats(&g))),
        3 => at_r2(block_swap(id, q2, 1 + b2 - b1, a2 - (b2 - b1), b2 - a2)?),
        4 => at_r1(block_swap(id, q1, 1, a1 - a2, b1 - (a1 - a2))?),
        5 => at_r1(block_swap(id, q1, 1, b2 + a1 - a2, b1 - b2)?),
        6 => at_r1(Positional::with_repeats(strategy6_repeats(&g))),
        7 => at_r1(block_swap(id, q1, 1 + b1 - b2, b2 - a2 + a1, a2 - a1)?),
        8 => at_r2(block_swap(id, q2, 1, a2 - a1, b2 - (a2 - a1))?),
        _ => return Err(StrategyError::Unknown(id)),
    })
}

/// Level-frame matrix of strategy `n` at `relay`, for a tuple whose
/// forward direction is in its Type 1 orientation.
pub fn relay_strategy_matrix(params: &DiamondParams, n: u8, relay: Relay) -> Result<BinaryMatrix, StrategyError> {
    let maps = build_strategy(params, n)?;
    Ok(maps[relay.index()].1.to_matrix(params.relay_out_levels(relay)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversal_matrix_for_six_inputs_seven_outputs() {
        let p = DiamondParams::of([3, 0, 7, 0, 6, 0, 7, 0]);
        let s = RelayStrategy { id: StrategyId::S(0), matrix: Positional::reversal().to_matrix(7), adjustment: Adjustment::None };
        let op = s.operator(&p, Relay::R1);
        // Received [y6..y1] leaves top-down as [y1, y2, ..., y6, 0].
        let top_down: Vec<u64> = op.rows.iter().rev().copied().collect();
        assert_eq!(top_down, vec![1, 2, 4, 8, 16, 32, 0]);
    }

    #[test]
    fn block_swap_rotates_segment() {
        let p = block_swap(StrategyId::S(1), 7, 1, 3, 1).unwrap();
        assert_eq!(p.order.unwrap(), vec![4, 1, 2, 3, 5, 6, 7]);
        assert!(block_swap(StrategyId::S(1), 3, 1, 3, 1).is_err());
        assert!(block_swap(StrategyId::S(1), 7, 1, -1, 1).is_err());
    }

    #[test]
    fn strategy1_on_fig8_tuple() {
        // Forward (6,4,5,7): swap the first 3 output streams with the next 1 at R2.
        let p = DiamondParams::of([6, 4, 5, 7, 0, 0, 0, 0]);
        let maps = build_strategy(&p, 1).unwrap();
        assert_eq!(maps[1].1.order.as_deref(), Some(&[4, 1, 2, 3, 5, 6, 7][..]));
        assert_eq!(maps[0].0, StrategyId::S(0));
    }

    #[test]
    fn repeats_reach_capacity_on_fig6_tuple() {
        let g = OneWay::new(4, 3, 3, 5);
        let reps = strategy2_repeats(&g);
        assert!(!reps.is_empty());
        let r = Positional::with_repeats(reps);
        assert_eq!(one_way_rank(&g, [&Positional::reversal(), &r]), 4);
        assert!(one_way_rank(&g, [&Positional::reversal(), &Positional::reversal()]) < 4);
    }
}
