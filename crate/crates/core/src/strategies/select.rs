use crate::cases::{capacity_pair, classify_one_way, needs_modified_relays, CaseLabel, CaseType, Major, Sub};
use crate::detmodel::network::{a_part, b_part, relay_inputs, transmit_symbols, Symbols};
use crate::detmodel::{DiamondParams, Direction, Node, Relay};

use super::plan::{transmit_plan, TransmitPlan};
use super::relay::{
    build_strategy, strategy2_repeats, strategy6_repeats, Adjustment, Positional, RelayStrategy, StrategyError,
    StrategyId,
};

/// Relay maps and transmit plans for both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrategyAssignment {
    pub relays: [RelayStrategy; 2],
    /// A's plan then B's plan.
    pub plans: [TransmitPlan; 2],
}

impl StrategyAssignment {
    pub fn ids(&self) -> [StrategyId; 2] {
        [self.relays[0].id, self.relays[1].id]
    }

    /// Ranks achieved at B and at A.
    pub fn ranks(&self, params: &DiamondParams) -> (usize, usize) {
        let ops = Relay::BOTH.map(|k| self.relays[k.index()].operator(params, k));
        crate::detmodel::network::ranks(params, [&self.plans[0].placement, &self.plans[1].placement], [&ops[0], &ops[1]])
    }

    pub fn achieves_capacity(&self, params: &DiamondParams) -> bool {
        let c = capacity_pair(params);
        self.ranks(params) == (c.ab, c.ba)
    }
}

/// How a candidate assignment relates to the selection tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    /// Named by the selection table for the tuple's cases.
    Table,
    /// Another member of the same strategy family.
    Family,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub assignment: StrategyAssignment,
    pub tier: Tier,
}

/// How the candidate was obtained from a canonical frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Frame {
    Identity,
    SwapRelays,
    SwapDirection,
    SwapBoth,
}

impl Frame {
    fn apply(self, p: &DiamondParams) -> DiamondParams {
        match self {
            Frame::Identity => *p,
            Frame::SwapRelays => p.swap_relays(),
            Frame::SwapDirection => p.swap_direction(),
            Frame::SwapBoth => p.swap_direction().swap_relays(),
        }
    }

    fn relays_swapped(self) -> bool {
        matches!(self, Frame::SwapRelays | Frame::SwapBoth)
    }
}

fn materialize(params: &DiamondParams, maps: [(StrategyId, Positional); 2]) -> StrategyAssignment {
    let [(id1, p1), (id2, p2)] = maps;
    let relay = |id: StrategyId, p: &Positional, k: Relay| RelayStrategy {
        id,
        matrix: p.to_matrix(params.relay_out_levels(k)),
        adjustment: Adjustment::None,
    };
    StrategyAssignment {
        relays: [relay(id1, &p1, Relay::R1), relay(id2, &p2, Relay::R2)],
        plans: [transmit_plan(params, Direction::Forward), transmit_plan(params, Direction::Backward)],
    }
}

fn family(label: &CaseLabel) -> [u8; 4] {
    if label.major == Major::Case3 {
        [1, 2, 3, 4]
    } else {
        [5, 6, 7, 8]
    }
}

/// Table choice for a canonical tuple: forward direction 3.1.2 or 4.1.2 of
/// Type 1, backward direction not needing modified relays. Several
/// entries mean the table lists alternatives.
pub fn table_choice(params: &DiamondParams) -> Vec<u8> {
    let g = params.forward();
    let [a1, a2] = g.up;
    let [b1, _] = g.down;
    let fwd = classify_one_way(&g).expect("forward direction is special");
    let back = params.backward();
    let [nb1, nb2] = back.up;
    let [n1a, n2a] = back.down;
    let bl = classify_one_way(&back).ok();
    let pick = |cond: bool, yes: u8, no: u8| vec![if cond { yes } else { no }];
    if fwd.major == Major::Case3 {
        let Some(bl) = bl else { return vec![2] };
        return match (bl.major, bl.sub, bl.typ) {
            (Major::Case1, ..) => pick(a2 > nb2, 2, 1),
            (Major::Case2, ..) => pick(a2 > n2a, 2, 1),
            (Major::Case3, Sub::S11, _) => pick(a2 > nb2, 2, 1),
            (Major::Case4, Sub::S11, CaseType::Type1) => pick(a2 > n2a, 2, 1),
            (Major::Case4, Sub::S11, _) => pick(a2 as i64 > n2a as i64 - n1a as i64, 2, 1),
            (_, _, CaseType::Type1) => vec![1, 2, 3],
            _ => vec![4],
        };
    }
    let x = (b1 + a1) as i64 - a2 as i64;
    let Some(bl) = bl else { return vec![6] };
    match (bl.major, bl.sub, bl.typ) {
        (Major::Case1, ..) => pick(x > n1a as i64, 6, 5),
        (Major::Case2, ..) => pick(x > nb1 as i64, 6, 5),
        (Major::Case3, Sub::S11, _) => pick(x > nb1 as i64, 6, 5),
        (Major::Case4, Sub::S11, CaseType::Type1) => pick(x > n1a as i64 - n2a as i64, 6, 5),
        (Major::Case4, Sub::S11, _) => pick(x > n1a as i64, 6, 5),
        (_, _, CaseType::Type1) => vec![5, 6, 7],
        _ => vec![8],
    }
}

/// Candidates for a tuple whose forward direction is special, in order:
/// the table entries, then the rest of the family.
fn single_family(params: &DiamondParams, frame: Frame, table: bool) -> Vec<Candidate> {
    let canon = frame.apply(params);
    let label = classify_one_way(&canon.forward()).expect("forward direction is special");
    debug_assert_eq!(label.typ, CaseType::Type1);
    let first = if table { table_choice(&canon) } else { Vec::new() };
    let rest = family(&label).into_iter().filter(|n| !first.contains(n));
    let order: Vec<(u8, Tier)> =
        first.iter().map(|&n| (n, Tier::Table)).chain(rest.map(|n| (n, Tier::Family))).collect();
    order
        .into_iter()
        .filter_map(|(n, tier)| {
            let mut maps = build_strategy(&canon, n).ok()?;
            if frame.relays_swapped() {
                maps.swap(0, 1);
            }
            Some(Candidate { assignment: materialize(params, maps), tier })
        })
        .collect()
}

/// Frame in which `dir` becomes a Type 1 forward direction.
fn frame_for(params: &DiamondParams, dir: Direction) -> Frame {
    let g = params.direction(dir);
    let t = classify_one_way(&g).map(|l| l.typ).unwrap_or(CaseType::Type1);
    match (dir, t) {
        (Direction::Forward, CaseType::Type2) => Frame::SwapRelays,
        (Direction::Forward, _) => Frame::Identity,
        (Direction::Backward, CaseType::Type2) => Frame::SwapBoth,
        (Direction::Backward, _) => Frame::SwapDirection,
    }
}

/// Repetitions serving `dir`, keyed by relay, with the strategy number.
fn direction_repeats(params: &DiamondParams, dir: Direction) -> [(u8, Vec<(usize, usize)>); 2] {
    let frame = frame_for(params, dir);
    let canon = frame.apply(params);
    let g = canon.forward();
    let label = classify_one_way(&g).expect("direction is special");
    let mut out = if label.major == Major::Case3 {
        [(0, Vec::new()), (2, strategy2_repeats(&g))]
    } else {
        [(6, strategy6_repeats(&g)), (0, Vec::new())]
    };
    if frame.relays_swapped() {
        out.swap(0, 1);
    }
    out
}

/// Relay whose repetition is dropped when the two relays' repetitions for
/// `dir` would land on the same receiver level with identical content.
fn skipping_relay(label: &CaseLabel) -> usize {
    let i = label.type_relay().expect("special directions carry a type");
    if label.major == Major::Case4 {
        i
    } else {
        1 - i
    }
}

/// Combined strategy for tuples whose directions both need modified relays.
///
/// Each relay sends reversal plus the repetitions suggested for either
/// direction; a repetition suggested twice is sent once. When a forward
/// repetition at one relay and a backward repetition at the other carry the
/// same content to the same level of a node, one of them is skipped.
pub fn combined_strategy(params: &DiamondParams) -> Result<[RelayStrategy; 2], StrategyError> {
    let fwd_label = classify_one_way(&params.forward()).ok().filter(|l| l.needs_modified_relays());
    let back_label = classify_one_way(&params.backward()).ok().filter(|l| l.needs_modified_relays());
    let (Some(fwd_label), Some(back_label)) = (fwd_label, back_label) else {
        return Err(StrategyError::Invalid(format!("{params}: combined strategies need both directions special")));
    };
    let fwd = direction_repeats(params, Direction::Forward);
    let back = direction_repeats(params, Direction::Backward);
    let mut merged: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for k in 0..2 {
        merged[k] = fwd[k].1.clone();
        for r in &back[k].1 {
            if !merged[k].contains(r) {
                merged[k].push(*r);
            }
        }
    }

    let xa = transmit_symbols(params.node_tx_levels(Node::A), &transmit_plan(params, Direction::Forward).placement, Node::A);
    let xb = transmit_symbols(params.node_tx_levels(Node::B), &transmit_plan(params, Direction::Backward).placement, Node::B);
    let y = relay_inputs(params, &xa, &xb);
    let v = |k: usize, level: usize| -> Symbols {
        let q = params.relay_out_levels(Relay::from_index(k)).min(y[k].len());
        if level <= q {
            y[k][level - 1]
        } else {
            0
        }
    };
    let down = |k: usize, node: Node| params.downlink(Relay::from_index(k), node);
    let same_landing = |kf: usize, d1: usize, kb: usize, d2: usize, node: Node| {
        d1 <= down(kf, node) && d2 <= down(kb, node) && down(kf, node) - d1 == down(kb, node) - d2
    };
    let mut drop = |skipper: usize, kf: usize, r1: (usize, usize), r2: (usize, usize)| {
        let victim = if skipper == kf { r1 } else { r2 };
        if let Some(pos) = merged[skipper].iter().position(|r| *r == victim) {
            merged[skipper].remove(pos);
        }
    };
    // Content aimed at B: forward repetition at kf against backward repetition at the other relay.
    for kf in 0..2 {
        let kb = 1 - kf;
        for &(s1, d1) in &fwd[kf].1 {
            for &(s2, d2) in &back[kb].1 {
                let c1 = a_part(v(kf, s1));
                if c1 != 0 && c1 == a_part(v(kb, s2)) && same_landing(kf, d1, kb, d2, Node::B) {
                    drop(skipping_relay(&fwd_label), kf, (s1, d1), (s2, d2));
                }
            }
        }
    }
    // Content aimed at A.
    for kb in 0..2 {
        let kf = 1 - kb;
        for &(s2, d2) in &back[kb].1 {
            for &(s1, d1) in &fwd[kf].1 {
                let c2 = b_part(v(kb, s2));
                if c2 != 0 && c2 == b_part(v(kf, s1)) && same_landing(kf, d1, kb, d2, Node::A) {
                    drop(skipping_relay(&back_label), kf, (s1, d1), (s2, d2));
                }
            }
        }
    }
    Ok([0, 1].map(|k| {
        let relay = Relay::from_index(k);
        RelayStrategy {
            id: StrategyId::Combined { forward: fwd[k].0, backward: back[k].0 },
            matrix: Positional::with_repeats(merged[k].clone()).to_matrix(params.relay_out_levels(relay)),
            adjustment: Adjustment::None,
        }
    }))
}

/// Builds the combined strategy only when `(m, n)` per relay matches the
/// assignment implied by the two directions' cases.
pub fn combined_with(params: &DiamondParams, m: [u8; 2], n: [u8; 2]) -> Result<[RelayStrategy; 2], StrategyError> {
    let relays = combined_strategy(params)?;
    for k in 0..2 {
        let want = StrategyId::Combined { forward: m[k], backward: n[k] };
        if relays[k].id != want {
            return Err(StrategyError::Invalid(format!(
                "{params}: relay R{} takes {} for these cases, not {want}",
                k + 1,
                relays[k].id
            )));
        }
    }
    Ok(relays)
}

/// Every candidate assignment for `params`, table entries first.
pub fn candidates(params: &DiamondParams) -> Vec<Candidate> {
    let fs = needs_modified_relays(&params.forward());
    let bs = needs_modified_relays(&params.backward());
    match (fs, bs) {
        (false, false) => {
            let s0 = || (StrategyId::S(0), Positional::reversal());
            vec![Candidate { assignment: materialize(params, [s0(), s0()]), tier: Tier::Table }]
        }
        (true, false) => single_family(params, frame_for(params, Direction::Forward), true),
        (false, true) => single_family(params, frame_for(params, Direction::Backward), true),
        (true, true) => {
            let mut out = Vec::new();
            if let Ok(relays) = combined_strategy(params) {
                let plans = [transmit_plan(params, Direction::Forward), transmit_plan(params, Direction::Backward)];
                out.push(Candidate { assignment: StrategyAssignment { relays, plans }, tier: Tier::Table });
            }
            out.extend(single_family(params, frame_for(params, Direction::Forward), false));
            out.extend(single_family(params, frame_for(params, Direction::Backward), false));
            out
        }
    }
}

/// The table's assignment for `params`. Where the table offers several
/// alternatives, the first that reaches both capacities is returned.
pub fn select_strategies(params: &DiamondParams) -> StrategyAssignment {
    let table: Vec<Candidate> = candidates(params).into_iter().filter(|c| c.tier == Tier::Table).collect();
    let pick = table.iter().position(|c| c.assignment.achieves_capacity(params)).unwrap_or(0);
    table.into_iter().nth(pick).expect("every tuple has a table candidate").assignment
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neither_special_uses_reversal() {
        let p = DiamondParams::of([6, 2, 3, 7, 6, 3, 4, 8]);
        let a = select_strategies(&p);
        assert_eq!(a.ids(), [StrategyId::S(0), StrategyId::S(0)]);
        assert!(a.achieves_capacity(&p));
    }

    #[test]
    fn strategy1_example() {
        let p = DiamondParams::of([6, 4, 5, 7, 6, 5, 1, 7]);
        let a = select_strategies(&p);
        assert_eq!(a.ids(), [StrategyId::S(0), StrategyId::S(1)]);
    }

    #[test]
    fn combined_example_matches_relay_roles() {
        let p = DiamondParams::of([6, 4, 5, 7, 6, 8, 7, 5]);
        let r = combined_strategy(&p).unwrap();
        assert_eq!(r[0].id, StrategyId::Combined { forward: 0, backward: 6 });
        assert_eq!(r[1].id, StrategyId::Combined { forward: 2, backward: 0 });
        assert!(combined_with(&p, [0, 2], [6, 0]).is_ok());
        assert!(combined_with(&p, [2, 0], [0, 6]).is_err());
    }
}
