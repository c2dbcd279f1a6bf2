//! Exhaustive search over every linear one-block scheme of a small tuple:
//! all precoder column spaces at both nodes and all relay matrices on the
//! full received vector. Used to certify that no linear scheme of this
//! shape reaches both capacities.

use crate::cases::capacity_pair;
use crate::detmodel::network::{node_inputs, relay_inputs, RelayOperator, Symbols, B_SHIFT};
use crate::detmodel::{rank_of_masks, BinaryMatrix, DiamondParams, Node, Relay};
use crate::strategies::{Adjustment, RelayStrategy, StrategyAssignment, StrategyId, TransmitPlan};

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Precoder bases (level masks per message bit) and relay maps reaching both capacities.
    Feasible { precoders: [Vec<u64>; 2], relays: [RelayOperator; 2] },
    Infeasible,
    /// The search space exceeds the cap; `log2_size` is its size in bits.
    TooLarge { log2_size: f64 },
}

impl Verdict {
    /// The witness as an assignment when every precoder column is a single
    /// level; relay maps act on the full received vector and keep `ids`.
    pub fn assignment(&self, params: &DiamondParams, ids: [StrategyId; 2]) -> Option<StrategyAssignment> {
        let Verdict::Feasible { precoders, relays } = self else { return None };
        let plan = |node: Node, basis: &[u64]| {
            basis.iter().all(|v| v.count_ones() == 1).then(|| TransmitPlan {
                levels: params.node_tx_levels(node),
                placement: basis.iter().map(|v| v.trailing_zeros() as usize + 1).collect(),
            })
        };
        let plans = [plan(Node::A, &precoders[0])?, plan(Node::B, &precoders[1])?];
        let relays = Relay::BOTH.map(|k| {
            let op = &relays[k.index()];
            let masks: Vec<u128> = op.rows.iter().map(|&r| r as u128).collect();
            RelayStrategy {
                id: ids[k.index()],
                matrix: BinaryMatrix::from_row_masks(&masks, op.inputs),
                adjustment: Adjustment::Tuned,
            }
        });
        Some(StrategyAssignment { relays, plans })
    }
}

/// Reduced-echelon bases of every `k`-dimensional subspace of GF(2)^n.
/// Column operations on a precoder leave every rank unchanged, so one
/// basis per subspace suffices.
pub fn subspaces(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<Vec<usize>> =
            pivots.iter().map(|&p| (0..p).filter(|j| !pivots.contains(j)).collect()).collect();
        let bits: usize = free.iter().map(Vec::len).sum();
        for fill in 0u64..(1u64 << bits) {
            let mut used = 0;
            let basis = pivots
                .iter()
                .zip(&free)
                .map(|(&p, fs)| {
                    let mut v = 1u64 << p;
                    for &j in fs {
                        if fill >> used & 1 == 1 {
                            v |= 1 << j;
                        }
                        used += 1;
                    }
                    v
                })
                .collect();
            out.push(basis);
        }
        // Next pivot combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Bases of the subspaces spanned by `k` of the `n` unit vectors, that is
/// every way of placing `k` message bits on distinct levels.
pub fn placements(n: usize, k: usize) -> Vec<Vec<u64>> {
    subspaces(n, k).into_iter().filter(|b| b.iter().all(|v| v.count_ones() == 1)).collect()
}

fn binomial_log2(n: usize, k: usize) -> f64 {
    (0..k).map(|i| ((n - i) as f64).log2() - ((i + 1) as f64).log2()).sum()
}

fn gaussian_binomial_log2(n: usize, k: usize) -> f64 {
    (0..k).map(|i| ((1u128 << (n - i)) as f64 - 1.0).log2() - ((1u128 << (i + 1)) as f64 - 1.0).log2()).sum()
}

/// Which precoders the search ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precoders {
    /// Every full-rank precoder, one per column space.
    Linear,
    /// Message bits placed on distinct levels.
    Placements,
}

/// Size of the search space in bits.
pub fn search_log2_size(params: &DiamondParams, precoders: Precoders) -> f64 {
    let c = capacity_pair(params);
    let qa = params.node_tx_levels(Node::A);
    let qb = params.node_tx_levels(Node::B);
    if c.ab > qa || c.ba > qb {
        return 0.0;
    }
    let relay_bits: usize = Relay::BOTH.iter().map(|&k| params.relay_in_levels(k) * params.relay_out_levels(k)).sum();
    let count = match precoders {
        Precoders::Linear => gaussian_binomial_log2,
        Precoders::Placements => binomial_log2,
    };
    count(qa, c.ab) + count(qb, c.ba) + relay_bits as f64
}

fn transmit(levels: usize, basis: &[u64], shift: u32) -> Vec<Symbols> {
    (0..levels)
        .map(|l| {
            basis.iter().enumerate().filter(|(_, &v)| v >> l & 1 == 1).fold(0, |acc, (m, _)| acc ^ (1 << (shift + m as u32)))
        })
        .collect()
}

/// Decides whether some linear scheme reaches `(C_AB, C_BA)` on `params`,
/// unless the space has more than `2^max_log2` points.
pub fn exhaustive(params: &DiamondParams, precoders: Precoders, max_log2: f64) -> Verdict {
    let size = search_log2_size(params, precoders);
    if size > max_log2 {
        return Verdict::TooLarge { log2_size: size };
    }
    let c = capacity_pair(params);
    let qa = params.node_tx_levels(Node::A);
    let qb = params.node_tx_levels(Node::B);
    let shape = Relay::BOTH.map(|k| (params.relay_in_levels(k), params.relay_out_levels(k)));
    let bits = [shape[0].0 * shape[0].1, shape[1].0 * shape[1].1];
    let op = |k: usize, code: u64| {
        let (qi, qo) = shape[k];
        let rows = (0..qo).map(|l| (code >> (l * qi)) & ((1u64 << qi) - 1)).collect();
        RelayOperator { inputs: qi, rows }
    };
    let bases = |n, k| match precoders {
        Precoders::Linear => subspaces(n, k),
        Precoders::Placements => placements(n, k),
    };
    let bases_a = bases(qa, c.ab);
    let bases_b = bases(qb, c.ba);
    for ga in &bases_a {
        let xa = transmit(qa, ga, 0);
        for gb in &bases_b {
            let xb = transmit(qb, gb, B_SHIFT);
            let y = relay_inputs(params, &xa, &xb);
            for code1 in 0u64..(1u64 << bits[0]) {
                let o1 = op(0, code1);
                let t1 = o1.apply(&y[0]);
                for code2 in 0u64..(1u64 << bits[1]) {
                    let o2 = op(1, code2);
                    let t2 = o2.apply(&y[1]);
                    let rx = node_inputs(params, &[t1.clone(), t2]);
                    let ab = rank_of_masks(rx[1].iter().map(|&s| s & u64::MAX as u128));
                    if ab < c.ab {
                        continue;
                    }
                    let ba = rank_of_masks(rx[0].iter().map(|&s| s >> B_SHIFT));
                    if ba == c.ba {
                        return Verdict::Feasible { precoders: [ga.clone(), gb.clone()], relays: [o1, o2] };
                    }
                }
            }
        }
    }
    Verdict::Infeasible
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        assert_eq!(subspaces(3, 1).len(), 7);
        assert_eq!(subspaces(4, 2).len(), 35);
        assert_eq!(subspaces(3, 0).len(), 1);
        assert!(subspaces(2, 3).is_empty());
        assert!((gaussian_binomial_log2(4, 2) - 35f64.log2()).abs() < 1e-12);
        assert_eq!(placements(4, 2).len(), 6);
        assert!((binomial_log2(5, 2) - 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn subspaces_are_distinct_and_full_rank() {
        let all = subspaces(4, 2);
        for b in &all {
            assert_eq!(rank_of_masks(b.iter().map(|&v| v as u128)), 2);
        }
        let mut spans: Vec<Vec<u64>> = all
            .iter()
            .map(|b| {
                let mut s = vec![0, b[0], b[1], b[0] ^ b[1]];
                s.sort();
                s
            })
            .collect();
        spans.sort();
        spans.dedup();
        assert_eq!(spans.len(), 35);
    }

    #[test]
    fn single_level_tuple_is_feasible() {
        let p = DiamondParams::of([1; 8]);
        let v = exhaustive(&p, Precoders::Placements, 20.0);
        let a = v.assignment(&p, [StrategyId::S(0); 2]).unwrap();
        assert!(a.achieves_capacity(&p));
    }

    #[test]
    fn crossed_unit_tuple_has_no_linear_scheme() {
        // Each relay carries one direction at one level; both land on the
        // same level at the far node.
        assert_eq!(exhaustive(&DiamondParams::of([1, 1, 1, 1, 1, 2, 2, 1]), Precoders::Linear, 20.0), Verdict::Infeasible);
    }
}
