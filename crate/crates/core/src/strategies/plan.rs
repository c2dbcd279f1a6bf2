use crate::cases::{classify_one_way, one_way_capacity, CaseType, Major, Sub};
use crate::detmodel::{DiamondParams, Direction, OneWay};

/// Where each message bit of one direction is placed at its source.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransmitPlan {
    /// Number of transmit levels at the source.
    pub levels: usize,
    /// `placement[m]` is the level (1 = bottom) carrying message bit `m + 1`.
    pub placement: Vec<usize>,
}

impl TransmitPlan {
    pub fn message_len(&self) -> usize {
        self.placement.len()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.levels + 1];
        self.placement.iter().all(|&l| l >= 1 && l <= self.levels && !std::mem::replace(&mut seen[l], true))
    }

    /// Level of each message bit, highest level first, with `None` for idle levels.
    pub fn top_down(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.levels];
        for (m, &l) in self.placement.iter().enumerate() {
            out[self.levels - l] = Some(m + 1);
        }
        out
    }
}

fn span(from: usize, count: usize) -> impl Iterator<Item = usize> {
    from..from + count
}

/// Placement for one direction given its four gains.
pub fn plan_one_way(g: &OneWay) -> TransmitPlan {
    let c = one_way_capacity(g);
    let q = g.source_levels();
    let [a1, a2] = g.up;
    let [b1, b2] = g.down;
    let placement: Vec<usize> = if c == 0 {
        Vec::new()
    } else if g.is_degenerate() {
        // Lowest levels heard by the relay that still carries this direction.
        let up = if a1.min(b1) >= a2.min(b2) { a1 } else { a2 };
        span(q - up + 1, c).collect()
    } else {
        let label = classify_one_way(g).expect("non-degenerate direction");
        match (label.major, label.sub, label.typ) {
            (Major::Case1, ..) => (1..=b1).chain(span(q - (c - b1) + 1, c - b1)).collect(),
            (Major::Case2, ..) => (1..=b2).chain(span(q - (c - b2) + 1, c - b2)).collect(),
            (Major::Case3, ..) => span(q - c + 1, c).collect(),
            (Major::Case4, Sub::S11, typ) => {
                let (low, high, gap) = if typ == CaseType::Type1 { (b2, b1, a2 - (a1 + b2)) } else { (b1, b2, a1 - (a2 + b1)) };
                (1..=low).chain(span(low + gap + 1, high - low)).collect()
            }
            (Major::Case4, Sub::S2, typ) => {
                let up = if typ == CaseType::Type1 { a1 } else { a2 };
                span(q - up + 1, c).collect()
            }
            (Major::Case4, ..) => (1..=c).collect(),
        }
    };
    TransmitPlan { levels: q, placement }
}

pub fn transmit_plan(params: &DiamondParams, dir: Direction) -> TransmitPlan {
    plan_one_way(&params.direction(dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case1_places_two_groups() {
        let p = plan_one_way(&OneWay::new(6, 2, 3, 7));
        // [a5, a4, 0, a3, a2, a1]
        assert_eq!(p.top_down(), vec![Some(5), Some(4), None, Some(3), Some(2), Some(1)]);
    }

    #[test]
    fn case3_uses_top_levels() {
        let p = plan_one_way(&OneWay::new(6, 4, 5, 7));
        assert_eq!(p.placement, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn case412_uses_lowest_levels() {
        // Backward gains (6,8,7,5) viewed as a one-way channel.
        let g = OneWay::new(6, 8, 7, 5);
        assert_eq!(classify_one_way(&g).unwrap().to_string(), "Case4.1.2.Type1");
        let p = plan_one_way(&g);
        assert_eq!(p.placement, (1..=7).collect::<Vec<_>>());
        assert_eq!(p.levels, 8);
    }

    #[test]
    fn degenerate_uses_active_relay() {
        let p = plan_one_way(&OneWay::new(2, 5, 0, 3));
        assert_eq!(p.placement, vec![1, 2, 3]);
        let p = plan_one_way(&OneWay::new(3, 5, 3, 0));
        assert_eq!(p.placement, vec![3, 4, 5]);
    }
}
