//! Cut-set capacities, the per-direction case taxonomy and the two
//! parameter-space partitions used by the repetition strategies.

use std::fmt;

use thiserror::Error;

use crate::detmodel::{DiamondParams, Direction, OneWay};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CapacityPair {
    pub ab: usize,
    pub ba: usize,
}

/// Four-way cut-set minimum for one direction.
pub fn one_way_capacity(g: &OneWay) -> usize {
    let [u1, u2] = g.up;
    let [d1, d2] = g.down;
    u1.max(u2).min(d1.max(d2)).min(u1 + d2).min(u2 + d1)
}

pub fn cutset_capacity(params: &DiamondParams, dir: Direction) -> usize {
    one_way_capacity(&params.direction(dir))
}

pub fn capacity_pair(params: &DiamondParams) -> CapacityPair {
    CapacityPair {
        ab: cutset_capacity(params, Direction::Forward),
        ba: cutset_capacity(params, Direction::Backward),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Major {
    Case1,
    Case2,
    Case3,
    Case4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sub {
    None,
    /// x.1.1
    S11,
    /// x.1.2
    S12,
    /// x.2
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseType {
    None,
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseLabel {
    pub major: Major,
    pub sub: Sub,
    pub typ: CaseType,
}

impl CaseLabel {
    pub const CASE1: CaseLabel = CaseLabel { major: Major::Case1, sub: Sub::None, typ: CaseType::None };
    pub const CASE2: CaseLabel = CaseLabel { major: Major::Case2, sub: Sub::None, typ: CaseType::None };

    pub fn new(major: Major, sub: Sub, typ: CaseType) -> Self {
        CaseLabel { major, sub, typ }
    }

    /// Cases 3.1.2 and 4.1.2, the two that plain reversal at the relays does not serve.
    pub fn needs_modified_relays(&self) -> bool {
        self.sub == Sub::S12
    }

    /// Index of the relay named by the type (0 for Type 1).
    pub fn type_relay(&self) -> Option<usize> {
        match self.typ {
            CaseType::Type1 => Some(0),
            CaseType::Type2 => Some(1),
            CaseType::None => None,
        }
    }

    /// Checks the label's defining conditions against `g`.
    pub fn holds_for(&self, g: &OneWay) -> bool {
        if g.is_degenerate() {
            return false;
        }
        let c = one_way_capacity(g);
        let [u1, u2] = g.up;
        let [d1, d2] = g.down;
        match self.major {
            Major::Case1 => c == u2 + d1 && self.sub == Sub::None && self.typ == CaseType::None,
            Major::Case2 => c == u1 + d2 && self.sub == Sub::None && self.typ == CaseType::None,
            Major::Case3 | Major::Case4 => {
                let Some(i) = self.type_relay() else { return false };
                let j = 1 - i;
                // Case 4 is Case 3 with the hops exchanged.
                let (first, second) = if self.major == Major::Case3 { (g.up, g.down) } else { (g.down, g.up) };
                if c != first[i] || first[i] < first[j] {
                    return false;
                }
                match self.sub {
                    Sub::S2 => second[i] >= c,
                    Sub::S11 => second[i] < c && second[j] >= first[j] + second[i],
                    Sub::S12 => second[i] < c && second[j] < first[j] + second[i],
                    Sub::None => false,
                }
            }
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let major = match self.major {
            Major::Case1 => "Case1",
            Major::Case2 => "Case2",
            Major::Case3 => "Case3",
            Major::Case4 => "Case4",
        };
        f.write_str(major)?;
        match self.sub {
            Sub::None => {}
            Sub::S11 => f.write_str(".1.1")?,
            Sub::S12 => f.write_str(".1.2")?,
            Sub::S2 => f.write_str(".2")?,
        }
        match self.typ {
            CaseType::None => Ok(()),
            CaseType::Type1 => f.write_str(".Type1"),
            CaseType::Type2 => f.write_str(".Type2"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CaseError {
    #[error("direction {0} has a zero gain and no case label")]
    Degenerate(OneWay),
    #[error("{what} requires {required} but the gains {gains} are {found}")]
    Precondition { what: &'static str, required: &'static str, gains: OneWay, found: String },
}

/// Case label of one direction.
///
/// Cases are tried in the order 1, 2, 3, 4. When both relays attain the
/// maximum that defines Case 3 (or Case 4), the type whose subcase is not
/// x.1.2 is preferred, and Type 1 otherwise.
pub fn classify_one_way(g: &OneWay) -> Result<CaseLabel, CaseError> {
    if g.is_degenerate() {
        return Err(CaseError::Degenerate(*g));
    }
    let c = one_way_capacity(g);
    let [u1, u2] = g.up;
    let [d1, d2] = g.down;
    if c == u2 + d1 {
        return Ok(CaseLabel::CASE1);
    }
    if c == u1 + d2 {
        return Ok(CaseLabel::CASE2);
    }
    let (major, first, second) =
        if c == u1.max(u2) { (Major::Case3, g.up, g.down) } else { (Major::Case4, g.down, g.up) };
    let types: &[usize] = if first[0] == first[1] {
        &[0, 1]
    } else if first[0] > first[1] {
        &[0]
    } else {
        &[1]
    };
    let label_for = |i: usize| {
        let j = 1 - i;
        let sub = if second[i] >= c {
            Sub::S2
        } else if second[j] >= first[j] + second[i] {
            Sub::S11
        } else {
            Sub::S12
        };
        let typ = if i == 0 { CaseType::Type1 } else { CaseType::Type2 };
        CaseLabel::new(major, sub, typ)
    };
    let labels: Vec<CaseLabel> = types.iter().map(|&i| label_for(i)).collect();
    Ok(labels.iter().copied().find(|l| l.sub != Sub::S12).unwrap_or(labels[0]))
}

pub fn classify(params: &DiamondParams, dir: Direction) -> Result<CaseLabel, CaseError> {
    classify_one_way(&params.direction(dir))
}

/// True for non-degenerate directions labeled 3.1.2 or 4.1.2.
pub fn needs_modified_relays(g: &OneWay) -> bool {
    classify_one_way(g).is_ok_and(|l| l.needs_modified_relays())
}

/// Nine-way split of the Case 3.1.2 Type 1 region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subspace9 {
    U1V1,
    U1V2,
    U1V3,
    U1V4R1,
    U1V4R2S1,
    U1V4R2S2,
    U1V4R2S3,
    U2W1,
    U2W2,
}

impl Subspace9 {
    pub const ALL: [Subspace9; 9] = [
        Subspace9::U1V1,
        Subspace9::U1V2,
        Subspace9::U1V3,
        Subspace9::U1V4R1,
        Subspace9::U1V4R2S1,
        Subspace9::U1V4R2S2,
        Subspace9::U1V4R2S3,
        Subspace9::U2W1,
        Subspace9::U2W2,
    ];

    /// Labels on which repetition at the weaker relay adds nothing to plain reversal.
    pub fn repetition_free(&self) -> bool {
        matches!(self, Subspace9::U1V3 | Subspace9::U1V4R2S2)
    }
}

impl fmt::Display for Subspace9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subspace9::U1V1 => "(u1,v1)",
            Subspace9::U1V2 => "(u1,v2)",
            Subspace9::U1V3 => "(u1,v3)",
            Subspace9::U1V4R1 => "(u1,v4,r1)",
            Subspace9::U1V4R2S1 => "(u1,v4,r2,s1)",
            Subspace9::U1V4R2S2 => "(u1,v4,r2,s2)",
            Subspace9::U1V4R2S3 => "(u1,v4,r2,s3)",
            Subspace9::U2W1 => "(u2,w1)",
            Subspace9::U2W2 => "(u2,w2)",
        })
    }
}

/// Seven-way split of the Case 4.1.2 Type 1 region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subspace7 {
    U1V1,
    U1V2R1,
    U1V2R2S1Q1,
    U1V2R2S1Q2,
    U1V2R2S2,
    U2W1,
    U2W2,
}

impl Subspace7 {
    pub const ALL: [Subspace7; 7] = [
        Subspace7::U1V1,
        Subspace7::U1V2R1,
        Subspace7::U1V2R2S1Q1,
        Subspace7::U1V2R2S1Q2,
        Subspace7::U1V2R2S2,
        Subspace7::U2W1,
        Subspace7::U2W2,
    ];
}

impl fmt::Display for Subspace7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subspace7::U1V1 => "(u1,v1)",
            Subspace7::U1V2R1 => "(u1,v2,r1)",
            Subspace7::U1V2R2S1Q1 => "(u1,v2,r2,s1,q1)",
            Subspace7::U1V2R2S1Q2 => "(u1,v2,r2,s1,q2)",
            Subspace7::U1V2R2S2 => "(u1,v2,r2,s2)",
            Subspace7::U2W1 => "(u2,w1)",
            Subspace7::U2W2 => "(u2,w2)",
        })
    }
}

fn expect_label(g: &OneWay, want: CaseLabel, what: &'static str, required: &'static str) -> Result<(), CaseError> {
    match classify_one_way(g) {
        Ok(l) if l == want => Ok(()),
        Ok(l) => Err(CaseError::Precondition { what, required, gains: *g, found: l.to_string() }),
        Err(e) => Err(CaseError::Precondition { what, required, gains: *g, found: e.to_string() }),
    }
}

/// Partition of a Case 3.1.2 Type 1 forward direction. Type 2 directions
/// are handled by relabeling the relays first.
pub fn partition9(g: &OneWay) -> Result<Subspace9, CaseError> {
    expect_label(g, CaseLabel::new(Major::Case3, Sub::S12, CaseType::Type1), "partition9", "Case3.1.2.Type1")?;
    Ok(partition9_unchecked(g))
}

fn partition9_unchecked(g: &OneWay) -> Subspace9 {
    let [a1, a2] = g.up.map(|v| v as i64);
    let [b1, b2] = g.down.map(|v| v as i64);
    let d = a1 - a2;
    let e = b2 - b1;
    if b2 + d <= a2 + b1 {
        let x = d + e;
        if b1 <= x {
            return Subspace9::U1V1;
        }
        if b1 - d <= x {
            return Subspace9::U1V2;
        }
        if a2 - e <= x {
            return Subspace9::U1V3;
        }
        if 2 * (2 * (b1 - b2 + a2) - a1) + b2 - a1 <= 2 * a2 - a1 + b1 - b2 {
            return Subspace9::U1V4R1;
        }
        let y = b1 - 2 * (d + e);
        if d >= y {
            Subspace9::U1V4R2S1
        } else if b2 - a2 >= y {
            Subspace9::U1V4R2S2
        } else {
            Subspace9::U1V4R2S3
        }
    } else if b1 - d <= e {
        Subspace9::U2W1
    } else {
        Subspace9::U2W2
    }
}

/// Partition of a Case 4.1.2 Type 1 forward direction.
pub fn partition7(g: &OneWay) -> Result<Subspace7, CaseError> {
    expect_label(g, CaseLabel::new(Major::Case4, Sub::S12, CaseType::Type1), "partition7", "Case4.1.2.Type1")?;
    Ok(partition7_unchecked(g))
}

fn partition7_unchecked(g: &OneWay) -> Subspace7 {
    let [a1, a2] = g.up.map(|v| v as i64);
    let [b1, b2] = g.down.map(|v| v as i64);
    if a2 - a1 <= 2 * (a1 + b2 - a2) {
        if b1 > a1 - a2 + 2 * b2 {
            return Subspace7::U1V1;
        }
        if b1 >= 2 * (a1 + b2 - a2) {
            return Subspace7::U1V2R1;
        }
        if a2 - a1 + b1 - b2 <= a1 - a2 + 2 * b2 - b1 {
            if 2 * (b2 + a1 - a2) - b1 >= a2 - a1 {
                Subspace7::U1V2R2S1Q1
            } else {
                Subspace7::U1V2R2S1Q2
            }
        } else {
            Subspace7::U1V2R2S2
        }
    } else if b2 + a1 - a2 <= b1 - b2 {
        Subspace7::U2W1
    } else {
        Subspace7::U2W2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fwd(a: usize, b: usize, c: usize, d: usize) -> OneWay {
        OneWay::new(a, b, c, d)
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(one_way_capacity(&fwd(6, 2, 3, 7)), 5);
        assert_eq!(one_way_capacity(&fwd(0, 0, 3, 4)), 0);
        assert_eq!(one_way_capacity(&fwd(6, 4, 5, 7)), 6);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_one_way(&fwd(6, 2, 3, 7)).unwrap(), CaseLabel::CASE1);
        assert_eq!(
            classify_one_way(&fwd(6, 4, 5, 7)).unwrap(),
            CaseLabel::new(Major::Case3, Sub::S12, CaseType::Type1)
        );
        assert_eq!(
            classify_one_way(&fwd(6, 3, 4, 8)).unwrap(),
            CaseLabel::new(Major::Case3, Sub::S11, CaseType::Type1)
        );
        assert!(matches!(classify_one_way(&fwd(0, 1, 1, 1)), Err(CaseError::Degenerate(_))));
    }

    #[test]
    fn tie_prefers_label_served_by_reversal() {
        // Both relays hear A with 3 levels. Type 1 would be 3.1.2, Type 2 is 3.2.
        let g = fwd(3, 3, 1, 3);
        let l = classify_one_way(&g).unwrap();
        assert_eq!(l, CaseLabel::new(Major::Case3, Sub::S2, CaseType::Type2));
        assert!(l.holds_for(&g));
        assert!(CaseLabel::new(Major::Case3, Sub::S12, CaseType::Type1).holds_for(&g));
    }

    #[test]
    fn partition9_examples() {
        assert_eq!(partition9(&fwd(6, 4, 5, 7)).unwrap(), Subspace9::U1V2);
        // 3 + 3 against 3 + 3 falls on the u1 side of the first split.
        assert!(!matches!(partition9(&fwd(4, 3, 3, 5)).unwrap(), Subspace9::U2W1 | Subspace9::U2W2));
        assert!(partition9(&fwd(6, 2, 3, 7)).is_err());
    }

    #[test]
    fn partition7_rejects_other_cases() {
        assert!(partition7(&fwd(6, 4, 5, 7)).is_err());
    }
}
