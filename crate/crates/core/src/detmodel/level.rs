use std::fmt;

/// Bit vector over GF(2) indexed by signal level, 1 = lowest level.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LevelVector {
    bits: Vec<bool>,
}

impl LevelVector {
    pub fn zeros(len: usize) -> Self {
        LevelVector { bits: vec![false; len] }
    }

    /// `bits[0]` is level 1.
    pub fn from_bits(bits: Vec<bool>) -> Self {
        LevelVector { bits }
    }

    /// Parses the display order, highest level first.
    pub fn from_top_down(bits: &[u8]) -> Self {
        LevelVector { bits: bits.iter().rev().map(|&b| b & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value at `level` (1-based from the bottom).
    pub fn bit(&self, level: usize) -> bool {
        assert!(level >= 1 && level <= self.bits.len(), "level {level} outside 1..={}", self.bits.len());
        self.bits[level - 1]
    }

    pub fn set(&mut self, level: usize, v: bool) {
        assert!(level >= 1 && level <= self.bits.len(), "level {level} outside 1..={}", self.bits.len());
        self.bits[level - 1] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn xor(&self, other: &LevelVector) -> LevelVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        LevelVector { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() }
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Highest level first, as drawn in level diagrams.
    pub fn top_down(&self) -> Vec<bool> {
        self.bits.iter().rev().copied().collect()
    }
}

impl fmt::Display for LevelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.top_down().iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl fmt::Debug for LevelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_lists_highest_level_first() {
        let v = LevelVector::from_bits(vec![true, false, false]);
        assert_eq!(v.to_string(), "[0,0,1]");
        assert_eq!(LevelVector::from_top_down(&[0, 0, 1]), v);
    }
}
