use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A color is a small dense index into the universe `0..MAX_COLORS`.
pub type Color = u8;

/// Colors are stored as bits of a machine word.
pub const MAX_COLORS: usize = 64;

/// A set of colors backed by a single `u64`.
///
/// The derived ordering compares the raw bit pattern as an integer, which is
/// colex order on sets of equal cardinality. Canonical forms and the
/// enumeration order are both defined in terms of it.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ColorSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, ..., count-1}`.
    pub fn prefix(count: usize) -> Self {
        assert!(count <= MAX_COLORS);
        if count == MAX_COLORS {
            ColorSet(u64::MAX)
        } else {
            ColorSet((1u64 << count) - 1)
        }
    }

    pub fn singleton(c: Color) -> Self {
        ColorSet(1u64 << c)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, c: Color) -> bool {
        (c as usize) < MAX_COLORS && self.0 >> c & 1 == 1
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1u64 << c;
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1u64 << c);
    }

    pub fn without(self, c: Color) -> Self {
        ColorSet(self.0 & !(1u64 << c))
    }

    pub fn union(self, other: ColorSet) -> Self {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ColorSet) -> Self {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(self, other: ColorSet) -> Self {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<Color> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Color)
    }

    pub fn max(self) -> Option<Color> {
        (self.0 != 0).then(|| (63 - self.0.leading_zeros()) as Color)
    }

    pub fn iter(self) -> ColorIter {
        ColorIter(self.0)
    }

    /// The `count` smallest members.
    pub fn lowest(self, count: usize) -> ColorSet {
        self.iter().take(count).collect()
    }
}

pub struct ColorIter(u64);

impl Iterator for ColorIter {
    type Item = Color;

    fn next(&mut self) -> Option<Color> {
        if self.0 == 0 {
            return None;
        }
        let c = self.0.trailing_zeros() as Color;
        self.0 &= self.0 - 1;
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut set = ColorSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ColorSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let colors = Vec::<u64>::deserialize(deserializer)?;
        let mut set = ColorSet::EMPTY;
        for c in colors {
            if c as usize >= MAX_COLORS {
                return Err(serde::de::Error::custom(format!(
                    "color {c} outside 0..{MAX_COLORS}"
                )));
            }
            set.insert(c as Color);
        }
        Ok(set)
    }
}

/// Next set with the same cardinality in colex order (Gosper's hack).
pub(crate) fn next_same_size(bits: u64) -> Option<u64> {
    if bits == 0 {
        return None;
    }
    let c = bits & bits.wrapping_neg();
    let r = bits.checked_add(c)?;
    Some((((r ^ bits) >> 2) / c) | r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let a: ColorSet = [0, 1, 5].into_iter().collect();
        let b: ColorSet = [1, 2].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(a.intersection(b), ColorSet::singleton(1));
        assert_eq!(a.difference(b).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert_eq!(a.min(), Some(0));
        assert_eq!(a.max(), Some(5));
        assert_eq!(a.lowest(2), ColorSet::prefix(2));
        assert_eq!(a.to_string(), "{0,1,5}");
    }

    #[test]
    fn gosper_walks_colex() {
        let mut all = vec![0b0011u64];
        while let Some(next) = next_same_size(*all.last().unwrap()) {
            if next >= 1 << 4 {
                break;
            }
            all.push(next);
        }
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
    }

    #[test]
    fn serde_as_sorted_list() {
        let a: ColorSet = [3, 0].into_iter().collect();
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0,3]");
        let back: ColorSet = serde_json::from_str("[3,0,3]").unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<ColorSet>("[64]").is_err());
    }
}
