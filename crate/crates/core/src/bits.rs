//! Fixed-length bit strings packed into `u64` words.
//!
//! Bit 0 is the most significant bit of the first word, so the derived
//! `Ord` on the word vector coincides with lexicographic order of the
//! textual `'0'`/`'1'` encoding. Unused tail bits are always zero.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

impl BitString {
    /// All-zero bit string of the given length.
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut b = BitString::zeros(len);
        for t in 0..len {
            if f(t) {
                b.set(t, true);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, t: usize) -> bool {
        assert!(t < self.len, "bit index {t} out of range (len {})", self.len);
        self.words[t / 64] >> (63 - t % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, t: usize, value: bool) {
        assert!(t < self.len, "bit index {t} out of range (len {})", self.len);
        let mask = 1u64 << (63 - t % 64);
        if value {
            self.words[t / 64] |= mask;
        } else {
            self.words[t / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, t: usize) {
        self.set(t, !self.get(t));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions at which the two strings differ.
    /// Panics if lengths differ; callers expose a checked wrapper.
    pub fn distance(&self, other: &BitString) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in distance");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn to_text(&self) -> String {
        (0..self.len).map(|t| if self.get(t) { '1' } else { '0' }).collect()
    }

    /// Parses a `'0'`/`'1'` string; returns the offending position on bad input.
    pub fn parse_text(text: &str) -> Result<Self, usize> {
        let mut b = BitString::zeros(text.len());
        for (t, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => b.set(t, true),
                _ => return Err(t),
            }
        }
        Ok(b)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({})", self.to_text())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut b = BitString::zeros(70);
        b.set(0, true);
        b.set(63, true);
        b.set(64, true);
        b.set(69, true);
        assert!(b.get(0) && b.get(63) && b.get(64) && b.get(69));
        assert!(!b.get(1) && !b.get(65));
        assert_eq!(b.count_ones(), 4);
    }

    #[test]
    fn ord_matches_text_order() {
        let a = BitString::parse_text("0111").unwrap();
        let b = BitString::parse_text("1000").unwrap();
        assert!(a < b);
        assert!(a.to_text() < b.to_text());
        let c = BitString::from_fn(65, |t| t == 64);
        let d = BitString::from_fn(65, |t| t == 0);
        assert!(c < d);
        assert!(c.to_text() < d.to_text());
    }

    #[test]
    fn parse_rejects_bad_char() {
        assert_eq!(BitString::parse_text("01x0"), Err(2));
    }

    #[test]
    fn distance_counts_differing_bits() {
        let a = BitString::parse_text("0101").unwrap();
        let b = BitString::parse_text("0011").unwrap();
        assert_eq!(a.distance(&b), 2);
        assert_eq!(a.distance(&a), 0);
    }
}
