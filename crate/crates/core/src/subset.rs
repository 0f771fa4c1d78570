//! Fixed-length bit-vectors over the element indices of one group.

use std::fmt;

use crate::error::{Result, VcError};

const WORD: usize = 64;

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A subset of `{0, .., len-1}` stored as packed 64-bit words.
///
/// Bits past `len` in the last word are always zero, so equality, hashing
/// and popcounts can work word-wise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    len: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(len: usize) -> Self {
        Subset {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Subset {
            len,
            words: vec![!0; words_for(len)],
        };
        s.trim();
        s
    }

    /// Builds a subset from element indices; indices `>= len` are an error.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Result<Self> {
        let mut s = Subset::empty(len);
        for i in indices {
            if i >= len {
                return Err(VcError::Domain(format!(
                    "element {i} outside ground set of size {len}"
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        let mut s = Subset { len, words };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the ground set (the group order).
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "element {i} outside ground set of size {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    /// Number of members.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Subset, f: impl Fn(u64, u64) -> u64) -> Result<Subset> {
        VcError::check_len(self.len, other.len)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Subset::from_words(self.len, words))
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Subset {
        Subset::from_words(self.len, self.words.iter().map(|w| !w).collect())
    }

    pub fn union_with(&mut self, other: &Subset) -> Result<()> {
        VcError::check_len(self.len, other.len)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &Subset) -> Result<bool> {
        VcError::check_len(self.len, other.len)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &Subset) -> Result<bool> {
        VcError::check_len(self.len, other.len)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0))
    }

    /// Lowercase hex with element 0 in the least-significant bit, printed
    /// most-significant digit first and zero-padded to `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let word = self.words.get(bit / WORD).copied().unwrap_or(0);
            let nibble = (word >> (bit % WORD)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    /// Parses the encoding produced by [`Subset::to_hex`]. Leading zeros
    /// and an optional `0x` prefix are accepted; set bits at or beyond `len`
    /// are rejected.
    pub fn from_hex(len: usize, hex: &str) -> Result<Subset> {
        let body = hex.trim();
        let body = body
            .strip_prefix("0x")
            .or_else(|| body.strip_prefix("0X"))
            .unwrap_or(body);
        if body.is_empty() {
            return Err(VcError::Parse("empty hex set literal".into()));
        }
        let mut s = Subset::empty(len);
        for (d, c) in body.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| VcError::Parse(format!("invalid hex digit {c:?} in {hex:?}")))?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= len {
                        return Err(VcError::Domain(format!(
                            "hex set {hex:?} has element {i} outside ground set of size {len}"
                        )));
                    }
                    s.insert(i);
                }
            }
        }
        Ok(s)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Iterator over set bits, ascending.
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_encoding() {
        let s = Subset::from_indices(5, [0, 1]).unwrap();
        assert_eq!(s.to_hex(), "03");
        assert_eq!(Subset::from_hex(5, "03").unwrap(), s);
        assert_eq!(Subset::from_hex(5, "0x3").unwrap(), s);
        assert_eq!(Subset::empty(1).to_hex(), "0");
        assert_eq!(Subset::full(8).to_hex(), "ff");
        let wide = Subset::from_indices(70, [0, 64, 69]).unwrap();
        assert_eq!(wide.to_hex(), "210000000000000001");
        assert_eq!(Subset::from_hex(70, &wide.to_hex()).unwrap(), wide);
    }

    #[test]
    fn hex_rejects_out_of_range_bits() {
        assert!(Subset::from_hex(5, "20").is_err());
        assert!(Subset::from_hex(5, "zz").is_err());
        assert!(Subset::from_hex(5, "").is_err());
    }

    #[test]
    fn full_and_complement_trim_padding() {
        let f = Subset::full(65);
        assert_eq!(f.count(), 65);
        assert!(f.complement().is_empty());
        assert_eq!(Subset::empty(65).complement(), f);
    }

    #[test]
    fn set_algebra() {
        let a = Subset::from_indices(10, [1, 2, 3]).unwrap();
        let b = Subset::from_indices(10, [3, 4]).unwrap();
        assert_eq!(a.union(&b).unwrap().to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(a.intersection(&b).unwrap().to_vec(), vec![3]);
        assert_eq!(a.difference(&b).unwrap().to_vec(), vec![1, 2]);
        assert!(!a.is_disjoint(&b).unwrap());
        assert!(Subset::from_indices(10, [2]).unwrap().is_subset(&a).unwrap());
        assert!(a.union(&Subset::empty(11)).is_err());
    }
}
