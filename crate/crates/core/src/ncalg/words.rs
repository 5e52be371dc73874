use std::fmt;

use crate::Error;

/// A word in `a`, `b`, packed into bits (first letter most significant,
/// `a = 0`, `b = 1`). Ordering is by length, then lexicographic with `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NCWord {
    len: u8,
    bits: u64,
}

pub const MAX_WORD_LEN: usize = 63;

impl NCWord {
    pub const EMPTY: NCWord = NCWord { len: 0, bits: 0 };
    pub const A: NCWord = NCWord { len: 1, bits: 0 };
    pub const B: NCWord = NCWord { len: 1, bits: 1 };

    pub fn from_bits(len: usize, bits: u64) -> Self {
        debug_assert!(len <= MAX_WORD_LEN && (len == 64 || bits >> len == 0));
        NCWord { len: len as u8, bits }
    }

    /// Parses `"abba"`; the empty string or `"1"` is the empty word.
    pub fn parse(s: &str) -> crate::Result<Self> {
        if s == "1" {
            return Ok(Self::EMPTY);
        }
        if s.len() > MAX_WORD_LEN {
            return Err(Error::Parse(format!("word {s:?} too long")));
        }
        let mut w = Self::EMPTY;
        for c in s.chars() {
            w = w.concat(match c {
                'a' => Self::A,
                'b' => Self::B,
                _ => return Err(Error::Parse(format!("bad letter {c:?} in {s:?}"))),
            });
        }
        Ok(w)
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Letter at position `i`: `false` for `a`, `true` for `b`.
    pub fn letter(self, i: usize) -> bool {
        (self.bits >> (self.len as usize - 1 - i)) & 1 == 1
    }

    pub fn count_b(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn concat(self, other: NCWord) -> NCWord {
        NCWord { len: self.len + other.len, bits: (self.bits << other.len) | other.bits }
    }

    /// Splits into `(self[..i], self[i..])`.
    pub fn split(self, i: usize) -> (NCWord, NCWord) {
        let tail_len = self.len as usize - i;
        let mask = if tail_len == 64 { u64::MAX } else { (1u64 << tail_len) - 1 };
        (NCWord::from_bits(i, self.bits >> tail_len), NCWord::from_bits(tail_len, self.bits & mask))
    }

    /// All words of length `n`, in increasing order.
    pub fn all(n: usize) -> impl Iterator<Item = NCWord> {
        (0..1u64 << n).map(move |b| NCWord::from_bits(n, b))
    }
}

impl fmt::Display for NCWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "1");
        }
        for i in 0..self.len() {
            write!(f, "{}", if self.letter(i) { 'b' } else { 'a' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for NCWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A word in the two one-forms `A = dt/t` and `B = dt/(1-t)` indexing
/// multiple zeta values: `zeta(s_1, ..., s_k)` is `A^{s_1-1} B ... A^{s_k-1} B`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinWord(Vec<bool>);

impl BinWord {
    pub fn new(letters: Vec<bool>) -> Self {
        BinWord(letters)
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        s.chars()
            .map(|c| match c {
                'A' => Ok(false),
                'B' => Ok(true),
                _ => Err(Error::Parse(format!("bad letter {c:?} in binary word {s:?}"))),
            })
            .collect::<crate::Result<Vec<_>>>()
            .map(BinWord)
    }

    /// `A^{s-1} B`.
    pub fn depth_one(s: usize) -> Self {
        let mut v = vec![false; s - 1];
        v.push(true);
        BinWord(v)
    }

    /// Word of the index `(s_1, ..., s_k)`.
    pub fn from_index(s: &[usize]) -> Self {
        BinWord(s.iter().flat_map(|&k| Self::depth_one(k).0).collect())
    }

    pub fn letters(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_b(&self) -> usize {
        self.0.iter().filter(|&&l| l).count()
    }

    /// Starts with `A` and ends with `B`.
    pub fn is_admissible(&self) -> bool {
        self.0.first() == Some(&false) && self.0.last() == Some(&true)
    }

    /// All admissible words of the given weight.
    pub fn admissible(weight: usize) -> Vec<BinWord> {
        if weight < 2 {
            return Vec::new();
        }
        (0..1u64 << (weight - 2))
            .map(|m| {
                let mut v = vec![false];
                v.extend((0..weight - 2).rev().map(|i| (m >> i) & 1 == 1));
                v.push(true);
                BinWord(v)
            })
            .collect()
    }
}

impl fmt::Display for BinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", if l { 'B' } else { 'A' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ncword_basics() {
        let w = NCWord::parse("abba").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_string(), "abba");
        assert_eq!(w.count_b(), 2);
        let (u, v) = w.split(1);
        assert_eq!((u.to_string(), v.to_string()), ("a".into(), "bba".into()));
        assert_eq!(u.concat(v), w);
        assert!(NCWord::parse("aab").unwrap() < NCWord::parse("aba").unwrap());
        assert!(NCWord::parse("bb").unwrap() < NCWord::parse("aaa").unwrap());
        assert_eq!(NCWord::EMPTY.to_string(), "1");
    }

    #[test]
    fn binword_basics() {
        assert_eq!(BinWord::from_index(&[3, 5]).to_string(), "AABAAAAB");
        assert!(BinWord::parse("AB").unwrap().is_admissible());
        assert!(!BinWord::parse("BA").unwrap().is_admissible());
        assert_eq!(BinWord::admissible(4).len(), 4);
        assert!(BinWord::admissible(5).iter().all(BinWord::is_admissible));
        assert!(BinWord::parse("AC").is_err());
    }
}
