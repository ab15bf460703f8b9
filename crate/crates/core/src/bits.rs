//! Plain word-backed bitmap plus the memory budget every large allocation is
//! checked against.

use crate::error::{Error, Result};

/// Upper bound on bytes a single operation may allocate for bitmaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget(pub u64);

impl MemoryBudget {
    pub const DEFAULT_BYTES: u64 = 4 << 30;

    pub fn bytes(self) -> u64 {
        self.0
    }

    /// Fails with a resource error naming the budget when `required` exceeds it.
    pub fn check(self, what: &str, required: u64) -> Result<()> {
        if required > self.0 {
            return Err(Error::Resource {
                what: what.to_string(),
                required,
                budget: self.0,
            });
        }
        Ok(())
    }
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget(Self::DEFAULT_BYTES)
    }
}

/// Bytes needed for a bitmap of `len` bits, rounded up to whole words.
pub(crate) fn bitmap_bytes(len: u64) -> u64 {
    len.div_ceil(64) * 8
}

#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: u64,
}

impl Bits {
    pub fn new(len: u64) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64) as usize],
            len,
        }
    }

    pub fn from_words(mut words: Vec<u64>, len: u64) -> Self {
        words.resize(len.div_ceil(64) as usize, 0);
        let mut bits = Bits { words, len };
        bits.clear_tail();
        bits
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        debug_assert!(i < self.len);
        (self.words[(i >> 6) as usize] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline]
    pub fn clear(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Number of set bits with index `< end`.
    pub fn count_below(&self, end: u64) -> u64 {
        let end = end.min(self.len);
        let full = (end >> 6) as usize;
        let mut total: u64 = self.words[..full].iter().map(|w| u64::from(w.count_ones())).sum();
        let rem = end & 63;
        if rem != 0 {
            total += u64::from((self.words[full] & ((1u64 << rem) - 1)).count_ones());
        }
        total
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        self.clear_tail();
    }

    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Ascending indices of set bits in `[start, end)`.
    pub fn iter_range(&self, start: u64, end: u64) -> BitIter<'_> {
        let end = end.min(self.len);
        let start = start.min(end);
        let wi = (start >> 6) as usize;
        let first = if start < end {
            self.words[wi] & (!0u64 << (start & 63))
        } else {
            0
        };
        BitIter {
            words: &self.words,
            word_index: wi,
            current: first,
            end,
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bits")
            .field("len", &self.len)
            .field("ones", &self.count_ones())
            .finish()
    }
}

pub(crate) struct BitIter<'a> {
    words: &'a [u64],
    word_index: usize,
    current: u64,
    end: u64,
}

impl Iterator for BitIter<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        loop {
            if self.current != 0 {
                let tz = u64::from(self.current.trailing_zeros());
                self.current &= self.current - 1;
                let idx = ((self.word_index as u64) << 6) | tz;
                return if idx < self.end { Some(idx) } else { None };
            }
            self.word_index += 1;
            if (self.word_index as u64) << 6 >= self.end {
                return None;
            }
            self.current = self.words[self.word_index];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_range_respects_bounds() {
        let mut b = Bits::new(200);
        for i in [0, 5, 63, 64, 65, 127, 128, 199] {
            b.set(i);
        }
        let got: Vec<u64> = b.iter_range(5, 128).collect();
        assert_eq!(got, vec![5, 63, 64, 65, 127]);
        assert_eq!(b.iter_range(0, 200).count(), 8);
        assert_eq!(b.iter_range(199, 200).collect::<Vec<_>>(), vec![199]);
        assert_eq!(b.iter_range(150, 150).count(), 0);
        assert_eq!(b.count_below(64), 3);
        assert_eq!(b.count_below(200), 8);
    }

    #[test]
    fn budget_names_itself() {
        let err = MemoryBudget(10).check("bitmap", 11).unwrap_err();
        assert!(err.to_string().contains("budget is 10 bytes"));
    }
}
