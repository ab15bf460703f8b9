use crate::bits::{bitmap_bytes, Bits, MemoryBudget};
use crate::error::{Error, Result};

/// Largest limit an [`OrderSet`] accepts.
pub const MAX_LIMIT: u64 = 1 << 40;

/// Exact membership bitmap over `[1, limit]`.
///
/// Bit `n - 1` of the backing words records whether `n` is a member, which is
/// also the byte layout of the cache file body.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderSet {
    limit: u64,
    bits: Bits,
}

impl std::fmt::Debug for OrderSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.limit <= 256 {
            f.debug_set().entries(self.iter()).finish()
        } else {
            f.debug_struct("OrderSet")
                .field("limit", &self.limit)
                .field("len", &self.len())
                .finish()
        }
    }
}

impl OrderSet {
    /// Empty set over `[1, limit]`, checked against the default budget.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, MemoryBudget::default())
    }

    pub fn with_budget(limit: u64, budget: MemoryBudget) -> Result<Self> {
        if limit > MAX_LIMIT {
            return Err(Error::domain(format!(
                "limit {limit} exceeds the supported maximum 2^40"
            )));
        }
        budget.check("order set bitmap", Self::bytes_for(limit))?;
        Ok(OrderSet {
            limit,
            bits: Bits::new(limit),
        })
    }

    /// Bitmap bytes needed for `limit`.
    pub fn bytes_for(limit: u64) -> u64 {
        bitmap_bytes(limit)
    }

    /// Set holding `values` that fall in `[1, limit]`; others are dropped.
    pub fn from_values<I: IntoIterator<Item = u64>>(limit: u64, values: I) -> Result<Self> {
        let mut set = Self::new(limit)?;
        for v in values {
            set.insert(v);
        }
        Ok(set)
    }

    pub(crate) fn bits_mut(&mut self) -> &mut Bits {
        &mut self.bits
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.limit && self.bits.get(n - 1)
    }

    /// Inserts `n`; values outside `[1, limit]` are ignored. Returns whether
    /// the set changed.
    #[inline]
    pub fn insert(&mut self, n: u64) -> bool {
        if n == 0 || n > self.limit || self.bits.get(n - 1) {
            return false;
        }
        self.bits.set(n - 1);
        true
    }

    pub fn remove(&mut self, n: u64) -> bool {
        if !self.contains(n) {
            return false;
        }
        self.bits.clear(n - 1);
        true
    }

    /// Number of members; equals the counting function at `limit`.
    pub fn len(&self) -> u64 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter_range(0, self.limit).map(|i| i + 1)
    }

    /// Members `n` with `lo <= n <= hi`, ascending.
    pub fn iter_range(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        let start = lo.max(1) - 1;
        let end = hi.min(self.limit);
        self.bits.iter_range(start, end).map(|i| i + 1)
    }

    /// Members `<= x`, without the domain check of [`super::counting_function`].
    pub fn count_up_to(&self, x: u64) -> u64 {
        self.bits.count_below(x.min(self.limit))
    }

    pub fn union_with(&mut self, other: &OrderSet) {
        if other.limit == self.limit {
            self.bits.or_assign(&other.bits);
        } else {
            for n in other.iter_range(1, self.limit) {
                self.insert(n);
            }
        }
    }

    pub fn is_subset_of(&self, other: &OrderSet) -> bool {
        if self.limit == other.limit {
            self.bits.is_subset_of(&other.bits)
        } else {
            self.iter().all(|n| other.contains(n))
        }
    }

    /// The same members restricted to `[1, new_limit]` (`new_limit <= limit`).
    pub fn restrict(&self, new_limit: u64) -> OrderSet {
        let new_limit = new_limit.min(self.limit);
        let words = self.bits.words()[..new_limit.div_ceil(64) as usize].to_vec();
        OrderSet {
            limit: new_limit,
            bits: Bits::from_words(words, new_limit),
        }
    }

    /// Flips membership of `n`; used by negative-control self tests.
    pub fn toggle(&mut self, n: u64) {
        if !self.remove(n) {
            self.insert(n);
        }
    }

    /// Little-endian body bytes: `ceil(limit / 8)` bytes, bit `n - 1` for `n`.
    pub fn to_body_bytes(&self) -> Vec<u8> {
        let nbytes = self.limit.div_ceil(8) as usize;
        let mut out = Vec::with_capacity(nbytes + 8);
        for w in self.bits.words() {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nbytes);
        out
    }

    pub fn from_body_bytes(limit: u64, body: &[u8]) -> Result<Self> {
        let nbytes = limit.div_ceil(8) as usize;
        if body.len() != nbytes {
            return Err(Error::Cache(format!(
                "body has {} bytes, expected {nbytes} for limit {limit}",
                body.len()
            )));
        }
        let mut words = Vec::with_capacity(nbytes.div_ceil(8));
        for chunk in body.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            words.push(u64::from_le_bytes(buf));
        }
        Ok(OrderSet {
            limit,
            bits: Bits::from_words(words, limit),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = OrderSet::new(100).unwrap();
        assert!(s.insert(1));
        assert!(s.insert(100));
        assert!(!s.insert(101));
        assert!(!s.insert(0));
        assert!(!s.insert(1));
        assert!(s.contains(100));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 100]);
        assert_eq!(s.count_up_to(99), 1);
        s.toggle(100);
        assert!(!s.contains(100));
    }

    #[test]
    fn restrict_drops_tail() {
        let s = OrderSet::from_values(200, [1, 64, 65, 130, 200]).unwrap();
        let r = s.restrict(65);
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![1, 64, 65]);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn body_bytes_layout() {
        let s = OrderSet::from_values(10, [1, 9]).unwrap();
        assert_eq!(s.to_body_bytes(), vec![0b0000_0001, 0b0000_0001]);
        assert_eq!(OrderSet::from_body_bytes(10, &s.to_body_bytes()).unwrap(), s);
        assert!(OrderSet::from_body_bytes(10, &[0]).is_err());
    }

    #[test]
    fn limit_cap() {
        assert!(OrderSet::new(MAX_LIMIT + 1).is_err());
        let err = OrderSet::with_budget(1 << 20, MemoryBudget(16)).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }
}
