//! Generator families of known Hadamard orders.
//!
//! Every family is produced straight into an [`OrderSet`]; iterating the set
//! gives the deduplicated ascending stream.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::arith::{
    binary_digit_count, iroot, is_prime_power, isqrt, sieve_primes_with, PrimeTable, SieveConfig,
};
use crate::closure::OrderSet;
use crate::error::{Error, Result};

/// Orders up to this bound all exist.
pub const SMALL_ORDER_BOUND: u64 = 662;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// `q + 1` for primes `q ≡ 3 (mod 4)`, `2(q + 1)` for primes `q ≡ 1 (mod 4)`.
    PaleyPure,
    /// Paley orders closed under doubling.
    PaleyDoubled,
    /// 1, 2 and every multiple of four up to 662, plus an attached table.
    SmallOrders,
    /// `2^t g` with `t >= 6 floor(log2((g - 1) / 2) / 16) + 2`.
    SeberryExponent,
    /// `2^t g` with `t` bounded by the number of 1-bits of `g`.
    BinaryDigits,
    /// `4q^2` for prime powers `q ≢ 7 (mod 8)`.
    FourQSquared,
    /// `4q^4` for odd `q`.
    FourQFourth,
    /// `n^2` where `n - 1` and `n + 1` are odd prime powers.
    TwinPrimePowerSquare,
    /// Generators of the cocyclic orders.
    Cocyclic,
    /// Orders from a known-orders table file.
    ExternalTable,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::PaleyPure,
        FamilyId::PaleyDoubled,
        FamilyId::SmallOrders,
        FamilyId::SeberryExponent,
        FamilyId::BinaryDigits,
        FamilyId::FourQSquared,
        FamilyId::FourQFourth,
        FamilyId::TwinPrimePowerSquare,
        FamilyId::Cocyclic,
        FamilyId::ExternalTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::PaleyPure => "paley",
            FamilyId::PaleyDoubled => "paley2",
            FamilyId::SmallOrders => "c1",
            FamilyId::SeberryExponent => "c2",
            FamilyId::BinaryDigits => "c3",
            FamilyId::FourQSquared => "c4",
            FamilyId::FourQFourth => "c5",
            FamilyId::TwinPrimePowerSquare => "c6",
            FamilyId::Cocyclic => "c7",
            FamilyId::ExternalTable => "table",
        }
    }

    fn needs_primes(self) -> bool {
        matches!(
            self,
            FamilyId::PaleyPure | FamilyId::PaleyDoubled | FamilyId::Cocyclic
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| {
                Error::domain(format!(
                    "unknown family '{s}' (expected paley, paley2, c1..c7 or table)"
                ))
            })
    }
}

/// A family together with its optional known-orders table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFamily {
    pub id: FamilyId,
    pub table: Option<Arc<KnownOrdersTable>>,
}

impl GeneratorFamily {
    pub fn new(id: FamilyId) -> Self {
        GeneratorFamily { id, table: None }
    }

    pub fn with_table(id: FamilyId, table: Arc<KnownOrdersTable>) -> Self {
        GeneratorFamily {
            id,
            table: Some(table),
        }
    }
}

/// Parses a comma-separated family list; `table` entries get `table` attached,
/// and so does `c1` when a table is given.
pub fn parse_families(list: &str, table: Option<Arc<KnownOrdersTable>>) -> Result<Vec<GeneratorFamily>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let id: FamilyId = part.parse()?;
        let table = match id {
            FamilyId::ExternalTable => Some(
                table
                    .clone()
                    .ok_or_else(|| Error::domain("family 'table' needs a known-orders table file"))?,
            ),
            FamilyId::SmallOrders => table.clone(),
            _ => None,
        };
        out.push(GeneratorFamily { id, table });
    }
    if out.is_empty() {
        return Err(Error::domain("the family list is empty"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PaleyPolicy {
    /// Only `q + 1` and `2(q + 1)` themselves.
    #[default]
    Pure,
    /// Also every further doubling of those orders.
    AllTwoPowers,
}

/// Paley orders up to `limit`. A limit below 4 gives an empty set.
pub fn paley_orders(limit: u64, policy: PaleyPolicy) -> Result<OrderSet> {
    let mut out = OrderSet::new(limit)?;
    if limit >= 4 {
        let primes = sieve_primes_with(limit, &SieveConfig::default())?;
        paley_into(&primes, limit, policy, &mut out);
    }
    Ok(out)
}

fn paley_into(primes: &PrimeTable, limit: u64, policy: PaleyPolicy, out: &mut OrderSet) {
    for q in primes.iter_range(3, limit - 1) {
        let mut n = if q % 4 == 3 { q + 1 } else { 2 * (q + 1) };
        if n > limit {
            continue;
        }
        out.insert(n);
        if policy == PaleyPolicy::AllTwoPowers {
            while n <= limit / 2 {
                n *= 2;
                out.insert(n);
            }
        }
    }
}

/// Orders of one family up to `limit`.
pub fn family_orders(family: &GeneratorFamily, limit: u64) -> Result<OrderSet> {
    let mut out = OrderSet::new(limit)?;
    let primes = if family.id.needs_primes() && limit >= 4 {
        Some(sieve_primes_with(limit, &SieveConfig::default())?)
    } else {
        None
    };
    family_orders_into(family, limit, primes.as_ref(), &mut out)?;
    Ok(out)
}

/// Union of several families, sharing one prime table.
pub fn families_orders(families: &[GeneratorFamily], limit: u64, sieve: &SieveConfig) -> Result<OrderSet> {
    if families.is_empty() {
        return Err(Error::domain("the family list is empty"));
    }
    let mut out = OrderSet::with_budget(limit, sieve.budget)?;
    let primes = if families.iter().any(|f| f.id.needs_primes()) && limit >= 4 {
        Some(sieve_primes_with(limit, sieve)?)
    } else {
        None
    };
    for family in families {
        family_orders_into(family, limit, primes.as_ref(), &mut out)?;
    }
    Ok(out)
}

/// Adds the orders of `family` up to `limit` to `out`. `primes` must cover
/// `limit` for the Paley and cocyclic families.
pub fn family_orders_into(
    family: &GeneratorFamily,
    limit: u64,
    primes: Option<&PrimeTable>,
    out: &mut OrderSet,
) -> Result<()> {
    let limit = limit.min(out.limit());
    let need_primes = || -> Result<&PrimeTable> {
        match primes {
            Some(p) if p.limit() >= limit => Ok(p),
            _ => Err(Error::domain(format!(
                "family {} needs a prime table up to {limit}",
                family.id
            ))),
        }
    };
    match family.id {
        FamilyId::PaleyPure | FamilyId::PaleyDoubled => {
            if limit >= 4 {
                let policy = if family.id == FamilyId::PaleyPure {
                    PaleyPolicy::Pure
                } else {
                    PaleyPolicy::AllTwoPowers
                };
                paley_into(need_primes()?, limit, policy, out);
            }
        }
        FamilyId::SmallOrders => {
            out.insert(1);
            out.insert(2);
            let mut n = 4;
            while n <= SMALL_ORDER_BOUND.min(limit) {
                out.insert(n);
                n += 4;
            }
            if let Some(table) = &family.table {
                table.insert_orders(limit, out);
            }
        }
        FamilyId::SeberryExponent => {
            let mut g = 1;
            while g <= limit {
                two_power_multiples(g, seberry_exponent(g), limit, out);
                g += 2;
            }
        }
        FamilyId::BinaryDigits => {
            let mut g = 1;
            while g <= limit / 2 {
                let t = binary_digit_exponent(g)?;
                two_power_multiples(g, t, limit, out);
                g += 2;
            }
        }
        FamilyId::FourQSquared => {
            for q in 2..=isqrt(limit / 4) {
                if q % 8 != 7 && is_prime_power(q) {
                    out.insert(4 * q * q);
                }
            }
        }
        FamilyId::FourQFourth => {
            let mut q = 1;
            while q <= iroot(limit / 4, 4) {
                out.insert(4 * q.pow(4));
                q += 2;
            }
        }
        FamilyId::TwinPrimePowerSquare => {
            let mut n = 4;
            while n <= isqrt(limit) {
                if is_prime_power(n - 1) && is_prime_power(n + 1) {
                    out.insert(n * n);
                }
                n += 2;
            }
        }
        FamilyId::Cocyclic => {
            if limit >= 4 {
                cocyclic_into(need_primes()?, limit, out);
            }
        }
        FamilyId::ExternalTable => match &family.table {
            Some(table) => table.insert_orders(limit, out),
            None => return Err(Error::domain("family 'table' has no table attached")),
        },
    }
    Ok(())
}

/// Smallest exponent for odd `g` in the Seberry-type family,
/// `6 ceil(log2((g - 1) / 2) / 16) + 2`; `g = 1` gets 2.
///
/// The rounding is upward: rounding down would put every `4g` with
/// `g < 131073` in the family, including open cases such as 668.
pub fn seberry_exponent(g: u64) -> u32 {
    debug_assert!(g % 2 == 1);
    let m = g.saturating_sub(1) / 2;
    if m <= 1 {
        return 2;
    }
    // ceil(log2(m) / 16) is the least j with m <= 2^(16 j)
    let ceil_log2 = 64 - (m - 1).leading_zeros();
    6 * ceil_log2.div_ceil(16) + 2
}

/// Smallest exponent for odd `g` in the binary-digit family.
pub fn binary_digit_exponent(g: u64) -> Result<u32> {
    let k = binary_digit_count(g)?;
    Ok(if g % 4 == 1 { 2 * k } else { 2 * k - 1 })
}

fn two_power_multiples(g: u64, t_min: u32, limit: u64, out: &mut OrderSet) {
    if t_min >= 64 || g > limit >> t_min {
        return;
    }
    let mut n = g << t_min;
    loop {
        out.insert(n);
        if n > limit / 2 {
            break;
        }
        n *= 2;
    }
}

/// Generators of the cocyclic monoid up to `limit`.
pub fn cocyclic_generators(limit: u64) -> Result<OrderSet> {
    let mut out = OrderSet::new(limit)?;
    if limit >= 4 {
        let primes = sieve_primes_with(limit, &SieveConfig::default())?;
        cocyclic_into(&primes, limit, &mut out);
    }
    Ok(out)
}

fn cocyclic_into(primes: &PrimeTable, limit: u64, out: &mut OrderSet) {
    let mut emit = |q: u64| {
        // 2 q^a (q + 1) for q ≡ 1, q^b (q + 1) for q ≡ 3
        let base = if q % 4 == 1 { 2 * (q + 1) } else { q + 1 };
        let mut n = base;
        while n <= limit {
            out.insert(n);
            match n.checked_mul(q) {
                Some(next) => n = next,
                None => break,
            }
        }
    };
    for p in primes.iter_range(3, limit) {
        let mut q = p;
        while q + 1 <= limit {
            emit(q);
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
}

/// Entries `g -> t_min`: order `2^t g` is known for every `t >= t_min`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnownOrdersTable {
    entries: BTreeMap<u64, u32>,
}

impl KnownOrdersTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, g: u64) -> Option<u32> {
        self.entries.get(&g).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.entries.iter().map(|(&g, &t)| (g, t))
    }

    /// Adds an entry; a duplicate `g` keeps the smaller `t_min`.
    pub fn insert(&mut self, g: u64, t_min: u32) -> Result<()> {
        if g % 2 == 0 {
            return Err(Error::domain(format!("table entry g = {g} must be odd")));
        }
        self.entries
            .entry(g)
            .and_modify(|t| *t = (*t).min(t_min))
            .or_insert(t_min);
        Ok(())
    }

    pub fn insert_orders(&self, limit: u64, out: &mut OrderSet) {
        for (&g, &t) in &self.entries {
            two_power_multiples(g, t, limit, out);
        }
    }

    /// Parses table text; `path` is only used in error messages.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut table = KnownOrdersTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [g, t] = fields[..] else {
                return Err(err(format!("expected \"g t_min\", found {line:?}")));
            };
            let g: u64 = g.parse().map_err(|e| err(format!("bad g {g:?}: {e}")))?;
            let t: u32 = t.parse().map_err(|e| err(format!("bad t_min {t:?}: {e}")))?;
            if g % 2 == 0 {
                return Err(err(format!("g = {g} must be odd")));
            }
            table.insert(g, t)?;
        }
        Ok(table)
    }
}

/// Reads a known-orders table: one `g t_min` pair per line, `#` comments.
pub fn ingest_known_orders(path: &Path) -> Result<KnownOrdersTable> {
    let text = std::fs::read_to_string(path)?;
    KnownOrdersTable::parse(&text, path)
}
