//! Exact closure of a generator set under the Kronecker product and the
//! `4a, 4b -> 8ab` / `4a, 4b, 4c, 4d -> 16abcd` product rules.
//!
//! Elements divisible by four are handled in reduced coordinates: an element
//! `4y` combined with a generator `4h` gives `4 * y * h * 2^c`, where `c` is
//! 2 for a Kronecker merge, 1 for an R2 merge, and an R4 node costs 2 once for
//! three merges. Adding generators one at a time, the only state needed besides
//! `y` is how many merges of the current R4 group are still open (0, 1 or 2).
//! So the engine keeps one bitmap of `y` per open count and runs an in-place
//! ascending pass per generator, the same way a plain monoid closure does.
//! Every reachable tree shape corresponds to some sequence of merge choices,
//! so the result is the exact rule fixpoint.
//!
//! Generators not divisible by four can only take part in Kronecker products.
//! With `kron` enabled the result is `N ∪ T·N`, where `N` is the plain monoid of
//! those generators and `T` the tree closure of the multiples of four in
//! `G ∪ N`; without it they never combine with anything.

use std::fmt;
use std::str::FromStr;

use crate::bits::{bitmap_bytes, Bits, MemoryBudget};
use crate::error::{Error, Result};

use super::order_set::OrderSet;
use super::product_set;

/// Which product rules a closure applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClosureRules {
    /// `a, b -> ab`
    pub kron: bool,
    /// `4a, 4b -> 8ab`
    pub r2: bool,
    /// `4a, 4b, 4c, 4d -> 16abcd`
    pub r4: bool,
}

impl ClosureRules {
    pub const KRON: ClosureRules = ClosureRules {
        kron: true,
        r2: false,
        r4: false,
    };
    pub const ALL: ClosureRules = ClosureRules {
        kron: true,
        r2: true,
        r4: true,
    };

    pub fn is_empty(self) -> bool {
        !(self.kron || self.r2 || self.r4)
    }

    /// Bit 0 kron, bit 1 r2, bit 2 r4.
    pub fn to_byte(self) -> u8 {
        u8::from(self.kron) | u8::from(self.r2) << 1 | u8::from(self.r4) << 2
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        if b & !0b111 != 0 {
            return None;
        }
        Some(ClosureRules {
            kron: b & 1 != 0,
            r2: b & 2 != 0,
            r4: b & 4 != 0,
        })
    }

    /// The seven non-empty rule combinations.
    pub fn all_combinations() -> impl Iterator<Item = ClosureRules> {
        (1u8..8).filter_map(ClosureRules::from_byte)
    }
}

impl fmt::Display for ClosureRules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.kron, "kron"), (self.r2, "r2"), (self.r4, "r4")]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, n)| *n)
            .collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for ClosureRules {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rules = ClosureRules::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "kron" | "kronecker" => rules.kron = true,
                "r2" => rules.r2 = true,
                "r4" => rules.r4 = true,
                other => return Err(Error::domain(format!("unknown rule '{other}'"))),
            }
        }
        if rules.is_empty() {
            return Err(Error::domain("at least one closure rule is required"));
        }
        Ok(rules)
    }
}

/// Smallest monoid containing `generators` within `[1, limit]`.
pub fn multiplicative_closure<I>(generators: I, limit: u64) -> Result<OrderSet>
where
    I: IntoIterator<Item = u64>,
{
    let gens = OrderSet::from_values(limit, generators)?;
    rule_closure_of(&gens, ClosureRules::KRON, MemoryBudget::default())
}

/// Smallest superset of `{1} ∪ generators` closed under every enabled rule.
pub fn rule_closure<I>(generators: I, limit: u64, rules: ClosureRules) -> Result<OrderSet>
where
    I: IntoIterator<Item = u64>,
{
    let gens = OrderSet::from_values(limit, generators)?;
    rule_closure_of(&gens, rules, MemoryBudget::default())
}

/// Closure of the members of `generators` (a set over `[1, limit]`); the
/// output has the same limit.
pub fn rule_closure_of(generators: &OrderSet, rules: ClosureRules, budget: MemoryBudget) -> Result<OrderSet> {
    if rules.is_empty() {
        return Err(Error::domain("at least one closure rule is required"));
    }
    let limit = generators.limit();
    // output + leaves + up to three reduced-coordinate maps of limit/4 bits
    let reduced = bitmap_bytes(limit / 4 + 1) * if rules.r4 { 3 } else { 1 };
    budget.check("closure working set", 2 * OrderSet::bytes_for(limit) + reduced)?;

    if rules == ClosureRules::KRON {
        let mut out = OrderSet::with_budget(limit, budget)?;
        out.insert(1);
        for g in generators.iter().filter(|&g| g >= 2) {
            kron_pass(&mut out, g);
        }
        return Ok(out);
    }

    let others = generators.iter().filter(|&g| g >= 2 && g % 4 != 0);
    if rules.kron {
        let mut plain = OrderSet::with_budget(limit, budget)?;
        plain.insert(1);
        for g in others {
            kron_pass(&mut plain, g);
        }
        let mut leaves = generators.clone();
        for n in plain.iter().filter(|n| n % 4 == 0) {
            leaves.insert(n);
        }
        let mut trees = tree_closure(&leaves, rules, budget)?;
        drop(leaves);
        trees.insert(1);
        if plain.len() == 1 {
            return Ok(trees);
        }
        product_set(&trees, &plain, limit)
    } else {
        let mut out = tree_closure(generators, rules, budget)?;
        out.insert(1);
        for g in others {
            out.insert(g);
        }
        Ok(out)
    }
}

/// Factors of two saved when `leaves` multiples of four are combined into one
/// product-rule tree: `4 floor((A - 1) / 3) + (A - 1) mod 3`.
pub fn rule_savings(leaves: u32) -> u32 {
    let merges = leaves.saturating_sub(1);
    4 * (merges / 3) + merges % 3
}

/// Smallest order one product-rule tree over `values` reaches, i.e. their
/// product divided by `2^rule_savings(len)`. `None` for an empty input, a
/// value not divisible by four, or overflow.
pub fn min_tree_order(values: &[u64]) -> Option<u128> {
    if values.is_empty() || values.iter().any(|v| v % 4 != 0) {
        return None;
    }
    let product = values
        .iter()
        .try_fold(1u128, |acc, &v| acc.checked_mul(u128::from(v)))?;
    Some(product >> rule_savings(values.len() as u32))
}

/// Classical in-place pass: close `set` under multiplication by `g`.
fn kron_pass(set: &mut OrderSet, g: u64) {
    if set.contains(g) {
        // already a product of earlier generators
        return;
    }
    let limit = set.limit();
    let bound = limit / g;
    set.insert(g);
    // bit index i stands for i + 1
    let bits = set.bits_mut();
    scan_ascending(&mut [bits], bound, |maps, m| {
        let t = m * g;
        if t <= limit {
            maps[0].set(t - 1);
        }
    });
}

/// Visits every value `v <= bound` whose bit (index `v - 1`) is set in any of
/// `maps`, in ascending order. Words are re-read after each visit so bits set
/// by the visitor further along are picked up in the same walk.
fn scan_ascending<F>(maps: &mut [&mut Bits], bound: u64, mut visit: F)
where
    F: FnMut(&mut [&mut Bits], u64),
{
    let mut pos = 0u64;
    while pos < bound {
        let wi = (pos >> 6) as usize;
        let mut w = 0u64;
        for m in maps.iter() {
            w |= m.words()[wi];
        }
        w &= !0u64 << (pos & 63);
        if w == 0 {
            pos = ((wi as u64) + 1) << 6;
            continue;
        }
        let i = ((wi as u64) << 6) | u64::from(w.trailing_zeros());
        if i >= bound {
            break;
        }
        visit(maps, i + 1);
        pos = i + 1;
    }
}

/// Tree closure of the multiples of four in `leaves` under `rules`.
/// Returns the reachable elements (all divisible by four); `1` is not added.
fn tree_closure(leaves: &OrderSet, rules: ClosureRules, budget: MemoryBudget) -> Result<OrderSet> {
    let limit = leaves.limit();
    let y_max = limit / 4;
    let mut out = OrderSet::with_budget(limit, budget)?;
    if y_max == 0 {
        return Ok(out);
    }
    let classes = if rules.r4 { 3 } else { 1 };
    // reduced maps are indexed by y - 1 like order sets
    let mut maps: Vec<Bits> = (0..classes).map(|_| Bits::new(y_max)).collect();

    for leaf in leaves.iter().filter(|n| n % 4 == 0) {
        let h = leaf / 4;
        if h > y_max {
            break;
        }
        if maps[0].get(h - 1) {
            continue;
        }
        maps[0].set(h - 1);
        let bound = y_max / h;
        let mut refs: Vec<&mut Bits> = maps.iter_mut().collect();
        scan_ascending(&mut refs, bound, |maps, y| {
            // open-group order matters when h == 1: class k feeds k + 1 at the same y
            for k in 0..maps.len() {
                if !maps[k].get(y - 1) {
                    continue;
                }
                let yh = y * h;
                if rules.kron && 4 * yh <= y_max {
                    maps[k].set(4 * yh - 1);
                }
                if rules.r2 && 2 * yh <= y_max {
                    maps[k].set(2 * yh - 1);
                }
                if rules.r4 {
                    if k < 2 {
                        maps[k + 1].set(yh - 1);
                    } else if 4 * yh <= y_max {
                        maps[0].set(4 * yh - 1);
                    }
                }
            }
        });
    }

    for y in maps[0].iter_range(0, y_max).map(|i| i + 1) {
        out.insert(4 * y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(s: &OrderSet) -> Vec<u64> {
        s.iter().collect()
    }

    #[test]
    fn rules_parse_and_display() {
        let r: ClosureRules = "kron, r2,R4".parse().unwrap();
        assert_eq!(r, ClosureRules::ALL);
        assert_eq!(r.to_string(), "kron,r2,r4");
        assert!("".parse::<ClosureRules>().is_err());
        assert!("r3".parse::<ClosureRules>().is_err());
        assert_eq!(ClosureRules::all_combinations().count(), 7);
        for r in ClosureRules::all_combinations() {
            assert_eq!(ClosureRules::from_byte(r.to_byte()), Some(r));
        }
    }

    #[test]
    fn plain_monoid_examples() {
        let s = multiplicative_closure([4, 12], 200).unwrap();
        assert_eq!(members(&s), vec![1, 4, 12, 16, 48, 64, 144, 192]);
        let s = multiplicative_closure([], 50).unwrap();
        assert_eq!(members(&s), vec![1]);
        let s = multiplicative_closure([2], 33).unwrap();
        assert_eq!(members(&s), vec![1, 2, 4, 8, 16, 32]);
    }

    #[test]
    fn rule_examples() {
        let s = rule_closure([4, 8], 40, ClosureRules::ALL).unwrap();
        assert_eq!(members(&s), vec![1, 4, 8, 16, 32]);
        let s = rule_closure([4, 12], 200, ClosureRules::KRON).unwrap();
        assert_eq!(s.len(), 8);
        let kr2 = ClosureRules {
            kron: true,
            r2: true,
            r4: false,
        };
        let s = rule_closure([4], 100, kr2).unwrap();
        assert_eq!(members(&s), vec![1, 4, 8, 16, 32, 64]);
        let r2 = ClosureRules {
            kron: false,
            r2: true,
            r4: false,
        };
        let s = rule_closure([12], 400, r2).unwrap();
        assert_eq!(members(&s), vec![1, 12, 72]);
    }

    #[test]
    fn non_multiples_of_four_only_multiply() {
        let r4 = ClosureRules {
            kron: false,
            r2: false,
            r4: true,
        };
        let s = rule_closure([6, 4], 100, r4).unwrap();
        // R4(4,4,4,4) = 16, R4 with 16s goes past 100 except 16*4*4*4/16 = 64
        assert_eq!(members(&s), vec![1, 4, 6, 16, 64]);
        let s = rule_closure([6, 10], 2000, ClosureRules::ALL).unwrap();
        // 36 and 60 are multiples of four, so R2(36, 60) = 1080 appears
        assert!(s.contains(1080));
        assert!(s.contains(36 * 10));
    }

    #[test]
    fn savings_formula() {
        let got: Vec<u32> = (1..=7).map(rule_savings).collect();
        assert_eq!(got, vec![0, 1, 2, 4, 5, 6, 8]);
        assert_eq!(min_tree_order(&[4, 4]), Some(8));
        assert_eq!(min_tree_order(&[12, 20, 4, 4]), Some(240));
        assert_eq!(min_tree_order(&[6]), None);
        assert_eq!(min_tree_order(&[]), None);
    }

    #[test]
    fn empty_rules_rejected() {
        assert!(rule_closure([4], 10, ClosureRules::default()).is_err());
    }
}
