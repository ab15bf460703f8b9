//! Brute-force fixpoint used as a test oracle for the closure engine.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::engine::ClosureRules;
use super::order_set::OrderSet;

/// Largest limit the oracle accepts.
pub const ORACLE_LIMIT: u64 = 1_000_000;

/// Applies every enabled rule to every tuple of known elements, round after
/// round, until nothing new appears.
pub fn brute_force_closure(generators: &[u64], limit: u64, rules: ClosureRules) -> Result<OrderSet> {
    if limit > ORACLE_LIMIT {
        return Err(Error::OracleBound {
            limit,
            bound: ORACLE_LIMIT,
        });
    }
    if rules.is_empty() {
        return Err(Error::domain("at least one closure rule is required"));
    }
    let lim = u128::from(limit);
    let mut known: BTreeSet<u64> = generators
        .iter()
        .copied()
        .filter(|&g| g >= 1 && g <= limit)
        .collect();
    known.insert(1);

    loop {
        let all: Vec<u64> = known.iter().copied().collect();
        let fours: Vec<u128> = all
            .iter()
            .filter(|&&n| n % 4 == 0)
            .map(|&n| u128::from(n))
            .collect();
        let mut fresh = Vec::new();
        let mut offer = |v: u128| {
            if v <= lim && !known.contains(&(v as u64)) {
                fresh.push(v as u64);
            }
        };

        if rules.kron {
            for (i, &a) in all.iter().enumerate() {
                for &b in &all[i..] {
                    let p = u128::from(a) * u128::from(b);
                    if p > lim {
                        break;
                    }
                    offer(p);
                }
            }
        }
        if rules.r2 {
            for (i, &a) in fours.iter().enumerate() {
                for &b in &fours[i..] {
                    let v = a * b / 2;
                    if v > lim {
                        break;
                    }
                    offer(v);
                }
            }
        }
        if rules.r4 {
            // a <= b <= c <= d; abcd / 16 grows with every factor
            let n = fours.len();
            for i in 0..n {
                let a = fours[i];
                if a * a * a * a / 16 > lim {
                    break;
                }
                for j in i..n {
                    let ab = a * fours[j];
                    if ab * fours[j] * fours[j] / 16 > lim {
                        break;
                    }
                    for k in j..n {
                        let abc = ab * fours[k];
                        if abc * fours[k] / 16 > lim {
                            break;
                        }
                        for &d in &fours[k..] {
                            let v = abc * d / 16;
                            if v > lim {
                                break;
                            }
                            offer(v);
                        }
                    }
                }
            }
        }

        if fresh.is_empty() {
            break;
        }
        known.extend(fresh);
    }
    OrderSet::from_values(limit, known)
}
