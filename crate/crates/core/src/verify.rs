//! Seeded self-verification suites.
//!
//! Each suite draws its cases from a ChaCha stream seeded by the run seed
//! and the suite name, so suites can be run alone and still see the same
//! cases. A failing case is shrunk by dropping generators while it keeps
//! failing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    coefficient_bound_violations, exp_domination_violations, window_inequality_violations,
};
use crate::arith::{hardy_ramanujan_estimate, PartitionCache};
use crate::closure::{brute_force_closure, multiplicative_closure, rule_closure, ClosureRules};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracle,
    Window,
    Coefficients,
    Exp,
    Partitions,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Oracle,
        Suite::Window,
        Suite::Coefficients,
        Suite::Exp,
        Suite::Partitions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Window => "window",
            Suite::Coefficients => "coefficients",
            Suite::Exp => "exp",
            Suite::Partitions => "partitions",
        }
    }

    fn invariant(self) -> &'static str {
        match self {
            Suite::Oracle => "rule closure equals the brute-force fixpoint",
            Suite::Window => "window count ratio c(x)/b(x) is at most the product-window sum",
            Suite::Coefficients => "product coefficients c_n are at most sum_k a_k B(2^(n-k))",
            Suite::Exp => "Exp-transform partial sums dominate the monoid counting function",
            Suite::Partitions => "partition numbers match enumeration and the asymptotic estimate",
        }
    }

    fn seed_offset(self) -> u64 {
        self.name()
            .bytes()
            .fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(u64::from(b)))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite '{s}'")))
    }
}

pub fn parse_suites(list: &str) -> Result<Vec<Suite>> {
    let suites = list
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    if suites.is_empty() {
        return Err(Error::domain("the suite list is empty"));
    }
    Ok(suites)
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub suites: Vec<Suite>,
    /// Flip one bit of every fast closure before comparing it.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0x4841_4441,
            suites: Suite::ALL.to_vec(),
            inject_fault: false,
        }
    }
}

/// A failing case after shrinking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub invariant: String,
    pub generators: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub second_generators: Vec<u64>,
    pub limit: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rules: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

pub fn run_verification(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut suites = Vec::new();
    for &suite in &config.suites {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ suite.seed_offset());
        let report = match suite {
            Suite::Oracle => oracle_suite(&mut rng, config.inject_fault)?,
            Suite::Window => pair_suite(Suite::Window, &mut rng)?,
            Suite::Coefficients => pair_suite(Suite::Coefficients, &mut rng)?,
            Suite::Exp => exp_suite(&mut rng)?,
            Suite::Partitions => partition_suite(),
        };
        suites.push(report);
    }
    Ok(VerifyReport {
        seed: config.seed,
        suites,
    })
}

/// Drops generators while `fails` keeps returning true: halves first, then
/// smaller chunks down to single elements.
pub fn minimize<F>(mut gens: Vec<u64>, mut fails: F) -> Vec<u64>
where
    F: FnMut(&[u64]) -> bool,
{
    let mut chunk = gens.len().div_ceil(2).max(1);
    loop {
        let mut i = 0;
        while i < gens.len() && gens.len() > 1 {
            let end = (i + chunk).min(gens.len());
            let mut candidate = gens[..i].to_vec();
            candidate.extend_from_slice(&gens[end..]);
            if !candidate.is_empty() && fails(&candidate) {
                gens = candidate;
            } else {
                i = end;
            }
        }
        if chunk == 1 {
            return gens;
        }
        chunk = chunk.div_ceil(2);
    }
}

fn oracle_mismatch(
    gens: &[u64],
    limit: u64,
    rules: ClosureRules,
    inject_fault: bool,
) -> Result<Option<String>> {
    let mut fast = rule_closure(gens.iter().copied(), limit, rules)?;
    if inject_fault {
        let last = fast.iter().last().unwrap_or(1);
        fast.toggle(last);
    }
    let slow = brute_force_closure(gens, limit, rules)?;
    if fast == slow {
        return Ok(None);
    }
    let first = (1..=limit)
        .find(|&n| fast.contains(n) != slow.contains(n))
        .expect("sets differ");
    Ok(Some(format!(
        "first difference at {first}: engine {}, oracle {}",
        fast.contains(first),
        slow.contains(first)
    )))
}

fn oracle_suite(rng: &mut ChaCha8Rng, inject_fault: bool) -> Result<SuiteReport> {
    let mut cases = 0;
    for _ in 0..100 {
        let count = rng.gen_range(3..=8);
        let gens: Vec<u64> = (0..count).map(|_| rng.gen_range(4..=200)).collect();
        let limit = rng.gen_range(1_000..=20_000);
        for rules in ClosureRules::all_combinations() {
            cases += 1;
            if oracle_mismatch(&gens, limit, rules, inject_fault)?.is_none() {
                continue;
            }
            let small = minimize(gens.clone(), |g| {
                matches!(oracle_mismatch(g, limit, rules, inject_fault), Ok(Some(_)))
            });
            let detail = oracle_mismatch(&small, limit, rules, inject_fault)?.unwrap_or_default();
            return Ok(failed(
                Suite::Oracle,
                cases,
                Failure {
                    invariant: Suite::Oracle.invariant().into(),
                    generators: small,
                    second_generators: Vec::new(),
                    limit,
                    rules: Some(rules.to_string()),
                    detail,
                },
            ));
        }
    }
    Ok(passed(Suite::Oracle, cases))
}

fn random_monoid_generators(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> Vec<u64> {
    let count = rng.gen_range(2..=5);
    (0..count).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn pair_violation(suite: Suite, a_gens: &[u64], b_gens: &[u64], k: u32) -> Result<Option<String>> {
    let limit = 1u64 << k;
    let a = multiplicative_closure(a_gens.iter().copied(), limit)?;
    let b = rule_closure(b_gens.iter().copied(), limit, ClosureRules::ALL)?;
    Ok(match suite {
        Suite::Window => window_inequality_violations(&a, &b)?
            .first()
            .map(|v| format!("x = {}: c(x)/b(x) = {} > {}", v.x, v.lhs, v.rhs)),
        _ => coefficient_bound_violations(&a, &b, k)?
            .first()
            .map(|v| format!("n = {}: c_n = {} > {}", v.n, v.lhs, v.rhs)),
    })
}

fn pair_suite(suite: Suite, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    for case in 1..=20 {
        let a_gens = random_monoid_generators(rng, 2, 64);
        let b_gens = random_monoid_generators(rng, 4, 256);
        let k = rng.gen_range(10..=16);
        if pair_violation(suite, &a_gens, &b_gens, k)?.is_none() {
            continue;
        }
        let fails = |a: &[u64], b: &[u64]| matches!(pair_violation(suite, a, b, k), Ok(Some(_)));
        let a_small = minimize(a_gens, |a| fails(a, &b_gens));
        let b_small = minimize(b_gens, |b| fails(&a_small, b));
        let detail = pair_violation(suite, &a_small, &b_small, k)?.unwrap_or_default();
        return Ok(failed(
            suite,
            case,
            Failure {
                invariant: suite.invariant().into(),
                generators: a_small,
                second_generators: b_small,
                limit: 1 << k,
                rules: None,
                detail,
            },
        ));
    }
    Ok(passed(suite, 20))
}

fn exp_violation(gens: &[u64], k_max: u32) -> Result<Option<String>> {
    Ok(exp_domination_violations(gens, k_max)?.first().map(|v| {
        format!(
            "n = {}: partial sum {} < M(2^n) = {}",
            v.n, v.exp_partial_sum, v.monoid_count
        )
    }))
}

fn exp_suite(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    for case in 1..=20 {
        let count = rng.gen_range(2..=6);
        let gens: Vec<u64> = (0..count).map(|_| rng.gen_range(2..=500)).collect();
        let k_max = rng.gen_range(10..=18);
        if exp_violation(&gens, k_max)?.is_none() {
            continue;
        }
        let small = minimize(gens, |g| matches!(exp_violation(g, k_max), Ok(Some(_))));
        let detail = exp_violation(&small, k_max)?.unwrap_or_default();
        return Ok(failed(
            Suite::Exp,
            case,
            Failure {
                invariant: Suite::Exp.invariant().into(),
                generators: small,
                second_generators: Vec::new(),
                limit: (2 << k_max) - 1,
                rules: Some(ClosureRules::KRON.to_string()),
                detail,
            },
        ));
    }
    Ok(passed(Suite::Exp, 20))
}

/// Counts partitions of `n` by walking every partition with parts `<= max_part`.
fn enumerate_partitions(n: u32, max_part: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max_part.min(n))
        .map(|part| enumerate_partitions(n - part, part))
        .sum()
}

fn partition_suite() -> SuiteReport {
    let cache = PartitionCache::new(1000);
    let mut cases = 0;
    let fail = |detail: String, cases: usize| {
        failed(
            Suite::Partitions,
            cases,
            Failure {
                invariant: Suite::Partitions.invariant().into(),
                generators: Vec::new(),
                second_generators: Vec::new(),
                limit: 0,
                rules: None,
                detail,
            },
        )
    };
    for n in 0..=60u32 {
        cases += 1;
        let enumerated = BigUint::from(enumerate_partitions(n, n));
        let recurrence = cache.get(n as usize).expect("cached");
        if &enumerated != recurrence {
            return fail(
                format!("p({n}): recurrence {recurrence}, enumeration {enumerated}"),
                cases,
            );
        }
    }
    if cache.values().windows(2).any(|w| w[1] < w[0]) || !cache.values()[0].is_one() {
        return fail("partition numbers are not monotone from p(0) = 1".into(), cases);
    }
    let ratio = crate::arith::hardy_ramanujan_ratio;
    for n in [100usize, 500, 1000] {
        cases += 1;
        let r = ratio(n);
        if !(0.9 < r && r < 1.1) || !hardy_ramanujan_estimate(n as u64).is_finite() {
            return fail(format!("p({n}) / estimate = {r} outside (0.9, 1.1)"), cases);
        }
    }
    cases += 1;
    if (ratio(1000) - 1.0).abs() >= (ratio(100) - 1.0).abs() {
        return fail(
            "the estimate does not improve from n = 100 to n = 1000".into(),
            cases,
        );
    }
    passed(Suite::Partitions, cases)
}

fn passed(suite: Suite, cases: usize) -> SuiteReport {
    SuiteReport {
        suite,
        cases,
        passed: true,
        failure: None,
    }
}

fn failed(suite: Suite, cases: usize, failure: Failure) -> SuiteReport {
    SuiteReport {
        suite,
        cases,
        passed: false,
        failure: Some(failure),
    }
}
