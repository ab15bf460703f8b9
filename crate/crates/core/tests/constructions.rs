use std::sync::Arc;

use hadamard_core::arith::{is_prime_power, SieveConfig};
use hadamard_core::constructions::{
    binary_digit_exponent, cocyclic_generators, families_orders, family_orders, ingest_known_orders,
    paley_orders, parse_families, seberry_exponent, FamilyId, GeneratorFamily, KnownOrdersTable, PaleyPolicy,
};
use proptest::prelude::*;
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn isqrt_exact(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|s| s * s == n)
}

#[test]
fn paley_by_definition() {
    // q + 1 for primes q = 3 mod 4, 2(q + 1) for q = 1 mod 4
    for policy in [PaleyPolicy::Pure, PaleyPolicy::AllTwoPowers] {
        let limit = 5000;
        let set = paley_orders(limit, policy).unwrap();
        let mut base = std::collections::BTreeSet::new();
        for q in 2..limit {
            if !is_prime(q) || q == 2 {
                continue;
            }
            let mut n = if q % 4 == 3 { q + 1 } else { 2 * (q + 1) };
            base.insert(n);
            while policy == PaleyPolicy::AllTwoPowers && n <= limit {
                n *= 2;
                base.insert(n);
            }
        }
        let got: Vec<u64> = set.iter().filter(|&n| n >= 4).collect();
        let want: Vec<u64> = base.into_iter().filter(|&n| n <= limit).collect();
        assert_eq!(got, want, "{policy:?}");
        assert!(got.iter().all(|n| n % 4 == 0));
    }
}

#[test]
fn family_streams_are_prefix_stable() {
    let small = 4096;
    let large = 1 << 16;
    let table = Arc::new(KnownOrdersTable::parse("3 2\n5 4\n", "inline".as_ref()).unwrap());
    for id in FamilyId::ALL {
        let family = if id == FamilyId::ExternalTable {
            GeneratorFamily::with_table(id, table.clone())
        } else {
            GeneratorFamily::new(id)
        };
        let a = family_orders(&family, small).unwrap();
        let b = family_orders(&family, large).unwrap();
        assert_eq!(a, b.restrict(small), "{id}");
    }
}

#[test]
fn small_orders_family() {
    let set = family_orders(&GeneratorFamily::new(FamilyId::SmallOrders), 1000).unwrap();
    let got: Vec<u64> = set.iter().collect();
    let mut want = vec![1, 2];
    want.extend((4..=662).step_by(4));
    assert_eq!(got, want);
}

#[test]
fn seberry_family_members() {
    assert_eq!(seberry_exponent(1), 2);
    assert_eq!(seberry_exponent(3), 2);
    assert_eq!(seberry_exponent(167), 8);
    let set = family_orders(&GeneratorFamily::new(FamilyId::SeberryExponent), 50_000).unwrap();
    assert!(set.contains(4) && set.contains(12) && set.contains(256 * 3));
    assert!(!set.contains(668) && !set.contains(167 * 128) && set.contains(167 * 256));
    assert!(!set.contains(2) && !set.contains(6));
}

#[test]
fn binary_digit_examples() {
    assert_eq!(binary_digit_exponent(3).unwrap(), 3);
    assert_eq!(binary_digit_exponent(5).unwrap(), 4);
    assert_eq!(binary_digit_exponent(1).unwrap(), 2);
    assert!(binary_digit_exponent(6).is_err());
    let set = family_orders(&GeneratorFamily::new(FamilyId::BinaryDigits), 100).unwrap();
    assert!(set.contains(24) && !set.contains(12));
    assert_eq!(set.iter().next(), Some(4));
}

#[test]
fn binary_digit_membership_from_expansion() {
    let limit = 1 << 30;
    let set = family_orders(&GeneratorFamily::new(FamilyId::BinaryDigits), limit).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sample = set.iter().choose_multiple(&mut rng, 10_000);
    assert_eq!(sample.len(), 10_000);
    for n in sample {
        let t = n.trailing_zeros();
        let g = n >> t;
        let k = g.count_ones();
        let ok = if g % 4 == 1 { t >= 2 * k } else { t + 1 >= 2 * k };
        assert!(ok, "{n} = 2^{t} * {g}");
    }
    // and every qualifying value is emitted
    for n in 1..=20_000u64 {
        let t = n.trailing_zeros();
        let g = n >> t;
        let k = g.count_ones();
        let ok = if g % 4 == 1 { t >= 2 * k } else { t + 1 >= 2 * k };
        assert_eq!(set.contains(n), ok, "{n}");
    }
}

#[test]
fn square_families() {
    let limit = 1 << 20;
    let c4 = family_orders(&GeneratorFamily::new(FamilyId::FourQSquared), limit).unwrap();
    let c5 = family_orders(&GeneratorFamily::new(FamilyId::FourQFourth), limit).unwrap();
    let c6 = family_orders(&GeneratorFamily::new(FamilyId::TwinPrimePowerSquare), limit).unwrap();
    for set in [&c4, &c5, &c6] {
        for n in set.iter() {
            let square = isqrt_exact(n).is_some() || (n % 4 == 0 && isqrt_exact(n / 4).is_some());
            assert!(square, "{n}");
        }
    }
    for n in c4.iter() {
        let q = isqrt_exact(n / 4).unwrap();
        assert!(is_prime_power(q) && q % 8 != 7, "{n}");
    }
    assert!(c4.contains(36) && !c4.contains(4 * 49) && c4.contains(4 * 81));
    assert_eq!(
        family_orders(&GeneratorFamily::new(FamilyId::FourQFourth), 2000)
            .unwrap()
            .iter()
            .collect::<Vec<_>>(),
        vec![4, 324]
    );
    for n in c6.iter() {
        let r = isqrt_exact(n).unwrap();
        assert!(
            is_prime_power(r - 1) && is_prime_power(r + 1) && r % 2 == 0,
            "{n}"
        );
    }
}

#[test]
fn cocyclic_generators_by_definition() {
    let limit = 20_000;
    let set = cocyclic_generators(limit).unwrap();
    let mut want = std::collections::BTreeSet::new();
    for q in 3..limit {
        if q % 2 == 0 || !is_prime_power(q) {
            continue;
        }
        // q^a (q + 1) for a >= 0, times 2 in the q = 1 mod 4 case
        let mut v = if q % 4 == 1 { 2 * (q + 1) } else { q + 1 } as u128;
        while v <= limit as u128 {
            want.insert(v as u64);
            v *= q as u128;
        }
    }
    let got: std::collections::BTreeSet<u64> = set.iter().filter(|&n| n > 1).collect();
    assert_eq!(got, want);
}

#[test]
fn cocyclic_small_members() {
    let set = cocyclic_generators(200).unwrap();
    assert!(set.contains(12) && set.contains(36) && set.contains(60));
    assert!(is_prime(3) && set.contains(3 * 4));
}

#[test]
fn table_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("known.txt");
    std::fs::write(&path, "# g t_min\n3 2\n5 4\n\n3 5\n").unwrap();
    let table = ingest_known_orders(&path).unwrap();
    assert_eq!(table.len(), 2);
    assert_eq!(table.get(3), Some(2));
    let family = GeneratorFamily::with_table(FamilyId::ExternalTable, Arc::new(table));
    let got: Vec<u64> = family_orders(&family, 100).unwrap().iter().collect();
    assert_eq!(got, vec![12, 24, 48, 80, 96]);

    std::fs::write(&path, "3 2\n4 1\n").unwrap();
    let err = ingest_known_orders(&path).unwrap_err().to_string();
    assert!(err.contains('2'), "{err}");
    assert!(ingest_known_orders(&dir.path().join("missing")).is_err());
}

#[test]
fn family_lists() {
    let families = parse_families("paley,c3,c6", None).unwrap();
    assert_eq!(families.len(), 3);
    assert!(parse_families("table", None).is_err());
    assert!(parse_families("c9", None).is_err());
    assert!(parse_families("", None).is_err());
    let union = families_orders(&families, 1000, &SieveConfig::default()).unwrap();
    for f in &families {
        assert!(family_orders(f, 1000).unwrap().is_subset_of(&union));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seberry_exponent_matches_rounding(g in (1u64..1_000_000_000).prop_map(|g| g | 1)) {
        let m = (g - 1) / 2;
        let expected = if m <= 1 {
            2
        } else {
            let log = (m as f64).log2();
            6 * (log / 16.0).ceil() as u32 + 2
        };
        // exact powers of two sit on the rounding boundary in floating point
        prop_assume!(m <= 1 || !m.is_power_of_two());
        prop_assert_eq!(seberry_exponent(g), expected);
    }

    #[test]
    fn paley_union_of_policies(limit in 4u64..20_000) {
        let pure = paley_orders(limit, PaleyPolicy::Pure).unwrap();
        let all = paley_orders(limit, PaleyPolicy::AllTwoPowers).unwrap();
        prop_assert!(pure.is_subset_of(&all));
        for n in all.iter() {
            let halvings = (0..=n.trailing_zeros()).map(|j| n >> j);
            prop_assert!(halvings.into_iter().any(|m| pure.contains(m)), "{}", n);
        }
    }
}
