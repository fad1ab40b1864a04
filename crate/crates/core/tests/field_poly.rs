use std::collections::BTreeSet;
use std::sync::Arc;

use intdist::arith::divisors;
use intdist::poly::{
    distinct_roots, interpolate, irreducible_count_fixed_trace, is_permutation, perm_inverse,
};
use intdist::{build_field, Elem, Field, Poly};
use proptest::prelude::*;

const SMALL: [(u64, u32); 12] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (13, 1),
    (2, 4),
    (17, 1),
    (5, 2),
];

fn field_strategy() -> impl Strategy<Value = Arc<Field>> {
    prop::sample::select(SMALL.to_vec()).prop_map(|(p, s)| build_field(p, s, None).unwrap())
}

fn elem(f: &Field, i: usize) -> Elem {
    f.elements().nth(i % f.order()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fermat_and_inverse(f in field_strategy(), i in 1usize..1000) {
        let x = elem(&f, i);
        prop_assume!(!x.is_zero());
        prop_assert_eq!(f.powu(x, f.q() as u64 - 1), Elem::ONE);
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
    }

    #[test]
    fn roots_agree_with_gcd_degree(f in field_strategy(), coeffs in prop::collection::vec(0usize..64, 1..8)) {
        let c: Vec<Elem> = coeffs.iter().map(|&i| elem(&f, i)).collect();
        let p = Poly::new(&f, c);
        prop_assume!(!p.is_zero());
        let r = distinct_roots(&p).unwrap();
        let brute = f.elements().filter(|&x| p.eval(x).is_zero()).count();
        prop_assert_eq!(r.count, brute);
    }

    #[test]
    fn interpolation_recovers_samples(f in field_strategy(), coeffs in prop::collection::vec(0usize..64, 1..6), extra in 0usize..4) {
        let p = Poly::new(&f, coeffs.iter().map(|&i| elem(&f, i)).collect());
        let n = (coeffs.len() + extra).min(f.order());
        prop_assume!(p.degree().is_none_or(|d| d < n));
        let pairs: Vec<(Elem, Elem)> = f.elements().take(n).map(|x| (x, p.eval(x))).collect();
        prop_assert_eq!(interpolate(&f, &pairs).unwrap(), p);
    }
}

#[test]
fn multiplicative_order_of_alpha() {
    for (p, s) in SMALL {
        let f = build_field(p, s, None).unwrap();
        let a = f.primitive();
        let n = f.q() as u64 - 1;
        for d in divisors(n) {
            assert_eq!(f.powu(a, d) == Elem::ONE, d == n, "q={} d={d}", f.q());
        }
    }
}

#[test]
fn trace_is_additive() {
    for (p, s) in [(2, 2), (3, 2), (2, 3), (2, 4), (5, 2), (3, 1), (7, 1)] {
        let f = build_field(p, s, None).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(f.trace(f.add(x, y)), f.add(f.trace(x), f.trace(y)));
            }
        }
    }
}

#[test]
fn cyclotomic_classes_partition() {
    for q in 3u64..=49 {
        let Some((p, s)) = intdist::arith::prime_power(q) else {
            continue;
        };
        let f = build_field(p, s, None).unwrap();
        for e in divisors(q - 1) {
            let classes = f.cyclotomic_classes(e as u32).unwrap();
            assert_eq!(classes.len() as u64, e);
            let mut seen = BTreeSet::new();
            for c in &classes {
                assert_eq!(c.len() as u64, (q - 1) / e);
                for &x in c {
                    assert!(!x.is_zero() && seen.insert(x), "q={q} e={e}");
                }
            }
            assert_eq!(seen.len() as u64, q - 1);
        }
    }
}

#[test]
fn monomial_inverse_twice() {
    for q in 3u64..=25 {
        let Some((p, s)) = intdist::arith::prime_power(q) else {
            continue;
        };
        let f = build_field(p, s, None).unwrap();
        for d in 1..q as usize {
            let m = Poly::monomial(&f, Elem::ONE, d);
            if !is_permutation(&m) {
                continue;
            }
            let back = perm_inverse(&perm_inverse(&m).unwrap()).unwrap();
            assert!(back.functionally_eq(&m), "q={q} d={d}");
        }
    }
}

/// Counts root-free monic cubics `x^3 + γx^2 + ax + b`.
fn brute_irreducible_cubics(f: &Arc<Field>, gamma: Elem) -> u64 {
    let mut n = 0;
    for a in f.elements() {
        for b in f.elements() {
            let root_free = f.elements().all(|x| {
                let v = f.add(f.add(f.mul(f.mul(x, x), f.add(x, gamma)), f.mul(a, x)), b);
                !v.is_zero()
            });
            n += root_free as u64;
        }
    }
    n
}

#[test]
fn cubic_counts_match_enumeration() {
    for q in 2u64..=13 {
        let Some((p, s)) = intdist::arith::prime_power(q) else {
            continue;
        };
        let f = build_field(p, s, None).unwrap();
        for g in f.elements() {
            assert_eq!(
                irreducible_count_fixed_trace(&f, 3, g),
                brute_irreducible_cubics(&f, g),
                "q={q}"
            );
        }
    }
}
