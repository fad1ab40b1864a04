use intdist::distribution::poly_distribution;
use intdist::equivalence::{inverse_comparison, nucleus_swap, xg_decompose};
use intdist::monomial::{horizontal_analysis, lacunary_partition, origin_analysis};
use intdist::poly::is_permutation;
use intdist::{build_field, Elem, Poly};
use proptest::prelude::*;

fn fields(max_q: u64) -> Vec<std::sync::Arc<intdist::Field>> {
    (2..=max_q)
        .filter_map(intdist::arith::prime_power)
        .map(|(p, s)| build_field(p, s, None).unwrap())
        .collect()
}

#[test]
fn swaps_and_inverses_keep_distribution() {
    for f in fields(13) {
        let q = f.q() as usize;
        for d in 2..q {
            let m = Poly::monomial(&f, Elem::ONE, d);
            let dist = poly_distribution(&m);
            if is_permutation(&m) {
                let r = inverse_comparison(&m).unwrap();
                assert!(r.equal, "inverse of x^{d} over GF({q})");
            }
            if xg_decompose(&m).is_ok() {
                let s = nucleus_swap(&m).unwrap();
                assert_eq!(poly_distribution(&s), dist, "swap of x^{d} over GF({q})");
            }
        }
    }
}

#[test]
fn line_analyses_match_direct_counts() {
    for f in fields(49) {
        let q = f.q() as u64;
        for d in 2..q {
            let pow: Vec<Elem> = f.elements().map(|x| f.powu(x, d)).collect();
            let h = horizontal_analysis(&f, d);
            assert!(h.certified);
            for (b, hits) in h.lines.iter().zip(&h.hits) {
                let direct: Vec<Elem> = f.elements().filter(|x| pow[x.index()] == *b).collect();
                assert_eq!(hits.len(), direct.len(), "q={q} d={d}");
                assert!(hits.iter().all(|x| direct.contains(x)));
            }
            for b in &h.empty {
                assert!(!pow.contains(b));
            }
            let o = origin_analysis(&f, d);
            assert!(o.certified);
            for (a, hits) in o.lines.iter().zip(&o.hits) {
                let direct = f
                    .elements()
                    .filter(|&x| pow[x.index()] == f.mul(*a, x))
                    .count();
                assert_eq!(hits.len(), direct, "q={q} d={d}");
            }
            for a in &o.empty {
                assert_eq!(
                    f.elements()
                        .filter(|&x| pow[x.index()] == f.mul(*a, x))
                        .count(),
                    1
                );
            }
        }
    }
}

#[test]
fn zero_is_a_root_iff_constant_vanishes() {
    for f in fields(13) {
        for d in 2..f.q() as usize {
            for a in f.elements() {
                for b in f.elements() {
                    let h = Poly::new(&f, vec![f.neg(b), f.neg(a)]);
                    let h = &Poly::monomial(&f, Elem::ONE, d) + &h;
                    assert_eq!(h.eval(Elem::ZERO).is_zero(), b.is_zero());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lacunary_roots_cover_all_nonzero_roots(qi in 0usize..13, d in 2usize..25, e in 0usize..8, a in 0usize..25, b in 1usize..25) {
        let fs = fields(25);
        let f = &fs[qi % fs.len()];
        let q = f.q() as usize;
        let d = 2 + d % (q - 2).max(1);
        prop_assume!(d < q);
        let divs = intdist::arith::divisors(q as u64 - 1);
        let e = divs[e % divs.len()] as u32;
        let a = f.elements().nth(a % q).unwrap();
        let b = f.nonzero().nth(b % (q - 1)).unwrap();
        let h = &Poly::monomial(f, Elem::ONE, d) + &Poly::new(f, vec![f.neg(b), f.neg(a)]);
        let Ok(part) = lacunary_partition(&h, e) else { return Ok(()) };
        let mut got: Vec<Elem> = part.parts.iter().flat_map(|p| p.roots.clone()).collect();
        got.sort();
        let want: Vec<Elem> = f.nonzero().filter(|&x| h.eval(x).is_zero()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        prop_assert_eq!(got, want);
    }
}
