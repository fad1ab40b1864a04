//! (q+1)-sets contained in two lines, with or without extra points, and their
//! closed-form intersection distributions.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::derive_seed;
use crate::distribution::{poly_distribution, set_distribution, IntersectionDistribution, Kind};
use crate::error::{Error, Result};
use crate::ff::{field_of_order, Elem, Field};
use crate::geometry::{graph_set, PointSet, Triple};
use crate::poly::{indicator_polynomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Two lines, their meet left out.
    TwoLinesExcl,
    /// Two lines, their meet included.
    TwoLinesIncl,
    /// Graph of a polynomial on `y = x` and `y = -x` (`y = 0` when q is even).
    TwoLinesNucleus,
    /// Graph of a polynomial on `y = 0` and `y = 1`.
    TwoLinesParallelNucleus,
    /// Graph of a polynomial on `y = 1` and `y = -1` plus the origin, with c 3-secants.
    TwoLinesTwoPoints,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::TwoLinesExcl,
        Family::TwoLinesIncl,
        Family::TwoLinesNucleus,
        Family::TwoLinesParallelNucleus,
        Family::TwoLinesTwoPoints,
    ];

    fn tag(self) -> u64 {
        Family::ALL.iter().position(|&f| f == self).unwrap() as u64
    }

    pub fn has_polynomial(self) -> bool {
        !matches!(self, Family::TwoLinesExcl | Family::TwoLinesIncl)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub family: Family,
    pub q: u64,
    pub t: u64,
    #[serde(default)]
    pub c: u64,
    #[serde(default)]
    pub seed: u64,
}

/// Largest allowed t, or None when the family is empty for this q.
fn t_max(family: Family, q: u64) -> Option<u64> {
    let m = match family {
        Family::TwoLinesExcl => q.div_ceil(2),
        Family::TwoLinesIncl => q / 2 + 1,
        Family::TwoLinesNucleus => (q - 1) / 2 + 1,
        Family::TwoLinesParallelNucleus => q / 2,
        Family::TwoLinesTwoPoints => (q - 1) / 2,
    };
    m.checked_sub(2)
}

/// Sizes `(A, B)` of the two parts.
fn sizes(family: Family, q: u64, t: u64) -> (u64, u64) {
    match family {
        Family::TwoLinesExcl => ((q + 2) / 2 + t, q.div_ceil(2) - t),
        Family::TwoLinesIncl | Family::TwoLinesParallelNucleus => (q.div_ceil(2) + t, q / 2 - t),
        Family::TwoLinesNucleus | Family::TwoLinesTwoPoints => {
            ((q - 1).div_ceil(2) + t, (q - 1) / 2 - t)
        }
    }
}

impl ConstructionSpec {
    pub fn validate(&self) -> Result<()> {
        let q = self.q;
        if crate::arith::prime_power(q).is_none() {
            return Err(Error::NonPrime(q));
        }
        if self.family == Family::TwoLinesTwoPoints && q.is_multiple_of(2) {
            return Err(Error::EvenField);
        }
        let out = |what: String| Err(Error::ParameterOutOfRange(what));
        match t_max(self.family, q) {
            Some(m) if self.t <= m => {}
            Some(m) => return out(format!("t={} exceeds {m} for q={q}", self.t)),
            None => return out(format!("no valid t for q={q}")),
        }
        if self.family == Family::TwoLinesTwoPoints {
            let (a, b) = sizes(self.family, q, self.t);
            if self.c > b {
                return out(format!("c={} exceeds {b}", self.c));
            }
            if !(a - self.c).is_multiple_of(2) {
                return Err(Error::InfeasibleParity(format!(
                    "{a} - c must be even, c={}",
                    self.c
                )));
            }
        } else if self.c != 0 {
            return out("c applies only to TwoLinesTwoPoints".into());
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(&[
            self.family.tag(),
            self.q,
            self.t,
            self.c,
            self.seed,
        ]))
    }
}

/// Every valid `(t, c)` for the family over q (`c = 0` except for TwoLinesTwoPoints).
pub fn valid_params(family: Family, q: u64) -> Vec<(u64, u64)> {
    let Some(m) = t_max(family, q) else {
        return Vec::new();
    };
    if family == Family::TwoLinesTwoPoints && q.is_multiple_of(2) {
        return Vec::new();
    }
    (0..=m)
        .flat_map(|t| {
            let cs: Vec<u64> = if family == Family::TwoLinesTwoPoints {
                let (a, b) = sizes(family, q, t);
                (0..=b).filter(|c| (a - c) % 2 == 0).collect()
            } else {
                vec![0]
            };
            cs.into_iter().map(move |c| (t, c))
        })
        .collect()
}

/// Adds `value` at each listed index, so coinciding subscripts merge.
fn accumulate(len: usize, entries: &[(u64, u64)]) -> Vec<u64> {
    let mut v = vec![0u64; len];
    for &(i, n) in entries {
        v[i as usize] += n;
    }
    v
}

/// Closed-form distribution: `u` for the two set families, `v` for the others.
pub fn predicted_distribution(spec: &ConstructionSpec) -> Result<IntersectionDistribution> {
    spec.validate()?;
    let q = spec.q;
    let (a, b) = sizes(spec.family, q, spec.t);
    let ab = a * b;
    let (kind, counts) = match spec.family {
        Family::TwoLinesExcl => (
            Kind::Set,
            accumulate(
                q as usize + 2,
                &[
                    (a, 1),
                    (b, 1),
                    (2, ab),
                    (1, q * q + q - 2 * ab),
                    (0, ab - 1),
                ],
            ),
        ),
        Family::TwoLinesIncl => (
            Kind::Set,
            accumulate(
                q as usize + 2,
                &[
                    (a + 1, 1),
                    (b + 1, 1),
                    (2, ab),
                    (1, q * q - 2 * ab + q - 1),
                    (0, ab),
                ],
            ),
        ),
        Family::TwoLinesNucleus => (
            Kind::Poly,
            accumulate(
                q as usize + 1,
                &[
                    (a + 1, 1),
                    (b + 1, 1),
                    (2, ab),
                    (1, (q - 1) * (q - 1) - 2 * ab + q - 2),
                    (0, q - 1 + ab),
                ],
            ),
        ),
        Family::TwoLinesParallelNucleus => (
            Kind::Poly,
            accumulate(
                q as usize + 1,
                &[
                    (a, 1),
                    (b, 1),
                    (2, ab),
                    (1, q * q - q - 2 * ab),
                    (0, q - 2 + ab),
                ],
            ),
        ),
        Family::TwoLinesTwoPoints => {
            let c = spec.c;
            (
                Kind::Poly,
                accumulate(
                    q as usize + 1,
                    &[
                        (a, 1),
                        (b, 1),
                        (3, c),
                        (2, ab + q - 1 - 3 * c),
                        (1, 1 + 3 * c + (q - 2) * (q - 1) - 2 * ab),
                        (0, 2 * q - 4 - c + ab),
                    ],
                ),
            )
        }
    };
    IntersectionDistribution::new(kind, q, counts)
}

#[derive(Clone, Debug)]
pub struct Built {
    pub set: PointSet,
    pub poly: Option<Poly>,
}

fn pt(field: &Field, c: [Elem; 3]) -> Triple {
    Triple::new(field, c).expect("nonzero triple")
}

/// Builds the set over the default field of order q; free choices come from the seed.
pub fn build(spec: &ConstructionSpec) -> Result<Built> {
    spec.validate()?;
    let field = field_of_order(spec.q)?;
    build_in(&field, spec)
}

/// As [`build`], over a given field.
pub fn build_in(field: &Arc<Field>, spec: &ConstructionSpec) -> Result<Built> {
    spec.validate()?;
    if field.q() as u64 != spec.q {
        return Err(Error::ParameterOutOfRange(format!(
            "field has {} elements, spec says {}",
            field.q(),
            spec.q
        )));
    }
    let mut rng = spec.rng();
    let (a, b) = sizes(spec.family, spec.q, spec.t);
    let (a, b) = (a as usize, b as usize);
    let (zero, one) = (Elem::ZERO, Elem::ONE);
    let nonzero: Vec<Elem> = field.elements().filter(|x| !x.is_zero()).collect();
    let from_values = |vals: Vec<Elem>| {
        let f = Poly::from_values(field, &vals);
        Built {
            set: graph_set(&f),
            poly: Some(f),
        }
    };

    Ok(match spec.family {
        Family::TwoLinesExcl | Family::TwoLinesIncl => {
            // ℓ: y = 0 and m: x = 0, meeting at (0:0:1).
            let mut on_l: Vec<Triple> = std::iter::once(pt(field, [one, zero, zero]))
                .chain(nonzero.iter().map(|&x| pt(field, [x, zero, one])))
                .collect();
            let mut on_m: Vec<Triple> = std::iter::once(pt(field, [zero, one, zero]))
                .chain(nonzero.iter().map(|&y| pt(field, [zero, y, one])))
                .collect();
            on_l.shuffle(&mut rng);
            on_m.shuffle(&mut rng);
            let mut pts: Vec<Triple> = on_l[..a].iter().chain(&on_m[..b]).copied().collect();
            if spec.family == Family::TwoLinesIncl {
                pts.push(pt(field, [zero, zero, one]));
            }
            Built {
                set: PointSet::new(field, pts)?,
                poly: None,
            }
        }
        Family::TwoLinesNucleus => {
            let lambda = if field.p() == 2 { zero } else { field.neg(one) };
            let mut xs = nonzero.clone();
            xs.shuffle(&mut rng);
            let mut vals = vec![zero; field.order()];
            for (i, &x) in xs.iter().enumerate() {
                vals[x.index()] = if i < a { x } else { field.mul(lambda, x) };
            }
            from_values(vals)
        }
        Family::TwoLinesParallelNucleus => {
            let mut xs: Vec<Elem> = field.elements().collect();
            xs.shuffle(&mut rng);
            let mut t: Vec<Elem> = xs[..b].to_vec();
            t.sort();
            let f = indicator_polynomial(field, &t);
            Built {
                set: graph_set(&f),
                poly: Some(f),
            }
        }
        Family::TwoLinesTwoPoints => {
            let qplus = half_system(field, spec.seed, &mut rng);
            let mut theta = qplus;
            theta.shuffle(&mut rng);
            let c = spec.c as usize;
            let g2 = (a - c) / 2;
            let m1 = field.neg(one);
            let mut vals = vec![zero; field.order()];
            for (i, &th) in theta.iter().enumerate() {
                let (up, down) = if i < c {
                    (one, m1)
                } else if i < c + g2 {
                    (one, one)
                } else {
                    (m1, m1)
                };
                vals[th.index()] = up;
                vals[field.neg(th).index()] = down;
            }
            from_values(vals)
        }
    })
}

/// One element from each pair `{x, -x}`: the squares when q ≡ 3 (mod 4), otherwise
/// `α^k` for `k < (q-1)/2`; with a nonzero seed each pair's sign is drawn at random.
pub fn half_system(field: &Field, seed: u64, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let n = field.q() as i64 - 1;
    let mut base: Vec<Elem> = if field.q() % 4 == 3 {
        (0..n / 2).map(|k| field.alpha_pow(2 * k)).collect()
    } else {
        (0..n / 2).map(|k| field.alpha_pow(k)).collect()
    };
    if seed != 0 {
        use rand::Rng;
        for x in base.iter_mut() {
            if rng.gen::<bool>() {
                *x = field.neg(*x);
            }
        }
    }
    base
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfExponent {
    /// `x^{(q+1)/2}`
    PlusOne,
    /// `x^{(q-1)/2}`
    MinusOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialStructure {
    pub exponent: u64,
    /// The two lines carrying the graph, and the graph points on each.
    pub lines: Vec<(String, u64)>,
    pub v3: u64,
    pub expected_v3: Option<u64>,
    /// Line counts and v3 agree with the stated structure.
    pub consistent: bool,
    /// The distribution equals the t = 0 member of the matching family.
    pub matches_family: bool,
}

/// Checks the two-line picture of `x^{(q±1)/2}` by counting incidences.
pub fn monomial_structure(field: &Arc<Field>, which: HalfExponent) -> Result<MonomialStructure> {
    let q = field.q() as u64;
    if q.is_multiple_of(2) {
        return Err(Error::EvenField);
    }
    let m1 = field.neg(Elem::ONE);
    let f_of = |e: u64| Poly::monomial(field, Elem::ONE, e as usize);
    let on = |f: &Poly, a: Elem, b: Elem| {
        field
            .elements()
            .filter(|&x| f.eval(x) == field.add(field.mul(a, x), b))
            .count() as u64
    };
    let half = (q - 1) / 2;
    let (exponent, lines, spec) = match which {
        HalfExponent::PlusOne => {
            let f = f_of(q.div_ceil(2));
            let l = vec![
                ("y=x".to_string(), on(&f, Elem::ONE, Elem::ZERO)),
                ("y=-x".to_string(), on(&f, m1, Elem::ZERO)),
            ];
            let spec = (q >= 5).then_some(ConstructionSpec {
                family: Family::TwoLinesNucleus,
                q,
                t: 0,
                c: 0,
                seed: 0,
            });
            (q.div_ceil(2), l, spec)
        }
        HalfExponent::MinusOne => {
            let f = f_of(half);
            let l = vec![
                ("y=1".to_string(), on(&f, Elem::ZERO, Elem::ONE)),
                ("y=-1".to_string(), on(&f, Elem::ZERO, m1)),
            ];
            let c = if q % 4 == 3 { half } else { 0 };
            let spec = (q >= 5).then_some(ConstructionSpec {
                family: Family::TwoLinesTwoPoints,
                q,
                t: 0,
                c,
                seed: 0,
            });
            (half, l, spec)
        }
    };
    let f = f_of(exponent);
    let dist = poly_distribution(&f);
    let v3 = dist.get(3);
    let expected_v3 = match which {
        HalfExponent::PlusOne => None,
        HalfExponent::MinusOne if q % 4 == 1 => Some(0),
        HalfExponent::MinusOne => Some(half + if q == 7 { 2 } else { 0 }),
    };
    let want = match which {
        HalfExponent::PlusOne => half + 1,
        HalfExponent::MinusOne => half,
    };
    let consistent = lines.iter().all(|&(_, n)| n == want) && expected_v3.is_none_or(|e| e == v3);
    let matches_family = match spec {
        Some(s) => predicted_distribution(&s)? == dist,
        None => false,
    };
    Ok(MonomialStructure {
        exponent,
        lines,
        v3,
        expected_v3,
        consistent,
        matches_family,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degenerate {
    /// All points of one line.
    Line,
    /// q points of a line and one point off it.
    LinePlusPoint,
    /// q-1 points of ℓ including ℓ∩m, two more on m.
    TwoLinesMeetInSet,
    /// q-1 points of ℓ avoiding ℓ∩m, two more on m.
    TwoLinesMeetOffSet,
    /// q-2 points of ℓ and a triangle, k of whose sides meet ℓ inside the set.
    LinePlusTriangle { k: u64 },
}

#[derive(Clone, Debug)]
pub struct DegenerateReport {
    pub predicted: IntersectionDistribution,
    pub predicted_poly: Option<IntersectionDistribution>,
    pub witness: PointSet,
    pub computed: IntersectionDistribution,
    pub poly: Option<Poly>,
    pub computed_poly: Option<IntersectionDistribution>,
}

/// Closed-form distribution of a degenerate family, next to a built witness.
pub fn degenerate_families(field: &Arc<Field>, which: Degenerate) -> Result<DegenerateReport> {
    let q = field.q() as u64;
    let qs = q as usize;
    let (zero, one) = (Elem::ZERO, Elem::ONE);
    let nonzero: Vec<Elem> = field.elements().filter(|x| !x.is_zero()).collect();
    let set_dist =
        |e: &[(u64, u64)]| IntersectionDistribution::new(Kind::Set, q, accumulate(qs + 2, e));
    let poly_dist =
        |e: &[(u64, u64)]| IntersectionDistribution::new(Kind::Poly, q, accumulate(qs + 1, e));

    let (predicted, predicted_poly, witness, poly) = match which {
        Degenerate::Line => {
            let pts = std::iter::once(pt(field, [one, zero, zero]))
                .chain(field.elements().map(|x| pt(field, [x, zero, one])))
                .collect();
            (
                set_dist(&[(q + 1, 1), (1, q * q + q)])?,
                None,
                PointSet::new(field, pts)?,
                None,
            )
        }
        Degenerate::LinePlusPoint => {
            let f = Poly::zero(field);
            (
                set_dist(&[(q, 1), (2, q), (1, q * q - q + 1), (0, q - 1)])?,
                Some(poly_dist(&[(q, 1), (1, q * q - q), (0, q - 1)])?),
                graph_set(&f),
                Some(f),
            )
        }
        Degenerate::TwoLinesMeetInSet => {
            // ℓ: y = 0 without (1:0:0) and (1:0:1); m: x = 0 with (0:1:1), (0:1:0).
            let pts = std::iter::once(pt(field, [zero, zero, one]))
                .chain(
                    nonzero
                        .iter()
                        .filter(|&&x| x != one)
                        .map(|&x| pt(field, [x, zero, one])),
                )
                .chain([pt(field, [zero, one, one]), pt(field, [zero, one, zero])])
                .collect();
            (
                set_dist(&[
                    (q - 1, 1),
                    (3, 1),
                    (2, 2 * q - 4),
                    (1, q * q + 7 - 3 * q),
                    (0, 2 * q - 4),
                ])?,
                None,
                PointSet::new(field, pts)?,
                None,
            )
        }
        Degenerate::TwoLinesMeetOffSet => {
            if q < 3 {
                return Err(Error::ParameterOutOfRange("needs q >= 3".into()));
            }
            let f = Poly::monomial(field, one, qs - 1);
            (
                set_dist(&[
                    (q - 1, 1),
                    (2, 2 * q - 1),
                    (1, q * q + 4 - 3 * q),
                    (0, 2 * q - 3),
                ])?,
                Some(poly_dist(&[
                    (q - 1, 1),
                    (2, q - 1),
                    (1, q * q + 3 - 3 * q),
                    (0, 2 * q - 3),
                ])?),
                graph_set(&f),
                Some(f),
            )
        }
        Degenerate::LinePlusTriangle { k } => {
            if k > 3 || k + 2 > q {
                return Err(Error::ParameterOutOfRange(format!(
                    "k={k} needs k <= min(3, q-2)"
                )));
            }
            // ℓ: z = 0; triangle (0:0:1), (1:0:1), (0:1:1) with sides meeting ℓ at
            // (1:0:0), (0:1:0), (1:-1:0).
            let m1 = field.neg(one);
            let meets = [
                pt(field, [one, zero, zero]),
                pt(field, [zero, one, zero]),
                pt(field, [one, m1, zero]),
            ];
            let others: Vec<Triple> = field
                .elements()
                .map(|y| pt(field, [one, y, zero]))
                .filter(|p| !meets.contains(p))
                .collect();
            let keep = (q - 2 - k) as usize;
            let pts = meets[..k as usize]
                .iter()
                .chain(&others[..keep])
                .copied()
                .chain([
                    pt(field, [zero, zero, one]),
                    pt(field, [one, zero, one]),
                    pt(field, [zero, one, one]),
                ])
                .collect();
            (
                set_dist(&[
                    (q - 2, 1),
                    (3, k),
                    (2, 3 * q - 3 - 3 * k),
                    (1, q * q + 9 + 3 * k - 5 * q),
                    (0, 3 * q - 6 - k),
                ])?,
                None,
                PointSet::new(field, pts)?,
                None,
            )
        }
    };
    let computed = set_distribution(&witness)?;
    let computed_poly = poly.as_ref().map(poly_distribution);
    Ok(DegenerateReport {
        predicted,
        predicted_poly,
        witness,
        computed,
        poly,
        computed_poly,
    })
}
