//! Intersection distributions `v` (polynomials) and `u` ((q+1)-sets).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::ff::{build_field, Elem};
use crate::geometry::PointSet;
use crate::poly::{irreducible_count_fixed_trace, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// Affine non-vertical lines against a graph, indices `0..=q`.
    #[serde(rename = "v")]
    Poly,
    /// All lines of the plane against a (q+1)-set, indices `0..=q+1`.
    #[serde(rename = "u")]
    Set,
}

impl Kind {
    fn len(self, q: u64) -> usize {
        match self {
            Kind::Poly => q as usize + 1,
            Kind::Set => q as usize + 2,
        }
    }

    /// Required values of `Σ c_i`, `Σ i c_i`, `Σ i(i-1) c_i`.
    pub fn targets(self, q: u64) -> [u64; 3] {
        match self {
            Kind::Poly => [q * q, q * q, q * (q - 1)],
            Kind::Set => [q * q + q + 1, (q + 1) * (q + 1), q * (q + 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DistributionDoc", try_from = "DistributionDoc")]
pub struct IntersectionDistribution {
    kind: Kind,
    q: u64,
    counts: Vec<u64>,
}

/// Serialized form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistributionDoc {
    pub kind: Kind,
    pub q: u64,
    pub counts: Vec<u64>,
    pub nonzero: BTreeMap<String, u64>,
    pub degree: usize,
    pub non_hitting_index: u64,
}

impl From<IntersectionDistribution> for DistributionDoc {
    fn from(d: IntersectionDistribution) -> Self {
        DistributionDoc {
            kind: d.kind,
            q: d.q,
            nonzero: d
                .nonzero()
                .into_iter()
                .map(|(i, c)| (i.to_string(), c))
                .collect(),
            degree: d.degree().unwrap_or(0),
            non_hitting_index: d.non_hitting_index(),
            counts: d.counts,
        }
    }
}

impl TryFrom<DistributionDoc> for IntersectionDistribution {
    type Error = Error;
    fn try_from(doc: DistributionDoc) -> Result<Self> {
        let d = IntersectionDistribution::new(doc.kind, doc.q, doc.counts)?;
        if d.degree()? != doc.degree || d.non_hitting_index() != doc.non_hitting_index {
            return Err(Error::InconsistentDistribution(
                "summary fields disagree with counts".into(),
            ));
        }
        Ok(d)
    }
}

/// `Σ c_i`, `Σ i c_i`, `Σ i(i-1) c_i`.
pub fn moment_sums(counts: &[u64]) -> [u64; 3] {
    counts
        .iter()
        .enumerate()
        .fold([0; 3], |[a, b, c], (i, &n)| {
            let i = i as u64;
            [a + n, b + i * n, c + i * i.saturating_sub(1) * n]
        })
}

impl IntersectionDistribution {
    /// Validates length and the three sum identities.
    pub fn new(kind: Kind, q: u64, counts: Vec<u64>) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::InconsistentDistribution(format!(
                "q = {q} is not a prime power"
            )));
        }
        if counts.len() != kind.len(q) {
            return Err(Error::InconsistentDistribution(format!(
                "expected {} counts, got {}",
                kind.len(q),
                counts.len()
            )));
        }
        let got = moment_sums(&counts);
        let want = kind.targets(q);
        if got != want {
            return Err(Error::InconsistentDistribution(format!(
                "sums {got:?} differ from {want:?}"
            )));
        }
        Ok(IntersectionDistribution { kind, q, counts })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, i: usize) -> u64 {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn non_hitting_index(&self) -> u64 {
        self.counts[0]
    }

    pub fn nonzero(&self) -> BTreeMap<usize, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i, c))
            .collect()
    }

    /// Largest index with a positive count.
    pub fn degree(&self) -> Result<usize> {
        self.counts
            .iter()
            .rposition(|&c| c > 0)
            .ok_or(Error::EmptyDistribution)
    }

    /// `v ↔ u`: `v_1 = u_1 - 1`, `v_2 = u_2 - q`, other indices equal, `u_{q+1} = 0`.
    pub fn convert(&self) -> Result<Self> {
        let q = self.q;
        let c = &self.counts;
        match self.kind {
            Kind::Poly => {
                let mut u = c.clone();
                u[1] += 1;
                u[2] += q;
                u.push(0);
                Self::new(Kind::Set, q, u)
            }
            Kind::Set => {
                if c[q as usize + 1] != 0 {
                    return Err(Error::InconsistentDistribution(
                        "a set containing a full line has no polynomial form".into(),
                    ));
                }
                let (u1, u2) = (c[1], c[2]);
                if u1 < 1 || u2 < q {
                    return Err(Error::InconsistentDistribution(
                        "negative entry after conversion".into(),
                    ));
                }
                let mut v = c[..=q as usize].to_vec();
                v[1] = u1 - 1;
                v[2] = u2 - q;
                Self::new(Kind::Poly, q, v)
            }
        }
    }
}

/// Fills indices 0, 1, 2 from counts at indices ≥ 3 (`tail[0]` is index 3).
pub fn complete_from_tail(kind: Kind, q: u64, tail: &[u64]) -> Result<IntersectionDistribution> {
    let len = kind.len(q);
    if tail.len() + 3 > len {
        return Err(Error::InfeasibleTail(format!(
            "tail longer than indices 3..{}",
            len - 1
        )));
    }
    let [t0, t1, t2] = kind.targets(q).map(|x| x as i128);
    let (mut a, mut b, mut c) = (t0, t1, t2);
    for (k, &n) in tail.iter().enumerate() {
        let (i, n) = (k as i128 + 3, n as i128);
        a -= n;
        b -= i * n;
        c -= i * (i - 1) * n;
    }
    if c < 0 || c % 2 != 0 {
        return Err(Error::InfeasibleTail(format!("C = {c} is negative or odd")));
    }
    let n2 = c / 2;
    let n1 = b - c;
    let n0 = a - b + c / 2;
    if n1 < 0 || n0 < 0 {
        return Err(Error::InfeasibleTail(format!(
            "fill ({n0}, {n1}, {n2}) has a negative entry"
        )));
    }
    let mut counts = vec![n0 as u64, n1 as u64, n2 as u64];
    counts.extend_from_slice(tail);
    counts.resize(len, 0);
    IntersectionDistribution::new(kind, q, counts)
}

/// Tally of `#{x : f(x) = ax + b}` over all `(a, b)`.
pub fn poly_distribution(f: &Poly) -> IntersectionDistribution {
    poly_distribution_with(f, 1)
}

/// As [`poly_distribution`], splitting the slopes over `workers` threads.
pub fn poly_distribution_with(f: &Poly, workers: usize) -> IntersectionDistribution {
    let field = f.field();
    let q = field.order();
    let values = f.values();
    let tally_slopes = |slopes: &[Elem]| {
        let mut v = vec![0u64; q + 1];
        let mut hist = vec![0u32; q];
        for &a in slopes {
            hist.iter_mut().for_each(|h| *h = 0);
            for x in field.elements() {
                let b = field.sub(values[x.index()], field.mul(a, x));
                hist[b.index()] += 1;
            }
            for &h in &hist {
                v[h as usize] += 1;
            }
        }
        v
    };
    let slopes: Vec<Elem> = field.elements().collect();
    let workers = workers.clamp(1, q);
    let counts = if workers == 1 {
        tally_slopes(&slopes)
    } else {
        let chunk = q.div_ceil(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = slopes
                .chunks(chunk)
                .map(|part| s.spawn(move || tally_slopes(part)))
                .collect();
            handles.into_iter().fold(vec![0u64; q + 1], |mut acc, h| {
                let part = h.join().expect("worker panicked");
                acc.iter_mut().zip(part).for_each(|(a, b)| *a += b);
                acc
            })
        })
    };
    IntersectionDistribution::new(Kind::Poly, q as u64, counts)
        .expect("tally satisfies the identities")
}

/// Tally of `|D ∩ ℓ|` over all lines.
pub fn set_distribution(set: &PointSet) -> Result<IntersectionDistribution> {
    let q = set.field().order();
    if set.len() != q + 1 {
        return Err(Error::WrongCardinality {
            expected: q + 1,
            got: set.len(),
        });
    }
    let mut counts = vec![0u64; q + 2];
    for n in set.line_counts() {
        counts[n] += 1;
    }
    IntersectionDistribution::new(Kind::Set, q as u64, counts)
}

/// Closed-form distribution of `x^3` (or `x^3 + x^2`): `v_0` is the number of
/// irreducible monic cubics with the matching `x^2` coefficient.
pub fn cubic_distribution(q: u64, has_x2_term: bool) -> Result<IntersectionDistribution> {
    let (p, s) = prime_power(q).ok_or(Error::NonPrime(q))?;
    let field = build_field(p, s, None)?;
    let gamma = if has_x2_term { Elem::ONE } else { Elem::ZERO };
    let v0 = irreducible_count_fixed_trace(&field, 3, gamma);
    let half = q * (q - 1) / 2;
    let v3 = half - v0;
    let v2 = half - 3 * v3;
    let v1 = q * q - 2 * v2 - 3 * v3;
    let mut counts = vec![v0, v1, v2];
    if q >= 3 {
        counts.push(v3);
    } else if v3 != 0 {
        return Err(Error::InconsistentDistribution(
            "cubic over GF(2) with a 3-secant".into(),
        ));
    }
    counts.resize(q as usize + 1, 0);
    IntersectionDistribution::new(Kind::Poly, q, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    #[test]
    fn linear_polynomial() {
        for (p, s) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let f = build_field(p, s, None).unwrap();
            let q = f.order() as u64;
            let d = poly_distribution(&Poly::from_ints(&f, &[1, 1]));
            assert_eq!(d.get(q as usize), 1);
            assert_eq!(d.get(1), q * (q - 1));
            assert_eq!(d.get(0), q - 1);
        }
    }

    #[test]
    fn x_to_q_minus_one() {
        let f = build_field(7, 1, None).unwrap();
        let d = poly_distribution(&Poly::monomial(&f, Elem::ONE, 6));
        let want: BTreeMap<usize, u64> = [(6, 1), (2, 6), (1, 49 - 21 + 3), (0, 11)].into();
        assert_eq!(d.nonzero(), want);
    }

    #[test]
    fn tail_examples() {
        let q = 7u64;
        let mut tail = vec![0; 6];
        tail[5] = 1;
        let line = complete_from_tail(Kind::Set, q, &tail).unwrap();
        assert_eq!((line.get(1), line.get(0)), (q * q + q, 0));
        let mut tail = vec![0; 5];
        tail[4] = 1;
        let lin = complete_from_tail(Kind::Poly, q, &tail).unwrap();
        assert_eq!((lin.get(1), lin.get(0)), (q * (q - 1), q - 1));
        assert!(matches!(
            complete_from_tail(Kind::Poly, q, &[100]),
            Err(Error::InfeasibleTail(_))
        ));
    }

    #[test]
    fn conversion_rejects_full_line() {
        let mut tail = vec![0; 6];
        tail[5] = 1;
        let line = complete_from_tail(Kind::Set, 7, &tail).unwrap();
        assert!(line.convert().is_err());
    }

    #[test]
    fn constructor_checks_identities() {
        assert!(IntersectionDistribution::new(Kind::Poly, 3, vec![2, 6, 0, 1]).is_ok());
        assert!(IntersectionDistribution::new(Kind::Poly, 3, vec![3, 5, 0, 1]).is_err());
        assert!(IntersectionDistribution::new(Kind::Poly, 3, vec![2, 6, 0]).is_err());
    }

    #[test]
    fn degree_of_distribution() {
        let f = build_field(5, 2, Some(&[2, 4, 1])).unwrap();
        assert_eq!(
            poly_distribution(&Poly::monomial(&f, Elem::ONE, 11))
                .degree()
                .unwrap(),
            4
        );
        assert_eq!(
            poly_distribution(&Poly::monomial(&f, Elem::ONE, 24))
                .degree()
                .unwrap(),
            24
        );
    }
}
