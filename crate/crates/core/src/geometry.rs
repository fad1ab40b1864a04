//! PG(2,q): points and lines as normalized triples, collineations, nuclei.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::poly::{interpolate, Poly};
use crate::text::fmt_triple;

/// A homogeneous triple whose first nonzero coordinate is 1.
///
/// Points and lines share this type; the line `(a:b:c)` is `ax + by + cz = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple([Elem; 3]);

pub type ProjPoint = Triple;
pub type ProjLine = Triple;

impl Triple {
    pub fn new(field: &Field, c: [Elem; 3]) -> Result<Self> {
        let lead = c
            .iter()
            .copied()
            .find(|x| !x.is_zero())
            .ok_or_else(|| Error::Degenerate("all coordinates zero".into()))?;
        let inv = field.inv(lead)?;
        Ok(Triple(c.map(|x| field.mul(x, inv))))
    }

    pub fn from_ints(field: &Field, c: [i64; 3]) -> Result<Self> {
        Self::new(field, c.map(|x| field.from_int(x)))
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }

    /// Position in the canonical order `(0:0:1), (0:1:z)…, (1:y:z)…`.
    pub fn index(&self, q: usize) -> usize {
        let [x, y, z] = self.0;
        if !x.is_zero() {
            1 + q + y.index() * q + z.index()
        } else if !y.is_zero() {
            1 + z.index()
        } else {
            0
        }
    }

    pub fn from_index(i: usize, q: usize) -> Self {
        if i == 0 {
            Triple([Elem::ZERO, Elem::ZERO, Elem::ONE])
        } else if i <= q {
            Triple([Elem::ZERO, Elem::ONE, Elem((i - 1) as u32)])
        } else {
            let r = i - 1 - q;
            Triple([Elem::ONE, Elem((r / q) as u32), Elem((r % q) as u32)])
        }
    }

    /// Affine coordinates when z ≠ 0.
    pub fn affine(&self, field: &Field) -> Option<(Elem, Elem)> {
        let [x, y, z] = self.0;
        let zi = field.inv(z).ok()?;
        Some((field.mul(x, zi), field.mul(y, zi)))
    }
}

pub fn plane_size(q: usize) -> usize {
    q * q + q + 1
}

pub fn dot(field: &Field, p: &Triple, l: &Triple) -> Elem {
    let (a, b) = (p.0, l.0);
    field.add(
        field.add(field.mul(a[0], b[0]), field.mul(a[1], b[1])),
        field.mul(a[2], b[2]),
    )
}

pub fn incident(field: &Field, p: &ProjPoint, l: &ProjLine) -> bool {
    dot(field, p, l).is_zero()
}

fn cross(field: &Field, u: &Triple, v: &Triple) -> [Elem; 3] {
    let (a, b) = (u.0, v.0);
    let m = |i: usize, j: usize| field.sub(field.mul(a[i], b[j]), field.mul(a[j], b[i]));
    [m(1, 2), m(2, 0), m(0, 1)]
}

pub fn line_through(field: &Field, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::Degenerate("line through a point and itself".into()));
    }
    Triple::new(field, cross(field, p, q))
}

pub fn meet(field: &Field, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    if l == m {
        return Err(Error::Degenerate("meet of a line with itself".into()));
    }
    Triple::new(field, cross(field, l, m))
}

pub fn collinear(field: &Field, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    dot(field, c, &Triple(cross(field, a, b))).is_zero()
}

/// The q+1 points of a line (equivalently, by duality, the lines through a point),
/// in canonical order.
pub fn points_on(field: &Field, l: &Triple) -> Vec<Triple> {
    let [a, b, c] = l.0;
    let neg = |x| field.neg(x);
    let (p1, p2) = if !a.is_zero() {
        (
            [neg(b), Elem::ONE, Elem::ZERO],
            [neg(c), Elem::ZERO, Elem::ONE],
        )
    } else if !b.is_zero() {
        (
            [Elem::ONE, Elem::ZERO, Elem::ZERO],
            [Elem::ZERO, neg(c), Elem::ONE],
        )
    } else {
        (
            [Elem::ONE, Elem::ZERO, Elem::ZERO],
            [Elem::ZERO, Elem::ONE, Elem::ZERO],
        )
    };
    let mut out: Vec<Triple> = field
        .elements()
        .map(|t| {
            let c = [0, 1, 2].map(|i| field.add(p2[i], field.mul(t, p1[i])));
            Triple::new(field, c).expect("p1, p2 independent")
        })
        .collect();
    out.push(Triple::new(field, p1).expect("nonzero"));
    out.sort();
    out
}

pub fn lines_through(field: &Field, p: &ProjPoint) -> Vec<ProjLine> {
    points_on(field, p)
}

/// All points (or lines) in canonical order.
pub fn enumerate_plane(field: &Field) -> Vec<Triple> {
    let q = field.order();
    (0..plane_size(q))
        .map(|i| Triple::from_index(i, q))
        .collect()
}

/// Flat incidence table: entry `i` lists the indices on line `i`, which by
/// self-duality is also the list of lines through point `i`.
pub struct Plane {
    field: Arc<Field>,
    q: usize,
    table: Vec<u32>,
}

impl Plane {
    pub const MAX_Q: usize = 128;

    pub fn new(field: &Arc<Field>) -> Result<Self> {
        let q = field.order();
        if q > Self::MAX_Q {
            return Err(Error::TooLarge {
                q: q as u64,
                limit: Self::MAX_Q as u64,
            });
        }
        let n = plane_size(q);
        let mut table = Vec::with_capacity(n * (q + 1));
        for i in 0..n {
            let l = Triple::from_index(i, q);
            table.extend(points_on(field, &l).iter().map(|p| p.index(q) as u32));
        }
        Ok(Plane {
            field: field.clone(),
            q,
            table,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn size(&self) -> usize {
        plane_size(self.q)
    }

    pub fn on(&self, i: usize) -> &[u32] {
        &self.table[i * (self.q + 1)..(i + 1) * (self.q + 1)]
    }

    /// Per-line intersection sizes for a set of point indices.
    pub fn line_counts(&self, points: &[u32], counts: &mut Vec<u16>) {
        counts.clear();
        counts.resize(self.size(), 0);
        for &p in points {
            for &l in self.on(p as usize) {
                counts[l as usize] += 1;
            }
        }
    }

    /// Number of lines missing the set.
    pub fn non_hitting(&self, points: &[u32], scratch: &mut Vec<u16>) -> u64 {
        self.line_counts(points, scratch);
        scratch.iter().filter(|&&c| c == 0).count() as u64
    }
}

/// A set of distinct points over one field, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: Arc<Field>,
    points: Vec<Triple>,
}

impl PointSet {
    pub fn new(field: &Arc<Field>, mut points: Vec<Triple>) -> Result<Self> {
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(fmt_triple(field, &w[0])));
        }
        Ok(PointSet {
            field: field.clone(),
            points,
        })
    }

    pub fn from_indices(field: &Arc<Field>, idx: &[u32]) -> Result<Self> {
        let q = field.order();
        Self::new(
            field,
            idx.iter()
                .map(|&i| Triple::from_index(i as usize, q))
                .collect(),
        )
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn points(&self) -> &[Triple] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Triple) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn indices(&self) -> Vec<u32> {
        let q = self.field.order();
        self.points.iter().map(|p| p.index(q) as u32).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.points
            .iter()
            .map(|p| fmt_triple(&self.field, p))
            .collect()
    }

    fn require_full(&self) -> Result<()> {
        let want = self.field.order() + 1;
        if self.points.len() != want {
            return Err(Error::WrongCardinality {
                expected: want,
                got: self.points.len(),
            });
        }
        Ok(())
    }

    /// `|D ∩ ℓ|` for every line, indexed canonically.
    pub fn line_counts(&self) -> Vec<usize> {
        let f = &self.field;
        let q = f.order();
        let mut counts = vec![0usize; plane_size(q)];
        for p in &self.points {
            for l in lines_through(f, p) {
                counts[l.index(q)] += 1;
            }
        }
        counts
    }
}

/// `S_f = {(x, f(x), 1)} ∪ {(0,1,0)}`.
pub fn graph_set(f: &Poly) -> PointSet {
    let field = f.field();
    let mut pts: Vec<Triple> = field
        .elements()
        .map(|x| Triple::new(field, [x, f.eval(x), Elem::ONE]).expect("z = 1"))
        .collect();
    pts.push(Triple([Elem::ZERO, Elem::ONE, Elem::ZERO]));
    PointSet::new(field, pts).expect("graph points are distinct")
}

/// An invertible 3×3 matrix up to scalars, scaled so its first nonzero entry is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Homography {
    m: [[Elem; 3]; 3],
}

impl Homography {
    pub fn new(field: &Field, m: [[Elem; 3]; 3]) -> Result<Self> {
        if det(field, &m).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let lead = m
            .iter()
            .flatten()
            .copied()
            .find(|x| !x.is_zero())
            .expect("nonsingular");
        let inv = field.inv(lead)?;
        Ok(Homography {
            m: m.map(|row| row.map(|x| field.mul(x, inv))),
        })
    }

    pub fn from_ints(field: &Field, m: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(field, m.map(|row| row.map(|x| field.from_int(x))))
    }

    pub fn identity() -> Self {
        let (o, z) = (Elem::ONE, Elem::ZERO);
        Homography {
            m: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    /// `(x:y:z) ↦ (x:z:y)`.
    pub fn swap_yz() -> Self {
        let (o, z) = (Elem::ONE, Elem::ZERO);
        Homography {
            m: [[o, z, z], [z, z, o], [z, o, z]],
        }
    }

    /// The map sending the standard frame e1, e2, e3 to the given columns.
    pub fn from_columns(field: &Field, cols: [Triple; 3]) -> Result<Self> {
        let m = [0, 1, 2].map(|r| [0, 1, 2].map(|c| cols[c].0[r]));
        Self::new(field, m)
    }

    pub fn matrix(&self) -> [[Elem; 3]; 3] {
        self.m
    }

    pub fn apply(&self, field: &Field, p: &ProjPoint) -> ProjPoint {
        let c = self.m.map(|row| {
            (0..3).fold(Elem::ZERO, |acc, j| {
                field.add(acc, field.mul(row[j], p.0[j]))
            })
        });
        Triple::new(field, c).expect("nonsingular map")
    }

    pub fn inverse(&self, field: &Field) -> Self {
        let m = &self.m;
        let cof = |r: usize, c: usize| {
            let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
            let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
            field.sub(
                field.mul(m[r1][c1], m[r2][c2]),
                field.mul(m[r1][c2], m[r2][c1]),
            )
        };
        // Adjugate: transpose of the cofactor matrix; the scalar 1/det is irrelevant.
        let adj = [0, 1, 2].map(|i| [0, 1, 2].map(|j| cof(j, i)));
        Homography::new(field, adj).expect("adjugate of a nonsingular matrix")
    }

    /// `self ∘ other`.
    pub fn compose(&self, field: &Field, other: &Homography) -> Self {
        let m = [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| {
                (0..3).fold(Elem::ZERO, |acc, k| {
                    field.add(acc, field.mul(self.m[i][k], other.m[k][j]))
                })
            })
        });
        Homography::new(field, m).expect("product of nonsingular maps")
    }
}

fn det(field: &Field, m: &[[Elem; 3]; 3]) -> Elem {
    let f = field;
    let term = |a: usize, b: usize, c: usize| f.mul(m[0][a], f.mul(m[1][b], m[2][c]));
    let pos = f.add(f.add(term(0, 1, 2), term(1, 2, 0)), term(2, 0, 1));
    let neg = f.add(f.add(term(2, 1, 0), term(0, 2, 1)), term(1, 0, 2));
    f.sub(pos, neg)
}

/// Image of S under the homography h followed by the automorphism `x ↦ x^{p^σ}`.
pub fn apply_collineation(set: &PointSet, h: &Homography, sigma: u32) -> Result<PointSet> {
    let f = set.field();
    if sigma >= f.s() {
        return Err(Error::ParameterOutOfRange(format!(
            "sigma {sigma} >= s = {}",
            f.s()
        )));
    }
    let image = set
        .points()
        .iter()
        .map(|p| {
            let t = h.apply(f, p);
            Triple(t.0.map(|x| f.frobenius(x, sigma)))
        })
        .collect();
    PointSet::new(f, image)
}

/// Lines through P with their intersection sizes, ordered by line.
pub fn secant_profile(set: &PointSet, p: &ProjPoint) -> Vec<(ProjLine, usize)> {
    let f = set.field();
    lines_through(f, p)
        .into_iter()
        .map(|l| {
            let n = set.points().iter().filter(|x| incident(f, x, &l)).count();
            (l, n)
        })
        .collect()
}

/// Set points on exactly one unisecant and q bisecants.
pub fn internal_nuclei(set: &PointSet) -> Result<Vec<ProjPoint>> {
    set.require_full()?;
    let f = set.field();
    let q = f.order();
    let counts = set.line_counts();
    Ok(set
        .points()
        .iter()
        .copied()
        .filter(|p| {
            let mut ones = 0;
            lines_through(f, p)
                .iter()
                .all(|l| match counts[l.index(q)] {
                    1 => {
                        ones += 1;
                        true
                    }
                    2 => true,
                    _ => false,
                })
                && ones == 1
        })
        .collect())
}

/// Points off the set all of whose lines are unisecants.
pub fn external_nuclei(set: &PointSet) -> Result<Vec<ProjPoint>> {
    set.require_full()?;
    let f = set.field();
    let q = f.order();
    let counts = set.line_counts();
    Ok(enumerate_plane(f)
        .into_iter()
        .filter(|p| !set.contains(p))
        .filter(|p| lines_through(f, p).iter().all(|l| counts[l.index(q)] == 1))
        .collect())
}

/// The unique unisecant through an internal nucleus.
pub fn unisecant_at(set: &PointSet, nucleus: &ProjPoint) -> Result<ProjLine> {
    if !internal_nuclei(set)?.contains(nucleus) {
        return Err(Error::NotAnInternalNucleus);
    }
    secant_profile(set, nucleus)
        .into_iter()
        .find(|&(_, n)| n == 1)
        .map(|(l, _)| l)
        .ok_or(Error::NotAnInternalNucleus)
}

/// A homography θ and f with `θ(D) = S_f`: θ sends the nucleus to (0:1:0)
/// and its unisecant to z = 0.
pub fn set_to_polynomial(set: &PointSet, nucleus: &ProjPoint) -> Result<(Homography, Poly)> {
    let f = set.field();
    let u = unisecant_at(set, nucleus)?;
    let on_u = points_on(f, &u);
    let other = *on_u
        .iter()
        .find(|p| *p != nucleus)
        .expect("a line has q+1 >= 3 points");
    let off = enumerate_plane(f)
        .into_iter()
        .find(|p| !incident(f, p, &u))
        .expect("some point lies off the line");
    let theta = Homography::from_columns(f, [other, *nucleus, off])?.inverse(f);
    let image = apply_collineation(set, &theta, 0)?;
    let pairs: Vec<(Elem, Elem)> = image.points().iter().filter_map(|p| p.affine(f)).collect();
    let poly = interpolate(f, &pairs)?;
    Ok((theta, poly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    #[test]
    fn index_round_trip() {
        let f = build_field(4, 1, None);
        assert!(f.is_err());
        let f = build_field(5, 1, None).unwrap();
        let q = f.order();
        for (i, t) in enumerate_plane(&f).iter().enumerate() {
            assert_eq!(t.index(q), i);
            assert_eq!(Triple::new(&f, t.coords()).unwrap(), *t);
        }
    }

    #[test]
    fn fano_plane() {
        let f = build_field(2, 1, None).unwrap();
        let pts = enumerate_plane(&f);
        assert_eq!(pts.len(), 7);
        for l in &pts {
            assert_eq!(points_on(&f, l).len(), 3);
            assert!(points_on(&f, l).iter().all(|p| incident(&f, p, l)));
        }
    }

    #[test]
    fn line_at_infinity() {
        let f = build_field(7, 1, None).unwrap();
        let inf = Triple::from_ints(&f, [0, 1, 0]).unwrap();
        let z0 = Triple::from_ints(&f, [0, 0, 1]).unwrap();
        let y0 = Triple::from_ints(&f, [0, 1, 0]).unwrap();
        assert!(incident(&f, &inf, &z0));
        assert!(!incident(&f, &inf, &y0));
        assert!(line_through(&f, &inf, &inf).is_err());
    }

    #[test]
    fn inverse_undoes_map() {
        let f = build_field(7, 1, None).unwrap();
        let h = Homography::from_ints(&f, [[1, 2, 3], [0, 1, 4], [5, 0, 1]]).unwrap();
        let hi = h.inverse(&f);
        assert_eq!(h.compose(&f, &hi), Homography::identity());
        assert_eq!(
            Homography::from_ints(&f, [[1, 2, 3], [2, 4, 6], [0, 0, 1]]),
            Err(Error::SingularMatrix)
        );
    }
}
