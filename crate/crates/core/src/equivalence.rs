//! Projective-equivalence transforms of polynomials.

use crate::distribution::{poly_distribution, IntersectionDistribution};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::geometry::{graph_set, internal_nuclei, secant_profile, Triple};
use crate::poly::{is_permutation, perm_inverse, Poly};

/// `g = e·f^σ(ax + b) + cx + d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivTransform {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
    pub e: Elem,
    pub sigma: u32,
}

impl EquivTransform {
    pub fn identity() -> Self {
        EquivTransform {
            a: Elem::ONE,
            b: Elem::ZERO,
            c: Elem::ZERO,
            d: Elem::ZERO,
            e: Elem::ONE,
            sigma: 0,
        }
    }

    pub fn validate(&self, field: &Field) -> Result<()> {
        let ok = !self.a.is_zero()
            && !self.e.is_zero()
            && self.sigma < field.s()
            && [self.a, self.b, self.c, self.d, self.e]
                .iter()
                .all(|&x| field.contains(x));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTransform)
        }
    }

    /// The single transform equal to applying `self` and then `next` (both with σ = 0).
    pub fn then(&self, field: &Field, next: &EquivTransform) -> Result<EquivTransform> {
        if self.sigma != 0 || next.sigma != 0 {
            return Err(Error::InvalidTransform);
        }
        let f = field;
        let (t1, t2) = (self, next);
        Ok(EquivTransform {
            a: f.mul(t1.a, t2.a),
            b: f.add(f.mul(t1.a, t2.b), t1.b),
            c: f.add(f.mul(t2.e, f.mul(t1.c, t2.a)), t2.c),
            d: f.add(
                f.add(f.mul(t2.e, f.mul(t1.c, t2.b)), f.mul(t2.e, t1.d)),
                t2.d,
            ),
            e: f.mul(t1.e, t2.e),
            sigma: 0,
        })
    }
}

/// Applies the transform and reduces to degree < q.
pub fn transform(f: &Poly, t: &EquivTransform) -> Result<Poly> {
    let field = f.field();
    t.validate(field)?;
    let inner = Poly::new(field, vec![t.b, t.a]);
    let g = f.frobenius(t.sigma).compose(&inner)?.scale(t.e);
    let lin = Poly::new(field, vec![t.d, t.c]);
    Ok((&g + &lin).reduce_functional())
}

/// Moves an affine internal nucleus `(a:b:1)` to `(0:0:1)` with unisecant y = 0.
pub fn normalize_nucleus(f: &Poly, nucleus: &Triple) -> Result<Poly> {
    let field = f.field();
    let [x, y, z] = nucleus.coords();
    if z.is_zero() {
        return Err(Error::PointAtInfinity);
    }
    let (a, b) = (field.div(x, z)?, field.div(y, z)?);
    let set = graph_set(f);
    if !internal_nuclei(&set)?.contains(nucleus) {
        return Err(Error::NotAnInternalNucleus);
    }
    let (line, _) = secant_profile(&set, nucleus)
        .into_iter()
        .find(|&(_, n)| n == 1)
        .ok_or(Error::NotAnInternalNucleus)?;
    // The unisecant is not vertical (x = a carries (0:1:0) too), so it reads dx + y - (da+b)z = 0.
    let [l0, l1, _] = line.coords();
    let d = field.div(l0, l1).map_err(|_| Error::NotAnInternalNucleus)?;
    let t = EquivTransform {
        a: Elem::ONE,
        b: a,
        c: d,
        d: field.neg(b),
        e: Elem::ONE,
        sigma: 0,
    };
    transform(f, &t)
}

/// Slope of the unisecant through `(0:0:1)`.
fn origin_unisecant_slope(f: &Poly) -> Result<Elem> {
    let field = f.field();
    let origin = Triple::new(field, [Elem::ZERO, Elem::ZERO, Elem::ONE])?;
    let set = graph_set(f);
    if !internal_nuclei(&set)?.contains(&origin) {
        return Err(Error::NucleusMissing);
    }
    let (line, _) = secant_profile(&set, &origin)
        .into_iter()
        .find(|&(_, n)| n == 1)
        .ok_or(Error::NucleusMissing)?;
    // Line mx - y = 0 normalizes to (1 : -1/m : 0), or (0:1:0) when m = 0.
    let [l0, l1, _] = line.coords();
    if l1.is_zero() {
        return Err(Error::NotDecomposable);
    }
    Ok(field.neg(field.div(l0, l1)?))
}

/// The permutation g with `f = x·g` on F_q, given an internal nucleus at (0:0:1).
///
/// `g(0)` is the slope m of the unisecant `y = mx` through the origin, which is 0
/// exactly when y = 0 is that unisecant.
pub fn xg_decompose(f: &Poly) -> Result<Poly> {
    let field = f.field();
    let m = origin_unisecant_slope(f)?;
    let values: Vec<Elem> = field
        .elements()
        .map(|x| {
            if x.is_zero() {
                Ok(m)
            } else {
                field.div(f.eval(x), x)
            }
        })
        .collect::<Result<_>>()?;
    let g = Poly::from_values(field, &values);
    if !is_permutation(&g) {
        return Err(Error::NotDecomposable);
    }
    Ok(g)
}

/// Exchanges the nuclei (0:1:0) and (0:0:1): returns `x·h` with `h(0) = 0` and
/// `h(x) = 1 / g^{-1}(1/x)`, where `f = x·g` after shifting the unisecant at the
/// origin to y = 0.
pub fn nucleus_swap(f: &Poly) -> Result<Poly> {
    let field = f.field();
    let g = xg_decompose(f)?;
    let m = g.eval(Elem::ZERO);
    let shifted = Poly::from_values(
        field,
        &field
            .elements()
            .map(|x| field.sub(g.eval(x), m))
            .collect::<Vec<_>>(),
    );
    let ginv = perm_inverse(&shifted).map_err(|_| Error::NotDecomposable)?;
    let values: Vec<Elem> = field
        .elements()
        .map(|x| {
            if x.is_zero() {
                return Ok(Elem::ZERO);
            }
            let h = field.inv(ginv.eval(field.inv(x)?))?;
            Ok(field.mul(x, h))
        })
        .collect::<Result<_>>()?;
    Ok(Poly::from_values(field, &values))
}

#[derive(Clone, Debug)]
pub struct InverseComparison {
    pub inverse: Poly,
    pub distribution: IntersectionDistribution,
    pub inverse_distribution: IntersectionDistribution,
    pub equal: bool,
}

/// Distribution of a permutation polynomial next to that of its inverse.
pub fn inverse_comparison(f: &Poly) -> Result<InverseComparison> {
    let inverse = perm_inverse(f)?;
    let distribution = poly_distribution(f);
    let inverse_distribution = poly_distribution(&inverse);
    Ok(InverseComparison {
        equal: distribution == inverse_distribution,
        inverse,
        distribution,
        inverse_distribution,
    })
}
