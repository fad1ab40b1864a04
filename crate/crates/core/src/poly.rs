//! Dense univariate polynomials over a [`Field`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::arith::{divisors, gcd as igcd, mobius};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};

#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    /// Constant term first, no trailing zeros.
    coeffs: Vec<Elem>,
}

pub(crate) fn same_field(a: &Arc<Field>, b: &Arc<Field>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::MixedFields)
    }
}

impl Poly {
    pub fn new(field: &Arc<Field>, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Coefficients taken in the prime subfield.
    pub fn from_ints(field: &Arc<Field>, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Arc<Field>) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &Arc<Field>, c: Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn x(field: &Arc<Field>) -> Self {
        Self::monomial(field, Elem::ONE, 1)
    }

    /// `c x^n`.
    pub fn monomial(field: &Arc<Field>, c: Elem, n: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    /// Unique polynomial of degree < q with the given values, indexed by element code.
    pub fn from_values(field: &Arc<Field>, values: &[Elem]) -> Self {
        let pairs: Vec<(Elem, Elem)> = field.elements().map(|x| (x, values[x.index()])).collect();
        interpolate(field, &pairs).expect("abscissas are distinct")
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Value table indexed by element code.
    pub fn values(&self) -> Vec<Elem> {
        self.field.elements().map(|x| self.eval(x)).collect()
    }

    pub fn functionally_eq(&self, other: &Poly) -> bool {
        same_field(&self.field, &other.field).is_ok() && self.values() == other.values()
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Result<Poly> {
        let inv = self
            .field
            .inv(self.leading())
            .map_err(|_| Error::ZeroPolynomial)?;
        Ok(self.scale(inv))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int(i as i64)))
            .collect();
        Poly::new(f, c)
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        same_field(&self.field, &d.field)?;
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(d.leading())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Elem::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let t = k - dd + j;
                r[t] = f.sub(r[t], f.mul(c, dj));
            }
        }
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly) -> Result<Poly> {
        same_field(&self.field, &g.field)?;
        let mut acc = Poly::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(&self.field, c);
        }
        Ok(acc)
    }

    /// Applies `x ↦ x^{p^σ}` to every coefficient.
    pub fn frobenius(&self, sigma: u32) -> Poly {
        let f = &self.field;
        Poly::new(
            f,
            self.coeffs.iter().map(|&c| f.frobenius(c, sigma)).collect(),
        )
    }

    /// Representative of degree < q of the same function (x^q = x).
    pub fn reduce_functional(&self) -> Poly {
        let f = &self.field;
        let q = f.order();
        if self.coeffs.len() <= q {
            return self.clone();
        }
        let mut c = vec![Elem::ZERO; q];
        for (e, &a) in self.coeffs.iter().enumerate() {
            let t = if e < q { e } else { (e - 1) % (q - 1) + 1 };
            c[t] = f.add(c[t], a);
        }
        Poly::new(f, c)
    }

    /// `Some((c, k))` when the polynomial is `c x^k`.
    pub fn as_monomial(&self) -> Option<(Elem, usize)> {
        let k = self.degree()?;
        self.coeffs[..k]
            .iter()
            .all(|c| c.is_zero())
            .then_some((self.leading(), k))
    }

    fn zip_with(&self, other: &Poly, op: impl Fn(Elem, Elem) -> Elem) -> Poly {
        same_field(&self.field, &other.field).expect("polynomials over different fields");
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        Poly::new(&self.field, c)
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field).is_ok() && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Ascending terms, e.g. `1 + 2*x + a^3*x^2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let coef = self.field.fmt_elem(c);
                let var = match i {
                    0 => String::new(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                };
                match (i, c == Elem::ONE) {
                    (0, _) => coef,
                    (_, true) => var,
                    _ => format!("{coef}*{var}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

// Binary operators panic on mixed fields; fallible entry points check first.

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = self.field.clone();
        self.zip_with(rhs, |a, b| f.add(a, b))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = self.field.clone();
        self.zip_with(rhs, |a, b| f.sub(a, b))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        same_field(&self.field, &rhs.field).expect("polynomials over different fields");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut c = vec![Elem::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }
}

/// Monic gcd by Euclid.
pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    same_field(&a.field, &b.field)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y)?;
        x = y;
        y = r;
    }
    x.monic()
}

/// `x^q - x` over the field.
pub fn field_polynomial(field: &Arc<Field>) -> Poly {
    let q = field.order();
    let mut c = vec![Elem::ZERO; q + 1];
    c[q] = Elem::ONE;
    c[1] = field.neg(Elem::ONE);
    Poly::new(field, c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub roots: Vec<Elem>,
    pub count: usize,
}

/// Distinct roots in F_q, listed by evaluation and checked against `deg gcd(f, x^q - x)`.
pub fn distinct_roots(f: &Poly) -> Result<RootReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let roots: Vec<Elem> = f
        .field
        .elements()
        .filter(|&x| f.eval(x).is_zero())
        .collect();
    let g = gcd(f, &field_polynomial(&f.field))?;
    let by_gcd = g.degree().unwrap_or(0);
    if by_gcd != roots.len() {
        return Err(Error::CertificationFailed(format!(
            "gcd degree {by_gcd} but {} roots by evaluation",
            roots.len()
        )));
    }
    Ok(RootReport {
        count: roots.len(),
        roots,
    })
}

/// Newton interpolation through pairs with distinct abscissas.
pub fn interpolate(field: &Arc<Field>, pairs: &[(Elem, Elem)]) -> Result<Poly> {
    let f = field;
    let mut seen = BTreeSet::new();
    for &(x, _) in pairs {
        if !seen.insert(x) {
            return Err(Error::DuplicateAbscissa(f.fmt_elem(x)));
        }
    }
    let n = pairs.len();
    let xs: Vec<Elem> = pairs.iter().map(|p| p.0).collect();
    let mut dd: Vec<Elem> = pairs.iter().map(|p| p.1).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = f.sub(dd[i], dd[i - 1]);
            let den = f.sub(xs[i], xs[i - level]);
            dd[i] = f.div(num, den)?;
        }
    }
    let mut acc = Poly::zero(f);
    for i in (0..n).rev() {
        let lin = Poly::new(f, vec![f.neg(xs[i]), Elem::ONE]);
        acc = &(&acc * &lin) + &Poly::constant(f, dd[i]);
    }
    Ok(acc)
}

pub fn is_permutation(f: &Poly) -> bool {
    let q = f.field.order();
    let mut hit = vec![false; q];
    f.field
        .elements()
        .all(|x| !std::mem::replace(&mut hit[f.eval(x).index()], true))
}

/// Compositional inverse of degree < q.
pub fn perm_inverse(f: &Poly) -> Result<Poly> {
    if !is_permutation(f) {
        return Err(Error::NotAPermutation);
    }
    let field = &f.field;
    let pairs: Vec<(Elem, Elem)> = field.elements().map(|x| (f.eval(x), x)).collect();
    let inv = interpolate(field, &pairs)?;
    if let Some(fast) = monomial_inverse(f) {
        if fast != inv {
            return Err(Error::CertificationFailed(format!(
                "monomial inverse {fast} differs from interpolated {inv}"
            )));
        }
    }
    Ok(inv)
}

/// `(c x^k)^{-1} = c^{-k'} x^{k'}` with `k k' ≡ 1 mod q-1`.
fn monomial_inverse(f: &Poly) -> Option<Poly> {
    let field = &f.field;
    let n = field.order() as u64 - 1;
    let (c, k) = f.reduce_functional().as_monomial()?;
    if n == 1 {
        return None;
    }
    let k = k as u64 % n;
    if igcd(k, n) != 1 {
        return None;
    }
    let kinv = (1..n).find(|&t| (k * t) % n == 1)?;
    let coef = field.pow(c, -(kinv as i64)).ok()?;
    Some(Poly::monomial(field, coef, kinv as usize))
}

/// `Σ_{t∈T} (1 - (x-t)^{q-1})`, using `(x-t)^{q-1} = Σ_j t^{q-1-j} x^j`.
pub fn indicator_polynomial(field: &Arc<Field>, set: &[Elem]) -> Poly {
    let q = field.order();
    let mut c = vec![Elem::ZERO; q];
    for &t in set {
        c[0] = field.add(c[0], Elem::ONE);
        for (j, cj) in c.iter_mut().enumerate() {
            let term = field.powu(t, (q - 1 - j) as u64);
            *cj = field.sub(*cj, term);
        }
    }
    Poly::new(field, c)
}

/// Number of monic irreducible polynomials of degree n over F_q with
/// `x^{n-1}` coefficient γ, by the Möbius closed form.
pub fn irreducible_count_fixed_trace(field: &Field, n: u32, gamma: Elem) -> u64 {
    let p = field.p() as u64;
    let q = field.q() as i128;
    let mut m = n as u64;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    let ds = divisors(m);
    let main: i128 = ds
        .iter()
        .map(|&d| mobius(d) as i128 * q.pow(n / d as u32))
        .sum();
    let correction: i128 = if gamma.is_zero() && k > 0 {
        ds.iter()
            .map(|&d| mobius(d) as i128 * q.pow(n / (p as u32 * d as u32)))
            .sum()
    } else {
        0
    };
    ((main - q * correction) / (q * n as i128)) as u64
}
