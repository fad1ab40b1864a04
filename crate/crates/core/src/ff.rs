//! GF(p^s) with discrete-log, antilog and Zech tables.
//!
//! An element is stored as the integer `c0 + c1 p + ... + c_{s-1} p^{s-1}`
//! of its polynomial-basis coordinates, so the prime subfield is `0..p`.

use std::fmt;
use std::sync::Arc;

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Largest field order accepted.
pub const MAX_ORDER: u64 = 1 << 16;

const NONE: u32 = u32::MAX;

/// A field element in base-p encoding. Meaningful only next to its [`Field`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub struct Field {
    p: u32,
    s: u32,
    q: u32,
    /// `c0..=cs` of the defining polynomial; empty for prime fields.
    modulus: Vec<u32>,
    primitive: Elem,
    /// `exp[k] = α^k` for `k < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + α^k)`, `NONE` when that sum is zero.
    zech: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("s", &self.s)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.s == other.s
            && self.modulus == other.modulus
            && self.primitive == other.primitive
    }
}

impl Eq for Field {}

/// Builds GF(p^s). Without a modulus the lexicographically smallest monic
/// primitive polynomial is used, comparing `(c0, c1, ...)` as integers.
pub fn build_field(p: u64, s: u32, modulus: Option<&[i64]>) -> Result<Arc<Field>> {
    build_field_with(p, s, modulus, None)
}

/// As [`build_field`], optionally pinning the primitive element (base-p code).
pub fn build_field_with(
    p: u64,
    s: u32,
    modulus: Option<&[i64]>,
    primitive: Option<u32>,
) -> Result<Arc<Field>> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if s == 0 {
        return Err(Error::ParameterOutOfRange(
            "extension degree must be >= 1".into(),
        ));
    }
    let q = p
        .checked_pow(s)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or(Error::FieldTooLarge(p.saturating_pow(s)))?;
    let (p, q) = (p as u32, q as u32);

    let modulus: Vec<u32> = if s == 1 {
        Vec::new()
    } else if let Some(m) = modulus {
        let m: Vec<u32> = m.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
        if m.len() != s as usize + 1 || m[s as usize] != 1 || !irreducible(&m, p) {
            return Err(Error::ReducibleModulus);
        }
        m
    } else {
        default_modulus(p, s)
    };

    let ring = Ring {
        p,
        s,
        modulus: &modulus,
    };
    let primitive = match primitive {
        Some(g) => {
            if g >= q || !ring.is_generator(g) {
                return Err(Error::NotPrimitive);
            }
            g
        }
        None => (0..q)
            .map(|i| lex_code(i, p, s))
            .find(|&g| ring.is_generator(g))
            .ok_or(Error::ReducibleModulus)?,
    };

    let n = (q - 1) as usize;
    let mut exp = Vec::with_capacity(2 * n);
    let mut log = vec![NONE; q as usize];
    let mut x = 1u32;
    for k in 0..n {
        exp.push(x);
        log[x as usize] = k as u32;
        x = ring.mul(x, primitive);
    }
    exp.extend_from_within(..);
    let zech = (0..n)
        .map(|k| {
            let sum = ring.add(1, exp[k]);
            if sum == 0 {
                NONE
            } else {
                log[sum as usize]
            }
        })
        .collect();

    Ok(Arc::new(Field {
        p,
        s,
        q,
        modulus,
        primitive: Elem(primitive),
        exp,
        log,
        zech,
    }))
}

/// The default field with q elements.
pub fn field_of_order(q: u64) -> Result<Arc<Field>> {
    let (p, s) = crate::arith::prime_power(q).ok_or(Error::NonPrime(q))?;
    build_field(p, s, None)
}

/// Parses `"p^s"`, `"q"` or `"p^s:c0,c1,...,cs"`.
pub fn parse_field_spec(text: &str) -> Result<Arc<Field>> {
    let bad = || Error::Parse(format!("bad field spec {text:?}"));
    let (head, coeffs) = match text.split_once(':') {
        Some((h, c)) => (h.trim(), Some(c)),
        None => (text.trim(), None),
    };
    let (p, s) = match head.split_once('^') {
        Some((p, s)) => (
            p.trim().parse::<u64>().map_err(|_| bad())?,
            s.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => {
            let q = head.parse::<u64>().map_err(|_| bad())?;
            crate::arith::prime_power(q).ok_or(Error::NonPrime(q))?
        }
    };
    let coeffs = coeffs
        .map(|c| {
            c.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    build_field(p, s, coeffs.as_deref())
}

impl Field {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.q as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    /// `"p^s:c0,...,cs"` for extensions, `"p"` for prime fields.
    pub fn spec_string(&self) -> String {
        if self.s == 1 {
            self.p.to_string()
        } else {
            let c: Vec<String> = self.modulus.iter().map(u32::to_string).collect();
            format!("{}^{}:{}", self.p, self.s, c.join(","))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q - 1).map(|k| Elem(self.exp[k as usize]))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// `α^k`, any integer k.
    pub fn alpha_pow(&self, k: i64) -> Elem {
        Elem(self.exp[k.rem_euclid(self.q as i64 - 1) as usize])
    }

    pub fn log(&self, a: Elem) -> Option<u32> {
        let l = self.log[a.index()];
        (l != NONE).then_some(l)
    }

    /// Sort key: 0 first, then by discrete logarithm.
    pub fn log_key(&self, a: Elem) -> u32 {
        self.log(a).map_or(0, |l| l + 1)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.q - 1;
        let (la, lb) = (self.log[a.index()], self.log[b.index()]);
        let k = if lb >= la { lb - la } else { lb + n - la };
        match self.zech[k as usize] {
            NONE => Elem::ZERO,
            z => Elem(self.exp[(la + z) as usize]),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if a.is_zero() || self.p == 2 {
            return a;
        }
        let l = self.log[a.index()] + (self.q - 1) / 2;
        Elem(self.exp[l as usize])
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a.index()];
        Ok(Elem(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer e, with `a^0 = 1` (also for `a = 0`).
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if e == 0 {
            return Ok(Elem::ONE);
        }
        if a.is_zero() {
            return if e > 0 {
                Ok(Elem::ZERO)
            } else {
                Err(Error::DivisionByZero)
            };
        }
        let n = self.q as i64 - 1;
        let l = (self.log[a.index()] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Ok(Elem(self.exp[l as usize]))
    }

    /// `a^n` for non-negative n; never fails.
    pub fn powu(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let m = self.q as u64 - 1;
        let l = (self.log[a.index()] as u64 * (n % m)) % m;
        Elem(self.exp[l as usize])
    }

    /// The automorphism `x ↦ x^{p^σ}`.
    pub fn frobenius(&self, a: Elem, sigma: u32) -> Elem {
        self.powu(a, (self.p as u64).pow(sigma % self.s))
    }

    /// Absolute trace onto GF(p).
    pub fn trace(&self, a: Elem) -> Elem {
        (0..self.s).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(a, i)))
    }

    /// The `e` cyclotomic classes `α^i <α^e>`, each listed as `α^{i}, α^{i+e}, ...`.
    pub fn cyclotomic_classes(&self, e: u32) -> Result<Vec<Vec<Elem>>> {
        let n = self.q - 1;
        if e == 0 || !n.is_multiple_of(e) {
            return Err(Error::NotADivisor {
                e: e as u64,
                n: n as u64,
            });
        }
        Ok((0..e)
            .map(|i| {
                (0..n / e)
                    .map(|k| Elem(self.exp[(k * e + i) as usize]))
                    .collect()
            })
            .collect())
    }

    /// Index i of the class `C_i^e` containing a nonzero element.
    pub fn class_index(&self, a: Elem, e: u32) -> Option<u32> {
        self.log(a).map(|l| l % e)
    }

    pub fn is_square(&self, a: Elem) -> bool {
        match self.log(a) {
            None => true,
            Some(l) => self.p == 2 || l % 2 == 0,
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    /// Text form: integers for prime fields, `a^k` otherwise.
    pub fn fmt_elem(&self, a: Elem) -> String {
        if self.s == 1 || a.is_zero() {
            return a.0.to_string();
        }
        match self.log[a.index()] {
            0 => "1".into(),
            1 => "a".into(),
            k => format!("a^{k}"),
        }
    }

    /// Base-p digits `c0..c_{s-1}`.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let mut x = a.0;
        (0..self.s)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }
}

/// Arithmetic in GF(p)[x]/(m) on base-p codes, used only while tables are built.
struct Ring<'a> {
    p: u32,
    s: u32,
    modulus: &'a [u32],
}

impl Ring<'_> {
    fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.s)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    fn code(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.s == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.code(&sum)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.s == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let p = self.p as u64;
        let s = self.s as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (s..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &mj) in self.modulus[..s].iter().enumerate() {
                let t = k - s + j;
                prod[t] = (prod[t] + c * (p - mj as u64)) % p;
            }
        }
        let low: Vec<u32> = prod[..s].iter().map(|&c| c as u32).collect();
        self.code(&low)
    }

    fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// True when `g` has multiplicative order exactly `q - 1`.
    fn is_generator(&self, g: u32) -> bool {
        let n = (self.p as u64).pow(self.s) - 1;
        if g == 0 {
            return false;
        }
        self.pow(g, n) == 1 && prime_factors(n).iter().all(|&r| self.pow(g, n / r) != 1)
    }
}

/// Code of the i-th element when tuples `(c0, c1, ...)` are ordered with c0 most significant.
fn lex_code(i: u32, p: u32, s: u32) -> u32 {
    let mut digits = vec![0u32; s as usize];
    let mut x = i;
    for d in digits.iter_mut().rev() {
        *d = x % p;
        x /= p;
    }
    digits.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn default_modulus(p: u32, s: u32) -> Vec<u32> {
    let count = p.pow(s);
    (0..count)
        .map(|i| {
            let code = lex_code(i, p, s);
            let mut m: Vec<u32> = (0..s)
                .scan(code, |x, _| {
                    let c = *x % p;
                    *x /= p;
                    Some(c)
                })
                .collect();
            m.push(1);
            m
        })
        .find(|m| irreducible(m, p) && Ring { p, s, modulus: m }.is_generator(p))
        .expect("a primitive polynomial exists for every degree")
}

/// Monic polynomial over GF(p) with no monic factor of degree 1..=deg/2.
fn irreducible(m: &[u32], p: u32) -> bool {
    let n = m.len() - 1;
    if n == 0 {
        return false;
    }
    for k in 1..=n / 2 {
        for code in 0..p.pow(k as u32) {
            let mut f: Vec<u32> = (0..k)
                .scan(code, |x, _| {
                    let c = *x % p;
                    *x /= p;
                    Some(c)
                })
                .collect();
            f.push(1);
            if rem_zero(m, &f, p) {
                return false;
            }
        }
    }
    true
}

fn rem_zero(a: &[u32], b: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    let db = b.len() - 1;
    for k in (db..r.len()).rev() {
        let c = r[k] % p;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let t = k - db + j;
            r[t] = (r[t] + c * (p - bj as u64)) % p;
        }
    }
    r.iter().all(|&c| c % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf25() -> Arc<Field> {
        build_field(5, 2, Some(&[2, 4, 1])).unwrap()
    }

    #[test]
    fn gf25_alpha_powers() {
        let f = gf25();
        let a = f.primitive();
        assert_eq!(f.mul(a, a), f.add(a, f.from_int(3)));
        let a6 = f.alpha_pow(6);
        assert_eq!(a6, f.from_int(2));
        assert_eq!(f.mul(a6, a6), f.from_int(-1));
        assert_eq!(f.inv(a6).unwrap(), f.alpha_pow(18));
        assert_eq!(f.alpha_pow(18), f.from_int(3));
        assert_eq!(f.trace(a6), f.from_int(-1));
    }

    #[test]
    fn trace_minus_one_set_in_gf25() {
        let f = gf25();
        let mut got: Vec<u32> = f
            .nonzero()
            .filter(|&x| f.trace(x) == f.from_int(-1))
            .map(|x| f.log(x).unwrap())
            .collect();
        got.sort();
        assert_eq!(got, vec![6, 8, 13, 16, 17]);
    }

    #[test]
    fn gf13_defaults() {
        let f = build_field(13, 1, None).unwrap();
        assert_eq!(f.primitive(), Elem(2));
        assert_eq!(f.pow(Elem(2), 12).unwrap(), Elem::ONE);
        let classes = f.cyclotomic_classes(3).unwrap();
        let sorted: Vec<Vec<u32>> = classes
            .iter()
            .map(|c| {
                let mut v: Vec<u32> = c.iter().map(|e| e.raw()).collect();
                v.sort();
                v
            })
            .collect();
        assert_eq!(
            sorted,
            vec![vec![1, 5, 8, 12], vec![2, 3, 10, 11], vec![4, 6, 7, 9]]
        );
        assert_eq!(
            f.cyclotomic_classes(5),
            Err(Error::NotADivisor { e: 5, n: 12 })
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(build_field(4, 1, None).unwrap_err(), Error::NonPrime(4));
        assert_eq!(
            build_field(5, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::ReducibleModulus
        );
        assert_eq!(
            build_field(5, 2, Some(&[2, 4])).unwrap_err(),
            Error::ReducibleModulus
        );
        assert_eq!(
            build_field_with(5, 2, Some(&[2, 4, 1]), Some(2)).unwrap_err(),
            Error::NotPrimitive
        );
        assert_eq!(
            build_field(2, 17, None).unwrap_err(),
            Error::FieldTooLarge(1 << 17)
        );
        assert!(build_field(2, 16, None).is_ok());
    }

    #[test]
    fn pow_conventions() {
        let f = build_field(7, 1, None).unwrap();
        assert_eq!(f.pow(Elem::ZERO, 0).unwrap(), Elem::ONE);
        assert_eq!(f.pow(Elem::ZERO, 3).unwrap(), Elem::ZERO);
        assert_eq!(f.pow(Elem::ZERO, -1), Err(Error::DivisionByZero));
        assert_eq!(f.pow(Elem(3), -1).unwrap(), f.inv(Elem(3)).unwrap());
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn default_modulus_is_smallest_primitive() {
        // GF(4): x^2 + x + 1 is the only irreducible quadratic.
        assert_eq!(build_field(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        // GF(8): (c0, c1, c2) = (1, 0, 1) precedes (1, 1, 0).
        assert_eq!(build_field(2, 3, None).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn field_axioms_small() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (7, 1)] {
            let f = build_field(p, s, None).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                    assert_eq!(f.powu(a, f.q() as u64 - 1), Elem::ONE);
                }
                for b in f.elements() {
                    let (da, db) = (f.coords(a), f.coords(b));
                    let sum: Vec<u32> = da
                        .iter()
                        .zip(&db)
                        .map(|(x, y)| (x + y) % p as u32)
                        .collect();
                    assert_eq!(f.coords(f.add(a, b)), sum);
                }
            }
        }
    }
}
