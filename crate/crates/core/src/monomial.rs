//! Degree of the graph set of a monomial `x^d`: bounds, exact cases, witnesses.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, floor_half_plus_sqrt, gcd};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::poly::{distinct_roots, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    DegBound,
    Ubound,
    QminusPi,
    HorizGcd,
    OriginGcd,
    DivisorCase,
    Lacunary,
    Trace,
    KelleyOwen,
    Combined,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleValue {
    pub value: u64,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl RuleValue {
    fn new(rule: Rule, value: u64, detail: impl Into<String>) -> Self {
        RuleValue {
            value,
            rule,
            detail: detail.into(),
        }
    }
}

/// A line `y = ax + b` and the number of graph points on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineWitness {
    pub line: String,
    pub hits: u64,
}

/// `y=ax+b` with ±1 written as signs.
pub fn fmt_line(field: &Field, a: Elem, b: Elem) -> String {
    let minus_one = field.neg(Elem::ONE);
    let is_m1 = |c: Elem| c == minus_one && field.p() != 2;
    let slope = if a.is_zero() {
        String::new()
    } else if a == Elem::ONE {
        "x".into()
    } else if is_m1(a) {
        "-x".into()
    } else {
        format!("{}*x", field.fmt_elem(a))
    };
    let icept = match (a.is_zero(), b.is_zero(), is_m1(b)) {
        (_, _, true) => "-1".to_string(),
        (true, _, false) => field.fmt_elem(b),
        (false, true, false) => String::new(),
        (false, false, false) => format!("+{}", field.fmt_elem(b)),
    };
    format!("y={slope}{icept}")
}

/// Intersections of `y = x^d` with the horizontal lines `y = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalReport {
    pub m: u64,
    /// `α^{id}` for `0 ≤ i < (q-1)/m`.
    pub lines: Vec<Elem>,
    /// x-coordinates of the graph points on each entry of `lines`.
    pub hits: Vec<Vec<Elem>>,
    /// Nonzero b whose line misses the graph.
    pub empty: Vec<Elem>,
    /// Every count above agrees with direct evaluation.
    pub certified: bool,
}

pub fn horizontal_analysis(field: &Field, d: u64) -> HorizontalReport {
    let n = field.q() as u64 - 1;
    let m = gcd(d, n);
    let u = n / m;
    let lines: Vec<Elem> = (0..u)
        .map(|i| field.alpha_pow((i * d % n) as i64))
        .collect();
    // x in C_i^u lands on y = α^{id}.
    let hits: Vec<Vec<Elem>> = (0..u)
        .map(|i| {
            (0..m)
                .map(|k| field.alpha_pow((k * u + i) as i64))
                .collect()
        })
        .collect();
    let empty: Vec<Elem> = field.nonzero().filter(|b| !lines.contains(b)).collect();

    let mut tally = vec![0u64; field.order()];
    for x in field.nonzero() {
        tally[field.powu(x, d).index()] += 1;
    }
    let certified = lines
        .iter()
        .zip(&hits)
        .all(|(&b, xs)| tally[b.index()] == m && xs.iter().all(|&x| field.powu(x, d) == b))
        && empty.iter().all(|b| tally[b.index()] == 0)
        && field.powu(Elem::ZERO, d).is_zero();
    HorizontalReport {
        m,
        lines,
        hits,
        empty,
        certified,
    }
}

/// Intersections of `y = x^d` with the lines `y = ax`, `a ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OriginReport {
    pub m_prime: u64,
    /// Slopes `α^{(d-1)i}` for `0 ≤ i < (q-1)/m'`.
    pub lines: Vec<Elem>,
    /// x-coordinates on each line, the origin first.
    pub hits: Vec<Vec<Elem>>,
    /// Nonzero slopes meeting the graph only at the origin.
    pub empty: Vec<Elem>,
    pub certified: bool,
}

pub fn origin_analysis(field: &Field, d: u64) -> OriginReport {
    let n = field.q() as u64 - 1;
    let m = gcd(d.saturating_sub(1), n);
    let u = n / m;
    let lines: Vec<Elem> = (0..u)
        .map(|i| field.alpha_pow((i * ((d + n - 1) % n) % n) as i64))
        .collect();
    let hits: Vec<Vec<Elem>> = (0..u)
        .map(|i| {
            std::iter::once(Elem::ZERO)
                .chain((0..m).map(|k| field.alpha_pow((k * u + i) as i64)))
                .collect()
        })
        .collect();
    let empty: Vec<Elem> = field.nonzero().filter(|a| !lines.contains(a)).collect();

    // Every nonzero x lies on exactly one line through the origin, slope x^{d-1}.
    let mut tally = vec![0u64; field.order()];
    for x in field.nonzero() {
        tally[field.powu(x, d - 1).index()] += 1;
    }
    let certified = lines.iter().zip(&hits).all(|(&a, xs)| {
        tally[a.index()] == m && xs.iter().all(|&x| field.powu(x, d) == field.mul(a, x))
    }) && empty.iter().all(|a| tally[a.index()] == 0);
    OriginReport {
        m_prime: m,
        lines,
        hits,
        empty,
        certified,
    }
}

/// Best lower bound, and all lower bounds that apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub best: RuleValue,
    pub all: Vec<RuleValue>,
}

fn gcds(field: &Field, d: u64) -> (u64, u64) {
    let n = field.q() as u64 - 1;
    (gcd(d, n), gcd(d - 1, n))
}

pub fn lower_bound(field: &Field, d: u64) -> Bound {
    let (m, mp) = gcds(field, d);
    let all = vec![
        RuleValue::new(Rule::HorizGcd, m, format!("gcd(d,q-1)={m}")),
        RuleValue::new(
            Rule::OriginGcd,
            mp + 1,
            format!("gcd(d-1,q-1)+1={}", mp + 1),
        ),
    ];
    let best = pick(&all, |a, b| a > b);
    Bound { best, all }
}

/// First entry that no later entry beats.
fn pick(all: &[RuleValue], better: impl Fn(u64, u64) -> bool) -> RuleValue {
    let mut best = &all[0];
    for r in &all[1..] {
        if better(r.value, best.value) {
            best = r;
        }
    }
    best.clone()
}

/// Best lacunary cap on lines `y = ax + b` with `a, b ≠ 0`, over all divisors e of q-1.
pub fn lacunary_cap(field: &Field, d: u64) -> Option<RuleValue> {
    let n = field.q() as u64 - 1;
    let mut best: Option<RuleValue> = None;
    for e in divisors(n) {
        let classes = n / e;
        let cand = if d >= 2 && d <= e {
            let ell = e - d;
            RuleValue::new(
                Rule::Lacunary,
                (ell + 1) * classes,
                format!("e={e}, l={ell}"),
            )
        } else if d > e {
            let m = d - e;
            RuleValue::new(Rule::Lacunary, m * classes, format!("e={e}, m={m}"))
        } else {
            continue;
        };
        if best.as_ref().is_none_or(|b| cand.value < b.value) {
            best = Some(cand);
        }
    }
    best
}

/// Caps for each kind of non-vertical affine line, and the overall upper bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBounds {
    /// Exact maximum on lines `y = b`.
    pub horizontal: u64,
    /// Exact maximum on lines `y = ax`.
    pub origin: u64,
    /// Caps on lines `y = ax + b`, `a, b ≠ 0`.
    pub generic: Vec<RuleValue>,
    /// Per-line caps `[a≠0 b=0, a≠0 b≠0, a=0 b≠0]` when `2 < d < q-1`.
    pub ubound_lines: Option<[u64; 3]>,
    pub candidates: Vec<RuleValue>,
    pub best: RuleValue,
}

pub fn upper_bounds(field: &Field, d: u64) -> UpperBounds {
    let q = field.q() as u64;
    let (p, s) = (field.p() as u64, field.s());
    let (m, mp) = gcds(field, d);
    let floor = m.max(mp + 1);
    let ubound_applies = 2 < d && d < q - 1;

    let mut generic = Vec::new();
    if ubound_applies {
        generic.push(RuleValue::new(Rule::Ubound, q - d, "a,b nonzero: q-d"));
    }
    if let Some(lac) = lacunary_cap(field, d) {
        generic.push(lac);
    }
    let ko = floor_half_plus_sqrt(q - 1);
    generic.push(RuleValue::new(Rule::KelleyOwen, ko, "floor(1/2+sqrt(q-1))"));

    let mut candidates = vec![RuleValue::new(Rule::DegBound, d, "deg f")];
    if ubound_applies {
        candidates.push(RuleValue::new(
            Rule::Ubound,
            d.min(q - d + 1),
            "min(d,q-d+1)",
        ));
    }
    if let Some(i) = q_minus_p_power(p, s, q, d) {
        candidates.push(RuleValue::new(
            Rule::QminusPi,
            p.pow(i),
            format!("d=q-p^{i}"),
        ));
    }
    for g in generic
        .iter()
        .filter(|g| matches!(g.rule, Rule::Lacunary | Rule::KelleyOwen))
    {
        candidates.push(RuleValue::new(g.rule, floor.max(g.value), g.detail.clone()));
    }
    let min_generic = generic
        .iter()
        .map(|g| g.value)
        .min()
        .expect("Kelley-Owen always applies");
    candidates.push(RuleValue::new(
        Rule::Combined,
        floor.max(min_generic),
        format!("max({m},{},{min_generic})", mp + 1),
    ));
    let best = pick(&candidates, |a, b| a < b);
    UpperBounds {
        horizontal: m,
        origin: mp + 1,
        generic,
        ubound_lines: ubound_applies.then(|| [q - d + 1, q - d, q - d - 1]),
        candidates,
        best,
    }
}

/// i with `d = q - p^i`, `i | s`, `i < s`.
fn q_minus_p_power(p: u64, s: u32, q: u64, d: u64) -> Option<u32> {
    (1..s)
        .filter(|i| s.is_multiple_of(*i))
        .find(|&i| q - p.pow(i) == d)
}

/// Every closed-form exact value that applies, most specific first.
pub fn exact_rules(field: &Field, d: u64) -> Vec<RuleValue> {
    let q = field.q() as u64;
    let n = q - 1;
    let (p, s) = (field.p() as u64, field.s());
    let (m, mp) = gcds(field, d);
    let mut out = Vec::new();
    if d < 2 || d > n {
        return out;
    }
    if d == n {
        out.push(RuleValue::new(Rule::DivisorCase, n, "d=q-1"));
    }
    for e in divisors(n).into_iter().filter(|&e| e < n) {
        if d == e && e >= 2 {
            out.push(RuleValue::new(Rule::DivisorCase, e, format!("d=e, e={e}")));
        }
        if d == e + 1 {
            out.push(RuleValue::new(
                Rule::DivisorCase,
                e + 1,
                format!("d=e+1, e={e}"),
            ));
        }
        if d == q - e && e >= 2 {
            out.push(RuleValue::new(
                Rule::DivisorCase,
                e + 1,
                format!("d=q-e, e={e}"),
            ));
        }
    }
    if m * (m - 1) >= n {
        out.push(RuleValue::new(
            Rule::HorizGcd,
            m,
            format!("m={m}, m(m-1)>=q-1"),
        ));
    }
    if mp * (mp + 1) >= n {
        out.push(RuleValue::new(
            Rule::OriginGcd,
            mp + 1,
            format!("m'={mp}, m'(m'+1)>=q-1"),
        ));
    }
    if s == 2 && d == q - p {
        out.push(RuleValue::new(Rule::Trace, p, "q=p^2, d=q-p"));
    }
    if p == 2 && s > 1 && d == q - 2 {
        out.push(RuleValue::new(Rule::QminusPi, 2, "q=2^s, d=q-2"));
    }
    if floor_half_plus_sqrt(n) <= m.max(mp + 1) {
        out.push(RuleValue::new(
            Rule::KelleyOwen,
            m.max(mp + 1),
            "floor(1/2+sqrt(q-1)) <= max(m,m'+1)",
        ));
    }
    out
}

/// The first closed-form exact value, if any applies.
pub fn exact_divisor_cases(field: &Field, d: u64) -> Option<RuleValue> {
    exact_rules(field, d).into_iter().next()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    pub d: u64,
    pub lower: RuleValue,
    pub upper: RuleValue,
    pub exact: Option<RuleValue>,
    pub lower_rules: Vec<RuleValue>,
    pub upper_rules: Vec<RuleValue>,
    pub exact_rules: Vec<RuleValue>,
    pub witnesses: Vec<LineWitness>,
}

/// All theory-side information about `x^d`, no brute force.
pub fn bound_report(field: &Field, d: u64) -> BoundReport {
    let lower = lower_bound(field, d);
    let upper = upper_bounds(field, d);
    let mut exact_all = exact_rules(field, d);
    if exact_all.is_empty() && lower.best.value == upper.best.value {
        exact_all.push(RuleValue::new(
            Rule::Combined,
            lower.best.value,
            "lower = upper",
        ));
    }
    let (m, mp) = gcds(field, d);
    let minus_one = field.neg(Elem::ONE);
    let mut witnesses = vec![
        LineWitness {
            line: fmt_line(field, Elem::ZERO, Elem::ONE),
            hits: m,
        },
        LineWitness {
            line: fmt_line(field, Elem::ONE, Elem::ZERO),
            hits: mp + 1,
        },
    ];
    if exact_all.iter().any(|r| r.rule == Rule::Trace) {
        witnesses.push(LineWitness {
            line: fmt_line(field, minus_one, minus_one),
            hits: field.p() as u64,
        });
    }
    BoundReport {
        q: field.q() as u64,
        d,
        exact: exact_all.first().cloned(),
        lower: lower.best,
        upper: upper.best,
        lower_rules: lower.all,
        upper_rules: upper.candidates,
        exact_rules: exact_all,
        witnesses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LacunaryShape {
    /// `n = e - ℓ`: `k_i = x^ℓ g + α^{ie}`.
    Below { ell: u64 },
    /// `n = e + m`: `k_i = α^{ie} x^m + g`.
    Above { m: u64 },
}

#[derive(Clone, Debug)]
pub struct ClassPart {
    pub class: u32,
    pub reduced: Poly,
    /// Roots of `reduced` lying in the class, sorted by discrete log.
    pub roots: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct LacunaryPartition {
    pub shape: LacunaryShape,
    pub parts: Vec<ClassPart>,
}

/// Splits the nonzero roots of `h = x^n + g` over the `classes` cyclotomic classes.
pub fn lacunary_partition(h: &Poly, classes: u32) -> Result<LacunaryPartition> {
    let field = h.field();
    let bad = |msg: &str| Error::ShapeMismatch(msg.to_string());
    let n = h.degree().ok_or_else(|| bad("zero polynomial"))? as u64;
    if h.leading() != Elem::ONE {
        return Err(bad("leading coefficient must be 1"));
    }
    let qm1 = field.q() as u64 - 1;
    if classes == 0 || !qm1.is_multiple_of(classes as u64) {
        return Err(bad("class count must divide q-1"));
    }
    let mut gc = h.coeffs().to_vec();
    gc.pop();
    let g = Poly::new(field, gc);
    if g.degree().unwrap_or(0) == 0 {
        return Err(bad("need 0 < deg g"));
    }
    if h.coeff(0).is_zero() {
        return Err(bad("need h(0) != 0"));
    }
    let e = qm1 / classes as u64;
    let shape = if n <= e {
        LacunaryShape::Below { ell: e - n }
    } else {
        LacunaryShape::Above { m: n - e }
    };
    let parts = (0..classes)
        .map(|i| {
            let c = field.alpha_pow((i as u64 * e) as i64);
            let reduced = match shape {
                LacunaryShape::Below { ell } => {
                    &(&Poly::monomial(field, Elem::ONE, ell as usize) * &g)
                        + &Poly::constant(field, c)
                }
                LacunaryShape::Above { m } => &Poly::monomial(field, c, m as usize) + &g,
            };
            let mut roots: Vec<Elem> = distinct_roots(&reduced)?
                .roots
                .into_iter()
                .filter(|&r| field.class_index(r, classes) == Some(i))
                .collect();
            roots.sort_by_key(|&r| field.log_key(r));
            Ok(ClassPart {
                class: i,
                reduced,
                roots,
            })
        })
        .collect::<Result<_>>()?;
    Ok(LacunaryPartition { shape, parts })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceWitness {
    /// `(a, b)` of the line `y = ax + b`.
    pub line: (Elem, Elem),
    /// Roots of `x^{q-p} + x + 1`, sorted by discrete log.
    pub roots: Vec<Elem>,
}

/// The line `y = -x - 1` and its `p` intersections with `y = x^{q-p}` over `GF(p^2)`.
pub fn trace_witness(field: &Arc<Field>) -> Result<TraceWitness> {
    if field.s() != 2 {
        return Err(Error::ParameterOutOfRange(
            "trace witness needs q = p^2".into(),
        ));
    }
    let (p, q) = (field.p() as u64, field.q() as u64);
    let minus_one = field.neg(Elem::ONE);
    let mut roots: Vec<Elem> = field
        .nonzero()
        .filter(|&x| field.trace(x) == minus_one)
        .map(|x| field.inv(x).expect("nonzero"))
        .collect();
    roots.sort_by_key(|&r| field.log_key(r));
    let h = |x: Elem| field.add(field.add(field.powu(x, q - p), x), Elem::ONE);
    if roots.len() as u64 != p || roots.iter().any(|&r| !h(r).is_zero()) {
        return Err(Error::CertificationFailed("trace roots".into()));
    }
    let all = field.elements().filter(|&x| h(x).is_zero()).count() as u64;
    if all != p {
        return Err(Error::CertificationFailed(
            "extra roots off the trace set".into(),
        ));
    }
    Ok(TraceWitness {
        line: (minus_one, minus_one),
        roots,
    })
}

/// One row of the degree table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub d: u64,
    /// Brute-force `deg(S_{x^d})`.
    pub degree: u64,
    pub sample_line: LineWitness,
    pub report: BoundReport,
}

pub const DEFAULT_TABLE_CAP: u64 = 49;

/// Degree and first attaining line of `x^d`, by brute force.
pub fn brute_degree(field: &Field, d: u64) -> (u64, (Elem, Elem)) {
    let mut order: Vec<Elem> = field.elements().collect();
    order.sort_by_key(|&e| field.log_key(e));
    let values: Vec<Elem> = field.elements().map(|x| field.powu(x, d)).collect();
    let mut best = (0u64, (Elem::ZERO, Elem::ZERO));
    let mut hist = vec![0u64; field.order()];
    for &a in &order {
        hist.iter_mut().for_each(|h| *h = 0);
        for x in field.elements() {
            hist[field.sub(values[x.index()], field.mul(a, x)).index()] += 1;
        }
        for &b in &order {
            if hist[b.index()] > best.0 {
                best = (hist[b.index()], (a, b));
            }
        }
    }
    best
}

/// Rows for `d = 2..q-1`, computed in parallel over d.
pub fn degree_table(field: &Field, cap: u64, workers: usize) -> Result<Vec<DegreeRow>> {
    let q = field.q() as u64;
    if q > cap {
        return Err(Error::TooLarge { q, limit: cap });
    }
    let ds: Vec<u64> = (2..q).collect();
    let row = |d: u64| {
        let (degree, (a, b)) = brute_degree(field, d);
        DegreeRow {
            d,
            degree,
            sample_line: LineWitness {
                line: fmt_line(field, a, b),
                hits: degree,
            },
            report: bound_report(field, d),
        }
    };
    let workers = workers.max(1);
    if workers == 1 || ds.len() < 2 {
        return Ok(ds.into_iter().map(row).collect());
    }
    let chunk = ds.len().div_ceil(workers);
    Ok(std::thread::scope(|s| {
        let handles: Vec<_> = ds
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&d| row(d)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;
    use crate::text::parse_poly;

    fn gf25() -> Arc<Field> {
        build_field(5, 2, Some(&[2, 4, 1])).unwrap()
    }

    fn ints(f: &Field, v: &[i64]) -> Vec<Elem> {
        v.iter().map(|&n| f.from_int(n)).collect()
    }

    #[test]
    fn horizontal_gf13() {
        let f = build_field(13, 1, None).unwrap();
        let r = horizontal_analysis(&f, 4);
        assert_eq!(r.m, 4);
        assert!(r.certified);
        let mut lines = r.lines.clone();
        lines.sort();
        assert_eq!(lines, ints(&f, &[1, 3, 9]));
        let mut on_one = r.hits[0].clone();
        on_one.sort();
        assert_eq!(on_one, ints(&f, &[1, 5, 8, 12]));
        let r8 = horizontal_analysis(&f, 8);
        assert_eq!(r8.lines, ints(&f, &[1, 9, 3]));
        assert!(r8.certified);
    }

    #[test]
    fn horizontal_gf25_d16() {
        let f = gf25();
        let r = horizontal_analysis(&f, 16);
        assert_eq!(r.m, 8);
        // The cube roots of unity {1, α^8, α^16}, i.e. the class C_0^8.
        let expect: Vec<Elem> = [0, 16, 8].iter().map(|&k| f.alpha_pow(k)).collect();
        assert_eq!(r.lines, expect);
        assert_eq!(r.hits[0], f.cyclotomic_classes(3).unwrap()[0]);
        assert!(r.certified);
    }

    #[test]
    fn origin_examples() {
        let f13 = build_field(13, 1, None).unwrap();
        let r = origin_analysis(&f13, 5);
        assert_eq!(r.lines, ints(&f13, &[1, 3, 9]));
        assert!(r.hits.iter().all(|h| h.len() == 5));
        assert!(r.certified);
        let f31 = build_field(31, 1, None).unwrap();
        let r = origin_analysis(&f31, 26);
        assert_eq!(r.m_prime, 5);
        let mut expect: Vec<Elem> = (0..6).map(|i| f31.alpha_pow(5 * i)).collect();
        let mut lines = r.lines.clone();
        expect.sort();
        lines.sort();
        assert_eq!(lines, expect);
        assert!(r.certified);
        let r2 = origin_analysis(&f13, 2);
        assert_eq!((r2.m_prime, r2.lines.len()), (1, 12));
        assert!(r2.certified);
    }

    #[test]
    fn lower_bounds_gf25() {
        let f = gf25();
        let b = lower_bound(&f, 10);
        assert_eq!((b.best.value, b.best.rule), (4, Rule::OriginGcd));
        assert_eq!(lower_bound(&f, 15).best.value, 3);
        let b = lower_bound(&f, 14);
        assert_eq!((b.best.value, b.best.rule), (2, Rule::HorizGcd));
    }

    #[test]
    fn upper_bounds_gf25() {
        let f = gf25();
        let u = upper_bounds(&f, 11);
        assert_eq!((u.best.value, u.best.rule), (4, Rule::Lacunary));
        assert_eq!(u.best.detail, "e=12, l=1");
        let u = upper_bounds(&f, 14);
        assert_eq!((u.best.value, u.best.rule), (4, Rule::Lacunary));
        assert_eq!(u.best.detail, "e=12, m=2");
        let u = upper_bounds(&f, 10);
        assert_eq!((u.best.value, u.best.rule), (5, Rule::KelleyOwen));
        assert_eq!(u.ubound_lines, Some([16, 15, 14]));
        assert_eq!(upper_bounds(&f, 24).ubound_lines, None);
    }

    #[test]
    fn q_minus_two_in_even_fields() {
        for s in 2..=5 {
            let f = build_field(2, s, None).unwrap();
            let d = f.q() as u64 - 2;
            assert_eq!(upper_bounds(&f, d).best.value, 2);
            assert_eq!(exact_divisor_cases(&f, d).unwrap().value, 2);
        }
    }

    #[test]
    fn exact_cases_gf25() {
        let f = gf25();
        let e = exact_divisor_cases(&f, 16).unwrap();
        assert_eq!((e.value, e.rule), (8, Rule::HorizGcd));
        let e = exact_divisor_cases(&f, 20).unwrap();
        assert_eq!((e.value, e.rule), (5, Rule::Trace));
        let e = exact_divisor_cases(&f, 23).unwrap();
        assert_eq!((e.value, e.rule), (3, Rule::DivisorCase));
        assert_eq!(exact_divisor_cases(&f, 17).unwrap().value, 9);
        assert!(exact_rules(&f, 17)
            .iter()
            .any(|r| r.rule == Rule::OriginGcd && r.value == 9));
        for d in [10, 11, 14, 15] {
            assert_eq!(exact_divisor_cases(&f, d), None, "d={d}");
        }
        let r = bound_report(&f, 20);
        assert!(r
            .witnesses
            .iter()
            .any(|w| w.line == "y=-x-1" && w.hits == 5));
    }

    #[test]
    fn d_q_minus_1_is_not_a_two() {
        let f = build_field(7, 1, None).unwrap();
        assert_eq!(exact_divisor_cases(&f, 6).unwrap().value, 6);
        assert!(exact_rules(&f, 6).iter().all(|r| r.value == 6));
    }

    #[test]
    fn lacunary_examples() {
        let f = gf25();
        let a = |k| f.alpha_pow(k);
        let h = parse_poly(&f, "x^11 - x - a^3").unwrap();
        let lp = lacunary_partition(&h, 2).unwrap();
        assert_eq!(lp.shape, LacunaryShape::Below { ell: 1 });
        assert_eq!(lp.parts[0].roots, vec![a(16), a(20)]);
        assert_eq!(lp.parts[1].roots, vec![a(3), a(21)]);
        assert_eq!(
            lp.parts[0].reduced,
            parse_poly(&f, "-x^2 - a^3*x + 1").unwrap()
        );

        let h = parse_poly(&f, "x^14 - x - 2").unwrap();
        let lp = lacunary_partition(&h, 2).unwrap();
        assert_eq!(lp.shape, LacunaryShape::Above { m: 2 });
        let mut sq = lp.parts[0].roots.clone();
        sq.sort();
        assert_eq!(sq, ints(&f, &[2, 4]));
        assert_eq!(lp.parts[1].roots, vec![a(13), a(17)]);

        assert!(lacunary_partition(&parse_poly(&f, "x^11 - x").unwrap(), 2).is_err());
        assert!(lacunary_partition(&parse_poly(&f, "x^11 + 1").unwrap(), 2).is_err());
        assert!(lacunary_partition(&h, 5).is_err());
    }

    #[test]
    fn trace_witnesses() {
        let f = gf25();
        let w = trace_witness(&f).unwrap();
        let expect: Vec<Elem> = [7, 8, 11, 16, 18].iter().map(|&k| f.alpha_pow(k)).collect();
        assert_eq!(w.roots, expect);
        assert_eq!(
            trace_witness(&build_field(2, 2, None).unwrap())
                .unwrap()
                .roots
                .len(),
            2
        );
        assert_eq!(
            trace_witness(&build_field(3, 2, None).unwrap())
                .unwrap()
                .roots
                .len(),
            3
        );
        assert!(trace_witness(&build_field(7, 1, None).unwrap()).is_err());
    }

    #[test]
    fn line_text() {
        let f = gf25();
        let m1 = f.neg(Elem::ONE);
        assert_eq!(fmt_line(&f, Elem::ZERO, Elem::ONE), "y=1");
        assert_eq!(fmt_line(&f, Elem::ONE, Elem::ZERO), "y=x");
        assert_eq!(fmt_line(&f, m1, m1), "y=-x-1");
        assert_eq!(fmt_line(&f, Elem::ONE, f.alpha_pow(3)), "y=x+a^3");
        assert_eq!(fmt_line(&f, Elem::ZERO, Elem::ZERO), "y=0");
        assert_eq!(fmt_line(&f, Elem::ZERO, m1), "y=-1");
    }

    #[test]
    fn table_gf13_d4() {
        let f = build_field(13, 1, None).unwrap();
        let rows = degree_table(&f, DEFAULT_TABLE_CAP, 3).unwrap();
        let r4 = &rows[2];
        assert_eq!((r4.d, r4.degree), (4, 4));
        assert_eq!(r4.report.exact.as_ref().unwrap().rule, Rule::DivisorCase);
        assert_eq!(rows, degree_table(&f, DEFAULT_TABLE_CAP, 1).unwrap());
        assert!(degree_table(&build_field(53, 1, None).unwrap(), DEFAULT_TABLE_CAP, 1).is_err());
    }
}
