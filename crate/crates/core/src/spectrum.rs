//! The non-hitting spectrum: which values of `u_0` occur for (q+1)-sets in PG(2,q).

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::derive_seed;
use crate::constructions::{
    build_in, degenerate_families, valid_params, ConstructionSpec, Degenerate, Family,
};
use crate::distribution::{poly_distribution, set_distribution, IntersectionDistribution, Kind};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::geometry::{graph_set, Plane, PointSet, Triple};
use crate::poly::Poly;
use crate::text::parse_triple;

/// How a value was certified, best first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Provenance {
    ClosedForm,
    Construction,
    Exhaustive,
    RandomSearch,
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attained {
    pub u0: u64,
    pub provenance: Provenance,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub q: u64,
    pub attained: Vec<Attained>,
    pub gaps_certified: Vec<[u64; 2]>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_u0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeCertificate>,
}

impl SpectrumResult {
    pub fn values(&self) -> Vec<u64> {
        self.attained.iter().map(|a| a.u0).collect()
    }

    /// Recomputes `u_0` of every witness.
    pub fn verify(&self, field: &Arc<Field>) -> Result<()> {
        if field.q() as u64 != self.q {
            return Err(Error::MixedFields);
        }
        for a in &self.attained {
            let pts = a
                .witness
                .iter()
                .map(|s| parse_triple(field, s))
                .collect::<Result<Vec<_>>>()?;
            let got = set_distribution(&PointSet::new(field, pts)?)?.non_hitting_index();
            if got != a.u0 {
                return Err(Error::CertificationFailed(format!(
                    "witness for u0={} has u0={got}",
                    a.u0
                )));
            }
        }
        Ok(())
    }
}

/// First witness per value, keeping the best provenance.
#[derive(Clone, Debug, Default)]
struct Tally(BTreeMap<u64, (Provenance, Vec<u32>)>);

impl Tally {
    fn offer(&mut self, u0: u64, prov: Provenance, pts: &[u32]) {
        let better = self.0.get(&u0).is_none_or(|(p, _)| prov < *p);
        if better {
            let mut pts = pts.to_vec();
            pts.sort_unstable();
            self.0.insert(u0, (prov, pts));
        }
    }

    fn offer_set(&mut self, u0: u64, prov: Provenance, set: &PointSet) {
        self.offer(u0, prov, &set.indices());
    }

    fn into_attained(self, field: &Arc<Field>) -> Result<Vec<Attained>> {
        self.0
            .into_iter()
            .map(|(u0, (provenance, idx))| {
                Ok(Attained {
                    u0,
                    provenance,
                    witness: PointSet::from_indices(field, &idx)?.to_strings(),
                })
            })
            .collect()
    }
}

fn check_u0(set: &PointSet, want: u64, what: &str) -> Result<()> {
    let got = set_distribution(set)?.non_hitting_index();
    if got == want {
        Ok(())
    } else {
        Err(Error::CertificationFailed(format!(
            "{what}: expected u0={want}, witness gives {got}"
        )))
    }
}

#[derive(Clone, Debug)]
pub struct LowerEntries {
    pub entries: Vec<(u64, PointSet)>,
    pub gaps: Vec<[u64; 2]>,
}

/// The guaranteed first entries of the spectrum (five for q ≥ 7, nine for q ≥ 16)
/// with witnesses, and the gaps between them.
pub fn lower_entries(field: &Arc<Field>) -> Result<LowerEntries> {
    let q = field.q() as u64;
    if q < 7 {
        return Err(Error::TooSmallForClaim { min: 7 });
    }
    let mut entries = Vec::new();
    let mut push = |u0: u64, set: PointSet| -> Result<()> {
        check_u0(&set, u0, "lower entry")?;
        entries.push((u0, set));
        Ok(())
    };
    let deg = |w| degenerate_families(field, w).map(|r| r.witness);
    push(0, deg(Degenerate::Line)?)?;
    push(q - 1, deg(Degenerate::LinePlusPoint)?)?;
    push(2 * q - 4, deg(Degenerate::TwoLinesMeetInSet)?)?;
    push(2 * q - 3, deg(Degenerate::TwoLinesMeetOffSet)?)?;
    push(3 * q - 9, deg(Degenerate::LinePlusTriangle { k: 3 })?)?;
    let mut gaps = vec![[1, q - 2], [q, 2 * q - 5]];
    if 2 * q - 2 <= 3 * q - 10 {
        gaps.push([2 * q - 2, 3 * q - 10]);
    }
    if q >= 16 {
        for k in (0..3).rev() {
            push(3 * q - 6 - k, deg(Degenerate::LinePlusTriangle { k })?)?;
        }
        let spec = ConstructionSpec {
            family: Family::TwoLinesIncl,
            q,
            t: q / 2 - 4,
            c: 0,
            seed: 0,
        };
        push(4 * q - 16, build_in(field, &spec)?.set)?;
        gaps.push([3 * q - 5, 4 * q - 17]);
    }
    Ok(LowerEntries { entries, gaps })
}

#[derive(Clone, Debug)]
pub struct ConstructionValue {
    pub u0: u64,
    pub source: String,
    pub witness: PointSet,
}

/// Every `u_0` produced by the two-line families over their parameter ranges and by
/// the degenerate families, each confirmed on a built set. Sorted by value.
pub fn construction_values(field: &Arc<Field>) -> Result<Vec<ConstructionValue>> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    for family in Family::ALL {
        for (t, c) in valid_params(family, q) {
            let spec = ConstructionSpec {
                family,
                q,
                t,
                c,
                seed: 0,
            };
            let predicted = crate::constructions::predicted_distribution(&spec)?;
            let built = build_in(field, &spec)?;
            let u0 = predicted.non_hitting_index();
            check_u0(&built.set, u0, &format!("{family:?} t={t} c={c}"))?;
            let source = if family == Family::TwoLinesTwoPoints {
                format!("{family:?} t={t} c={c}")
            } else {
                format!("{family:?} t={t}")
            };
            out.push(ConstructionValue {
                u0,
                source,
                witness: built.set,
            });
        }
    }
    let mut degenerate = vec![
        Degenerate::Line,
        Degenerate::LinePlusPoint,
        Degenerate::TwoLinesMeetInSet,
    ];
    if q >= 3 {
        degenerate.push(Degenerate::TwoLinesMeetOffSet);
        degenerate.extend((0..=3.min(q - 2)).map(|k| Degenerate::LinePlusTriangle { k }));
    }
    for w in degenerate {
        let r = degenerate_families(field, w)?;
        if r.predicted != r.computed {
            return Err(Error::CertificationFailed(format!(
                "{w:?} distribution differs from closed form"
            )));
        }
        out.push(ConstructionValue {
            u0: r.predicted.non_hitting_index(),
            source: format!("{w:?}"),
            witness: r.witness,
        });
    }
    out.sort_by_key(|v| v.u0);
    Ok(out)
}

/// `q(q-1)/2`, attained by the conic `y = x^2`.
pub fn arc_value(field: &Arc<Field>) -> Result<(u64, PointSet)> {
    let q = field.q() as u64;
    let set = graph_set(&Poly::monomial(field, Elem::ONE, 2));
    let u0 = q * (q - 1) / 2;
    check_u0(&set, u0, "conic")?;
    Ok((u0, set))
}

/// Maximal runs of missing values in `0..=hi`.
fn missing_runs(values: impl IntoIterator<Item = u64>, hi: u64) -> Vec<[u64; 2]> {
    let mut gaps = Vec::new();
    let mut next = 0;
    for v in values {
        if v > next {
            gaps.push([next, v - 1]);
        }
        next = v + 1;
    }
    if next <= hi {
        gaps.push([next, hi]);
    }
    gaps
}

pub const EXHAUSTIVE_LIMIT: u64 = 5;

fn exhaustive_tally(plane: &Plane) -> BTreeMap<u64, Vec<u32>> {
    fn rec(
        plane: &Plane,
        start: usize,
        left: usize,
        chosen: &mut Vec<u32>,
        counts: &mut [u16],
        zeros: u64,
        out: &mut BTreeMap<u64, Vec<u32>>,
    ) {
        if left == 0 {
            out.entry(zeros).or_insert_with(|| chosen.clone());
            return;
        }
        for p in start..=plane.size() - left {
            let mut z = zeros;
            for &l in plane.on(p) {
                if counts[l as usize] == 0 {
                    z -= 1;
                }
                counts[l as usize] += 1;
            }
            chosen.push(p as u32);
            rec(plane, p + 1, left - 1, chosen, counts, z, out);
            chosen.pop();
            for &l in plane.on(p) {
                counts[l as usize] -= 1;
            }
        }
    }
    let mut out = BTreeMap::new();
    let mut counts = vec![0u16; plane.size()];
    rec(
        plane,
        0,
        plane.q() + 1,
        &mut Vec::new(),
        &mut counts,
        plane.size() as u64,
        &mut out,
    );
    out
}

/// Every (q+1)-subset of the plane, for q ≤ 5.
pub fn exhaustive_spectrum(field: &Arc<Field>) -> Result<SpectrumResult> {
    let q = field.q() as u64;
    if q > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            q,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let plane = Plane::new(field)?;
    let mut tally = Tally::default();
    for (u0, pts) in exhaustive_tally(&plane) {
        tally.offer(u0, Provenance::Exhaustive, &pts);
    }
    let gaps = missing_runs(tally.0.keys().copied(), q * (q - 1) / 2);
    Ok(SpectrumResult {
        q,
        attained: tally.into_attained(field)?,
        gaps_certified: gaps,
        trials: 0,
        seed: 0,
        mean_u0: None,
        probe: None,
    })
}

/// Indices of `(1:0:0), (0:1:0), (0:0:1), (1:1:1)`.
pub fn quadrangle(field: &Field) -> [u32; 4] {
    let q = field.order();
    [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
        .map(|c| Triple::from_ints(field, c).expect("nonzero").index(q) as u32)
}

const BLOCK: u64 = 1 << 12;

/// Runs `f` on blocks `0..n` across `workers` threads; results come back in block order.
fn run_blocks<R: Send>(n: u64, workers: usize, f: impl Fn(u64) -> R + Sync) -> Vec<R> {
    let workers = workers.max(1).min(n.max(1) as usize) as u64;
    let mut slots: Vec<Option<R>> = (0..n).map(|_| None).collect();
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..n)
                        .step_by(workers as usize)
                        .map(|b| (b, f(b)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (b, r) in h.join().expect("worker panicked") {
                slots[b as usize] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every block ran"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub trials: u64,
    pub seed: u64,
    pub fix_quadrangle: bool,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// First witness per value, ordered by (block, trial).
    pub first: BTreeMap<u64, Vec<u32>>,
    pub trials: u64,
    pub sum_u0: u64,
}

impl SearchOutcome {
    pub fn mean(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.sum_u0 as f64 / self.trials as f64)
    }
}

/// Uniform random (q+1)-sets, optionally all containing the fundamental quadrangle.
pub fn random_search(plane: &Plane, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let q = plane.q();
    let fixed: Vec<u32> = if cfg.fix_quadrangle {
        if q < 3 {
            return Err(Error::ParameterOutOfRange("quadrangle needs q >= 3".into()));
        }
        quadrangle(plane.field()).to_vec()
    } else {
        Vec::new()
    };
    let free: Vec<u32> = (0..plane.size() as u32)
        .filter(|p| !fixed.contains(p))
        .collect();
    let k = q + 1 - fixed.len();
    let nblocks = cfg.trials.div_ceil(BLOCK);
    let blocks = run_blocks(nblocks, cfg.workers, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[cfg.seed, b]));
        let mut pool = free.clone();
        let mut pts = fixed.clone();
        let mut scratch = Vec::new();
        let mut first = BTreeMap::new();
        let mut sum = 0;
        let n = BLOCK.min(cfg.trials - b * BLOCK);
        for _ in 0..n {
            let (chosen, _) = pool.partial_shuffle(&mut rng, k);
            pts.truncate(fixed.len());
            pts.extend_from_slice(chosen);
            let u0 = plane.non_hitting(&pts, &mut scratch);
            sum += u0;
            first.entry(u0).or_insert_with(|| pts.clone());
        }
        (first, sum)
    });
    let mut out = SearchOutcome {
        first: BTreeMap::new(),
        trials: cfg.trials,
        sum_u0: 0,
    };
    for (first, sum) in blocks {
        out.sum_u0 += sum;
        for (u0, pts) in first {
            out.first.entry(u0).or_insert(pts);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalConfig {
    pub restarts: u64,
    pub steps: u64,
    pub seed: u64,
    pub workers: usize,
}

/// Hill climbing on `u_0` by single-point swaps, quadrangle kept fixed. Every value
/// passed through is recorded.
pub fn local_search(plane: &Plane, cfg: &LocalConfig) -> Result<BTreeMap<u64, Vec<u32>>> {
    let q = plane.q();
    if q < 3 {
        return Err(Error::ParameterOutOfRange("quadrangle needs q >= 3".into()));
    }
    let fixed = quadrangle(plane.field());
    let n = plane.size();
    let runs = run_blocks(cfg.restarts, cfg.workers, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[cfg.seed, u64::MAX, r]));
        let mut in_set = vec![false; n];
        for &p in &fixed {
            in_set[p as usize] = true;
        }
        let mut free: Vec<u32> = (0..n as u32).filter(|&p| !in_set[p as usize]).collect();
        let (chosen, _) = free.partial_shuffle(&mut rng, q + 1 - 4);
        let mut movable = chosen.to_vec();
        for &p in &movable {
            in_set[p as usize] = true;
        }
        let mut counts = Vec::new();
        let all: Vec<u32> = fixed.iter().chain(&movable).copied().collect();
        let mut u0 = plane.non_hitting(&all, &mut counts);
        let mut seen = BTreeMap::new();
        let snapshot = |movable: &[u32]| fixed.iter().chain(movable).copied().collect::<Vec<u32>>();
        seen.insert(u0, snapshot(&movable));
        for _ in 0..cfg.steps {
            let i = rng.gen_range(0..movable.len());
            let add = loop {
                let c = rng.gen_range(0..n as u32);
                if !in_set[c as usize] {
                    break c;
                }
            };
            let out = movable[i];
            let mut next = u0;
            for &l in plane.on(out as usize) {
                counts[l as usize] -= 1;
                if counts[l as usize] == 0 {
                    next += 1;
                }
            }
            for &l in plane.on(add as usize) {
                if counts[l as usize] == 0 {
                    next -= 1;
                }
                counts[l as usize] += 1;
            }
            if next >= u0 {
                movable[i] = add;
                in_set[out as usize] = false;
                in_set[add as usize] = true;
                u0 = next;
                seen.entry(u0).or_insert_with(|| snapshot(&movable));
            } else {
                for &l in plane.on(add as usize) {
                    counts[l as usize] -= 1;
                }
                for &l in plane.on(out as usize) {
                    counts[l as usize] += 1;
                }
            }
        }
        seen
    });
    let mut out = BTreeMap::new();
    for seen in runs {
        for (u0, pts) in seen {
            out.entry(u0).or_insert(pts);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumOptions {
    pub trials: u64,
    pub seed: u64,
    pub fix_quadrangle: bool,
    pub exhaustive: bool,
    pub local_restarts: u64,
    pub local_steps: u64,
    pub workers: usize,
}

impl SpectrumOptions {
    pub const DEFAULT_TRIALS: u64 = 1_000_000;

    pub fn new(trials: u64, seed: u64) -> Self {
        SpectrumOptions {
            trials,
            seed,
            fix_quadrangle: true,
            exhaustive: false,
            local_restarts: 64,
            local_steps: 4000,
            workers: 1,
        }
    }
}

/// Merges closed forms, constructions, exhaustive enumeration (q ≤ 5 on request),
/// random search and local search into one certified result.
pub fn spectrum(field: &Arc<Field>, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    let q = field.q() as u64;
    let mut tally = Tally::default();
    let mut gaps = Vec::new();

    let (arc, conic) = arc_value(field)?;
    tally.offer_set(arc, Provenance::ClosedForm, &conic);
    if q >= 7 {
        let lower = lower_entries(field)?;
        for (u0, set) in &lower.entries {
            tally.offer_set(*u0, Provenance::ClosedForm, set);
        }
        gaps = lower.gaps;
    }
    for v in construction_values(field)? {
        tally.offer_set(v.u0, Provenance::Construction, &v.witness);
    }

    let plane = Plane::new(field)?;
    if opts.exhaustive {
        if q > EXHAUSTIVE_LIMIT {
            return Err(Error::TooLarge {
                q,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        let all = exhaustive_tally(&plane);
        gaps = missing_runs(all.keys().copied(), q * (q - 1) / 2);
        for (u0, pts) in all {
            tally.offer(u0, Provenance::Exhaustive, &pts);
        }
    }
    let quad_ok = !opts.fix_quadrangle || q >= 3;
    let mut mean = None;
    if opts.trials > 0 && quad_ok {
        let cfg = SearchConfig {
            trials: opts.trials,
            seed: opts.seed,
            fix_quadrangle: opts.fix_quadrangle,
            workers: opts.workers,
        };
        let found = random_search(&plane, &cfg)?;
        mean = found.mean();
        for (u0, pts) in &found.first {
            tally.offer(*u0, Provenance::RandomSearch, pts);
        }
    }
    if opts.local_restarts > 0 && q >= 3 {
        let cfg = LocalConfig {
            restarts: opts.local_restarts,
            steps: opts.local_steps,
            seed: opts.seed,
            workers: opts.workers,
        };
        for (u0, pts) in local_search(&plane, &cfg)? {
            tally.offer(u0, Provenance::LocalSearch, &pts);
        }
    }

    let result = SpectrumResult {
        q,
        attained: tally.into_attained(field)?,
        gaps_certified: gaps,
        trials: opts.trials,
        seed: opts.seed,
        mean_u0: mean,
        probe: None,
    };
    for a in &result.attained {
        if result
            .gaps_certified
            .iter()
            .any(|g| g[0] <= a.u0 && a.u0 <= g[1])
        {
            return Err(Error::CertificationFailed(format!(
                "u0={} lies in a certified gap",
                a.u0
            )));
        }
    }
    result.verify(field)?;
    Ok(result)
}

fn require_q9(plane: &Plane) -> Result<()> {
    if plane.q() != 9 {
        return Err(Error::ParameterOutOfRange(format!(
            "probe is defined for q=9, got q={}",
            plane.q()
        )));
    }
    Ok(())
}

/// `line[p * n + r]` is the line through points `p ≠ r`.
fn joining_lines(plane: &Plane) -> Vec<u32> {
    let n = plane.size();
    let mut t = vec![u32::MAX; n * n];
    for l in 0..n {
        let on = plane.on(l);
        for &a in on {
            for &b in on {
                t[a as usize * n + b as usize] = l as u32;
            }
        }
    }
    t
}

fn is_arc(plane: &Plane, pts: &[u32]) -> bool {
    let mut counts = Vec::new();
    plane.line_counts(pts, &mut counts);
    counts.iter().all(|&c| c <= 2)
}

/// All k-arcs containing the fundamental quadrangle, the extra points in increasing order.
pub fn arcs_through_quadrangle(plane: &Plane, k: usize) -> Vec<Vec<u32>> {
    fn rec(
        plane: &Plane,
        join: &[u32],
        counts: &mut [u16],
        pts: &mut Vec<u32>,
        start: u32,
        k: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pts.len() == k {
            out.push(pts.clone());
            return;
        }
        let n = plane.size();
        for c in start..n as u32 {
            if pts.contains(&c)
                || pts
                    .iter()
                    .any(|&p| counts[join[p as usize * n + c as usize] as usize] >= 2)
            {
                continue;
            }
            for &l in plane.on(c as usize) {
                counts[l as usize] += 1;
            }
            pts.push(c);
            rec(plane, join, counts, pts, c + 1, k, out);
            pts.pop();
            for &l in plane.on(c as usize) {
                counts[l as usize] -= 1;
            }
        }
    }
    let join = joining_lines(plane);
    let mut pts = quadrangle(plane.field()).to_vec();
    let mut counts = Vec::new();
    plane.line_counts(&pts, &mut counts);
    let mut out = Vec::new();
    rec(plane, &join, &mut counts, &mut pts, 0, k, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcClass {
    /// Entry s counts points off the arc lying on exactly s secants.
    pub fingerprint: Vec<u64>,
    pub count: usize,
    pub representative: Vec<String>,
}

/// Groups arcs by a projectively invariant fingerprint.
pub fn arc_classes(plane: &Plane, arcs: &[Vec<u32>]) -> Result<Vec<ArcClass>> {
    let join = joining_lines(plane);
    let n = plane.size();
    let mut groups: BTreeMap<Vec<u64>, (usize, &Vec<u32>)> = BTreeMap::new();
    for arc in arcs {
        let mut fp = vec![0u64; arc.len() / 2 + 1];
        for p in 0..n as u32 {
            if arc.contains(&p) {
                continue;
            }
            let mut lines: Vec<u32> = arc
                .iter()
                .map(|&a| join[p as usize * n + a as usize])
                .collect();
            lines.sort_unstable();
            lines.dedup();
            fp[arc.len() - lines.len()] += 1;
        }
        groups.entry(fp).or_insert((0, arc)).0 += 1;
    }
    groups
        .into_iter()
        .map(|(fingerprint, (count, rep))| {
            Ok(ArcClass {
                fingerprint,
                count,
                representative: PointSet::from_indices(plane.field(), rep)?.to_strings(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeCertificate {
    pub arcs_checked: u64,
    pub extensions_checked: u64,
    pub target: u64,
    pub target_attained: bool,
    pub values_seen: Vec<u64>,
    pub classes: Vec<ArcClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
}

/// Extends each 8-arc by every pair of further points and reports whether any
/// resulting 10-set in PG(2,9) has `u_0 = 34`.
pub fn max_value_probe(plane: &Plane, arcs: &[Vec<u32>]) -> Result<ProbeCertificate> {
    require_q9(plane)?;
    if arcs.is_empty() {
        return Err(Error::MissingArcRepresentatives);
    }
    let q = plane.q() as u64;
    let target = q * (q - 1) / 2 - 2;
    let n = plane.size();
    let join = joining_lines(plane);
    let mut counts = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut extensions = 0u64;
    let mut counterexample = None;
    for arc in arcs {
        if arc.len() != 8 || !is_arc(plane, arc) {
            return Err(Error::Degenerate("representative is not an 8-arc".into()));
        }
        let base = plane.non_hitting(arc, &mut counts);
        let outside: Vec<u32> = (0..n as u32).filter(|p| !arc.contains(p)).collect();
        // Lines through each outside point that miss the arc.
        let empty_through: Vec<u64> = outside
            .iter()
            .map(|&p| {
                plane
                    .on(p as usize)
                    .iter()
                    .filter(|&&l| counts[l as usize] == 0)
                    .count() as u64
            })
            .collect();
        for i in 0..outside.len() {
            for j in i + 1..outside.len() {
                let l = join[outside[i] as usize * n + outside[j] as usize];
                let shared = (counts[l as usize] == 0) as u64;
                let u0 = base + shared - empty_through[i] - empty_through[j];
                extensions += 1;
                seen.insert(u0);
                if u0 == target && counterexample.is_none() {
                    let mut pts = arc.clone();
                    pts.extend([outside[i], outside[j]]);
                    let set = PointSet::from_indices(plane.field(), &pts)?;
                    check_u0(&set, u0, "probe extension")?;
                    counterexample = Some(set.to_strings());
                }
            }
        }
    }
    Ok(ProbeCertificate {
        arcs_checked: arcs.len() as u64,
        extensions_checked: extensions,
        target,
        target_attained: counterexample.is_some(),
        values_seen: seen.into_iter().collect(),
        classes: arc_classes(plane, arcs)?,
        counterexample,
    })
}

/// Reads arcs written one per line as whitespace-separated `(x:y:z)` points.
pub fn parse_arcs(field: &Arc<Field>, text: &str) -> Result<Vec<Vec<u32>>> {
    let q = field.order();
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| parse_triple(field, t).map(|p| p.index(q) as u32))
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheckReport {
    pub checked: u64,
    pub degree_at_most_3: u64,
    pub degree_4: u64,
}

/// Checks the low-degree relations among `u_0..u_4`, the bounds
/// `3u_0 ≥ q(q-2)` (degree ≤ 3) and `4u_0 ≥ q²-3q+2u_3` (degree ≤ 4), and
/// `u_0 ≥ (n-1)(q+1-n)` for every degree n. Any failure is an error.
pub fn degree_bound_checks(dists: &[IntersectionDistribution]) -> Result<DegreeCheckReport> {
    let mut report = DegreeCheckReport::default();
    for d in dists {
        let d = match d.kind() {
            Kind::Set => d.clone(),
            Kind::Poly => d.convert()?,
        };
        let q = d.q() as i128;
        let u = |i: usize| d.get(i) as i128;
        let n = d.degree()? as i128;
        let fail = |what: &str| {
            Err(Error::CertificationFailed(format!(
                "{what} fails for q={q}, u={:?}",
                d.counts()
            )))
        };
        if u(0) < (n - 1) * (q + 1 - n) {
            return fail("u0 >= (n-1)(q+1-n)");
        }
        if n <= 3 {
            report.degree_at_most_3 += 1;
            if u(3) != q * (q - 1) / 2 - u(0) {
                return fail("u3 = q(q-1)/2 - u0");
            }
            if 2 * u(1) != 3 * q * q - q + 2 - 6 * u(0) {
                return fail("u1 = (3q^2-q+2)/2 - 3u0");
            }
            if u(2) != 3 * u(0) + 2 * q - q * q {
                return fail("u2 = 3u0 + 2q - q^2");
            }
            if 3 * u(0) < q * (q - 2) {
                return fail("u0 >= q(q-2)/3");
            }
        }
        if n <= 4 {
            if n == 4 {
                report.degree_4 += 1;
            }
            if 3 * u(4) != q * (q - 1) / 2 - u(3) - u(0) {
                return fail("u4 = (q(q-1)/2 - u3 - u0)/3");
            }
            if 4 * u(0) < q * q - 3 * q + 2 * u(3) {
                return fail("u0 >= (q^2-3q+2u3)/4");
            }
        }
        report.checked += 1;
    }
    Ok(report)
}

/// Graphs of `x^3 + ax^2 + bx` and `x^4 + ax^3 + bx^2` for all a, b.
pub fn low_degree_distributions(field: &Arc<Field>) -> Vec<IntersectionDistribution> {
    let mut out = Vec::new();
    for a in field.elements() {
        for b in field.elements() {
            let cubic = Poly::new(field, vec![Elem::ZERO, b, a, Elem::ONE]);
            let quartic = Poly::new(field, vec![Elem::ZERO, Elem::ZERO, b, a, Elem::ONE]);
            out.push(poly_distribution(&cubic.reduce_functional()));
            out.push(poly_distribution(&quartic.reduce_functional()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::field_of_order;

    #[test]
    fn lower_entries_examples() {
        let vals = |q| {
            lower_entries(&field_of_order(q).unwrap())
                .unwrap()
                .entries
                .iter()
                .map(|e| e.0)
                .collect::<Vec<_>>()
        };
        assert_eq!(vals(7), vec![0, 6, 10, 11, 12]);
        assert_eq!(vals(9), vec![0, 8, 14, 15, 18]);
        assert_eq!(vals(17), vec![0, 16, 30, 31, 42, 43, 44, 45, 52]);
        assert_eq!(
            lower_entries(&field_of_order(5).unwrap()).unwrap_err(),
            Error::TooSmallForClaim { min: 7 }
        );
        let g = lower_entries(&field_of_order(9).unwrap()).unwrap().gaps;
        assert_eq!(g, vec![[1, 7], [9, 13], [16, 17]]);
    }

    #[test]
    fn construction_values_small() {
        let vals = |q| {
            let mut v: Vec<u64> = construction_values(&field_of_order(q).unwrap())
                .unwrap()
                .iter()
                .map(|c| c.u0)
                .collect();
            v.dedup();
            v
        };
        assert_eq!(vals(7), vec![0, 6, 10, 11, 12, 13, 14, 15, 16, 17, 18]);
        assert_eq!(vals(8), vec![0, 7, 12, 13, 15, 16, 17, 18, 19, 21, 22]);
        let c9 = construction_values(&field_of_order(9).unwrap()).unwrap();
        assert!(c9
            .iter()
            .any(|c| c.u0 == 24 && c.source == "TwoLinesExcl t=0"));
    }

    #[test]
    fn exhaustive_tiny() {
        for (q, want) in [
            (2u64, vec![0, 1]),
            (3, vec![0, 2, 3]),
            (4, vec![0, 3, 4, 5, 6]),
        ] {
            let f = field_of_order(q).unwrap();
            let r = exhaustive_spectrum(&f).unwrap();
            assert_eq!(r.values(), want);
            r.verify(&f).unwrap();
        }
        assert_eq!(
            exhaustive_spectrum(&field_of_order(7).unwrap()).unwrap_err(),
            Error::TooLarge { q: 7, limit: 5 }
        );
    }

    #[test]
    fn search_is_worker_independent() {
        let f = field_of_order(7).unwrap();
        let plane = Plane::new(&f).unwrap();
        let cfg = |workers| SearchConfig {
            trials: 20_000,
            seed: 3,
            fix_quadrangle: true,
            workers,
        };
        let a = random_search(&plane, &cfg(1)).unwrap();
        let b = random_search(&plane, &cfg(4)).unwrap();
        assert_eq!(a, b);
        let lc = |workers| LocalConfig {
            restarts: 8,
            steps: 200,
            seed: 3,
            workers,
        };
        assert_eq!(
            local_search(&plane, &lc(1)).unwrap(),
            local_search(&plane, &lc(3)).unwrap()
        );
    }

    #[test]
    fn probe_rejects_bad_input() {
        let f9 = field_of_order(9).unwrap();
        let plane = Plane::new(&f9).unwrap();
        assert_eq!(
            max_value_probe(&plane, &[]).unwrap_err(),
            Error::MissingArcRepresentatives
        );
        let plane7 = Plane::new(&field_of_order(7).unwrap()).unwrap();
        assert!(matches!(
            max_value_probe(&plane7, &[vec![0; 8]]),
            Err(Error::ParameterOutOfRange(_))
        ));
        let (u0, conic) = arc_value(&f9).unwrap();
        assert_eq!(u0, 36);
        let mut ten = conic.indices();
        assert!(is_arc(&plane, &ten));
        ten.truncate(8);
        let cert = max_value_probe(&plane, &[ten]).unwrap();
        assert!(cert.values_seen.contains(&36));
        assert_eq!(cert.extensions_checked, 83 * 82 / 2);
    }

    #[test]
    fn degree_relations_hold_for_low_degree_graphs() {
        for q in [3u64, 4, 5, 7, 8, 9] {
            let f = field_of_order(q).unwrap();
            let r = degree_bound_checks(&low_degree_distributions(&f)).unwrap();
            assert_eq!(r.checked, 2 * q * q);
        }
        let f = field_of_order(7).unwrap();
        let conic = set_distribution(&arc_value(&f).unwrap().1).unwrap();
        assert_eq!(conic.non_hitting_index(), 21);
        degree_bound_checks(&[conic]).unwrap();
    }
}
