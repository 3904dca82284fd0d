//! Finite-horizon witness searches for sensitivity, recurrence and pair
//! behaviour on subshifts represented by a long host word.
//!
//! A point of the subshift is a host offset `p`, standing for `σ^p host`.
//! Two points at offset `p`, `q` are `δ`-separated at time `k` when their
//! length-`D` factors at `p + k`, `q + k` differ, where `D` is the least `n`
//! with `2^{-n} <= δ`. Offsets are only used while every factor a decision
//! reads lies inside the host.

use std::fmt;

use thiserror::Error;

use crate::ratio::{format_ratio, Rational};
use crate::setcalc::{lbd1_witness, thick_witness, upper_banach_density, DensityEstimate, Family, SetError, WindowedSet};
use crate::shiftspace::{distance_after, hitting_set, occurrences, visit_set, Cylinder, Distance, ShiftError, Window, Word};
use crate::verdict::{Evidence, Verdict, VerdictKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SensError {
    #[error("cylinder empty in subshift: {0} never occurs in the host")]
    CylinderEmpty(String),
    #[error("arity must be at least 2, got {0}")]
    BadArity(usize),
    #[error("targets must share one positive length")]
    RaggedTargets,
    #[error("targets of radius {radius} cannot decide closeness below eps (need {needed} symbols)")]
    TargetsTooShort { needed: usize, radius: usize },
    #[error("threshold must be positive")]
    ZeroThreshold,
    #[error("index set F ∩ [1, {l}] is empty")]
    EmptyIndexSet { l: usize },
    #[error("index set is only known below {horizon}, cannot read F ∩ [1, {l}]")]
    IndexSetTooShort { l: usize, horizon: usize },
    #[error("lockstep product needs one cylinder per coordinate ({hosts} hosts, {cylinders} cylinders)")]
    ProductMismatch { hosts: usize, cylinders: usize },
    #[error("no sample offsets supplied")]
    NoSamples,
    #[error("bad run-coverage parameters: n={n}, L={min_len}, word length {len}")]
    BadCoverage { n: usize, min_len: usize, len: usize },
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Explicit limits on a search; recorded with every result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    /// Largest time offset tried.
    pub max_m: usize,
    /// Only the first `max_offsets` occurrences of the cylinder are used.
    pub max_offsets: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_m: 64, max_offsets: 4096 }
    }
}

impl fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max_m={} max_offsets={}", self.max_m, self.max_offsets)
    }
}

/// Target points `x_1, ..., x_n` (their first `radius` symbols) inside the
/// subshift generated by `host`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSpec {
    host: Word,
    targets: Vec<Word>,
    essential: bool,
}

impl TupleSpec {
    pub fn new(host: Word, targets: Vec<Word>) -> Result<Self, SensError> {
        if targets.len() < 2 {
            return Err(SensError::BadArity(targets.len()));
        }
        let radius = targets[0].len();
        if radius == 0 || targets.iter().any(|t| t.len() != radius) {
            return Err(SensError::RaggedTargets);
        }
        if let Some(t) = targets.iter().find(|t| t.alphabet() != host.alphabet()) {
            return Err(ShiftError::AlphabetMismatch { left: host.alphabet(), right: t.alphabet() }.into());
        }
        let essential = targets.iter().enumerate().all(|(i, a)| targets[i + 1..].iter().all(|b| a != b));
        Ok(TupleSpec { host, targets, essential })
    }

    pub fn host(&self) -> &Word {
        &self.host
    }

    pub fn targets(&self) -> &[Word] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn radius(&self) -> usize {
        self.targets[0].len()
    }

    /// Pairwise distinct targets.
    pub fn is_essential(&self) -> bool {
        self.essential
    }
}

/// Least `n` with `2^{-n} <= delta`; separation above `delta` means a
/// disagreement among the first `n` symbols.
pub fn separation_depth(delta: &Rational) -> Result<usize, SensError> {
    if *delta.numer() == 0 {
        return Err(SensError::ZeroThreshold);
    }
    Ok((0..).find(|&n| !Distance::Pow2(n as u32).exceeds(delta)).unwrap())
}

/// Least `j` with `2^{-j} < eps`; closeness below `eps` means agreement on
/// the first `j` symbols.
pub fn closeness_depth(eps: &Rational) -> Result<usize, SensError> {
    if *eps.numer() == 0 {
        return Err(SensError::ZeroThreshold);
    }
    Ok((0..).find(|&j| Distance::Pow2(j as u32).below(eps)).unwrap())
}

fn cylinder_offsets(host: &Word, u: &Cylinder, budget: &SearchBudget) -> Result<Vec<usize>, SensError> {
    if u.anchor() < 0 || u.pattern().alphabet() != host.alphabet() {
        return Err(SensError::CylinderEmpty(u.to_string()));
    }
    let anchor = u.anchor() as usize;
    let offsets: Vec<usize> = occurrences(host.symbols(), u.pattern().symbols())
        .into_iter()
        .filter(|&i| i >= anchor)
        .map(|i| i - anchor)
        .take(budget.max_offsets)
        .collect();
    if offsets.is_empty() {
        return Err(SensError::CylinderEmpty(u.to_string()));
    }
    Ok(offsets)
}

/// Searches `y_1, ..., y_n ∈ U` and `m ∈ [1, max_m]` with
/// `d(σ^m y_i, x_i) < eps` for every `i`. Smallest `m` wins, then the
/// smallest offset per coordinate.
pub fn sensitive_tuple_check(
    spec: &TupleSpec,
    u: &Cylinder,
    eps: &Rational,
    budget: &SearchBudget,
) -> Result<Verdict, SensError> {
    let host = spec.host();
    let offsets = cylinder_offsets(host, u, budget)?;
    let depth = closeness_depth(eps)?;
    if depth > spec.radius() {
        return Err(SensError::TargetsTooShort { needed: depth, radius: spec.radius() });
    }
    let len = host.len();
    let hits: Vec<Vec<bool>> = spec
        .targets()
        .iter()
        .map(|t| {
            let mut mark = vec![false; len + 1];
            if depth == 0 {
                mark.iter_mut().for_each(|b| *b = true);
            } else {
                for i in occurrences(host.symbols(), &t.symbols()[..depth]) {
                    mark[i] = true;
                }
            }
            mark
        })
        .collect();
    for m in 1..=budget.max_m {
        let mut points = Vec::with_capacity(spec.arity());
        for mark in &hits {
            let found = offsets.iter().copied().find(|&p| p + m + depth <= len && mark[p + m]);
            match found {
                Some(p) => points.push(p),
                None => break,
            }
        }
        if points.len() == spec.arity() {
            return Ok(Verdict::witnessed(Evidence::Offsets { m, points }, budget.max_m));
        }
    }
    Ok(Verdict::unknown(budget.max_m))
}

/// Pair version of [`sensitive_tuple_check`]: `(x_1, x_2)` approached from
/// within `U` by a common iterate. Regional proximality of a pair has the
/// same finite-scale form.
pub fn regionally_proximal_check(
    spec: &TupleSpec,
    u: &Cylinder,
    eps: &Rational,
    budget: &SearchBudget,
) -> Result<Verdict, SensError> {
    if spec.arity() != 2 {
        return Err(SensError::BadArity(spec.arity()));
    }
    sensitive_tuple_check(spec, u, eps, budget)
}

/// Outcome of a broken-sensitivity search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub verdict: Verdict,
    pub m: Option<usize>,
    pub points: Vec<usize>,
    /// `m + (F ∩ [1, l])`; empty with horizon 1 when nothing was found.
    pub checked: WindowedSet,
    pub delta: Rational,
    /// Least pairwise distance over `checked`.
    pub min_separation: Option<Distance>,
    pub budget: SearchBudget,
}

impl WitnessReport {
    /// `key=value` lines.
    pub fn to_record(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
        format!(
            "verdict={}\nm={}\npoints={}\nchecked={}\ndelta={}\nmin_separation={}\nbudget={}\n",
            self.verdict.kind,
            opt(self.m.map(|m| m.to_string())),
            join(&self.points),
            join(self.checked.elements()),
            format_ratio(&self.delta),
            opt(self.min_separation.map(|d| d.to_string())),
            self.budget,
        )
    }
}

/// Parameters of one broken-sensitivity question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenQuery<'a> {
    pub host: &'a Word,
    pub n: usize,
    pub delta: Rational,
    pub f: &'a WindowedSet,
    pub l: usize,
    pub u: &'a Cylinder,
}

fn index_set(f: &WindowedSet, l: usize) -> Result<Vec<usize>, SensError> {
    if l >= f.horizon() {
        return Err(SensError::IndexSetTooShort { l, horizon: f.horizon() });
    }
    let k: Vec<usize> = f.elements().iter().copied().filter(|&e| (1..=l).contains(&e)).collect();
    if k.is_empty() {
        return Err(SensError::EmptyIndexSet { l });
    }
    Ok(k)
}

struct Separation<'a> {
    symbols: &'a [u8],
    depth: usize,
}

impl Separation<'_> {
    fn at(&self, p: usize, q: usize, k: usize) -> bool {
        self.symbols[p + k..p + k + self.depth] != self.symbols[q + k..q + k + self.depth]
    }
}

/// Lexicographically least increasing tuple from `candidates` whose members
/// are pairwise related by `sep`.
fn least_clique(candidates: &[usize], n: usize, sep: &dyn Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn extend(c: &[usize], from: usize, n: usize, acc: &mut Vec<usize>, sep: &dyn Fn(usize, usize) -> bool) -> bool {
        if acc.len() == n {
            return true;
        }
        for idx in from..c.len() {
            let p = c[idx];
            if acc.iter().all(|&q| sep(q, p)) {
                acc.push(p);
                if extend(c, idx + 1, n, acc, sep) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::with_capacity(n);
    extend(candidates, 0, n, &mut acc, sep).then_some(acc)
}

/// Searches `m ∈ [0, max_m]` and `n` points of `U` whose pairwise distances
/// exceed `delta` at every `k ∈ m + (F ∩ [1, l])`. Smallest `m` first, then
/// the lexicographically least offset tuple.
pub fn broken_sensitivity_witness(q: &BrokenQuery<'_>, budget: &SearchBudget) -> Result<WitnessReport, SensError> {
    if q.n < 2 {
        return Err(SensError::BadArity(q.n));
    }
    let ks = index_set(q.f, q.l)?;
    let depth = separation_depth(&q.delta)?;
    let offsets = cylinder_offsets(q.host, q.u, budget)?;
    let kmax = *ks.last().unwrap();
    let len = q.host.len();
    let sep = Separation { symbols: q.host.symbols(), depth };
    for m in 0..=budget.max_m {
        let usable: Vec<usize> = offsets.iter().copied().filter(|&p| p + m + kmax + depth <= len).collect();
        if usable.len() < q.n {
            continue;
        }
        let related = |a: usize, b: usize| ks.iter().all(|&k| sep.at(a, b, m + k));
        if let Some(points) = least_clique(&usable, q.n, &related) {
            return witnessed_report(q, &ks, m, points, budget);
        }
    }
    Ok(WitnessReport {
        verdict: Verdict::unknown(budget.max_m),
        m: None,
        points: Vec::new(),
        checked: WindowedSet::empty(1)?,
        delta: q.delta,
        min_separation: None,
        budget: *budget,
    })
}

fn witnessed_report(
    q: &BrokenQuery<'_>,
    ks: &[usize],
    m: usize,
    points: Vec<usize>,
    budget: &SearchBudget,
) -> Result<WitnessReport, SensError> {
    let times: Vec<usize> = ks.iter().map(|&k| m + k).collect();
    let checked = WindowedSet::new(times.clone(), m + ks.last().unwrap() + 1)?;
    let mut min_sep: Option<Distance> = None;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            for &t in &times {
                let d = pair_distance(q.host, a, b, t)?;
                min_sep = Some(min_sep.map_or(d, |cur| cur.min(d)));
            }
        }
    }
    Ok(WitnessReport {
        verdict: Verdict::witnessed(Evidence::Offsets { m, points: points.clone() }, budget.max_m),
        m: Some(m),
        points,
        checked,
        delta: q.delta,
        min_separation: min_sep,
        budget: *budget,
    })
}

/// `d(σ^{a+t} host, σ^{b+t} host)` on the shared range.
fn pair_distance(host: &Word, a: usize, b: usize, t: usize) -> Result<Distance, SensError> {
    let x = host.shift(a)?;
    let y = host.shift(b)?;
    let (x, y) = trim_to_common(&x, &y);
    Ok(distance_after(&x, &y, t)?.distance)
}

fn trim_to_common(x: &Word, y: &Word) -> (Word, Word) {
    let n = x.len().min(y.len());
    (x.factor(0, n), y.factor(0, n))
}

/// Re-reads the host at the reported offsets and re-evaluates the strict
/// separation condition with the shift metric.
pub fn verify_witness(q: &BrokenQuery<'_>, report: &WitnessReport) -> Result<bool, SensError> {
    let Some(m) = report.m else { return Ok(false) };
    if report.points.len() != q.n {
        return Ok(false);
    }
    if report.points.iter().any(|&p| !in_cylinder_at(q.host, q.u, p)) {
        return Ok(false);
    }
    let ks = index_set(q.f, q.l)?;
    let depth = separation_depth(&q.delta)?;
    for (i, &a) in report.points.iter().enumerate() {
        for &b in &report.points[i + 1..] {
            for &k in &ks {
                let t = m + k;
                if a.max(b) + t + depth > q.host.len() {
                    return Ok(false);
                }
                if !pair_distance(q.host, a, b, t)?.exceeds(&q.delta) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn in_cylinder_at(host: &Word, u: &Cylinder, p: usize) -> bool {
    host.shift(p).ok().is_some_and(|x| crate::shiftspace::in_cylinder(&x, u).unwrap_or(false))
}

/// Run `{s, s+1, ..., s+k}` of separated times with `s ∈ [1, max_m + 1]`,
/// found by scanning the separation set of every candidate tuple. Reports
/// `m = s - 1` so results line up with the broken search over `F = N`.
pub fn blockily_thick_witness(
    host: &Word,
    n: usize,
    delta: &Rational,
    k: usize,
    u: &Cylinder,
    budget: &SearchBudget,
) -> Result<Verdict, SensError> {
    if n < 2 {
        return Err(SensError::BadArity(n));
    }
    let depth = separation_depth(delta)?;
    let offsets = cylinder_offsets(host, u, budget)?;
    let run = k + 1;
    let last_start = budget.max_m + 1;
    let len = host.len();
    let sep = Separation { symbols: host.symbols(), depth };

    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut tuple = Vec::with_capacity(n);
    enumerate_tuples(&offsets, n, 0, &mut tuple, &mut |t: &[usize]| {
        let top = *t.last().unwrap();
        // times s..s+k with top + s + k + depth <= len
        let Some(reach) = len.checked_sub(top + depth + k) else { return };
        let limit = last_start.min(reach);
        let mut streak = 0usize;
        for time in 1..limit + run {
            let all = (0..t.len()).all(|i| (i + 1..t.len()).all(|j| sep.at(t[i], t[j], time)));
            streak = if all { streak + 1 } else { 0 };
            if streak == run {
                let s = time + 1 - run;
                if best.as_ref().is_none_or(|(bs, bt)| (s, t) < (*bs, &bt[..])) {
                    best = Some((s, t.to_vec()));
                }
                return;
            }
        }
    });
    Ok(match best {
        Some((s, points)) => Verdict::witnessed(Evidence::Offsets { m: s - 1, points }, budget.max_m),
        None => Verdict::unknown(budget.max_m),
    })
}

fn enumerate_tuples(c: &[usize], n: usize, from: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == n {
        f(acc);
        return;
    }
    for idx in from..c.len() {
        acc.push(c[idx]);
        enumerate_tuples(c, n, idx + 1, acc, f);
        acc.pop();
    }
}

/// `N(x, U)` for the lockstep product `(x_1, ..., x_n)` and product
/// cylinder `U_1 × ... × U_n`, then the family witness on it.
pub fn f_recurrence_check(
    hosts: &[Word],
    cylinders: &[Cylinder],
    family: &Family,
    horizon: usize,
) -> Result<(WindowedSet, Verdict), SensError> {
    if hosts.is_empty() || hosts.len() != cylinders.len() {
        return Err(SensError::ProductMismatch { hosts: hosts.len(), cylinders: cylinders.len() });
    }
    let mut visits = hosts.iter().zip(cylinders).map(|(x, c)| visit_set(x, c, horizon));
    let mut n = visits.next().unwrap()?;
    for v in visits {
        n = n.intersection(&v?);
    }
    let verdict = family.witness(&n)?;
    Ok((n, verdict))
}

/// Orbit-distance evidence for a pair of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    pub eps: Rational,
    pub horizon: usize,
    /// `d(σ^k x, σ^k y)` for `k < H`.
    pub distances: Vec<Distance>,
    pub min_distance: Distance,
    pub argmin: usize,
    pub tail_start: usize,
    pub tail_max_distance: Distance,
    pub tail_argmax: usize,
    /// `{k < H : d(σ^k x, σ^k y) >= eps}`.
    pub bad_set: WindowedSet,
    pub bad_set_ubd: DensityEstimate,
    /// Readings that were `0` only because the windows ran out.
    pub range_limited: usize,
}

impl PairClass {
    /// Some distance below `eps`.
    pub fn proximal_evidence(&self) -> bool {
        self.min_distance.below(&self.eps)
    }

    /// Every tail distance below `eps`.
    pub fn asymptotic_evidence(&self) -> bool {
        self.tail_max_distance.below(&self.eps)
    }
}

/// Distances `d(σ^k x, σ^k y)` for `k < H`, their tail over `[tail_start, H)`
/// and the upper density at window `w` of the times at distance `>= eps`.
pub fn pair_classify<W: Window>(
    x: &W,
    y: &W,
    eps: &Rational,
    w: usize,
    horizon: usize,
    tail_start: usize,
) -> Result<PairClass, SensError> {
    if *eps.numer() == 0 {
        return Err(SensError::ZeroThreshold);
    }
    if tail_start >= horizon {
        return Err(SetError::WindowTooLong { len: tail_start + 1, horizon }.into());
    }
    let mut distances = Vec::with_capacity(horizon);
    let mut range_limited = 0;
    for k in 0..horizon {
        let r = distance_after(x, y, k)?;
        range_limited += usize::from(r.range_limited);
        distances.push(r.distance);
    }
    let (argmin, min_distance) = extremum(&distances, 0, |a, b| a < b);
    let (tail_argmax, tail_max_distance) = extremum(&distances, tail_start, |a, b| a > b);
    let bad_set = WindowedSet::from_predicate(horizon, |k| !distances[k].below(eps))?;
    let bad_set_ubd = upper_banach_density(&bad_set, w)?;
    Ok(PairClass {
        eps: *eps,
        horizon,
        distances,
        min_distance,
        argmin,
        tail_start,
        tail_max_distance,
        tail_argmax,
        bad_set,
        bad_set_ubd,
        range_limited,
    })
}

/// First index from `start` whose value beats every other under `better`.
fn extremum(values: &[Distance], start: usize, better: impl Fn(&Distance, &Distance) -> bool) -> (usize, Distance) {
    let mut best = (start, values[start]);
    for (k, d) in values.iter().enumerate().skip(start + 1) {
        if better(d, &best.1) {
            best = (k, *d);
        }
    }
    best
}

/// `max_{k ∈ [tail_start, H)} min_{i<j} d(σ^k x_i, σ^k x_j)` with the first
/// maximising `k`.
pub fn limsup_separation<W: Window>(
    points: &[W],
    horizon: usize,
    tail_start: usize,
) -> Result<(Distance, usize), SensError> {
    if points.len() < 2 {
        return Err(SensError::BadArity(points.len()));
    }
    if tail_start >= horizon {
        return Err(SetError::WindowTooLong { len: tail_start + 1, horizon }.into());
    }
    let mut best: Option<(Distance, usize)> = None;
    for k in tail_start..horizon {
        let mut min = Distance::ONE;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                min = min.min(distance_after(a, b, k)?.distance);
            }
        }
        if best.is_none_or(|(d, _)| min > d) {
            best = Some((min, k));
        }
    }
    Ok(best.unwrap())
}

/// For each sampled offset `s`, `N(σ^s host, ⋃ candidate)` must have lower
/// density at least `1 - eps` at window `w`. Reports the first failure.
pub fn unique_pubd_recurrent_check(
    host: &Word,
    samples: &[usize],
    candidate: &[Cylinder],
    w: usize,
    eps: &Rational,
    horizon: usize,
) -> Result<Verdict, SensError> {
    if samples.is_empty() {
        return Err(SensError::NoSamples);
    }
    if candidate.is_empty() {
        return Err(SensError::ProductMismatch { hosts: 1, cylinders: 0 });
    }
    let mut tested = usize::MAX;
    for (index, &s) in samples.iter().enumerate() {
        let x = host.shift(s)?;
        let visits = candidate.iter().map(|c| visit_set(&x, c, horizon)).collect::<Result<Vec<_>, _>>()?;
        let h = visits.iter().map(|v| v.horizon()).min().unwrap();
        tested = tested.min(h);
        let n = WindowedSet::from_unsorted(
            visits.iter().flat_map(|v| v.elements().iter().copied()).filter(|&t| t < h),
            h,
        )?;
        if lbd1_witness(&n, w, *eps)?.kind != VerdictKind::Witnessed {
            return Ok(Verdict {
                kind: VerdictKind::UnknownAtHorizon,
                evidence: Some(Evidence::FailedSample { index }),
                horizon: h,
            });
        }
    }
    Ok(Verdict {
        kind: VerdictKind::Witnessed,
        evidence: Some(Evidence::Element(samples.len())),
        horizon: tested,
    })
}

/// `N([W1], [W2])` in the orbit closure of `host`, then a thick witness of
/// length `l`.
pub fn thickness_of_nuv(
    host: &Word,
    w1: &Word,
    w2: &Word,
    l: usize,
    horizon: usize,
) -> Result<(WindowedSet, Verdict), SensError> {
    let u = Cylinder::at_origin(w1.clone())?;
    let v = Cylinder::at_origin(w2.clone())?;
    if occurrences(host.symbols(), w1.symbols()).is_empty() {
        return Err(SensError::CylinderEmpty(u.to_string()));
    }
    if occurrences(host.symbols(), w2.symbols()).is_empty() {
        return Err(SensError::CylinderEmpty(v.to_string()));
    }
    let n = hitting_set(host, &u, &v, horizon)?;
    let verdict = thick_witness(&n, l)?;
    Ok((n, verdict))
}

/// Minimum constant-factor fraction and the window attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunCoverage {
    pub value: Rational,
    pub start: usize,
    pub len: usize,
}

/// `min` over windows `w[s..s+l)` with `l >= L` of the share of positions
/// `i ∈ [s, s + l - n]` whose factor `w[i..i+n)` is `0^n` or `1^n`.
///
/// Only `l < 2L` is scanned: any longer window splits into consecutive
/// windows with lengths in `[L, 2L)` whose position sets partition its own,
/// so its ratio is a mediant of theirs and never smaller than their minimum.
pub fn run_coverage(w: &Word, n: usize, min_len: usize) -> Result<RunCoverage, SensError> {
    let len = w.len();
    if n == 0 || min_len < n || min_len > len {
        return Err(SensError::BadCoverage { n, min_len, len });
    }
    let positions = len - n + 1;
    let s = w.symbols();
    // run[i]: length of the constant run starting at i
    let mut run = vec![1usize; len];
    for i in (0..len - 1).rev() {
        if s[i] == s[i + 1] {
            run[i] = run[i + 1] + 1;
        }
    }
    let mut prefix = vec![0usize; positions + 1];
    for i in 0..positions {
        prefix[i + 1] = prefix[i] + usize::from(run[i] >= n && (s[i] == 0 || s[i] == 1));
    }
    let mut best: Option<(usize, usize, usize, usize)> = None; // (count, p, start, l)
    for l in min_len..=len.min(2 * min_len) {
        let p = l - n + 1;
        for start in 0..=len - l {
            let c = prefix[start + p] - prefix[start];
            // c / p < bc / bp
            if best.is_none_or(|(bc, bp, _, _)| c * bp < bc * p) {
                best = Some((c, p, start, l));
            }
        }
    }
    let (c, p, start, l) = best.unwrap();
    Ok(RunCoverage { value: Rational::new(c as u64, p as u64), start, len: l })
}
