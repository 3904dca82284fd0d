//! Finite truncations of subsets of `Z+` and the family calculus built on them.
//!
//! A [`WindowedSet`] is what a finite computation can know about a subset
//! of the non-negative integers: its elements below a horizon `H`. The
//! witness functions answer family-membership questions with a [`Verdict`]:
//! thick, lower-density-one and positive-density are tail properties and are
//! never refuted; only "syndetic with a named bound" admits a conclusive
//! finite counterexample.
//!
//! Gaps are counted as missing integers: consecutive elements `e < e'` leave
//! a gap of `e' - e - 1`. The leading gap (before the first element) counts,
//! the trailing gap is reported separately because the horizon may cut it.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;
use thiserror::Error;

use crate::ratio::{format_ratio, Rational};
use crate::verdict::{Evidence, Verdict};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("horizon must be positive")]
    ZeroHorizon,
    #[error("elements must be strictly increasing (violated at position {index})")]
    NotIncreasing { index: usize },
    #[error("element {element} is outside the horizon {horizon}")]
    OutOfHorizon { element: usize, horizon: usize },
    #[error("degenerate query: length {len} exceeds horizon {horizon}")]
    WindowTooLong { len: usize, horizon: usize },
    #[error("parameter `{0}` must be at least 1")]
    ZeroParameter(&'static str),
    #[error("eps must lie strictly between 0 and 1, got {0}")]
    EpsOutOfRange(String),
    #[error("broken union needs {needed} shift terms, got {got}")]
    TooFewTerms { needed: usize, got: usize },
    #[error("broken union overflows the horizon at n={n}: a_n + n = {end} >= {horizon}")]
    BrokenUnionOverflow { n: usize, end: usize, horizon: usize },
    #[error("malformed set file: {0}")]
    Parse(String),
}

/// Elements of a subset of `Z+` that lie below `horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WindowedSet {
    elements: Vec<usize>,
    horizon: usize,
}

impl WindowedSet {
    /// Validates that `elements` is strictly increasing and below `horizon`.
    pub fn new(elements: Vec<usize>, horizon: usize) -> Result<Self, SetError> {
        if horizon == 0 {
            return Err(SetError::ZeroHorizon);
        }
        for (index, pair) in elements.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(SetError::NotIncreasing { index: index + 1 });
            }
        }
        if let Some(&last) = elements.last() {
            if last >= horizon {
                return Err(SetError::OutOfHorizon { element: last, horizon });
            }
        }
        Ok(WindowedSet { elements, horizon })
    }

    /// Sorts and deduplicates; elements at or past the horizon are an error.
    pub fn from_unsorted<I: IntoIterator<Item = usize>>(
        items: I,
        horizon: usize,
    ) -> Result<Self, SetError> {
        let mut elements: Vec<usize> = items.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        Self::new(elements, horizon)
    }

    /// Keeps only the elements below `horizon`.
    pub fn truncated<I: IntoIterator<Item = usize>>(
        items: I,
        horizon: usize,
    ) -> Result<Self, SetError> {
        Self::from_unsorted(items.into_iter().filter(|&e| e < horizon), horizon)
    }

    pub fn full(horizon: usize) -> Result<Self, SetError> {
        Self::new((0..horizon).collect(), horizon)
    }

    pub fn empty(horizon: usize) -> Result<Self, SetError> {
        Self::new(Vec::new(), horizon)
    }

    pub fn from_predicate(horizon: usize, mut pred: impl FnMut(usize) -> bool) -> Result<Self, SetError> {
        Self::new((0..horizon).filter(|&t| pred(t)).collect(), horizon)
    }

    pub fn from_indicator(indicator: &[bool]) -> Result<Self, SetError> {
        let elements = indicator.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        Self::new(elements, indicator.len())
    }

    /// Each `t < horizon` is included independently with probability `fill`.
    pub fn random<R: Rng + ?Sized>(
        horizon: usize,
        fill: Rational,
        rng: &mut R,
    ) -> Result<Self, SetError> {
        let (p, q) = (*fill.numer(), *fill.denom());
        Self::from_predicate(horizon, |_| rng_below(rng, q) < p)
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, t: usize) -> bool {
        self.elements.binary_search(&t).is_ok()
    }

    pub fn indicator(&self) -> Vec<bool> {
        let mut out = vec![false; self.horizon];
        for &e in &self.elements {
            out[e] = true;
        }
        out
    }

    /// `[0, H) \ F`.
    pub fn complement(&self) -> WindowedSet {
        let ind = self.indicator();
        let elements = (0..self.horizon).filter(|&t| !ind[t]).collect();
        WindowedSet { elements, horizon: self.horizon }
    }

    /// Intersection, truncated to the smaller horizon.
    pub fn intersection(&self, other: &WindowedSet) -> WindowedSet {
        let horizon = self.horizon.min(other.horizon);
        let elements = self
            .elements
            .iter()
            .copied()
            .filter(|&e| e < horizon && other.contains(e))
            .collect();
        WindowedSet { elements, horizon }
    }

    /// `counts[t]` = number of elements below `t`, for `t` in `0..=H`.
    pub fn prefix_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.horizon + 1];
        let mut it = self.elements.iter().peekable();
        for t in 0..self.horizon {
            let hit = it.next_if(|&&e| e == t).is_some();
            counts[t + 1] = counts[t] + usize::from(hit);
        }
        counts
    }

    /// Number of elements in `[start, start + len)`.
    pub fn count_in(&self, start: usize, len: usize) -> usize {
        let lo = self.elements.partition_point(|&e| e < start);
        let hi = self.elements.partition_point(|&e| e < start + len);
        hi - lo
    }

    /// Maximal runs of consecutive elements as `(start, len)`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut iter = self.elements.iter().copied();
        let Some(first) = iter.next() else { return runs };
        let (mut start, mut prev) = (first, first);
        for e in iter {
            if e != prev + 1 {
                runs.push((start, prev - start + 1));
                start = e;
            }
            prev = e;
        }
        runs.push((start, prev - start + 1));
        runs
    }

    /// Maximal runs of absent integers inside `[0, H)` as `(start, len)`,
    /// including the leading and trailing ones.
    pub fn gaps(&self) -> Vec<(usize, usize)> {
        let mut gaps = Vec::new();
        let mut next = 0usize;
        for &e in &self.elements {
            if e > next {
                gaps.push((next, e - next));
            }
            next = e + 1;
        }
        if self.horizon > next {
            gaps.push((next, self.horizon - next));
        }
        gaps
    }

    /// The text format: `horizon=<H>` then space-separated elements.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        format!("horizon={}\n{}\n", self.horizon, body.join(" "))
    }
}

impl fmt::Display for WindowedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for WindowedSet {
    type Err = SetError;

    fn from_str(text: &str) -> Result<Self, SetError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| SetError::Parse("empty input".into()))?;
        let horizon = header
            .trim()
            .strip_prefix("horizon=")
            .ok_or_else(|| SetError::Parse(format!("expected `horizon=<H>`, got `{header}`")))?
            .parse::<usize>()
            .map_err(|e| SetError::Parse(format!("bad horizon: {e}")))?;
        let body = lines.next().unwrap_or("");
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(SetError::Parse(format!("unexpected trailing line `{extra}`")));
        }
        let elements = body
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|e| SetError::Parse(format!("bad element `{tok}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        WindowedSet::new(elements, horizon)
    }
}

fn rng_below<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    rng.gen_range(0..bound)
}

/// Extremal window density: `count / window_length` at `argwindow`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DensityEstimate {
    pub value: Rational,
    pub count: usize,
    pub window_length: usize,
    pub argwindow: usize,
}

impl fmt::Display for DensityEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (w={}, at m={})", format_ratio(&self.value), self.window_length, self.argwindow)
    }
}

/// Leading, interior and trailing gap data of a nonempty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapSummary {
    /// Largest of the leading gap and all interior gaps.
    pub max_gap: usize,
    pub leading: usize,
    /// Gap from the last element to the horizon; may be cut short.
    pub trailing_censored: usize,
}

/// Interval `[a, a + l) ⊆ F` with the smallest `a`, if any fits below `H`.
pub fn thick_witness(set: &WindowedSet, l: usize) -> Result<Verdict, SetError> {
    check_window(l, set.horizon)?;
    let found = set.runs().into_iter().find(|&(_, len)| len >= l);
    Ok(match found {
        Some((start, _)) => Verdict::witnessed(Evidence::Interval { start, len: l }, set.horizon),
        None => Verdict::unknown(set.horizon),
    })
}

/// `None` for the empty set.
pub fn syndetic_gap(set: &WindowedSet) -> Option<GapSummary> {
    let first = *set.elements.first()?;
    let last = *set.elements.last()?;
    let interior = set.elements.windows(2).map(|p| p[1] - p[0] - 1).max().unwrap_or(0);
    Some(GapSummary {
        max_gap: interior.max(first),
        leading: first,
        trailing_censored: set.horizon - 1 - last,
    })
}

/// Refuted iff some `{k, ..., k+N} ⊆ [0, H)` misses `F`; the smallest such
/// `k` is reported.
pub fn syndetic_witness(set: &WindowedSet, n: usize) -> Result<Verdict, SetError> {
    if n == 0 {
        return Err(SetError::ZeroParameter("N"));
    }
    let gaps = set.gaps();
    if let Some(&(start, _)) = gaps.iter().find(|&&(_, len)| len > n) {
        return Ok(Verdict::refuted(Evidence::Gap { start, len: n + 1 }, set.horizon));
    }
    let max_gap = gaps.iter().map(|&(_, len)| len).max().unwrap_or(0);
    Ok(Verdict::witnessed(Evidence::MaxGap(max_gap), set.horizon))
}

/// Witnessed by an interval `I ⊆ [0, H)` of length at least `max(l, N+1)` all
/// of whose length-`(N+1)` subwindows meet `F`.
pub fn ps_witness(set: &WindowedSet, n: usize, l: usize) -> Result<Verdict, SetError> {
    if n == 0 {
        return Err(SetError::ZeroParameter("N"));
    }
    if l == 0 {
        return Err(SetError::ZeroParameter("l"));
    }
    let h = set.horizon;
    if n + 1 > h {
        return Ok(Verdict::unknown(h));
    }
    let counts = set.prefix_counts();
    let starts = h - n;
    let mut run_start = 0usize;
    let mut run_len = 0usize;
    for k in 0..=starts {
        let good = k < starts && counts[k + n + 1] > counts[k];
        if good {
            if run_len == 0 {
                run_start = k;
            }
            run_len += 1;
        } else if run_len > 0 {
            if run_len + n >= l {
                let ev = Evidence::Interval { start: run_start, len: run_len + n };
                return Ok(Verdict::witnessed(ev, h));
            }
            run_len = 0;
        }
    }
    Ok(Verdict::unknown(h))
}

fn extremal_density(
    set: &WindowedSet,
    w: usize,
    better: impl Fn(usize, usize) -> bool,
) -> Result<DensityEstimate, SetError> {
    check_window(w, set.horizon)?;
    let counts = set.prefix_counts();
    let mut best_m = 0usize;
    let mut best = counts[w];
    for m in 1..=set.horizon - w {
        let c = counts[m + w] - counts[m];
        if better(c, best) {
            best = c;
            best_m = m;
        }
    }
    Ok(DensityEstimate {
        value: Ratio::new(best as u64, w as u64),
        count: best,
        window_length: w,
        argwindow: best_m,
    })
}

/// Exact maximum of `|F ∩ [m, m+w)| / w` over `m + w <= H`; ties go to the
/// smallest `m`.
pub fn upper_banach_density(set: &WindowedSet, w: usize) -> Result<DensityEstimate, SetError> {
    extremal_density(set, w, |c, best| c > best)
}

/// As [`upper_banach_density`] with the minimum.
pub fn lower_banach_density(set: &WindowedSet, w: usize) -> Result<DensityEstimate, SetError> {
    extremal_density(set, w, |c, best| c < best)
}

/// Witnessed when the lower density at window `w` is at least `1 - eps`.
pub fn lbd1_witness(set: &WindowedSet, w: usize, eps: Rational) -> Result<Verdict, SetError> {
    if eps == Ratio::from_integer(0) || eps >= Ratio::from_integer(1) {
        return Err(SetError::EpsOutOfRange(format_ratio(&eps)));
    }
    let lower = lower_banach_density(set, w)?;
    Ok(if lower.value >= Ratio::from_integer(1) - eps {
        Verdict::witnessed(density_evidence(&lower), set.horizon)
    } else {
        Verdict::unknown(set.horizon)
    })
}

/// Witnessed when the upper density at window `w` reaches `min_density`.
pub fn pubd_witness(set: &WindowedSet, w: usize, min_density: Rational) -> Result<Verdict, SetError> {
    if min_density == Ratio::from_integer(0) {
        return Err(SetError::ZeroParameter("min_density"));
    }
    let upper = upper_banach_density(set, w)?;
    Ok(if upper.value >= min_density {
        Verdict::witnessed(density_evidence(&upper), set.horizon)
    } else {
        Verdict::unknown(set.horizon)
    })
}

/// Finite evidence of infinitude: an element at or beyond `tail_start`.
pub fn inf_witness(set: &WindowedSet, tail_start: usize) -> Result<Verdict, SetError> {
    check_window(tail_start.max(1), set.horizon)?;
    Ok(match set.elements.iter().find(|&&e| e >= tail_start) {
        Some(&e) => Verdict::witnessed(Evidence::Element(e), set.horizon),
        None => Verdict::unknown(set.horizon),
    })
}

fn density_evidence(d: &DensityEstimate) -> Evidence {
    Evidence::Window { start: d.argwindow, len: d.window_length, count: d.count }
}

fn check_window(len: usize, horizon: usize) -> Result<(), SetError> {
    if len == 0 {
        return Err(SetError::ZeroParameter("window length"));
    }
    if len > horizon {
        return Err(SetError::WindowTooLong { len, horizon });
    }
    Ok(())
}

/// `⋃_{n=1..nmax} (a_n + (F' ∩ [1, n]))`, with `a` indexed from `a_1 = a[0]`.
pub fn broken_union(
    fprime: &WindowedSet,
    a: &[usize],
    nmax: usize,
    horizon: usize,
) -> Result<WindowedSet, SetError> {
    if nmax == 0 {
        return Err(SetError::ZeroParameter("nmax"));
    }
    if a.len() < nmax {
        return Err(SetError::TooFewTerms { needed: nmax, got: a.len() });
    }
    let mut out = Vec::new();
    for n in 1..=nmax {
        let shift = a[n - 1];
        let end = shift + n;
        if end >= horizon {
            return Err(SetError::BrokenUnionOverflow { n, end, horizon });
        }
        out.extend(fprime.elements.iter().filter(|&&e| (1..=n).contains(&e)).map(|&e| shift + e));
    }
    WindowedSet::from_unsorted(out, horizon)
}

/// A Furstenberg family together with the finite parameters of its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Infinite { tail_start: usize },
    Thick { l: usize },
    Syndetic { n: usize },
    PiecewiseSyndetic { n: usize, l: usize },
    PositiveUpperDensity { w: usize, min_density: Rational },
    LowerDensityOne { w: usize, eps: Rational },
}

impl Family {
    pub fn short_name(&self) -> &'static str {
        match self {
            Family::Infinite { .. } => "inf",
            Family::Thick { .. } => "t",
            Family::Syndetic { .. } => "s",
            Family::PiecewiseSyndetic { .. } => "ps",
            Family::PositiveUpperDensity { .. } => "pubd",
            Family::LowerDensityOne { .. } => "lbd1",
        }
    }

    /// Dispatches to the matching witness function.
    pub fn witness(&self, set: &WindowedSet) -> Result<Verdict, SetError> {
        match *self {
            Family::Infinite { tail_start } => inf_witness(set, tail_start),
            Family::Thick { l } => thick_witness(set, l),
            Family::Syndetic { n } => syndetic_witness(set, n),
            Family::PiecewiseSyndetic { n, l } => ps_witness(set, n, l),
            Family::PositiveUpperDensity { w, min_density } => pubd_witness(set, w, min_density),
            Family::LowerDensityOne { w, eps } => lbd1_witness(set, w, eps),
        }
    }
}

/// Upper and lower density for each window length in `schedule` that fits.
pub fn density_sweep(
    set: &WindowedSet,
    schedule: &[usize],
) -> Result<Vec<(DensityEstimate, DensityEstimate)>, SetError> {
    schedule
        .iter()
        .map(|&w| Ok((upper_banach_density(set, w)?, lower_banach_density(set, w)?)))
        .collect()
}

/// Powers of two from 1 up to `horizon`.
pub fn default_schedule(horizon: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |w| w.checked_mul(2)).take_while(|&w| w <= horizon).collect()
}
