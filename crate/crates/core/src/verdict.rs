use std::fmt;

/// Outcome of a semi-decidable question posed at a finite horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Witnessed,
    Refuted,
    UnknownAtHorizon,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Witnessed => "Witnessed",
            VerdictKind::Refuted => "Refuted",
            VerdictKind::UnknownAtHorizon => "UnknownAtHorizon",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Finite evidence backing a verdict. Each payload can be re-checked against
/// the input it was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Evidence {
    /// `[start, start + len)` is contained in the set.
    Interval { start: usize, len: usize },
    /// `[start, start + len)` misses the set entirely.
    Gap { start: usize, len: usize },
    /// Window `[start, start + len)` holding `count` elements.
    Window { start: usize, len: usize, count: usize },
    /// An element found at or beyond the start of the tail.
    Element(usize),
    /// A common time `m` and host offsets of the witnessing points.
    Offsets { m: usize, points: Vec<usize> },
    /// Index of the first sample that failed a per-sample check.
    FailedSample { index: usize },
    /// Largest gap seen (syndetic evidence up to the horizon).
    MaxGap(usize),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Interval { start, len } => write!(f, "interval {start}+{len}"),
            Evidence::Gap { start, len } => write!(f, "gap {start}+{len}"),
            Evidence::Window { start, len, count } => write!(f, "window {start}+{len} count {count}"),
            Evidence::Element(e) => write!(f, "element {e}"),
            Evidence::Offsets { m, points } => {
                let pts: Vec<String> = points.iter().map(|p| p.to_string()).collect();
                write!(f, "m {m} points {}", pts.join(" "))
            }
            Evidence::FailedSample { index } => write!(f, "failed sample {index}"),
            Evidence::MaxGap(g) => write!(f, "max gap {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub evidence: Option<Evidence>,
    /// Horizon at which the question was posed.
    pub horizon: usize,
}

impl Verdict {
    pub fn witnessed(evidence: Evidence, horizon: usize) -> Self {
        Verdict { kind: VerdictKind::Witnessed, evidence: Some(evidence), horizon }
    }

    pub fn refuted(evidence: Evidence, horizon: usize) -> Self {
        Verdict { kind: VerdictKind::Refuted, evidence: Some(evidence), horizon }
    }

    pub fn unknown(horizon: usize) -> Self {
        Verdict { kind: VerdictKind::UnknownAtHorizon, evidence: None, horizon }
    }

    pub fn is_witnessed(&self) -> bool {
        self.kind == VerdictKind::Witnessed
    }
}
