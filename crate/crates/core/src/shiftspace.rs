//! Words, windows and cylinders over a finite alphabet, and the generators
//! for the concrete subshifts studied here.
//!
//! Points of a shift space are approximated by finite data:
//!
//! - a [`Word`] is a one-sided point `x_0 x_1 ... x_{L-1}`;
//! - a [`TwoSidedWindow`] carries an origin so that coordinates run from
//!   `-origin` to `len - origin - 1`.
//!
//! The metric is `d(x, y) = 2^{-n}` where `n` is the least `|i|` with
//! `x_i != y_i`. It is exact as a dyadic [`Distance`]; when two windows agree
//! on their whole shared range the reading is `0` and flagged as a lower
//! bound only.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ratio::Rational;
use crate::setcalc::{SetError, WindowedSet};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ShiftError {
    #[error("alphabet size must be between 2 and 255, got {0}")]
    BadAlphabet(usize),
    #[error("symbol {symbol} at index {index} is outside the alphabet 0..{q}")]
    SymbolOutOfAlphabet { symbol: u8, index: usize, q: u8 },
    #[error("alphabets differ: {left} vs {right}")]
    AlphabetMismatch { left: u8, right: u8 },
    #[error("empty word where a nonempty one is required")]
    EmptyWord,
    #[error("origin {origin} lies outside a window of length {len}")]
    OriginOutOfRange { origin: usize, len: usize },
    #[error("shift by {t} leaves nothing of a window with {available} symbols at or after the origin")]
    ShiftEmpty { t: usize, available: usize },
    #[error("windows do not share a coordinate range containing 0")]
    Misaligned,
    #[error("pattern at coordinates {lo}..{hi} is not covered by the window {wlo}..{whi}")]
    PatternNotCovered { lo: i64, hi: i64, wlo: i64, whi: i64 },
    #[error("operation needs a binary alphabet, got q={0}")]
    NotBinary(u8),
    #[error("length cap exceeded at level {level}: projected {projected} symbols, cap {cap}")]
    LengthCap { level: usize, projected: u128, cap: usize },
    #[error("bad cylinder literal `{0}` (expected `@<anchor>:<digits>`)")]
    BadCylinder(String),
    #[error("malformed sequence file: {0}")]
    Parse(String),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// A finite word over `{0, ..., q-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl Word {
    pub fn new(symbols: Vec<u8>, alphabet: usize) -> Result<Self, ShiftError> {
        if !(2..=255).contains(&alphabet) {
            return Err(ShiftError::BadAlphabet(alphabet));
        }
        let q = alphabet as u8;
        if let Some((index, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| s >= q) {
            return Err(ShiftError::SymbolOutOfAlphabet { symbol, index, q });
        }
        Ok(Word { symbols, alphabet: q })
    }

    pub fn binary(symbols: Vec<u8>) -> Result<Self, ShiftError> {
        Self::new(symbols, 2)
    }

    /// Parses contiguous decimal digits.
    pub fn from_digits(digits: &str, alphabet: usize) -> Result<Self, ShiftError> {
        let symbols = digits
            .bytes()
            .map(|b| {
                if b.is_ascii_digit() {
                    Ok(b - b'0')
                } else {
                    Err(ShiftError::Parse(format!("non-digit symbol `{}`", b as char)))
                }
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::new(symbols, alphabet)
    }

    pub fn constant(symbol: u8, len: usize, alphabet: usize) -> Result<Self, ShiftError> {
        Self::new(vec![symbol; len], alphabet)
    }

    pub fn to_digits(&self) -> String {
        self.symbols.iter().map(|&s| char::from(b'0' + s)).collect()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word, ShiftError> {
        if self.alphabet != other.alphabet {
            return Err(ShiftError::AlphabetMismatch { left: self.alphabet, right: other.alphabet });
        }
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Word { symbols, alphabet: self.alphabet })
    }

    /// `σ^t`: drops the first `t` symbols.
    pub fn shift(&self, t: usize) -> Result<Word, ShiftError> {
        if t >= self.len() {
            return Err(ShiftError::ShiftEmpty { t, available: self.len() });
        }
        Ok(Word { symbols: self.symbols[t..].to_vec(), alphabet: self.alphabet })
    }

    /// Symbolwise complement on the binary alphabet.
    pub fn flip(&self) -> Result<Word, ShiftError> {
        if self.alphabet != 2 {
            return Err(ShiftError::NotBinary(self.alphabet));
        }
        Ok(Word { symbols: self.symbols.iter().map(|&s| 1 - s).collect(), alphabet: 2 })
    }

    /// Contiguous subword `[start, start + len)`.
    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word { symbols: self.symbols[start..start + len].to_vec(), alphabet: self.alphabet }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digits())
    }
}

/// A finite piece of a two-sided sequence, anchored at coordinate 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoSidedWindow {
    symbols: Word,
    origin: usize,
}

impl TwoSidedWindow {
    pub fn new(symbols: Word, origin: usize) -> Result<Self, ShiftError> {
        if symbols.is_empty() {
            return Err(ShiftError::EmptyWord);
        }
        if origin >= symbols.len() {
            return Err(ShiftError::OriginOutOfRange { origin, len: symbols.len() });
        }
        Ok(TwoSidedWindow { symbols, origin })
    }

    pub fn symbols(&self) -> &Word {
        &self.symbols
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Symbol at coordinate `c`, if inside the window.
    pub fn get(&self, c: i64) -> Option<u8> {
        let idx = c + self.origin as i64;
        (0..self.symbols.len() as i64).contains(&idx).then(|| self.symbols.symbols()[idx as usize])
    }

    /// `σ^t` as index translation: coordinate 0 moves to old coordinate `t`.
    pub fn shift(&self, t: usize) -> Result<TwoSidedWindow, ShiftError> {
        let available = self.symbols.len() - self.origin;
        if t >= available {
            return Err(ShiftError::ShiftEmpty { t, available });
        }
        Ok(TwoSidedWindow { symbols: self.symbols.clone(), origin: self.origin + t })
    }

    pub fn flip(&self) -> Result<TwoSidedWindow, ShiftError> {
        Ok(TwoSidedWindow { symbols: self.symbols.flip()?, origin: self.origin })
    }
}

/// Coordinate access shared by one-sided words and two-sided windows.
///
/// `shifted_bounds(t)` is the coordinate range of `σ^t x`; coordinate `c` of
/// `σ^t x` is `raw(c + t)`.
pub trait Window {
    fn bounds(&self) -> (i64, i64);
    fn raw(&self, c: i64) -> u8;
    fn shifted_bounds(&self, t: usize) -> (i64, i64);
}

impl Window for Word {
    fn bounds(&self) -> (i64, i64) {
        (0, self.len() as i64)
    }

    fn raw(&self, c: i64) -> u8 {
        self.symbols[c as usize]
    }

    fn shifted_bounds(&self, t: usize) -> (i64, i64) {
        (0, self.len().saturating_sub(t) as i64)
    }
}

impl Window for TwoSidedWindow {
    fn bounds(&self) -> (i64, i64) {
        let lo = -(self.origin as i64);
        (lo, lo + self.symbols.len() as i64)
    }

    fn raw(&self, c: i64) -> u8 {
        self.symbols.symbols()[(c + self.origin as i64) as usize]
    }

    fn shifted_bounds(&self, t: usize) -> (i64, i64) {
        let (lo, hi) = self.bounds();
        (lo - t as i64, hi - t as i64)
    }
}

/// A dyadic distance: `0` or `2^{-n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Zero,
    /// `2^{-n}`.
    Pow2(u32),
}

impl Distance {
    pub const ONE: Distance = Distance::Pow2(0);

    /// `self > r`, exactly.
    pub fn exceeds(&self, r: &Rational) -> bool {
        match *self {
            Distance::Zero => false,
            Distance::Pow2(n) => {
                // 2^-n > p/q  <=>  q > p * 2^n
                let (p, q) = (*r.numer() as u128, *r.denom() as u128);
                if p == 0 {
                    return true;
                }
                if n >= 64 {
                    return false;
                }
                q > p << n
            }
        }
    }

    /// `self < r`, exactly.
    pub fn below(&self, r: &Rational) -> bool {
        match *self {
            Distance::Zero => *r.numer() > 0,
            Distance::Pow2(n) => {
                let (p, q) = (*r.numer() as u128, *r.denom() as u128);
                if n >= 64 {
                    return p > 0;
                }
                (p << n) > q
            }
        }
    }

    /// Exact value when it fits in a `u64` denominator.
    pub fn to_ratio(&self) -> Option<Rational> {
        match *self {
            Distance::Zero => Some(Rational::from_integer(0)),
            Distance::Pow2(n) if n < 64 => Some(Rational::new(1, 1u64 << n)),
            Distance::Pow2(_) => None,
        }
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Zero, Distance::Zero) => Ordering::Equal,
            (Distance::Zero, _) => Ordering::Less,
            (_, Distance::Zero) => Ordering::Greater,
            (Distance::Pow2(a), Distance::Pow2(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Distance::Zero => f.write_str("0"),
            Distance::Pow2(0) => f.write_str("1"),
            Distance::Pow2(n) => write!(f, "2^-{n}"),
        }
    }
}

impl FromStr for Distance {
    type Err = ShiftError;

    fn from_str(s: &str) -> Result<Self, ShiftError> {
        match s {
            "0" => Ok(Distance::Zero),
            "1" => Ok(Distance::ONE),
            _ => s
                .strip_prefix("2^-")
                .and_then(|n| n.parse().ok())
                .map(Distance::Pow2)
                .ok_or_else(|| ShiftError::Parse(format!("bad distance `{s}`"))),
        }
    }
}

/// A metric evaluation; `range_limited` marks a `0` that only says the
/// windows agree wherever both are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MetricReading {
    pub distance: Distance,
    pub range_limited: bool,
}

/// `d(σ^t x, σ^t y)` over the shared coordinate range of the shifted windows.
pub fn distance_after<W: Window>(x: &W, y: &W, t: usize) -> Result<MetricReading, ShiftError> {
    let (xl, xh) = x.shifted_bounds(t);
    let (yl, yh) = y.shifted_bounds(t);
    let (lo, hi) = (xl.max(yl), xh.min(yh));
    if !(lo <= 0 && 0 < hi) {
        return Err(ShiftError::Misaligned);
    }
    let t = t as i64;
    let reach = hi.max(-lo + 1);
    for n in 0..reach {
        let differs = |c: i64| (lo..hi).contains(&c) && x.raw(c + t) != y.raw(c + t);
        if differs(n) || differs(-n) {
            return Ok(MetricReading { distance: Distance::Pow2(n as u32), range_limited: false });
        }
    }
    Ok(MetricReading { distance: Distance::Zero, range_limited: true })
}

pub fn shift_metric<W: Window>(x: &W, y: &W) -> Result<MetricReading, ShiftError> {
    distance_after(x, y, 0)
}

/// A finite pattern placed at a fixed coordinate: `{x : x_{anchor+i} = pattern_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cylinder {
    pattern: Word,
    anchor: i64,
}

impl Cylinder {
    pub fn new(pattern: Word, anchor: i64) -> Result<Self, ShiftError> {
        if pattern.is_empty() {
            return Err(ShiftError::EmptyWord);
        }
        Ok(Cylinder { pattern, anchor })
    }

    pub fn at_origin(pattern: Word) -> Result<Self, ShiftError> {
        Self::new(pattern, 0)
    }

    /// Parses `@<anchor>:<digits>`, `@:<digits>` or bare `<digits>`.
    pub fn parse(literal: &str, alphabet: usize) -> Result<Self, ShiftError> {
        let bad = || ShiftError::BadCylinder(literal.to_string());
        let (anchor, digits) = match literal.strip_prefix('@') {
            Some(rest) => {
                let (a, d) = rest.split_once(':').ok_or_else(bad)?;
                let anchor = if a.is_empty() { 0 } else { a.parse::<i64>().map_err(|_| bad())? };
                (anchor, d)
            }
            None => (0, literal),
        };
        if digits.is_empty() {
            return Err(bad());
        }
        Self::new(Word::from_digits(digits, alphabet).map_err(|_| bad())?, anchor)
    }

    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn coords(&self) -> (i64, i64) {
        (self.anchor, self.anchor + self.pattern.len() as i64)
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}:{}", self.anchor, self.pattern)
    }
}

pub fn in_cylinder<W: Window>(x: &W, cyl: &Cylinder) -> Result<bool, ShiftError> {
    let (lo, hi) = cyl.coords();
    let (wlo, whi) = x.bounds();
    if lo < wlo || hi > whi {
        return Err(ShiftError::PatternNotCovered { lo, hi, wlo, whi });
    }
    Ok(cyl.pattern.symbols().iter().enumerate().all(|(i, &s)| x.raw(lo + i as i64) == s))
}

// ---------------------------------------------------------------------------
// Generators

/// First `len` symbols of the Morse sequence via
/// `ω(0)=0, ω(2n)=ω(n), ω(2n+1)=1-ω(n)`.
pub fn morse_prefix(len: usize) -> Word {
    let mut symbols = vec![0u8; len];
    for n in 1..len {
        symbols[n] = if n % 2 == 0 { symbols[n / 2] } else { 1 - symbols[n / 2] };
    }
    Word { symbols, alphabet: 2 }
}

/// `ω` on coordinates `-radius ..= radius-1` with `ω(-n) = ω(n-1)`.
pub fn morse_two_sided(radius: usize) -> Result<TwoSidedWindow, ShiftError> {
    two_sided_from_morse(radius, false)
}

/// `η(n) = ω(n)` for `n >= 0` and `1 - ω(n)` for `n < 0`.
pub fn eta_two_sided(radius: usize) -> Result<TwoSidedWindow, ShiftError> {
    two_sided_from_morse(radius, true)
}

fn two_sided_from_morse(radius: usize, complement_left: bool) -> Result<TwoSidedWindow, ShiftError> {
    if radius == 0 {
        return Err(ShiftError::EmptyWord);
    }
    let omega = morse_prefix(radius);
    let w = omega.symbols();
    let mut symbols = Vec::with_capacity(2 * radius);
    // coordinate -n for n = radius..=1 holds ω(n-1)
    for n in (1..=radius).rev() {
        let s = w[n - 1];
        symbols.push(if complement_left { 1 - s } else { s });
    }
    symbols.extend_from_slice(w);
    TwoSidedWindow::new(Word { symbols, alphabet: 2 }, radius)
}

/// `τ(w)` for `τ(i) = i (i+1) ... (i-1)` taken mod `q`.
pub fn tau_apply(q: usize, w: &Word) -> Result<Word, ShiftError> {
    if w.alphabet() as usize != q {
        return Err(ShiftError::AlphabetMismatch { left: q.min(255) as u8, right: w.alphabet() });
    }
    let q8 = q as u8;
    let mut symbols = Vec::with_capacity(w.len() * q);
    for &s in w.symbols() {
        symbols.extend((0..q8).map(|j| (s + j) % q8));
    }
    Ok(Word { symbols, alphabet: q8 })
}

/// Longest substitution power the generator will materialise.
pub const TAU_LENGTH_CAP: usize = 1 << 28;

/// `τ^k(0)`, of length `q^k`.
pub fn tau_power(q: usize, k: usize) -> Result<Word, ShiftError> {
    let projected = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if projected > TAU_LENGTH_CAP as u128 {
        return Err(ShiftError::LengthCap { level: k, projected, cap: TAU_LENGTH_CAP });
    }
    let mut w = Word::new(vec![0], q)?;
    for _ in 0..k {
        w = tau_apply(q, &w)?;
    }
    Ok(w)
}

/// Linear de Bruijn word: every word of length `order` over `q` symbols
/// occurs exactly once as a factor.
pub fn de_bruijn(q: usize, order: usize) -> Result<Word, ShiftError> {
    if order == 0 {
        return Err(ShiftError::EmptyWord);
    }
    let projected = (q as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
    if projected > TAU_LENGTH_CAP as u128 {
        return Err(ShiftError::LengthCap { level: order, projected, cap: TAU_LENGTH_CAP });
    }
    fn db(t: usize, p: usize, q: u8, n: usize, a: &mut [u8], out: &mut Vec<u8>) {
        if t > n {
            if n % p == 0 {
                out.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            db(t + 1, p, q, n, a, out);
            for s in a[t - p] + 1..q {
                a[t] = s;
                db(t + 1, t, q, n, a, out);
            }
        }
    }
    let q8 = Word::new(vec![], q)?.alphabet();
    let mut a = vec![0u8; order + 1];
    let mut cyclic = Vec::with_capacity(projected as usize + order);
    db(1, 1, q8, order, &mut a, &mut cyclic);
    let head: Vec<u8> = cyclic[..order - 1].to_vec();
    cyclic.extend(head);
    Word::new(cyclic, q)
}

/// `pattern` repeated until `len` symbols.
pub fn periodic(pattern: &Word, len: usize) -> Result<Word, ShiftError> {
    if pattern.is_empty() {
        return Err(ShiftError::EmptyWord);
    }
    let symbols = pattern.symbols().iter().copied().cycle().take(len).collect();
    Ok(Word { symbols, alphabet: pattern.alphabet() })
}

/// All distinct factors of `w` with length `1..=maxlen`, lexicographically.
pub fn subblocks(w: &Word, maxlen: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for len in 1..=maxlen.min(w.len()) {
        for start in 0..=w.len() - len {
            out.insert(w.factor(start, len));
        }
    }
    out
}

/// `W1 0^{m j} W2 0^{m j}` concatenated over `j = b, b+1, ..., 2b`.
pub fn combination_block(w1: &Word, w2: &Word, m: usize, b: usize, cap: usize) -> Result<Word, ShiftError> {
    if w1.alphabet() != w2.alphabet() {
        return Err(ShiftError::AlphabetMismatch { left: w1.alphabet(), right: w2.alphabet() });
    }
    let projected = combination_block_len(w1.len(), w2.len(), m, b);
    if projected > cap as u128 {
        return Err(ShiftError::LengthCap { level: 0, projected, cap });
    }
    let mut symbols = Vec::with_capacity(projected as usize);
    push_combination_block(&mut symbols, w1, w2, m, b);
    Ok(Word { symbols, alphabet: w1.alphabet() })
}

fn push_combination_block(out: &mut Vec<u8>, w1: &Word, w2: &Word, m: usize, b: usize) {
    for j in b..=2 * b {
        out.extend_from_slice(w1.symbols());
        out.resize(out.len() + m * j, 0);
        out.extend_from_slice(w2.symbols());
        out.resize(out.len() + m * j, 0);
    }
}

/// `Σ_{j=b}^{2b} (|W1| + |W2| + 2 m j)`.
pub fn combination_block_len(l1: usize, l2: usize, m: usize, b: usize) -> u128 {
    let (l1, l2, m, b) = (l1 as u128, l2 as u128, m as u128, b as u128);
    let terms = b + 1;
    let sum_j = (b + 2 * b) * terms / 2;
    terms * (l1 + l2) + 2 * m * sum_j
}

/// Zero-run base `b` used when building level `level` from level `level-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapBase {
    /// `10^level`.
    Paper,
    /// `4 * 2^level`: same structure at desk scale.
    Scaled,
}

impl GapBase {
    pub fn at(&self, level: usize) -> u128 {
        match self {
            GapBase::Paper => 10u128.checked_pow(level as u32).unwrap_or(u128::MAX),
            GapBase::Scaled => 4u128.checked_mul(1u128.checked_shl(level as u32).unwrap_or(u128::MAX)).unwrap_or(u128::MAX),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            GapBase::Paper => "paper",
            GapBase::Scaled => "scaled",
        }
    }
}

impl FromStr for GapBase {
    type Err = ShiftError;

    fn from_str(s: &str) -> Result<Self, ShiftError> {
        match s {
            "paper" => Ok(GapBase::Paper),
            "scaled" => Ok(GapBase::Scaled),
            _ => Err(ShiftError::Parse(format!("unknown gap mode `{s}` (paper|scaled)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildConfig {
    pub gap_base: GapBase,
    /// Largest admissible word length.
    pub max_len: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { gap_base: GapBase::Paper, max_len: 1 << 26 }
    }
}

/// Per-level record of a combination-block construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAudit {
    pub level: usize,
    pub len: usize,
    /// Gap base used to build this level (0 for the seed level).
    pub gap_base: u128,
    pub subblocks: usize,
    pub combination_blocks: usize,
}

/// Blocks `A_1 = 10`, `A_{k+1} = A_k 0^{|A_k| b} [c(W1,W2) ...] 1^{k+1} 0^{|A_k| b}`
/// with `b = gap_base(k+1)`, pairs of subblocks of `A_k` ordered by
/// `(|W1|, W1, |W2|, W2)`. Returns `A_k` and an audit for levels `1..=k`.
pub fn build_a(k: usize, config: &BuildConfig) -> Result<(Word, Vec<LevelAudit>), ShiftError> {
    if k == 0 {
        return Err(ShiftError::EmptyWord);
    }
    let mut current = Word::binary(vec![1, 0])?;
    let mut audit = vec![LevelAudit { level: 1, len: 2, gap_base: 0, subblocks: 3, combination_blocks: 0 }];
    for level in 1..k {
        let next = level + 1;
        let (word, entry) = build_next_level(&current, level, config)?;
        debug_assert_eq!(entry.level, next);
        current = word;
        audit.push(entry);
    }
    Ok((current, audit))
}

fn build_next_level(prev: &Word, level: usize, config: &BuildConfig) -> Result<(Word, LevelAudit), ShiftError> {
    let next = level + 1;
    let n = prev.len() as u128;
    let b = config.gap_base.at(next);
    let cap = config.max_len;
    let too_long = |projected: u128| ShiftError::LengthCap { level: next, projected, cap };

    // At least one distinct factor per length, so at least n^2 pairs, each
    // contributing at least 2 n Σj zeros.
    let sum_j = (b.saturating_mul(3)).saturating_mul(b.saturating_add(1)) / 2;
    let lower = n.saturating_mul(n).saturating_mul(2).saturating_mul(n).saturating_mul(sum_j);
    if lower > cap as u128 {
        return Err(too_long(lower));
    }

    let mut blocks: Vec<Word> = subblocks(prev, prev.len()).into_iter().collect();
    blocks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let b = b as usize;
    let m = prev.len();
    let mut projected = 2 * n + 2 * n * b as u128 + next as u128 - n;
    for w1 in &blocks {
        for w2 in &blocks {
            projected += combination_block_len(w1.len(), w2.len(), m, b);
        }
    }
    if projected > cap as u128 {
        return Err(too_long(projected));
    }

    let mut out = Vec::with_capacity(projected as usize);
    out.extend_from_slice(prev.symbols());
    out.resize(out.len() + m * b, 0);
    for w1 in &blocks {
        for w2 in &blocks {
            push_combination_block(&mut out, w1, w2, m, b);
        }
    }
    out.resize(out.len() + next, 1);
    out.resize(out.len() + m * b, 0);
    debug_assert_eq!(out.len() as u128, projected);

    let entry = LevelAudit {
        level: next,
        len: out.len(),
        gap_base: b as u128,
        subblocks: blocks.len(),
        combination_blocks: blocks.len() * blocks.len(),
    };
    Ok((Word::binary(out)?, entry))
}

// ---------------------------------------------------------------------------
// Scanning

/// Start indices of every occurrence of `pattern` in `text` (prefix-function
/// matcher).
pub fn occurrences(text: &[u8], pattern: &[u8]) -> Vec<usize> {
    let p = pattern.len();
    if p == 0 || p > text.len() {
        return Vec::new();
    }
    let mut fail = vec![0usize; p];
    let mut k = 0;
    for i in 1..p {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut out = Vec::new();
    k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pattern[k] {
            k = fail[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == p {
            out.push(i + 1 - p);
            k = fail[k - 1];
        }
    }
    out
}

fn one_sided_anchor(cyl: &Cylinder, host: &Word) -> Result<usize, ShiftError> {
    let (lo, hi) = cyl.coords();
    if lo < 0 || hi > host.len() as i64 {
        return Err(ShiftError::PatternNotCovered { lo, hi, wlo: 0, whi: host.len() as i64 });
    }
    Ok(lo as usize)
}

/// Times `t` at which `σ^t x` is in `cyl`, for `t < min(H, last decidable t + 1)`.
pub fn visit_set(x: &Word, cyl: &Cylinder, horizon: usize) -> Result<WindowedSet, ShiftError> {
    let anchor = one_sided_anchor(cyl, x)?;
    let decidable = x.len() - anchor - cyl.len() + 1;
    let h = horizon.min(decidable);
    let times = occurrences(x.symbols(), cyl.pattern().symbols())
        .into_iter()
        .filter(|&i| i >= anchor)
        .map(|i| i - anchor)
        .take_while(|&t| t < h);
    Ok(WindowedSet::new(times.collect(), h)?)
}

/// Bitset of the times `i` at which `σ^i x` lies in a cylinder.
struct TimeBits {
    words: Vec<u64>,
}

impl TimeBits {
    fn new(times: impl IntoIterator<Item = usize>, len: usize) -> Self {
        let mut words = vec![0u64; len / 64 + 2];
        for t in times {
            words[t / 64] |= 1 << (t % 64);
        }
        TimeBits { words }
    }

    fn word_shifted(&self, j: usize, t: usize) -> u64 {
        let (q, r) = (t / 64, t % 64);
        let at = |i: usize| self.words.get(i).copied().unwrap_or(0);
        if r == 0 {
            at(j + q)
        } else {
            (at(j + q) >> r) | (at(j + q + 1) << (64 - r))
        }
    }
}

fn cylinder_times(x: &Word, cyl: &Cylinder) -> Result<Vec<usize>, ShiftError> {
    let anchor = one_sided_anchor(cyl, x)?;
    Ok(occurrences(x.symbols(), cyl.pattern().symbols())
        .into_iter()
        .filter(|&i| i >= anchor)
        .map(|i| i - anchor)
        .collect())
}

/// `{t < H : ∃ i, σ^i x ∈ U and σ^{i+t} x ∈ V}` over occurrences inside `x`;
/// approximates `N(U ∩ X, V ∩ X)` for the orbit closure `X` of `x`.
pub fn hitting_set(x: &Word, u: &Cylinder, v: &Cylinder, horizon: usize) -> Result<WindowedSet, ShiftError> {
    let u_times = cylinder_times(x, u)?;
    let v_times = cylinder_times(x, v)?;
    let v_anchor = one_sided_anchor(v, x)?;
    let h = horizon.min(x.len() - v_anchor - v.len() + 1);
    let ub = TimeBits::new(u_times.iter().copied(), x.len());
    let vb = TimeBits::new(v_times.iter().copied(), x.len());
    let nonzero: Vec<usize> = (0..ub.words.len()).filter(|&j| ub.words[j] != 0).collect();
    let hits = (0..h).filter(|&t| nonzero.iter().any(|&j| ub.words[j] & vb.word_shifted(j, t) != 0));
    Ok(WindowedSet::new(hits.collect(), h)?)
}

// ---------------------------------------------------------------------------
// Sequence files

/// Contents of a sequence file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sequence {
    OneSided(Word),
    TwoSided(TwoSidedWindow),
}

impl Sequence {
    pub fn word(&self) -> &Word {
        match self {
            Sequence::OneSided(w) => w,
            Sequence::TwoSided(w) => w.symbols(),
        }
    }

    /// `alphabet=<q>`, optional `origin=<k>`, then the symbols as digits.
    pub fn to_text(&self) -> String {
        match self {
            Sequence::OneSided(w) => format!("alphabet={}\n{}\n", w.alphabet(), w),
            Sequence::TwoSided(w) => {
                format!("alphabet={}\norigin={}\n{}\n", w.symbols().alphabet(), w.origin(), w.symbols())
            }
        }
    }
}

impl FromStr for Sequence {
    type Err = ShiftError;

    fn from_str(text: &str) -> Result<Self, ShiftError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| ShiftError::Parse("empty input".into()))?;
        let q = header
            .strip_prefix("alphabet=")
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| ShiftError::Parse(format!("expected `alphabet=<q>`, got `{header}`")))?;
        if q > 10 {
            return Err(ShiftError::Parse(format!("digit format supports alphabets up to 10, got {q}")));
        }
        let mut line = lines.next().ok_or_else(|| ShiftError::Parse("missing symbols".into()))?;
        let mut origin = None;
        if let Some(o) = line.strip_prefix("origin=") {
            origin = Some(o.parse::<usize>().map_err(|e| ShiftError::Parse(format!("bad origin: {e}")))?);
            line = lines.next().ok_or_else(|| ShiftError::Parse("missing symbols".into()))?;
        }
        if let Some(extra) = lines.next() {
            return Err(ShiftError::Parse(format!("unexpected trailing line `{extra}`")));
        }
        let word = Word::from_digits(line, q)?;
        if word.is_empty() {
            return Err(ShiftError::EmptyWord);
        }
        Ok(match origin {
            Some(o) => Sequence::TwoSided(TwoSidedWindow::new(word, o)?),
            None => Sequence::OneSided(word),
        })
    }
}
