//! Exact rationals used for densities and thresholds.

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<u64>;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse `{0}` as a non-negative rational (expected `p/q` or a decimal like `0.25`)")]
pub struct ParseRatioError(pub String);

/// Parses `p/q`, an integer, or a finite decimal such as `0.125`.
pub fn parse_ratio(text: &str) -> Result<Rational, ParseRatioError> {
    let err = || ParseRatioError(text.to_string());
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| err())?;
        let q: u64 = q.trim().parse().map_err(|_| err())?;
        if q == 0 {
            return Err(err());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| err())? };
        let denom = 10u64.pow(frac.len() as u32);
        let frac: u64 = frac.parse().map_err(|_| err())?;
        let numer = int
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(err)?;
        return Ok(Ratio::new(numer, denom));
    }
    let int: u64 = text.parse().map_err(|_| err())?;
    Ok(Ratio::from_integer(int))
}

/// Canonical text form, `p/q` or a bare integer.
pub fn format_ratio(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
