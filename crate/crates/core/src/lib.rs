//! Finite-horizon laboratory for symbolic dynamics.
//!
//! The crate is split into four layers:
//!
//! - [`setcalc`]: finite truncations of subsets of the non-negative integers,
//!   witnesses for the thick / syndetic / piecewise syndetic / density
//!   families, Banach density per window length, and the broken-family union.
//! - [`shiftspace`]: words, two-sided windows, cylinders, the dyadic shift
//!   metric, and generators for the Morse sequence, the cyclic substitution
//!   and the combination-block subshift.
//! - [`sensitivity`]: exhaustive witness searches for sensitive tuples,
//!   broken family sensitivity, family recurrence, pair classification and
//!   run coverage.
//! - [`cli`]: the `symdyn` command-line front end and its report format.
//!
//! Every predicate that is a limit statement is answered with a three-valued
//! [`Verdict`]: a witness that can be re-checked, a conclusive finite
//! counterexample, or an explicit "unknown at this horizon".

pub mod cli;
pub mod ratio;
pub mod sensitivity;
pub mod setcalc;
pub mod shiftspace;
mod verdict;

pub use ratio::{parse_ratio, Rational};
pub use verdict::{Evidence, Verdict, VerdictKind};
