//! Exact representability and universality checks for weighted m-gonal
//! forms `a_1 P_m(x_1) + .. + a_n P_m(x_n)`, where
//! `P_m(x) = ((m-2)x^2 - (m-4)x)/2` ranges over all integers `x`.
//!
//! * [`polygonal`], [`form`], [`search`], [`sieve`]: arithmetic, per-target
//!   search with exact bounds, and bulk sieving.
//! * [`lattice`]: closed-form sufficient conditions for eight quaternary
//!   forms and brute-force binary-by-diagonal representations.
//! * [`candidates`]: escalator prefixes, the 22 five-coefficient
//!   candidates, and constructive counterexamples.
//! * [`escalate`]: truant-driven escalation trees and empirical gamma.
//! * [`theorems`]: verification sweeps producing [`VerificationReport`]s.

pub mod candidates;
pub mod error;
pub mod escalate;
pub mod form;
pub mod lattice;
pub mod polygonal;
pub mod report;
pub mod search;
pub mod sieve;
pub mod theorems;

pub use error::{Error, Result};
pub use form::{decompose, MGonalForm, Representation, SearchConfig, TargetClass};
pub use polygonal::{polygonal_number, polygonal_values_up_to};
pub use report::{Cell, RunStats, Verdict, VerificationReport};
pub use search::{find_representation, represents};
pub use sieve::{represents_range, truant, RangeBits, ReachSet};
