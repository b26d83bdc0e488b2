//! Sweep-style checks of the consecutive-window proposition, the rank-5
//! window lemma, the `gamma = m - 4` theorem, and its rank applications.

mod consecutive;
mod lemma35;
mod main_theorem;
mod ranks;

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use consecutive::{sweep_consecutive, verify_consecutive_prop};
pub use lemma35::{lemma35_tuples, verify_lem1, Lemma35Case};
pub use main_theorem::verify_main;
pub use ranks::{
    default_univ_bound, ell_plain, ell_r, expected_ell_plain, expected_ell_r, fibonacci_coeffs,
    fibonacci_universal, verify_ell, verify_fib, FibOutcome, RankResult,
};

/// Parameter box for a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBox {
    pub ms: RangeInclusive<u64>,
    pub as_: RangeInclusive<u64>,
    /// Random escalator tails drawn per `(tuple, m)` cell.
    pub samples: usize,
    /// Largest coefficient a random tail may use.
    pub coeff_cap: u64,
    pub seed: u64,
}

impl SweepBox {
    pub fn new(ms: RangeInclusive<u64>, as_: RangeInclusive<u64>) -> Result<Self> {
        let b = Self {
            ms,
            as_,
            samples: 4,
            coeff_cap: 64,
            seed: 0,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ms.is_empty() {
            return Err(Error::InvalidRange {
                lo: *self.ms.start(),
                hi: *self.ms.end(),
            });
        }
        if self.as_.is_empty() {
            return Err(Error::InvalidRange {
                lo: *self.as_.start(),
                hi: *self.as_.end(),
            });
        }
        if *self.ms.start() < 3 {
            return Err(Error::InvalidOrder(*self.ms.start()));
        }
        if *self.ms.end() > 1 << 20 || *self.as_.end() > 1 << 20 || self.coeff_cap == 0 {
            return Err(Error::NonPositiveBudget);
        }
        Ok(())
    }
}

/// A deterministic stream for the cell `(seed, m, salt)`, independent of the
/// order in which parallel workers reach it.
pub(crate) fn cell_rng(seed: u64, m: u64, salt: u64) -> ChaCha8Rng {
    let mix =
        seed ^ m.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    ChaCha8Rng::seed_from_u64(mix)
}

/// Extends `prefix` by uniformly random escalator steps (capped at
/// `coeff_cap`) until the coefficient sum reaches `m - 4`.
pub(crate) fn random_escalator_tail(
    rng: &mut impl Rng,
    prefix: &[u64],
    m: u64,
    coeff_cap: u64,
) -> Vec<u64> {
    let mut coeffs = prefix.to_vec();
    let mut sum: u64 = coeffs.iter().sum();
    let goal = m.saturating_sub(4);
    while sum < goal || coeffs.len() == prefix.len() {
        let last = *coeffs.last().unwrap_or(&1);
        let hi = (sum + 1).min(coeff_cap.max(last));
        let a = rng.random_range(last..=hi);
        coeffs.push(a);
        sum += a;
    }
    coeffs
}
