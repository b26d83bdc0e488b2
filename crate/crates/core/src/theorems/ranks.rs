use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::escalate::{certify_universal, Universality};
use crate::form::MGonalForm;
use crate::report::{Cell, VerificationReport};
use crate::sieve::ReachSet;

/// `max(10^5, 50(m-2))`.
pub fn default_univ_bound(m: u64) -> u64 {
    100_000u64.max(50 * m.saturating_sub(2))
}

/// A minimal universal rank with its two-sided evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub status: Universality,
    /// An integer the form of rank `rank - 1` misses, when that form exists.
    pub miss_below: Option<u64>,
}

/// Grows a form one coefficient at a time until it represents everything
/// up to `bound`.
fn minimal_rank(
    m: u64,
    base: &[u64],
    step: u64,
    bound: u64,
    max_rank: usize,
) -> Result<RankResult> {
    let mut reach = ReachSet::new(m, bound)?;
    let mut coeffs = Vec::new();
    let mut miss_below = None;
    for &a in base {
        reach.add_coefficient(a)?;
        coeffs.push(a);
    }
    while coeffs.is_empty() || reach.truant().is_some() {
        if coeffs.len() >= max_rank {
            return Err(Error::BudgetExhausted(max_rank as u64));
        }
        if !coeffs.is_empty() {
            miss_below = reach.truant();
        }
        reach.add_coefficient(step)?;
        coeffs.push(step);
    }
    let form = MGonalForm::new(m, coeffs)?;
    Ok(RankResult {
        rank: form.rank(),
        status: certify_universal(&form, bound)?,
        miss_below,
    })
}

/// Least `n` with `<1, .., 1>_m` (n ones) representing `[1, univ_bound]`.
pub fn ell_plain(m: u64, univ_bound: u64) -> Result<RankResult> {
    if univ_bound == 0 {
        return Err(Error::NonPositiveBudget);
    }
    minimal_rank(m, &[], 1, univ_bound, 4 * m as usize + 16)
}

/// Least `n` with `r-1` ones followed by `n-(r-1)` copies of `r`
/// representing `[1, univ_bound]`. Requires `2 <= r < m - 3`.
pub fn ell_r(m: u64, r: u64, univ_bound: u64) -> Result<RankResult> {
    if univ_bound == 0 {
        return Err(Error::NonPositiveBudget);
    }
    if r < 2 || r + 3 >= m {
        return Err(Error::InvalidRange { lo: 2, hi: r });
    }
    let ones = vec![1u64; (r - 1) as usize];
    minimal_rank(m, &ones, r, univ_bound, (4 * m + 4 * r) as usize + 16)
}

/// `F_1, .., F_n` with `F_1 = F_2 = 1`.
pub fn fibonacci_coeffs(n: usize) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        let next = if i < 2 {
            1
        } else {
            out[i - 1]
                .checked_add(out[i - 2])
                .ok_or(Error::Overflow("fibonacci coefficient"))?
        };
        out.push(next);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FibOutcome {
    /// `F_1 + .. + F_n < m - 4`: the universality claim does not apply.
    NotCovered {
        sum: u64,
    },
    Checked {
        result: Universality,
    },
}

/// Checks `<F_1, .., F_n>_m` when `n >= 5` and `F_1 + .. + F_n >= m - 4`.
pub fn fibonacci_universal(m: u64, n: usize, univ_bound: u64) -> Result<FibOutcome> {
    if n < 5 {
        return Err(Error::InvalidRange {
            lo: 5,
            hi: n as u64,
        });
    }
    let coeffs = fibonacci_coeffs(n)?;
    let sum = coeffs.iter().fold(0u64, |s, &c| s.saturating_add(c));
    if sum < m.saturating_sub(4) {
        return Ok(FibOutcome::NotCovered { sum });
    }
    let form = MGonalForm::new(m, coeffs)?;
    Ok(FibOutcome::Checked {
        result: certify_universal(&form, univ_bound)?,
    })
}

/// Closed form for the minimal rank of the all-ones form.
pub fn expected_ell_plain(m: u64) -> Option<usize> {
    match m {
        0..=2 => None,
        3 | 5 | 6 => Some(3),
        4 | 7 | 8 => Some(4),
        _ => Some(m as usize - 4),
    }
}

/// Closed forms for `r - 1` ones followed by copies of `r`, where known.
pub fn expected_ell_r(m: u64, r: u64) -> Option<usize> {
    let v = match r {
        2 if m >= 12 => m / 2,
        3 if m >= 10 && m % 3 != 2 => m - 2,
        3 if m >= 14 => (2 * m - 4) / 3,
        4 if m >= 62 => (m - 2).div_ceil(4) + 2,
        5.. if r + 3 < m => (m - 3).div_ceil(r) + r - 2,
        _ => return None,
    };
    Some(v as usize)
}

fn rank_cell(label: String, want: usize, got: RankResult) -> Cell {
    let cell = if !got.status.is_universal() {
        Cell::fail(
            label,
            format!("rank {} form is open: {:?}", got.rank, got.status),
        )
    } else if got.rank != want {
        Cell::fail(
            label,
            format!("rank {} but closed form gives {want}", got.rank),
        )
    } else {
        Cell::pass(label)
    };
    cell.with_target(got.rank as u64)
}

/// Compares minimal ranks with their closed forms. `rs` empty means the
/// all-ones form; pairs without a closed form are skipped.
pub fn verify_ell(
    ms: RangeInclusive<u64>,
    rs: &[u64],
    univ_bound: Option<u64>,
) -> Result<VerificationReport> {
    let jobs: Vec<(u64, Option<u64>)> = if rs.is_empty() {
        ms.map(|m| (m, None)).collect()
    } else {
        ms.flat_map(|m| rs.iter().map(move |&r| (m, Some(r))))
            .collect()
    };
    let cells = jobs
        .par_iter()
        .map(|&(m, r)| -> Result<Cell> {
            let bound = univ_bound.unwrap_or_else(|| default_univ_bound(m));
            Ok(match r {
                None => {
                    let label = format!("m={m}");
                    match expected_ell_plain(m) {
                        Some(want) => rank_cell(label, want, ell_plain(m, bound)?),
                        None => Cell::skipped(label, "order below 3"),
                    }
                }
                Some(r) => {
                    let label = format!("m={m} r={r}");
                    match expected_ell_r(m, r) {
                        Some(want) => rank_cell(label, want, ell_r(m, r, bound)?),
                        None => Cell::skipped(label, "no closed form"),
                    }
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_cells("ell", cells))
}

/// Checks the Fibonacci form of minimal admissible rank `n >= 5` per order.
pub fn verify_fib(ms: RangeInclusive<u64>, univ_bound: Option<u64>) -> Result<VerificationReport> {
    let ms: Vec<u64> = ms.collect();
    let cells = ms
        .par_iter()
        .map(|&m| -> Result<Cell> {
            let mut n = 5;
            while fibonacci_coeffs(n)?.iter().sum::<u64>() + 4 < m {
                n += 1;
            }
            let bound = univ_bound.unwrap_or_else(|| default_univ_bound(m));
            let label = format!("m={m} n={n}");
            Ok(match fibonacci_universal(m, n, bound)? {
                FibOutcome::Checked {
                    result: Universality::Open { first_miss },
                } => Cell::fail(label, format!("misses {first_miss}")).with_target(first_miss),
                FibOutcome::Checked { .. } => Cell::pass(label),
                FibOutcome::NotCovered { sum } => Cell::skipped(label, format!("sum {sum} < m-4")),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_cells("fib", cells))
}
