//! Escalator prefixes, the five-coefficient candidate table, and the
//! constructive counterexamples that prune it.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::MGonalForm;
use crate::report::{Cell, VerificationReport};
use crate::search::find_representation;
use crate::sieve::{represents_range, ReachSet};
use crate::SearchConfig;

/// `a_1 = 1` and `a_{i-1} <= a_i <= 1 + a_1 + .. + a_{i-1}` for all `i`.
pub fn is_escalator_prefix(tuple: &[u64]) -> bool {
    if tuple.first() != Some(&1) {
        return false;
    }
    let mut sum = 0u64;
    let mut last = 1u64;
    for &a in tuple {
        if a < last || a > sum.saturating_add(1) {
            return false;
        }
        sum = sum.saturating_add(a);
        last = a;
    }
    true
}

/// An escalator-valid coefficient tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Prefix(Vec<u64>);

impl Prefix {
    pub fn new(tuple: Vec<u64>) -> Result<Self> {
        if is_escalator_prefix(&tuple) {
            Ok(Self(tuple))
        } else {
            Err(Error::NotEscalator(tuple))
        }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("escalator prefixes are nonempty")
    }

    /// All one-step escalator extensions, ascending.
    pub fn extensions(&self) -> impl Iterator<Item = Prefix> + '_ {
        (self.last()..=self.sum() + 1).map(move |a| {
            let mut v = self.0.clone();
            v.push(a);
            Prefix(v)
        })
    }

    pub fn starts_with(&self, head: &[u64]) -> bool {
        self.0.starts_with(head)
    }
}

impl TryFrom<Vec<u64>> for Prefix {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Prefix> for Vec<u64> {
    fn from(p: Prefix) -> Self {
        p.0
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every escalator tuple of the given length, in lexicographic order.
pub fn enumerate_prefixes(length: usize) -> Vec<Prefix> {
    if length == 0 {
        return Vec::new();
    }
    let mut level = vec![Prefix(vec![1])];
    for _ in 1..length {
        level = level.iter().flat_map(|p| p.extensions()).collect();
    }
    level
}

/// A coefficient forced after the prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailEntry {
    Exact(u64),
    AtLeast(u64),
}

/// `c(m-2) + d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissedTarget {
    pub c: u64,
    pub d: i64,
}

impl MissedTarget {
    pub fn at(&self, m: u64) -> Option<u64> {
        let v = i128::from(self.c) * (i128::from(m) - 2) + i128::from(self.d);
        u64::try_from(v).ok()
    }
}

impl fmt::Display for MissedTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            0 => write!(f, "{}(m-2)", self.c),
            d if d < 0 => write!(f, "{}(m-2){}", self.c, d),
            d => write!(f, "{}(m-2)+{}", self.c, d),
        }
    }
}

/// Forms starting with `prefix ++ tail`, representing `1..=m-4` with
/// coefficient sum exactly `m-4`, that still miss `missed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub id: String,
    pub prefix: Vec<u64>,
    pub tail: Vec<TailEntry>,
    pub missed: MissedTarget,
    /// Smallest order the claim is stated for.
    pub min_m: u64,
}

fn spec(
    id: &str,
    prefix: &[u64],
    tail: &[TailEntry],
    c: u64,
    d: i64,
    min_m: u64,
) -> CounterexampleSpec {
    CounterexampleSpec {
        id: id.to_string(),
        prefix: prefix.to_vec(),
        tail: tail.to_vec(),
        missed: MissedTarget { c, d },
        min_m,
    }
}

/// Prefixes of length at most four that cannot lead to `gamma = m - 4`.
pub fn remark21_specs() -> Vec<CounterexampleSpec> {
    vec![
        spec("remark21-1", &[1, 1, 1, 3], &[], 2, 0, 5),
        spec("remark21-2", &[1, 1, 1, 4], &[], 2, 0, 5),
        spec("remark21-3", &[1, 1, 2, 5], &[], 2, 2, 5),
        spec("remark21-4", &[1, 1, 3], &[], 2, -3, 5),
        spec("remark21-5", &[1, 2], &[], 1, 0, 5),
    ]
}

/// Five-coefficient extensions of the surviving prefixes that still fail.
/// `min_m` is the printed admissibility bound plus four.
pub fn remark22_specs() -> Vec<CounterexampleSpec> {
    use TailEntry::{AtLeast, Exact};
    vec![
        spec("remark22-1", &[1, 1, 1, 2, 5], &[Exact(11)], 5, 5, 36),
        spec(
            "remark22-2",
            &[1, 1, 1, 2, 6],
            &[Exact(11), Exact(23)],
            5,
            11,
            72,
        ),
        spec(
            "remark22-3",
            &[1, 1, 2, 2, 6],
            &[Exact(6), AtLeast(12)],
            5,
            6,
            40,
        ),
        spec(
            "remark22-4",
            &[1, 1, 2, 2, 7],
            &[Exact(13), AtLeast(19)],
            5,
            13,
            68,
        ),
        spec(
            "remark22-5",
            &[1, 1, 2, 3, 7],
            &[Exact(14), AtLeast(25)],
            14,
            14,
            82,
        ),
        spec("remark22-6", &[1, 1, 2, 3, 8], &[Exact(15)], 7, 15, 49),
    ]
}

/// The four-coefficient prefixes not excluded by any [`remark21_specs`].
pub fn surviving_four_prefixes() -> Vec<Prefix> {
    let excluded = remark21_specs();
    enumerate_prefixes(4)
        .into_iter()
        .filter(|p| !excluded.iter().any(|s| p.starts_with(&s.prefix)))
        .collect()
}

/// The 22 five-coefficient candidates for `gamma = m - 4`.
pub fn candidate_table_5() -> Vec<Prefix> {
    let excluded = remark22_specs();
    surviving_four_prefixes()
        .iter()
        .flat_map(|p| p.extensions().collect::<Vec<_>>())
        .filter(|p| !excluded.iter().any(|s| p.as_slice() == s.prefix.as_slice()))
        .collect()
}

/// The candidate whose order bound depends on an unknown constant.
pub const UNRESOLVED_CANDIDATE: [u64; 5] = [1, 1, 2, 4, 8];

/// The candidate table without [`UNRESOLVED_CANDIDATE`].
pub fn resolved_candidates() -> Vec<Prefix> {
    candidate_table_5()
        .into_iter()
        .filter(|p| p.as_slice() != UNRESOLVED_CANDIDATE)
        .collect()
}

pub fn is_candidate(first_five: &[u64]) -> bool {
    candidate_table_5()
        .iter()
        .any(|p| p.as_slice() == first_five)
}

struct Filler {
    coeffs: Vec<u64>,
    sum: u64,
}

impl Filler {
    fn last(&self) -> u64 {
        *self.coeffs.last().expect("prefix is nonempty")
    }

    fn fill(&mut self, remaining: u64, pending: &[TailEntry]) -> bool {
        let last = self.last();
        let cap = self.sum + 1;
        if let Some((&head, rest)) = pending.split_first() {
            let (lo, hi) = match head {
                TailEntry::Exact(v) => (v.max(last), v),
                TailEntry::AtLeast(v) => (v.max(last), cap),
            };
            for a in lo..=hi.min(cap).min(remaining) {
                if self.push_and_fill(a, remaining, rest) {
                    return true;
                }
            }
            return false;
        }
        if remaining == 0 {
            return true;
        }
        if (last..=cap).contains(&remaining) {
            self.coeffs.push(remaining);
            self.sum += remaining;
            return true;
        }
        // filler equal to the last coefficient first, then larger ones
        for a in last..=cap.min(remaining) {
            if remaining - a < a {
                break;
            }
            if self.push_and_fill(a, remaining, &[]) {
                return true;
            }
        }
        false
    }

    fn push_and_fill(&mut self, a: u64, remaining: u64, pending: &[TailEntry]) -> bool {
        self.coeffs.push(a);
        self.sum += a;
        if self.fill(remaining - a, pending) {
            return true;
        }
        self.coeffs.pop();
        self.sum -= a;
        false
    }
}

/// Extends `prefix ++ tail` to an escalator form with coefficient sum
/// exactly `m - 4`. Such a form represents every integer in `[1, m-4]`
/// through `x in {0,1}^n` alone.
pub fn build_completion(prefix: &[u64], tail: &[TailEntry], m: u64) -> Result<MGonalForm> {
    if !is_escalator_prefix(prefix) {
        return Err(Error::NotEscalator(prefix.to_vec()));
    }
    let target = m as i64 - 4;
    let infeasible = |reason: &str| Error::InfeasibleCompletion {
        prefix: prefix.to_vec(),
        target,
        reason: reason.to_string(),
    };
    let base: u64 = prefix.iter().sum();
    let forced: u64 = tail
        .iter()
        .map(|t| match t {
            TailEntry::Exact(v) | TailEntry::AtLeast(v) => *v,
        })
        .sum();
    if target < (base + forced) as i64 {
        return Err(infeasible("forced coefficients already exceed m - 4"));
    }
    let mut filler = Filler {
        coeffs: prefix.to_vec(),
        sum: base,
    };
    if !filler.fill(target as u64 - base, tail) {
        return Err(infeasible(
            "no nondecreasing escalator tail lands exactly on m - 4",
        ));
    }
    debug_assert!(is_escalator_prefix(&filler.coeffs));
    MGonalForm::new(m, filler.coeffs)
}

/// Builds a completion for `spec` at order `m` and checks both halves of
/// the claim: `[1, m-4]` is represented and the missed target is not.
pub fn verify_counterexample(spec: &CounterexampleSpec, m: u64) -> Result<Cell> {
    let label = format!("{} m={m}", spec.id);
    if m < spec.min_m {
        return Ok(Cell::skipped(
            label,
            format!("below admissible order {}", spec.min_m),
        ));
    }
    let form = match build_completion(&spec.prefix, &spec.tail, m) {
        Ok(f) => f,
        Err(e @ Error::InfeasibleCompletion { .. }) => {
            return Ok(Cell::skipped(label, e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let label = format!("{label} form={form}");
    let Some(target) = spec.missed.at(m).filter(|&t| t > 0) else {
        return Ok(Cell::skipped(label, "missed target is not positive"));
    };
    if !is_escalator_prefix(form.coeffs()) || form.coeff_sum() != m - 4 {
        return Ok(
            Cell::fail(label, "completion violates the escalator or sum constraint")
                .with_target(target),
        );
    }
    let low = represents_range(&form, 1, m - 4)?;
    if let Some(miss) = low.first_miss() {
        return Ok(
            Cell::fail(label, format!("completion misses {miss} <= m-4")).with_target(target),
        );
    }
    let searched = find_representation(&form, target, &SearchConfig::unlimited())?;
    let sieved = ReachSet::for_form(&form, target)?.contains(target);
    Ok(match searched {
        Some(r) => Cell::fail(label, format!("{} is represented", spec.missed))
            .with_target(target)
            .with_witness(r.into_inner()),
        None if sieved => Cell::fail(label, "search and sieve disagree").with_target(target),
        None => Cell::pass(label).with_target(target),
    })
}

/// Runs every spec over every order in `ms`.
pub fn sweep_counterexamples(
    claim: &str,
    specs: &[CounterexampleSpec],
    ms: RangeInclusive<u64>,
) -> Result<VerificationReport> {
    let jobs: Vec<(&CounterexampleSpec, u64)> = specs
        .iter()
        .flat_map(|s| ms.clone().map(move |m| (s, m)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(s, m)| verify_counterexample(s, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_cells(claim, cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escalator_examples() {
        assert!(is_escalator_prefix(&[1, 2, 4, 8]));
        assert!(!is_escalator_prefix(&[1, 2, 4, 9]));
        assert!(!is_escalator_prefix(&[1, 1, 3, 2]));
        assert!(!is_escalator_prefix(&[]));
        assert!(!is_escalator_prefix(&[2]));
    }

    #[test]
    fn small_enumerations() {
        let two: Vec<Vec<u64>> = enumerate_prefixes(2).into_iter().map(Vec::from).collect();
        assert_eq!(two, vec![vec![1, 1], vec![1, 2]]);
        assert_eq!(enumerate_prefixes(1).len(), 1);
        assert_eq!(enumerate_prefixes(4).len(), 27);
        assert!(enumerate_prefixes(0).is_empty());
    }

    #[test]
    fn table_shape() {
        let t = candidate_table_5();
        assert_eq!(t.len(), 22);
        assert!(t.iter().any(|p| p.as_slice() == [1, 1, 2, 4, 8]));
        assert!(!t.iter().any(|p| p.as_slice() == [1, 1, 2, 3, 7]));
        assert_eq!(surviving_four_prefixes().len(), 5);
        assert_eq!(resolved_candidates().len(), 21);
    }

    #[test]
    fn completions() {
        let f = build_completion(&[1, 1, 1, 3], &[], 20).unwrap();
        assert_eq!(f.coeffs(), &[1, 1, 1, 3, 3, 7]);
        let f = build_completion(&[1, 2], &[], 10).unwrap();
        assert_eq!(f.coeffs(), &[1, 2, 3]);
        let f = build_completion(&[1, 1, 1, 2, 5], &[TailEntry::Exact(11)], 40).unwrap();
        assert_eq!(f.coeff_sum(), 36);
        assert_eq!(&f.coeffs()[..6], &[1, 1, 1, 2, 5, 11]);
        // a second 11 leaves 4 to fill with coefficients >= 11
        assert!(matches!(
            build_completion(
                &[1, 1, 1, 2, 5],
                &[TailEntry::Exact(11), TailEntry::Exact(11)],
                40
            ),
            Err(Error::InfeasibleCompletion { .. })
        ));
        assert!(matches!(
            build_completion(&[1, 1, 1, 3], &[], 12),
            Err(Error::InfeasibleCompletion { .. })
        ));
        assert!(matches!(
            build_completion(&[1, 3], &[], 20),
            Err(Error::NotEscalator(_))
        ));
        // exact landing on the prefix itself
        assert_eq!(
            build_completion(&[1, 1, 2, 5], &[], 13).unwrap().coeffs(),
            &[1, 1, 2, 5]
        );
    }

    #[test]
    fn at_least_entries_take_the_minimum_first() {
        let f = build_completion(
            &[1, 1, 2, 2, 6],
            &[TailEntry::Exact(6), TailEntry::AtLeast(12)],
            50,
        )
        .unwrap();
        assert_eq!(&f.coeffs()[..7], &[1, 1, 2, 2, 6, 6, 12]);
        assert_eq!(f.coeff_sum(), 46);
        // 12 is too small to leave a feasible remainder at m - 4 = 36, 19 lands it
        let f = build_completion(
            &[1, 1, 2, 2, 6],
            &[TailEntry::Exact(6), TailEntry::AtLeast(12)],
            40,
        )
        .unwrap();
        assert_eq!(f.coeffs(), &[1, 1, 2, 2, 6, 6, 18]);
    }

    #[test]
    fn counterexample_examples() {
        let specs = remark21_specs();
        let c = verify_counterexample(&specs[4], 12).unwrap();
        assert_eq!(c.verdict, crate::report::Verdict::Pass, "{c:?}");
        assert_eq!(c.target, Some(10));
        let c = verify_counterexample(&specs[0], 20).unwrap();
        assert_eq!(c.verdict, crate::report::Verdict::Pass, "{c:?}");
        assert_eq!(c.target, Some(36));
        let c = verify_counterexample(&specs[2], 24).unwrap();
        assert_eq!(c.verdict, crate::report::Verdict::Pass, "{c:?}");
        assert_eq!(c.target, Some(46));
    }

    #[test]
    fn missed_target_display() {
        assert_eq!(MissedTarget { c: 2, d: -3 }.to_string(), "2(m-2)-3");
        assert_eq!(MissedTarget { c: 5, d: 5 }.to_string(), "5(m-2)+5");
        assert_eq!(MissedTarget { c: 1, d: 0 }.at(12), Some(10));
    }
}
