//! Binary-by-diagonal lattice representations and the closed-form
//! sufficient conditions for the four quaternary forms
//! `<1,1,1,1>, <1,1,1,2>, <1,1,1,4>, <1,1,2,2>, <1,1,2,3>, <1,1,2,4>,
//! <1,2,2,2>, <1,2,2,3>`.
//!
//! A target `A(m-2)+B` is represented by `<a_1..a_n>_m` whenever the system
//! `sum a_i x_i = B`, `sum a_i x_i^2 = 2A+B` has an integer solution, i.e.
//! whenever the binary lattice `[a_1+..+a_n, B, 2A+B]` is represented by the
//! diagonal lattice `<a_1, .., a_n>` through a vector pair whose first
//! member is all ones.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{MGonalForm, Representation, SearchConfig, TargetClass};
use crate::report::{Cell, VerificationReport};
use crate::search::find_representation;

/// Whether `n = 4^l (8k + 7)` for some `l, k >= 0`, i.e. `n` is not a sum of
/// three squares.
pub fn in_exceptional_set(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    while n.is_multiple_of(4) {
        n /= 4;
    }
    n % 8 == 7
}

fn exceptional_i128(d: i128) -> bool {
    d > 0 && u64::try_from(d).is_ok_and(in_exceptional_set)
}

/// The eight quaternary forms carrying closed-form sufficient conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LemmaPart {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
}

impl LemmaPart {
    pub const ALL: [LemmaPart; 8] = [
        LemmaPart::P1,
        LemmaPart::P2,
        LemmaPart::P3,
        LemmaPart::P4,
        LemmaPart::P5,
        LemmaPart::P6,
        LemmaPart::P7,
        LemmaPart::P8,
    ];

    /// Part number, 1 through 8.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(k: u8) -> Option<Self> {
        Self::ALL.get(usize::from(k).checked_sub(1)?).copied()
    }

    pub fn coeffs(self) -> [u64; 4] {
        match self {
            LemmaPart::P1 => [1, 1, 1, 1],
            LemmaPart::P2 => [1, 1, 1, 2],
            LemmaPart::P3 => [1, 1, 1, 4],
            LemmaPart::P4 => [1, 1, 2, 2],
            LemmaPart::P5 => [1, 1, 2, 3],
            LemmaPart::P6 => [1, 1, 2, 4],
            LemmaPart::P7 => [1, 2, 2, 2],
            LemmaPart::P8 => [1, 2, 2, 3],
        }
    }

    pub fn coeff_sum(self) -> u64 {
        self.coeffs().iter().sum()
    }

    pub fn form(self, m: u64) -> Result<MGonalForm> {
        MGonalForm::new(m, self.coeffs().to_vec())
    }
}

/// The sufficient condition for `A(m-2)+B` to be represented by the
/// quaternary form of `part`, including its nonnegativity clause.
///
/// Every condition involves `s(2A+B) - B^2` where `s` is the coefficient
/// sum: the discriminant of the binary lattice `[s, B, 2A+B]`.
pub fn lemma_predicate(part: LemmaPart, a: i64, b: i64) -> bool {
    let (a, b) = (i128::from(a), i128::from(b));
    let s = i128::from(part.coeff_sum());
    let disc = s * (2 * a + b) - b * b;
    if disc < 0 {
        return false;
    }
    match part {
        LemmaPart::P1 | LemmaPart::P3 | LemmaPart::P4 => !exceptional_i128(disc),
        LemmaPart::P2 => !(a.rem_euclid(5) == 0 && b.rem_euclid(5) == 0),
        LemmaPart::P5 => !(a.rem_euclid(7) == 0 && b.rem_euclid(7) == 0),
        LemmaPart::P6 => {
            let a_odd = a.rem_euclid(2) == 1;
            let b8 = b.rem_euclid(8);
            !((a_odd && b8 == 4) || (!a_odd && b8 == 0))
        }
        LemmaPart::P7 => !(disc % 2 == 0 && exceptional_i128(disc / 2)),
        LemmaPart::P8 => b.rem_euclid(4) != 0,
    }
}

/// Gram data `[q1, b, q2]` of a binary lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryLattice {
    pub q1: i64,
    pub b: i64,
    pub q2: i64,
}

impl BinaryLattice {
    pub fn new(q1: i64, b: i64, q2: i64) -> Self {
        Self { q1, b, q2 }
    }

    /// `q1 q2 - b^2`, exact for all 64-bit entries.
    pub fn discriminant(&self) -> i128 {
        i128::from(self.q1) * i128::from(self.q2) - i128::from(self.b) * i128::from(self.b)
    }
}

/// Diagonal lattice `<d_1, .., d_n>` with positive entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalLattice {
    ds: Vec<u64>,
}

impl DiagonalLattice {
    pub fn new(ds: Vec<u64>) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::EmptyForm);
        }
        if ds.contains(&0) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(Self { ds })
    }

    pub fn entries(&self) -> &[u64] {
        &self.ds
    }

    pub fn quadratic(&self, v: &[i64]) -> i128 {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, u: &[i64], v: &[i64]) -> i128 {
        self.ds
            .iter()
            .zip(u.iter().zip(v))
            .map(|(&d, (&x, &y))| i128::from(d) * i128::from(x) * i128::from(y))
            .sum()
    }
}

/// Coordinate bound that suffices for any vector of norm `max(q1, q2)`.
pub fn default_bound(bin: &BinaryLattice, diag: &DiagonalLattice) -> i64 {
    let top = bin.q1.max(bin.q2).max(0) as u64;
    let dmin = *diag.ds.iter().min().expect("nonempty");
    ((top / dmin) as f64).sqrt() as i64 + 1
}

/// Calls `visit` on every vector with `Q(v) = norm` and coordinates in
/// `[-bound, bound]`, stopping as soon as `visit` returns true.
fn for_each_vector_of_norm(
    ds: &[u64],
    norm: i128,
    bound: i64,
    visit: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    fn go(
        ds: &[u64],
        i: usize,
        left: i128,
        bound: i64,
        cur: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]) -> bool,
    ) -> bool {
        if i == ds.len() {
            return left == 0 && visit(cur);
        }
        let d = i128::from(ds[i]);
        // 0, 1, -1, 2, -2, ...
        for k in 0..=2 * bound {
            let x = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
            let cost = d * i128::from(x) * i128::from(x);
            // costs are nondecreasing along 0, 1, -1, 2, -2, ...
            if cost > left {
                break;
            }
            cur.push(x);
            let done = go(ds, i + 1, left - cost, bound, cur, visit);
            cur.pop();
            if done {
                return true;
            }
        }
        false
    }
    if norm < 0 {
        return false;
    }
    go(ds, 0, norm, bound, &mut Vec::with_capacity(ds.len()), visit)
}

/// Brute-force search for `u, v` with `Q(u) = q1`, `B(u, v) = b`,
/// `Q(v) = q2` under the diagonal form, all coordinates in
/// `[-bound, bound]`. `None` only speaks for the box searched.
pub fn binary_by_diagonal(
    bin: &BinaryLattice,
    diag: &DiagonalLattice,
    bound: i64,
) -> Result<Option<(Vec<i64>, Vec<i64>)>> {
    if bound < 1 {
        return Err(Error::NonPositiveBudget);
    }
    let ds = diag.entries();
    let mut found = None;
    for_each_vector_of_norm(ds, i128::from(bin.q1), bound, &mut |u| {
        let u = u.to_vec();
        for_each_vector_of_norm(ds, i128::from(bin.q2), bound, &mut |v| {
            if diag.bilinear(&u, v) == i128::from(bin.b) {
                found = Some((u.clone(), v.to_vec()));
                true
            } else {
                false
            }
        })
    });
    Ok(found)
}

/// Maps a solution of `2x_1 = B, sum x_i^2 = 2A+B` to one of
/// `sum x_i = B, sum x_i^2 = 2A+B` by the half-sum transformation.
pub fn lift_even_solution(xs: [i64; 4]) -> Result<[i64; 4]> {
    let [x1, x2, x3, x4] = xs;
    let total = x1 + x2 + x3 + x4;
    if total % 2 != 0 {
        return Err(Error::OddCoordinateSum(total));
    }
    Ok([
        (x1 + x2 - x3 - x4) / 2,
        (x1 - x2 + x3 - x4) / 2,
        (x1 - x2 - x3 + x4) / 2,
        total / 2,
    ])
}

/// Outcome of checking one `(part, m, A, B)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaCheck {
    /// Condition holds and the target is represented.
    Confirmed(Representation),
    /// Condition fails but the target is represented anyway.
    RepresentedOutsideCondition(Representation),
    /// Condition fails and the target is not represented.
    Unrepresented,
    /// Condition holds and the target is not represented.
    Counterexample,
    /// `A(m-2)+B` is not positive.
    NotPositive,
}

pub fn cross_check_lemma(part: LemmaPart, m: u64, a: u64, b: i64) -> Result<LemmaCheck> {
    let target = match (TargetClass { a, b, m }).target()? {
        Some(t) if t > 0 => t,
        _ => return Ok(LemmaCheck::NotPositive),
    };
    let holds = lemma_predicate(
        part,
        i64::try_from(a).map_err(|_| Error::Overflow("lemma check"))?,
        b,
    );
    let found = find_representation(&part.form(m)?, target, &SearchConfig::unlimited())?;
    Ok(match (holds, found) {
        (true, Some(r)) => LemmaCheck::Confirmed(r),
        (true, None) => LemmaCheck::Counterexample,
        (false, Some(r)) => LemmaCheck::RepresentedOutsideCondition(r),
        (false, None) => LemmaCheck::Unrepresented,
    })
}

/// Checks every part over `m` in `ms` (restricted to `m >= 9` and
/// `m > coefficient sum + 4`), `A` in `as_`, `|B| <= m`.
///
/// Cells are emitted for condition-true targets (pass or fail) and for
/// condition-false targets that are represented anyway (informational).
pub fn sweep_lemma33(
    parts: &[LemmaPart],
    ms: RangeInclusive<u64>,
    as_: RangeInclusive<u64>,
) -> Result<VerificationReport> {
    let jobs: Vec<(LemmaPart, u64)> = parts
        .iter()
        .flat_map(|&p| {
            ms.clone()
                .filter(move |&m| m >= 9 && m > p.coeff_sum() + 4)
                .map(move |m| (p, m))
        })
        .collect();
    let chunks: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(part, m)| -> Result<Vec<Cell>> {
            let mut cells = Vec::new();
            let mi = m as i64;
            for a in as_.clone() {
                for b in -mi..=mi {
                    let label = format!("part={} m={m} A={a} B={b}", part.number());
                    let cell = match cross_check_lemma(part, m, a, b)? {
                        LemmaCheck::Confirmed(r) => Cell::pass(label).with_witness(r.into_inner()),
                        LemmaCheck::Counterexample => {
                            Cell::fail(label, "condition holds but target is not represented")
                        }
                        LemmaCheck::RepresentedOutsideCondition(r) => {
                            Cell::info(label, "represented although the condition fails")
                                .with_witness(r.into_inner())
                        }
                        LemmaCheck::Unrepresented | LemmaCheck::NotPositive => continue,
                    };
                    let target = (TargetClass { a, b, m }).target()?.unwrap_or_default();
                    cells.push(cell.with_target(target));
                }
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_cells(
        "lemma33",
        chunks.into_iter().flatten().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceptional_examples() {
        assert!(in_exceptional_set(7));
        assert!(in_exceptional_set(112));
        assert!(!in_exceptional_set(8));
        assert!(!in_exceptional_set(0));
        assert!(in_exceptional_set(15));
        assert!(in_exceptional_set(28));
    }

    #[test]
    fn predicate_examples() {
        assert!(lemma_predicate(LemmaPart::P1, 0, 1));
        assert!(!lemma_predicate(LemmaPart::P6, 1, 4));
        assert!(!lemma_predicate(LemmaPart::P6, 2, 8));
        assert!(lemma_predicate(LemmaPart::P6, 2, 4));
        assert!(!lemma_predicate(LemmaPart::P2, 5, 5));
        assert!(lemma_predicate(LemmaPart::P2, 5, 4));
        assert!(!lemma_predicate(LemmaPart::P8, 3, 4));
        // 8A+4B-B^2 < 0
        assert!(!lemma_predicate(LemmaPart::P1, 0, 5));
        // part 7 excludes 2 * 7 = 14: 14A+7B-B^2 = 14 at A=1, B=0
        assert!(!lemma_predicate(LemmaPart::P7, 1, 0));
        // 8*3 + 4*2 - 4 = 28 = 4 * 7
        assert!(!lemma_predicate(LemmaPart::P1, 3, 2));
        assert!(lemma_predicate(LemmaPart::P1, 1, 1));
    }

    #[test]
    fn part_numbers_roundtrip() {
        for p in LemmaPart::ALL {
            assert_eq!(LemmaPart::from_number(p.number()), Some(p));
        }
        assert_eq!(LemmaPart::from_number(0), None);
        assert_eq!(LemmaPart::from_number(9), None);
    }

    fn check_pair(bin: BinaryLattice, diag: &DiagonalLattice, bound: i64) {
        let (u, v) = binary_by_diagonal(&bin, diag, bound).unwrap().unwrap();
        assert_eq!(diag.quadratic(&u), i128::from(bin.q1));
        assert_eq!(diag.quadratic(&v), i128::from(bin.q2));
        assert_eq!(diag.bilinear(&u, &v), i128::from(bin.b));
    }

    #[test]
    fn binary_by_diagonal_examples() {
        let d4 = DiagonalLattice::new(vec![1, 1, 1, 1]).unwrap();
        check_pair(BinaryLattice::new(4, 0, 2), &d4, 3);
        check_pair(BinaryLattice::new(4, 1, 1), &d4, 2);
        let d3 = DiagonalLattice::new(vec![1, 1, 1]).unwrap();
        check_pair(BinaryLattice::new(3, 1, 1), &d3, 2);
        // positive-definite binary needs disc >= 0
        assert_eq!(
            binary_by_diagonal(&BinaryLattice::new(1, 2, 1), &d3, 3).unwrap(),
            None
        );
        assert!(binary_by_diagonal(&BinaryLattice::new(1, 0, 1), &d3, 0).is_err());
    }

    #[test]
    fn default_bound_covers_norms() {
        let d = DiagonalLattice::new(vec![1, 2]).unwrap();
        assert_eq!(default_bound(&BinaryLattice::new(9, 0, 3), &d), 4);
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_even_solution([1, 1, 1, 1]).unwrap(), [0, 0, 0, 2]);
        assert_eq!(lift_even_solution([2, 0, 0, 0]).unwrap(), [1, 1, 1, 1]);
        assert_eq!(lift_even_solution([1, 1, 0, 0]).unwrap(), [1, 0, 0, 1]);
        assert_eq!(
            lift_even_solution([1, 0, 0, 0]),
            Err(Error::OddCoordinateSum(1))
        );
    }

    #[test]
    fn cross_check_examples() {
        assert!(matches!(
            cross_check_lemma(LemmaPart::P2, 20, 1, 2).unwrap(),
            LemmaCheck::Confirmed(_)
        ));
        assert!(matches!(
            cross_check_lemma(LemmaPart::P1, 7, 0, 3).unwrap(),
            LemmaCheck::Confirmed(_)
        ));
        assert!(matches!(
            cross_check_lemma(LemmaPart::P8, 12, 1, 1).unwrap(),
            LemmaCheck::Confirmed(_)
        ));
        assert_eq!(
            cross_check_lemma(LemmaPart::P1, 12, 0, -1).unwrap(),
            LemmaCheck::NotPositive
        );
    }
}
