//! Generalized polygonal numbers.
//!
//! `P_m(x) = ((m-2)x^2 - (m-4)x) / 2` for every integer `x`. The value is a
//! nonnegative integer for all `m >= 3`, and for `|x| >= 1` it is
//! nondecreasing in `|x|` on each side of zero, so scanning outward from
//! zero until the value passes a bound enumerates a value set exactly.

use crate::error::{Error, Result};

pub(crate) fn check_order(m: u64) -> Result<()> {
    if m < 3 {
        return Err(Error::InvalidOrder(m));
    }
    Ok(())
}

/// The `x`-th generalized `m`-gonal number, with checked 64-bit arithmetic.
pub fn polygonal_number(m: u64, x: i64) -> Result<u64> {
    check_order(m)?;
    let overflow = || Error::Overflow("polygonal number");
    let mi = i64::try_from(m).map_err(|_| overflow())?;
    let square = x.checked_mul(x).ok_or_else(overflow)?;
    let quad = (mi - 2).checked_mul(square).ok_or_else(overflow)?;
    let lin = (mi - 4).checked_mul(x).ok_or_else(overflow)?;
    let twice = quad.checked_sub(lin).ok_or_else(overflow)?;
    debug_assert!(twice >= 0 && twice % 2 == 0);
    Ok((twice / 2) as u64)
}

/// Scaled values `coeff * P_m(x) <= limit`, paired with one `x` realizing
/// each value. Sorted by value, deduplicated; the `x` kept for a value is the
/// first one met scanning `0, 1, -1, 2, -2, ...`.
pub(crate) fn scaled_values(m: u64, coeff: u64, limit: u64) -> Result<Vec<(u64, i64)>> {
    check_order(m)?;
    if coeff == 0 {
        return Err(Error::ZeroCoefficient);
    }
    let mut out = vec![(0u64, 0i64)];
    for sign in [1i64, -1] {
        let mut k: i64 = 1;
        loop {
            let x = sign * k;
            let p = polygonal_number(m, x)?;
            let v = p
                .checked_mul(coeff)
                .ok_or(Error::Overflow("scaled polygonal value"))?;
            if v > limit {
                break;
            }
            out.push((v, x));
            k += 1;
        }
    }
    // stable sort keeps the positive-side witness first for equal values
    out.sort_by_key(|&(v, _)| v);
    out.dedup_by_key(|&mut (v, _)| v);
    Ok(out)
}

/// `{ P_m(x) : x in Z } ∩ [0, limit]`, sorted and deduplicated.
pub fn polygonal_values_up_to(m: u64, limit: u64) -> Result<Vec<u64>> {
    Ok(scaled_values(m, 1, limit)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(polygonal_number(3, 0).unwrap(), 0);
        assert_eq!(polygonal_number(5, 3).unwrap(), 12);
        assert_eq!(polygonal_number(7, -1).unwrap(), 4);
        let pentagonal: Vec<u64> = (1..=4).map(|x| polygonal_number(5, x).unwrap()).collect();
        assert_eq!(pentagonal, vec![1, 5, 12, 22]);
    }

    #[test]
    fn triangular_has_two_zeros() {
        assert_eq!(polygonal_number(3, -1).unwrap(), 0);
        assert_eq!(polygonal_number(3, -2).unwrap(), 1);
    }

    #[test]
    fn value_sets() {
        assert_eq!(polygonal_values_up_to(3, 10).unwrap(), vec![0, 1, 3, 6, 10]);
        assert_eq!(polygonal_values_up_to(6, 10).unwrap(), vec![0, 1, 3, 6, 10]);
        assert_eq!(polygonal_values_up_to(20, 17).unwrap(), vec![0, 1, 17]);
        assert_eq!(polygonal_values_up_to(9, 0).unwrap(), vec![0]);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(
            polygonal_number(1000, i64::MAX / 2),
            Err(Error::Overflow("polygonal number"))
        );
        assert!(polygonal_number(u64::MAX, 2).is_err());
    }

    #[test]
    fn rejects_small_order() {
        assert_eq!(polygonal_number(2, 1), Err(Error::InvalidOrder(2)));
    }

    #[test]
    fn scaled_values_keep_witnesses() {
        for (v, x) in scaled_values(8, 3, 500).unwrap() {
            assert_eq!(3 * polygonal_number(8, x).unwrap(), v);
        }
    }
}
