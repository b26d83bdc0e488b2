//! Bulk representability by Boolean convolution.
//!
//! A [`ReachSet`] holds the set of integers in `[0, limit]` represented by
//! the coefficients added so far. Adding a coefficient `a` replaces the set
//! `S` by `S + {a P_m(x)}` using word-level shift-or.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::MGonalForm;
use crate::polygonal::scaled_values;

/// Fixed-length bitset over `[0, len)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bitset {
    len: u64,
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: u64) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64) as usize],
        }
    }

    /// Rebuilds a bitset from raw words; bits at or past `len` must be clear.
    pub fn from_words(len: u64, words: Vec<u64>) -> Option<Self> {
        if words.len() as u64 != len.div_ceil(64) {
            return None;
        }
        let b = Self { len, words };
        if b.tail_is_clean() {
            Some(b)
        } else {
            None
        }
    }

    fn tail_is_clean(&self) -> bool {
        let rem = self.len % 64;
        rem == 0 || self.words.last().is_none_or(|w| w >> rem == 0)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: u64) -> bool {
        i < self.len && self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: u64) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn all(&self) -> bool {
        self.count_ones() == self.len
    }

    /// First clear bit at or after `from`.
    pub fn first_clear_from(&self, from: u64) -> Option<u64> {
        if from >= self.len {
            return None;
        }
        let mut wi = (from / 64) as usize;
        let mut w = !self.words[wi] & (!0u64 << (from % 64));
        loop {
            if w != 0 {
                let i = wi as u64 * 64 + u64::from(w.trailing_zeros());
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            w = !self.words[wi];
        }
    }

    /// `self |= src << shift`, dropping bits shifted past the end.
    fn or_shifted(&mut self, src: &Bitset, shift: u64) {
        let ws = (shift / 64) as usize;
        let bs = (shift % 64) as u32;
        let n = self.words.len();
        if ws >= n {
            return;
        }
        if bs == 0 {
            for i in ws..n {
                self.words[i] |= src.words[i - ws];
            }
        } else {
            self.words[ws] |= src.words[0] << bs;
            for i in ws + 1..n {
                let s = i - ws;
                self.words[i] |= (src.words[s] << bs) | (src.words[s - 1] >> (64 - bs));
            }
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Integers in `[0, limit]` represented by a growing list of coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    m: u64,
    limit: u64,
    bits: Bitset,
}

impl ReachSet {
    /// The empty form: only 0 is represented.
    pub fn new(m: u64, limit: u64) -> Result<Self> {
        crate::polygonal::check_order(m)?;
        let len = limit.checked_add(1).ok_or(Error::Overflow("reach set"))?;
        let mut bits = Bitset::new(len);
        bits.set(0);
        Ok(Self { m, limit, bits })
    }

    pub fn for_form(form: &MGonalForm, limit: u64) -> Result<Self> {
        let mut r = Self::new(form.order(), limit)?;
        for &a in form.coeffs() {
            r.add_coefficient(a)?;
        }
        Ok(r)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn bits(&self) -> &Bitset {
        &self.bits
    }

    pub fn add_coefficient(&mut self, a: u64) -> Result<()> {
        let values = scaled_values(self.m, a, self.limit)?;
        let mut next = self.bits.clone();
        self.convolve_into(&values, &mut next);
        self.bits = next;
        Ok(())
    }

    /// Writes `self + a P_m` into `out`, reusing its allocation.
    pub(crate) fn extend_into(&self, values: &[(u64, i64)], out: &mut ReachSet) {
        out.m = self.m;
        out.limit = self.limit;
        out.bits.len = self.bits.len;
        out.bits.words.clear();
        out.bits.words.extend_from_slice(&self.bits.words);
        self.convolve_into(values, &mut out.bits);
    }

    fn convolve_into(&self, values: &[(u64, i64)], out: &mut Bitset) {
        // values[0] is 0, already present as the copy of self
        for &(v, _) in values.iter().skip(1) {
            out.or_shifted(&self.bits, v);
        }
        out.clear_tail();
    }

    pub fn contains(&self, n: u64) -> bool {
        self.bits.get(n)
    }

    /// Smallest positive integer in `[1, limit]` not yet represented.
    pub fn truant(&self) -> Option<u64> {
        self.bits.first_clear_from(1)
    }
}

/// Representability of every integer in `[lo, hi]`, bit `i` standing for
/// `lo + i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeBits {
    pub lo: u64,
    pub hi: u64,
    pub bits: Bitset,
}

impl RangeBits {
    pub fn represents(&self, n: u64) -> Option<bool> {
        (self.lo..=self.hi)
            .contains(&n)
            .then(|| self.bits.get(n - self.lo))
    }

    pub fn all(&self) -> bool {
        self.bits.all()
    }

    /// Smallest non-represented integer in the range.
    pub fn first_miss(&self) -> Option<u64> {
        self.bits.first_clear_from(0).map(|i| self.lo + i)
    }
}

pub fn represents_range(form: &MGonalForm, lo: u64, hi: u64) -> Result<RangeBits> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let reach = ReachSet::for_form(form, hi)?;
    let mut bits = Bitset::new(hi - lo + 1);
    for n in lo..=hi {
        if reach.contains(n) {
            bits.set(n - lo);
        }
    }
    Ok(RangeBits { lo, hi, bits })
}

/// Smallest positive integer `<= limit` that `form` misses.
pub fn truant(form: &MGonalForm, limit: u64) -> Result<Option<u64>> {
    if limit == 0 {
        return Err(Error::NonPositiveBudget);
    }
    Ok(ReachSet::for_form(form, limit)?.truant())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(m: u64, c: &[u64]) -> MGonalForm {
        MGonalForm::new(m, c.to_vec()).unwrap()
    }

    #[test]
    fn truants() {
        assert_eq!(truant(&form(3, &[1]), 100).unwrap(), Some(2));
        assert_eq!(truant(&form(3, &[1, 1]), 100).unwrap(), Some(5));
        assert_eq!(truant(&form(5, &[1]), 100).unwrap(), Some(3));
        assert_eq!(truant(&form(6, &[1, 1, 2]), 1000).unwrap(), None);
    }

    #[test]
    fn ranges() {
        let r = represents_range(&form(6, &[1, 1, 2]), 1, 1000).unwrap();
        assert!(r.all());
        let r = represents_range(&form(7, &[1, 1, 1]), 1, 10).unwrap();
        assert_eq!(r.first_miss(), Some(10));
        assert_eq!(r.bits.count_ones(), 9);
        for m in 6..50 {
            let r = represents_range(&form(m, &[1]), 1, m - 4).unwrap();
            assert_eq!(r.bits.count_ones(), 1);
            assert_eq!(r.represents(1), Some(true));
        }
        assert!(represents_range(&form(5, &[1]), 3, 2).is_err());
    }

    #[test]
    fn first_clear_across_words() {
        let mut b = Bitset::new(200);
        for i in 0..150 {
            b.set(i);
        }
        assert_eq!(b.first_clear_from(0), Some(150));
        assert_eq!(b.first_clear_from(160), Some(160));
        for i in 150..200 {
            b.set(i);
        }
        assert_eq!(b.first_clear_from(0), None);
        assert!(b.all());
    }

    #[test]
    fn shift_or_matches_naive() {
        let mut src = Bitset::new(300);
        for i in [0u64, 1, 5, 63, 64, 65, 127, 200] {
            src.set(i);
        }
        for shift in [0u64, 1, 63, 64, 65, 130, 299, 300, 500] {
            let mut dst = Bitset::new(300);
            dst.or_shifted(&src, shift);
            dst.clear_tail();
            for i in 0..300 {
                let expect = i >= shift && src.get(i - shift);
                assert_eq!(dst.get(i), expect, "shift {shift} bit {i}");
            }
        }
    }

    #[test]
    fn from_words_rejects_dirty_tail() {
        assert!(Bitset::from_words(3, vec![0b111]).is_some());
        assert!(Bitset::from_words(3, vec![0b1000]).is_none());
        assert!(Bitset::from_words(65, vec![0]).is_none());
    }
}
