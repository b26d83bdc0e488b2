use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygonal::{check_order, polygonal_number};

/// A weighted m-gonal form `a_1 P_m(x_1) + ... + a_n P_m(x_n)`.
///
/// Coefficients are positive and nondecreasing; unsorted input is rejected
/// rather than silently reordered.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MGonalForm {
    m: u64,
    coeffs: Vec<u64>,
}

impl MGonalForm {
    pub fn new(m: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_order(m)?;
        validate_coeffs(&coeffs)?;
        if coeffs.is_empty() {
            return Err(Error::EmptyForm);
        }
        Ok(Self { m, coeffs })
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_1 + ... + a_n`, saturating (only ever compared against bounds).
    pub fn coeff_sum(&self) -> u64 {
        self.coeffs.iter().fold(0u64, |s, &a| s.saturating_add(a))
    }

    /// The sub-form on the first `i` coefficients.
    pub fn prefix(&self, i: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::EmptyForm);
        }
        Ok(Self {
            m: self.m,
            coeffs: self.coeffs[..i.min(self.coeffs.len())].to_vec(),
        })
    }

    /// Appends a coefficient that is at least the current largest one.
    pub fn extended(&self, a: u64) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(a);
        Self::new(self.m, coeffs)
    }

    pub fn evaluate(&self, xs: &[i64]) -> Result<u64> {
        if xs.len() != self.coeffs.len() {
            return Err(Error::WitnessLength {
                expected: self.coeffs.len(),
                got: xs.len(),
            });
        }
        let mut total = 0u64;
        for (&a, &x) in self.coeffs.iter().zip(xs) {
            let term = polygonal_number(self.m, x)?
                .checked_mul(a)
                .ok_or(Error::Overflow("form evaluation"))?;
            total = total
                .checked_add(term)
                .ok_or(Error::Overflow("form evaluation"))?;
        }
        Ok(total)
    }
}

impl fmt::Display for MGonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "<{}>_{}", parts.join(","), self.m)
    }
}

pub(crate) fn validate_coeffs(coeffs: &[u64]) -> Result<()> {
    if coeffs.contains(&0) {
        return Err(Error::ZeroCoefficient);
    }
    if let Some(w) = coeffs.windows(2).find(|w| w[0] > w[1]) {
        return Err(Error::Unsorted {
            prev: w[0],
            next: w[1],
        });
    }
    Ok(())
}

/// An assignment `x` with `F_m(x) = target`, checked when constructed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    xs: Vec<i64>,
}

impl Representation {
    pub fn new(form: &MGonalForm, xs: Vec<i64>, target: u64) -> Result<Self> {
        let actual = form.evaluate(&xs)?;
        if actual != target {
            return Err(Error::WitnessMismatch {
                expected: target,
                actual,
            });
        }
        Ok(Self { xs })
    }

    pub fn xs(&self) -> &[i64] {
        &self.xs
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.xs
    }
}

/// A target written as `A(m-2) + B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetClass {
    pub a: u64,
    pub b: i64,
    pub m: u64,
}

impl TargetClass {
    pub fn value(&self) -> Result<i64> {
        let step = i64::try_from(self.m - 2).map_err(|_| Error::Overflow("target class"))?;
        i64::try_from(self.a)
            .ok()
            .and_then(|a| a.checked_mul(step))
            .and_then(|v| v.checked_add(self.b))
            .ok_or(Error::Overflow("target class"))
    }

    /// The value as a representation target; `None` when negative.
    pub fn target(&self) -> Result<Option<u64>> {
        let v = self.value()?;
        Ok(u64::try_from(v).ok())
    }
}

/// Writes `n = A(m-2) + B` with `B` in the window
/// `[window_lo, window_lo + m - 3]`.
///
/// `A` is clamped at zero, so when `n` lies below the window the returned
/// `B` falls under `window_lo`; callers choosing negative windows get the
/// canonical split for every `n >= window_lo + (m - 2)`.
pub fn decompose(n: u64, m: u64, window_lo: i64) -> Result<TargetClass> {
    check_order(m)?;
    let step = i64::try_from(m - 2).map_err(|_| Error::Overflow("decompose"))?;
    let n = i64::try_from(n).map_err(|_| Error::Overflow("decompose"))?;
    let shifted = n
        .checked_sub(window_lo)
        .ok_or(Error::Overflow("decompose"))?;
    let a = shifted.div_euclid(step).max(0);
    let b = n - a * step;
    Ok(TargetClass { a: a as u64, b, m })
}

/// Caps for a single representation search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest target accepted.
    pub max_value: u64,
    /// Search nodes visited before giving up with `BudgetExhausted`.
    pub node_budget: u64,
}

impl SearchConfig {
    pub fn new(max_value: u64, node_budget: u64) -> Result<Self> {
        if max_value == 0 || node_budget == 0 {
            return Err(Error::NonPositiveBudget);
        }
        Ok(Self {
            max_value,
            node_budget,
        })
    }

    pub fn unlimited() -> Self {
        Self {
            max_value: u64::MAX,
            node_budget: u64::MAX,
        }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self::unlimited()
    }
}
