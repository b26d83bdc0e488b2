//! Per-target representation search.
//!
//! Depth-first over the coefficients from largest to smallest. Each
//! variable ranges over the exact set `{x : a P_m(x) <= remaining}`, so an
//! exhausted search proves non-representation. Failed `(level, remaining)`
//! states are memoized, which keeps the worst case at
//! `O(n * N * |values|)`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::form::{MGonalForm, Representation, SearchConfig};
use crate::polygonal::scaled_values;

/// Dense failure memo below this target, hashed above it.
const DENSE_MEMO_LIMIT: u64 = 1 << 20;

enum FailMemo {
    Dense(Vec<Vec<bool>>),
    Sparse(Vec<HashSet<u64>>),
}

impl FailMemo {
    fn new(levels: usize, target: u64) -> Self {
        if target < DENSE_MEMO_LIMIT {
            FailMemo::Dense(vec![vec![false; target as usize + 1]; levels])
        } else {
            FailMemo::Sparse(vec![HashSet::new(); levels])
        }
    }

    fn contains(&self, level: usize, r: u64) -> bool {
        match self {
            FailMemo::Dense(v) => v[level][r as usize],
            FailMemo::Sparse(v) => v[level].contains(&r),
        }
    }

    fn insert(&mut self, level: usize, r: u64) {
        match self {
            FailMemo::Dense(v) => v[level][r as usize] = true,
            FailMemo::Sparse(v) => {
                v[level].insert(r);
            }
        }
    }
}

struct Dfs<'a> {
    // value lists indexed like the form's coefficients
    values: Vec<&'a [(u64, i64)]>,
    memo: FailMemo,
    xs: Vec<i64>,
    nodes: u64,
    budget: u64,
}

impl Dfs<'_> {
    /// Tries to write `r` with variables `0..=level`.
    fn solve(&mut self, level: usize, r: u64) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        let list = self.values[level];
        if level == 0 {
            return Ok(match list.binary_search_by_key(&r, |&(v, _)| v) {
                Ok(i) => {
                    self.xs[0] = list[i].1;
                    true
                }
                Err(_) => false,
            });
        }
        if self.memo.contains(level, r) {
            return Ok(false);
        }
        for &(v, x) in list {
            if v > r {
                break;
            }
            if self.solve(level - 1, r - v)? {
                self.xs[level] = x;
                return Ok(true);
            }
        }
        self.memo.insert(level, r);
        Ok(false)
    }
}

/// Finds `x` with `F_m(x) = target`.
///
/// `Ok(None)` means the target is not represented. Hitting the node budget
/// yields `Err(Error::BudgetExhausted)` instead, never `Ok(None)`.
pub fn find_representation(
    form: &MGonalForm,
    target: u64,
    cfg: &SearchConfig,
) -> Result<Option<Representation>> {
    if target > cfg.max_value {
        return Err(Error::TargetTooLarge {
            target,
            cap: cfg.max_value,
        });
    }
    let m = form.order();
    let mut by_coeff: HashMap<u64, Vec<(u64, i64)>> = HashMap::new();
    for &a in form.coeffs() {
        if let std::collections::hash_map::Entry::Vacant(e) = by_coeff.entry(a) {
            e.insert(scaled_values(m, a, target)?);
        }
    }
    let values = form
        .coeffs()
        .iter()
        .map(|a| by_coeff[a].as_slice())
        .collect::<Vec<_>>();
    let n = form.rank();
    let mut dfs = Dfs {
        values,
        memo: FailMemo::new(n, target),
        xs: vec![0; n],
        nodes: 0,
        budget: cfg.node_budget,
    };
    if dfs.solve(n - 1, target)? {
        Representation::new(form, dfs.xs, target).map(Some)
    } else {
        Ok(None)
    }
}

/// Whether `form` represents `target`, searching without a node budget.
pub fn represents(form: &MGonalForm, target: u64) -> Result<bool> {
    Ok(find_representation(form, target, &SearchConfig::unlimited())?.is_some())
}
