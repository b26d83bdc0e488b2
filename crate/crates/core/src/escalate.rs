//! Truant-driven escalation.
//!
//! Starting from a root prefix, each form that misses some integer up to the
//! universality bound branches on one more coefficient, taken between its
//! largest coefficient and its truant. A child with a larger coefficient
//! would still miss the truant, so these children cover every form that
//! gets past it. The largest truant seen over a finished tree is the
//! empirical `gamma` for the root.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::candidates::{is_escalator_prefix, resolved_candidates};
use crate::error::{Error, Result};
use crate::form::MGonalForm;
use crate::polygonal::{check_order, scaled_values};
use crate::sieve::ReachSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeStatus {
    /// Represents everything up to the bound and a theorem covers it.
    UniversalCertified,
    /// Represents everything up to the bound, without a certificate.
    UniversalEmpirical,
    /// Has a truant.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscalationNode {
    pub coeffs: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truant: Option<u64>,
    pub status: NodeStatus,
    /// Open node whose children were not expanded because of the depth cap.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub depth_capped: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<EscalationNode>,
}

impl EscalationNode {
    pub fn node_count(&self) -> u64 {
        1 + self.children.iter().map(|c| c.node_count()).sum::<u64>()
    }

    pub fn max_truant(&self) -> Option<u64> {
        self.children
            .iter()
            .filter_map(|c| c.max_truant())
            .chain(self.truant)
            .max()
    }

    /// Depth-first visit of every node.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a EscalationNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscalationConfig {
    /// Leaves must represent every integer in `[1, univ_bound]`.
    pub univ_bound: u64,
    /// Coefficients appended beyond the root before a node is left open.
    pub max_depth: usize,
    /// Stop expanding after this many nodes; the result is then a lower bound.
    pub max_nodes: u64,
}

impl EscalationConfig {
    pub const DEFAULT_DEPTH: usize = 12;
    pub const DEFAULT_MAX_NODES: u64 = 50_000_000;

    /// Bound `50(m-2)` and the default depth cap.
    pub fn for_order(m: u64) -> Self {
        Self {
            univ_bound: 50 * m.saturating_sub(2).max(1),
            max_depth: Self::DEFAULT_DEPTH,
            max_nodes: Self::DEFAULT_MAX_NODES,
        }
    }

    /// Settings for a prefixed tree: nodes whose coefficient sum is below
    /// `m - 4` always have a truant, so the depth cap is raised to `m`.
    pub fn for_prefix(m: u64) -> Self {
        Self {
            max_depth: (m as usize).max(Self::DEFAULT_DEPTH),
            ..Self::for_order(m)
        }
    }

    fn validate(&self, m: u64) -> Result<()> {
        if self.univ_bound == 0 || self.max_nodes == 0 {
            return Err(Error::NonPositiveBudget);
        }
        if self.univ_bound < m.saturating_sub(4) {
            return Err(Error::InvalidRange {
                lo: m.saturating_sub(4),
                hi: self.univ_bound,
            });
        }
        Ok(())
    }
}

/// Whether a theorem certifies universality of any form with these
/// coefficients that represents `[1, m-4]`: the first five coefficients are
/// a resolved candidate.
pub fn certifiable(m: u64, coeffs: &[u64]) -> bool {
    coeffs.len() >= 5
        && m >= 3
        && resolved_candidates()
            .iter()
            .any(|p| p.as_slice() == &coeffs[..5])
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Summary {
    nodes: u64,
    max_truant: Option<u64>,
    open_leaves: u64,
    aborted: bool,
}

impl Summary {
    fn absorb(&mut self, other: Summary) {
        self.nodes += other.nodes;
        self.max_truant = self.max_truant.max(other.max_truant);
        self.open_leaves += other.open_leaves;
        self.aborted |= other.aborted;
    }
}

struct Walker {
    m: u64,
    cfg: EscalationConfig,
    certifiable_prefixes: Vec<Vec<u64>>,
    values: HashMap<u64, Vec<(u64, i64)>>,
    levels: Vec<ReachSet>,
    coeffs: Vec<u64>,
    build: bool,
    summary: Summary,
}

impl Walker {
    fn new(m: u64, cfg: EscalationConfig, root: &ReachSet, coeffs: Vec<u64>, build: bool) -> Self {
        Self {
            m,
            cfg,
            certifiable_prefixes: resolved_candidates().into_iter().map(Vec::from).collect(),
            values: HashMap::new(),
            levels: vec![root.clone(); cfg.max_depth + 1],
            coeffs,
            build,
            summary: Summary::default(),
        }
    }

    fn values_for(&mut self, a: u64) -> Result<&[(u64, i64)]> {
        if !self.values.contains_key(&a) {
            let v = scaled_values(self.m, a, self.cfg.univ_bound)?;
            self.values.insert(a, v);
        }
        Ok(&self.values[&a])
    }

    fn status_of_universal(&self) -> NodeStatus {
        let c = &self.coeffs;
        if c.len() >= 5 && self.certifiable_prefixes.iter().any(|p| p[..] == c[..5]) {
            NodeStatus::UniversalCertified
        } else {
            NodeStatus::UniversalEmpirical
        }
    }

    /// Explores the node whose reach set sits at `levels[depth]`.
    fn explore(&mut self, depth: usize) -> Result<Option<EscalationNode>> {
        self.summary.nodes += 1;
        if self.summary.nodes > self.cfg.max_nodes {
            self.summary.aborted = true;
        }
        let truant = self.levels[depth].truant();
        self.summary.max_truant = self.summary.max_truant.max(truant);
        let mut node = EscalationNode {
            coeffs: if self.build {
                self.coeffs.clone()
            } else {
                Vec::new()
            },
            truant,
            status: NodeStatus::Open,
            depth_capped: false,
            children: Vec::new(),
        };
        let Some(t) = truant else {
            node.status = self.status_of_universal();
            return Ok(self.build.then_some(node));
        };
        if depth >= self.cfg.max_depth || self.summary.aborted {
            node.depth_capped = true;
            self.summary.open_leaves += 1;
            return Ok(self.build.then_some(node));
        }
        let lo = self.coeffs.last().copied().unwrap_or(1);
        for a in lo..=t {
            self.descend(depth, a, &mut node)?;
        }
        Ok(self.build.then_some(node))
    }

    fn descend(&mut self, depth: usize, a: u64, parent: &mut EscalationNode) -> Result<()> {
        self.values_for(a)?;
        let values = &self.values[&a];
        let (head, tail) = self.levels.split_at_mut(depth + 1);
        head[depth].extend_into(values, &mut tail[0]);
        self.coeffs.push(a);
        let child = self.explore(depth + 1);
        self.coeffs.pop();
        if let Some(c) = child? {
            parent.children.push(c);
        }
        Ok(())
    }
}

fn run(
    m: u64,
    root: &[u64],
    cfg: &EscalationConfig,
    build: bool,
) -> Result<(Option<EscalationNode>, Summary)> {
    check_order(m)?;
    cfg.validate(m)?;
    if !root.is_empty() && !is_escalator_prefix(root) {
        return Err(Error::NotEscalator(root.to_vec()));
    }
    let mut reach = ReachSet::new(m, cfg.univ_bound)?;
    for &a in root {
        reach.add_coefficient(a)?;
    }
    let mut top = Walker::new(m, *cfg, &reach, root.to_vec(), build);
    top.summary.nodes = 1;
    let truant = reach.truant();
    top.summary.max_truant = truant;
    let mut node = EscalationNode {
        coeffs: root.to_vec(),
        truant,
        status: NodeStatus::Open,
        depth_capped: false,
        children: Vec::new(),
    };
    let Some(t) = truant else {
        node.status = top.status_of_universal();
        return Ok((build.then_some(node), top.summary));
    };
    if cfg.max_depth == 0 {
        node.depth_capped = true;
        top.summary.open_leaves = 1;
        return Ok((build.then_some(node), top.summary));
    }
    let lo = root.last().copied().unwrap_or(1);
    // sibling subtrees are independent; each worker owns its reach stack
    let subtrees: Vec<(Option<EscalationNode>, Summary)> = (lo..=t)
        .into_par_iter()
        .map(|a| -> Result<_> {
            let mut w = Walker::new(m, *cfg, &reach, root.to_vec(), build);
            let mut holder = EscalationNode {
                coeffs: Vec::new(),
                truant: None,
                status: NodeStatus::Open,
                depth_capped: false,
                children: Vec::new(),
            };
            w.descend(0, a, &mut holder)?;
            Ok((holder.children.pop(), w.summary))
        })
        .collect::<Result<_>>()?;
    let mut summary = top.summary;
    for (child, s) in subtrees {
        summary.absorb(s);
        if let Some(c) = child {
            node.children.push(c);
        }
    }
    Ok((build.then_some(node), summary))
}

/// Builds the full escalation tree below `root_prefix` (which may be empty).
pub fn escalate(m: u64, root_prefix: &[u64], cfg: &EscalationConfig) -> Result<EscalationNode> {
    let (tree, _) = run(m, root_prefix, cfg, true)?;
    Ok(tree.expect("tree requested"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaStatus {
    /// Every leaf represents `[1, univ_bound]`.
    ExactUnderBound,
    /// Some leaf was left open; the value only bounds gamma from below.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaResult {
    pub value: u64,
    pub status: GammaStatus,
    pub univ_bound: u64,
    pub nodes: u64,
    pub open_leaves: u64,
}

fn gamma_from(m: u64, root: &[u64], cfg: &EscalationConfig) -> Result<GammaResult> {
    let (_, s) = run(m, root, cfg, false)?;
    let complete = s.open_leaves == 0 && !s.aborted;
    Ok(GammaResult {
        value: s.max_truant.unwrap_or(0),
        status: if complete {
            GammaStatus::ExactUnderBound
        } else {
            GammaStatus::LowerBound
        },
        univ_bound: cfg.univ_bound,
        nodes: s.nodes,
        open_leaves: s.open_leaves,
    })
}

/// Largest truant over the escalation tree of all m-gonal forms.
pub fn gamma_empirical(m: u64, cfg: &EscalationConfig) -> Result<GammaResult> {
    gamma_from(m, &[], cfg)
}

/// Largest truant over the escalation tree rooted at `prefix`.
pub fn gamma_prefixed(m: u64, prefix: &[u64], cfg: &EscalationConfig) -> Result<GammaResult> {
    if !is_escalator_prefix(prefix) {
        return Err(Error::NotEscalator(prefix.to_vec()));
    }
    let sum: u64 = prefix.iter().sum();
    let bound = m as i64 - 4;
    if bound <= sum as i64 {
        return Err(Error::Inadmissible { bound, sum });
    }
    gamma_from(m, prefix, cfg)
}

/// Whether some escalator extension of `prefix` has coefficient sum exactly
/// `m - 5`. Only then can a form with this prefix have truant `m - 4`, since
/// values below `m - 3` come from `x in {0, 1}` alone.
///
/// Extensions reach the prefix sum `s` itself and every sum `>= s + last`.
pub fn truant_m4_attainable(prefix: &[u64], m: u64) -> bool {
    let s: u64 = prefix.iter().sum();
    let last = prefix.last().copied().unwrap_or(1);
    let Some(goal) = m.checked_sub(5) else {
        return false;
    };
    goal == s || goal >= s + last
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Universality {
    Certified { checked_to: u64 },
    Empirical { checked_to: u64 },
    Open { first_miss: u64 },
}

impl Universality {
    pub fn is_universal(&self) -> bool {
        !matches!(self, Universality::Open { .. })
    }
}

/// Checks `form` up to `max(univ_bound, m-4)`; the result is certified when
/// its first five coefficients are a resolved candidate.
pub fn certify_universal(form: &MGonalForm, univ_bound: u64) -> Result<Universality> {
    if univ_bound == 0 {
        return Err(Error::NonPositiveBudget);
    }
    let m = form.order();
    let limit = univ_bound.max(m.saturating_sub(4));
    let reach = ReachSet::for_form(form, limit)?;
    Ok(match reach.truant() {
        Some(first_miss) => Universality::Open { first_miss },
        None if certifiable(m, form.coeffs()) => Universality::Certified { checked_to: limit },
        None => Universality::Empirical { checked_to: limit },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(bound: u64, depth: usize) -> EscalationConfig {
        EscalationConfig {
            univ_bound: bound,
            max_depth: depth,
            max_nodes: 10_000_000,
        }
    }

    #[test]
    fn triangular_and_square_gammas() {
        let g = gamma_empirical(3, &cfg(10_000, 8)).unwrap();
        assert_eq!((g.value, g.status), (8, GammaStatus::ExactUnderBound));
        let g = gamma_empirical(4, &cfg(10_000, 9)).unwrap();
        assert_eq!((g.value, g.status), (15, GammaStatus::ExactUnderBound));
    }

    #[test]
    fn tree_branching_is_sound() {
        let tree = escalate(4, &[], &cfg(2_000, 9)).unwrap();
        assert_eq!(tree.max_truant(), Some(15));
        tree.walk(&mut |n| match n.truant {
            Some(t) if !n.depth_capped => {
                let lo = n.coeffs.last().copied().unwrap_or(1);
                let got: Vec<u64> = n
                    .children
                    .iter()
                    .map(|c| *c.coeffs.last().unwrap())
                    .collect();
                assert_eq!(got, (lo..=t).collect::<Vec<_>>());
            }
            _ => assert!(n.children.is_empty()),
        });
    }

    #[test]
    fn depth_cap_marks_open_leaves() {
        let g = gamma_empirical(4, &cfg(2_000, 2)).unwrap();
        assert_eq!(g.status, GammaStatus::LowerBound);
        assert!(g.open_leaves > 0);
    }

    #[test]
    fn five_ones_prefix() {
        let tree = escalate(10, &[1, 1, 1, 1, 1], &cfg(400, 3)).unwrap();
        tree.walk(&mut |n| {
            if let Some(t) = n.truant {
                assert!(t <= 6);
            } else {
                assert_eq!(n.status, NodeStatus::UniversalCertified);
            }
        });
        assert_eq!(tree.max_truant(), Some(6));
    }

    #[test]
    fn prefixed_gamma() {
        let g = gamma_prefixed(24, &[1, 1, 2, 3, 5], &EscalationConfig::for_prefix(24)).unwrap();
        assert_eq!((g.value, g.status), (20, GammaStatus::ExactUnderBound));
        // m - 5 = 15 is not a coefficient sum of any extension (12, then >= 17),
        // so nothing with this prefix first misses 16; the root's truant 13 is the max
        let g = gamma_prefixed(20, &[1, 1, 2, 3, 5], &EscalationConfig::for_prefix(20)).unwrap();
        assert_eq!((g.value, g.status), (13, GammaStatus::ExactUnderBound));
        assert!(!truant_m4_attainable(&[1, 1, 2, 3, 5], 20));
        let g = gamma_prefixed(20, &[1, 2], &EscalationConfig::for_prefix(20)).unwrap();
        assert!(g.value > 16);
        assert!(matches!(
            gamma_prefixed(12, &[1, 1, 2, 3, 5], &EscalationConfig::for_prefix(12)),
            Err(Error::Inadmissible { .. })
        ));
        assert!(matches!(
            gamma_prefixed(30, &[1, 3], &EscalationConfig::for_prefix(30)),
            Err(Error::NotEscalator(_))
        ));
    }

    #[test]
    fn attainable_sums_match_enumeration() {
        fn sums(c: &mut Vec<u64>, cap: u64, out: &mut std::collections::BTreeSet<u64>) {
            let s: u64 = c.iter().sum();
            out.insert(s);
            let last = *c.last().unwrap();
            for a in last..=(s + 1).min(cap.saturating_sub(s)) {
                c.push(a);
                sums(c, cap, out);
                c.pop();
            }
        }
        for p in crate::candidates::candidate_table_5() {
            let mut out = std::collections::BTreeSet::new();
            sums(&mut p.as_slice().to_vec(), 60, &mut out);
            for m in p.sum() + 5..=60 {
                assert_eq!(
                    truant_m4_attainable(p.as_slice(), m),
                    out.contains(&(m - 5)),
                    "{p} m={m}"
                );
            }
        }
    }

    #[test]
    fn certification() {
        let f = MGonalForm::new(14, vec![1, 1, 2, 3, 5, 8]).unwrap();
        assert!(matches!(
            certify_universal(&f, 5000).unwrap(),
            Universality::Certified { .. }
        ));
        let f = MGonalForm::new(7, vec![1, 1, 1]).unwrap();
        assert_eq!(
            certify_universal(&f, 5000).unwrap(),
            Universality::Open { first_miss: 10 }
        );
        let f = MGonalForm::new(6, vec![1, 1, 2]).unwrap();
        assert!(matches!(
            certify_universal(&f, 100_000).unwrap(),
            Universality::Empirical { .. }
        ));
        // (1,1,2,4,8) is never certified
        assert!(!certifiable(20, &[1, 1, 2, 4, 8, 16]));
    }
}
