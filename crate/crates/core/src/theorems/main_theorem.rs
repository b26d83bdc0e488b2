use rayon::prelude::*;

use crate::candidates::{is_escalator_prefix, UNRESOLVED_CANDIDATE};
use crate::error::{Error, Result};
use crate::escalate::{
    certify_universal, gamma_prefixed, truant_m4_attainable, EscalationConfig, GammaStatus,
    Universality,
};
use crate::form::MGonalForm;
use crate::report::{Cell, VerificationReport};
use crate::theorems::{cell_rng, random_escalator_tail, SweepBox};

/// For each `m` in the box with `m - 4 > sum(tuple)`:
///
/// * the escalation tree rooted at `tuple` (bound `50(m-2)`) has largest
///   truant exactly `m - 4`;
/// * `samples` random escalator completions reaching coefficient sum
///   `m - 4` represent everything up to `univ_bound`.
pub fn verify_main(tuple: &[u64], sweep: &SweepBox, univ_bound: u64) -> Result<VerificationReport> {
    sweep.validate()?;
    if !is_escalator_prefix(tuple) {
        return Err(Error::NotEscalator(tuple.to_vec()));
    }
    let sum: u64 = tuple.iter().sum();
    let name: Vec<String> = tuple.iter().map(u64::to_string).collect();
    let name = name.join(",");
    let ms: Vec<u64> = sweep.ms.clone().filter(|&m| m >= sum + 5).collect();
    let per_m = ms
        .par_iter()
        .map(|&m| -> Result<(Vec<Cell>, u64)> {
            let mut cells = Vec::new();
            let cfg = EscalationConfig::for_prefix(m);
            let g = gamma_prefixed(m, tuple, &cfg)?;
            let label = format!("tuple=({name}) m={m} gamma");
            let cell = match g.status {
                GammaStatus::ExactUnderBound if g.value == m - 4 => Cell::pass(label),
                GammaStatus::ExactUnderBound if !truant_m4_attainable(tuple, m) => Cell::fail(
                    label,
                    format!(
                        "gamma = {} < m-4 = {}: m-5 is not the coefficient sum of any extension",
                        g.value,
                        m - 4
                    ),
                ),
                GammaStatus::ExactUnderBound => {
                    Cell::fail(label, format!("gamma = {} but m-4 = {}", g.value, m - 4))
                }
                GammaStatus::LowerBound => Cell::fail(
                    label,
                    format!(
                        "tree incomplete ({} open leaves), gamma >= {}",
                        g.open_leaves, g.value
                    ),
                ),
            };
            cells.push(cell.with_target(g.value));
            let mut rng = cell_rng(sweep.seed, m, sum);
            for k in 0..sweep.samples {
                let coeffs = random_escalator_tail(&mut rng, tuple, m, sweep.coeff_cap);
                let form = MGonalForm::new(m, coeffs)?;
                let label = format!("tuple=({name}) m={m} sample={k} form={form}");
                cells.push(match certify_universal(&form, univ_bound)? {
                    Universality::Open { first_miss } => {
                        Cell::fail(label, format!("misses {first_miss}")).with_target(first_miss)
                    }
                    _ => Cell::pass(label),
                });
            }
            Ok((cells, g.nodes))
        })
        .collect::<Result<Vec<_>>>()?;
    let nodes = per_m.iter().map(|p| p.1).sum();
    let claim = if tuple == UNRESOLVED_CANDIDATE {
        format!("main-unresolved ({name})")
    } else {
        format!("main ({name})")
    };
    Ok(
        VerificationReport::from_cells(claim, per_m.into_iter().flat_map(|p| p.0).collect())
            .with_seed(sweep.seed)
            .with_nodes(nodes),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_boxes() {
        let mut b = SweepBox::new(14..=14, 0..=0).unwrap();
        b.samples = 2;
        let r = verify_main(&[1, 1, 1, 2, 2], &b, 2000).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.cells[0].target, Some(10));
        let b = SweepBox::new(22..=22, 0..=0).unwrap();
        let r = verify_main(&[1, 1, 2, 2, 5], &b, 2000).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.cells[0].target, Some(18));
        // sums reachable from (1,1,2,2,5) are 11 and >= 16, so no truant 16 at m = 20
        let b = SweepBox::new(20..=20, 0..=0).unwrap();
        let r = verify_main(&[1, 1, 2, 2, 5], &b, 2000).unwrap();
        assert!(!r.pass);
        assert_eq!(r.cells[0].target, Some(12));
        assert_eq!(r.failures.len(), 1);
        let b = SweepBox::new(10..=10, 0..=0).unwrap();
        let r = verify_main(&[1, 1, 1, 1, 1], &b, 2000).unwrap();
        assert_eq!(r.cells[0].target, Some(6));
    }
}
