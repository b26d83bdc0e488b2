use rayon::prelude::*;

use crate::candidates::{build_completion, resolved_candidates};
use crate::error::{Error, Result};
use crate::form::MGonalForm;
use crate::report::{Cell, VerificationReport};
use crate::sieve::ReachSet;
use crate::theorems::{cell_rng, random_escalator_tail, SweepBox};

/// Checks, for every `N` in `ns`: if the first `i` coefficients represent
/// `N, .., N + (a_1+..+a_i)` then the whole form represents
/// `N, .., N + (m-4)`. The form must represent `[1, m-4]`.
pub fn verify_consecutive_prop(
    form: &MGonalForm,
    i: usize,
    ns: std::ops::RangeInclusive<u64>,
) -> Result<Cell> {
    let m = form.order();
    let label = format!("form={form} i={i} N={}..{}", ns.start(), ns.end());
    if i == 0 || i > form.rank() {
        return Ok(Cell::skipped(label, "prefix length out of range"));
    }
    let span = m.saturating_sub(4);
    let head = form.prefix(i)?;
    let head_span = head.coeff_sum();
    let limit = ns.end() + span.max(head_span);
    let full = ReachSet::for_form(form, limit)?;
    if (1..=span).any(|k| !full.contains(k)) {
        return Ok(Cell::skipped(label, "form does not represent [1, m-4]"));
    }
    let part = ReachSet::for_form(&head, limit)?;
    let mut premises = 0u64;
    for n in ns {
        if !(n..=n + head_span).all(|k| part.contains(k)) {
            continue;
        }
        premises += 1;
        if let Some(k) = (n..=n + span).find(|&k| !full.contains(k)) {
            return Ok(
                Cell::fail(label, format!("premise holds at N={n} but {k} is missed"))
                    .with_target(k),
            );
        }
    }
    if premises == 0 {
        return Ok(Cell::skipped(label, "premise never holds"));
    }
    Ok(Cell::pass(format!("{label} premises={premises}")))
}

/// Runs the proposition over completions of every resolved candidate (one
/// greedy completion plus `samples` random escalator tails per order) for
/// every prefix length and `N` in `[1, n_max]`.
pub fn sweep_consecutive(sweep: &SweepBox, n_max: u64) -> Result<VerificationReport> {
    sweep.validate()?;
    let tuples = resolved_candidates();
    let jobs: Vec<(usize, u64)> = (0..tuples.len())
        .flat_map(|t| sweep.ms.clone().map(move |m| (t, m)))
        .filter(|&(t, m)| m >= 9 && m - 4 > tuples[t].sum())
        .collect();
    let chunks = jobs
        .par_iter()
        .map(|&(t, m)| -> Result<Vec<Cell>> {
            let prefix = tuples[t].as_slice();
            let mut cells = Vec::new();
            let mut forms = Vec::new();
            match build_completion(prefix, &[], m) {
                Ok(f) => forms.push(f),
                Err(e @ Error::InfeasibleCompletion { .. }) => {
                    cells.push(Cell::skipped(
                        format!("tuple={} m={m} completion", tuples[t]),
                        e.to_string(),
                    ));
                }
                Err(e) => return Err(e),
            }
            let mut rng = cell_rng(sweep.seed, m, t as u64);
            for _ in 0..sweep.samples {
                let c = random_escalator_tail(&mut rng, prefix, m, sweep.coeff_cap);
                forms.push(MGonalForm::new(m, c)?);
            }
            for f in &forms {
                for i in 1..=f.rank() {
                    cells.push(verify_consecutive_prop(f, i, 1..=n_max)?);
                }
            }
            Ok(cells)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(
        VerificationReport::from_cells("prop31", chunks.into_iter().flatten().collect())
            .with_seed(sweep.seed),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn fibonacci_form_window() {
        let f = MGonalForm::new(14, vec![1, 1, 2, 3, 5, 8]).unwrap();
        let c = verify_consecutive_prop(&f, 6, 1..=1).unwrap();
        assert_eq!(c.verdict, Verdict::Pass, "{c:?}");
    }

    #[test]
    fn ones_window() {
        // <1^5>_10 misses 6, so the premise fails at N=5; the window holds anyway
        let f = MGonalForm::new(10, vec![1; 6]).unwrap();
        let c = verify_consecutive_prop(&f, 5, 5..=5).unwrap();
        assert!(matches!(c.verdict, Verdict::Skipped { .. }), "{c:?}");
        let full = ReachSet::for_form(&f, 11).unwrap();
        assert!((5..=11).all(|k| full.contains(k)));
        let c = verify_consecutive_prop(&f, 6, 5..=5).unwrap();
        assert_eq!(c.verdict, Verdict::Pass, "{c:?}");
    }

    #[test]
    fn sweep_skips_orders_without_completion() {
        // (1,1,1,1,2) at m = 11 would need one more coefficient equal to 1
        let mut b = SweepBox::new(11..=11, 0..=0).unwrap();
        b.samples = 1;
        let r = sweep_consecutive(&b, 20).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert!(r
            .cells
            .iter()
            .any(|c| c.label == "tuple=(1,1,1,1,2) m=11 completion"));
    }

    #[test]
    fn precondition_failures_are_skips() {
        let f = MGonalForm::new(20, vec![1, 1]).unwrap();
        let c = verify_consecutive_prop(&f, 1, 1..=5).unwrap();
        assert!(matches!(c.verdict, Verdict::Skipped { .. }));
        let f = MGonalForm::new(10, vec![1; 6]).unwrap();
        let c = verify_consecutive_prop(&f, 7, 1..=5).unwrap();
        assert!(matches!(c.verdict, Verdict::Skipped { .. }));
    }
}
