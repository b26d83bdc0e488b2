use mgonal::candidates::{enumerate_prefixes, surviving_four_prefixes};
use mgonal::escalate::{escalate, gamma_prefixed, EscalationConfig, NodeStatus};
use mgonal::theorems::ell_r;
use mgonal::truant;

#[test]
fn ell_r_closed_form() {
    for r in [5u64, 6] {
        for m in r + 4..=40 {
            let want = (m - 3).div_ceil(r) as usize + r as usize - 2;
            let got = ell_r(m, r, 20_000).unwrap();
            assert_eq!(got.rank, want, "m={m} r={r}");
            assert!(got.status.is_universal());
        }
    }
}

#[test]
fn discarded_prefixes_exceed_m_minus_4() {
    let keep = surviving_four_prefixes();
    let cfg = EscalationConfig {
        max_nodes: 200_000,
        ..EscalationConfig::for_prefix(30)
    };
    for p in enumerate_prefixes(4)
        .into_iter()
        .filter(|p| !keep.contains(p))
    {
        let g = gamma_prefixed(30, p.as_slice(), &cfg).unwrap();
        assert!(g.value > 26, "{p}: {g:?}");
    }
}

#[test]
fn tree_nodes_are_consistent() {
    let cfg = EscalationConfig::for_prefix(14);
    let tree = escalate(14, &[1, 1, 1, 1, 1], &cfg).unwrap();
    tree.walk(&mut |node| {
        let c = &node.coeffs;
        assert!(c.windows(2).all(|w| w[0] <= w[1]));
        match node.status {
            NodeStatus::Open => {
                let t = node.truant.unwrap();
                let f = mgonal::MGonalForm::new(14, c.clone()).unwrap();
                assert_eq!(truant(&f, t).unwrap(), Some(t));
                for ch in &node.children {
                    let a = *ch.coeffs.last().unwrap();
                    assert!(*c.last().unwrap() <= a && a <= t);
                }
            }
            _ => assert!(node.children.is_empty()),
        }
    });
    assert_eq!(tree.max_truant(), Some(10));
}
