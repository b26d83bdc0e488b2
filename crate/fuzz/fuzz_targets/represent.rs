#![no_main]
use libfuzzer_sys::fuzz_target;
use mgonal::{find_representation, MGonalForm, ReachSet, SearchConfig};

// Search and sieve must agree; any witness must evaluate to the target.
fuzz_target!(|data: &[u8]| {
    let [m, n_lo, n_hi, rest @ ..] = data else {
        return;
    };
    let m = 3 + u64::from(*m % 60);
    let n = u64::from(u16::from_le_bytes([*n_lo, *n_hi])) % 2_000;
    let mut coeffs: Vec<u64> = rest.iter().take(5).map(|b| 1 + u64::from(b % 16)).collect();
    if coeffs.is_empty() {
        return;
    }
    coeffs.sort_unstable();
    let form = MGonalForm::new(m, coeffs).unwrap();
    let found = find_representation(&form, n, &SearchConfig::unlimited()).unwrap();
    let sieved = ReachSet::for_form(&form, n.max(1)).unwrap().contains(n);
    assert_eq!(found.is_some(), sieved);
    if let Some(r) = found {
        assert_eq!(form.evaluate(r.xs()).unwrap(), n);
    }
});
