#![no_main]
use libfuzzer_sys::fuzz_target;
use mgonal::VerificationReport;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<VerificationReport>(data) {
        let s = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
});
