#![no_main]
use libfuzzer_sys::fuzz_target;
use mgonal_cli::parse_coeffs;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = parse_coeffs(s) {
        assert!(!v.is_empty() && v.iter().all(|&a| a > 0));
        let again: Vec<String> = v.iter().map(u64::to_string).collect();
        assert_eq!(parse_coeffs(&again.join(",")).unwrap(), v);
    }
});
