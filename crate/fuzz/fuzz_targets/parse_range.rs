#![no_main]
use libfuzzer_sys::fuzz_target;
use mgonal_cli::parse_range;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_range(s) {
        assert!(r.start() <= r.end());
        assert_eq!(
            parse_range(&format!("{}..{}", r.start(), r.end())).unwrap(),
            r
        );
    }
});
