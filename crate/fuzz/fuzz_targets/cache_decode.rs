#![no_main]
use libfuzzer_sys::fuzz_target;
use mgonal_cli::cache::{decode_records, encode_record, MAGIC};

// Anything that decodes must re-encode to the same bytes.
fuzz_target!(|data: &[u8]| {
    if let Ok(records) = decode_records(data) {
        let mut out = MAGIC.to_vec();
        for (_, r) in &records {
            encode_record(r.hash, &r.bits, &mut out);
        }
        assert_eq!(out, data);
    }
});
