#![no_main]

use hangerline::io::parse_decimal;
use hangerline::model::format_exact_decimal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(x) = parse_decimal(text) {
            let shown = format_exact_decimal(x, 6).expect("at most six places");
            assert_eq!(parse_decimal(&shown).unwrap(), x);
        }
    }
});
