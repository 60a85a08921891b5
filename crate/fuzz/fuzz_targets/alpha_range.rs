#![no_main]

use hangerline::io::parse_alpha_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(grid) = parse_alpha_range(text) {
            assert!(!grid.is_empty());
            assert!(grid.windows(2).all(|w| w[0] < w[1]));
        }
    }
});
