#![no_main]

use hangerline::io::parse_plot_data;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_plot_data(text);
    }
});
