#![no_main]

use hangerline::io::{parse_deviations, DeviationKind};
use hangerline::model::Exact;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = parse_deviations(data) {
        let zero = Exact::from_integer(0);
        for row in &table.rows {
            assert!(row.plus >= zero && row.minus >= zero);
            if table.kind == DeviationKind::Bounds {
                assert!(zero < row.minus && row.minus <= row.plus);
            }
        }
    }
});
