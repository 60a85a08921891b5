#![no_main]

use hangerline::io::{emit_tasks, parse_tasks};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(tasks) = parse_tasks(data) {
        let text = emit_tasks(&tasks);
        let again = parse_tasks(text.as_bytes()).expect("emitted table parses");
        assert_eq!(again, tasks);
    }
});
