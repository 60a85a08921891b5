#![no_main]

use hangerline::io::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = RunConfig::parse(data) {
        cfg.period().expect("validated period");
        cfg.alpha_exact().expect("validated alpha");
        let _ = cfg.sim_config();
    }
});
