#![no_main]

use libfuzzer_sys::fuzz_target;
use rooms::model::{Configuration, Instance};

// first two bytes pick the instance, the rest is the configuration text
fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let Ok(inst) = Instance::new(data[0] as usize % 40 + 1, data[1] as usize % 20 + 2) else {
        return;
    };
    let Ok(text) = std::str::from_utf8(&data[2..]) else {
        return;
    };
    if let Ok(f) = Configuration::parse(text, inst) {
        let again = Configuration::parse(&f.to_string(), inst).unwrap();
        assert_eq!(f, again);
        let _ = f.successors().next();
    }
});
