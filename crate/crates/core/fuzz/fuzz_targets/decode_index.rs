#![no_main]

use libfuzzer_sys::fuzz_target;
use rooms::model::Instance;

fuzz_target!(|input: (u8, u8, u64)| {
    let (n, m, index) = input;
    let Ok(inst) = Instance::new(n as usize % 24 + 1, m as usize % 15 + 2) else {
        return;
    };
    let Ok(indexer) = inst.indexer(1 << 32) else {
        return;
    };
    if let Ok(f) = indexer.decode(index) {
        assert_eq!(indexer.encode(&f).unwrap(), index);
    }
});
