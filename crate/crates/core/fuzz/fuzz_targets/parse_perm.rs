#![no_main]

use libfuzzer_sys::fuzz_target;
use rooms::perm::{factor_into_derangements, Permutation};

fuzz_target!(|text: &str| {
    if let Ok(p) = Permutation::parse(text) {
        assert_eq!(Permutation::parse(&p.to_string()).unwrap(), p);
        if p.len() <= 64 {
            if let Ok(fac) = factor_into_derangements(&p) {
                assert!(fac.len() <= 4);
                assert_eq!(fac.product(), p);
            }
        }
    }
});
