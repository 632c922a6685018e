#![no_main]

use libfuzzer_sys::fuzz_target;
use rooms::oracle::Grid;

fuzz_target!(|text: &str| {
    if let Ok(grid) = Grid::parse(text) {
        if grid.people.end() - grid.people.start() < 64 && grid.rooms.end() - grid.rooms.start() < 64 {
            assert!(!grid.instances().is_empty());
        }
    }
});
