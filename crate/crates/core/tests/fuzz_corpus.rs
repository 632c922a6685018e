//! Replays the checked-in fuzz seeds through the parser entry points.

use std::fs;
use std::path::PathBuf;

use rooms::model::{Configuration, Instance};
use rooms::oracle::Grid;
use rooms::perm::{factor_into_derangements, Permutation};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut files: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn parse_config_seeds() {
    let mut parsed = 0;
    for data in seeds("parse_config") {
        let inst = Instance::new(data[0] as usize % 40 + 1, data[1] as usize % 20 + 2).unwrap();
        if let Ok(f) = Configuration::parse(std::str::from_utf8(&data[2..]).unwrap(), inst) {
            assert_eq!(Configuration::parse(&f.to_string(), inst).unwrap(), f);
            parsed += 1;
        }
    }
    assert_eq!(parsed, 3);
}

#[test]
fn parse_perm_seeds() {
    let mut factored = 0;
    for data in seeds("parse_perm") {
        if let Ok(p) = Permutation::parse(std::str::from_utf8(&data).unwrap()) {
            assert_eq!(Permutation::parse(&p.to_string()).unwrap(), p);
            if let Ok(fac) = factor_into_derangements(&p) {
                assert_eq!(fac.product(), p);
                factored += 1;
            }
        }
    }
    assert_eq!(factored, 3);
}

#[test]
fn parse_grid_seeds() {
    let ok = seeds("parse_grid")
        .iter()
        .filter(|d| Grid::parse(std::str::from_utf8(d).unwrap()).is_ok())
        .count();
    assert_eq!(ok, 2);
}

#[test]
fn decode_index_seeds() {
    let mut decoded = 0;
    for data in seeds("decode_index") {
        let index = u64::from_le_bytes(data[2..10].try_into().unwrap());
        let inst = Instance::new(data[0] as usize % 24 + 1, data[1] as usize % 15 + 2).unwrap();
        let Ok(ix) = inst.indexer(1 << 32) else { continue };
        if let Ok(f) = ix.decode(index) {
            assert_eq!(ix.encode(&f).unwrap(), index);
            decoded += 1;
        }
    }
    assert_eq!(decoded, 2);
}
