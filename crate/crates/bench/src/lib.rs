//! Fixture loading shared by the benchmarks in `benches/`.

use floerveer::ingest::parse_vbs_file;
use floerveer::{validate, Vbs};

/// Committed fixtures used by the benchmarks, smallest first.
pub const FIXTURES: [&str; 4] = ["f8", "m003", "c2", "m125"];

/// Parse and validate a committed fixture by name.
pub fn fixture(name: &str) -> Vbs {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    validate(&parse_vbs_file(&text).expect("fixture parses")).expect("fixture validates")
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_fixture_loads() {
        for name in super::FIXTURES {
            assert!(super::fixture(name).n() > 0);
        }
    }
}
