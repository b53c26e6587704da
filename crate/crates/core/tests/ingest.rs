//! Census decoding, the dual construction and the canonical JSON parser.

use floerveer::canon::{canonical_form, isomorphic};
use floerveer::ingest::{
    decode_taut_signature, encode_taut_signature, parse_vbs_file, vbs_from_triangulation, Gluing,
    SignatureError, TautVeeringTriangulation, TriangulationError,
};
use floerveer::validate;
use serde_json::Value;

const CENSUS: &str = include_str!("../../../fixtures/census_small.txt");
const MANIFEST: &str = include_str!("../../../fixtures/manifest.json");

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/../../fixtures/{name}.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

#[test]
fn census_signatures_round_trip() {
    for sig in CENSUS.lines().filter(|l| !l.trim().is_empty()) {
        let tri = decode_taut_signature(sig).unwrap();
        assert_eq!(encode_taut_signature(&tri), sig);
    }
}

#[test]
fn decoded_triangulations_satisfy_invariants() {
    for sig in CENSUS.lines().filter(|l| !l.trim().is_empty()) {
        let tri = decode_taut_signature(sig).unwrap();
        let n = tri.n();
        for t in 0..n {
            for f in 0..4 {
                let Gluing { tet, perm } = tri.gluings()[t][f];
                let back = tri.gluings()[tet][perm[f] as usize];
                assert_eq!(back.tet, t);
                assert_eq!(back.perm[perm[f] as usize] as usize, f);
                assert!(!(tet == t && perm[f] as usize == f));
            }
        }
        let mut pi = vec![0; n];
        for t in 0..n {
            let p = tri.taut_angles()[t] as usize;
            pi[tri.edge_class(t, p)] += 1;
            pi[tri.edge_class(t, 5 - p)] += 1;
        }
        assert!(pi.iter().all(|&c| c == 2), "{sig}");
    }
}

#[test]
fn dual_surfaces_validate_with_expected_counts() {
    for sig in CENSUS.lines().filter(|l| !l.trim().is_empty()) {
        let tri = decode_taut_signature(sig).unwrap();
        let raw = vbs_from_triangulation(&tri).unwrap();
        let vbs = validate(&raw).unwrap_or_else(|e| panic!("{sig}: {e}"));
        assert_eq!(vbs.n(), tri.n());
        assert_eq!(vbs.num_edges(), 2 * tri.n());
        assert_eq!(vbs.sectors().len(), tri.n());
    }
}

#[test]
fn dual_surfaces_match_committed_fixtures() {
    let manifest: Value = serde_json::from_str(MANIFEST).unwrap();
    for (name, entry) in manifest.as_object().unwrap() {
        let sig = entry["signature"].as_str().unwrap();
        let built =
            validate(&vbs_from_triangulation(&decode_taut_signature(sig).unwrap()).unwrap())
                .unwrap();
        let committed = validate(&parse_vbs_file(&fixture(name)).unwrap()).unwrap();
        assert!(isomorphic(&built, &committed), "{name}");
        assert_eq!(canonical_form(&built), canonical_form(&committed));
    }
}

#[test]
fn angle_sum_violation_is_rejected() {
    let err = decode_taut_signature("cPcbbbiht_00").unwrap_err();
    assert!(
        matches!(
            err,
            SignatureError::Invalid(TriangulationError::AngleSum { .. })
                | SignatureError::Invalid(_)
        ),
        "{err:?}"
    );
    let tri = decode_taut_signature("cPcbbbiht_12").unwrap();
    assert!(TautVeeringTriangulation::new(tri.gluings().to_vec(), vec![0, 0]).is_err());
}
