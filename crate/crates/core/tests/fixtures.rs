//! Every committed fixture against the independently generated manifest.

use floerveer::analysis::{analyze, AnalysisConfig};
use floerveer::heegaard::build_diagram;
use floerveer::ingest::parse_vbs_file;
use floerveer::poly::GroupRingElement;
use floerveer::relations::{
    antiveering_polynomial, build_cocycle, taut_polynomial, veering_polynomial,
};
use floerveer::states::{enumerate_states, nu, statesum_polynomial, StateBudget};
use floerveer::vbs::{decompose_anti_branch_loops, decompose_branch_loops};
use floerveer::{build_homology, validate, HomologyModel, Vbs};
use serde_json::Value;

fn manifest() -> Value {
    serde_json::from_str(include_str!("../../../fixtures/manifest.json")).unwrap()
}

fn load(name: &str) -> Vbs {
    let text = std::fs::read_to_string(format!(
        "{}/../../fixtures/{name}.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    validate(&parse_vbs_file(&text).unwrap()).unwrap()
}

/// Matrix taking free coordinates of this model to the manifest's cocycle coordinates.
fn to_oracle_coordinates(vbs: &Vbs, hm: &HomologyModel, cocycles: &Value) -> Vec<Vec<i64>> {
    let b = hm.free_rank();
    let phis: Vec<Vec<i64>> = cocycles
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            c.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().unwrap())
                .collect()
        })
        .collect();
    phis.iter()
        .map(|phi| {
            (0..b)
                .map(|i| {
                    let mut unit = vec![0; b];
                    unit[i] = 1;
                    let cycle = hm.lift(&unit);
                    (0..vbs.num_edges()).map(|e| phi[e] * cycle[e]).sum()
                })
                .collect()
        })
        .collect()
}

fn oracle_poly(nvars: usize, v: &Value) -> GroupRingElement {
    GroupRingElement::from_terms(
        nvars,
        v.as_array().unwrap().iter().map(|t| {
            let e: Vec<i64> = t[0]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().unwrap())
                .collect();
            (e, t[1].as_i64().unwrap())
        }),
    )
    .canonical()
}

#[test]
fn counts_loops_and_homology() {
    for (name, m) in manifest().as_object().unwrap() {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        assert_eq!(vbs.n() as u64, m["n"].as_u64().unwrap(), "{name}");
        assert_eq!(hm.free_rank() as u64, m["b1"].as_u64().unwrap(), "{name}");
        let torsion: Vec<i64> = m["torsion"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_i64().unwrap())
            .collect();
        assert_eq!(hm.torsion_invariants(), &torsion[..], "{name}");
        let mut branch: Vec<Vec<usize>> = decompose_branch_loops(&vbs)
            .loops
            .iter()
            .map(|l| {
                let mut e = l.edges.clone();
                e.sort();
                e
            })
            .collect();
        branch.sort();
        let mut expected: Vec<Vec<usize>> =
            serde_json::from_value(m["branch_loops"].clone()).unwrap();
        for l in &mut expected {
            l.sort();
        }
        expected.sort();
        assert_eq!(branch, expected, "{name}");
        let mut anti: Vec<usize> = decompose_anti_branch_loops(&vbs)
            .loops
            .iter()
            .map(|l| l.edges.len())
            .collect();
        anti.sort();
        let mut expected: Vec<usize> =
            serde_json::from_value(m["anti_branch_loop_lengths"].clone()).unwrap();
        expected.sort();
        assert_eq!(anti, expected, "{name}");
        let hc = build_diagram(&vbs).unwrap();
        assert_eq!(
            hc.empty_domains().len() as u64,
            m["empty_domains"].as_u64().unwrap(),
            "{name}"
        );
        assert_eq!(
            hc.domains().len() as u64,
            m["elementary_domains"].as_u64().unwrap(),
            "{name}"
        );
    }
}

#[test]
fn state_counts_and_gradings() {
    for (name, m) in manifest().as_object().unwrap() {
        let vbs = load(name);
        let states = enumerate_states(&vbs, StateBudget::default()).unwrap();
        assert_eq!(states.len() as u64, m["states"].as_u64().unwrap(), "{name}");
        let mut hist = [0u64; 2];
        for x in &states {
            hist[nu(x) as usize] += 1;
        }
        let expected: [u64; 2] = serde_json::from_value(m["nu_histogram"].clone()).unwrap();
        assert_eq!(hist, expected, "{name}");
    }
}

#[test]
fn polynomials_match_oracle() {
    for (name, m) in manifest().as_object().unwrap() {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let c = build_cocycle(&hm);
        let p = to_oracle_coordinates(&vbs, &hm, &m["test_cocycles"]);
        let b = hm.free_rank();
        let polys = &m["polynomials"];
        let states = enumerate_states(&vbs, StateBudget::default()).unwrap();
        let ours = [
            (
                "theta",
                taut_polynomial(&vbs, &c, Default::default()).unwrap(),
            ),
            ("veering", veering_polynomial(&vbs, &c).unwrap()),
            ("antiveering", antiveering_polynomial(&vbs, &c).unwrap()),
            ("statesum", statesum_polynomial(&vbs, &hm, &states)),
        ];
        for (key, poly) in ours {
            assert_eq!(
                poly.map_exponents(&p).canonical(),
                oracle_poly(b, &polys[key]),
                "{name} {key}"
            );
        }
    }
}

#[test]
fn full_battery_passes_on_every_fixture() {
    for name in manifest().as_object().unwrap().keys() {
        let report = analyze(&load(name), &AnalysisConfig::default());
        for (k, v) in &report.verdicts {
            assert!(v.acceptable(), "{name}: {k} {v:?}");
        }
    }
}
