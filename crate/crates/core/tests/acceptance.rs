//! Acceptance battery: one line per criterion, nonzero exit if any fails.
//!
//! Each criterion is evaluated from library entry points on the committed
//! fixtures. Where a check could pass vacuously, a deliberately broken input
//! is run through the same check and must be rejected.

use std::process::ExitCode;

use floerveer::analysis::{fibered_profile, spinc_checks};
use floerveer::domains::{
    all_pair_domains, check_admissibility, check_top_bottom_isolation, parity_audit, DomainBudget,
};
use floerveer::heegaard::build_diagram;
use floerveer::ingest::{decode_taut_signature, parse_vbs_file, vbs_from_triangulation};
use floerveer::poly::{determinant, determinant_cofactor, GcdBudget, GroupRingElement};
use floerveer::relations::{
    anti_branch_loop_classes, antiveering_polynomial, branch_loop_classes, build_cocycle,
    check_factorization_a_with, check_factorization_v_with, facereldiff_audit, taut_polynomial,
    veering_polynomial, FactorizationVerdict,
};
use floerveer::states::{
    bottom_state, enumerate_states, enumerate_states_filter, enumerate_states_multiloop, nu,
    statesum_polynomial, statesum_polynomial_with, top_state, StateBudget,
};
use floerveer::vbs::RawVbs;
use floerveer::zeta::{
    cone_normalize, cycle_classes, pairing, positive_functional, zeta_report, DEFAULT_CYCLE_BUDGET,
};
use floerveer::{build_homology, validate, Vbs};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALL: [&str; 9] = [
    "f8", "c2", "m003", "m009", "m010", "m016", "m119", "m125", "m367",
];
const RANK_TWO: [&str; 3] = ["c2", "m125", "m367"];

fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load(name: &str) -> Vbs {
    let text =
        std::fs::read_to_string(fixture_path(&format!("{name}.json"))).expect("fixture exists");
    validate(&parse_vbs_file(&text).expect("fixture parses")).expect("fixture validates")
}

fn states_of(vbs: &Vbs) -> Vec<floerveer::states::HeegaardState> {
    enumerate_states(vbs, StateBudget::default()).expect("states within budget")
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn categorification() -> Outcome {
    for name in ALL {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let a = antiveering_polynomial(&vbs, &build_cocycle(&hm))
            .map_err(|e| format!("{name}: {e}"))?;
        let states = states_of(&vbs);
        let s = statesum_polynomial(&vbs, &hm, &states);
        ensure(a.canonical() == s.canonical(), || {
            format!("{name}: det = {a}, state sum = {s}")
        })?;
    }
    // Flipping the Z/2 grading of one intermediate state must break the identity.
    let vbs = load("f8");
    let hm = build_homology(&vbs);
    let a = antiveering_polynomial(&vbs, &build_cocycle(&hm)).unwrap();
    let states = states_of(&vbs);
    let bottom = bottom_state(&vbs);
    let top = top_state(&vbs);
    let victim = states
        .iter()
        .find(|x| **x != bottom && **x != top)
        .expect("an intermediate state")
        .clone();
    let mutated = statesum_polynomial_with(&vbs, &hm, &states, |x| {
        if *x == victim {
            1 - nu(x)
        } else {
            nu(x)
        }
    });
    ensure(a.canonical() != mutated.canonical(), || {
        "one flipped grading went unnoticed on f8".into()
    })?;
    Ok(format!(
        "{} fixtures; a single flipped grading is rejected",
        ALL.len()
    ))
}

fn factorization(veering: bool) -> Outcome {
    let mut exact = 0;
    let mut unit = 0;
    for name in ALL {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let c = build_cocycle(&hm);
        let theta =
            taut_polynomial(&vbs, &c, GcdBudget::default()).map_err(|e| format!("{name}: {e}"))?;
        let verdict = if veering {
            let v = veering_polynomial(&vbs, &c).map_err(|e| format!("{name}: {e}"))?;
            check_factorization_v_with(&v, &theta, &anti_branch_loop_classes(&vbs, &c))
        } else {
            let a = antiveering_polynomial(&vbs, &c).map_err(|e| format!("{name}: {e}"))?;
            check_factorization_a_with(&a, &theta, &branch_loop_classes(&vbs, &c))
        };
        match (hm.free_rank(), verdict) {
            (_, FactorizationVerdict::Exact) => exact += 1,
            (1, FactorizationVerdict::WithUnitFactor { .. }) => unit += 1,
            (b, v) => return Err(format!("{name} (rank {b}): {}", v.label())),
        }
    }
    // A broken loop factor must be detected on every rank-two fixture.
    for name in RANK_TWO {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let c = build_cocycle(&hm);
        let theta = taut_polynomial(&vbs, &c, GcdBudget::default()).unwrap();
        let rejected = if veering {
            let v = veering_polynomial(&vbs, &c).unwrap();
            let mut classes = anti_branch_loop_classes(&vbs, &c);
            classes[0].1 = !classes[0].1;
            !check_factorization_v_with(&v, &theta, &classes).passed()
        } else {
            let a = antiveering_polynomial(&vbs, &c).unwrap();
            let mut classes = branch_loop_classes(&vbs, &c);
            // Inverting a class only changes a unit; doubling it adds a factor 1 + [b].
            classes[0].iter_mut().for_each(|x| *x *= 2);
            !check_factorization_a_with(&a, &theta, &classes).passed()
        };
        ensure(rejected, || {
            format!("{name}: a broken loop factor still factors")
        })?;
    }
    Ok(format!(
        "{exact} exact, {unit} rank-one with a 1±t factor; broken loop factors rejected"
    ))
}

fn parity() -> Outcome {
    let mut checked = 0;
    let mut nonzero = 0;
    for name in ["f8", "c2"] {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let hc = build_diagram(&vbs).map_err(|e| format!("{name}: {e}"))?;
        let states = states_of(&vbs);
        let table = all_pair_domains(&vbs, &hm, &hc, &states, DomainBudget::default())
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(table.len() == states.len() * states.len(), || {
            format!("{name}: table incomplete")
        })?;
        let r = parity_audit(&hc, &states, &table).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed(), || format!("{name}: {r:?}"))?;
        ensure(r.nonzero_domains > 0, || {
            format!("{name}: no nonzero domains, audit is vacuous")
        })?;
        checked += r.domains_checked;
        nonzero += r.nonzero_domains;
    }
    Ok(format!(
        "{checked} domains ({nonzero} nonzero) on f8 and c2; nu, mu_bar and nu_bar parities hold"
    ))
}

fn admissibility_and_isolation() -> Outcome {
    for name in ALL {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let hc = build_diagram(&vbs).map_err(|e| format!("{name}: {e}"))?;
        let adm = check_admissibility(&hc).map_err(|e| format!("{name}: {e}"))?;
        ensure(adm.admissible, || format!("{name}: not admissible"))?;
        let states = states_of(&vbs);
        let table = all_pair_domains(&vbs, &hm, &hc, &states, DomainBudget::default())
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(
            check_top_bottom_isolation(&states, &table, &top_state(&vbs), &bottom_state(&vbs)),
            || format!("{name}: extremal state meets a nonzero domain"),
        )?;
    }
    Ok(format!("{} fixtures", ALL.len()))
}

/// Random relabeling of triple points, edges and sectors, with shuffled
/// section order and randomly exchanged sector sides.
fn relabel(raw: &RawVbs, rng: &mut ChaCha8Rng) -> RawVbs {
    let mut pv: Vec<usize> = (0..raw.triple_points.len()).collect();
    let mut pe: Vec<usize> = (0..raw.edges.len()).collect();
    let mut ps: Vec<usize> = (0..raw.sectors.len()).collect();
    pv.shuffle(rng);
    pe.shuffle(rng);
    ps.shuffle(rng);
    let mut out = raw.clone();
    out.name = None;
    for t in &mut out.triple_points {
        t.id = pv[t.id];
    }
    for e in &mut out.edges {
        e.id = pe[e.id];
        e.src = pv[e.src];
        e.dst = pv[e.dst];
    }
    for p in &mut out.smooth_pairing {
        p.vertex = pv[p.vertex];
        for pair in &mut p.pairs {
            *pair = [pe[pair[0]], pe[pair[1]]];
        }
        p.pairs.shuffle(rng);
    }
    for s in &mut out.sectors {
        s.id = ps[s.id];
        s.path_a.iter_mut().for_each(|e| *e = pe[*e]);
        s.path_b.iter_mut().for_each(|e| *e = pe[*e]);
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut s.path_a, &mut s.path_b);
        }
    }
    out.triple_points.shuffle(rng);
    out.edges.shuffle(rng);
    out.smooth_pairing.shuffle(rng);
    out.sectors.shuffle(rng);
    out
}

fn dual_enumeration() -> Outcome {
    let budget = StateBudget::default();
    for name in ALL {
        let vbs = load(name);
        let a = enumerate_states_filter(&vbs, budget).map_err(|e| format!("{name}: {e}"))?;
        let b = enumerate_states_multiloop(&vbs, budget).map_err(|e| format!("{name}: {e}"))?;
        ensure(a == b, || {
            format!("{name}: filter {} vs multi-loop {}", a.len(), b.len())
        })?;
    }
    let census: Vec<String> = std::fs::read_to_string(fixture_path("census_small.txt"))
        .unwrap()
        .lines()
        .filter_map(|l| l.split_whitespace().next().map(str::to_string))
        .collect();
    let bases: Vec<(RawVbs, usize)> = census
        .iter()
        .map(|sig| {
            let raw = vbs_from_triangulation(&decode_taut_signature(sig).expect("census decodes"))
                .expect("veering");
            let count = enumerate_states(&validate(&raw).expect("dual validates"), budget)
                .unwrap()
                .len();
            (raw, count)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let trials = 100;
    for trial in 0..trials {
        let (base, count) = &bases[rng.gen_range(0..bases.len())];
        let raw = relabel(base, &mut rng);
        let vbs = validate(&raw)
            .map_err(|e| format!("trial {trial}: relabeled surface rejected: {e}"))?;
        let a = enumerate_states_filter(&vbs, budget).map_err(|e| format!("trial {trial}: {e}"))?;
        let b =
            enumerate_states_multiloop(&vbs, budget).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(a == b, || {
            format!(
                "trial {trial}: filter {} vs multi-loop {}",
                a.len(),
                b.len()
            )
        })?;
        ensure(a.len() == *count, || {
            format!(
                "trial {trial}: {} states, unrelabeled surface has {count}",
                a.len()
            )
        })?;
    }
    Ok(format!(
        "{} fixtures and {trials} randomized relabelings of {} census surfaces",
        ALL.len(),
        bases.len()
    ))
}

fn spinc() -> Outcome {
    for name in ALL {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let sc = spinc_checks(&vbs, &hm, &states_of(&vbs));
        ensure(
            sc.bottom_is_zero && sc.top_relation && sc.strum_independent,
            || format!("{name}: {sc:?}"),
        )?;
    }
    Ok(format!("{} fixtures", ALL.len()))
}

fn zeta() -> Outcome {
    const L: u32 = 8;
    let mut coefficients = 0;
    for name in RANK_TWO {
        let vbs = load(name);
        let hm = build_homology(&vbs);
        let classes =
            cycle_classes(&vbs, &hm, DEFAULT_CYCLE_BUDGET).map_err(|e| format!("{name}: {e}"))?;
        let ell = positive_functional(hm.free_rank(), &classes)
            .ok_or_else(|| format!("{name}: no positive functional"))?;
        ensure(classes.iter().all(|g| pairing(&ell, g) > 0), || {
            format!("{name}: functional not positive")
        })?;
        let a = antiveering_polynomial(&vbs, &build_cocycle(&hm))
            .map_err(|e| format!("{name}: {e}"))?;
        let z = zeta_report(&a, &ell, L).map_err(|e| format!("{name}: {e}"))?;
        ensure(z.product_is_one && z.all_nonnegative, || {
            format!("{name}: {z:?}")
        })?;
        // Recheck the product with untruncated ring multiplication.
        let recip = GroupRingElement::from_terms(
            hm.free_rank(),
            z.coefficients
                .iter()
                .map(|(_, e, c)| (e.clone(), c.parse::<i64>().expect("small coefficient"))),
        );
        let prod = &cone_normalize(&a, &ell).unwrap() * &recip;
        for (e, c) in prod.terms() {
            let d = pairing(&ell, e);
            let expected = i64::from(e.iter().all(|&x| x == 0));
            ensure(d > i64::from(L) || *c == expected.into(), || {
                format!("{name}: product has {c} at {e:?}")
            })?;
        }
        coefficients += z.coefficients.len();
    }
    Ok(format!(
        "{} rank-two fixtures, {coefficients} coefficients up to degree {L}, all nonnegative",
        RANK_TWO.len()
    ))
}

fn random_element(rng: &mut ChaCha8Rng, nvars: usize) -> GroupRingElement {
    if rng.gen_bool(0.2) {
        return GroupRingElement::zero(nvars);
    }
    let terms: Vec<(Vec<i64>, i64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (
                (0..nvars).map(|_| rng.gen_range(-2..=2)).collect(),
                rng.gen_range(-3..=3),
            )
        })
        .collect();
    GroupRingElement::from_terms(nvars, terms)
}

fn convention_audit() -> Outcome {
    let mut pairs = 0;
    for name in ALL {
        let vbs = load(name);
        let r = facereldiff_audit(&vbs, &build_cocycle(&build_homology(&vbs)));
        ensure(r.passed(), || {
            format!("{name}: {} of {} pairs fail", r.failures.len(), r.checked)
        })?;
        pairs += r.checked;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let trials = 400;
    for trial in 0..trials {
        let n = rng.gen_range(0..=4);
        let nvars = rng.gen_range(0..=2);
        let m: Vec<Vec<GroupRingElement>> = (0..n)
            .map(|_| (0..n).map(|_| random_element(&mut rng, nvars)).collect())
            .collect();
        let elim = determinant(&m, nvars).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(elim == determinant_cofactor(&m, nvars), || {
            format!("trial {trial}: determinants differ")
        })?;
    }
    Ok(format!(
        "{pairs} smooth pairs on {} fixtures; {trials} random matrices up to 4x4",
        ALL.len()
    ))
}

fn fibered() -> Outcome {
    let vbs = load("f8");
    let hm = build_homology(&vbs);
    let classes = cycle_classes(&vbs, &hm, DEFAULT_CYCLE_BUDGET).map_err(|e| e.to_string())?;
    let ell = positive_functional(hm.free_rank(), &classes).ok_or("no positive functional")?;
    let p = fibered_profile(&vbs, &hm, &states_of(&vbs), &ell).map_err(|e| e.to_string())?;
    let min = *p.histogram.keys().next().unwrap();
    let max = *p.histogram.keys().last().unwrap();
    ensure(
        min == 0 && p.histogram[&min] == 1 && p.histogram[&max] == 1 && p.passed(),
        || format!("{p:?}"),
    )?;
    Ok(format!("histogram {:?}", p.histogram))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("categorification identity", categorification),
        ("anti-veering factorization", || factorization(false)),
        ("veering factorization", || factorization(true)),
        ("parity of connecting domains", parity),
        (
            "admissibility and top/bottom isolation",
            admissibility_and_isolation,
        ),
        ("dual-oracle state enumeration", dual_enumeration),
        ("spin-c structure", spinc),
        ("zeta reciprocal", zeta),
        ("convention audit", convention_audit),
        ("fibered profile", fibered),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
