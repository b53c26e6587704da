//! The full verification battery for one surface, producing a deterministic,
//! serializable report with one verdict per check.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::domains::{
    all_pair_domains, check_admissibility, check_top_bottom_isolation, parity_audit,
    AdmissibilityReport, DomainBudget, DomainError, ParityReport,
};
use crate::heegaard::{audit_diagram, build_diagram, AuditCheck};
use crate::homology::{build_homology, path_vector, HomologyModel};
use crate::poly::{GcdBudget, GroupRingElement};
use crate::relations::{
    anti_branch_loop_classes, antiveering_polynomial, branch_loop_classes, build_cocycle,
    check_factorization_a_with, check_factorization_v_with, facereldiff_audit, taut_polynomial,
    veering_polynomial, FactorizationVerdict,
};
use crate::states::{
    bottom_state, enumerate_states_filter, enumerate_states_multiloop, multi_loop_cycle, nu,
    spinc_class, spinc_class_with, top_state, HeegaardState, StateBudget, StrumSide, FILTER_MAX_N,
};
use crate::vbs::{decompose_anti_branch_loops, decompose_branch_loops, Color, Vbs};
use crate::zeta::{
    cycle_classes, pairing, positive_functional, zeta_report, ZetaReport, DEFAULT_CYCLE_BUDGET,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub states: StateBudget,
    pub domains: DomainBudget,
    /// Largest number of ordered state pairs searched for connecting domains.
    pub max_domain_pairs: usize,
    pub gcd: GcdBudget,
    pub trunc_degree: u32,
    pub cycle_budget: usize,
    /// Functional for the fibered profile; the positive functional when absent.
    pub fibered_class: Option<Vec<i64>>,
    /// Skip the domain block, the zeta block and the fibered profile.
    pub polynomials_only: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            states: StateBudget::default(),
            domains: DomainBudget::default(),
            max_domain_pairs: 250_000,
            gcd: GcdBudget::default(),
            trunc_degree: 8,
            cycle_budget: DEFAULT_CYCLE_BUDGET,
            fibered_class: None,
            polynomials_only: false,
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { detail: String },
    BudgetExceeded { detail: String },
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail { detail: detail() }
        }
    }
    /// True unless the check failed or ran out of budget.
    pub fn acceptable(&self) -> bool {
        matches!(self, Verdict::Pass | Verdict::NotApplicable { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceSummary {
    pub name: Option<String>,
    pub n: usize,
    pub edges: usize,
    pub red: usize,
    pub blue: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LoopBlock {
    pub branch: Vec<Vec<usize>>,
    pub anti_branch: Vec<AntiLoop>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AntiLoop {
    pub edges: Vec<usize>,
    pub orientation_preserving: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyBlock {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub branch_loop_classes: Vec<Vec<i64>>,
    pub anti_branch_loop_classes: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramBlock {
    pub alpha_curves: usize,
    pub beta_curves: usize,
    pub intersection_points: usize,
    pub elementary_domains: usize,
    pub empty_domains: usize,
    pub sutures: usize,
    pub audit: Vec<AuditCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StateRow {
    pub corners: String,
    pub spinc_free: Vec<i64>,
    pub spinc_torsion: Vec<i64>,
    pub nu: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct StateBlock {
    pub count: usize,
    pub filter_count: Option<usize>,
    pub multiloop_count: usize,
    pub nu_histogram: [usize; 2],
    pub table: Vec<StateRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialBlock {
    pub nvars: usize,
    pub theta: Option<GroupRingElement>,
    pub veering: Option<GroupRingElement>,
    pub antiveering: Option<GroupRingElement>,
    pub statesum: GroupRingElement,
    pub display: BTreeMap<String, String>,
    pub factorization_a: Option<FactorizationVerdict>,
    pub factorization_v: Option<FactorizationVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainBlock {
    pub lattice_rank: usize,
    pub admissibility: Option<AdmissibilityReport>,
    pub pairs_searched: usize,
    pub pairs_with_nonzero_domains: usize,
    pub parity: Option<ParityReport>,
}

/// States grouped by the value of a functional on their spin-c class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberedProfile {
    pub functional: Vec<i64>,
    pub histogram: BTreeMap<i64, usize>,
    pub bottom_value: i64,
    pub top_value: i64,
    /// `2 l(top)` and `3 sum l(b_i)`.
    pub top_relation: [i64; 2],
    pub unique_minimum_at_bottom: bool,
    pub unique_maximum_at_top: bool,
    pub others_strictly_between: bool,
}

impl FiberedProfile {
    pub fn passed(&self) -> bool {
        self.bottom_value == 0
            && self.unique_minimum_at_bottom
            && self.unique_maximum_at_top
            && self.others_strictly_between
            && self.top_relation[0] == self.top_relation[1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("no functional is strictly positive on every cycle class")]
    NoPositiveFunctional,
    #[error("functional has {found} coordinates, expected {expected}")]
    WrongRank { expected: usize, found: usize },
}

pub fn fibered_profile(
    vbs: &Vbs,
    hm: &HomologyModel,
    states: &[HeegaardState],
    ell: &[i64],
) -> Result<FiberedProfile, ProfileError> {
    if ell.len() != hm.free_rank() {
        return Err(ProfileError::WrongRank {
            expected: hm.free_rank(),
            found: ell.len(),
        });
    }
    let value = |x: &HeegaardState| pairing(ell, &spinc_class(vbs, hm, x).free);
    let bottom = bottom_state(vbs);
    let top = top_state(vbs);
    let (bv, tv) = (value(&bottom), value(&top));
    let mut histogram = BTreeMap::new();
    let mut others_between = true;
    for x in states {
        let v = value(x);
        *histogram.entry(v).or_insert(0) += 1;
        if *x != bottom && *x != top && !(bv < v && v < tv) {
            others_between = false;
        }
    }
    let branch_sum: i64 = decompose_branch_loops(vbs)
        .loops
        .iter()
        .map(|l| {
            pairing(
                ell,
                &hm.class_of_cycle(&path_vector(vbs.num_edges(), &l.edges))
                    .expect("loop")
                    .free,
            )
        })
        .sum();
    let min = histogram.keys().next().copied().unwrap_or(0);
    let max = histogram.keys().last().copied().unwrap_or(0);
    Ok(FiberedProfile {
        functional: ell.to_vec(),
        unique_minimum_at_bottom: min == bv && histogram[&min] == 1,
        unique_maximum_at_top: max == tv && histogram[&max] == 1,
        histogram,
        bottom_value: bv,
        top_value: tv,
        top_relation: [2 * tv, 3 * branch_sum],
        others_strictly_between: others_between,
    })
}

/// `spinc(bottom) = 0`, `2 spinc(top) = 3 sum [b_i]` (torsion included) and
/// both strum choices agree on every state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpincChecks {
    pub bottom_is_zero: bool,
    pub top_relation: bool,
    pub strum_independent: bool,
}

pub fn spinc_checks(vbs: &Vbs, hm: &HomologyModel, states: &[HeegaardState]) -> SpincChecks {
    let bottom_is_zero = spinc_class(vbs, hm, &bottom_state(vbs)).is_zero();
    let mut rel: Vec<i64> = multi_loop_cycle(vbs, &top_state(vbs), StrumSide::A)
        .iter()
        .map(|x| 2 * x)
        .collect();
    for l in decompose_branch_loops(vbs).loops {
        for e in l.edges {
            rel[e] -= 3;
        }
    }
    let top_relation = hm
        .class_of_cycle(&rel)
        .map(|c| c.is_zero())
        .unwrap_or(false);
    let strum_independent = states.iter().all(|x| {
        spinc_class_with(vbs, hm, x, StrumSide::A) == spinc_class_with(vbs, hm, x, StrumSide::B)
    });
    SpincChecks {
        bottom_is_zero,
        top_relation,
        strum_independent,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub schema_version: u32,
    pub surface: SurfaceSummary,
    pub loops: LoopBlock,
    pub homology: HomologyBlock,
    pub diagram: Option<DiagramBlock>,
    pub states: Option<StateBlock>,
    pub spinc: Option<SpincChecks>,
    pub polynomials: Option<PolynomialBlock>,
    pub domains: Option<DomainBlock>,
    pub zeta: Option<ZetaReport>,
    pub fibered_profile: Option<FiberedProfile>,
    pub verdicts: BTreeMap<String, Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl SurfaceReport {
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(Verdict::acceptable)
    }
}

fn poly_display(p: &GroupRingElement) -> String {
    p.to_string()
}

/// Run every check on a validated surface. Budget overruns become
/// `budget_exceeded` verdicts rather than errors.
pub fn analyze(vbs: &Vbs, cfg: &AnalysisConfig) -> SurfaceReport {
    let mut timings = BTreeMap::new();
    let mut verdicts: BTreeMap<String, Verdict> = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut BTreeMap<String, f64>| {
        timings.insert(name.to_string(), clock.elapsed().as_secs_f64() * 1e3);
        clock = Instant::now();
    };

    let hm = build_homology(vbs);
    let cocycle = build_cocycle(&hm);
    let branch = decompose_branch_loops(vbs);
    let anti = decompose_anti_branch_loops(vbs);
    let branch_classes = branch_loop_classes(vbs, &cocycle);
    let anti_classes = anti_branch_loop_classes(vbs, &cocycle);
    let surface = SurfaceSummary {
        name: vbs.name().map(str::to_string),
        n: vbs.n(),
        edges: vbs.num_edges(),
        red: vbs.colors().iter().filter(|&&c| c == Color::Red).count(),
        blue: vbs.colors().iter().filter(|&&c| c == Color::Blue).count(),
    };
    let loops = LoopBlock {
        branch: branch.loops.iter().map(|l| l.edges.clone()).collect(),
        anti_branch: anti
            .loops
            .iter()
            .map(|l| AntiLoop {
                edges: l.edges.clone(),
                orientation_preserving: l.orientation_preserving == Some(true),
            })
            .collect(),
    };
    let homology = HomologyBlock {
        free_rank: hm.free_rank(),
        torsion: hm.torsion_invariants().to_vec(),
        branch_loop_classes: branch_classes.clone(),
        anti_branch_loop_classes: anti_classes.iter().map(|(g, _)| g.clone()).collect(),
    };
    lap("homology", &mut timings);

    let diagram = build_diagram(vbs);
    let diagram_block = match &diagram {
        Ok(hc) => {
            let audit = audit_diagram(hc);
            verdicts.insert(
                "diagram_audit".into(),
                Verdict::from_bool(audit.passed(), || {
                    audit
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.name)
                        .collect::<Vec<_>>()
                        .join(", ")
                }),
            );
            Some(DiagramBlock {
                alpha_curves: hc.num_alpha(),
                beta_curves: hc.num_beta(),
                intersection_points: hc.points().len(),
                elementary_domains: hc.domains().len(),
                empty_domains: hc.empty_domains().len(),
                sutures: hc.num_sutures(),
                audit: audit.checks,
            })
        }
        Err(e) => {
            verdicts.insert(
                "diagram_audit".into(),
                Verdict::Fail {
                    detail: e.to_string(),
                },
            );
            None
        }
    };
    lap("diagram", &mut timings);

    let facerel = facereldiff_audit(vbs, &cocycle);
    verdicts.insert(
        "facereldiff".into(),
        Verdict::from_bool(facerel.passed(), || {
            format!(
                "{} of {} smooth pairs fail",
                facerel.failures.len(),
                facerel.checked
            )
        }),
    );

    // States by both enumerations.
    let multiloop = enumerate_states_multiloop(vbs, cfg.states);
    let filter = if vbs.n() <= FILTER_MAX_N {
        Some(enumerate_states_filter(vbs, cfg.states))
    } else {
        None
    };
    let states: Option<Vec<HeegaardState>> = match (&multiloop, &filter) {
        (Ok(b), None) => {
            verdicts.insert(
                "states_dual_enumeration".into(),
                Verdict::NotApplicable {
                    reason: format!("exhaustive filter limited to n <= {FILTER_MAX_N}"),
                },
            );
            Some(b.clone())
        }
        (Ok(b), Some(Ok(a))) => {
            verdicts.insert(
                "states_dual_enumeration".into(),
                Verdict::from_bool(a == b, || {
                    format!(
                        "filter found {}, multi-loop search found {}",
                        a.len(),
                        b.len()
                    )
                }),
            );
            Some(b.clone())
        }
        (Err(e), _) | (_, Some(Err(e))) => {
            verdicts.insert(
                "states_dual_enumeration".into(),
                Verdict::BudgetExceeded {
                    detail: e.to_string(),
                },
            );
            None
        }
    };
    lap("states", &mut timings);

    let mut state_block = None;
    let mut spinc = None;
    let mut statesum = None;
    if let Some(states) = &states {
        let table: Vec<StateRow> = states
            .iter()
            .map(|x| {
                let c = spinc_class(vbs, &hm, x);
                StateRow {
                    corners: x
                        .corners()
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    spinc_free: c.free,
                    spinc_torsion: c.torsion,
                    nu: nu(x),
                }
            })
            .collect();
        let mut hist = [0usize; 2];
        for r in &table {
            hist[r.nu as usize] += 1;
        }
        state_block = Some(StateBlock {
            count: states.len(),
            filter_count: filter.as_ref().and_then(|f| f.as_ref().ok()).map(Vec::len),
            multiloop_count: states.len(),
            nu_histogram: hist,
            table,
        });
        let sc = spinc_checks(vbs, &hm, states);
        verdicts.insert(
            "spinc_bottom_zero".into(),
            Verdict::from_bool(sc.bottom_is_zero, || {
                "bottom state has a nonzero class".into()
            }),
        );
        verdicts.insert(
            "spinc_top_relation".into(),
            Verdict::from_bool(sc.top_relation, || {
                "2 spinc(top) differs from 3 sum of branch loops".into()
            }),
        );
        verdicts.insert(
            "spinc_strum_independence".into(),
            Verdict::from_bool(sc.strum_independent, || "strum choices disagree".into()),
        );
        spinc = Some(sc);
        statesum = Some(crate::states::statesum_polynomial(vbs, &hm, states).canonical());
    }
    lap("spinc", &mut timings);

    // Polynomials.
    let theta = taut_polynomial(vbs, &cocycle, cfg.gcd);
    let v = veering_polynomial(vbs, &cocycle);
    let a = antiveering_polynomial(vbs, &cocycle);
    let mut display = BTreeMap::new();
    for (k, p) in [("theta", &theta), ("veering", &v), ("antiveering", &a)] {
        if let Ok(p) = p {
            display.insert(k.to_string(), poly_display(p));
        }
    }
    if let Some(s) = &statesum {
        display.insert("statesum".into(), poly_display(s));
    }
    let mut fa = None;
    let mut fv = None;
    match &theta {
        Ok(t) => {
            if let Ok(a) = &a {
                let verdict = check_factorization_a_with(a, t, &branch_classes);
                fa = Some(verdict);
                verdicts.insert(
                    "factorization_a".into(),
                    Verdict::from_bool(verdict.passed(), || "A differs from the product".into()),
                );
                verdicts.insert(
                    "theta_divides_a".into(),
                    Verdict::from_bool(a.divisible_by(t), || "division leaves a remainder".into()),
                );
            }
            if let Ok(v) = &v {
                let verdict = check_factorization_v_with(v, t, &anti_classes);
                fv = Some(verdict);
                verdicts.insert(
                    "factorization_v".into(),
                    Verdict::from_bool(verdict.passed(), || "V differs from the product".into()),
                );
                verdicts.insert(
                    "theta_divides_v".into(),
                    Verdict::from_bool(v.divisible_by(t), || "division leaves a remainder".into()),
                );
            }
        }
        Err(e) => {
            verdicts.insert(
                "factorization_a".into(),
                Verdict::BudgetExceeded {
                    detail: e.to_string(),
                },
            );
            verdicts.insert(
                "factorization_v".into(),
                Verdict::BudgetExceeded {
                    detail: e.to_string(),
                },
            );
        }
    }
    for (name, r) in [("veering", &v), ("antiveering", &a)] {
        if let Err(e) = r {
            verdicts.insert(
                format!("{name}_determinant"),
                Verdict::BudgetExceeded {
                    detail: e.to_string(),
                },
            );
        }
    }
    if let (Ok(a), Some(s)) = (&a, &statesum) {
        verdicts.insert(
            "categorification".into(),
            Verdict::from_bool(a.canonical() == s.canonical(), || {
                format!("A = {a}, state sum = {s}")
            }),
        );
    }
    let polynomials = statesum.clone().map(|s| PolynomialBlock {
        nvars: hm.free_rank(),
        theta: theta.clone().ok(),
        veering: v.clone().ok(),
        antiveering: a.clone().ok(),
        statesum: s,
        display,
        factorization_a: fa,
        factorization_v: fv,
    });
    lap("polynomials", &mut timings);

    let mut domains_block = None;
    let mut zeta = None;
    let mut profile = None;
    if !cfg.polynomials_only {
        if let (Ok(hc), Some(states)) = (&diagram, &states) {
            let adm = check_admissibility(hc);
            verdicts.insert(
                "admissibility".into(),
                match &adm {
                    Ok(r) => Verdict::from_bool(r.admissible, || {
                        "a nonnegative periodic domain exists".into()
                    }),
                    Err(e) => Verdict::Fail {
                        detail: e.to_string(),
                    },
                },
            );
            let pairs = states.len() * states.len();
            let mut block = DomainBlock {
                lattice_rank: crate::domains::CornerSystem::new(hc).lattice_rank(),
                admissibility: adm.ok(),
                pairs_searched: 0,
                pairs_with_nonzero_domains: 0,
                parity: None,
            };
            let table = if pairs > cfg.max_domain_pairs {
                Err(DomainError::BudgetExceeded(format!(
                    "{pairs} state pairs, limit {}",
                    cfg.max_domain_pairs
                )))
            } else {
                all_pair_domains(vbs, &hm, hc, states, cfg.domains)
            };
            match table {
                Ok(table) => {
                    block.pairs_searched = table.len();
                    block.pairs_with_nonzero_domains = table
                        .iter()
                        .filter(|p| p.domains.iter().any(|d| !d.is_zero()))
                        .count();
                    verdicts.insert(
                        "top_bottom_isolation".into(),
                        Verdict::from_bool(
                            check_top_bottom_isolation(
                                states,
                                &table,
                                &top_state(vbs),
                                &bottom_state(vbs),
                            ),
                            || "a nonzero domain starts or ends at an extremal state".into(),
                        ),
                    );
                    match parity_audit(hc, states, &table) {
                        Ok(p) => {
                            verdicts.insert(
                                "parity".into(),
                                Verdict::from_bool(p.passed(), || {
                                    format!(
                                        "nu/mu {}, mu_bar {}, nu_bar {}, full-curve {}",
                                        p.nu_mu_failures,
                                        p.mu_bar_failures,
                                        p.nu_bar_failures,
                                        p.full_curve_domains
                                    )
                                }),
                            );
                            block.parity = Some(p);
                        }
                        Err(e) => {
                            verdicts.insert(
                                "parity".into(),
                                Verdict::Fail {
                                    detail: e.to_string(),
                                },
                            );
                        }
                    }
                }
                Err(e) => {
                    for k in ["top_bottom_isolation", "parity"] {
                        verdicts.insert(
                            k.into(),
                            Verdict::BudgetExceeded {
                                detail: e.to_string(),
                            },
                        );
                    }
                }
            }
            domains_block = Some(block);
        }
        lap("domains", &mut timings);

        let functional = match cycle_classes(vbs, &hm, cfg.cycle_budget) {
            Ok(classes) => Ok(positive_functional(hm.free_rank(), &classes)),
            Err(e) => Err(e),
        };
        match (&functional, &a) {
            (Ok(Some(ell)), Ok(a)) => {
                match zeta_report(a, ell, cfg.trunc_degree) {
                    Ok(z) => {
                        verdicts.insert(
                            "zeta_product".into(),
                            Verdict::from_bool(z.product_is_one, || "A times 1/A is not 1".into()),
                        );
                        verdicts.insert(
                        "zeta_nonnegative".into(),
                        if hm.free_rank() >= 2 {
                            Verdict::from_bool(z.all_nonnegative, || "negative coefficient in 1/A".into())
                        } else {
                            Verdict::NotApplicable {
                                reason: "rank one: the factorization caveat allows a 1±t discrepancy".into(),
                            }
                        },
                    );
                        zeta = Some(z);
                    }
                    Err(e) => {
                        verdicts.insert(
                            "zeta_product".into(),
                            Verdict::Fail {
                                detail: e.to_string(),
                            },
                        );
                    }
                }
            }
            (Ok(None), _) => {
                verdicts.insert(
                    "zeta_product".into(),
                    Verdict::NotApplicable {
                        reason: "no positive functional".into(),
                    },
                );
            }
            (Err(e), _) => {
                verdicts.insert(
                    "zeta_product".into(),
                    Verdict::BudgetExceeded {
                        detail: e.to_string(),
                    },
                );
            }
            (_, Err(_)) => {}
        }
        lap("zeta", &mut timings);

        if let Some(states) = &states {
            let ell = cfg
                .fibered_class
                .clone()
                .map(Some)
                .or_else(|| functional.clone().ok());
            match ell.flatten() {
                Some(ell) => match fibered_profile(vbs, &hm, states, &ell) {
                    Ok(p) => {
                        verdicts.insert(
                            "fibered_profile".into(),
                            Verdict::from_bool(p.passed(), || {
                                format!("histogram {:?}", p.histogram)
                            }),
                        );
                        profile = Some(p);
                    }
                    Err(e) => {
                        verdicts.insert(
                            "fibered_profile".into(),
                            Verdict::Fail {
                                detail: e.to_string(),
                            },
                        );
                    }
                },
                None => {
                    verdicts.insert(
                        "fibered_profile".into(),
                        Verdict::NotApplicable {
                            reason: ProfileError::NoPositiveFunctional.to_string(),
                        },
                    );
                }
            }
        }
        lap("profile", &mut timings);
    }

    SurfaceReport {
        schema_version: SCHEMA_VERSION,
        surface,
        loops,
        homology,
        diagram: diagram_block,
        states: state_block,
        spinc,
        polynomials,
        domains: domains_block,
        zeta,
        fibered_profile: profile,
        verdicts,
        timings_ms: Some(timings),
    }
}
