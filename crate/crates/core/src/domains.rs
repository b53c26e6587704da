//! Domains of the Heegaard diagram: corner equations, connecting domains,
//! Lipshitz index, the boundary quantities μ̄ and ν̄, admissibility and the
//! isolation and parity audits.
//!
//! A domain is an integer vector over the empty elementary domains (basepoint
//! domains always have multiplicity zero). At a point `p` with quadrants
//! `q0..q3` holding multiplicities `n_0..n_3`, a domain connecting `x` to `y`
//! satisfies `n_0 - n_1 + n_2 - n_3 = [p in x] - [p in y]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::heegaard::{Curve, HeegaardComplex};
use crate::homology::HomologyModel;
use crate::linalg::{integer_kernel, nonnegative_solution, q, LinearSystem};
use crate::states::{nu, spinc_class, HeegaardState};
use crate::vbs::Vbs;

/// Signs of the quadrant multiplicities in the corner equations.
pub const QUADRANT_SIGNS: [i64; 4] = [1, -1, 1, -1];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("domain does not connect the given states")]
    NotConnecting,
    #[error("domain is not embedded (a coefficient is outside {{0, 1}})")]
    NotEmbedded,
    #[error("domain search exceeded its budget: {0}")]
    BudgetExceeded(String),
    #[error("Lipshitz index is not an integer: {quarters}/4")]
    NonIntegralIndex { quarters: i64 },
    #[error("admissibility decision found neither a certificate nor a witness")]
    Undecided,
}

/// Limits on connecting-domain enumeration.
#[derive(Clone, Copy, Debug)]
pub struct DomainBudget {
    /// Largest number of free lattice directions walked in the `{0,1}` box.
    pub max_free_vars: usize,
    /// Largest number of domains returned for one state pair.
    pub max_domains: usize,
}

impl Default for DomainBudget {
    fn default() -> Self {
        DomainBudget {
            max_free_vars: 24,
            max_domains: 1_000_000,
        }
    }
}

/// Multiplicities over the empty domains, indexed like `hc.empty_domains()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Domain {
    pub coeffs: Vec<i64>,
}

impl Domain {
    pub fn zero(m: usize) -> Domain {
        Domain { coeffs: vec![0; m] }
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    pub fn is_embedded(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0 || c == 1)
    }
    pub fn add(&self, o: &Domain) -> Domain {
        Domain {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Multiplicity of every elementary domain (zero on basepoint domains).
fn full_multiplicities(hc: &HeegaardComplex, d: &Domain) -> Vec<i64> {
    let mut m = vec![0i64; hc.domains().len()];
    for (i, &id) in hc.empty_domains().iter().enumerate() {
        m[id] = d.coeffs[i];
    }
    m
}

/// Corner-equation matrix: one row per intersection point, one column per empty domain.
pub fn corner_matrix(hc: &HeegaardComplex) -> Vec<Vec<i64>> {
    let mut col = vec![usize::MAX; hc.domains().len()];
    for (i, &id) in hc.empty_domains().iter().enumerate() {
        col[id] = i;
    }
    let m = hc.empty_domains().len();
    (0..hc.points().len())
        .map(|p| {
            let mut row = vec![0i64; m];
            for (qi, &d) in hc.quadrants(p).iter().enumerate() {
                if col[d] != usize::MAX {
                    row[col[d]] += QUADRANT_SIGNS[qi];
                }
            }
            row
        })
        .collect()
}

/// Right-hand side `[p in x] - [p in y]`.
pub fn corner_rhs(hc: &HeegaardComplex, x: &HeegaardState, y: &HeegaardState) -> Vec<i64> {
    let mut b = vec![0i64; hc.points().len()];
    for p in x.points() {
        b[p] += 1;
    }
    for p in y.points() {
        b[p] -= 1;
    }
    b
}

pub fn connects(hc: &HeegaardComplex, d: &Domain, x: &HeegaardState, y: &HeegaardState) -> bool {
    let a = corner_matrix(hc);
    let b = corner_rhs(hc, x, y);
    a.iter()
        .zip(&b)
        .all(|(row, &rhs)| row.iter().zip(&d.coeffs).map(|(u, v)| u * v).sum::<i64>() == rhs)
}

/// Integer basis of the periodic lattice (connecting `x` to itself).
pub fn periodic_lattice(hc: &HeegaardComplex) -> Vec<Vec<i64>> {
    let a = corner_matrix(hc);
    integer_kernel(&a, a.len(), hc.empty_domains().len())
}

/// Corner equations prepared once for repeated solving.
#[derive(Clone, Debug)]
pub struct CornerSystem {
    system: LinearSystem,
    m: usize,
}

impl CornerSystem {
    pub fn new(hc: &HeegaardComplex) -> CornerSystem {
        let a = corner_matrix(hc);
        let m = hc.empty_domains().len();
        CornerSystem {
            system: LinearSystem::new(&a, m),
            m,
        }
    }

    /// Rank of the lattice of periodic domains.
    pub fn lattice_rank(&self) -> usize {
        self.system.free().len()
    }

    /// All `{0,1}` solutions for the given right-hand side, sorted.
    pub fn box_solutions(
        &self,
        b: &[i64],
        budget: DomainBudget,
    ) -> Result<Vec<Domain>, DomainError> {
        let Some(sol) = self.system.solve(b) else {
            return Ok(Vec::new());
        };
        let f = self.system.free().len();
        if f > budget.max_free_vars {
            return Err(DomainError::BudgetExceeded(format!(
                "{f} free directions, limit {}",
                budget.max_free_vars
            )));
        }
        let mut out = Vec::new();
        let mut free_values = vec![0i64; f];
        for mask in 0u64..(1u64 << f) {
            for (i, v) in free_values.iter_mut().enumerate() {
                *v = ((mask >> i) & 1) as i64;
            }
            if let Some(x) = sol.point(&free_values) {
                if x.iter().all(|&c| c == 0 || c == 1) {
                    out.push(Domain { coeffs: x });
                    if out.len() > budget.max_domains {
                        return Err(DomainError::BudgetExceeded(format!(
                            "more than {} domains",
                            budget.max_domains
                        )));
                    }
                }
            }
        }
        out.sort();
        debug_assert_eq!(
            out.iter().map(|d| d.coeffs.len()).max().unwrap_or(self.m),
            self.m
        );
        Ok(out)
    }
}

/// All embedded effective domains connecting `x` to `y` (including the zero
/// domain when `x = y`). Pairs with different spin-c classes return nothing.
pub fn connecting_domains(
    vbs: &Vbs,
    hm: &HomologyModel,
    hc: &HeegaardComplex,
    sys: &CornerSystem,
    x: &HeegaardState,
    y: &HeegaardState,
    budget: DomainBudget,
) -> Result<Vec<Domain>, DomainError> {
    if spinc_class(vbs, hm, x) != spinc_class(vbs, hm, y) {
        return Ok(Vec::new());
    }
    sys.box_solutions(&corner_rhs(hc, x, y), budget)
}

/// Largest number of empty domains accepted by the brute-force oracle.
pub const BRUTE_FORCE_MAX: usize = 22;

/// Oracle: every subset of empty domains satisfying the corner equations.
pub fn connecting_domains_bruteforce(
    hc: &HeegaardComplex,
    x: &HeegaardState,
    y: &HeegaardState,
) -> Result<Vec<Domain>, DomainError> {
    let m = hc.empty_domains().len();
    if m > BRUTE_FORCE_MAX {
        return Err(DomainError::BudgetExceeded(format!(
            "{m} empty domains, limit {BRUTE_FORCE_MAX}"
        )));
    }
    let a = corner_matrix(hc);
    let b = corner_rhs(hc, x, y);
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let coeffs: Vec<i64> = (0..m).map(|i| ((mask >> i) & 1) as i64).collect();
        if a.iter()
            .zip(&b)
            .all(|(row, &r)| row.iter().zip(&coeffs).map(|(u, v)| u * v).sum::<i64>() == r)
        {
            out.push(Domain { coeffs });
        }
    }
    out.sort();
    Ok(out)
}

/// Four times the Euler measure of a domain.
pub fn euler_quarters(hc: &HeegaardComplex, d: &Domain) -> i64 {
    hc.empty_domains()
        .iter()
        .zip(&d.coeffs)
        .map(|(&id, &c)| c * hc.domains()[id].euler_quarters)
        .sum()
}

/// Four times the average multiplicity of `d` at point `p`.
pub fn point_multiplicity_quarters(hc: &HeegaardComplex, full: &[i64], p: usize) -> i64 {
    hc.quadrants(p).iter().map(|&dom| full[dom]).sum()
}

/// `e(D) + n_x(D) + n_y(D)`.
pub fn lipshitz_index(
    hc: &HeegaardComplex,
    d: &Domain,
    x: &HeegaardState,
    y: &HeegaardState,
) -> Result<i64, DomainError> {
    if !connects(hc, d, x, y) {
        return Err(DomainError::NotConnecting);
    }
    let full = full_multiplicities(hc, d);
    let mut quarters = euler_quarters(hc, d);
    for p in x.points().into_iter().chain(y.points()) {
        quarters += point_multiplicity_quarters(hc, &full, p);
    }
    if quarters % 4 != 0 {
        return Err(DomainError::NonIntegralIndex { quarters });
    }
    Ok(quarters / 4)
}

/// Boundary data of an embedded domain reconstructed from quadrant incidences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomainBoundary {
    pub components: usize,
    pub convex: usize,
    pub concave: usize,
    /// Lengths (number of arcs) of the β-sides.
    pub beta_sides: Vec<usize>,
    /// Lengths of the α-sides.
    pub alpha_sides: Vec<usize>,
    /// Boundary components without corners, which would be full curves.
    pub full_curve_components: usize,
}

pub fn domain_boundary(hc: &HeegaardComplex, d: &Domain) -> Result<DomainBoundary, DomainError> {
    if !d.is_embedded() {
        return Err(DomainError::NotEmbedded);
    }
    let full = full_multiplicities(hc, d);
    let np = hc.points().len();
    let occ = |p: usize, qd: usize| full[hc.quadrants(p)[qd % 4]] == 1;
    let mut seen = vec![[false; 4]; np];
    let mut out = DomainBoundary {
        components: 0,
        convex: 0,
        concave: 0,
        beta_sides: Vec::new(),
        alpha_sides: Vec::new(),
        full_curve_components: 0,
    };
    for p in 0..np {
        for h in 0..4 {
            // Boundary dart: leaving p along h with the domain on the left.
            if seen[p][h] || !occ(p, h) || occ(p, h + 3) {
                continue;
            }
            out.components += 1;
            // (arc is beta, corner kind at its far end) for each traversed arc.
            let mut steps: Vec<(bool, usize)> = Vec::new();
            let (mut cp, mut ch) = (p, h);
            while !seen[cp][ch] {
                seen[cp][ch] = true;
                let is_beta = matches!(hc.arcs()[hc.slots(cp)[ch]].curve, Curve::Beta(_));
                let (qp, arrive) = hc.across(cp, ch);
                let mut b = (arrive + 3) % 4;
                let mut swept = 1;
                while occ(qp, b + 3) {
                    b = (b + 3) % 4;
                    swept += 1;
                }
                steps.push((is_beta, swept));
                cp = qp;
                ch = b;
            }
            let corners: Vec<usize> = (0..steps.len()).filter(|&i| steps[i].1 != 2).collect();
            for &(_, s) in &steps {
                match s {
                    1 => out.convex += 1,
                    3 => out.concave += 1,
                    _ => {}
                }
            }
            if corners.is_empty() {
                out.full_curve_components += 1;
                continue;
            }
            // Sides run from just after one corner to the next corner.
            for (ci, &c) in corners.iter().enumerate() {
                let next = corners[(ci + 1) % corners.len()];
                let len = (next + steps.len() - c - 1) % steps.len() + 1;
                let first_arc = (c + 1) % steps.len();
                if steps[first_arc].0 {
                    out.beta_sides.push(len);
                } else {
                    out.alpha_sides.push(len);
                }
            }
        }
    }
    Ok(out)
}

/// Four times μ̄ = e + convex/4 + 3 concave/4.
pub fn mu_bar_quarters(hc: &HeegaardComplex, d: &Domain) -> Result<i64, DomainError> {
    let b = domain_boundary(hc, d)?;
    Ok(euler_quarters(hc, d) + b.convex as i64 + 3 * b.concave as i64)
}

/// μ̄ as a rational number.
pub fn mu_bar(hc: &HeegaardComplex, d: &Domain) -> Result<BigRational, DomainError> {
    Ok(BigRational::new(
        BigInt::from(mu_bar_quarters(hc, d)?),
        BigInt::from(4),
    ))
}

/// ν̄ = sum over β-sides of (length + 1) plus the number of boundary components.
pub fn nu_bar(hc: &HeegaardComplex, d: &Domain) -> Result<i64, DomainError> {
    let b = domain_boundary(hc, d)?;
    Ok(b.beta_sides.iter().map(|&l| l as i64 + 1).sum::<i64>() + b.components as i64)
}

/// Decision of admissibility with an exactly verified certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Point weights `y` with `A^T y > 0` on every empty domain (when admissible).
    pub certificate: Option<Vec<String>>,
    /// A nonzero nonnegative periodic domain (when not admissible).
    pub witness: Option<Vec<String>>,
}

/// No nonzero nonnegative periodic domain exists. Decided by Gordan's
/// alternative: either weights `y` on the points with `A^T y > 0`, or a
/// nonnegative `x != 0` with `A x = 0`. Whichever is found is verified exactly.
pub fn check_admissibility(hc: &HeegaardComplex) -> Result<AdmissibilityReport, DomainError> {
    let a = corner_matrix(hc);
    let rows = a.len();
    let m = hc.empty_domains().len();
    if m == 0 {
        return Ok(AdmissibilityReport {
            admissible: true,
            certificate: Some(Vec::new()),
            witness: None,
        });
    }
    // A^T (y+ - y-) - s = 1 with y+, y-, s >= 0.
    let width = 2 * rows + m;
    let lp: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            let mut r = vec![BigRational::zero(); width];
            for i in 0..rows {
                r[i] = q(a[i][j]);
                r[rows + i] = q(-a[i][j]);
            }
            r[2 * rows + j] = q(-1);
            r
        })
        .collect();
    if let Some(sol) = nonnegative_solution(&lp, &vec![q(1); m], width) {
        let y: Vec<BigRational> = (0..rows).map(|i| &sol[i] - &sol[rows + i]).collect();
        let positive = (0..m).all(|j| {
            let s: BigRational = (0..rows).map(|i| &y[i] * q(a[i][j])).sum();
            s.is_positive()
        });
        if positive {
            return Ok(AdmissibilityReport {
                admissible: true,
                certificate: Some(y.iter().map(|v| v.to_string()).collect()),
                witness: None,
            });
        }
    }
    // A x = 0, sum x = 1, x >= 0.
    let mut sys: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|&v| q(v)).collect())
        .collect();
    sys.push(vec![q(1); m]);
    let mut rhs = vec![q(0); rows];
    rhs.push(q(1));
    if let Some(x) = nonnegative_solution(&sys, &rhs, m) {
        let periodic = a.iter().all(|r| {
            r.iter()
                .zip(&x)
                .map(|(&c, v)| q(c) * v)
                .sum::<BigRational>()
                .is_zero()
        });
        if periodic && x.iter().all(|v| !v.is_negative()) && x.iter().any(|v| v.is_positive()) {
            return Ok(AdmissibilityReport {
                admissible: false,
                certificate: None,
                witness: Some(x.iter().map(|v| v.to_string()).collect()),
            });
        }
    }
    Err(DomainError::Undecided)
}

/// Domains for one ordered state pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDomains {
    pub x: usize,
    pub y: usize,
    pub domains: Vec<Domain>,
}

/// Connecting domains for every ordered pair of states, in row-major order.
pub fn all_pair_domains(
    vbs: &Vbs,
    hm: &HomologyModel,
    hc: &HeegaardComplex,
    states: &[HeegaardState],
    budget: DomainBudget,
) -> Result<Vec<PairDomains>, DomainError> {
    let sys = CornerSystem::new(hc);
    let classes: Vec<_> = states.iter().map(|x| spinc_class(vbs, hm, x)).collect();
    let pairs: Vec<(usize, usize)> = (0..states.len())
        .flat_map(|i| (0..states.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let domains = if classes[i] == classes[j] {
                sys.box_solutions(&corner_rhs(hc, &states[i], &states[j]), budget)?
            } else {
                Vec::new()
            };
            Ok(PairDomains {
                x: i,
                y: j,
                domains,
            })
        })
        .collect()
}

/// True iff no nonzero domain in the table starts or ends at the top or bottom state.
pub fn check_top_bottom_isolation(
    states: &[HeegaardState],
    table: &[PairDomains],
    top: &HeegaardState,
    bottom: &HeegaardState,
) -> bool {
    let special: Vec<usize> = states
        .iter()
        .enumerate()
        .filter(|(_, s)| *s == top || *s == bottom)
        .map(|(i, _)| i)
        .collect();
    table.iter().all(|pd| {
        !(special.contains(&pd.x) || special.contains(&pd.y))
            || pd.domains.iter().all(Domain::is_zero)
    })
}

/// Outcome of the parity audit over every enumerated domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub domains_checked: usize,
    pub nonzero_domains: usize,
    /// `nu(x) - nu(y) = mu(D) mod 2`.
    pub nu_mu_failures: usize,
    /// `mu_bar(D) = mu(D) mod 2` (with `mu_bar` integral).
    pub mu_bar_failures: usize,
    /// `nu_bar(D) = nu(x) - nu(y) mod 2`.
    pub nu_bar_failures: usize,
    /// Domains whose boundary contains a full α- or β-curve.
    pub full_curve_domains: usize,
    /// Histogram of Lipshitz indices of nonzero domains.
    pub index_histogram: BTreeMap<i64, usize>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.nu_mu_failures == 0
            && self.mu_bar_failures == 0
            && self.nu_bar_failures == 0
            && self.full_curve_domains == 0
    }
}

pub fn parity_audit_with(
    hc: &HeegaardComplex,
    states: &[HeegaardState],
    table: &[PairDomains],
    nu_of: impl Fn(usize) -> u8,
) -> Result<ParityReport, DomainError> {
    let mut r = ParityReport {
        domains_checked: 0,
        nonzero_domains: 0,
        nu_mu_failures: 0,
        mu_bar_failures: 0,
        nu_bar_failures: 0,
        full_curve_domains: 0,
        index_histogram: BTreeMap::new(),
    };
    for pd in table {
        let (x, y) = (&states[pd.x], &states[pd.y]);
        let dnu = (i64::from(nu_of(pd.x)) - i64::from(nu_of(pd.y))).rem_euclid(2);
        for d in &pd.domains {
            r.domains_checked += 1;
            let mu = lipshitz_index(hc, d, x, y)?;
            if mu.rem_euclid(2) != dnu {
                r.nu_mu_failures += 1;
            }
            if d.is_zero() {
                continue;
            }
            r.nonzero_domains += 1;
            *r.index_histogram.entry(mu).or_default() += 1;
            let b = domain_boundary(hc, d)?;
            if b.full_curve_components > 0 {
                r.full_curve_domains += 1;
            }
            let mbq = mu_bar_quarters(hc, d)?;
            if mbq % 4 != 0 || (mbq / 4 - mu).rem_euclid(2) != 0 {
                r.mu_bar_failures += 1;
            }
            if (nu_bar(hc, d)? - dnu).rem_euclid(2) != 0 {
                r.nu_bar_failures += 1;
            }
        }
    }
    Ok(r)
}

pub fn parity_audit(
    hc: &HeegaardComplex,
    states: &[HeegaardState],
    table: &[PairDomains],
) -> Result<ParityReport, DomainError> {
    parity_audit_with(hc, states, table, |i| nu(&states[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heegaard::build_diagram;
    use crate::homology::build_homology;
    use crate::states::{bottom_state, enumerate_states, top_state, StateBudget};
    use crate::vbs::validate;

    struct Ctx {
        vbs: Vbs,
        hm: HomologyModel,
        hc: HeegaardComplex,
        states: Vec<HeegaardState>,
    }

    fn f8() -> Ctx {
        let vbs =
            validate(&serde_json::from_str(include_str!("../../../fixtures/f8.json")).unwrap())
                .unwrap();
        let hm = build_homology(&vbs);
        let hc = build_diagram(&vbs).unwrap();
        let states = enumerate_states(&vbs, StateBudget::default()).unwrap();
        Ctx {
            vbs,
            hm,
            hc,
            states,
        }
    }

    #[test]
    fn box_search_matches_bruteforce() {
        let c = f8();
        let sys = CornerSystem::new(&c.hc);
        for x in &c.states {
            for y in &c.states {
                let fast = sys
                    .box_solutions(&corner_rhs(&c.hc, x, y), DomainBudget::default())
                    .unwrap();
                let slow = connecting_domains_bruteforce(&c.hc, x, y).unwrap();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn zero_domain_connects_a_state_to_itself() {
        let c = f8();
        let sys = CornerSystem::new(&c.hc);
        for x in &c.states {
            let ds = connecting_domains(&c.vbs, &c.hm, &c.hc, &sys, x, x, DomainBudget::default())
                .unwrap();
            assert_eq!(ds, vec![Domain::zero(c.hc.empty_domains().len())]);
            assert_eq!(lipshitz_index(&c.hc, &ds[0], x, x).unwrap(), 0);
        }
    }

    #[test]
    fn elementary_domains_have_odd_mu_bar_and_nu_bar() {
        let c = f8();
        let m = c.hc.empty_domains().len();
        for i in 0..m {
            let mut d = Domain::zero(m);
            d.coeffs[i] = 1;
            let mbq = mu_bar_quarters(&c.hc, &d).unwrap();
            assert_eq!(mbq % 4, 0);
            assert_eq!((mbq / 4).rem_euclid(2), 1);
            assert_eq!(nu_bar(&c.hc, &d).unwrap().rem_euclid(2), 1);
        }
    }

    #[test]
    fn admissible_and_isolated() {
        let c = f8();
        assert!(check_admissibility(&c.hc).unwrap().admissible);
        let table =
            all_pair_domains(&c.vbs, &c.hm, &c.hc, &c.states, DomainBudget::default()).unwrap();
        assert!(check_top_bottom_isolation(
            &c.states,
            &table,
            &top_state(&c.vbs),
            &bottom_state(&c.vbs)
        ));
        assert!(parity_audit(&c.hc, &c.states, &table).unwrap().passed());
        for v in periodic_lattice(&c.hc) {
            assert!(v.iter().any(|&x| x > 0) && v.iter().any(|&x| x < 0));
        }
    }

    #[test]
    fn non_integer_box_rejected() {
        let c = f8();
        let m = c.hc.empty_domains().len();
        let d = Domain { coeffs: vec![2; m] };
        assert_eq!(domain_boundary(&c.hc, &d), Err(DomainError::NotEmbedded));
    }
}
