//! Positive functionals on `G = H_1 / Torsion` and truncated power series in
//! the group ring, graded by such a functional.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::homology::HomologyModel;
use crate::linalg::{clear_denominators, nonnegative_solution, q};
use crate::poly::GroupRingElement;
use crate::relations::cycle_class;
use crate::vbs::Vbs;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ZetaError {
    #[error("element is not supported in the cone where the functional is nonnegative")]
    NotConeSupported,
    #[error("degree-zero part of the element is not a unit monomial ±1")]
    NotUnitConstantTerm,
    #[error("functional has {found} coordinates, expected {expected}")]
    WrongRank { expected: usize, found: usize },
    #[error("cycle enumeration exceeded its budget of {budget}")]
    CycleBudgetExceeded { budget: usize },
}

/// Largest number of simple cycles enumerated for the functional search.
pub const DEFAULT_CYCLE_BUDGET: usize = 200_000;

pub fn pairing(ell: &[i64], g: &[i64]) -> i64 {
    ell.iter().zip(g).map(|(a, b)| a * b).sum()
}

/// Every simple directed cycle of the dual graph as an edge list, each
/// starting at its least vertex.
pub fn simple_cycles(vbs: &Vbs, budget: usize) -> Result<Vec<Vec<usize>>, ZetaError> {
    let n = vbs.n();
    let mut out = Vec::new();
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        let mut path: Vec<usize> = Vec::new();
        // Stack of (vertex, next outgoing slot).
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        while let Some(&mut (v, ref mut slot)) = stack.last_mut() {
            if *slot == 2 {
                stack.pop();
                if let Some(e) = path.pop() {
                    on_path[vbs.dst(e)] = false;
                }
                continue;
            }
            let e = vbs.outgoing(v)[*slot];
            *slot += 1;
            let w = vbs.dst(e);
            if w == s {
                let mut c = path.clone();
                c.push(e);
                out.push(c);
                if out.len() > budget {
                    return Err(ZetaError::CycleBudgetExceeded { budget });
                }
            } else if w > s && !on_path[w] {
                on_path[w] = true;
                path.push(e);
                stack.push((w, 0));
            }
        }
    }
    Ok(out)
}

/// Distinct classes in `G` of the simple cycles.
pub fn cycle_classes(
    vbs: &Vbs,
    hm: &HomologyModel,
    budget: usize,
) -> Result<Vec<Vec<i64>>, ZetaError> {
    let mut classes: Vec<Vec<i64>> = simple_cycles(vbs, budget)?
        .iter()
        .map(|c| cycle_class(hm, c))
        .collect();
    classes.sort();
    classes.dedup();
    Ok(classes)
}

/// An integer functional strictly positive on every given class, found by
/// exact linear programming and scaled to primitive integers. `None` when no
/// such functional exists (for instance when a class is zero).
pub fn positive_functional(rank: usize, classes: &[Vec<i64>]) -> Option<Vec<i64>> {
    if rank == 0 || classes.iter().any(|c| c.iter().all(|&x| x == 0)) {
        return None;
    }
    if rank == 1 {
        let signs: Vec<i64> = classes.iter().map(|c| c[0].signum()).collect();
        return if signs.iter().all(|&s| s > 0) {
            Some(vec![1])
        } else if signs.iter().all(|&s| s < 0) {
            Some(vec![-1])
        } else {
            None
        };
    }
    // C (l+ - l-) - s = 1 with l+, l-, s >= 0.
    let m = classes.len();
    let width = 2 * rank + m;
    let rows: Vec<Vec<BigRational>> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = vec![BigRational::zero(); width];
            for j in 0..rank {
                r[j] = q(c[j]);
                r[rank + j] = q(-c[j]);
            }
            r[2 * rank + i] = q(-1);
            r
        })
        .collect();
    let sol = nonnegative_solution(&rows, &vec![q(1); m], width)?;
    let ell: Vec<BigRational> = (0..rank).map(|j| &sol[j] - &sol[rank + j]).collect();
    let ints = clear_denominators(&ell);
    let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    let ell: Vec<i64> = ints
        .iter()
        .map(|x| i64::try_from(x / &g).expect("functional fits in i64"))
        .collect();
    classes.iter().all(|c| pairing(&ell, c) > 0).then_some(ell)
}

/// Shift and sign-normalize `p` so that its least `ell`-degree part is `+1`.
pub fn cone_normalize(p: &GroupRingElement, ell: &[i64]) -> Result<GroupRingElement, ZetaError> {
    let min = p
        .terms()
        .map(|(e, _)| pairing(ell, e))
        .min()
        .ok_or(ZetaError::NotUnitConstantTerm)?;
    let low: Vec<(&Vec<i64>, &BigInt)> =
        p.terms().filter(|(e, _)| pairing(ell, e) == min).collect();
    if low.len() != 1 || !low[0].1.abs().is_one() {
        return Err(ZetaError::NotUnitConstantTerm);
    }
    let shift: Vec<i64> = low[0].0.iter().map(|x| -x).collect();
    let sign = low[0].1.signum();
    Ok(p.shift(&shift).scale(&sign))
}

/// Coefficients on `{g : 0 <= ell(g) <= max_degree}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub ell: Vec<i64>,
    pub max_degree: u32,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl TruncatedSeries {
    pub fn from_element(
        p: &GroupRingElement,
        ell: &[i64],
        max_degree: u32,
    ) -> Result<TruncatedSeries, ZetaError> {
        if ell.len() != p.nvars() {
            return Err(ZetaError::WrongRank {
                expected: p.nvars(),
                found: ell.len(),
            });
        }
        if p.terms().any(|(e, _)| pairing(ell, e) < 0) {
            return Err(ZetaError::NotConeSupported);
        }
        Ok(TruncatedSeries {
            ell: ell.to_vec(),
            max_degree,
            terms: p
                .terms()
                .filter(|(e, _)| pairing(ell, e) <= i64::from(max_degree))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    pub fn degree(&self, g: &[i64]) -> i64 {
        pairing(&self.ell, g)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &[i64]) -> BigInt {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn to_element(&self) -> GroupRingElement {
        GroupRingElement::from_terms(
            self.ell.len(),
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    fn by_degree(&self) -> Vec<Vec<(&Vec<i64>, &BigInt)>> {
        let mut out = vec![Vec::new(); self.max_degree as usize + 1];
        for (e, c) in &self.terms {
            out[self.degree(e) as usize].push((e, c));
        }
        out
    }

    /// Product truncated at the common degree cap.
    pub fn mul(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let cap = self.max_degree.min(o.max_degree);
        let prod = &self.to_element() * &o.to_element();
        TruncatedSeries::from_element(&prod, &self.ell, cap)
            .expect("product of cone-supported series is cone-supported")
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(&vec![0; self.ell.len()]).is_one()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// `(degree, exponent, coefficient)` rows sorted by degree then exponent.
    pub fn table(&self) -> Vec<(i64, Vec<i64>, BigInt)> {
        let mut rows: Vec<_> = self
            .terms
            .iter()
            .map(|(e, c)| (self.degree(e), e.clone(), c.clone()))
            .collect();
        rows.sort();
        rows
    }
}

/// Reciprocal of `p` modulo terms of `ell`-degree above `max_degree`.
pub fn series_reciprocal(
    p: &GroupRingElement,
    ell: &[i64],
    max_degree: u32,
) -> Result<TruncatedSeries, ZetaError> {
    let s = TruncatedSeries::from_element(p, ell, max_degree)?;
    let parts = s.by_degree();
    let zero = vec![0i64; ell.len()];
    if parts[0].len() != 1 || parts[0][0].0 != &zero || !parts[0][0].1.abs().is_one() {
        return Err(ZetaError::NotUnitConstantTerm);
    }
    let eps = parts[0][0].1.clone();
    let mut inv: Vec<BTreeMap<Vec<i64>, BigInt>> = vec![BTreeMap::from([(zero, eps.clone())])];
    for d in 1..=max_degree as usize {
        let mut acc: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (j, part) in parts.iter().enumerate().take(d + 1).skip(1) {
            for (pe, pc) in part {
                for (qe, qc) in &inv[d - j] {
                    let e: Vec<i64> = pe.iter().zip(qe).map(|(a, b)| a + b).collect();
                    *acc.entry(e).or_default() -= *pc * qc * &eps;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        inv.push(acc);
    }
    Ok(TruncatedSeries {
        ell: ell.to_vec(),
        max_degree,
        terms: inv.into_iter().flatten().collect(),
    })
}

/// Reciprocal of a surface polynomial with the product check and sign audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    pub functional: Vec<i64>,
    pub max_degree: u32,
    /// `(ell-degree, exponent, coefficient)` of the reciprocal.
    pub coefficients: Vec<(i64, Vec<i64>, String)>,
    pub product_is_one: bool,
    pub all_nonnegative: bool,
}

pub fn zeta_report(
    p: &GroupRingElement,
    ell: &[i64],
    max_degree: u32,
) -> Result<ZetaReport, ZetaError> {
    let p = cone_normalize(p, ell)?;
    let r = series_reciprocal(&p, ell, max_degree)?;
    let check = TruncatedSeries::from_element(&p, ell, max_degree)?.mul(&r);
    Ok(ZetaReport {
        functional: ell.to_vec(),
        max_degree,
        coefficients: r
            .table()
            .into_iter()
            .map(|(d, e, c)| (d, e, c.to_string()))
            .collect(),
        product_is_one: check.is_one(),
        all_nonnegative: r.all_nonnegative(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(nvars: usize, terms: &[(&[i64], i64)]) -> GroupRingElement {
        GroupRingElement::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c)))
    }

    #[test]
    fn geometric_series() {
        let p = poly(1, &[(&[0], 1), (&[1], -1)]);
        let r = series_reciprocal(&p, &[1], 5).unwrap();
        assert_eq!(
            r.to_element(),
            poly(
                1,
                &[
                    (&[0], 1),
                    (&[1], 1),
                    (&[2], 1),
                    (&[3], 1),
                    (&[4], 1),
                    (&[5], 1)
                ]
            )
        );
    }

    #[test]
    fn preconditions_fail_loud() {
        let p = poly(1, &[(&[-1], 1), (&[0], 1)]);
        assert_eq!(
            series_reciprocal(&p, &[1], 3),
            Err(ZetaError::NotConeSupported)
        );
        let p = poly(1, &[(&[0], 2), (&[1], 1)]);
        assert_eq!(
            series_reciprocal(&p, &[1], 3),
            Err(ZetaError::NotUnitConstantTerm)
        );
        let p = poly(2, &[(&[0, 0], 1), (&[1, -1], 1)]);
        assert_eq!(
            series_reciprocal(&p, &[1, 1], 3),
            Err(ZetaError::NotUnitConstantTerm)
        );
    }

    #[test]
    fn functional_search() {
        assert_eq!(positive_functional(1, &[vec![2], vec![1]]), Some(vec![1]));
        assert_eq!(
            positive_functional(1, &[vec![-2], vec![-1]]),
            Some(vec![-1])
        );
        assert_eq!(positive_functional(1, &[vec![-2], vec![1]]), None);
        assert_eq!(positive_functional(2, &[vec![0, 0], vec![1, 0]]), None);
        let classes = vec![vec![1, 0], vec![0, 1], vec![1, -1]];
        let ell = positive_functional(2, &classes).unwrap();
        assert!(classes.iter().all(|c| pairing(&ell, c) > 0));
        let doubled: Vec<i64> = ell.iter().map(|x| 2 * x).collect();
        assert!(classes.iter().all(|c| pairing(&doubled, c) > 0));
        assert_eq!(
            positive_functional(2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]),
            None
        );
    }

    proptest! {
        #[test]
        fn reciprocal_times_element_is_one(coeffs in proptest::collection::vec(-3i64..=3, 1..6), sign in prop::bool::ANY, deg in 0u32..7) {
            let mut terms: Vec<(Vec<i64>, i64)> = vec![(vec![0, 0], if sign { 1 } else { -1 })];
            for (i, c) in coeffs.iter().enumerate() {
                terms.push((vec![(i % 3) as i64, (i / 3) as i64 + 1], *c));
            }
            let p = GroupRingElement::from_terms(2, terms);
            let ell = [1, 1];
            let r = series_reciprocal(&p, &ell, deg).unwrap();
            let prod = TruncatedSeries::from_element(&p, &ell, deg).unwrap().mul(&r);
            prop_assert!(prod.is_one());
        }
    }
}
