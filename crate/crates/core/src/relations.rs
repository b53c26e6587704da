//! Face, tetrahedron and anti-tetrahedron relation matrices over the group ring
//! of `G = H_1 / Torsion`, the polynomials they define, and the factorization
//! and categorification checks.
//!
//! Every column is anchored at the identity lift of one triple point (the
//! source of the edge for face columns). The group element attached to a
//! sector entry is the cocycle sum along the sector boundary from its bottom
//! corner to that anchor.

use rayon::prelude::*;
use serde::Serialize;

use crate::homology::{path_vector, HomologyModel};
use crate::poly::{determinant, equal_up_to_unit, gcd_all, GcdBudget, GroupRingElement, PolyError};
use crate::vbs::{decompose_anti_branch_loops, decompose_branch_loops, Vbs};

/// Assignment of a `G` element to each directed edge: zero on the spanning
/// tree, the free class of the fundamental cycle otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    rank: usize,
    values: Vec<Vec<i64>>,
}

impl Cocycle {
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn value(&self, e: usize) -> &[i64] {
        &self.values[e]
    }
    /// Sum of the cocycle along a sequence of edges.
    pub fn sum(&self, path: &[usize]) -> Vec<i64> {
        let mut s = vec![0i64; self.rank];
        for &e in path {
            for (a, b) in s.iter_mut().zip(&self.values[e]) {
                *a += b;
            }
        }
        s
    }
    /// The cocycle sending every edge to the identity.
    pub fn trivial(&self) -> Cocycle {
        Cocycle {
            rank: self.rank,
            values: vec![vec![0; self.rank]; self.values.len()],
        }
    }
    /// A cocycle from explicit values (used for harness mutations).
    pub fn from_values(rank: usize, values: Vec<Vec<i64>>) -> Cocycle {
        Cocycle { rank, values }
    }
}

pub fn build_cocycle(hm: &HomologyModel) -> Cocycle {
    let m = hm.num_edges();
    let values = (0..m)
        .map(|e| {
            let mut x = vec![0i64; m];
            x[e] = 1;
            hm.free_part_unchecked(&x)
        })
        .collect();
    Cocycle {
        rank: hm.free_rank(),
        values,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Face,
    Tetrahedron,
    AntiTetrahedron,
}

/// Which sector plays the maw-in role of a face relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MawRule {
    /// The sector having the edge as its bottom side.
    Standard,
    /// The first top-side sector instead (only useful to test the auditor).
    Transposed,
}

/// Rows are sectors; columns are edges (face) or triple points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    pub kind: RelationKind,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<GroupRingElement>>,
}

impl RelationMatrix {
    fn new(kind: RelationKind, rows: usize, cols: usize, nvars: usize) -> Self {
        RelationMatrix {
            kind,
            rows,
            cols,
            entries: vec![vec![GroupRingElement::zero(nvars); cols]; rows],
        }
    }
    fn add(&mut self, row: usize, col: usize, exp: Vec<i64>, sign: i64) {
        let t = GroupRingElement::monomial(exp, sign);
        self.entries[row][col] = &self.entries[row][col] + &t;
    }
    pub fn column(&self, c: usize) -> Vec<GroupRingElement> {
        self.entries.iter().map(|r| r[c].clone()).collect()
    }
    /// Square submatrix on the given columns.
    pub fn columns(&self, cols: &[usize]) -> Vec<Vec<GroupRingElement>> {
        self.entries
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect()
    }
}

pub fn face_matrix(vbs: &Vbs, c: &Cocycle) -> RelationMatrix {
    face_matrix_with_rule(vbs, c, MawRule::Standard)
}

#[doc(hidden)]
pub fn face_matrix_with_rule(vbs: &Vbs, c: &Cocycle, rule: MawRule) -> RelationMatrix {
    let mut m = RelationMatrix::new(RelationKind::Face, vbs.n(), vbs.num_edges(), c.rank());
    let mut first_top_seen = vec![false; vbs.num_edges()];
    for (s, sec) in vbs.sectors().iter().enumerate() {
        for path in &sec.paths {
            for (j, &e) in path.iter().enumerate() {
                let exp = c.sum(&path[..j]);
                let sign = match rule {
                    MawRule::Standard => {
                        if j == 0 {
                            -1
                        } else {
                            1
                        }
                    }
                    MawRule::Transposed => {
                        if j == 0 {
                            1
                        } else if !first_top_seen[e] {
                            first_top_seen[e] = true;
                            -1
                        } else {
                            1
                        }
                    }
                };
                m.add(s, e, exp, sign);
            }
        }
    }
    m
}

pub fn tetrahedron_matrix(vbs: &Vbs, c: &Cocycle) -> RelationMatrix {
    let n = vbs.n();
    let mut m = RelationMatrix::new(RelationKind::Tetrahedron, n, n, c.rank());
    for (s, sec) in vbs.sectors().iter().enumerate() {
        m.add(s, sec.top, c.sum(&sec.paths[0]), 1);
        m.add(s, sec.bottom, vec![0; c.rank()], -1);
        for path in &sec.paths {
            for j in 1..path.len() - 1 {
                m.add(s, vbs.dst(path[j]), c.sum(&path[..=j]), 1);
            }
        }
    }
    m
}

pub fn antitetrahedron_matrix(vbs: &Vbs, c: &Cocycle) -> RelationMatrix {
    let n = vbs.n();
    let mut m = RelationMatrix::new(RelationKind::AntiTetrahedron, n, n, c.rank());
    for (s, sec) in vbs.sectors().iter().enumerate() {
        m.add(s, sec.top, c.sum(&sec.paths[0]), 1);
        m.add(s, sec.bottom, vec![0; c.rank()], 1);
        for path in &sec.paths {
            m.add(s, vbs.dst(path[0]), c.sum(&path[..1]), -1);
        }
    }
    m
}

/// Outcome of comparing face-relation differences with anti-tetrahedron columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacerelReport {
    pub checked: usize,
    /// `(vertex, incoming edge, outgoing edge)` for every failing smooth pair.
    pub failures: Vec<(usize, usize, usize)>,
}

impl FacerelReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// For every vertex `v` and every smooth pair `(e_b, e_t)` through it, check
/// `t^{c(e_b)} col_face(e_b) - col_face(e_t) = col_anti(v)` entrywise.
pub fn facereldiff_audit_with(vbs: &Vbs, c: &Cocycle, face: &RelationMatrix) -> FacerelReport {
    let anti = antitetrahedron_matrix(vbs, c);
    let mut failures = Vec::new();
    let mut checked = 0;
    for v in 0..vbs.n() {
        let col_a = anti.column(v);
        for eb in vbs.incoming(v) {
            let et = vbs.smooth_successor(eb);
            let shift = c.value(eb).to_vec();
            let ok = (0..vbs.n()).all(|s| {
                let d = &face.entries[s][eb].shift(&shift) - &face.entries[s][et];
                d == col_a[s]
            });
            checked += 1;
            if !ok {
                failures.push((v, eb, et));
            }
        }
    }
    FacerelReport { checked, failures }
}

pub fn facereldiff_audit(vbs: &Vbs, c: &Cocycle) -> FacerelReport {
    facereldiff_audit_with(vbs, c, &face_matrix(vbs, c))
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Gcd of all maximal minors of the face matrix, in canonical form.
pub fn taut_polynomial_of(
    face: &RelationMatrix,
    nvars: usize,
    budget: GcdBudget,
) -> Result<GroupRingElement, PolyError> {
    let minors: Vec<GroupRingElement> = combinations(face.cols, face.rows)
        .par_iter()
        .map(|cols| determinant(&face.columns(cols), nvars))
        .collect::<Result<_, _>>()?;
    gcd_all(minors.iter(), nvars, budget)
}

pub fn taut_polynomial(
    vbs: &Vbs,
    c: &Cocycle,
    budget: GcdBudget,
) -> Result<GroupRingElement, PolyError> {
    taut_polynomial_of(&face_matrix(vbs, c), c.rank(), budget)
}

pub fn veering_polynomial(vbs: &Vbs, c: &Cocycle) -> Result<GroupRingElement, PolyError> {
    Ok(determinant(&tetrahedron_matrix(vbs, c).entries, c.rank())?.canonical())
}

pub fn antiveering_polynomial(vbs: &Vbs, c: &Cocycle) -> Result<GroupRingElement, PolyError> {
    Ok(determinant(&antitetrahedron_matrix(vbs, c).entries, c.rank())?.canonical())
}

/// Result of a factorization check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationVerdict {
    Exact,
    /// Equality after multiplying the left side by `1 + t` (`plus`) or `1 - t`.
    WithUnitFactor {
        plus: bool,
    },
    Fail,
}

impl FactorizationVerdict {
    pub fn passed(self) -> bool {
        self != FactorizationVerdict::Fail
    }
    pub fn label(self) -> &'static str {
        match self {
            FactorizationVerdict::Exact => "exact",
            FactorizationVerdict::WithUnitFactor { plus: true } => "with_unit_factor(1+t)",
            FactorizationVerdict::WithUnitFactor { plus: false } => "with_unit_factor(1-t)",
            FactorizationVerdict::Fail => "fail",
        }
    }
}

impl Serialize for FactorizationVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Compare `lhs` with `rhs` up to units; in rank one also allow `lhs (1 ± t)`.
pub fn compare_factorization(
    lhs: &GroupRingElement,
    rhs: &GroupRingElement,
) -> FactorizationVerdict {
    if equal_up_to_unit(lhs, rhs) {
        return FactorizationVerdict::Exact;
    }
    if lhs.nvars() == 1 {
        let one = GroupRingElement::one(1);
        let t = GroupRingElement::monomial(vec![1], 1);
        for plus in [true, false] {
            let f = if plus { &one + &t } else { &one - &t };
            if equal_up_to_unit(&(lhs * &f), rhs) {
                return FactorizationVerdict::WithUnitFactor { plus };
            }
        }
    }
    FactorizationVerdict::Fail
}

/// `prod (1 + sign * [g])` over the given classes.
pub fn loop_product(nvars: usize, factors: &[(Vec<i64>, i64)]) -> GroupRingElement {
    factors
        .iter()
        .fold(GroupRingElement::one(nvars), |acc, (g, sign)| {
            let f = &GroupRingElement::one(nvars) + &GroupRingElement::monomial(g.clone(), *sign);
            &acc * &f
        })
}

/// Free classes of the branch loops, in decomposition order.
pub fn branch_loop_classes(vbs: &Vbs, c: &Cocycle) -> Vec<Vec<i64>> {
    decompose_branch_loops(vbs)
        .loops
        .iter()
        .map(|l| c.sum(&l.edges))
        .collect()
}

/// Free classes and orientation flags of the anti-branch loops.
pub fn anti_branch_loop_classes(vbs: &Vbs, c: &Cocycle) -> Vec<(Vec<i64>, bool)> {
    decompose_anti_branch_loops(vbs)
        .loops
        .iter()
        .map(|l| (c.sum(&l.edges), l.orientation_preserving == Some(true)))
        .collect()
}

/// `A = Θ prod (1 - [b_i])` over branch loops.
pub fn check_factorization_a_with(
    a: &GroupRingElement,
    theta: &GroupRingElement,
    branch_classes: &[Vec<i64>],
) -> FactorizationVerdict {
    let factors: Vec<(Vec<i64>, i64)> = branch_classes.iter().map(|g| (g.clone(), -1)).collect();
    let rhs = theta * &loop_product(theta.nvars(), &factors);
    compare_factorization(a, &rhs)
}

/// `V = Θ prod_{even} (1 - [a_i]) prod_{odd} (1 + [a_i])` over anti-branch loops.
pub fn check_factorization_v_with(
    v: &GroupRingElement,
    theta: &GroupRingElement,
    anti_classes: &[(Vec<i64>, bool)],
) -> FactorizationVerdict {
    let factors: Vec<(Vec<i64>, i64)> = anti_classes
        .iter()
        .map(|(g, even)| (g.clone(), if *even { -1 } else { 1 }))
        .collect();
    let rhs = theta * &loop_product(theta.nvars(), &factors);
    compare_factorization(v, &rhs)
}

pub fn check_factorization_a(
    vbs: &Vbs,
    c: &Cocycle,
    budget: GcdBudget,
) -> Result<FactorizationVerdict, PolyError> {
    let a = antiveering_polynomial(vbs, c)?;
    let theta = taut_polynomial(vbs, c, budget)?;
    Ok(check_factorization_a_with(
        &a,
        &theta,
        &branch_loop_classes(vbs, c),
    ))
}

pub fn check_factorization_v(
    vbs: &Vbs,
    c: &Cocycle,
    budget: GcdBudget,
) -> Result<FactorizationVerdict, PolyError> {
    let v = veering_polynomial(vbs, c)?;
    let theta = taut_polynomial(vbs, c, budget)?;
    Ok(check_factorization_v_with(
        &v,
        &theta,
        &anti_branch_loop_classes(vbs, c),
    ))
}

/// Cocycle evaluated through a homology class lift, as used by reports: the
/// class in `G` of a closed edge path.
pub fn cycle_class(hm: &HomologyModel, path: &[usize]) -> Vec<i64> {
    hm.class_of_cycle(&path_vector(hm.num_edges(), path))
        .expect("closed path")
        .free
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{build_homology, sector_boundary};
    use crate::vbs::validate;

    fn f8() -> Vbs {
        validate(&serde_json::from_str(include_str!("../../../fixtures/f8.json")).unwrap()).unwrap()
    }

    #[test]
    fn face_difference_fails_on_turning_pairs() {
        let v = validate(&serde_json::from_str(include_str!("../../../fixtures/c2.json")).unwrap())
            .unwrap();
        let c = build_cocycle(&build_homology(&v));
        assert!(facereldiff_audit(&v, &c).passed());
        let face = face_matrix(&v, &c);
        let anti = antitetrahedron_matrix(&v, &c);
        let failures = (0..v.n())
            .flat_map(|x| v.incoming(x).map(|eb| (x, eb)))
            .filter(|&(x, eb)| {
                let et = v.turning_successor(eb);
                let col = anti.column(x);
                (0..v.n()).any(|s| {
                    face.entries[s][eb].shift(c.value(eb)) - face.entries[s][et].clone() != col[s]
                })
            })
            .count();
        assert!(failures > 0);
    }

    #[test]
    fn cocycle_matches_classes() {
        let v = f8();
        let hm = build_homology(&v);
        let c = build_cocycle(&hm);
        for e in 0..v.num_edges() {
            if hm.is_tree_edge(e) {
                assert!(c.value(e).iter().all(|&x| x == 0));
            }
        }
        for l in decompose_branch_loops(&v).loops {
            assert_eq!(c.sum(&l.edges), cycle_class(&hm, &l.edges));
        }
        for s in 0..v.n() {
            let b = sector_boundary(&v, s);
            let total: Vec<i64> = (0..c.rank())
                .map(|i| (0..v.num_edges()).map(|e| b[e] * c.value(e)[i]).sum())
                .collect();
            assert!(total.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn column_patterns() {
        let v = f8();
        let c = build_cocycle(&build_homology(&v));
        let f = face_matrix(&v, &c);
        for col in 0..f.cols {
            let entries: Vec<GroupRingElement> = f.column(col);
            let total_terms: usize = entries.iter().map(|x| x.len()).sum();
            let coeff_sum: i64 = entries
                .iter()
                .map(|x| i64::try_from(x.eval_at_one()).unwrap())
                .sum();
            assert!(total_terms <= 3);
            assert_eq!(coeff_sum, 1);
        }
        let a = antitetrahedron_matrix(&v, &c);
        for col in 0..v.n() {
            assert_eq!(
                a.column(col)
                    .iter()
                    .map(|x| x.eval_at_one())
                    .sum::<num_bigint::BigInt>(),
                0.into()
            );
        }
    }

    #[test]
    fn facereldiff_standard_passes_and_transposed_fails() {
        let v = f8();
        let c = build_cocycle(&build_homology(&v));
        assert!(facereldiff_audit(&v, &c).passed());
        let bad = face_matrix_with_rule(&v, &c, MawRule::Transposed);
        assert!(!facereldiff_audit_with(&v, &c, &bad).passed());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(10, 5).len(), 252);
    }
}
