//! First homology of the ambient manifold as the cycle space of the dual graph
//! modulo sector boundaries, computed by Smith normal form.
//!
//! A 1-cycle is determined by its values on the edges outside a spanning tree,
//! so the cycle space is `Z^m` in those coordinates. The sector boundaries span
//! a sublattice; Smith normal form of that relation matrix splits the quotient
//! into a free part and cyclic torsion factors.

use serde::Serialize;

use crate::linalg::{mat_vec, smith_normal_form, IntMatrix, Smith};
use crate::vbs::Vbs;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("vector has length {found}, expected one entry per edge ({expected})")]
    WrongLength { expected: usize, found: usize },
    #[error("not a cycle: net flow {flow} at triple point {vertex}")]
    NotACycle { vertex: usize, flow: i64 },
}

/// A homology class: coordinates in `Z^b` and residues modulo each torsion invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HomologyClass {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug)]
pub struct HomologyModel {
    num_edges: usize,
    n: usize,
    src: Vec<usize>,
    dst: Vec<usize>,
    /// Non-tree edges, in increasing id order; these index the cycle coordinates.
    nontree: Vec<usize>,
    /// Tree edges in the order they must be solved when completing a cycle,
    /// with the vertex at which each is solved.
    tree_order: Vec<(usize, usize)>,
    snf: Smith,
    free_rank: usize,
    torsion_invariants: Vec<i64>,
    /// Rows of `U` giving torsion coordinates, paired with their modulus.
    torsion_rows: Vec<(usize, i64)>,
    /// Rows of `U` giving free coordinates.
    free_rows: Vec<usize>,
}

impl HomologyModel {
    pub fn free_rank(&self) -> usize {
        self.free_rank
    }
    pub fn torsion_invariants(&self) -> &[i64] {
        &self.torsion_invariants
    }
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }
    /// Whether `e` belongs to the spanning tree.
    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.nontree.binary_search(&e).is_err()
    }

    /// Net flow `in - out` at every vertex.
    fn flows(&self, x: &[i64]) -> Vec<i64> {
        let mut f = vec![0i64; self.n];
        for e in 0..self.num_edges {
            f[self.dst[e]] += x[e];
            f[self.src[e]] -= x[e];
        }
        f
    }

    pub fn check_cycle(&self, x: &[i64]) -> Result<(), HomologyError> {
        if x.len() != self.num_edges {
            return Err(HomologyError::WrongLength {
                expected: self.num_edges,
                found: x.len(),
            });
        }
        match self.flows(x).into_iter().enumerate().find(|&(_, f)| f != 0) {
            Some((vertex, flow)) => Err(HomologyError::NotACycle { vertex, flow }),
            None => Ok(()),
        }
    }

    /// Coordinates of a cycle after the transform `U`, undone of nothing else.
    fn transformed(&self, x: &[i64]) -> Vec<i64> {
        let w: Vec<i64> = self.nontree.iter().map(|&e| x[e]).collect();
        mat_vec(&self.snf.u, &w)
    }

    /// Free coordinates of a vector that is not necessarily a cycle: this is the
    /// value of the cocycle dual to the free basis, with tree edges valued 0.
    pub fn free_part_unchecked(&self, x: &[i64]) -> Vec<i64> {
        let u = self.transformed(x);
        self.free_rows.iter().map(|&r| u[r]).collect()
    }

    /// Class of a 1-cycle given as an edge-indexed vector.
    pub fn class_of_cycle(&self, x: &[i64]) -> Result<HomologyClass, HomologyError> {
        self.check_cycle(x)?;
        let u = self.transformed(x);
        Ok(HomologyClass {
            free: self.free_rows.iter().map(|&r| u[r]).collect(),
            torsion: self
                .torsion_rows
                .iter()
                .map(|&(r, d)| u[r].rem_euclid(d))
                .collect(),
        })
    }

    /// A cycle whose class has the given free coordinates and zero torsion.
    pub fn lift(&self, free: &[i64]) -> Vec<i64> {
        assert_eq!(free.len(), self.free_rank);
        let m = self.nontree.len();
        let mut y = vec![0i64; m];
        for (&r, &g) in self.free_rows.iter().zip(free) {
            y[r] = g;
        }
        let w = mat_vec(&self.snf.u_inv, &y);
        let mut x = vec![0i64; self.num_edges];
        for (&e, &val) in self.nontree.iter().zip(&w) {
            x[e] = val;
        }
        self.complete_cycle(&mut x);
        x
    }

    /// Fill the tree-edge values so that `x` becomes a cycle.
    fn complete_cycle(&self, x: &mut [i64]) {
        for &(e, v) in &self.tree_order {
            x[e] = 0;
            let f = self.flows(x)[v];
            // Edge e is incident to v; choose its value to cancel the flow at v.
            if self.dst[e] == v {
                x[e] = -f;
            } else {
                x[e] = f;
            }
        }
    }

    /// The underlying relation matrix decomposition (exposed for audits).
    pub fn smith(&self) -> &Smith {
        &self.snf
    }
}

/// Boundary of a sector as an edge vector: `path_a - path_b`.
pub fn sector_boundary(vbs: &Vbs, s: usize) -> Vec<i64> {
    let mut x = vec![0i64; vbs.num_edges()];
    let sec = vbs.sector(s);
    for &e in &sec.paths[0] {
        x[e] += 1;
    }
    for &e in &sec.paths[1] {
        x[e] -= 1;
    }
    x
}

/// Indicator vector of a sequence of edges (with multiplicity).
pub fn path_vector(num_edges: usize, path: &[usize]) -> Vec<i64> {
    let mut x = vec![0i64; num_edges];
    for &e in path {
        x[e] += 1;
    }
    x
}

pub fn build_homology(vbs: &Vbs) -> HomologyModel {
    let n = vbs.n();
    let m_edges = vbs.num_edges();
    let src: Vec<usize> = (0..m_edges).map(|e| vbs.src(e)).collect();
    let dst: Vec<usize> = (0..m_edges).map(|e| vbs.dst(e)).collect();

    // Breadth-first spanning tree of the underlying undirected graph from vertex 0.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in 0..m_edges {
        adj[src[e]].push((e, dst[e]));
        adj[dst[e]].push((e, src[e]));
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mut parent_edge = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = vec![0usize];
    seen[0] = true;
    let mut head = 0;
    let mut tree = vec![false; m_edges];
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(e, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent_edge[w] = e;
                tree[e] = true;
                order.push(w);
            }
        }
    }
    // Solve tree edges leaf-first: the parent edge of w is fixed by the flow at w.
    let tree_order: Vec<(usize, usize)> = order
        .iter()
        .rev()
        .filter(|&&w| w != 0)
        .map(|&w| (parent_edge[w], w))
        .collect();
    let nontree: Vec<usize> = (0..m_edges).filter(|&e| !tree[e]).collect();

    // Relation matrix: column j is the boundary of sector j in non-tree coordinates.
    let mcoords = nontree.len();
    let rel: IntMatrix = nontree
        .iter()
        .map(|&e| (0..n).map(|s| sector_boundary(vbs, s)[e]).collect())
        .collect();
    let snf = smith_normal_form(&rel, mcoords, n);
    let mut torsion_invariants = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..snf.rank {
        if snf.diagonal[i] > 1 {
            torsion_invariants.push(snf.diagonal[i]);
            torsion_rows.push((i, snf.diagonal[i]));
        }
    }
    let free_rows: Vec<usize> = (snf.rank..mcoords).collect();
    HomologyModel {
        num_edges: m_edges,
        n,
        src,
        dst,
        nontree,
        tree_order,
        free_rank: free_rows.len(),
        snf,
        torsion_invariants,
        torsion_rows,
        free_rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbs::{decompose_branch_loops, validate};

    fn f8() -> Vbs {
        validate(&serde_json::from_str(include_str!("../../../fixtures/f8.json")).unwrap()).unwrap()
    }

    #[test]
    fn f8_has_betti_one() {
        let v = f8();
        let h = build_homology(&v);
        assert_eq!(h.free_rank(), 1);
        assert!(h.torsion_invariants().is_empty());
        for s in 0..v.n() {
            assert!(h.class_of_cycle(&sector_boundary(&v, s)).unwrap().is_zero());
        }
    }

    #[test]
    fn zero_is_identity_and_non_cycles_rejected() {
        let v = f8();
        let h = build_homology(&v);
        assert!(h.class_of_cycle(&[0, 0, 0, 0]).unwrap().is_zero());
        assert!(matches!(
            h.class_of_cycle(&[1, 0, 0, 0]),
            Err(HomologyError::NotACycle { .. })
        ));
    }

    #[test]
    fn lift_is_a_section() {
        let v = f8();
        let h = build_homology(&v);
        for g in -3..=3 {
            let c = h.lift(&[g]);
            assert_eq!(h.class_of_cycle(&c).unwrap().free, vec![g]);
        }
        // Branch loops generate a nonzero class.
        let loops = decompose_branch_loops(&v);
        let c = path_vector(v.num_edges(), &loops.loops[0].edges);
        assert_ne!(h.class_of_cycle(&c).unwrap().free, vec![0]);
    }
}
