//! Canonical relabeling of validated surfaces, for comparing surfaces that
//! differ only by the names of their triple points, edges and sectors.
//!
//! From every starting edge, edges are numbered in breadth-first order over
//! smooth and turning successors (the dual graph is strongly connected, so
//! every edge is reached). Triple points are numbered by the first edge leaving
//! them, and each sector is named after its bottom corner. The two sides of a
//! sector are listed in increasing order. The least labeling wins.

use std::collections::VecDeque;

use crate::vbs::{Color, RawEdge, RawSector, RawSmoothPairing, RawTriplePoint, RawVbs, Vbs};

fn labeling_from(vbs: &Vbs, start: usize) -> RawVbs {
    let m = vbs.num_edges();
    let n = vbs.n();
    let mut edge_new = vec![usize::MAX; m];
    let mut order = Vec::with_capacity(m);
    let mut queue = VecDeque::from([start]);
    edge_new[start] = 0;
    while let Some(e) = queue.pop_front() {
        order.push(e);
        for f in [vbs.smooth_successor(e), vbs.turning_successor(e)] {
            if edge_new[f] == usize::MAX {
                edge_new[f] = order.len() + queue.len();
                queue.push_back(f);
            }
        }
    }
    let mut vert_new = vec![usize::MAX; n];
    let mut next = 0;
    for &e in &order {
        let v = vbs.src(e);
        if vert_new[v] == usize::MAX {
            vert_new[v] = next;
            next += 1;
        }
    }
    let mut triple_points: Vec<RawTriplePoint> = (0..n)
        .map(|v| RawTriplePoint {
            id: vert_new[v],
            color: vbs.color(v),
        })
        .collect();
    triple_points.sort_by_key(|t| t.id);
    let mut edges: Vec<RawEdge> = (0..m)
        .map(|e| RawEdge {
            id: edge_new[e],
            src: vert_new[vbs.src(e)],
            dst: vert_new[vbs.dst(e)],
        })
        .collect();
    edges.sort_by_key(|e| e.id);
    let mut smooth_pairing: Vec<RawSmoothPairing> = (0..n)
        .map(|v| {
            let mut pairs: Vec<[usize; 2]> = vbs
                .incoming(v)
                .iter()
                .map(|&e| [edge_new[e], edge_new[vbs.smooth_successor(e)]])
                .collect();
            pairs.sort_unstable();
            RawSmoothPairing {
                vertex: vert_new[v],
                pairs,
            }
        })
        .collect();
    smooth_pairing.sort_by_key(|s| s.vertex);
    let mut sectors: Vec<RawSector> = vbs
        .sectors()
        .iter()
        .map(|s| {
            let mut paths: Vec<Vec<usize>> = s
                .paths
                .iter()
                .map(|p| p.iter().map(|&e| edge_new[e]).collect())
                .collect();
            paths.sort();
            let path_b = paths.pop().expect("two sides");
            let path_a = paths.pop().expect("two sides");
            RawSector {
                id: vert_new[s.bottom],
                path_a,
                path_b,
            }
        })
        .collect();
    sectors.sort_by_key(|s| s.id);
    RawVbs {
        name: None,
        triple_points,
        edges,
        smooth_pairing,
        sectors,
    }
}

fn key(raw: &RawVbs) -> Vec<usize> {
    let mut k = Vec::new();
    k.extend(
        raw.triple_points
            .iter()
            .map(|t| usize::from(t.color == Color::Blue)),
    );
    k.extend(raw.edges.iter().flat_map(|e| [e.src, e.dst]));
    k.extend(
        raw.smooth_pairing
            .iter()
            .flat_map(|s| s.pairs.iter().flatten().copied()),
    );
    for s in &raw.sectors {
        k.push(s.path_a.len());
        k.extend(&s.path_a);
        k.push(s.path_b.len());
        k.extend(&s.path_b);
    }
    k
}

/// Label-independent form of a surface (its name is dropped).
pub fn canonical_form(vbs: &Vbs) -> RawVbs {
    (0..vbs.num_edges())
        .map(|e| labeling_from(vbs, e))
        .min_by_key(key)
        .expect("a surface has edges")
}

/// True iff the surfaces agree up to relabeling.
pub fn isomorphic(a: &Vbs, b: &Vbs) -> bool {
    a.n() == b.n() && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbs::validate;

    #[test]
    fn canonical_form_is_a_valid_surface_and_a_fixed_point() {
        let raw: RawVbs = serde_json::from_str(include_str!("../../../fixtures/f8.json")).unwrap();
        let vbs = validate(&raw).unwrap();
        let c = canonical_form(&vbs);
        let again = validate(&c).unwrap();
        assert_eq!(canonical_form(&again), c);
        assert!(isomorphic(&vbs, &again));
    }
}
