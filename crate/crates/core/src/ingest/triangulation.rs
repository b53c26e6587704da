//! Taut veering ideal triangulations and their dual branched surfaces.
//!
//! Vertex, edge and face numbering inside a tetrahedron follows the usual
//! convention of triangulation software: face `f` is opposite vertex `f`,
//! edges are numbered `01, 02, 03, 12, 13, 23`, and a taut angle `p` puts the
//! π-angles on the opposite edges `p` and `5 - p`.

use serde::Serialize;

use crate::vbs::{Color, RawEdge, RawSector, RawSmoothPairing, RawTriplePoint, RawVbs};

/// A permutation of `{0, 1, 2, 3}` stored as its image array.
pub type Perm4 = [u8; 4];

pub const IDENTITY: Perm4 = [0, 1, 2, 3];

/// Vertex pairs of the six edges of a tetrahedron.
pub const EDGE_VERTICES: [[u8; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Split of the vertices by the π-pair: faces `split[0], split[1]` lie on one
/// side of the tetrahedron and `split[2], split[3]` on the other.
const VERTEX_SPLIT: [[u8; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

pub fn compose(p: Perm4, q: Perm4) -> Perm4 {
    [
        p[q[0] as usize],
        p[q[1] as usize],
        p[q[2] as usize],
        p[q[3] as usize],
    ]
}

pub fn inverse(p: Perm4) -> Perm4 {
    let mut r = [0u8; 4];
    for (i, &x) in p.iter().enumerate() {
        r[x as usize] = i as u8;
    }
    r
}

/// +1 for even permutations, -1 for odd.
pub fn perm_sign(p: Perm4) -> i8 {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn edge_number(a: u8, b: u8) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    EDGE_VERTICES
        .iter()
        .position(|&e| e == [a, b])
        .expect("distinct vertices")
}

/// Opposite-edge pair (0, 1 or 2) containing edge number `e`.
pub fn edge_pair(e: usize) -> u8 {
    (if e < 3 { e } else { 5 - e }) as u8
}

/// Where face `face` of a tetrahedron is glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub tet: usize,
    /// Vertex map from this tetrahedron to `tet`; face `f` lands on face `perm[f]`.
    pub perm: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TriangulationError {
    #[error("triangulation has no tetrahedra")]
    Empty,
    #[error("tetrahedron {tet} face {face}: gluing is not involutive")]
    NotInvolutive { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face} is glued to itself")]
    SelfGluedFace { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face}: gluing refers to a missing tetrahedron or is not a permutation")]
    BadGluing { tet: usize, face: usize },
    #[error("triangulation is not orientable")]
    NonOrientable,
    #[error("triangulation is not connected")]
    Disconnected,
    #[error("expected {expected} taut angles, found {found}")]
    AngleCount { expected: usize, found: usize },
    #[error("taut angle {angle} of tetrahedron {tet} is not 0, 1 or 2")]
    BadAngle { tet: usize, angle: u8 },
    #[error("edge class {edge} carries {count} π-angles instead of 2")]
    AngleSum { edge: usize, count: usize },
    #[error("{edges} edge classes for {tets} tetrahedra")]
    EdgeCount { edges: usize, tets: usize },
    #[error("angle structure is not transverse taut")]
    NotTransverse,
    #[error("edge class {edge} would be both red and blue")]
    NotVeering { edge: usize },
}

/// An oriented one-cusped-or-more ideal triangulation with a veering taut structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TautVeeringTriangulation {
    gluings: Vec<[Gluing; 4]>,
    taut_angles: Vec<u8>,
    edge_colors: Vec<Color>,
    /// Edge class of each `(tet, edge number)`.
    edge_class: Vec<[usize; 6]>,
    /// Face class of each `(tet, face)`.
    face_class: Vec<[usize; 4]>,
    /// Orientation of each tetrahedron relative to tetrahedron 0.
    orientation: Vec<i8>,
    /// +1 when the coorientation points out of the tetrahedron through the face.
    coorientation: Vec<[i8; 4]>,
}

fn classes(count: usize, links: impl Iterator<Item = (usize, usize)>) -> (Vec<usize>, usize) {
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for (a, b) in links {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = vec![usize::MAX; count];
    let mut next = 0;
    let mut out = vec![0; count];
    for x in 0..count {
        let r = find(&mut parent, x);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[x] = label[r];
    }
    (out, next)
}

impl TautVeeringTriangulation {
    /// Check every invariant and derive edge colors.
    pub fn new(
        gluings: Vec<[Gluing; 4]>,
        taut_angles: Vec<u8>,
    ) -> Result<Self, TriangulationError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriangulationError::Empty);
        }
        for (t, g) in gluings.iter().enumerate() {
            for f in 0..4 {
                let Gluing { tet, perm } = g[f];
                let mut sorted = perm;
                sorted.sort_unstable();
                if tet >= n || sorted != IDENTITY {
                    return Err(TriangulationError::BadGluing { tet: t, face: f });
                }
                let back = gluings[tet][perm[f] as usize];
                if back.tet != t || back.perm != inverse(perm) {
                    return Err(TriangulationError::NotInvolutive { tet: t, face: f });
                }
                if tet == t && perm[f] as usize == f {
                    return Err(TriangulationError::SelfGluedFace { tet: t, face: f });
                }
            }
        }
        if taut_angles.len() != n {
            return Err(TriangulationError::AngleCount {
                expected: n,
                found: taut_angles.len(),
            });
        }
        if let Some((t, &a)) = taut_angles.iter().enumerate().find(|(_, &a)| a > 2) {
            return Err(TriangulationError::BadAngle { tet: t, angle: a });
        }

        // Orientation by propagation from tetrahedron 0.
        let mut orientation = vec![0i8; n];
        orientation[0] = 1;
        let mut stack = vec![0usize];
        while let Some(t) = stack.pop() {
            for g in &gluings[t] {
                let o = -perm_sign(g.perm) * orientation[t];
                if orientation[g.tet] == 0 {
                    orientation[g.tet] = o;
                    stack.push(g.tet);
                } else if orientation[g.tet] != o {
                    return Err(TriangulationError::NonOrientable);
                }
            }
        }
        if orientation.contains(&0) {
            return Err(TriangulationError::Disconnected);
        }

        let (edge_flat, num_edges) = classes(
            6 * n,
            gluings.iter().enumerate().flat_map(|(t, g)| {
                (0..4).flat_map(move |f| {
                    (0..6)
                        .filter(move |&e| !EDGE_VERTICES[e].contains(&(f as u8)))
                        .map(move |e| {
                            let [a, b] = EDGE_VERTICES[e];
                            let p = g[f].perm;
                            (
                                6 * t + e,
                                6 * g[f].tet + edge_number(p[a as usize], p[b as usize]),
                            )
                        })
                })
            }),
        );
        let (face_flat, _) = classes(
            4 * n,
            gluings.iter().enumerate().flat_map(|(t, g)| {
                (0..4).map(move |f| (4 * t + f, 4 * g[f].tet + g[f].perm[f] as usize))
            }),
        );
        if num_edges != n {
            return Err(TriangulationError::EdgeCount {
                edges: num_edges,
                tets: n,
            });
        }
        let edge_class: Vec<[usize; 6]> = (0..n)
            .map(|t| std::array::from_fn(|e| edge_flat[6 * t + e]))
            .collect();
        let face_class: Vec<[usize; 4]> = (0..n)
            .map(|t| std::array::from_fn(|f| face_flat[4 * t + f]))
            .collect();

        let mut pi_count = vec![0usize; num_edges];
        for (t, &p) in taut_angles.iter().enumerate() {
            pi_count[edge_class[t][p as usize]] += 1;
            pi_count[edge_class[t][5 - p as usize]] += 1;
        }
        if let Some((e, &c)) = pi_count.iter().enumerate().find(|(_, &c)| c != 2) {
            return Err(TriangulationError::AngleSum { edge: e, count: c });
        }

        // Transverse coorientation by propagation from tetrahedron 0.
        let mut coorientation = vec![[0i8; 4]; n];
        let set_tet = |co: &mut [i8; 4], p: u8, face: usize, dir: i8| {
            let split = VERTEX_SPLIT[p as usize];
            let same = split[..2].contains(&(face as u8));
            let d = if same { dir } else { -dir };
            co[split[0] as usize] = d;
            co[split[1] as usize] = d;
            co[split[2] as usize] = -d;
            co[split[3] as usize] = -d;
        };
        set_tet(
            &mut coorientation[0],
            taut_angles[0],
            VERTEX_SPLIT[taut_angles[0] as usize][0] as usize,
            1,
        );
        let mut done = vec![false; n];
        done[0] = true;
        let mut stack = vec![0usize];
        while let Some(t) = stack.pop() {
            for f in 0..4 {
                let g = gluings[t][f];
                if !done[g.tet] {
                    let face = g.perm[f] as usize;
                    let dir = -coorientation[t][f];
                    set_tet(&mut coorientation[g.tet], taut_angles[g.tet], face, dir);
                    done[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        for t in 0..n {
            for f in 0..4 {
                let g = gluings[t][f];
                if coorientation[t][f] != -coorientation[g.tet][g.perm[f] as usize] {
                    return Err(TriangulationError::NotTransverse);
                }
            }
        }

        // Veering colors: with the orientation fixed, the pair after the π-pair is blue.
        let mut colors: Vec<Option<Color>> = vec![None; num_edges];
        for t in 0..n {
            let p = taut_angles[t] as usize;
            let (blue, red) = if orientation[t] > 0 {
                ((p + 1) % 3, (p + 2) % 3)
            } else {
                ((p + 2) % 3, (p + 1) % 3)
            };
            for (pair, c) in [(blue, Color::Blue), (red, Color::Red)] {
                for e in [pair, 5 - pair] {
                    let class = edge_class[t][e];
                    match colors[class] {
                        Some(old) if old != c => {
                            return Err(TriangulationError::NotVeering { edge: class })
                        }
                        _ => colors[class] = Some(c),
                    }
                }
            }
        }
        let edge_colors = colors
            .into_iter()
            .enumerate()
            .map(|(e, c)| c.ok_or(TriangulationError::NotVeering { edge: e }))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(TautVeeringTriangulation {
            gluings,
            taut_angles,
            edge_colors,
            edge_class,
            face_class,
            orientation,
            coorientation,
        })
    }

    pub fn n(&self) -> usize {
        self.gluings.len()
    }
    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }
    pub fn taut_angles(&self) -> &[u8] {
        &self.taut_angles
    }
    pub fn edge_colors(&self) -> &[Color] {
        &self.edge_colors
    }
    pub fn edge_class(&self, tet: usize, edge: usize) -> usize {
        self.edge_class[tet][edge]
    }
    pub fn face_class(&self, tet: usize, face: usize) -> usize {
        self.face_class[tet][face]
    }
    pub fn orientation(&self, tet: usize) -> i8 {
        self.orientation[tet]
    }
    pub fn coorientation(&self, tet: usize, face: usize) -> i8 {
        self.coorientation[tet][face]
    }
    pub fn num_faces(&self) -> usize {
        2 * self.n()
    }

    /// Embeddings `(tet, vertex perm)` around edge class `class`, walking in
    /// the direction fixed by the orientation. In each embedding the edge runs
    /// from `vp[0]` to `vp[1]`, and the next tetrahedron lies through face `vp[2]`.
    pub fn edge_embeddings(&self, class: usize) -> Vec<(usize, Perm4)> {
        let (t0, e0) = (0..self.n())
            .flat_map(|t| (0..6).map(move |e| (t, e)))
            .find(|&(t, e)| self.edge_class[t][e] == class)
            .expect("edge class exists");
        let [a, b] = EDGE_VERTICES[e0];
        let rest: Vec<u8> = (0..4).filter(|&x| x != a && x != b).collect();
        let mut vp = [a, b, rest[0], rest[1]];
        if perm_sign(vp) != self.orientation[t0] {
            vp.swap(2, 3);
        }
        let start = (t0, vp);
        let mut out = vec![start];
        loop {
            let (t, vp) = *out.last().unwrap();
            let g = self.gluings[t][vp[2] as usize];
            let p = g.perm;
            let next = (
                g.tet,
                [
                    p[vp[0] as usize],
                    p[vp[1] as usize],
                    p[vp[3] as usize],
                    p[vp[2] as usize],
                ],
            );
            if next == start {
                return out;
            }
            out.push(next);
        }
    }
}

/// Errors building the dual surface.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("not a veering input: {0}")]
    NonVeeringInput(String),
}

/// The dual branched surface: one triple point per tetrahedron, one edge per
/// face (directed along the coorientation), one sector per edge class.
pub fn vbs_from_triangulation(tri: &TautVeeringTriangulation) -> Result<RawVbs, DualError> {
    let n = tri.n();
    let bad = |m: String| DualError::NonVeeringInput(m);
    let mut edges: Vec<Option<(usize, usize)>> = vec![None; tri.num_faces()];
    for t in 0..n {
        for f in 0..4 {
            let g = tri.gluings()[t][f];
            let pair = if tri.coorientation(t, f) == 1 {
                (t, g.tet)
            } else {
                (g.tet, t)
            };
            edges[tri.face_class(t, f)] = Some(pair);
        }
    }
    let edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|e| e.expect("every face class has a face"))
        .collect();

    // A triple point takes the color of the diagonal on its lower faces.
    let triple_points = (0..n)
        .map(|t| {
            let out: Vec<u8> = (0..4u8)
                .filter(|&v| tri.coorientation(t, v as usize) == 1)
                .collect();
            RawTriplePoint {
                id: t,
                color: tri.edge_colors()[tri.edge_class(t, edge_number(out[0], out[1]))],
            }
        })
        .collect();

    let mut sectors = Vec::with_capacity(n);
    for class in 0..n {
        let embs = tri.edge_embeddings(class);
        let d = embs.len();
        let is_pi = |&(t, vp): &(usize, Perm4)| {
            edge_pair(edge_number(vp[0], vp[1])) == tri.taut_angles()[t]
        };
        let pis: Vec<usize> = (0..d).filter(|&i| is_pi(&embs[i])).collect();
        if pis.len() != 2 {
            return Err(bad(format!(
                "edge class {class} has {} π-angles",
                pis.len()
            )));
        }
        let lower: Vec<usize> = pis
            .iter()
            .copied()
            .filter(|&i| {
                let (t, vp) = embs[i];
                tri.coorientation(t, vp[2] as usize) == 1
                    && tri.coorientation(t, vp[3] as usize) == 1
            })
            .collect();
        if lower.len() != 1 {
            return Err(bad(format!(
                "edge class {class} has no unique bottom tetrahedron"
            )));
        }
        let bc = lower[0];
        let tc = if pis[0] == bc { pis[1] } else { pis[0] };
        let between: Vec<usize> = embs
            .iter()
            .map(|&(t, vp)| tri.face_class(t, vp[2] as usize))
            .collect();
        let mut path_a = Vec::new();
        let mut i = bc;
        while i != tc {
            path_a.push(between[i]);
            i = (i + 1) % d;
        }
        let mut path_b = Vec::new();
        let mut i = bc;
        while i != tc {
            i = (i + d - 1) % d;
            path_b.push(between[i]);
        }
        for p in [&path_a, &path_b] {
            if p.len() < 2 {
                return Err(bad(format!(
                    "edge class {class} gives a sector side of length {}",
                    p.len()
                )));
            }
        }
        sectors.push(RawSector {
            id: class,
            path_a,
            path_b,
        });
    }

    let mut smooth: Vec<Vec<[usize; 2]>> = vec![Vec::new(); n];
    for s in &sectors {
        for p in [&s.path_a, &s.path_b] {
            for w in p[1..].windows(2) {
                smooth[edges[w[0]].1].push([w[0], w[1]]);
            }
        }
    }
    Ok(RawVbs {
        name: None,
        triple_points,
        edges: edges
            .iter()
            .enumerate()
            .map(|(id, &(src, dst))| RawEdge { id, src, dst })
            .collect(),
        smooth_pairing: smooth
            .into_iter()
            .enumerate()
            .map(|(vertex, mut pairs)| {
                pairs.sort_unstable();
                RawSmoothPairing { vertex, pairs }
            })
            .collect(),
        sectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_helpers() {
        let p = [1, 2, 0, 3];
        assert_eq!(compose(p, inverse(p)), IDENTITY);
        assert_eq!(perm_sign(p), 1);
        assert_eq!(perm_sign([1, 0, 2, 3]), -1);
        assert_eq!(edge_number(3, 1), 4);
        assert_eq!(edge_pair(4), 1);
    }

    #[test]
    fn rejects_non_involutive_gluing() {
        let g = Gluing {
            tet: 0,
            perm: [1, 0, 2, 3],
        };
        let bad = vec![[
            g,
            g,
            Gluing {
                tet: 0,
                perm: IDENTITY,
            },
            g,
        ]];
        assert!(TautVeeringTriangulation::new(bad, vec![0]).is_err());
    }
}
