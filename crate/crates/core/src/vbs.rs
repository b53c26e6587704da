//! Veering branched surface data model, validation and loop decompositions.
//!
//! A surface is given by its triple points (colored), the directed edges of its
//! branch locus, a smooth pairing at every triple point and its sectors, each
//! described by its two boundary paths from the bottom corner to the top corner.
//! [`validate`] checks the combinatorial axioms and renumbers the triple points
//! so that triple point `i` is the bottom corner of sector `i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Local handedness of a triple point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    /// The other color.
    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// Which of the four corners of a sector is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerRole {
    Bottom,
    Top,
    SideA,
    SideB,
}

impl CornerRole {
    pub const ALL: [CornerRole; 4] = [
        CornerRole::Bottom,
        CornerRole::Top,
        CornerRole::SideA,
        CornerRole::SideB,
    ];

    /// Dense index in `0..4`, in the order of [`CornerRole::ALL`].
    pub fn index(self) -> usize {
        match self {
            CornerRole::Bottom => 0,
            CornerRole::Top => 1,
            CornerRole::SideA => 2,
            CornerRole::SideB => 3,
        }
    }

    pub fn from_index(i: usize) -> CornerRole {
        CornerRole::ALL[i]
    }

    /// The side role attached to path `k` (0 for `path_a`, 1 for `path_b`).
    pub fn side(k: usize) -> CornerRole {
        if k == 0 {
            CornerRole::SideA
        } else {
            CornerRole::SideB
        }
    }

    pub fn is_side(self) -> bool {
        matches!(self, CornerRole::SideA | CornerRole::SideB)
    }
}

impl fmt::Display for CornerRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CornerRole::Bottom => "bottom",
            CornerRole::Top => "top",
            CornerRole::SideA => "side_a",
            CornerRole::SideB => "side_b",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTriplePoint {
    pub id: usize,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEdge {
    pub id: usize,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSmoothPairing {
    pub vertex: usize,
    /// `[incoming edge, outgoing edge]` pairs; a valid entry has exactly two.
    pub pairs: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSector {
    pub id: usize,
    pub path_a: Vec<usize>,
    pub path_b: Vec<usize>,
}

/// Unvalidated surface data, exactly as it appears in the canonical JSON format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawVbs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub triple_points: Vec<RawTriplePoint>,
    pub edges: Vec<RawEdge>,
    pub smooth_pairing: Vec<RawSmoothPairing>,
    pub sectors: Vec<RawSector>,
}

/// Kinds of identified objects, used in violation messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    TriplePoint,
    Edge,
    Sector,
    SmoothPairing,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::TriplePoint => "triple point",
            EntityKind::Edge => "edge",
            EntityKind::Sector => "sector",
            EntityKind::SmoothPairing => "smooth pairing entry",
        })
    }
}

/// One violated axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("{entity} ids are not the dense range 0..{len}")]
    NonDenseIds { entity: EntityKind, len: usize },
    #[error("{entity} {id} refers to missing {target} {target_id}")]
    DanglingId {
        entity: EntityKind,
        id: usize,
        target: EntityKind,
        target_id: usize,
    },
    #[error("expected {expected} {entity}s, found {found}")]
    CountMismatch {
        entity: EntityKind,
        expected: usize,
        found: usize,
    },
    #[error("triple point {vertex} has {incoming} incoming and {outgoing} outgoing edges, expected 2 and 2")]
    ValenceViolation {
        vertex: usize,
        incoming: usize,
        outgoing: usize,
    },
    #[error("smooth pairing at triple point {vertex}: {reason}")]
    SmoothPairingViolation { vertex: usize, reason: String },
    #[error("sector {sector}: {reason}")]
    PathViolation { sector: usize, reason: String },
    #[error("sector {sector} is not a diamond: the top side of path {path} is empty")]
    DiamondViolation { sector: usize, path: char },
    #[error("edge {edge} is a bottom side {bottom_sides} times and a top side {top_sides} times, expected 1 and 2")]
    EdgeIncidenceViolation {
        edge: usize,
        bottom_sides: usize,
        top_sides: usize,
    },
    #[error("triple point {vertex} is a top corner {top} times, a bottom corner {bottom} times and a side corner {side} times, expected 1, 1 and 2")]
    CornerCensusViolation {
        vertex: usize,
        top: usize,
        bottom: usize,
        side: usize,
    },
    #[error("triple point {vertex}: {reason}")]
    SmoothTurnViolation { vertex: usize, reason: String },
    #[error("branch loop {edges:?} only meets {color} triple points")]
    MonochromeBranchLoop { edges: Vec<usize>, color: Color },
    #[error("edge {edge}: colors of its endpoints contradict the sector that turns onto it")]
    ColorRuleViolation { edge: usize },
}

/// Validation failure carrying every violated invariant that was detected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} invariant violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

/// Derived data of one sector of a validated surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    /// `paths[0]` is `path_a`, `paths[1]` is `path_b`.
    pub paths: [Vec<usize>; 2],
    pub bottom: usize,
    pub top: usize,
    /// Side corner on each path: the vertex after that path's first edge.
    pub sides: [usize; 2],
}

impl Sector {
    /// Number of top-side edges on path `k`.
    pub fn delta(&self, k: usize) -> usize {
        self.paths[k].len() - 1
    }

    /// The triple point sitting at the given corner.
    pub fn corner(&self, role: CornerRole) -> usize {
        match role {
            CornerRole::Bottom => self.bottom,
            CornerRole::Top => self.top,
            CornerRole::SideA => self.sides[0],
            CornerRole::SideB => self.sides[1],
        }
    }
}

/// A validated veering branched surface in canonical numbering.
///
/// Edge and sector ids are those of the input. Triple points are renumbered so
/// that triple point `i` is the bottom corner of sector `i`; the original id of
/// each triple point is kept in [`Vbs::original_vertex`].
#[derive(Clone, Debug)]
pub struct Vbs {
    name: Option<String>,
    colors: Vec<Color>,
    src: Vec<usize>,
    dst: Vec<usize>,
    incoming: Vec<[usize; 2]>,
    outgoing: Vec<[usize; 2]>,
    smooth_next: Vec<usize>,
    turn_next: Vec<usize>,
    sectors: Vec<Sector>,
    /// For each edge, the sector having it as bottom side and the path index.
    bottom_side_of: Vec<(usize, usize)>,
    top_sector_at: Vec<usize>,
    original_vertex: Vec<usize>,
}

impl Vbs {
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }
    /// Number of triple points (equal to the number of sectors).
    pub fn n(&self) -> usize {
        self.colors.len()
    }
    pub fn num_edges(&self) -> usize {
        self.src.len()
    }
    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }
    pub fn src(&self, e: usize) -> usize {
        self.src[e]
    }
    pub fn dst(&self, e: usize) -> usize {
        self.dst[e]
    }
    /// Incoming edges at `v`, sorted by id.
    pub fn incoming(&self, v: usize) -> [usize; 2] {
        self.incoming[v]
    }
    /// Outgoing edges at `v`, sorted by id.
    pub fn outgoing(&self, v: usize) -> [usize; 2] {
        self.outgoing[v]
    }
    /// The outgoing edge that continues `e` smoothly at `dst(e)`.
    pub fn smooth_successor(&self, e: usize) -> usize {
        self.smooth_next[e]
    }
    /// The outgoing edge that `e` turns onto at `dst(e)`.
    pub fn turning_successor(&self, e: usize) -> usize {
        self.turn_next[e]
    }
    pub fn sector(&self, s: usize) -> &Sector {
        &self.sectors[s]
    }
    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }
    /// The sector with `e` as a bottom side, with the index of that path.
    pub fn bottom_side_of(&self, e: usize) -> (usize, usize) {
        self.bottom_side_of[e]
    }
    /// The sector whose top corner is `v`.
    pub fn sector_with_top(&self, v: usize) -> usize {
        self.top_sector_at[v]
    }
    /// The sector whose bottom corner is `v` (equal to `v` in canonical numbering).
    pub fn sector_with_bottom(&self, v: usize) -> usize {
        v
    }
    /// Original id of canonical triple point `v`.
    pub fn original_vertex(&self, v: usize) -> usize {
        self.original_vertex[v]
    }

    /// Vertex of `sector` at `role`.
    pub fn corner(&self, sector: usize, role: CornerRole) -> usize {
        self.sectors[sector].corner(role)
    }

    /// Export in the raw format, using the canonical triple point numbering.
    pub fn to_raw(&self) -> RawVbs {
        RawVbs {
            name: self.name.clone(),
            triple_points: self
                .colors
                .iter()
                .enumerate()
                .map(|(id, &color)| RawTriplePoint { id, color })
                .collect(),
            edges: (0..self.num_edges())
                .map(|id| RawEdge {
                    id,
                    src: self.src[id],
                    dst: self.dst[id],
                })
                .collect(),
            smooth_pairing: (0..self.n())
                .map(|v| RawSmoothPairing {
                    vertex: v,
                    pairs: self.incoming[v]
                        .iter()
                        .map(|&e| [e, self.smooth_next[e]])
                        .collect(),
                })
                .collect(),
            sectors: self
                .sectors
                .iter()
                .enumerate()
                .map(|(id, s)| RawSector {
                    id,
                    path_a: s.paths[0].clone(),
                    path_b: s.paths[1].clone(),
                })
                .collect(),
        }
    }

    /// Copy of this surface with the colors replaced (validation is skipped;
    /// intended for mutation tests of downstream auditors).
    #[doc(hidden)]
    pub fn with_colors_unchecked(&self, colors: Vec<Color>) -> Vbs {
        assert_eq!(colors.len(), self.n());
        Vbs {
            colors,
            ..self.clone()
        }
    }
}

/// Which of the two edge partitions a [`LoopDecomposition`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    Branch,
    AntiBranch,
}

/// One loop of a decomposition, as a cyclic sequence of edge ids starting at its
/// lowest edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Loop {
    pub edges: Vec<usize>,
    /// Set for anti-branch loops only: true iff the loop has even length.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation_preserving: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopDecomposition {
    pub kind: LoopKind,
    pub loops: Vec<Loop>,
}

fn follow_loops(num_edges: usize, next: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; num_edges];
    let mut loops = Vec::new();
    for start in 0..num_edges {
        if seen[start] {
            continue;
        }
        let mut lp = Vec::new();
        let mut e = start;
        while !seen[e] {
            seen[e] = true;
            lp.push(e);
            e = next[e];
        }
        loops.push(lp);
    }
    loops
}

/// Partition of the edges by smooth continuation.
pub fn decompose_branch_loops(vbs: &Vbs) -> LoopDecomposition {
    LoopDecomposition {
        kind: LoopKind::Branch,
        loops: follow_loops(vbs.num_edges(), &vbs.smooth_next)
            .into_iter()
            .map(|edges| Loop {
                edges,
                orientation_preserving: None,
            })
            .collect(),
    }
}

/// Partition of the edges by turning continuation.
pub fn decompose_anti_branch_loops(vbs: &Vbs) -> LoopDecomposition {
    LoopDecomposition {
        kind: LoopKind::AntiBranch,
        loops: follow_loops(vbs.num_edges(), &vbs.turn_next)
            .into_iter()
            .map(|edges| {
                let even = edges.len() % 2 == 0;
                Loop {
                    edges,
                    orientation_preserving: Some(even),
                }
            })
            .collect(),
    }
}

fn check_dense<T>(
    items: &[T],
    id: impl Fn(&T) -> usize,
    entity: EntityKind,
    out: &mut Vec<Violation>,
) {
    let mut seen = vec![false; items.len()];
    let mut ok = true;
    for it in items {
        let i = id(it);
        if i >= items.len() || seen[i] {
            ok = false;
        } else {
            seen[i] = true;
        }
    }
    if !ok {
        out.push(Violation::NonDenseIds {
            entity,
            len: items.len(),
        });
    }
}

fn fail(violations: Vec<Violation>) -> Result<Vbs, ValidationError> {
    Err(ValidationError { violations })
}

/// Check every combinatorial axiom and return the surface in canonical numbering.
///
/// Checks run in stages; a stage is only attempted when the data it relies on
/// passed the earlier stages, and every violation found so far is reported.
pub fn validate(raw: &RawVbs) -> Result<Vbs, ValidationError> {
    let mut out = Vec::new();

    // Stage 1: ids, counts and references.
    check_dense(
        &raw.triple_points,
        |t| t.id,
        EntityKind::TriplePoint,
        &mut out,
    );
    check_dense(&raw.edges, |e| e.id, EntityKind::Edge, &mut out);
    check_dense(&raw.sectors, |s| s.id, EntityKind::Sector, &mut out);
    if !out.is_empty() {
        return fail(out);
    }
    let n = raw.triple_points.len();
    if n == 0 {
        out.push(Violation::CountMismatch {
            entity: EntityKind::TriplePoint,
            expected: 1,
            found: 0,
        });
    }
    if raw.edges.len() != 2 * n {
        out.push(Violation::CountMismatch {
            entity: EntityKind::Edge,
            expected: 2 * n,
            found: raw.edges.len(),
        });
    }
    if raw.sectors.len() != n {
        out.push(Violation::CountMismatch {
            entity: EntityKind::Sector,
            expected: n,
            found: raw.sectors.len(),
        });
    }
    let m = raw.edges.len();
    let mut colors = vec![Color::Red; n];
    for t in &raw.triple_points {
        colors[t.id] = t.color;
    }
    let mut src = vec![0; m];
    let mut dst = vec![0; m];
    for e in &raw.edges {
        for &v in &[e.src, e.dst] {
            if v >= n {
                out.push(Violation::DanglingId {
                    entity: EntityKind::Edge,
                    id: e.id,
                    target: EntityKind::TriplePoint,
                    target_id: v,
                });
            }
        }
        src[e.id] = e.src;
        dst[e.id] = e.dst;
    }
    let mut paths: Vec<[Vec<usize>; 2]> = vec![[Vec::new(), Vec::new()]; raw.sectors.len()];
    for s in &raw.sectors {
        for (k, p) in [&s.path_a, &s.path_b].into_iter().enumerate() {
            if p.is_empty() {
                out.push(Violation::PathViolation {
                    sector: s.id,
                    reason: format!("path {} is empty", path_name(k)),
                });
            }
            for &e in p {
                if e >= m {
                    out.push(Violation::DanglingId {
                        entity: EntityKind::Sector,
                        id: s.id,
                        target: EntityKind::Edge,
                        target_id: e,
                    });
                }
            }
            paths[s.id][k] = p.clone();
        }
    }
    for sp in &raw.smooth_pairing {
        if sp.vertex >= n {
            out.push(Violation::DanglingId {
                entity: EntityKind::SmoothPairing,
                id: sp.vertex,
                target: EntityKind::TriplePoint,
                target_id: sp.vertex,
            });
        }
        for pair in &sp.pairs {
            for &e in pair {
                if e >= m {
                    out.push(Violation::DanglingId {
                        entity: EntityKind::SmoothPairing,
                        id: sp.vertex,
                        target: EntityKind::Edge,
                        target_id: e,
                    });
                }
            }
        }
    }
    if !out.is_empty() {
        return fail(out);
    }

    // Stage 2: valence.
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut outg: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..m {
        outg[src[e]].push(e);
        inc[dst[e]].push(e);
    }
    for v in 0..n {
        if inc[v].len() != 2 || outg[v].len() != 2 {
            out.push(Violation::ValenceViolation {
                vertex: v,
                incoming: inc[v].len(),
                outgoing: outg[v].len(),
            });
        }
    }
    if !out.is_empty() {
        return fail(out);
    }

    // Stage 3: smooth pairing is a bijection in(v) -> out(v) at every vertex.
    let mut smooth_next = vec![usize::MAX; m];
    let mut entries = vec![0usize; n];
    for sp in &raw.smooth_pairing {
        entries[sp.vertex] += 1;
        if sp.pairs.len() != 2 {
            out.push(Violation::SmoothPairingViolation {
                vertex: sp.vertex,
                reason: format!("expected 2 pairs, found {}", sp.pairs.len()),
            });
            continue;
        }
        let ins: Vec<usize> = sp.pairs.iter().map(|p| p[0]).collect();
        let outs: Vec<usize> = sp.pairs.iter().map(|p| p[1]).collect();
        let mut si = ins.clone();
        si.sort_unstable();
        let mut so = outs.clone();
        so.sort_unstable();
        if si != inc[sp.vertex] || so != outg[sp.vertex] {
            out.push(Violation::SmoothPairingViolation {
                vertex: sp.vertex,
                reason: "pairs do not match the incoming and outgoing edges bijectively".into(),
            });
            continue;
        }
        for p in &sp.pairs {
            smooth_next[p[0]] = p[1];
        }
    }
    for (v, &c) in entries.iter().enumerate() {
        if c != 1 {
            out.push(Violation::SmoothPairingViolation {
                vertex: v,
                reason: format!("expected exactly one entry, found {c}"),
            });
        }
    }
    if !out.is_empty() {
        return fail(out);
    }
    let mut turn_next = vec![0; m];
    for e in 0..m {
        let o = &outg[dst[e]];
        turn_next[e] = if o[0] == smooth_next[e] { o[1] } else { o[0] };
    }

    // Stage 4: sector paths are coherent diamonds.
    for (s, p) in paths.iter().enumerate() {
        for k in 0..2 {
            if p[k].windows(2).any(|w| dst[w[0]] != src[w[1]]) {
                out.push(Violation::PathViolation {
                    sector: s,
                    reason: format!("path {} is not a directed path", path_name(k)),
                });
            } else if p[k].len() < 2 {
                out.push(Violation::DiamondViolation {
                    sector: s,
                    path: path_name(k),
                });
            }
        }
        let (a, b) = (&p[0], &p[1]);
        if src[a[0]] != src[b[0]] {
            out.push(Violation::PathViolation {
                sector: s,
                reason: "paths start at different triple points".into(),
            });
        }
        if dst[*a.last().unwrap()] != dst[*b.last().unwrap()] {
            out.push(Violation::PathViolation {
                sector: s,
                reason: "paths end at different triple points".into(),
            });
        }
        if a[0] == b[0] || a.last() == b.last() {
            out.push(Violation::PathViolation {
                sector: s,
                reason: "the two paths share their first or last edge".into(),
            });
        }
    }
    if !out.is_empty() {
        return fail(out);
    }

    // Stage 5: edge incidences.
    let mut bottom_count = vec![0usize; m];
    let mut top_count = vec![0usize; m];
    let mut bottom_side_of = vec![(0usize, 0usize); m];
    for (s, p) in paths.iter().enumerate() {
        for (k, path) in p.iter().enumerate() {
            bottom_count[path[0]] += 1;
            bottom_side_of[path[0]] = (s, k);
            for &e in &path[1..] {
                top_count[e] += 1;
            }
        }
    }
    for e in 0..m {
        if bottom_count[e] != 1 || top_count[e] != 2 {
            out.push(Violation::EdgeIncidenceViolation {
                edge: e,
                bottom_sides: bottom_count[e],
                top_sides: top_count[e],
            });
        }
    }

    // Stage 6: corner census.
    let mut census = vec![[0usize; 3]; n];
    for p in &paths {
        census[dst[*p[0].last().unwrap()]][0] += 1;
        census[src[p[0][0]]][1] += 1;
        census[dst[p[0][0]]][2] += 1;
        census[dst[p[1][0]]][2] += 1;
    }
    for (v, c) in census.iter().enumerate() {
        if *c != [1, 1, 2] {
            out.push(Violation::CornerCensusViolation {
                vertex: v,
                top: c[0],
                bottom: c[1],
                side: c[2],
            });
        }
    }

    // Stage 7: turning at side corners, smooth inside top sides, and each of the
    // four (in, out) pairs at a vertex used by exactly one sector.
    let mut pair_uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (s, p) in paths.iter().enumerate() {
        for path in p {
            for (j, w) in path.windows(2).enumerate() {
                let v = dst[w[0]];
                *pair_uses.entry((w[0], w[1])).or_default() += 1;
                let smooth = smooth_next[w[0]] == w[1];
                if j == 0 && smooth {
                    out.push(Violation::SmoothTurnViolation {
                        vertex: v,
                        reason: format!("sector {s} passes smoothly through its side corner"),
                    });
                } else if j > 0 && !smooth {
                    out.push(Violation::SmoothTurnViolation {
                        vertex: v,
                        reason: format!("sector {s} turns in the interior of a top side"),
                    });
                }
            }
        }
    }
    for v in 0..n {
        for &a in &inc[v] {
            for &b in &outg[v] {
                let c = pair_uses.get(&(a, b)).copied().unwrap_or(0);
                if c != 1 {
                    out.push(Violation::SmoothTurnViolation {
                        vertex: v,
                        reason: format!("the pair ({a}, {b}) is used by {c} sectors, expected 1"),
                    });
                }
            }
        }
    }
    if !out.is_empty() {
        return fail(out);
    }

    // Stage 8: bichromatic branch loops.
    for lp in follow_loops(m, &smooth_next) {
        let c0 = colors[dst[lp[0]]];
        if lp.iter().all(|&e| colors[dst[e]] == c0) {
            out.push(Violation::MonochromeBranchLoop {
                edges: lp,
                color: c0,
            });
        }
    }

    // Stage 9: color rule. For e: u -> w, the sector turning at u onto e has e as
    // its whole top side exactly when u and w have the same color.
    for e in 0..m {
        let turning = paths
            .iter()
            .flat_map(|p| p.iter())
            .find(|path| path[1] == e)
            .expect("edge incidences checked");
        let whole_top_side = turning.len() == 2;
        if whole_top_side != (colors[src[e]] == colors[dst[e]]) {
            out.push(Violation::ColorRuleViolation { edge: e });
        }
    }
    if !out.is_empty() {
        return fail(out);
    }

    // Canonical numbering: bottom corner of sector i becomes vertex i.
    let mut relabel = vec![0usize; n];
    for (s, p) in paths.iter().enumerate() {
        relabel[src[p[0][0]]] = s;
    }
    let mut original_vertex = vec![0usize; n];
    for (old, &new) in relabel.iter().enumerate() {
        original_vertex[new] = old;
    }
    let colors: Vec<Color> = original_vertex.iter().map(|&o| colors[o]).collect();
    let src: Vec<usize> = src.iter().map(|&v| relabel[v]).collect();
    let dst: Vec<usize> = dst.iter().map(|&v| relabel[v]).collect();
    let mut incoming = vec![[0usize; 2]; n];
    let mut outgoing = vec![[0usize; 2]; n];
    for v in 0..n {
        let o = original_vertex[v];
        incoming[v] = [inc[o][0], inc[o][1]];
        outgoing[v] = [outg[o][0], outg[o][1]];
    }
    let sectors: Vec<Sector> = paths
        .into_iter()
        .map(|p| {
            let bottom = src[p[0][0]];
            let top = dst[*p[0].last().unwrap()];
            let sides = [dst[p[0][0]], dst[p[1][0]]];
            Sector {
                paths: p,
                bottom,
                top,
                sides,
            }
        })
        .collect();
    let mut top_sector_at = vec![0usize; n];
    for (s, sec) in sectors.iter().enumerate() {
        top_sector_at[sec.top] = s;
    }
    Ok(Vbs {
        name: raw.name.clone(),
        colors,
        src,
        dst,
        incoming,
        outgoing,
        smooth_next,
        turn_next,
        sectors,
        bottom_side_of,
        top_sector_at,
        original_vertex,
    })
}

fn path_name(k: usize) -> char {
    if k == 0 {
        'a'
    } else {
        'b'
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn f8_raw() -> RawVbs {
        serde_json::from_str(include_str!("../../../fixtures/f8.json")).unwrap()
    }

    #[test]
    fn f8_validates_in_canonical_numbering() {
        let v = validate(&f8_raw()).unwrap();
        assert_eq!(v.n(), 2);
        assert_eq!(v.num_edges(), 4);
        for (i, s) in v.sectors().iter().enumerate() {
            assert_eq!(s.bottom, i);
            assert_ne!(s.top, s.bottom);
        }
    }

    #[test]
    fn truncated_path_is_a_diamond_violation() {
        let mut raw = f8_raw();
        raw.sectors[0].path_a.truncate(1);
        let err = validate(&raw).unwrap_err();
        assert!(err.violations.iter().any(|v| matches!(
            v,
            Violation::DiamondViolation {
                sector: 0,
                path: 'a'
            }
        )));
    }

    #[test]
    fn all_blue_is_monochrome() {
        let mut raw = f8_raw();
        for t in &mut raw.triple_points {
            t.color = Color::Blue;
        }
        let err = validate(&raw).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MonochromeBranchLoop { .. })));
    }

    #[test]
    fn swapped_colors_still_validate() {
        let mut raw = f8_raw();
        for t in &mut raw.triple_points {
            t.color = t.color.flip();
        }
        assert!(validate(&raw).is_ok());
    }

    #[test]
    fn dangling_edge_endpoint() {
        let mut raw = f8_raw();
        raw.edges[0].dst = 7;
        let err = validate(&raw).unwrap_err();
        assert!(matches!(err.violations[0], Violation::DanglingId { .. }));
    }

    #[test]
    fn valence_violation() {
        let mut raw = f8_raw();
        let d = raw.edges[0].dst;
        raw.edges[0].dst = raw.edges[0].src;
        raw.edges[0].src = d;
        let err = validate(&raw).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ValenceViolation { .. })));
    }

    #[test]
    fn loops_partition_edges() {
        let v = validate(&f8_raw()).unwrap();
        for d in [decompose_branch_loops(&v), decompose_anti_branch_loops(&v)] {
            let mut all: Vec<usize> = d.loops.iter().flat_map(|l| l.edges.clone()).collect();
            all.sort_unstable();
            assert_eq!(all, vec![0, 1, 2, 3]);
        }
        let anti = decompose_anti_branch_loops(&v);
        for l in &anti.loops {
            assert_eq!(l.orientation_preserving, Some(l.edges.len() % 2 == 0));
        }
    }
}
