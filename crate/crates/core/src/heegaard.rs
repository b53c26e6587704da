//! Combinatorial cell model of the canonical sutured Heegaard diagram.
//!
//! The diagram surface is a union of annuli, one per branch loop. Walking
//! along a branch loop, each visit to a triple point contributes one punctured
//! rectangle whose hole is the α-curve of that triple point. Three β-strands run
//! along every tube between consecutive rectangles, at heights x = 1/4, 1/2, 3/4
//! of the annulus, and the sutures sit at x = 0 and x = 1. A blue rectangle has
//! its hole across the strands at 1/4 and 1/2, a red one across 1/2 and 3/4.
//!
//! Cells of each rectangle are glued across tubes with a union-find, giving the
//! elementary domains. The two rectangles of a triple point (one per incoming
//! edge, called passages) share the α-curve, which determines the four
//! quadrants at every intersection point.
//!
//! Quadrant convention at a point `P`: the half-edges at `P` in counterclockwise
//! order are `h0` (α-arc towards the next point of the hole), `h1` (β-arc into
//! the other passage), `h2` (α-arc towards the previous point) and `h3` (β-arc
//! into the own passage), where "own" is the passage of the lower incoming edge
//! id. Quadrant `q_i` lies between `h_i` and `h_{i+1}`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::vbs::{decompose_branch_loops, Color, CornerRole, Vbs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionPoint {
    pub sector: usize,
    pub role: CornerRole,
    pub vertex: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainSide {
    Left,
    Right,
    Basepoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryDomain {
    pub id: usize,
    pub contains_basepoint: bool,
    pub side: DomainSide,
    pub annulus: usize,
    /// `(intersection point, quadrant slot)` incidences.
    pub corners: Vec<(usize, usize)>,
    /// Four times the Euler measure.
    pub euler_quarters: i64,
}

/// Distinguished corners of an empty elementary domain, as point ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistinguishedCorners {
    pub upper_left: usize,
    pub upper_right: usize,
    pub lower_left: usize,
    pub lower_right: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "curve", content = "index", rename_all = "snake_case")]
pub enum Curve {
    Alpha(usize),
    Beta(usize),
}

/// An arc of an α- or β-curve between two intersection points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub curve: Curve,
    /// Both ends as `(point, half-edge slot)`.
    pub ends: [(usize, usize); 2],
}

/// One pass of a branch loop through a triple point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Visit {
    pub vertex: usize,
    pub incoming: usize,
    /// Index of `incoming` among the incoming edges of `vertex`.
    pub passage: usize,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Annulus {
    pub edges: Vec<usize>,
    pub visits: Vec<Visit>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HeegaardError {
    #[error("internal inconsistency while building the diagram: {0}")]
    InternalInconsistency(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegaardComplex {
    n: usize,
    points: Vec<IntersectionPoint>,
    domains: Vec<ElementaryDomain>,
    quadrants: Vec<[usize; 4]>,
    slots: Vec<[usize; 4]>,
    arcs: Vec<Arc>,
    annuli: Vec<Annulus>,
    distinguished: Vec<Option<DistinguishedCorners>>,
    empty: Vec<usize>,
    sutures: usize,
}

/// Point id of `(sector, role)`.
pub fn point_id(sector: usize, role: CornerRole) -> usize {
    4 * sector + role.index()
}

impl HeegaardComplex {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn num_alpha(&self) -> usize {
        self.n
    }
    pub fn num_beta(&self) -> usize {
        self.n
    }
    pub fn points(&self) -> &[IntersectionPoint] {
        &self.points
    }
    pub fn domains(&self) -> &[ElementaryDomain] {
        &self.domains
    }
    /// Domain ids of the quadrants `q0..q3` at a point.
    pub fn quadrants(&self, p: usize) -> [usize; 4] {
        self.quadrants[p]
    }
    /// Arc ids at the half-edges `h0..h3` of a point.
    pub fn slots(&self, p: usize) -> [usize; 4] {
        self.slots[p]
    }
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }
    pub fn annuli(&self) -> &[Annulus] {
        &self.annuli
    }
    /// Ids of the empty (basepoint-free) elementary domains, increasing.
    pub fn empty_domains(&self) -> &[usize] {
        &self.empty
    }
    pub fn distinguished(&self, domain: usize) -> Option<DistinguishedCorners> {
        self.distinguished[domain]
    }
    /// Number of boundary circles of the diagram surface.
    pub fn num_sutures(&self) -> usize {
        self.sutures
    }

    /// Swap two quadrant entries at a point (harness-only mutation).
    #[doc(hidden)]
    pub fn swap_quadrants_unchecked(&mut self, p: usize, a: usize, b: usize) {
        self.quadrants[p].swap(a, b);
    }

    /// Replace the quadrant map wholesale (harness-only mutation).
    #[doc(hidden)]
    pub fn set_quadrants_unchecked(&mut self, p: usize, q: [usize; 4]) {
        self.quadrants[p] = q;
    }

    /// Arc at the other end of half-edge `h` of point `p`, as `(point, slot)`.
    pub fn across(&self, p: usize, h: usize) -> (usize, usize) {
        let arc = &self.arcs[self.slots[p][h]];
        if arc.ends[0] == (p, h) {
            arc.ends[1]
        } else {
            arc.ends[0]
        }
    }

    /// Deterministic text listing of annuli, domains and quadrant incidences.
    pub fn debug_dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "heegaard complex n={} points={} arcs={} domains={}",
            self.n,
            self.points.len(),
            self.arcs.len(),
            self.domains.len()
        );
        for (i, a) in self.annuli.iter().enumerate() {
            let visits: Vec<String> = a
                .visits
                .iter()
                .map(|v| format!("v{}/{}({})", v.vertex, v.incoming, v.color))
                .collect();
            let _ = writeln!(
                s,
                "annulus {i} edges {:?} visits [{}]",
                a.edges,
                visits.join(" ")
            );
        }
        for d in &self.domains {
            let corners: Vec<String> = d.corners.iter().map(|(p, q)| format!("{p}.{q}")).collect();
            let _ = write!(
                s,
                "domain {} side={:?} annulus={} euler={}/4 corners [{}]",
                d.id,
                d.side,
                d.annulus,
                d.euler_quarters,
                corners.join(" ")
            );
            if let Some(dc) = self.distinguished[d.id] {
                let _ = write!(
                    s,
                    " ul={} ur={} ll={} lr={}",
                    dc.upper_left, dc.upper_right, dc.lower_left, dc.lower_right
                );
            }
            let _ = writeln!(s);
        }
        for (p, pt) in self.points.iter().enumerate() {
            let _ = writeln!(
                s,
                "point {p} sector={} role={} vertex={} quadrants {:?} slots {:?}",
                pt.sector, pt.role, pt.vertex, self.quadrants[p], self.slots[p]
            );
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    /// Left basepoint strip, touching the left suture.
    Zl = 0,
    /// Blue: between the strands at 1/4 and 1/2, below the hole.
    Llo,
    /// Blue: between the strands at 1/4 and 1/2, above the hole.
    Lhi,
    /// Red: between the strands at 1/4 and 1/2 over the full height.
    Ml,
    /// Blue: between the strands at 1/2 and 3/4 over the full height.
    Mr,
    /// Red: between the strands at 1/2 and 3/4, below the hole.
    Rlo,
    /// Red: between the strands at 1/2 and 3/4, above the hole.
    Rhi,
    /// Right basepoint strip, touching the right suture.
    Zr,
}

const PIECES: usize = 8;

impl Piece {
    const ALL: [Piece; PIECES] = [
        Piece::Zl,
        Piece::Llo,
        Piece::Lhi,
        Piece::Ml,
        Piece::Mr,
        Piece::Rlo,
        Piece::Rhi,
        Piece::Zr,
    ];
    fn used_by(self, c: Color) -> bool {
        match self {
            Piece::Zl | Piece::Zr => true,
            Piece::Llo | Piece::Lhi | Piece::Mr => c == Color::Blue,
            Piece::Ml | Piece::Rlo | Piece::Rhi => c == Color::Red,
        }
    }
    fn side(self) -> DomainSide {
        match self {
            Piece::Zl | Piece::Zr => DomainSide::Basepoint,
            Piece::Llo | Piece::Lhi | Piece::Ml => DomainSide::Left,
            Piece::Mr | Piece::Rlo | Piece::Rhi => DomainSide::Right,
        }
    }
}

/// Piece of a rectangle adjacent to hole arc `k` (from corner `k` to `k+1`).
fn arc_piece(c: Color, k: usize) -> Piece {
    match c {
        Color::Blue => [Piece::Llo, Piece::Mr, Piece::Lhi, Piece::Zl][k],
        Color::Red => [Piece::Rlo, Piece::Zr, Piece::Rhi, Piece::Ml][k],
    }
}

/// Hole corners of the rectangle of passage `p` at `v`, counterclockwise from
/// the lower left.
fn hole_order(vbs: &Vbs, v: usize, p: usize) -> [usize; 4] {
    let b = point_id(vbs.sector_with_top(v), CornerRole::Top);
    let t = point_id(vbs.sector_with_bottom(v), CornerRole::Bottom);
    let side = |q: usize| {
        let (s, k) = vbs.bottom_side_of(vbs.incoming(v)[q]);
        point_id(s, CornerRole::side(k))
    };
    let (sp, sq) = (side(p), side(1 - p));
    match vbs.color(v) {
        Color::Blue => [b, sp, t, sq],
        Color::Red => [sp, b, sq, t],
    }
}

/// β-arc id of the half of the boundary of sector `s` along path `k`:
/// `upper = false` for `[bottom, side]`, true for `[side, top]`.
fn beta_arc(n: usize, s: usize, k: usize, upper: bool) -> usize {
    4 * n + 4 * s + 2 * k + usize::from(upper)
}

/// The β-arc ending at point `p` (a corner at `v`) inside the rectangle of passage `x`.
fn beta_in(vbs: &Vbs, v: usize, x: usize, p: usize) -> Result<usize, HeegaardError> {
    let n = vbs.n();
    let sector = p / 4;
    let role = CornerRole::from_index(p % 4);
    let eb = vbs.incoming(v)[x];
    let sec = vbs.sector(sector);
    let find = |pred: &dyn Fn(&[usize]) -> bool| {
        (0..2).find(|&k| pred(&sec.paths[k])).ok_or_else(|| {
            HeegaardError::InternalInconsistency(format!(
                "no β-arc of sector {sector} at vertex {v}"
            ))
        })
    };
    match role {
        CornerRole::Top => Ok(beta_arc(
            n,
            sector,
            find(&|path| *path.last().unwrap() == eb)?,
            true,
        )),
        CornerRole::Bottom => {
            let et = vbs.smooth_successor(eb);
            Ok(beta_arc(n, sector, find(&|path| path[0] == et)?, false))
        }
        CornerRole::SideA | CornerRole::SideB => {
            let k = usize::from(role == CornerRole::SideB);
            let upper = sec.paths[k][0] != eb;
            Ok(beta_arc(n, sector, k, upper))
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn inconsistent(msg: impl Into<String>) -> HeegaardError {
    HeegaardError::InternalInconsistency(msg.into())
}

pub fn build_diagram(vbs: &Vbs) -> Result<HeegaardComplex, HeegaardError> {
    let n = vbs.n();
    let loops = decompose_branch_loops(vbs);

    // Visits, annulus by annulus.
    let mut visits: Vec<(usize, Visit)> = Vec::new();
    let mut annuli = Vec::new();
    let mut visit_of = vec![[usize::MAX; 2]; n];
    for (a, l) in loops.loops.iter().enumerate() {
        let mut vs = Vec::new();
        for &e in &l.edges {
            let v = vbs.dst(e);
            let passage = usize::from(vbs.incoming(v)[1] == e);
            let visit = Visit {
                vertex: v,
                incoming: e,
                passage,
                color: vbs.color(v),
            };
            visit_of[v][passage] = visits.len();
            visits.push((a, visit));
            vs.push(visit);
        }
        annuli.push(Annulus {
            edges: l.edges.clone(),
            visits: vs,
        });
    }
    let cell = |visit: usize, piece: Piece| visit * PIECES + piece as usize;

    // Glue cells along each annulus.
    let mut uf = UnionFind((0..visits.len() * PIECES).collect());
    let mut start = 0;
    for ann in &annuli {
        let len = ann.visits.len();
        for j in 0..len {
            let lo = start + j;
            let hi = start + (j + 1) % len;
            uf.union(cell(lo, Piece::Zl), cell(hi, Piece::Zl));
            uf.union(cell(lo, Piece::Zr), cell(hi, Piece::Zr));
            let (top_left, top_right) = match visits[lo].1.color {
                Color::Blue => (Piece::Lhi, Piece::Mr),
                Color::Red => (Piece::Ml, Piece::Rhi),
            };
            let (bottom_left, bottom_right) = match visits[hi].1.color {
                Color::Blue => (Piece::Llo, Piece::Mr),
                Color::Red => (Piece::Ml, Piece::Rlo),
            };
            uf.union(cell(lo, top_left), cell(hi, bottom_left));
            uf.union(cell(lo, top_right), cell(hi, bottom_right));
        }
        start += len;
    }

    // Number regions by first appearance and classify them.
    let mut region_of_root = vec![usize::MAX; visits.len() * PIECES];
    let mut region_of_cell = vec![usize::MAX; visits.len() * PIECES];
    let mut sides: Vec<DomainSide> = Vec::new();
    let mut region_annulus: Vec<usize> = Vec::new();
    for (vi, (a, visit)) in visits.iter().enumerate() {
        for piece in Piece::ALL {
            if !piece.used_by(visit.color) {
                continue;
            }
            let c = cell(vi, piece);
            let r = uf.find(c);
            if region_of_root[r] == usize::MAX {
                region_of_root[r] = sides.len();
                sides.push(piece.side());
                region_annulus.push(*a);
            }
            let id = region_of_root[r];
            if sides[id] != piece.side() {
                return Err(inconsistent(format!(
                    "region {id} mixes {:?} and {:?} cells",
                    sides[id],
                    piece.side()
                )));
            }
            if region_annulus[id] != *a {
                return Err(inconsistent(format!("region {id} spans two annuli")));
            }
            region_of_cell[c] = id;
        }
    }
    let region = |visit: usize, piece: Piece| -> Result<usize, HeegaardError> {
        let r = region_of_cell[cell(visit, piece)];
        if r == usize::MAX {
            Err(inconsistent(format!(
                "unused piece {piece:?} referenced in visit {visit}"
            )))
        } else {
            Ok(r)
        }
    };

    // Points, quadrants and half-edge slots.
    let num_points = 4 * n;
    let mut points = Vec::with_capacity(num_points);
    for s in 0..n {
        for role in CornerRole::ALL {
            points.push(IntersectionPoint {
                sector: s,
                role,
                vertex: vbs.corner(s, role),
            });
        }
    }
    let mut quadrants = vec![[usize::MAX; 4]; num_points];
    let mut slots = vec![[usize::MAX; 4]; num_points];
    let mut arcs: Vec<Option<Arc>> = vec![None; 8 * n];
    for v in 0..n {
        let own = hole_order(vbs, v, 0);
        let other = hole_order(vbs, v, 1);
        let color = vbs.color(v);
        let (vis0, vis1) = (visit_of[v][0], visit_of[v][1]);
        let other_piece = |a: usize, b: usize| -> Result<Piece, HeegaardError> {
            (0..4)
                .find(|&j| {
                    let (x, y) = (other[j], other[(j + 1) % 4]);
                    (x == a && y == b) || (x == b && y == a)
                })
                .map(|j| arc_piece(color, j))
                .ok_or_else(|| {
                    inconsistent(format!("hole arcs of the two passages at {v} do not match"))
                })
        };
        for k in 0..4 {
            let p = own[k];
            let next = own[(k + 1) % 4];
            let prev = own[(k + 3) % 4];
            if points[p].vertex != v {
                return Err(inconsistent(format!(
                    "point {p} placed on the α-curve of {v}"
                )));
            }
            quadrants[p] = [
                region(vis1, other_piece(p, next)?)?,
                region(vis1, other_piece(prev, p)?)?,
                region(vis0, arc_piece(color, (k + 3) % 4))?,
                region(vis0, arc_piece(color, k))?,
            ];
            let alpha_k = 4 * v + k;
            let alpha_prev = 4 * v + (k + 3) % 4;
            slots[p] = [
                alpha_k,
                beta_in(vbs, v, 1, p)?,
                alpha_prev,
                beta_in(vbs, v, 0, p)?,
            ];
            arcs[alpha_k] = Some(Arc {
                curve: Curve::Alpha(v),
                ends: [(p, 0), (next, 2)],
            });
        }
    }
    let mut beta_ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 4 * n];
    for p in 0..num_points {
        if slots[p][0] == usize::MAX {
            return Err(inconsistent(format!("point {p} is not on any α-curve")));
        }
        for h in [1, 3] {
            beta_ends[slots[p][h] - 4 * n].push((p, h));
        }
    }
    for (i, ends) in beta_ends.into_iter().enumerate() {
        let s = i / 4;
        if ends.len() != 2 {
            return Err(inconsistent(format!("β-arc {i} has {} ends", ends.len())));
        }
        // Order the ends from the lower to the upper corner of the sector.
        let mut ends = [ends[0], ends[1]];
        let rank = |p: usize| match points[p].role {
            CornerRole::Bottom => 0,
            CornerRole::Top => 2,
            _ => 1,
        };
        if rank(ends[0].0) > rank(ends[1].0) {
            ends.swap(0, 1);
        }
        arcs[4 * n + i] = Some(Arc {
            curve: Curve::Beta(s),
            ends,
        });
    }
    let arcs: Vec<Arc> = arcs
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.ok_or_else(|| inconsistent(format!("arc {i} missing"))))
        .collect::<Result<_, _>>()?;

    // Domains: corners, boundary walks and Euler measures.
    let num_regions = sides.len();
    let mut corners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_regions];
    for (p, q) in quadrants.iter().enumerate() {
        for (i, &d) in q.iter().enumerate() {
            corners[d].push((p, i));
        }
    }
    let mut hc = HeegaardComplex {
        n,
        points,
        domains: Vec::new(),
        quadrants,
        slots,
        arcs,
        annuli,
        distinguished: vec![None; num_regions],
        empty: Vec::new(),
        sutures: 0,
    };
    let walks = region_walk_counts(&hc, num_regions);
    for d in 0..num_regions {
        let basepoint = sides[d] == DomainSide::Basepoint;
        let chi = 2 - walks[d] as i64 - i64::from(basepoint);
        hc.domains.push(ElementaryDomain {
            id: d,
            contains_basepoint: basepoint,
            side: sides[d],
            annulus: region_annulus[d],
            corners: corners[d].clone(),
            euler_quarters: 4 * chi - corners[d].len() as i64,
        });
        if basepoint {
            hc.sutures += 1;
        } else {
            hc.empty.push(d);
        }
    }

    // Distinguished corners from the rectangles at the two ends of each domain.
    for (vi, (_, visit)) in visits.iter().enumerate() {
        let order = hole_order(vbs, visit.vertex, visit.passage);
        let (upper_piece, lower_piece) = match visit.color {
            Color::Blue => (Piece::Llo, Piece::Lhi),
            Color::Red => (Piece::Rlo, Piece::Rhi),
        };
        let du = region(vi, upper_piece)?;
        let dl = region(vi, lower_piece)?;
        let entry_u = hc.distinguished[du].get_or_insert(DistinguishedCorners {
            upper_left: usize::MAX,
            upper_right: usize::MAX,
            lower_left: usize::MAX,
            lower_right: usize::MAX,
        });
        if entry_u.upper_left != usize::MAX {
            return Err(inconsistent(format!("domain {du} has two upper ends")));
        }
        entry_u.upper_left = order[0];
        entry_u.upper_right = order[1];
        let entry_l = hc.distinguished[dl].get_or_insert(DistinguishedCorners {
            upper_left: usize::MAX,
            upper_right: usize::MAX,
            lower_left: usize::MAX,
            lower_right: usize::MAX,
        });
        if entry_l.lower_left != usize::MAX {
            return Err(inconsistent(format!("domain {dl} has two lower ends")));
        }
        entry_l.lower_left = order[3];
        entry_l.lower_right = order[2];
    }
    for &d in &hc.empty {
        match hc.distinguished[d] {
            Some(dc) if dc.upper_left != usize::MAX && dc.lower_left != usize::MAX => {}
            _ => {
                return Err(inconsistent(format!(
                    "domain {d} lacks distinguished corners"
                )))
            }
        }
    }
    Ok(hc)
}

/// Number of boundary walks of each region, tracing corners `(P, q_i)`: leave
/// `P` along `h_i`, arrive at `Q` along `h'`, continue with corner `(Q, q_{h'-1})`.
fn region_walk_counts(hc: &HeegaardComplex, num_regions: usize) -> Vec<usize> {
    let np = hc.points.len();
    let mut seen = vec![[false; 4]; np];
    let mut walks = vec![0usize; num_regions];
    for p in 0..np {
        for i in 0..4 {
            if seen[p][i] {
                continue;
            }
            walks[hc.quadrants[p][i]] += 1;
            let (mut cp, mut ci) = (p, i);
            while !seen[cp][ci] {
                seen[cp][ci] = true;
                let (q, h) = hc.across(cp, ci);
                cp = q;
                ci = (h + 3) % 4;
            }
        }
    }
    walks
}

/// One named pass/fail check of [`audit_diagram`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Recheck the structural invariants of a complex from its stored data.
pub fn audit_diagram(hc: &HeegaardComplex) -> AuditReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, failures: Vec<String>| {
        checks.push(AuditCheck {
            name,
            passed: failures.is_empty(),
            detail: failures.into_iter().take(5).collect::<Vec<_>>().join("; "),
        });
    };
    let n = hc.n;
    let np = hc.points.len();

    // Balanced: as many α- as β-curves, both equal to n, 4n points.
    let mut f = Vec::new();
    if hc.num_alpha() != hc.num_beta() || np != 4 * n || hc.arcs.len() != 8 * n {
        f.push(format!(
            "alpha={} beta={} points={np} arcs={}",
            hc.num_alpha(),
            hc.num_beta(),
            hc.arcs.len()
        ));
    }
    push("balanced", f);

    // Each α- and β-curve carries exactly four points, forming one cycle of arcs.
    let mut f = Vec::new();
    let mut alpha_count = vec![0usize; n];
    let mut beta_count = vec![0usize; n];
    for p in &hc.points {
        alpha_count[p.vertex] += 1;
        beta_count[p.sector] += 1;
    }
    for i in 0..n {
        if alpha_count[i] != 4 || beta_count[i] != 4 {
            f.push(format!(
                "curve {i}: alpha points {}, beta points {}",
                alpha_count[i], beta_count[i]
            ));
        }
    }
    for (id, arc) in hc.arcs.iter().enumerate() {
        for &(p, h) in &arc.ends {
            if hc.slots[p][h] != id {
                f.push(format!("arc {id} end ({p}, {h}) not registered"));
            }
            let on_curve = match arc.curve {
                Curve::Alpha(v) => hc.points[p].vertex == v && h % 2 == 0,
                Curve::Beta(s) => hc.points[p].sector == s && h % 2 == 1,
            };
            if !on_curve {
                f.push(format!("arc {id} ends at point {p} off its curve"));
            }
        }
    }
    push("intersection_counts", f);

    // Regions on either side of each arc agree at both ends.
    let mut f = Vec::new();
    for (id, arc) in hc.arcs.iter().enumerate() {
        let [(p, h), (q, g)] = arc.ends;
        let left_ok = hc.quadrants[p][h] == hc.quadrants[q][(g + 3) % 4];
        let right_ok = hc.quadrants[p][(h + 3) % 4] == hc.quadrants[q][g];
        if !left_ok || !right_ok {
            f.push(format!("arc {id}"));
        }
    }
    push("arc_sides", f);

    // Quadrant map is a bijection onto the stored corner incidences.
    let mut f = Vec::new();
    let mut incidences: Vec<(usize, usize, usize)> = Vec::new();
    for d in &hc.domains {
        for &(p, q) in &d.corners {
            incidences.push((p, q, d.id));
        }
    }
    incidences.sort_unstable();
    let mut expected: Vec<(usize, usize, usize)> = Vec::new();
    for p in 0..np {
        for q in 0..4 {
            expected.push((p, q, hc.quadrants[p][q]));
        }
    }
    if incidences != expected {
        f.push("stored corners differ from the quadrant map".into());
    }
    push("quadrant_bijection", f);

    // Every region has one boundary walk; empty regions are discs.
    let mut f = Vec::new();
    let walks = region_walk_counts(hc, hc.domains.len());
    for d in &hc.domains {
        if walks[d.id] != 1 {
            f.push(format!(
                "domain {} has {} boundary walks",
                d.id, walks[d.id]
            ));
        }
    }
    push("boundary_walks", f);

    // Euler measures sum to the Euler characteristic V - E + F - (sutures),
    // which must equal -2n for a genus n+1 handlebody boundary.
    let mut f = Vec::new();
    let sum_quarters: i64 = hc.domains.iter().map(|d| d.euler_quarters).sum();
    let chi = np as i64 - hc.arcs.len() as i64 + hc.domains.len() as i64 - hc.sutures as i64;
    if sum_quarters != 4 * chi {
        f.push(format!(
            "sum of Euler measures {sum_quarters}/4, cell count gives {chi}"
        ));
    }
    if chi != -2 * n as i64 {
        f.push(format!(
            "Euler characteristic {chi}, expected {}",
            -2 * n as i64
        ));
    }
    push("euler_sum", f);

    // Empty domain census: 2n of them, each on one annulus, left or right.
    let mut f = Vec::new();
    if hc.empty.len() != 2 * n {
        f.push(format!(
            "{} empty domains, expected {}",
            hc.empty.len(),
            2 * n
        ));
    }
    if hc.sutures != 2 * hc.annuli.len() {
        f.push(format!(
            "{} basepoint domains for {} annuli",
            hc.sutures,
            hc.annuli.len()
        ));
    }
    for &d in &hc.empty {
        if hc.domains[d].side == DomainSide::Basepoint || hc.domains[d].contains_basepoint {
            f.push(format!("empty domain {d} marked as basepoint"));
        }
    }
    push("domain_census", f);

    // Exactly one top-state coordinate among the corners of each empty domain.
    let mut f = Vec::new();
    for &d in &hc.empty {
        let tops: std::collections::BTreeSet<usize> = hc.domains[d]
            .corners
            .iter()
            .filter(|&&(p, _)| hc.points[p].role == CornerRole::Top)
            .map(|&(p, _)| p)
            .collect();
        if tops.len() != 1 {
            f.push(format!("domain {d} has {} top-state corners", tops.len()));
        }
    }
    push("top_coordinate_per_domain", f);

    // At every top-state coordinate two opposite quadrants are basepoint domains.
    let mut f = Vec::new();
    for (p, pt) in hc.points.iter().enumerate() {
        if pt.role != CornerRole::Top {
            continue;
        }
        let bp = |q: usize| hc.domains[hc.quadrants[p][q]].contains_basepoint;
        let ok = (bp(0) && bp(2) && !bp(1) && !bp(3)) || (bp(1) && bp(3) && !bp(0) && !bp(2));
        if !ok {
            f.push(format!("point {p}"));
        }
    }
    push("top_coordinate_placement", f);

    // Left domains: upper-left top, lower-right bottom; mirrored for right domains.
    let mut f = Vec::new();
    for &d in &hc.empty {
        let Some(dc) = hc.distinguished[d] else {
            f.push(format!("domain {d} has no distinguished corners"));
            continue;
        };
        let occupies = |p: usize| hc.quadrants[p].contains(&d);
        let (top_pt, bottom_pt) = match hc.domains[d].side {
            DomainSide::Left => (dc.upper_left, dc.lower_right),
            DomainSide::Right => (dc.upper_right, dc.lower_left),
            DomainSide::Basepoint => continue,
        };
        // At its top-state corner the domain sits between two basepoint quadrants.
        let flanked = (0..4).any(|q| {
            hc.quadrants[top_pt][q] == d
                && hc.domains[hc.quadrants[top_pt][(q + 1) % 4]].contains_basepoint
                && hc.domains[hc.quadrants[top_pt][(q + 3) % 4]].contains_basepoint
        });
        if hc.points[top_pt].role != CornerRole::Top
            || hc.points[bottom_pt].role != CornerRole::Bottom
            || !flanked
            || ![dc.upper_left, dc.upper_right, dc.lower_left, dc.lower_right]
                .iter()
                .all(|&p| occupies(p))
        {
            f.push(format!("domain {d}"));
        }
    }
    push("corner_convention", f);

    AuditReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbs::validate;

    fn f8() -> Vbs {
        validate(&serde_json::from_str(include_str!("../../../fixtures/f8.json")).unwrap()).unwrap()
    }

    #[test]
    fn f8_diagram_counts() {
        let hc = build_diagram(&f8()).unwrap();
        assert_eq!(hc.num_alpha(), 2);
        assert_eq!(hc.num_beta(), 2);
        assert_eq!(hc.points().len(), 8);
        assert_eq!(hc.empty_domains().len(), 4);
        let report = audit_diagram(&hc);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn mutation_breaks_corner_checks() {
        let v = f8();
        let mut hc = build_diagram(&v).unwrap();
        let p = point_id(0, CornerRole::Top);
        hc.swap_quadrants_unchecked(p, 0, 1);
        let report = audit_diagram(&hc);
        assert!(!report.check("corner_convention").unwrap().passed);
        assert!(!report.check("top_coordinate_placement").unwrap().passed);
    }

    #[test]
    fn dump_is_deterministic() {
        let v = f8();
        assert_eq!(
            build_diagram(&v).unwrap().debug_dump(),
            build_diagram(&v).unwrap().debug_dump()
        );
    }
}
