//! Heegaard states, their multi-loops, spin-c classes and ν-gradings.
//!
//! A state assigns to every sector one of its corners so that every triple
//! point is used exactly once. Two independent enumerations are provided:
//! [`enumerate_states_filter`] scans all `4^n` corner assignments, and
//! [`enumerate_states_multiloop`] backtracks over embedded multi-loops of the
//! augmented dual graph (the dual graph plus one vertical edge per sector).

use serde::Serialize;

use crate::homology::{HomologyClass, HomologyModel};
use crate::poly::GroupRingElement;
use crate::vbs::{CornerRole, Vbs};

/// Largest `n` accepted by the exhaustive filter.
pub const FILTER_MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StateError {
    #[error("state search exceeded its budget of {budget}")]
    SearchBudgetExceeded { budget: usize },
    #[error("corner assignment is not a bijection onto the triple points")]
    NotBijective,
    #[error("expected {expected} corners, found {found}")]
    WrongLength { expected: usize, found: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct StateBudget {
    pub max_states: usize,
}

impl Default for StateBudget {
    fn default() -> Self {
        StateBudget {
            max_states: 1_000_000,
        }
    }
}

/// A Heegaard state; ordering is lexicographic in the corner vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HeegaardState {
    corners: Vec<CornerRole>,
    #[serde(skip)]
    sigma: Vec<usize>,
}

impl HeegaardState {
    /// Build a state from one corner per sector, checking bijectivity.
    pub fn new(vbs: &Vbs, corners: Vec<CornerRole>) -> Result<HeegaardState, StateError> {
        if corners.len() != vbs.n() {
            return Err(StateError::WrongLength {
                expected: vbs.n(),
                found: corners.len(),
            });
        }
        let sigma: Vec<usize> = corners
            .iter()
            .enumerate()
            .map(|(s, &r)| vbs.corner(s, r))
            .collect();
        let mut seen = vec![false; vbs.n()];
        for &v in &sigma {
            if std::mem::replace(&mut seen[v], true) {
                return Err(StateError::NotBijective);
            }
        }
        Ok(HeegaardState { corners, sigma })
    }

    pub fn corners(&self) -> &[CornerRole] {
        &self.corners
    }
    pub fn corner(&self, s: usize) -> CornerRole {
        self.corners[s]
    }
    /// Sector index to triple point index.
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }
    /// Sign of `sigma` as a permutation: 0 for even, 1 for odd.
    pub fn sign(&self) -> u8 {
        let n = self.sigma.len();
        let mut seen = vec![false; n];
        let mut parity = 0usize;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.sigma[j];
                len += 1;
            }
            parity += len - 1;
        }
        (parity % 2) as u8
    }
    /// Intersection point ids `(sector, role)` of the state's coordinates.
    pub fn points(&self) -> Vec<usize> {
        self.corners
            .iter()
            .enumerate()
            .map(|(s, r)| crate::heegaard::point_id(s, *r))
            .collect()
    }
}

pub fn bottom_state(vbs: &Vbs) -> HeegaardState {
    HeegaardState::new(vbs, vec![CornerRole::Bottom; vbs.n()])
        .expect("bottom corners are a bijection")
}

pub fn top_state(vbs: &Vbs) -> HeegaardState {
    HeegaardState::new(vbs, vec![CornerRole::Top; vbs.n()]).expect("top corners are a bijection")
}

/// Algorithm A: filter all corner assignments for bijectivity.
pub fn enumerate_states_filter(
    vbs: &Vbs,
    budget: StateBudget,
) -> Result<Vec<HeegaardState>, StateError> {
    let n = vbs.n();
    if n > FILTER_MAX_N {
        return Err(StateError::SearchBudgetExceeded {
            budget: FILTER_MAX_N,
        });
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let corners: Vec<CornerRole> = digits.iter().map(|&d| CornerRole::from_index(d)).collect();
        if let Ok(x) = HeegaardState::new(vbs, corners) {
            out.push(x);
            if out.len() > budget.max_states {
                return Err(StateError::SearchBudgetExceeded {
                    budget: budget.max_states,
                });
            }
        }
        // Odometer increment.
        let mut i = 0;
        while i < n && digits[i] == 3 {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        digits[i] += 1;
    }
    out.sort();
    Ok(out)
}

/// An edge of the augmented dual graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum AugEdge {
    /// A dual-graph edge.
    Dual(usize),
    /// The vertical edge of a sector, from its bottom to its top corner.
    Vertical(usize),
}

impl AugEdge {
    pub fn endpoints(self, vbs: &Vbs) -> (usize, usize) {
        match self {
            AugEdge::Dual(e) => (vbs.src(e), vbs.dst(e)),
            AugEdge::Vertical(s) => (vbs.sector(s).bottom, vbs.sector(s).top),
        }
    }
}

/// Sorted set of augmented-graph edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultiLoop {
    pub edges: Vec<AugEdge>,
}

impl MultiLoop {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
    /// In-degree equals out-degree and is at most one at every vertex.
    pub fn is_embedded(&self, vbs: &Vbs) -> bool {
        let mut ins = vec![0usize; vbs.n()];
        let mut outs = vec![0usize; vbs.n()];
        for e in &self.edges {
            let (a, b) = e.endpoints(vbs);
            outs[a] += 1;
            ins[b] += 1;
        }
        ins.iter().zip(&outs).all(|(&i, &o)| i == o && i <= 1)
    }
}

/// Algorithm B: backtracking over embedded multi-loops of the augmented graph.
///
/// Vertices are decided in order; each either has no outgoing loop edge or
/// picks one of its three outgoing augmented edges whose head is still free.
pub fn enumerate_states_multiloop(
    vbs: &Vbs,
    budget: StateBudget,
) -> Result<Vec<HeegaardState>, StateError> {
    let n = vbs.n();
    let options: Vec<Vec<AugEdge>> = (0..n)
        .map(|v| {
            let mut o = vec![AugEdge::Vertical(vbs.sector_with_bottom(v))];
            o.extend(vbs.outgoing(v).iter().map(|&e| AugEdge::Dual(e)));
            o
        })
        .collect();
    struct Search<'a> {
        vbs: &'a Vbs,
        options: Vec<Vec<AugEdge>>,
        in_used: Vec<bool>,
        closed: Vec<bool>,
        chosen: Vec<Option<AugEdge>>,
        out: Vec<Vec<Option<AugEdge>>>,
        budget: usize,
    }
    impl Search<'_> {
        fn go(&mut self, v: usize) -> Result<(), StateError> {
            if v == self.in_used.len() {
                self.out.push(self.chosen.clone());
                if self.out.len() > self.budget {
                    return Err(StateError::SearchBudgetExceeded {
                        budget: self.budget,
                    });
                }
                return Ok(());
            }
            if !self.in_used[v] {
                self.closed[v] = true;
                self.chosen[v] = None;
                self.go(v + 1)?;
                self.closed[v] = false;
            }
            for i in 0..self.options[v].len() {
                let e = self.options[v][i];
                let (_, w) = e.endpoints(self.vbs);
                if self.in_used[w] || self.closed[w] {
                    continue;
                }
                self.in_used[w] = true;
                self.chosen[v] = Some(e);
                self.go(v + 1)?;
                self.in_used[w] = false;
            }
            self.chosen[v] = None;
            Ok(())
        }
    }
    let mut search = Search {
        vbs,
        options,
        in_used: vec![false; n],
        closed: vec![false; n],
        chosen: vec![None; n],
        out: Vec::new(),
        budget: budget.max_states,
    };
    search.go(0)?;
    let mut states = Vec::with_capacity(search.out.len());
    for choice in search.out {
        let corners: Vec<CornerRole> = choice
            .iter()
            .enumerate()
            .map(|(v, c)| match c {
                None => CornerRole::Bottom,
                Some(AugEdge::Vertical(_)) => CornerRole::Top,
                Some(AugEdge::Dual(e)) => {
                    let (s, k) = vbs.bottom_side_of(*e);
                    debug_assert_eq!(s, vbs.sector_with_bottom(v));
                    CornerRole::side(k)
                }
            })
            .collect();
        // Vertex v is the bottom corner of sector v, so corners are indexed by sector.
        states.push(HeegaardState::new(vbs, corners).map_err(|_| StateError::NotBijective)?);
    }
    states.sort();
    Ok(states)
}

/// Production enumeration (algorithm B).
pub fn enumerate_states(vbs: &Vbs, budget: StateBudget) -> Result<Vec<HeegaardState>, StateError> {
    enumerate_states_multiloop(vbs, budget)
}

/// Multi-loop of a state: nothing for a bottom corner, the vertical edge for a
/// top corner, the bottom-side edge towards a chosen side corner.
pub fn multi_loop(vbs: &Vbs, x: &HeegaardState) -> MultiLoop {
    let mut edges: Vec<AugEdge> = x
        .corners
        .iter()
        .enumerate()
        .filter_map(|(s, r)| match r {
            CornerRole::Bottom => None,
            CornerRole::Top => Some(AugEdge::Vertical(s)),
            CornerRole::SideA => Some(AugEdge::Dual(vbs.sector(s).paths[0][0])),
            CornerRole::SideB => Some(AugEdge::Dual(vbs.sector(s).paths[1][0])),
        })
        .collect();
    edges.sort();
    MultiLoop { edges }
}

/// Arrows from the top corner of each sector to its assigned corner, for the
/// sectors not assigned their top corner; empty iff the state is the top state.
pub fn top_anchored_loops(vbs: &Vbs, x: &HeegaardState) -> Vec<(usize, usize)> {
    x.corners
        .iter()
        .enumerate()
        .filter(|(_, &r)| r != CornerRole::Top)
        .map(|(s, &r)| (vbs.sector(s).top, vbs.corner(s, r)))
        .collect()
}

/// Which boundary path replaces a vertical edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrumSide {
    A,
    B,
}

/// Edge vector of the multi-loop of `x` with vertical edges replaced by strums.
pub fn multi_loop_cycle(vbs: &Vbs, x: &HeegaardState, strum: StrumSide) -> Vec<i64> {
    let mut c = vec![0i64; vbs.num_edges()];
    for (s, r) in x.corners.iter().enumerate() {
        let sec = vbs.sector(s);
        let path: &[usize] = match r {
            CornerRole::Bottom => &[],
            CornerRole::Top => match strum {
                StrumSide::A => &sec.paths[0],
                StrumSide::B => &sec.paths[1],
            },
            CornerRole::SideA => &sec.paths[0][..1],
            CornerRole::SideB => &sec.paths[1][..1],
        };
        for &e in path {
            c[e] += 1;
        }
    }
    c
}

/// Spin-c class relative to the bottom state.
pub fn spinc_class_with(
    vbs: &Vbs,
    hm: &HomologyModel,
    x: &HeegaardState,
    strum: StrumSide,
) -> HomologyClass {
    hm.class_of_cycle(&multi_loop_cycle(vbs, x, strum))
        .expect("multi-loops of states are cycles")
}

pub fn spinc_class(vbs: &Vbs, hm: &HomologyModel, x: &HeegaardState) -> HomologyClass {
    spinc_class_with(vbs, hm, x, StrumSide::A)
}

/// Number of side corners plus the sign of the permutation, mod 2.
pub fn nu(x: &HeegaardState) -> u8 {
    let sides = x.corners.iter().filter(|r| r.is_side()).count();
    ((sides + usize::from(x.sign())) % 2) as u8
}

/// `sum over states of (-1)^nu t^{free part of the spin-c class}`.
pub fn statesum_polynomial_with(
    vbs: &Vbs,
    hm: &HomologyModel,
    states: &[HeegaardState],
    nu_of: impl Fn(&HeegaardState) -> u8,
) -> GroupRingElement {
    GroupRingElement::from_terms(
        hm.free_rank(),
        states.iter().map(|x| {
            let sign: i64 = if nu_of(x) == 0 { 1 } else { -1 };
            (spinc_class(vbs, hm, x).free, sign)
        }),
    )
}

pub fn statesum_polynomial(
    vbs: &Vbs,
    hm: &HomologyModel,
    states: &[HeegaardState],
) -> GroupRingElement {
    statesum_polynomial_with(vbs, hm, states, nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::build_homology;
    use crate::vbs::validate;

    fn f8() -> Vbs {
        validate(&serde_json::from_str(include_str!("../../../fixtures/f8.json")).unwrap()).unwrap()
    }

    #[test]
    fn f8_enumerations_agree() {
        let v = f8();
        let a = enumerate_states_filter(&v, StateBudget::default()).unwrap();
        let b = enumerate_states_multiloop(&v, StateBudget::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn extremal_states() {
        let v = f8();
        let bot = bottom_state(&v);
        let top = top_state(&v);
        assert_ne!(bot, top);
        assert!(multi_loop(&v, &bot).is_empty());
        assert_eq!(
            multi_loop(&v, &top).edges,
            (0..v.n()).map(AugEdge::Vertical).collect::<Vec<_>>()
        );
        assert_eq!(nu(&bot), 0);
        assert!(top_anchored_loops(&v, &top).is_empty());
        let hm = build_homology(&v);
        assert!(spinc_class(&v, &hm, &bot).is_zero());
    }

    #[test]
    fn states_are_embedded_multiloops() {
        let v = f8();
        for x in enumerate_states(&v, StateBudget::default()).unwrap() {
            assert!(multi_loop(&v, &x).is_embedded(&v));
        }
    }

    #[test]
    fn budget_is_loud() {
        let v = f8();
        assert!(matches!(
            enumerate_states(&v, StateBudget { max_states: 3 }),
            Err(StateError::SearchBudgetExceeded { .. })
        ));
    }
}
