//! Exact combinatorics of veering branched surfaces.
//!
//! The pipeline runs from a validated [`Vbs`] to its sutured Heegaard diagram
//! ([`heegaard`]), Heegaard states with spin-c and ν gradings ([`states`]),
//! connecting domains with Lipshitz indices ([`domains`]) and the taut, veering
//! and anti-veering polynomials over the group ring of `H_1 / Torsion`
//! ([`relations`]), with truncated zeta series in [`zeta`].
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod canon;
pub mod domains;
pub mod heegaard;
pub mod homology;
pub mod ingest;
pub mod linalg;
pub mod poly;
pub mod relations;
pub mod states;
pub mod vbs;
pub mod zeta;

pub use homology::{build_homology, HomologyClass, HomologyModel};
pub use poly::GroupRingElement;
pub use vbs::{validate, Color, CornerRole, RawVbs, Vbs};
