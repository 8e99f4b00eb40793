//! Brane tilings on the two-torus and the toric geometry they encode.
//!
//! A brane tiling is a bipartite graph embedded in a 2-torus so that every
//! complementary face is a disc. This crate takes such a tiling (as JSON), or
//! constructs one from a finite abelian subgroup of SL₃(ℂ), and computes the
//! combinatorial and lattice data attached to it:
//!
//! - the dual quiver with potential ([`quiver`]), including cyclic
//!   derivatives of the potential;
//! - perfect matchings and the toric diagram of the singularity
//!   ([`matchings`]);
//! - the weight lattice Λ of the quiver, the degree map to the root lattice
//!   B, and the rank-3 kernel lattice M with its distinguished element ω̄
//!   ([`lattice`]);
//! - an exact R-charge linear program certifying consistency or geometric
//!   consistency ([`consistency`]);
//! - θ-stability of matchings and of unions of matchings, with cosupport
//!   classification of the cokernel ([`stability`]);
//! - the induced triangulation of the toric diagram — the fan of the crepant
//!   resolution — with full geometric/algebraic cross-validation and SVG
//!   rendering ([`fan`]);
//! - tilings of abelian orbifolds ℂ³/G built directly from the group data
//!   ([`mckay`]).
//!
//! # Exactness and determinism
//!
//! All arithmetic is exact: lattice computations use arbitrary-precision
//! integers, the R-charge program runs a rational simplex, and the plane
//! geometry of the toric diagram uses exact integer predicates. No floating
//! point is used anywhere.
//!
//! Every routine is deterministic: matrices are reduced with a fixed pivot
//! rule, matchings are enumerated in a canonical order, and all output
//! collections are sorted. Two runs on the same input produce byte-identical
//! results.
//!
//! # Entry points
//!
//! - [`tiling::parse_tiling`] — parse and fully validate a tiling document.
//! - [`quiver::dualize`] — the dual quiver with potential.
//! - [`lattice::build_lattices`] — Λ, B, M, ω̄ and path weights.
//! - [`matchings::enumerate_matchings`] / [`matchings::diagram_of_center`].
//! - [`consistency::consistency_class`] — exact R-charge certificates.
//! - [`stability::is_theta_stable`] — min-cut stability test.
//! - [`fan::build_triangulation`] — the triangulated toric diagram.
//! - [`mckay::build_mckay_tiling`] — tilings for ℂ³/G, G abelian.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod consistency;
pub mod error;
pub mod fan;
pub mod intlin;
pub mod lattice;
pub mod matchings;
pub mod mckay;
pub mod quiver;
pub mod simplex;
pub mod stability;
pub mod svg;
pub mod tiling;

pub use error::{Error, Result};
