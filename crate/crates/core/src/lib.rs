//! Crystallizations of generalized lens spaces, built and machine-verified.
//!
//! The construction: for integers `p >= 2`, `n >= 1` and `q_1, ..., q_n` coprime
//! to `p`, the sphere `S^{2n+1}` carries a `2p(n+1)`-vertex triangulation `Σ`,
//! the join of `n+1` cycles of length `2p`. Rotating each coordinate circle by
//! two steps (scaled by `q_j`) generates a free `Z_p` action on `Σ`; the quotient
//! is a simplicial cell complex with `2(n+1)` vertices — a crystallization of the
//! lens space `L(p, q_1, ..., q_n)`.
//!
//! Every step of that sentence is checked by code in this crate:
//!
//! - [`poset`] — finite simplicial posets (simplicial cell complexes) and their
//!   combinatorial queries: validation, f-vectors, purity, derived subdivision.
//! - [`builders`] — the cycle complexes, joins, and the sphere triangulation `Σ`.
//! - [`action`] — poset automorphisms, orbits, the good-action test, quotients.
//! - [`gem`] — dual edge-colored graphs, crystallization checks, a closed-form
//!   lens gem generator, and colored-graph isomorphism for cross-validation.
//! - [`homology`] — integer simplicial homology via Smith normal form; the
//!   topological oracle that the quotients really are lens spaces.
//! - [`geometry`] — floating-point verification that the simplicial rotation and
//!   the ambient sphere rotation agree under radial projection.

pub mod action;
pub mod builders;
pub mod error;
pub mod gem;
pub mod geometry;
pub mod homology;
pub mod poset;

pub use error::{Error, Result};
pub use poset::{CellId, FVector, SimplicialPoset};
