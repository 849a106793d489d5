//! Exact symbolic computation for Weyl algebras of quiver representation
//! varieties.
//!
//! The crate works over the field of rational functions in finitely many
//! commuting time parameters, with arbitrary-precision rational
//! coefficients. On top of that it builds:
//!
//! - [`quiver`]: simply-laced quivers with an opposite-arrow involution,
//!   node partitions, dimension vectors, cycle enumeration and canonical
//!   forms for anchored cycles;
//! - [`projective`]: embeddings of the parts into the rational projective
//!   line, the rational `SL2` right action on them, symplectic weights and
//!   the rescaling cocycles attached to the action;
//! - [`weyl`]: the commutative coordinate ring, the Weyl algebra with
//!   normal-ordered arithmetic, the word-length filtration and its graded
//!   `h`-layer with the semiclassical limit;
//! - [`potentials`]: classical and quantum traces of (anchored) cycles and
//!   the anchor-averaging quantisation of potentials;
//! - [`symmetry`]: the pullback action on the commutative and quantum
//!   algebras;
//! - [`moment`]: classical and quantum comoment maps for the base-change
//!   group of the quiver;
//! - [`reduction`]: degree-truncated two-sided ideal membership with
//!   certificates, invariance tests, and constant-shift solving;
//! - [`systems`]: time-dependent Hamiltonian systems over the quiver, the
//!   built-in Schlesinger system on star quivers, and the flatness checker.
//!
//! All arithmetic is exact; every identity check is an equality of
//! canonical forms, never a tolerance comparison.

pub mod context;
pub mod moment;
pub mod par;
pub mod potentials;
pub mod projective;
pub mod quiver;
pub mod reduction;
pub mod scalars;
pub mod symmetry;
pub mod systems;
pub mod weyl;

pub use context::{Fault, QuiverContext};
pub use scalars::{Parameters, Rational, Scalar};
