//! Exact rational convex geometry for desk-scale polytopes.
//!
//! Provides the three operations the coherence machinery needs:
//!
//! - [`affine::affine_hull`]: base point, direction basis and equality
//!   system of a point set;
//! - [`dd::facet_enumeration`]: V-representation to canonical
//!   H-representation by the double description method;
//! - [`membership::hull_membership`]: convex-hull membership with convex
//!   coefficients or a separating hyperplane, both re-verified.
//!
//! Everything is computed over arbitrary-precision rationals; there are no
//! tolerances and identical input produces bit-identical output.

pub mod affine;
pub mod dd;
pub mod linalg;
pub mod membership;
pub mod rat;
pub mod simplex;

pub use affine::{affine_hull, AffineHull};
pub use dd::{facet_enumeration, HRepresentation};
pub use membership::{hull_membership, MembershipResult, Separator};
pub use rat::Rat;
pub use simplex::{maximize_free, maximize_nonneg, LpOutcome};
