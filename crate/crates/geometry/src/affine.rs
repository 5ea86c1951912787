//! Affine hull of a finite rational point set.
//!
//! The coherence polytopes downstream are almost never full-dimensional,
//! so facet enumeration first splits off the equality system computed
//! here and works inside the hull's own coordinates.

use num_traits::Zero;

use crate::linalg::{nullspace_basis, rref, Rref};
use crate::rat::{dot, primitive_scale, Rat};

/// The affine hull of a point set: a base point, an RREF basis of the
/// direction span, and the equality system cutting out exactly that
/// affine subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHull {
    pub base: Vec<Rat>,
    pub directions: Rref,
    /// Rows `(a, c)` meaning `a . x = c`; normals are primitive integer
    /// vectors with positive leading entry, sorted lexicographically.
    pub equalities: Vec<(Vec<Rat>, Rat)>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.directions.rank()
    }
}

/// Computes the affine hull. The direction basis spans `{ v - v0 }`; the
/// equality system annihilates exactly that span, so the affine dimension
/// is the size of the direction basis.
///
/// Panics if `points` is empty or the dimensions disagree.
pub fn affine_hull(points: &[Vec<Rat>]) -> AffineHull {
    assert!(!points.is_empty(), "affine_hull needs at least one point");
    let base = points[0].clone();
    let width = base.len();
    let dirs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| {
            assert_eq!(p.len(), width, "points of mixed dimension");
            p.iter().zip(&base).map(|(a, b)| a - b).collect()
        })
        .collect();
    let directions = rref(dirs, width);
    let mut equalities: Vec<(Vec<Rat>, Rat)> = nullspace_basis(&directions)
        .into_iter()
        .map(|normal| normalize_equality(&normal, &dot(&normal, &base)))
        .collect();
    equalities.sort();
    AffineHull {
        base,
        directions,
        equalities,
    }
}

/// Scales so the normal is a primitive integer vector with positive
/// leading entry; the offset scales along and may stay fractional.
pub fn normalize_equality(normal: &[Rat], offset: &Rat) -> (Vec<Rat>, Rat) {
    let (n, c) = normalize_inequality(normal, offset);
    if let Some(first) = n.iter().find(|v| !v.is_zero()) {
        if first < &Rat::zero() {
            return (n.iter().map(|v| -v.clone()).collect(), -c);
        }
    }
    (n, c)
}

/// Scales by a positive factor so the normal is a primitive integer
/// vector; orientation is preserved.
pub fn normalize_inequality(normal: &[Rat], offset: &Rat) -> (Vec<Rat>, Rat) {
    let scaled = primitive_scale(normal);
    let factor = match normal.iter().position(|v| !v.is_zero()) {
        Some(i) => &scaled[i] / &normal[i],
        None => return (normal.to_vec(), offset.clone()),
    };
    (scaled, offset * &factor)
}
