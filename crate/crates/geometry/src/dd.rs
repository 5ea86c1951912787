//! Facet enumeration by the double description method.
//!
//! The convex hull of points `v_1..v_m` is handled in three stages:
//! reduce to the affine hull, run double description on the homogenized
//! polar cone inside the hull's own coordinates, and lift the resulting
//! facets back. Insertion follows input discovery order and every ray is
//! kept in primitive integer form, so identical input yields bit-identical
//! output.

use num_traits::{One, Signed, Zero};

use crate::affine::{affine_hull, normalize_inequality, AffineHull};
use crate::linalg::{invert, rref};
use crate::rat::{dot, primitive_scale, Rat};

/// An H-representation: `a . x = c` for every equality and `a . x >= c`
/// for every inequality. Inequality normals point inward; each inequality
/// is facet-defining relative to the equalities. Rows are sorted, so the
/// representation is canonical for a given input point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRepresentation {
    pub dimension: usize,
    pub equalities: Vec<(Vec<Rat>, Rat)>,
    pub inequalities: Vec<(Vec<Rat>, Rat)>,
}

impl HRepresentation {
    /// Exact satisfaction test.
    pub fn satisfies(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.dimension, "dimension mismatch");
        self.equalities.iter().all(|(a, c)| dot(a, x) == *c)
            && self.inequalities.iter().all(|(a, c)| dot(a, x) >= *c)
    }

    /// Indices of rows violated by `x`: `(equality_rows, inequality_rows)`.
    pub fn violated_rows(&self, x: &[Rat]) -> (Vec<usize>, Vec<usize>) {
        let eq = self
            .equalities
            .iter()
            .enumerate()
            .filter(|(_, (a, c))| dot(a, x) != *c)
            .map(|(i, _)| i)
            .collect();
        let ineq = self
            .inequalities
            .iter()
            .enumerate()
            .filter(|(_, (a, c))| dot(a, x) < *c)
            .map(|(i, _)| i)
            .collect();
        (eq, ineq)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    vec: Vec<Rat>,
    /// Exact tight set over the constraints processed so far.
    tight: Vec<bool>,
}

/// Enumerates the facets of `conv(points)` and returns the canonical
/// H-representation. Exact arithmetic throughout; never fails.
///
/// Panics if `points` is empty or of mixed dimension.
pub fn facet_enumeration(points: &[Vec<Rat>]) -> HRepresentation {
    assert!(!points.is_empty(), "facet_enumeration needs a point");
    let dimension = points[0].len();
    let mut unique: Vec<Vec<Rat>> = Vec::new();
    for p in points {
        assert_eq!(p.len(), dimension, "points of mixed dimension");
        if !unique.contains(p) {
            unique.push(p.clone());
        }
    }
    let hull = affine_hull(&unique);
    let k = hull.dim();
    if k == 0 {
        return HRepresentation {
            dimension,
            equalities: hull.equalities,
            inequalities: Vec::new(),
        };
    }
    let projected: Vec<Vec<Rat>> = unique.iter().map(|p| project(&hull, p)).collect();
    let rays = polar_extreme_rays(&projected, k);
    let mut inequalities: Vec<(Vec<Rat>, Rat)> = rays
        .iter()
        .map(|ray| lift_inequality(&hull, ray))
        .collect();
    inequalities.sort();
    HRepresentation {
        dimension,
        equalities: hull.equalities,
        inequalities,
    }
}

/// Coordinates of a hull point inside the hull: because the direction
/// basis is in reduced row echelon form, the coefficients are read off
/// at the pivot columns.
fn project(hull: &AffineHull, point: &[Rat]) -> Vec<Rat> {
    hull.directions
        .pivot_cols
        .iter()
        .map(|&col| &point[col] - &hull.base[col])
        .collect()
}

/// A polar ray `(a0, a)` encodes the valid inequality `a . t >= -a0` on
/// projected coordinates; written on original coordinates it is supported
/// on the pivot columns.
fn lift_inequality(hull: &AffineHull, ray: &[Rat]) -> (Vec<Rat>, Rat) {
    let n = hull.base.len();
    let mut normal = vec![Rat::zero(); n];
    let mut offset = -ray[0].clone();
    for (l, &col) in hull.directions.pivot_cols.iter().enumerate() {
        normal[col] = ray[1 + l].clone();
        offset += &ray[1 + l] * &hull.base[col];
    }
    normalize_inequality(&normal, &offset)
}

/// Double description on the polar cone `{ y : (1, q_i) . y >= 0 }` of the
/// homogenized point set. The points must affinely span `R^k`, which makes
/// the cone pointed; its extreme rays are exactly the facets of the hull.
fn polar_extreme_rays(projected: &[Vec<Rat>], k: usize) -> Vec<Vec<Rat>> {
    let m = projected.len();
    let width = k + 1;
    let constraints: Vec<Vec<Rat>> = projected
        .iter()
        .map(|q| {
            let mut row = Vec::with_capacity(width);
            row.push(Rat::one());
            row.extend(q.iter().cloned());
            row
        })
        .collect();

    // Greedy full-rank initial subset in input order.
    let mut chosen: Vec<usize> = Vec::new();
    for (i, row) in constraints.iter().enumerate() {
        let mut trial: Vec<Vec<Rat>> = chosen.iter().map(|&j| constraints[j].clone()).collect();
        trial.push(row.clone());
        if rref(trial, width).rank() > chosen.len() {
            chosen.push(i);
        }
        if chosen.len() == width {
            break;
        }
    }
    assert_eq!(
        chosen.len(),
        width,
        "points must affinely span their hull coordinates"
    );

    let sel: Vec<Vec<Rat>> = chosen.iter().map(|&i| constraints[i].clone()).collect();
    let inverse = invert(&sel).expect("selected rows are independent");
    let mut processed = vec![false; m];
    for &i in &chosen {
        processed[i] = true;
    }
    // Initial simplicial cone: ray j is the j-th column of the inverse,
    // tight exactly at the other selected constraints.
    let mut rays: Vec<Ray> = (0..width)
        .map(|j| {
            let col: Vec<Rat> = (0..width).map(|i| inverse[i][j].clone()).collect();
            let vec = primitive_scale(&col);
            let tight = exact_tight_set(&vec, &constraints, &processed);
            Ray { vec, tight }
        })
        .collect();

    for idx in 0..m {
        if processed[idx] {
            continue;
        }
        let row = &constraints[idx];
        let values: Vec<Rat> = rays.iter().map(|r| dot(&r.vec, row)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        processed[idx] = true;
        if minus.is_empty() {
            for (ray, val) in rays.iter_mut().zip(&values) {
                ray.tight[idx] = val.is_zero();
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (i, ray) in rays.iter().enumerate() {
            if !values[i].is_negative() {
                let mut kept = ray.clone();
                kept.tight[idx] = values[i].is_zero();
                next.push(kept);
            }
        }
        for &p in &plus {
            for &mi in &minus {
                if !adjacent(&rays, p, mi, m) {
                    continue;
                }
                // values[p] * minus_ray - values[mi] * plus_ray: both
                // coefficients positive, new ray tight at the incoming row.
                let combo: Vec<Rat> = rays[mi]
                    .vec
                    .iter()
                    .zip(&rays[p].vec)
                    .map(|(mv, pv)| &values[p] * mv - &values[mi] * pv)
                    .collect();
                let vec = primitive_scale(&combo);
                let tight = exact_tight_set(&vec, &constraints, &processed);
                debug_assert!(tight[idx]);
                next.push(Ray { vec, tight });
            }
        }
        rays = next;
    }

    debug_assert!(rays.iter().all(|r| !r.vec[1..].iter().all(Rat::is_zero)),
        "no facet of a bounded full-dimensional hull degenerates to the homogenizing row");
    rays.into_iter().map(|r| r.vec).collect()
}

fn exact_tight_set(vec: &[Rat], constraints: &[Vec<Rat>], processed: &[bool]) -> Vec<bool> {
    constraints
        .iter()
        .zip(processed)
        .map(|(row, &done)| done && dot(vec, row).is_zero())
        .collect()
}

/// Combinatorial adjacency test: rays `p` and `q` of a pointed cone are
/// adjacent iff no third ray is tight everywhere both of them are.
fn adjacent(rays: &[Ray], p: usize, q: usize, m: usize) -> bool {
    let common: Vec<usize> = (0..m)
        .filter(|&i| rays[p].tight[i] && rays[q].tight[i])
        .collect();
    for (i, other) in rays.iter().enumerate() {
        if i == p || i == q {
            continue;
        }
        if common.iter().all(|&c| other.tight[c]) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn single_point() {
        let h = facet_enumeration(&[v(&[2, 5])]);
        assert_eq!(h.equalities, vec![(v(&[0, 1]), rat(5)), (v(&[1, 0]), rat(2))]);
        assert!(h.inequalities.is_empty());
        assert!(h.satisfies(&v(&[2, 5])));
        assert!(!h.satisfies(&v(&[2, 4])));
    }

    #[test]
    fn segment_in_four_dimensions() {
        let pts = vec![v(&[0, 0, 1, 1]), v(&[0, 1, 0, 1])];
        let h = facet_enumeration(&pts);
        assert_eq!(
            h.equalities,
            vec![
                (v(&[0, 0, 0, 1]), rat(1)),
                (v(&[0, 1, 1, 0]), rat(1)),
                (v(&[1, 0, 0, 0]), rat(0)),
            ]
        );
        assert_eq!(
            h.inequalities,
            vec![
                (v(&[0, -1, 0, 0]), rat(-1)), // x2 <= 1
                (v(&[0, 1, 0, 0]), rat(0)),   // x2 >= 0
            ]
        );
        for p in &pts {
            assert!(h.satisfies(p));
        }
        let mid = vec![rat(0), ratio(1, 2), ratio(1, 2), rat(1)];
        assert!(h.satisfies(&mid));
        assert!(!h.satisfies(&v(&[0, 2, -1, 1])));
    }

    #[test]
    fn unit_triangle() {
        let pts = vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])];
        let h = facet_enumeration(&pts);
        assert!(h.equalities.is_empty());
        assert_eq!(
            h.inequalities,
            vec![
                (v(&[-1, -1]), rat(-1)), // x + y <= 1
                (v(&[0, 1]), rat(0)),    // y >= 0
                (v(&[1, 0]), rat(0)),    // x >= 0
            ]
        );
    }

    #[test]
    fn duplicate_points_are_harmless() {
        let pts = vec![v(&[0, 0]), v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 0])];
        let h = facet_enumeration(&pts);
        assert_eq!(h, facet_enumeration(&[v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]));
    }

    #[test]
    fn square_with_interior_point() {
        let pts = vec![
            v(&[0, 0]),
            v(&[1, 0]),
            v(&[0, 1]),
            v(&[1, 1]),
            vec![ratio(1, 2), ratio(1, 2)],
        ];
        let h = facet_enumeration(&pts);
        assert!(h.equalities.is_empty());
        assert_eq!(h.inequalities.len(), 4);
        for p in &pts {
            assert!(h.satisfies(p));
        }
        assert!(!h.satisfies(&[ratio(3, 2), ratio(1, 2)]));
    }

    #[test]
    fn deterministic_across_runs() {
        let pts = vec![
            vec![ratio(1, 3), rat(0), rat(1)],
            vec![rat(1), ratio(1, 2), rat(0)],
            vec![rat(0), rat(1), ratio(2, 5)],
            vec![rat(1), rat(1), rat(1)],
        ];
        assert_eq!(facet_enumeration(&pts), facet_enumeration(&pts));
    }
}
