//! Cross-oracle agreement between the two independent hull routes.
//!
//! `facet_enumeration` (double description) and `hull_membership`
//! (phase-1 simplex) never share code beyond rational arithmetic, so on
//! random small instances a point must satisfy the H-representation if
//! and only if the membership LP accepts it.

use coherentia_geometry::rat::{dot, rat, ratio, Rat};
use coherentia_geometry::{facet_enumeration, hull_membership, MembershipResult};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn points_strategy() -> impl Strategy<Value = Vec<Vec<Rat>>> {
    (1usize..=4).prop_flat_map(|dim| {
        prop::collection::vec(prop::collection::vec(rat_strategy(), dim), 1..=8)
    })
}

fn candidate_points(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let dim = points[0].len();
    let mut cands: Vec<Vec<Rat>> = points.to_vec();
    // Centroid: always a member.
    let m = rat(points.len() as i64);
    let centroid: Vec<Rat> = (0..dim)
        .map(|c| points.iter().map(|p| &p[c]).sum::<Rat>() / &m)
        .collect();
    cands.push(centroid.clone());
    // A midpoint of the first and last point.
    let half = ratio(1, 2);
    cands.push(
        points[0]
            .iter()
            .zip(&points[points.len() - 1])
            .map(|(a, b)| (a + b) * &half)
            .collect(),
    );
    // Pushed-out variants that usually leave the hull.
    cands.push(centroid.iter().map(|v| v + rat(3)).collect());
    cands.push(points[0].iter().map(|v| v - ratio(7, 3)).collect());
    cands.push(vec![ratio(1, 3); dim]);
    cands
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hrep_and_membership_agree(points in points_strategy()) {
        let h = facet_enumeration(&points);
        for p in &points {
            prop_assert!(h.satisfies(p), "generator must satisfy its own facets");
        }
        for cand in candidate_points(&points) {
            let by_h = h.satisfies(&cand);
            let by_lp = hull_membership(&points, &cand).is_member();
            prop_assert_eq!(by_h, by_lp, "routes disagree on {:?}", cand);
        }
    }

    #[test]
    fn certificates_reverify(points in points_strategy()) {
        for cand in candidate_points(&points) {
            match hull_membership(&points, &cand) {
                MembershipResult::Member { coefficients } => {
                    let mut total = Rat::zero();
                    let mut mix = vec![Rat::zero(); cand.len()];
                    for (l, p) in coefficients.iter().zip(&points) {
                        prop_assert!(!l.is_negative());
                        total += l;
                        for (m, x) in mix.iter_mut().zip(p) {
                            *m += l * x;
                        }
                    }
                    prop_assert!(total.is_one());
                    prop_assert_eq!(mix, cand);
                }
                MembershipResult::NotMember { separator } => {
                    for p in &points {
                        prop_assert!(dot(&separator.normal, p) >= separator.offset);
                    }
                    prop_assert!(dot(&separator.normal, &cand) < separator.offset);
                }
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic(points in points_strategy()) {
        prop_assert_eq!(facet_enumeration(&points), facet_enumeration(&points));
    }
}

#[test]
fn facets_are_tight_somewhere() {
    // Every reported inequality must touch the hull: drop it and some
    // generating point mixture would otherwise still violate nothing.
    let points = vec![
        vec![rat(0), rat(0)],
        vec![rat(2), rat(0)],
        vec![rat(0), rat(2)],
        vec![rat(1), rat(1)],
    ];
    let h = facet_enumeration(&points);
    for (normal, offset) in &h.inequalities {
        assert!(
            points.iter().any(|p| dot(normal, p) == *offset),
            "inequality {normal:?} >= {offset} is not tight at any vertex"
        );
    }
}
