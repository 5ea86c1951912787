//! Property tests for the spec-level invariants that are quantified over
//! random inputs: parser round-trips, the coherent/incoherent dichotomy
//! with verified certificates on both sides, and closure of the axiom
//! pool under convex mixtures.

use coherentia_core::coherence::{
    check_coherence, extract_dutch_book, verify_dutch_book, CoherenceVerdict,
};
use coherentia_core::formula::{parse_formula, render_formula, Formula};
use coherentia_core::logic::builtin_logic;
use coherentia_core::semantics::{cognitive_matrix, eval_formula, quotient_algebra, DEFAULT_CAP};
use coherentia_core::{generate_axioms, BeliefAssignment, Rat};
use coherentia_geometry::rat::{rat, ratio};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn formula_strategy(connectives: &'static [(&'static str, u8)]) -> impl Strategy<Value = Formula> {
    let letter = prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::letter);
    letter.prop_recursive(5, 64, 2, move |inner| {
        prop::sample::select(connectives.to_vec()).prop_flat_map(move |(name, arity)| {
            let inner = inner.clone();
            if arity == 1 {
                inner.prop_map(move |f| Formula::unary(name, f)).boxed()
            } else {
                (inner.clone(), inner)
                    .prop_map(move |(a, b)| Formula::binary(name, a, b))
                    .boxed()
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn classical_render_parse_round_trip(
        f in formula_strategy(&[("~", 1), ("&", 2), ("|", 2), ("->", 2)]),
    ) {
        let spec = builtin_logic("classical").unwrap();
        let rendered = render_formula(&f, &spec);
        let parsed = parse_formula(&rendered, &spec).unwrap();
        prop_assert_eq!(parsed, f, "through {}", rendered);
    }

    #[test]
    fn kleene_render_parse_round_trip(
        f in formula_strategy(&[("~", 1), ("&", 2), ("|", 2)]),
    ) {
        let spec = builtin_logic("kleene").unwrap();
        let rendered = render_formula(&f, &spec);
        let parsed = parse_formula(&rendered, &spec).unwrap();
        prop_assert_eq!(parsed, f, "through {}", rendered);
    }

    #[test]
    fn kleene_all_half_valuation_is_fixed(
        f in formula_strategy(&[("~", 1), ("&", 2), ("|", 2)]),
    ) {
        // The no-tautology property: everything evaluates to 1/2 at the
        // all-1/2 valuation.
        let spec = builtin_logic("kleene").unwrap();
        let mid = coherentia_core::semantics::Valuation {
            assignment: [("p", 1usize), ("q", 1), ("r", 1)]
                .into_iter()
                .map(|(l, v)| (l.to_owned(), v))
                .collect(),
        };
        prop_assert_eq!(eval_formula(&mid, &f, &spec).unwrap(), 1);
    }
}

fn weights_strategy(n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=5, n)
}

fn mixture(rows: &[Vec<Rat>], weights: &[u8]) -> Vec<Rat> {
    let mut ws: Vec<Rat> = weights.iter().map(|&w| rat(w as i64)).collect();
    if ws.iter().all(Rat::is_zero) {
        ws[0] = rat(1);
    }
    let total: Rat = ws.iter().sum();
    let mut mix = vec![Rat::zero(); rows[0].len()];
    for (w, row) in ws.iter().zip(rows) {
        for (m, v) in mix.iter_mut().zip(row) {
            *m += &(w / &total) * v;
        }
    }
    mix
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Convex mixtures of cognitive rows satisfy every generated axiom
    /// exactly, and are judged coherent with an exactly-reverifying
    /// mixture certificate.
    #[test]
    fn mixtures_satisfy_every_axiom_and_cohere(weights in weights_strategy(3)) {
        let spec = builtin_logic("symmetric").unwrap();
        let set = generate_axioms(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
        let mix = mixture(&set.matrix.rows, &weights);
        for axiom in set.axioms() {
            let lookup = |f: &Formula| -> Option<Rat> {
                set.quotient
                    .class_of(f, &spec)
                    .ok()
                    .map(|c| mix[c].clone())
            };
            let ineq = axiom.formal_inequality(&set.quotient);
            prop_assert!(ineq.satisfied_by(&lookup).unwrap());
        }
        let entries: Vec<(Formula, Rat)> = set
            .quotient
            .classes()
            .iter()
            .zip(&mix)
            .map(|(c, v)| (c.representative.clone(), v.clone()))
            .collect();
        let assignment = BeliefAssignment::new(entries).unwrap();
        let outcome = check_coherence(&spec, &assignment).unwrap();
        prop_assert!(outcome.is_coherent());
    }

    /// Pushing a mixture strictly outside along a facet normal makes it
    /// incoherent, violates some generated axiom, and yields a book that
    /// loses everywhere.
    #[test]
    fn outward_perturbations_are_incoherent_with_verified_books(
        weights in weights_strategy(3),
        facet_choice in 0usize..8,
        step in 1i64..=4,
    ) {
        let spec = builtin_logic("symmetric").unwrap();
        let set = generate_axioms(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
        let mix = mixture(&set.matrix.rows, &weights);
        // Walk against one H-row: equality normals leave the hull in
        // either direction, facet normals against their orientation.
        let rows: Vec<(Vec<Rat>, Rat)> = set
            .hrep
            .equalities
            .iter()
            .chain(&set.hrep.inequalities)
            .cloned()
            .collect();
        let (normal, _) = &rows[facet_choice % rows.len()];
        let delta = ratio(step, 11);
        let candidate: Vec<Rat> = mix
            .iter()
            .zip(normal)
            .map(|(m, a)| m - &(&delta * a))
            .collect();
        // Keep only probes that stay inside the unit box (belief values)
        // and genuinely left the hull.
        prop_assume!(candidate.iter().all(|v| !v.is_negative() && *v <= rat(1)));
        prop_assume!(!set.hrep.satisfies(&candidate));

        let violated = set.axioms().any(|axiom| {
            let lookup = |f: &Formula| -> Option<Rat> {
                set.quotient
                    .class_of(f, &spec)
                    .ok()
                    .map(|c| candidate[c].clone())
            };
            let ineq = axiom.formal_inequality(&set.quotient);
            !ineq.satisfied_by(&lookup).unwrap()
        });
        prop_assert!(violated, "outside the hull yet no axiom violated");

        let entries: Vec<(Formula, Rat)> = set
            .quotient
            .classes()
            .iter()
            .zip(&candidate)
            .map(|(c, v)| (c.representative.clone(), v.clone()))
            .collect();
        let assignment = BeliefAssignment::new(entries).unwrap();
        let outcome = check_coherence(&spec, &assignment).unwrap();
        match &outcome.verdict {
            CoherenceVerdict::Incoherent { .. } => {
                let book = extract_dutch_book(&assignment, &outcome).unwrap();
                let worst = verify_dutch_book(&spec, &assignment, &book).unwrap();
                prop_assert!(worst.is_negative());
            }
            CoherenceVerdict::Coherent { .. } => {
                prop_assert!(false, "outside the hull yet judged coherent");
            }
        }
    }

    /// Coherent assignments admit no winning stake vector: random stakes
    /// never produce a guaranteed loss.
    #[test]
    fn no_book_against_coherent_assignments(
        weights in weights_strategy(2),
        stakes in prop::collection::vec(-4i64..=4, 4),
    ) {
        let spec = builtin_logic("classical").unwrap();
        let set = generate_axioms(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
        let mix = mixture(&set.matrix.rows, &weights);
        let entries: Vec<(Formula, Rat)> = set
            .quotient
            .classes()
            .iter()
            .zip(&mix)
            .map(|(c, v)| (c.representative.clone(), v.clone()))
            .collect();
        let assignment = BeliefAssignment::new(entries.clone()).unwrap();
        let book = coherentia_core::DutchBook {
            bets: entries
                .iter()
                .zip(&stakes)
                .map(|((f, _), &s)| (f.clone(), rat(s)))
                .collect(),
            guaranteed_loss_bound: rat(0),
        };
        let worst = verify_dutch_book(&spec, &assignment, &book).unwrap();
        prop_assert!(!worst.is_negative(), "stakes {stakes:?} beat a coherent B");
    }
}

#[test]
fn lambda_is_exact_not_just_close() {
    // One spot check that the mixture certificate is exact arithmetic:
    // a mixture with awkward denominators reproduces bit-for-bit.
    let spec = builtin_logic("lukasiewicz-2").unwrap();
    let q = quotient_algebra(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
    let rows = cognitive_matrix(&spec, &q).rows;
    let lambda = [ratio(1, 7), ratio(2, 7), ratio(4, 7)];
    let mix: Vec<Rat> = (0..rows[0].len())
        .map(|j| {
            lambda
                .iter()
                .zip(&rows)
                .map(|(l, row)| l * &row[j])
                .sum::<Rat>()
        })
        .collect();
    let entries: Vec<(Formula, Rat)> = q
        .classes()
        .iter()
        .zip(&mix)
        .map(|(c, v)| (c.representative.clone(), v.clone()))
        .collect();
    let assignment = BeliefAssignment::new(entries).unwrap();
    let outcome = check_coherence(&spec, &assignment).unwrap();
    match &outcome.verdict {
        CoherenceVerdict::Coherent { lambda: found } => {
            let total: Rat = found.iter().sum();
            assert!(total.is_one());
            for (j, value) in mix.iter().enumerate() {
                let recombined: Rat = found.iter().zip(&rows).map(|(l, row)| l * &row[j]).sum();
                assert_eq!(recombined, *value);
            }
        }
        other => panic!("expected coherent, got {other:?}"),
    }
}
