//! Shared test oracles, implemented independently of the library's own
//! algorithms so the two routes can disagree when one is wrong.

use std::collections::BTreeSet;

use coherentia_core::logic::{LogicSpec, Table};

/// Brute-force quotient closure over raw function tables: the set of all
/// truth vectors reachable from the letter projections under pointwise
/// connective application. No formulas, no sizes, no representative
/// bookkeeping — just saturation of a vector set.
///
/// Valuation order matches the library convention (last letter fastest),
/// so vectors are directly comparable.
pub fn brute_force_closure(spec: &LogicSpec, letter_count: usize) -> BTreeSet<Vec<usize>> {
    let n = spec.tv_count();
    let total = n.pow(letter_count as u32);
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    for j in 0..letter_count {
        let stride = n.pow((letter_count - 1 - j) as u32);
        set.insert((0..total).map(|i| (i / stride) % n).collect());
    }
    loop {
        let mut fresh: Vec<Vec<usize>> = Vec::new();
        for conn in &spec.connectives {
            match &conn.table {
                Table::Unary(t) => {
                    for v in &set {
                        let image: Vec<usize> = v.iter().map(|&a| t[a]).collect();
                        if !set.contains(&image) {
                            fresh.push(image);
                        }
                    }
                }
                Table::Binary(t) => {
                    for a in &set {
                        for b in &set {
                            let image: Vec<usize> =
                                a.iter().zip(b).map(|(&x, &y)| t[x][y]).collect();
                            if !set.contains(&image) {
                                fresh.push(image);
                            }
                        }
                    }
                }
            }
        }
        if fresh.is_empty() {
            return set;
        }
        set.extend(fresh);
    }
}
