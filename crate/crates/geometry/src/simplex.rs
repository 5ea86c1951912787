//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! The core solves `min c·z  s.t.  M z = d, z >= 0` on a dense tableau.
//! Exact arithmetic removes every numerical-stability concern; Bland's
//! pivoting rule removes cycling. Phase 1 doubles as a feasibility test
//! whose dual multipliers provide a Farkas certificate of infeasibility.

use num_traits::{One, Signed, Zero};

use crate::rat::{dot, Rat};

/// Result of an optimization run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, solution: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Result of a pure feasibility run over nonnegative variables.
///
/// On infeasibility the dual vector `y` satisfies `y · M_j <= 0` for
/// every column `j` of `M` and `y · d > 0`: no nonnegative combination
/// of the columns can reach `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityOutcome {
    Feasible { solution: Vec<Rat> },
    Infeasible { dual: Vec<Rat> },
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    n_struct: usize,
    sigma: Vec<i8>,
}

impl Tableau {
    /// Sets up the phase-1 tableau: artificial basis `sigma_i * e_i`
    /// chosen so every starting basic value is `|d_i| >= 0`.
    fn new(matrix: &[Vec<Rat>], rhs: &[Rat]) -> Self {
        let m = matrix.len();
        let n = matrix.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(m);
        let mut new_rhs = Vec::with_capacity(m);
        let mut sigma = Vec::with_capacity(m);
        for (i, row) in matrix.iter().enumerate() {
            debug_assert_eq!(row.len(), n);
            let flip = rhs[i].is_negative();
            sigma.push(if flip { -1 } else { 1 });
            let mut r: Vec<Rat> = if flip {
                row.iter().map(|v| -v.clone()).collect()
            } else {
                row.clone()
            };
            // Artificial block: identity.
            for k in 0..m {
                r.push(if k == i { Rat::one() } else { Rat::zero() });
            }
            rows.push(r);
            new_rhs.push(if flip { -rhs[i].clone() } else { rhs[i].clone() });
        }
        Tableau {
            rows,
            rhs: new_rhs,
            basis: (n..n + m).collect(),
            n_struct: n,
            sigma,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        let inv = Rat::one() / piv;
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        self.rhs[row] *= &inv;
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..self.rows[r].len() {
                let sub = &self.rows[row][c] * &factor;
                self.rows[r][c] -= sub;
            }
            let sub = &self.rhs[row] * &factor;
            self.rhs[r] -= sub;
        }
        self.basis[row] = col;
    }

    /// Reduced cost of a column under the given cost vector.
    fn reduced_cost(&self, costs: &[Rat], col: usize) -> Rat {
        let mut rc = costs[col].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if !cb.is_zero() && !row[col].is_zero() {
                rc -= cb * &row[col];
            }
        }
        rc
    }

    fn objective(&self, costs: &[Rat]) -> Rat {
        let mut z = Rat::zero();
        for (i, b) in self.basis.iter().enumerate() {
            if !costs[*b].is_zero() {
                z += &costs[*b] * &self.rhs[i];
            }
        }
        z
    }

    /// Runs simplex to optimality under `costs`, entering only columns
    /// in `0..enter_limit` (Bland's rule both for entering and leaving).
    /// Returns false when unbounded.
    fn optimize(&mut self, costs: &[Rat], enter_limit: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..enter_limit {
                if self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(costs, j).is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][col];
                let better = match &leaving {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn phase1_costs(&self) -> Vec<Rat> {
        let total = self.n_struct + self.rows.len();
        let mut c = vec![Rat::zero(); total];
        for v in c.iter_mut().skip(self.n_struct) {
            *v = Rat::one();
        }
        c
    }

    /// Dual multipliers at the current (phase-1) tableau, in terms of the
    /// original rows: `y_i = sigma_i * sum over basic artificials of the
    /// tableau entry at artificial column i`.
    fn phase1_dual(&self) -> Vec<Rat> {
        let m = self.rows.len();
        let mut y = vec![Rat::zero(); m];
        for (i, yi) in y.iter_mut().enumerate() {
            let col = self.n_struct + i;
            let mut acc = Rat::zero();
            for (r, b) in self.basis.iter().enumerate() {
                if *b >= self.n_struct {
                    acc += &self.rows[r][col];
                }
            }
            if self.sigma[i] < 0 {
                acc = -acc;
            }
            *yi = acc;
        }
        y
    }

    /// After a successful phase 1, pivots basic artificials out and
    /// deletes rows that are redundant, then drops artificial columns.
    fn purge_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.n_struct {
                i += 1;
                continue;
            }
            debug_assert!(self.rhs[i].is_zero());
            let pivot_col = (0..self.n_struct)
                .find(|j| !self.basis.contains(j) && !self.rows[i][*j].is_zero());
            match pivot_col {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
        for row in &mut self.rows {
            row.truncate(self.n_struct);
        }
    }

    fn structural_solution(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.n_struct];
        for (i, b) in self.basis.iter().enumerate() {
            if *b < self.n_struct {
                x[*b] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// Decides whether `M z = d` has a solution with `z >= 0`. On success
/// returns one such solution; on failure a Farkas dual (see
/// [`FeasibilityOutcome`]).
pub fn feasibility_nonneg(matrix: &[Vec<Rat>], rhs: &[Rat]) -> FeasibilityOutcome {
    assert_eq!(matrix.len(), rhs.len(), "row/rhs count mismatch");
    let mut t = Tableau::new(matrix, rhs);
    let costs = t.phase1_costs();
    let ok = t.optimize(&costs, t.n_struct);
    debug_assert!(ok, "phase 1 is bounded below by zero");
    if t.objective(&costs).is_zero() {
        FeasibilityOutcome::Feasible {
            solution: t.structural_solution(),
        }
    } else {
        FeasibilityOutcome::Infeasible {
            dual: t.phase1_dual(),
        }
    }
}

/// Maximizes `f · z` subject to `M z = d, z >= 0`.
pub fn maximize_nonneg(objective: &[Rat], matrix: &[Vec<Rat>], rhs: &[Rat]) -> LpOutcome {
    assert_eq!(matrix.len(), rhs.len(), "row/rhs count mismatch");
    let mut t = Tableau::new(matrix, rhs);
    let p1 = t.phase1_costs();
    let ok = t.optimize(&p1, t.n_struct);
    debug_assert!(ok);
    if !t.objective(&p1).is_zero() {
        return LpOutcome::Infeasible;
    }
    t.purge_artificials();
    // Minimize the negated objective.
    let costs: Vec<Rat> = objective.iter().map(|v| -v.clone()).collect();
    if !t.optimize(&costs, t.n_struct) {
        return LpOutcome::Unbounded;
    }
    let solution = t.structural_solution();
    let value = dot(objective, &solution);
    LpOutcome::Optimal { value, solution }
}

/// Maximizes `f · x` over free variables subject to `E x = g` (equalities)
/// and `A x >= b` (inequalities). Internally splits `x` into positive and
/// negative parts and adds one surplus variable per inequality.
pub fn maximize_free(
    objective: &[Rat],
    equalities: &[(Vec<Rat>, Rat)],
    inequalities: &[(Vec<Rat>, Rat)],
) -> LpOutcome {
    let n = objective.len();
    let n_surplus = inequalities.len();
    let width = 2 * n + n_surplus;
    let mut matrix = Vec::with_capacity(equalities.len() + inequalities.len());
    let mut rhs = Vec::with_capacity(matrix.capacity());
    let mut push_row = |coeffs: &[Rat], surplus: Option<usize>, b: &Rat| {
        debug_assert_eq!(coeffs.len(), n);
        let mut row = Vec::with_capacity(width);
        row.extend(coeffs.iter().cloned());
        row.extend(coeffs.iter().map(|v| -v.clone()));
        for k in 0..n_surplus {
            row.push(if surplus == Some(k) {
                -Rat::one()
            } else {
                Rat::zero()
            });
        }
        matrix.push(row);
        rhs.push(b.clone());
    };
    for (coeffs, b) in equalities {
        push_row(coeffs, None, b);
    }
    for (k, (coeffs, b)) in inequalities.iter().enumerate() {
        push_row(coeffs, Some(k), b);
    }
    let mut split_obj = Vec::with_capacity(width);
    split_obj.extend(objective.iter().cloned());
    split_obj.extend(objective.iter().map(|v| -v.clone()));
    split_obj.extend(std::iter::repeat(Rat::zero()).take(n_surplus));
    match maximize_nonneg(&split_obj, &matrix, &rhs) {
        LpOutcome::Optimal { value, solution } => {
            let x: Vec<Rat> = (0..n)
                .map(|j| &solution[j] - &solution[n + j])
                .collect();
            LpOutcome::Optimal { value, solution: x }
        }
        other => other,
    }
}
