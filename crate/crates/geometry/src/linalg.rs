//! Small dense exact linear algebra: reduced row echelon form, null
//! spaces, and square solves. Deterministic pivot choice (first nonzero
//! in column order) keeps every downstream artifact reproducible.

use num_traits::{One, Zero};

use crate::rat::Rat;

/// A matrix in reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rows: Vec<Vec<Rat>>,
    pub pivot_cols: Vec<usize>,
    pub width: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Brings `rows` into reduced row echelon form, dropping zero rows.
pub fn rref(mut rows: Vec<Vec<Rat>>, width: usize) -> Rref {
    debug_assert!(rows.iter().all(|r| r.len() == width));
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = Rat::one() / rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..width {
                    let sub = &rows[rank][c] * &factor;
                    rows[r][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Rref {
        rows,
        pivot_cols,
        width,
    }
}

/// Basis of `{ x : R x = 0 }` from an RREF, via the standard free-column
/// construction: one basis vector per free column, in column order.
pub fn nullspace_basis(r: &Rref) -> Vec<Vec<Rat>> {
    let mut basis = Vec::new();
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; r.width];
        for (row_idx, &col) in r.pivot_cols.iter().enumerate() {
            v[col] = Some(row_idx);
        }
        v
    };
    for free_col in 0..r.width {
        if pivot_set[free_col].is_some() {
            continue;
        }
        let mut vec = vec![Rat::zero(); r.width];
        vec[free_col] = Rat::one();
        for (row_idx, &pivot_col) in r.pivot_cols.iter().enumerate() {
            vec[pivot_col] = -r.rows[row_idx][free_col].clone();
        }
        basis.push(vec);
    }
    basis
}

/// Solves the square system `M x = rhs` exactly. Returns `None` when `M`
/// is singular.
pub fn solve_square(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n));
    debug_assert_eq!(rhs.len(), n);
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let reduced = rref(std::mem::take(&mut aug), n + 1);
    if reduced.rank() != n || reduced.pivot_cols.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row_idx, &col) in reduced.pivot_cols.iter().enumerate() {
        x[col] = reduced.rows[row_idx][n].clone();
    }
    Some(x)
}

/// Inverts a nonsingular square matrix; columns are solved one by one.
pub fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(solve_square(m, &e)?);
    }
    // cols[j] is the j-th column of the inverse; transpose into rows.
    let mut inv = vec![vec![Rat::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            inv[i][j] = v.clone();
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_simple() {
        let r = rref(vec![v(&[2, 4]), v(&[1, 2])], 2);
        assert_eq!(r.rank(), 1);
        assert_eq!(r.rows[0], vec![rat(1), rat(2)]);
        assert_eq!(r.pivot_cols, vec![0]);
    }

    #[test]
    fn nullspace_of_line() {
        // Single row [0, 1, -1, 0]: nullspace is spanned by e0, e2+e1, e3.
        let r = rref(vec![v(&[0, 1, -1, 0])], 4);
        let basis = nullspace_basis(&r);
        assert_eq!(basis.len(), 3);
        assert_eq!(basis[0], v(&[1, 0, 0, 0]));
        assert_eq!(basis[1], v(&[0, 1, 1, 0]));
        assert_eq!(basis[2], v(&[0, 0, 0, 1]));
    }

    #[test]
    fn solve_and_invert() {
        let m = vec![v(&[1, 1]), v(&[1, -1])];
        let x = solve_square(&m, &v(&[3, 1])).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0], vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(inv[1], vec![ratio(1, 2), ratio(-1, 2)]);
        assert!(solve_square(&vec![v(&[1, 2]), v(&[2, 4])], &v(&[1, 1])).is_none());
    }
}
