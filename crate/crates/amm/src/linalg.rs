//! Elimination-based linear algebra over an exact field.
//!
//! Everything here is tolerance-free: with `T = Rational` the ranks,
//! nullspaces and projections are exact. The routines are generic so the
//! same code paths can be exercised with `f64` in tests, but the exact
//! instantiation is the one the rest of the crate depends on.

use num_traits::{Num, Signed};
use thiserror::Error;

use crate::matrix::Matrix;

/// Scalar usable by the elimination routines: an ordered field.
pub trait FieldScalar: Clone + PartialOrd + Num + Signed {}

impl<T: Clone + PartialOrd + Num + Signed> FieldScalar for T {}

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("basis and vector lengths disagree")]
    LengthMismatch,
}

/// Reduced row-echelon form together with pivot bookkeeping.
pub struct Rref<T> {
    pub matrix: Matrix<T>,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

pub fn rref<T: FieldScalar>(m: &Matrix<T>) -> Rref<T> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // First nonzero entry at or below row r; exact arithmetic needs no
        // magnitude-based pivoting.
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a.get(r, j).clone();
                a.set(r, j, a.get(p, j).clone());
                a.set(p, j, tmp);
            }
        }
        let inv = T::one() / a.get(r, c).clone();
        for j in c..cols {
            a.set(r, j, a.get(r, j).clone() * inv.clone());
        }
        for i in 0..rows {
            if i != r && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for j in c..cols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    Rref {
        matrix: a,
        rank: pivot_cols.len(),
        pivot_cols,
    }
}

pub fn rank<T: FieldScalar>(m: &Matrix<T>) -> usize {
    rref(m).rank
}

/// Exact basis of `{v : Mv = 0}`; `cols - rank` vectors.
pub fn nullspace<T: FieldScalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let Rref {
        matrix: r,
        pivot_cols,
        rank,
    } = rref(m);
    let cols = m.cols();
    let mut basis = Vec::with_capacity(cols - rank);
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![T::zero(); cols];
        v[free] = T::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = T::zero() - r.get(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve `A X = B` for square nonsingular `A`; `None` when singular.
pub fn solve<T: FieldScalar>(a: &Matrix<T>, b: &Matrix<T>) -> Option<Matrix<T>> {
    assert!(a.is_square());
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    let aug = Matrix::from_fn(n, n + b.cols(), |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            b.get(i, j - n).clone()
        }
    });
    let red = rref(&aug);
    if red.rank != n || red.pivot_cols.iter().any(|&c| c >= n) {
        return None;
    }
    Some(Matrix::from_fn(n, b.cols(), |i, j| {
        red.matrix.get(i, n + j).clone()
    }))
}

/// Orthogonal projection of `v` onto `span(basis)` under the dot product,
/// via the normal equations `(B^T B) x = B^T v`, all exact.
pub fn project_onto_span<T: FieldScalar>(
    basis: &[Vec<T>],
    v: &[T],
) -> Result<Vec<T>, LinalgError> {
    if basis.is_empty() {
        return Ok(vec![T::zero(); v.len()]);
    }
    let dim = v.len();
    if basis.iter().any(|b| b.len() != dim) {
        return Err(LinalgError::LengthMismatch);
    }
    let k = basis.len();
    let gram = Matrix::from_fn(k, k, |i, j| dot(&basis[i], &basis[j]));
    let rhs = Matrix::from_fn(k, 1, |i, _| dot(&basis[i], v));
    let coeffs = solve(&gram, &rhs).ok_or(LinalgError::DependentBasis)?;
    let mut out = vec![T::zero(); dim];
    for (i, b) in basis.iter().enumerate() {
        let c = coeffs.get(i, 0);
        for (o, bv) in out.iter_mut().zip(b) {
            *o = o.clone() + c.clone() * bv.clone();
        }
    }
    Ok(out)
}

pub fn dot<T: FieldScalar>(u: &[T], v: &[T]) -> T {
    assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Positive-semidefiniteness of a symmetric matrix by diagonally pivoted
/// symmetric elimination. A negative pivot, or a zero diagonal entry with
/// a nonzero residual row, certifies indefiniteness; otherwise every pivot
/// is nonnegative and the matrix is PSD.
pub fn is_psd<T: FieldScalar>(m: &Matrix<T>) -> bool {
    assert!(m.is_symmetric(), "PSD check requires a symmetric matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a.get(i, i).is_negative()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| a.get(i, i).is_positive()) else {
            // All remaining diagonal entries are zero: PSD iff the whole
            // remaining block vanishes.
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| a.get(i, j).is_zero()));
        };
        let p = active.remove(pos);
        let piv = a.get(p, p).clone();
        for &i in &active {
            let fi = a.get(i, p).clone() / piv.clone();
            for &j in &active {
                let v = a.get(i, j).clone() - fi.clone() * a.get(p, j).clone();
                a.set(i, j, v);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational, RationalMatrix};
    use num_traits::Zero;

    fn rm(rows: Vec<Vec<(i64, i64)>>) -> RationalMatrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|(p, q)| rat(p, q)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_ranks() {
        assert_eq!(rank(&rm(vec![vec![(0, 1), (1, 1)], vec![(1, 1), (0, 1)]])), 2);
        assert_eq!(rank(&rm(vec![vec![(1, 1), (1, 1)], vec![(1, 1), (1, 1)]])), 1);
    }

    #[test]
    fn rref_rank_of_p3_average_mixing() {
        // Rows 0 and 2 coincide, so the rank drops to 2.
        let m = rm(vec![
            vec![(3, 8), (1, 4), (3, 8)],
            vec![(1, 4), (1, 2), (1, 4)],
            vec![(3, 8), (1, 4), (3, 8)],
        ]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        let id: RationalMatrix = Matrix::identity(3);
        assert!(nullspace(&id).is_empty());
    }

    #[test]
    fn nullspace_of_row_sum() {
        let m = rm(vec![vec![(1, 1), (1, 1)]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        // Spanned by (1, -1): check Mv = 0 and 1-dimensionality.
        assert_eq!(
            ns[0][0].clone() + ns[0][1].clone(),
            Rational::from_integer(0.into())
        );
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = rm(vec![
            vec![(1, 1), (2, 1), (3, 1)],
            vec![(2, 1), (4, 1), (6, 1)],
        ]);
        for v in nullspace(&m) {
            for i in 0..m.rows() {
                let row: Vec<Rational> = m.row(i).to_vec();
                assert!(dot(&row, &v).is_zero());
            }
        }
        assert_eq!(nullspace(&m).len(), 2);
    }

    #[test]
    fn projection_onto_axis() {
        let basis = vec![vec![rat(1, 1), rat(0, 1)]];
        let v = vec![rat(3, 1), rat(4, 1)];
        assert_eq!(
            project_onto_span(&basis, &v).unwrap(),
            vec![rat(3, 1), rat(0, 1)]
        );
    }

    #[test]
    fn projection_onto_full_space_is_identity() {
        let basis = vec![
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(1, 1), rat(-1, 1)],
        ];
        let v = vec![rat(5, 3), rat(-7, 11)];
        assert_eq!(project_onto_span(&basis, &v).unwrap(), v);
    }

    #[test]
    fn projection_rejects_dependent_basis() {
        let basis = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
        ];
        assert!(matches!(
            project_onto_span(&basis, &[rat(1, 1), rat(0, 1)]),
            Err(LinalgError::DependentBasis)
        ));
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&rm(vec![vec![(2, 1), (1, 1)], vec![(1, 1), (2, 1)]])));
        assert!(is_psd(&rm(vec![vec![(1, 1), (1, 1)], vec![(1, 1), (1, 1)]])));
        assert!(!is_psd(&rm(vec![vec![(0, 1), (1, 1)], vec![(1, 1), (0, 1)]])));
        assert!(!is_psd(&rm(vec![
            vec![(1, 1), (2, 1)],
            vec![(2, 1), (1, 1)]
        ])));
        let zero: RationalMatrix = Matrix::zeros(3, 3);
        assert!(is_psd(&zero));
    }
}
