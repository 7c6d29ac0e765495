//! Exact computation in the commutant of the adjacency matrix: the
//! projection Ψ, average states, the average mixing matrix M̂ as the
//! matrix of the diagonal restriction of Ψ, the zero-diagonal subalgebra
//! and the direct-sum decomposition of the commutant.
//!
//! All of this is rational: the commutant of an integer symmetric matrix
//! is a rational subspace, so Ψ and M̂ are exact even when the
//! eigenvalues are irrational. The spectral idempotents never enter the
//! exact path; they serve only as a floating-point cross-check.

use num_traits::Zero;
use thiserror::Error;

use crate::graph::GraphError;
use crate::linalg::{self, LinalgError};
use crate::matrix::Matrix;
use crate::rational::{rat, Rational, RationalMatrix};

#[derive(Debug, Error)]
pub enum CommutantError {
    #[error("matrix must be square and symmetric")]
    NotSymmetric,
    #[error("matrix must be diagonal")]
    NotDiagonal,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Rational basis of `cmm(A)` with the Gram matrix of its vectorized
/// basis cached for repeated projections.
pub struct CommutantBasis {
    a: RationalMatrix,
    basis: Vec<RationalMatrix>,
    basis_vecs: Vec<Vec<Rational>>,
    gram: RationalMatrix,
}

/// M̂ with its exact rank.
#[derive(Clone, Debug)]
pub struct AverageMixingMatrix {
    pub matrix: RationalMatrix,
    pub rank: usize,
}

/// Time-averaged density matrix of the walk started at one vertex.
#[derive(Clone, Debug)]
pub struct AverageState {
    pub vertex: usize,
    pub matrix: RationalMatrix,
}

/// Assertions of the direct-sum decomposition
/// `cmm(A) = Ψ(D) ⊕ A₀` and the rank identity for M̂.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub dim_commutant: usize,
    pub dim_psi_diag: usize,
    pub dim_zero_diag: usize,
    pub rank_amm: usize,
    pub dims_add_up: bool,
    pub intersection_trivial: bool,
    pub zero_diag_orthogonal_to_states: bool,
    pub rank_matches_psi_diag: bool,
}

impl DecompositionReport {
    pub fn all_ok(&self) -> bool {
        self.dims_add_up
            && self.intersection_trivial
            && self.zero_diag_orthogonal_to_states
            && self.rank_matches_psi_diag
    }
}

/// Operator `vec(M) -> vec(AM - MA)` as `I ⊗ A - A ⊗ I` (valid for
/// symmetric `A`).
fn commutator_operator(a: &RationalMatrix) -> RationalMatrix {
    let n = a.rows();
    let id: RationalMatrix = Matrix::identity(n);
    id.kronecker(a).sub(&a.kronecker(&id))
}

pub fn commutant_basis(a: &RationalMatrix) -> Result<CommutantBasis, CommutantError> {
    if !a.is_symmetric() {
        return Err(CommutantError::NotSymmetric);
    }
    let n = a.rows();
    let basis_vecs = linalg::nullspace(&commutator_operator(a));
    let basis: Vec<RationalMatrix> = basis_vecs
        .iter()
        .map(|v| Matrix::from_vectorized(n, v))
        .collect();
    let k = basis_vecs.len();
    let gram = Matrix::from_fn(k, k, |i, j| linalg::dot(&basis_vecs[i], &basis_vecs[j]));
    Ok(CommutantBasis {
        a: a.clone(),
        basis,
        basis_vecs,
        gram,
    })
}

impl CommutantBasis {
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn adjacency(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn basis(&self) -> &[RationalMatrix] {
        &self.basis
    }

    /// Orthogonal projection Ψ onto `cmm(A)` under the trace inner
    /// product, exact via the normal equations on the cached Gram matrix.
    pub fn project(&self, m: &RationalMatrix) -> Result<RationalMatrix, CommutantError> {
        assert_eq!((m.rows(), m.cols()), (self.n(), self.n()));
        let coeffs = self.projection_coefficients(m)?;
        let n = self.n();
        let mut out: RationalMatrix = Matrix::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        Ok(out)
    }

    fn projection_coefficients(&self, m: &RationalMatrix) -> Result<Vec<Rational>, CommutantError> {
        let v = m.vectorize();
        let k = self.dim();
        let rhs = Matrix::from_fn(k, 1, |i, _| linalg::dot(&self.basis_vecs[i], &v));
        let sol = linalg::solve(&self.gram, &rhs).ok_or(LinalgError::DependentBasis)?;
        Ok((0..k).map(|i| sol.get(i, 0).clone()).collect())
    }

    pub fn average_state(&self, vertex: usize) -> Result<AverageState, CommutantError> {
        let n = self.n();
        if vertex >= n {
            return Err(GraphError::VertexOutOfRange { v: vertex, n }.into());
        }
        let d = vertex_state(n, vertex);
        let matrix = self.project(&d)?;
        Ok(AverageState { vertex, matrix })
    }

    /// All average states in one multi-RHS solve. `vec(D_b)` has a single
    /// nonzero entry, so the normal-equation right-hand sides are plain
    /// basis lookups.
    pub fn average_states_all(&self) -> Result<Vec<RationalMatrix>, CommutantError> {
        let n = self.n();
        let k = self.dim();
        if k == 0 {
            return Ok(vec![Matrix::zeros(n, n); n]);
        }
        let rhs = Matrix::from_fn(k, n, |i, b| self.basis_vecs[i][b * n + b].clone());
        let coeffs = linalg::solve(&self.gram, &rhs).ok_or(LinalgError::DependentBasis)?;
        Ok((0..n)
            .map(|b| {
                let mut out: RationalMatrix = Matrix::zeros(n, n);
                for (i, basis_matrix) in self.basis.iter().enumerate() {
                    let c = coeffs.get(i, b);
                    if !c.is_zero() {
                        out = out.add(&basis_matrix.scale(c));
                    }
                }
                out
            })
            .collect())
    }

    /// M̂ entrywise: `M̂[a, b] = <D_a, Ψ(D_b)> = Ψ(D_b)[a, a]`.
    pub fn average_mixing_exact(&self) -> Result<AverageMixingMatrix, CommutantError> {
        let n = self.n();
        let states = self.average_states_all()?;
        let matrix = Matrix::from_fn(n, n, |a, b| states[b].get(a, a).clone());
        let rank = linalg::rank(&matrix);
        Ok(AverageMixingMatrix { matrix, rank })
    }

    /// Gram matrix `<Ψ(D_a), Ψ(D_b)>` of the average states.
    pub fn gram_of_average_states(&self) -> Result<RationalMatrix, CommutantError> {
        let n = self.n();
        let states = self.average_states_all()?;
        Ok(Matrix::from_fn(n, n, |a, b| {
            states[a].trace_inner_product(&states[b])
        }))
    }

    /// Exact basis of `A₀ = {N in cmm(A) : diag(N) = 0}`, computed in one
    /// elimination by appending the diagonal constraints to the
    /// commutator system.
    pub fn zero_diagonal_subalgebra(&self) -> Vec<RationalMatrix> {
        let n = self.n();
        let op = commutator_operator(&self.a);
        let stacked = Matrix::from_fn(op.rows() + n, n * n, |i, j| {
            if i < op.rows() {
                op.get(i, j).clone()
            } else {
                // Row for diagonal entry i - op.rows(): vec index d*n + d.
                let d = i - op.rows();
                if j == d * n + d {
                    rat(1, 1)
                } else {
                    Rational::zero()
                }
            }
        });
        linalg::nullspace(&stacked)
            .iter()
            .map(|v| Matrix::from_vectorized(n, v))
            .collect()
    }

    /// Dimension of `Ψ(D)`, the span of the average states.
    pub fn dim_psi_diag(&self) -> Result<usize, CommutantError> {
        let rows = self
            .average_states_all()?
            .iter()
            .map(|s| s.vectorize())
            .collect();
        Ok(linalg::rank(&Matrix::from_rows(rows)))
    }

    pub fn decomposition_check(&self) -> Result<DecompositionReport, CommutantError> {
        let dim_commutant = self.dim();
        let dim_psi_diag = self.dim_psi_diag()?;
        let zero_diag = self.zero_diagonal_subalgebra();
        let dim_zero_diag = zero_diag.len();
        let amm = self.average_mixing_exact()?;
        let states = self.average_states_all()?;

        // Trivial intersection: the joint span has full combined rank.
        let mut joint: Vec<Vec<Rational>> = states.iter().map(|s| s.vectorize()).collect();
        for m in &zero_diag {
            joint.push(m.vectorize());
        }
        let joint_rank = linalg::rank(&Matrix::from_rows(joint));
        let intersection_trivial = joint_rank == dim_psi_diag + dim_zero_diag;

        let mut orthogonal = true;
        for m in &zero_diag {
            for state in &states {
                if !m.trace_inner_product(state).is_zero() {
                    orthogonal = false;
                }
            }
        }

        Ok(DecompositionReport {
            dim_commutant,
            dim_psi_diag,
            dim_zero_diag,
            rank_amm: amm.rank,
            dims_add_up: dim_psi_diag + dim_zero_diag == dim_commutant,
            intersection_trivial,
            zero_diag_orthogonal_to_states: orthogonal,
            rank_matches_psi_diag: amm.rank == dim_psi_diag,
        })
    }

    /// For diagonal `D`: whether `Ψ(D) = 0`, asserting the kernel lemma
    /// `Ψ(D) = 0  iff  diag(Ψ(D)) = 0`.
    pub fn kernel_diag_check(&self, d: &RationalMatrix) -> Result<bool, CommutantError> {
        if !d.is_square() || d.iter().any(|(i, j, v)| i != j && !v.is_zero()) {
            return Err(CommutantError::NotDiagonal);
        }
        let psi = self.project(d)?;
        let diag_zero = (0..self.n()).all(|i| psi.get(i, i).is_zero());
        let all_zero = psi.is_zero();
        assert_eq!(
            all_zero, diag_zero,
            "kernel lemma violated: zero diagonal without zero projection"
        );
        Ok(all_zero)
    }
}

/// Pure state `D_a = e_a e_a^T`.
pub fn vertex_state(n: usize, a: usize) -> RationalMatrix {
    Matrix::from_fn(n, n, |i, j| {
        if i == a && j == a {
            rat(1, 1)
        } else {
            Rational::zero()
        }
    })
}

impl AverageMixingMatrix {
    /// Symmetry, exact double stochasticity, entry range and exact PSD.
    pub fn check_invariants(&self) -> bool {
        let m = &self.matrix;
        let n = m.rows();
        if !m.is_symmetric() {
            return false;
        }
        let one = rat(1, 1);
        for (_, _, v) in m.iter() {
            if v < &Rational::zero() || v > &one {
                return false;
            }
        }
        for i in 0..n {
            let row: Rational = (0..n).map(|j| m.get(i, j).clone()).sum();
            if row != one {
                return false;
            }
        }
        linalg::is_psd(m)
    }

    pub fn trace(&self) -> Rational {
        self.matrix.trace()
    }
}

impl AverageState {
    pub fn check_invariants(&self, a: &RationalMatrix) -> bool {
        let m = &self.matrix;
        m.is_symmetric()
            && m.trace() == rat(1, 1)
            && linalg::is_psd(m)
            && a.mul(m) == m.mul(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{adjacency_matrix, Graph};

    fn cb_of(g: &Graph) -> CommutantBasis {
        commutant_basis(&adjacency_matrix(g)).unwrap()
    }

    #[test]
    fn commutant_dimensions() {
        // K2: multiplicities (1,1) so dim 2; K3: (1,2) so dim 5; P3: three
        // simple eigenvalues so dim 3.
        assert_eq!(cb_of(&Graph::complete(2)).dim(), 2);
        assert_eq!(cb_of(&Graph::complete(3)).dim(), 5);
        assert_eq!(cb_of(&Graph::path(3)).dim(), 3);
    }

    #[test]
    fn commutator_operator_nullity_for_k3() {
        let a = adjacency_matrix(&Graph::complete(3));
        let op = commutator_operator(&a);
        assert_eq!(op.rows(), 9);
        assert_eq!(linalg::rank(&op), 4); // nullity 5
    }

    #[test]
    fn basis_elements_commute_with_a() {
        for g in [Graph::complete(3), Graph::path(4), Graph::cycle(5)] {
            let cb = cb_of(&g);
            let a = cb.adjacency().clone();
            for b in cb.basis() {
                assert_eq!(a.mul(b), b.mul(&a));
            }
        }
    }

    #[test]
    fn projection_fixes_commutant_members() {
        let cb = cb_of(&Graph::path(4));
        let a = cb.adjacency().clone();
        assert_eq!(cb.project(&a).unwrap(), a);
        let id: RationalMatrix = Matrix::identity(4);
        assert_eq!(cb.project(&id).unwrap(), id);
    }

    #[test]
    fn k2_average_state_is_half_identity() {
        let cb = cb_of(&Graph::complete(2));
        let s = cb.average_state(0).unwrap();
        let expect: RationalMatrix = Matrix::identity(2).scale(&rat(1, 2));
        assert_eq!(s.matrix, expect);
        assert!(s.check_invariants(cb.adjacency()));
    }

    #[test]
    fn k1_average_state() {
        let cb = cb_of(&Graph::empty(1));
        assert_eq!(cb.average_state(0).unwrap().matrix, Matrix::identity(1));
    }

    #[test]
    fn k3_average_state_invariants() {
        let cb = cb_of(&Graph::complete(3));
        let s = cb.average_state(0).unwrap();
        assert!(s.check_invariants(cb.adjacency()));
        assert_eq!(s.matrix.trace(), rat(1, 1));
    }

    #[test]
    fn vertex_out_of_range() {
        let cb = cb_of(&Graph::complete(2));
        assert!(cb.average_state(2).is_err());
    }

    #[test]
    fn k2_average_mixing() {
        let amm = cb_of(&Graph::complete(2)).average_mixing_exact().unwrap();
        assert_eq!(amm.matrix, Matrix::ones(2, 2).scale(&rat(1, 2)));
        assert_eq!(amm.rank, 1);
        assert!(amm.check_invariants());
    }

    #[test]
    fn p3_average_mixing_matches_hand_computation() {
        let amm = cb_of(&Graph::path(3)).average_mixing_exact().unwrap();
        let expect = Matrix::from_rows(vec![
            vec![rat(3, 8), rat(1, 4), rat(3, 8)],
            vec![rat(1, 4), rat(1, 2), rat(1, 4)],
            vec![rat(3, 8), rat(1, 4), rat(3, 8)],
        ]);
        assert_eq!(amm.matrix, expect);
        assert_eq!(amm.rank, 2);
    }

    #[test]
    fn gram_identity_on_small_graphs() {
        for g in [
            Graph::empty(1),
            Graph::complete(2),
            Graph::complete(3),
            Graph::path(4),
            Graph::cycle(4),
        ] {
            let cb = cb_of(&g);
            let amm = cb.average_mixing_exact().unwrap();
            assert_eq!(cb.gram_of_average_states().unwrap(), amm.matrix);
        }
    }

    #[test]
    fn zero_diagonal_subalgebra_dimensions() {
        let k2 = cb_of(&Graph::complete(2));
        let z = k2.zero_diagonal_subalgebra();
        assert_eq!(z.len(), 1);
        // Spanned by A.
        let a = k2.adjacency();
        let span_rank = linalg::rank(&Matrix::from_rows(vec![
            z[0].vectorize(),
            a.vectorize(),
        ]));
        assert_eq!(span_rank, 1);

        assert_eq!(cb_of(&Graph::path(3)).zero_diagonal_subalgebra().len(), 1);
        let c4 = cb_of(&Graph::cycle(4));
        assert_eq!(c4.dim(), 6);
        let z4 = c4.zero_diagonal_subalgebra();
        assert!(z4.len() >= 2);
        assert_eq!(c4.dim_psi_diag().unwrap() + z4.len(), 6);
    }

    #[test]
    fn decomposition_reports() {
        for (g, dims) in [
            (Graph::complete(2), (2, 1, 1)),
            (Graph::complete(3), (5, 3, 2)),
            (Graph::path(3), (3, 2, 1)),
        ] {
            let report = cb_of(&g).decomposition_check().unwrap();
            assert!(report.all_ok(), "decomposition failed: {report:?}");
            assert_eq!(
                (
                    report.dim_commutant,
                    report.dim_psi_diag,
                    report.dim_zero_diag
                ),
                dims
            );
        }
    }

    #[test]
    fn kernel_diag_check_cases() {
        let cb = cb_of(&Graph::path(3));
        let zero: RationalMatrix = Matrix::zeros(3, 3);
        assert!(cb.kernel_diag_check(&zero).unwrap());
        let id: RationalMatrix = Matrix::identity(3);
        assert!(!cb.kernel_diag_check(&id).unwrap());
        // diag (1, 0, -1) spans the kernel of M̂(P3).
        let mut d: RationalMatrix = Matrix::zeros(3, 3);
        d.set(0, 0, rat(1, 1));
        d.set(2, 2, rat(-1, 1));
        assert!(cb.kernel_diag_check(&d).unwrap());
        // Non-diagonal input is rejected.
        let a = adjacency_matrix(&Graph::path(3));
        assert!(matches!(
            cb.kernel_diag_check(&a),
            Err(CommutantError::NotDiagonal)
        ));
    }
}
