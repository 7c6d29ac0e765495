//! Floating-point spectral decomposition of the adjacency matrix and the
//! walk quantities derived from it: U(t), M(t), the numeric average
//! mixing matrix and the finite-horizon time average.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::Matrix;

/// Default residual tolerance for the decomposition invariants.
pub const TOL_SPEC: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("input matrix is not symmetric")]
    NotSymmetric,
    #[error("decomposition invariant violated: {0} residual {1:e}")]
    InvariantViolated(&'static str, f64),
}

/// Distinct eigenvalues of a symmetric matrix with their multiplicities
/// and orthogonal eigenprojections, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub thetas: Vec<f64>,
    pub mults: Vec<usize>,
    pub idempotents: Vec<Matrix<f64>>,
    /// Set when some eigenvalue gap fell in `(gap_tol, 10*gap_tol)`, i.e.
    /// the clustering was ambiguous at the requested tolerance.
    pub ambiguous_gap: bool,
    matrix: Matrix<f64>,
}

#[derive(Clone, Debug)]
pub struct MixingSnapshot {
    pub t: f64,
    pub matrix: Matrix<f64>,
}

pub fn default_gap_tol(a: &Matrix<f64>) -> f64 {
    1e-8 * f64::max(1.0, inf_norm(a))
}

/// Entrywise max-abs norm.
pub fn inf_norm(m: &Matrix<f64>) -> f64 {
    m.iter().map(|(_, _, v)| v.abs()).fold(0.0, f64::max)
}

pub fn decompose(a: &Matrix<f64>, gap_tol: f64) -> Result<SpectralDecomposition, SpectralError> {
    let n = a.rows();
    if !a.is_square() || (0..n).any(|i| (0..i).any(|j| (a.get(i, j) - a.get(j, i)).abs() > 1e-12))
    {
        return Err(SpectralError::NotSymmetric);
    }
    let da = DMatrix::from_fn(n, n, |i, j| *a.get(i, j));
    let eig = SymmetricEigen::new(da);
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            (
                eig.eigenvalues[k],
                eig.eigenvectors.column(k).iter().copied().collect(),
            )
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    let mut thetas = Vec::new();
    let mut mults = Vec::new();
    let mut idempotents = Vec::new();
    let mut ambiguous_gap = false;
    let mut k = 0;
    while k < n {
        let mut end = k + 1;
        while end < n && pairs[end - 1].0 - pairs[end].0 <= gap_tol {
            end += 1;
        }
        if end < n {
            let gap = pairs[end - 1].0 - pairs[end].0;
            if gap <= 10.0 * gap_tol {
                ambiguous_gap = true;
            }
        }
        let cluster = &pairs[k..end];
        let theta = cluster.iter().map(|p| p.0).sum::<f64>() / cluster.len() as f64;
        let mut e = Matrix::zeros(n, n);
        for (_, v) in cluster {
            for i in 0..n {
                for j in 0..n {
                    e.set(i, j, e.get(i, j) + v[i] * v[j]);
                }
            }
        }
        thetas.push(theta);
        mults.push(cluster.len());
        idempotents.push(e);
        k = end;
    }
    let sd = SpectralDecomposition {
        thetas,
        mults,
        idempotents,
        ambiguous_gap,
        matrix: a.clone(),
    };
    sd.validate(TOL_SPEC)?;
    Ok(sd)
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_distinct(&self) -> usize {
        self.thetas.len()
    }

    pub fn simple_spectrum(&self) -> bool {
        self.mults.iter().all(|&m| m == 1)
    }

    /// Residual checks: completeness, orthogonality, idempotency and the
    /// spectral reconstruction of the input matrix.
    pub fn validate(&self, tol: f64) -> Result<(), SpectralError> {
        let n = self.n();
        let viol = SpectralError::InvariantViolated;
        let mut sum: Matrix<f64> = Matrix::zeros(n, n);
        let mut recon: Matrix<f64> = Matrix::zeros(n, n);
        for (e, &th) in self.idempotents.iter().zip(&self.thetas) {
            sum = sum.add(e);
            recon = recon.add(&e.scale(&th));
        }
        let r = inf_norm(&sum.sub(&Matrix::identity(n)));
        if r > tol {
            return Err(viol("sum of idempotents vs identity", r));
        }
        let r = inf_norm(&recon.sub(&self.matrix));
        if r > tol {
            return Err(viol("spectral reconstruction of A", r));
        }
        for (r_idx, e) in self.idempotents.iter().enumerate() {
            let rr = inf_norm(&e.mul(e).sub(e));
            if rr > tol {
                return Err(viol("idempotency of eigenprojection", rr));
            }
            for f in &self.idempotents[r_idx + 1..] {
                let rr = inf_norm(&e.mul(f));
                if rr > tol {
                    return Err(viol("orthogonality of eigenprojections", rr));
                }
            }
        }
        for (e, &m) in self.idempotents.iter().zip(&self.mults) {
            if (e.trace() - m as f64).abs() > 1e-6 {
                return Err(viol("trace of eigenprojection vs multiplicity", e.trace()));
            }
        }
        Ok(())
    }
}

/// U(t) = sum_r exp(i t theta_r) E_r.
pub fn transition_matrix(sd: &SpectralDecomposition, t: f64) -> Matrix<Complex64> {
    let n = sd.n();
    let mut u: Matrix<Complex64> = Matrix::zeros(n, n);
    for (e, &th) in sd.idempotents.iter().zip(&sd.thetas) {
        let phase = Complex64::new(0.0, t * th).exp();
        for (i, j, v) in e.iter() {
            u.set(i, j, u.get(i, j) + phase * v);
        }
    }
    u
}

/// M(t) = U(t) ∘ conj(U(t)); entrywise |U(t)|², doubly stochastic.
pub fn mixing_snapshot(sd: &SpectralDecomposition, t: f64) -> MixingSnapshot {
    let u = transition_matrix(sd, t);
    MixingSnapshot {
        t,
        matrix: u.map(|z| z.norm_sqr()),
    }
}

/// The Cesàro limit of M(t): the sum of the Schur squares of the
/// eigenprojections.
pub fn avg_mixing_numeric(sd: &SpectralDecomposition) -> Matrix<f64> {
    let n = sd.n();
    let mut m: Matrix<f64> = Matrix::zeros(n, n);
    for e in &sd.idempotents {
        m = m.add(&e.schur(e));
    }
    m
}

/// Finite-horizon average (1/T)∫₀ᵀ M(t) dt in closed form: the diagonal
/// pairs contribute E_r∘², and each off-diagonal pair (r, s) contributes
/// the factor sin(TΔ)/(TΔ) with Δ = θ_r − θ_s.
pub fn time_averaged_mixing(sd: &SpectralDecomposition, horizon: f64) -> Matrix<f64> {
    assert!(horizon > 0.0);
    let mut m = avg_mixing_numeric(sd);
    for r in 0..sd.num_distinct() {
        for s in r + 1..sd.num_distinct() {
            let delta = sd.thetas[r] - sd.thetas[s];
            let factor = 2.0 * (horizon * delta).sin() / (horizon * delta);
            let cross = sd.idempotents[r].schur(&sd.idempotents[s]);
            m = m.add(&cross.scale(&factor));
        }
    }
    m
}

/// Explicit constant C with ‖M̄(T) − M̂‖∞ ≤ C/T for all T > 0.
pub fn convergence_constant(sd: &SpectralDecomposition) -> f64 {
    let mut c = 0.0;
    for r in 0..sd.num_distinct() {
        for s in 0..sd.num_distinct() {
            if r != s {
                let delta = (sd.thetas[r] - sd.thetas[s]).abs();
                c += 2.0 * inf_norm(&sd.idempotents[r].schur(&sd.idempotents[s])) / delta;
            }
        }
    }
    c
}

/// Numerical rank: singular values above `threshold`.
pub fn numeric_rank(m: &Matrix<f64>, threshold: f64) -> usize {
    let d = DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j));
    d.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > threshold)
        .count()
}

/// Float eigenvalues of a symmetric matrix, descending.
pub fn symmetric_eigenvalues(m: &Matrix<f64>) -> Vec<f64> {
    let d = DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j));
    let mut ev: Vec<f64> = SymmetricEigen::new(d).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}
