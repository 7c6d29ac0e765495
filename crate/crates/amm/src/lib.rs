//! Average mixing matrices of continuous-time quantum walks.
//!
//! The walk on a graph with adjacency matrix `A` has transition matrix
//! `U(t) = exp(itA)` and mixing matrix `M(t) = U(t) ∘ conj(U(t))`. The
//! Cesàro average of `M(t)` exists and is a rational matrix; this crate
//! computes it two independent ways:
//!
//! * exactly over the rationals, as the matrix of the orthogonal
//!   projection onto the commutant of `A` restricted to diagonal
//!   matrices ([`commutant`]);
//! * numerically, as the sum of Schur squares of the spectral
//!   idempotents of `A` ([`spectral`]).
//!
//! On top of those sit executable versions of the structural results
//! about the average mixing matrix ([`analysis`]) and a batch harness
//! that reproduces rank censuses over graph corpora ([`census`]).

pub mod analysis;
pub mod census;
pub mod commutant;
pub mod graph;
pub mod linalg;
pub mod matrix;
pub mod rational;
pub mod spectral;
pub mod verify;

pub use matrix::Matrix;
pub use rational::{Rational, RationalMatrix};

/// Dense float matrix.
pub type FloatMatrix = Matrix<f64>;

/// Dense complex matrix, used for transition matrices.
pub type ComplexMatrix = Matrix<num_complex::Complex64>;
