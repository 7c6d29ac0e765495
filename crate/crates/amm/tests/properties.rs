//! Property tests for the structural invariants.

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use amm::commutant::commutant_basis;
use amm::graph::{adjacency_matrix, parse_graph6, write_graph6, Graph};
use amm::linalg::{self, dot};
use amm::matrix::Matrix;
use amm::rational::{rat, Rational, RationalMatrix};
use amm::spectral::{decompose, default_gap_tol, mixing_snapshot};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let nbits = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), nbits).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        g.add_edge(i, j);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec(arb_rational(), rows * cols).prop_map(move |vals| {
        let mut it = vals.into_iter();
        Matrix::from_fn(rows, cols, |_, _| it.next().unwrap())
    })
}

proptest! {
    #[test]
    fn graph6_round_trip(g in arb_graph(40)) {
        let bytes = write_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(&bytes).unwrap(), g);
    }

    #[test]
    fn rank_equals_transpose_rank(m in arb_matrix(4, 5)) {
        prop_assert_eq!(linalg::rank(&m), linalg::rank(&m.transpose()));
    }

    #[test]
    fn nullspace_is_orthogonal_to_rows(m in arb_matrix(3, 5)) {
        let ns = linalg::nullspace(&m);
        prop_assert_eq!(ns.len(), 5 - linalg::rank(&m));
        for v in &ns {
            for i in 0..m.rows() {
                prop_assert!(dot(m.row(i), v).is_zero());
            }
        }
    }

    #[test]
    fn projection_idempotent_and_self_adjoint(
        basis in proptest::collection::vec(proptest::collection::vec(arb_rational(), 4), 1..=2),
        u in proptest::collection::vec(arb_rational(), 4),
        v in proptest::collection::vec(arb_rational(), 4),
    ) {
        // Skip dependent bases; independence is a precondition.
        let as_matrix = Matrix::from_rows(basis.clone());
        prop_assume!(linalg::rank(&as_matrix) == basis.len());
        let pu = linalg::project_onto_span(&basis, &u).unwrap();
        let ppu = linalg::project_onto_span(&basis, &pu).unwrap();
        prop_assert_eq!(&ppu, &pu);
        let pv = linalg::project_onto_span(&basis, &v).unwrap();
        prop_assert_eq!(dot(&pu, &v), dot(&u, &pv));
        // Residual orthogonal to the span.
        let residual: Vec<Rational> = u.iter().zip(&pu).map(|(a, b)| a - b).collect();
        for b in &basis {
            prop_assert!(dot(&residual, b).is_zero());
        }
    }

    #[test]
    fn rationals_stay_reduced_through_arithmetic(a in arb_rational(), b in arb_rational()) {
        for x in [&a + &b, &a * &b, &a - &b] {
            let g = num_integer::gcd(x.numer().abs(), x.denom().abs());
            prop_assert_eq!(g, num_bigint::BigInt::from(1));
            prop_assert!(x.denom().is_positive());
        }
    }

    #[test]
    fn psi_projection_properties_on_random_graphs(
        g in arb_graph(5),
        entries in proptest::collection::vec(arb_rational(), 25),
    ) {
        let n = g.n();
        let cb = commutant_basis(&adjacency_matrix(&g)).unwrap();
        let mut it = entries.into_iter();
        let m: RationalMatrix = Matrix::from_fn(n, n, |_, _| it.next().unwrap());
        let pm = cb.project(&m).unwrap();
        prop_assert_eq!(cb.project(&pm).unwrap(), pm.clone());
        let a = cb.adjacency();
        prop_assert_eq!(a.mul(&pm), pm.mul(a));
    }

    #[test]
    fn mixing_matrix_doubly_stochastic(g in arb_graph(7), t in 0.0..50.0f64) {
        let a = amm::graph::adjacency_matrix_f64(&g);
        let sd = decompose(&a, default_gap_tol(&a)).unwrap();
        let m = mixing_snapshot(&sd, t).matrix;
        let n = g.n();
        for (i, j, v) in m.iter() {
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(v));
            prop_assert!((v - m.get(j, i)).abs() < 1e-9);
        }
        for i in 0..n {
            let row: f64 = (0..n).map(|j| m.get(i, j)).sum();
            prop_assert!((row - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_amm_is_doubly_stochastic_psd(g in arb_graph(5)) {
        let amm = commutant_basis(&adjacency_matrix(&g)).unwrap()
            .average_mixing_exact().unwrap();
        prop_assert!(amm.check_invariants());
    }
}
