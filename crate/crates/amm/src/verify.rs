//! One-stop property suite for a single graph: every structural fact
//! the rest of the crate relies on, run as named checks. Used by the
//! `check` CLI subcommand and the acceptance tests.

use num_traits::Zero;

use crate::analysis::{
    automorphisms, check_rank_bounds, fixed_point_corollary_check, with_fixed_point_bound,
    CorollaryOutcome, MAX_AUT_ORDER,
};
use crate::commutant::{commutant_basis, CommutantBasis};
use crate::graph::{adjacency_matrix, adjacency_matrix_f64, classify, Graph};
use crate::matrix::Matrix;
use crate::rational::{matrix_to_f64, rat, Rational, RationalMatrix};
use crate::spectral::{self, default_gap_tol, inf_norm};

#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn all_ok(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }
}

/// Deterministic small-rational source for the randomized exact checks.
pub struct RationalSampler {
    state: u64,
}

impl RationalSampler {
    pub fn new(seed: u64) -> Self {
        RationalSampler {
            state: seed.max(1),
        }
    }

    fn next_u64(&mut self) -> u64 {
        // xorshift64
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    pub fn rational(&mut self) -> Rational {
        let num = (self.next_u64() % 19) as i64 - 9;
        let den = (self.next_u64() % 9) as i64 + 1;
        rat(num, den)
    }

    pub fn matrix(&mut self, n: usize) -> RationalMatrix {
        Matrix::from_fn(n, n, |_, _| self.rational())
    }

    pub fn diagonal(&mut self, n: usize) -> RationalMatrix {
        let mut d: RationalMatrix = Matrix::zeros(n, n);
        for i in 0..n {
            d.set(i, i, self.rational());
        }
        d
    }
}

/// Runs the full suite on one graph. `float_tol` is the cross-check
/// tolerance between the exact and spectral routes (default 1e-9,
/// overridable through the AMM_TOL environment variable by the CLI).
/// `random_trials` controls the randomized exact checks.
pub fn check_graph(g: &Graph, float_tol: f64, random_trials: usize) -> CheckReport {
    let mut items = Vec::new();
    macro_rules! push {
        ($name:expr, $ok:expr, $detail:expr $(,)?) => {
            items.push(CheckItem {
                name: $name.to_string(),
                ok: $ok,
                detail: $detail,
            })
        };
    }
    let n = g.n();
    let a = adjacency_matrix(g);
    let cb = commutant_basis(&a).expect("adjacency is symmetric");
    let mut sampler = RationalSampler::new(0x5eed ^ (n as u64) << 32 ^ edge_seed(g));

    // Spectral decomposition and its residual invariants.
    let af = adjacency_matrix_f64(g);
    let sd = match spectral::decompose(&af, default_gap_tol(&af)) {
        Ok(sd) => sd,
        Err(e) => {
            push!("spectral_decomposition", false, e.to_string());
            return CheckReport { items };
        }
    };
    push!(
        "spectral_invariants",
        sd.validate(spectral::TOL_SPEC).is_ok(),
        format!("{} distinct eigenvalues", sd.num_distinct()),
    );

    // dim cmm(A) = sum of squared multiplicities.
    let mult_sum: usize = sd.mults.iter().map(|m| m * m).sum();
    push!(
        "commutant_dimension",
        cb.dim() == mult_sum,
        format!("dim {} vs sum m_r^2 = {}", cb.dim(), mult_sum),
    );

    // Psi is idempotent and self-adjoint, exactly, on random matrices.
    let mut idempotent = true;
    let mut self_adjoint = true;
    let mut commutes = true;
    for _ in 0..random_trials {
        let m = sampler.matrix(n);
        let pm = cb.project(&m).expect("projection");
        idempotent &= cb.project(&pm).expect("projection") == pm;
        commutes &= a.mul(&pm) == pm.mul(&a);
        let nmat = sampler.matrix(n);
        let pn = cb.project(&nmat).expect("projection");
        self_adjoint &= m.trace_inner_product(&pn) == pm.trace_inner_product(&nmat);
    }
    push!("psi_idempotent", idempotent, format!("{random_trials} random matrices"));
    push!("psi_self_adjoint", self_adjoint, format!("{random_trials} random pairs"));
    push!("psi_image_commutes", commutes, String::new());
    push!(
        "psi_fixes_commutant_basis",
        cb.basis()
            .iter()
            .all(|b| cb.project(b).expect("projection") == *b),
        String::new(),
    );

    // Matrix of Psi in the vec basis equals sum E_r ⊗ E_r (float), and
    // its trace recovers dim cmm(A).
    let (kron_ok, kron_trace_ok) = kronecker_representation_check(&cb, &sd, float_tol);
    push!("psi_kronecker_representation", kron_ok, format!("tolerance {float_tol:e}"));
    push!("psi_kronecker_trace", kron_trace_ok, String::new());

    // Exact average mixing matrix, its invariants and the Gram identity.
    let amm = cb.average_mixing_exact().expect("average mixing");
    push!("amm_invariants", amm.check_invariants(), format!("rank {}", amm.rank));
    push!(
        "gram_identity",
        cb.gram_of_average_states().expect("gram") == amm.matrix,
        String::new(),
    );
    let states_ok = (0..n).all(|v| {
        cb.average_state(v)
            .map(|s| s.check_invariants(&a))
            .unwrap_or(false)
    });
    push!("average_states_are_density_matrices", states_ok, String::new());

    // Exact vs numeric route.
    let numeric = spectral::avg_mixing_numeric(&sd);
    let dev = inf_norm(&matrix_to_f64(&amm.matrix).sub(&numeric));
    push!(
        "oracle_agreement",
        dev <= float_tol,
        format!("entrywise deviation {dev:e}"),
    );
    let float_rank = spectral::numeric_rank(&numeric, 1e-7);
    push!(
        "rank_agreement",
        float_rank == amm.rank,
        format!("exact {} vs float {}", amm.rank, float_rank),
    );

    // Direct-sum decomposition of the commutant.
    match cb.decomposition_check() {
        Ok(report) => push!("decomposition", report.all_ok(), format!("{report:?}")),
        Err(e) => push!("decomposition", false, e.to_string()),
    }

    // Kernel lemma on random diagonals (the assert inside
    // kernel_diag_check enforces the equivalence).
    let mut kernel_ok = true;
    for _ in 0..random_trials.min(10) {
        let d = sampler.diagonal(n);
        if cb.kernel_diag_check(&d).is_err() {
            kernel_ok = false;
        }
    }
    push!("kernel_diag_equivalence", kernel_ok, String::new());

    // Rank bounds and automorphism facts.
    let simple = cb.dim() == n;
    let class = classify(g);
    let mut report = check_rank_bounds(g, &amm, simple, &class);
    if n <= MAX_AUT_ORDER {
        let aut = automorphisms(g).expect("order within cap");
        push!("automorphism_group_axioms", aut.check_invariants(g), format!("order {}", aut.order()));
        report = with_fixed_point_bound(report, g, &aut);
    }
    push!(
        "rank_bounds",
        report.all_satisfied(),
        format!(
            "rank {} bounds {:?}",
            report.rank,
            report
                .bounds
                .iter()
                .map(|b| (b.name, b.value, b.satisfied))
                .collect::<Vec<_>>()
        ),
    );
    if n <= MAX_AUT_ORDER {
        let outcome = fixed_point_corollary_check(g, amm.rank, simple).expect("order within cap");
        push!(
            "fixed_point_corollary",
            !matches!(outcome, CorollaryOutcome::Violated(_)),
            format!("{outcome:?}"),
        );
    }

    // Bipartite simple-spectrum graphs: dim A0 >= floor(n/2).
    if class.bipartite && simple {
        let dim_zero = cb.zero_diagonal_subalgebra().len();
        push!(
            "bipartite_zero_diag_dimension",
            dim_zero >= n / 2,
            format!("dim A0 = {dim_zero}, floor(n/2) = {}", n / 2),
        );
    }

    CheckReport { items }
}

fn edge_seed(g: &Graph) -> u64 {
    g.edges()
        .iter()
        .fold(0u64, |acc, &(u, v)| acc.wrapping_mul(31).wrapping_add((u * 997 + v) as u64))
}

/// Float check that the matrix representing Psi in the standard vec
/// basis is the sum of Kronecker squares of the eigenprojections.
fn kronecker_representation_check(
    cb: &CommutantBasis,
    sd: &spectral::SpectralDecomposition,
    tol: f64,
) -> (bool, bool) {
    let n = cb.n();
    let nn = n * n;
    let mut kron: Matrix<f64> = Matrix::zeros(nn, nn);
    for e in &sd.idempotents {
        kron = kron.add(&e.kronecker(e));
    }
    // Column k of the matrix of Psi is vec(Psi(unvec(e_k))).
    let mut max_dev: f64 = 0.0;
    let mut trace = 0.0;
    for k in 0..nn {
        let mut unit = vec![Rational::zero(); nn];
        unit[k] = rat(1, 1);
        let basis_matrix = Matrix::from_vectorized(n, &unit);
        let psi = cb.project(&basis_matrix).expect("projection");
        let col = matrix_to_f64(&psi).vectorize();
        for (i, v) in col.iter().enumerate() {
            max_dev = max_dev.max((v - kron.get(i, k)).abs());
        }
        trace += col[k];
    }
    let mult_sum: f64 = sd.mults.iter().map(|m| (m * m) as f64).sum();
    (max_dev <= tol, (trace - mult_sum).abs() <= 1e-6)
}
