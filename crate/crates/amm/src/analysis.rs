//! Automorphisms, the rank bounds on M̂ and its summary statistics.

use thiserror::Error;

use crate::commutant::AverageMixingMatrix;
use crate::graph::{adjacency_matrix, classify, Graph, GraphClass};
use crate::rational::{matrix_to_f64, Rational};
use crate::spectral::symmetric_eigenvalues;

/// Exhaustive automorphism search is capped here; worst case is the
/// degree-regular backtracking tree.
pub const MAX_AUT_ORDER: usize = 12;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("exhaustive automorphism search supports n <= {MAX_AUT_ORDER}, got {n}")]
    AutOrder { n: usize },
}

/// The full automorphism group as a list of vertex permutations.
#[derive(Clone, Debug)]
pub struct AutomorphismSet {
    pub perms: Vec<Vec<usize>>,
}

impl AutomorphismSet {
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Group axioms on the raw permutation list, plus the commutation
    /// criterion against the adjacency matrix.
    pub fn check_invariants(&self, g: &Graph) -> bool {
        let n = g.n();
        let contains = |p: &[usize]| self.perms.iter().any(|q| q == p);
        for p in &self.perms {
            let mut inv = vec![0; n];
            for (i, &pi) in p.iter().enumerate() {
                inv[pi] = i;
            }
            if !contains(&inv) {
                return false;
            }
            for q in &self.perms {
                let comp: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                if !contains(&comp) {
                    return false;
                }
            }
            // P A = A P, i.e. adjacency is preserved.
            for i in 0..n {
                for j in 0..n {
                    if g.has_edge(i, j) != g.has_edge(p[i], p[j]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Backtracking over degree-compatible assignments.
pub fn automorphisms(g: &Graph) -> Result<AutomorphismSet, AnalysisError> {
    let n = g.n();
    if n > MAX_AUT_ORDER {
        return Err(AnalysisError::AutOrder { n });
    }
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut perms = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(g, &degrees, &mut image, &mut used, 0, &mut perms);
    Ok(AutomorphismSet { perms })
}

fn backtrack(
    g: &Graph,
    degrees: &[usize],
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    v: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let n = g.n();
    if v == n {
        out.push(image.clone());
        return;
    }
    for w in 0..n {
        if used[w] || degrees[w] != degrees[v] {
            continue;
        }
        // Adjacency to all previously mapped vertices must be preserved.
        if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(image[u], w)) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        backtrack(g, degrees, image, used, v + 1, out);
        used[w] = false;
        image[v] = usize::MAX;
    }
}

/// Lower bound on rank(M̂) from automorphisms with a unique fixed point:
/// with Q the set of vertices that are the unique fixed point of some
/// automorphism, any proper subset S of V inside Q gives rank >= |S| + 1.
pub fn fixed_point_bound(g: &Graph, aut: &AutomorphismSet) -> usize {
    let n = g.n();
    let unique_fixed: Vec<usize> = (0..n)
        .filter(|&a| {
            aut.perms
                .iter()
                .any(|p| p.iter().enumerate().all(|(i, &pi)| (pi == i) == (i == a)))
        })
        .collect();
    if unique_fixed.is_empty() {
        1
    } else {
        unique_fixed.len().min(n - 1) + 1
    }
}

#[derive(Clone, Debug)]
pub struct RankBound {
    pub name: &'static str,
    pub value: usize,
    /// Whether the bound direction holds; these are theorems, so a false
    /// flag falsifies the computation that produced it.
    pub satisfied: bool,
}

#[derive(Clone, Debug)]
pub struct RankReport {
    pub n: usize,
    pub rank: usize,
    pub simple_spectrum: bool,
    pub bounds: Vec<RankBound>,
    pub trace: Rational,
    pub amm_spectrum: Vec<f64>,
}

impl RankReport {
    pub fn all_satisfied(&self) -> bool {
        self.bounds.iter().all(|b| b.satisfied)
    }
}

/// Applies every rank bound whose hypothesis holds. `simple_spectrum`
/// must come from the exact test `dim cmm(A) = n`.
pub fn check_rank_bounds(
    g: &Graph,
    amm: &AverageMixingMatrix,
    simple_spectrum: bool,
    class: &GraphClass,
) -> RankReport {
    let n = g.n();
    let rank = amm.rank;
    let mut bounds = Vec::new();
    if simple_spectrum && n >= 2 {
        bounds.push(RankBound {
            name: "simple_spectrum_upper",
            value: n - 1,
            satisfied: rank <= n - 1,
        });
    }
    if simple_spectrum && class.regular.is_some() && n >= 4 {
        bounds.push(RankBound {
            name: "simple_regular_upper",
            value: n - 3,
            satisfied: rank <= n - 3,
        });
    }
    if simple_spectrum && class.bipartite {
        let bound = (n + 1) / 2;
        bounds.push(RankBound {
            name: "simple_bipartite_upper",
            value: bound,
            satisfied: rank <= bound,
        });
    }
    RankReport {
        n,
        rank,
        simple_spectrum,
        bounds,
        trace: amm.trace(),
        amm_spectrum: symmetric_eigenvalues(&matrix_to_f64(&amm.matrix)),
    }
}

/// Adds the fixed-point lower bound to a report when the automorphism
/// group is available.
pub fn with_fixed_point_bound(mut report: RankReport, g: &Graph, aut: &AutomorphismSet) -> RankReport {
    let bound = fixed_point_bound(g, aut);
    report.bounds.push(RankBound {
        name: "fixed_point_lower",
        value: bound,
        satisfied: report.rank >= bound,
    });
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorollaryOutcome {
    /// Hypotheses (connected, n >= 3, simple spectrum, rank = n - 1) fail.
    Vacuous,
    /// Every automorphism fixes at least one vertex.
    Verified,
    /// A fixed-point-free automorphism exists despite the hypotheses.
    Violated(Vec<usize>),
}

/// Simple spectrum and rank n-1 force every automorphism to have a fixed
/// point.
pub fn fixed_point_corollary_check(
    g: &Graph,
    rank: usize,
    simple_spectrum: bool,
) -> Result<CorollaryOutcome, AnalysisError> {
    let n = g.n();
    let class = classify(g);
    if !(class.connected && n >= 3 && simple_spectrum && rank == n - 1) {
        return Ok(CorollaryOutcome::Vacuous);
    }
    let aut = automorphisms(g)?;
    for p in &aut.perms {
        if p.iter().enumerate().all(|(i, &pi)| pi != i) {
            return Ok(CorollaryOutcome::Violated(p.clone()));
        }
    }
    Ok(CorollaryOutcome::Verified)
}

/// Exact trace and float spectrum of M̂.
pub fn amm_summary(amm: &AverageMixingMatrix) -> (Rational, Vec<f64>) {
    (
        amm.trace(),
        symmetric_eigenvalues(&matrix_to_f64(&amm.matrix)),
    )
}

/// Simple spectrum decided exactly: dim cmm(A) = n has no tolerance.
pub fn simple_spectrum_exact(g: &Graph) -> bool {
    let cb = crate::commutant::commutant_basis(&adjacency_matrix(g)).expect("adjacency symmetric");
    cb.dim() == g.n()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutant::commutant_basis;
    use crate::rational::rat;

    fn amm_of(g: &Graph) -> AverageMixingMatrix {
        commutant_basis(&adjacency_matrix(g))
            .unwrap()
            .average_mixing_exact()
            .unwrap()
    }

    #[test]
    fn automorphism_group_orders() {
        let k3 = Graph::complete(3);
        let aut = automorphisms(&k3).unwrap();
        assert_eq!(aut.order(), 6);
        assert!(aut.check_invariants(&k3));

        let p3 = Graph::path(3);
        let aut = automorphisms(&p3).unwrap();
        assert_eq!(aut.order(), 2);

        let c5 = Graph::cycle(5);
        let aut = automorphisms(&c5).unwrap();
        assert_eq!(aut.order(), 10);
        assert!(aut.check_invariants(&c5));

        assert_eq!(automorphisms(&Graph::petersen()).unwrap().order(), 120);
    }

    #[test]
    fn automorphisms_reject_large_order() {
        assert!(automorphisms(&Graph::path(13)).is_err());
    }

    #[test]
    fn fixed_point_bounds() {
        // C5: every vertex is the unique fixed point of a reflection.
        let c5 = Graph::cycle(5);
        let aut = automorphisms(&c5).unwrap();
        assert_eq!(fixed_point_bound(&c5, &aut), 5);
        assert_eq!(amm_of(&c5).rank, 5);

        // P3: the endpoint swap fixes only the center.
        let p3 = Graph::path(3);
        let aut = automorphisms(&p3).unwrap();
        assert_eq!(fixed_point_bound(&p3, &aut), 2);
        assert_eq!(amm_of(&p3).rank, 2);

        // K2: the swap is fixed-point-free.
        let k2 = Graph::complete(2);
        let aut = automorphisms(&k2).unwrap();
        assert_eq!(fixed_point_bound(&k2, &aut), 1);
        assert_eq!(amm_of(&k2).rank, 1);
    }

    #[test]
    fn rank_bound_reports() {
        let p3 = Graph::path(3);
        let report = check_rank_bounds(&p3, &amm_of(&p3), simple_spectrum_exact(&p3), &classify(&p3));
        assert!(report.simple_spectrum);
        assert_eq!(report.rank, 2);
        assert!(report.all_satisfied());
        let names: Vec<_> = report.bounds.iter().map(|b| (b.name, b.value)).collect();
        assert!(names.contains(&("simple_spectrum_upper", 2)));
        assert!(names.contains(&("simple_bipartite_upper", 2)));

        // K3 has a repeated eigenvalue: no bound applies, rank is full.
        let k3 = Graph::complete(3);
        let report = check_rank_bounds(&k3, &amm_of(&k3), simple_spectrum_exact(&k3), &classify(&k3));
        assert!(!report.simple_spectrum);
        assert_eq!(report.rank, 3);
        assert!(report.bounds.is_empty());
    }

    #[test]
    fn corollary_check_cases() {
        let k3 = Graph::complete(3);
        assert_eq!(
            fixed_point_corollary_check(&k3, 3, simple_spectrum_exact(&k3)).unwrap(),
            CorollaryOutcome::Vacuous
        );
        let p4 = Graph::path(4);
        let rank = amm_of(&p4).rank;
        let outcome =
            fixed_point_corollary_check(&p4, rank, simple_spectrum_exact(&p4)).unwrap();
        assert_ne!(outcome, CorollaryOutcome::Violated(vec![]));
        if rank == 3 {
            assert_eq!(outcome, CorollaryOutcome::Verified);
        }
    }

    #[test]
    fn summaries() {
        let (trace, spectrum) = amm_summary(&amm_of(&Graph::complete(2)));
        assert_eq!(trace, rat(1, 1));
        assert!((spectrum[0] - 1.0).abs() < 1e-9 && spectrum[1].abs() < 1e-9);

        let (trace, _) = amm_summary(&amm_of(&Graph::path(3)));
        assert_eq!(trace, rat(5, 4));

        // K_n trace closed form: n - 2 + 2/n.
        for n in 2..=6 {
            let (trace, _) = amm_summary(&amm_of(&Graph::complete(n)));
            let expect = rat(n as i64 - 2, 1) + rat(2, n as i64);
            assert_eq!(trace, expect);
        }
    }
}
