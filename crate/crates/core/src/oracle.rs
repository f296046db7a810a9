//! Brute-force ground truth for small sizes.
//!
//! Everything here is independent of the CNF/SAT path: enumeration scans
//! every bitstring and asks the evaluator, canonicalization tries every
//! node relabeling. That independence is the point; `differential_test`
//! pits the two routes against each other and reports any witness.

use std::collections::HashSet;

use crate::bits::BitString;
use crate::dsl::PropertyDef;
use crate::eval::{check, MAX_EXHAUSTIVE_NODES};
use crate::graph::DirectedGraph;
use crate::sat::{enumerate, SolveConfig, SolverError};

/// Largest node count for canonical forms (n! relabelings, 8! = 40320).
pub const MAX_CANONICAL_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("brute-force enumeration refused: n = {n} exceeds the budget guard (max {max})")]
    EnumerationBudget { n: usize, max: usize },
    #[error("canonical form refused: n = {n} exceeds the budget guard (max {max})")]
    CanonicalBudget { n: usize, max: usize },
    #[error("grounding failed: {0}")]
    Ground(#[from] crate::cnf::GroundError),
    #[error("solver failed: {0}")]
    Solver(#[from] SolverError),
}

/// Every graph on `n` nodes satisfying the formula, by scanning all
/// `2^(n*n)` bitstrings in ascending order.
pub fn brute_enumerate(property: &PropertyDef, n: usize) -> Result<Vec<DirectedGraph>, OracleError> {
    if n == 0 || n > MAX_EXHAUSTIVE_NODES {
        return Err(OracleError::EnumerationBudget { n, max: MAX_EXHAUSTIVE_NODES });
    }
    let mut out = Vec::new();
    for mask in 0..(1u64 << (n * n)) {
        let g = DirectedGraph::from_edge_mask(n, mask).expect("n <= 4");
        if check(&property.formula, &g) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Lexicographically minimal bitstring over all `n!` node relabelings.
pub fn canonical_form(g: &DirectedGraph) -> Result<BitString, OracleError> {
    let n = g.node_count();
    if n > MAX_CANONICAL_NODES {
        return Err(OracleError::CanonicalBudget { n, max: MAX_CANONICAL_NODES });
    }
    let mut best = g.bits().clone();
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over all permutations.
    let mut stack = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            let candidate = g.relabel(&perm);
            if candidate.bits() < &best {
                best = candidate.bits().clone();
            }
            stack[i] += 1;
            i = 0;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct DifferentialReport {
    pub property: String,
    pub n: usize,
    pub brute_count: usize,
    pub solver_count: usize,
    /// Accepted by the evaluator but missed by the solver route.
    pub missing_from_solver: Vec<DirectedGraph>,
    /// Emitted by the solver route but rejected by the evaluator.
    pub extra_from_solver: Vec<DirectedGraph>,
    /// Fraction of all `2^(n*n)` graphs that satisfy the property.
    pub positive_fraction: f64,
}

impl DifferentialReport {
    pub fn agree(&self) -> bool {
        self.missing_from_solver.is_empty() && self.extra_from_solver.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "property: {}\nn: {}\nbrute_count: {}\nsolver_count: {}\npositive_fraction: {:.5e}\nagree: {}\n",
            self.property, self.n, self.brute_count, self.solver_count,
            self.positive_fraction, self.agree(),
        );
        for g in self.missing_from_solver.iter().take(5) {
            out.push_str(&format!("missing_from_solver: {}\n", g.encode_bitstring()));
        }
        for g in self.extra_from_solver.iter().take(5) {
            out.push_str(&format!("extra_from_solver: {}\n", g.encode_bitstring()));
        }
        out
    }
}

/// Compares brute-force enumeration against SAT enumeration (symmetry
/// breaking off) and reports witnesses of any disagreement.
pub fn differential_test(property: &PropertyDef, n: usize) -> Result<DifferentialReport, OracleError> {
    differential_test_cnf(property, n, None)
}

/// As `differential_test`, with an optional replacement CNF for the solver
/// route (used to demonstrate that injected compile bugs are caught).
pub fn differential_test_cnf(
    property: &PropertyDef,
    n: usize,
    cnf_override: Option<crate::cnf::Cnf>,
) -> Result<DifferentialReport, OracleError> {
    let brute = brute_enumerate(property, n)?;
    let cnf = match cnf_override {
        Some(c) => c,
        None => crate::cnf::ground(&property.formula, n)?,
    };
    let solved = enumerate(&cnf, n * n, &SolveConfig::enumerate_all())?;
    let brute_set: HashSet<&BitString> = brute.iter().map(|g| g.bits()).collect();
    let solver_set: HashSet<&BitString> = solved.models.iter().collect();
    let missing = brute
        .iter()
        .filter(|g| !solver_set.contains(g.bits()))
        .cloned()
        .collect();
    let extra = solved
        .models
        .iter()
        .filter(|b| !brute_set.contains(b))
        .map(|b| DirectedGraph::from_bits(n, b.clone()).expect("projection width n*n"))
        .collect();
    let total = (1u64 << (n * n)) as f64;
    Ok(DifferentialReport {
        property: property.name.clone(),
        n,
        brute_count: brute.len(),
        solver_count: solved.models.len(),
        missing_from_solver: missing,
        extra_from_solver: extra,
        positive_fraction: brute.len() as f64 / total,
    })
}

/// Known model counts at n = 3, used as anchors in CI.
pub const KNOWN_COUNTS_N3: [(&str, u64); 16] = [
    ("antisymmetry", 216),
    ("connex", 216),
    ("reflexivity", 64),
    ("irreflexivity", 64),
    ("transitivity", 171),
    ("function", 27),
    ("functionality", 64),
    ("injectivity", 64),
    ("surjectivity", 343),
    ("bijectivity", 6),
    ("equivalence", 5),
    ("partial_order", 19),
    ("preorder", 29),
    ("strict_order", 19),
    ("non_strict_order", 19),
    ("total_order", 6),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::find_property;
    use crate::graph::EdgeIndex;

    #[test]
    fn brute_counts_for_orders_at_n3() {
        assert_eq!(brute_enumerate(&find_property("total_order").unwrap(), 3).unwrap().len(), 6);
        assert_eq!(brute_enumerate(&find_property("preorder").unwrap(), 3).unwrap().len(), 29);
        assert_eq!(brute_enumerate(&find_property("strict_order").unwrap(), 3).unwrap().len(), 19);
    }

    #[test]
    fn enumeration_budget_guard() {
        assert!(matches!(
            brute_enumerate(&find_property("reflexivity").unwrap(), 5),
            Err(OracleError::EnumerationBudget { n: 5, .. })
        ));
    }

    #[test]
    fn canonical_form_identifies_swapped_edges() {
        let a = DirectedGraph::empty(2).unwrap().flip_bits(&[EdgeIndex(1)]).unwrap(); // 0 -> 1
        let b = DirectedGraph::empty(2).unwrap().flip_bits(&[EdgeIndex(2)]).unwrap(); // 1 -> 0
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        for mask in [0u64, 0b101_010_001, 0x1ff, 0x123] {
            let g = DirectedGraph::from_edge_mask(3, mask).unwrap();
            let c1 = canonical_form(&g).unwrap();
            let g1 = DirectedGraph::from_bits(3, c1.clone()).unwrap();
            assert_eq!(canonical_form(&g1).unwrap(), c1);
        }
    }

    #[test]
    fn equivalence_classes_at_n3_are_the_partitions() {
        let p = find_property("equivalence").unwrap();
        let graphs = brute_enumerate(&p, 3).unwrap();
        assert_eq!(graphs.len(), 5);
        let forms: HashSet<String> = graphs
            .iter()
            .map(|g| canonical_form(g).unwrap().to_text())
            .collect();
        // Partitions of a 3-set: {1,1,1}, {2,1}, {3}.
        assert_eq!(forms.len(), 3);
    }

    #[test]
    fn differential_agreement_for_two_properties() {
        for name in ["partial_order", "function"] {
            let p = find_property(name).unwrap();
            let report = differential_test(&p, 3).unwrap();
            assert!(report.agree(), "{}", report.render());
            assert_eq!(report.brute_count, report.solver_count);
        }
    }

    #[test]
    fn injected_compiler_bug_yields_witness() {
        let p = find_property("transitivity").unwrap();
        let mut broken = crate::cnf::ground(&p.formula, 3).unwrap();
        broken.clauses.pop(); // drop one transitivity constraint
        let report = differential_test_cnf(&p, 3, Some(broken)).unwrap();
        assert!(!report.agree());
        assert!(!report.extra_from_solver.is_empty());
        assert!(report.render().contains("extra_from_solver"));
    }

    #[test]
    fn total_order_rarity_at_n3() {
        let p = find_property("total_order").unwrap();
        let report = differential_test(&p, 3).unwrap();
        assert!((report.positive_fraction - 6.0 / 512.0).abs() < 1e-12);
    }
}
