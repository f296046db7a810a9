//! Partial lex-leader symmetry breaking.
//!
//! For each adjacent node transposition (k, k+1) the adjacency bitstring is
//! constrained to be lexicographically <= its image under that relabeling.
//! Only the n-1 adjacent transpositions are used, so the reduction is
//! partial: every isomorphism class keeps at least its lex-minimal member
//! (which is minimal under every relabeling, these included).

use crate::cnf::Cnf;

/// Appends lex-leader clauses for every adjacent transposition to a
/// grounding at size `n`. Auxiliary prefix-equality variables are defined
/// with full biconditionals, so models stay uniquely determined by their
/// edge-variable projection.
pub fn add_symmetry_breaking(cnf: &Cnf, n: usize) -> Cnf {
    let mut out = cnf.clone();
    if n < 2 {
        return out;
    }
    for k in 0..n - 1 {
        let sigma = |x: usize| {
            if x == k {
                k + 1
            } else if x == k + 1 {
                k
            } else {
                x
            }
        };
        // Positions moved by the transposition, in row-major order, as
        // (own variable, variable of the relabeled bit).
        let affected: Vec<(i32, i32)> = (0..n * n)
            .filter_map(|t| {
                let (i, j) = (t / n, t % n);
                let (si, sj) = (sigma(i), sigma(j));
                if (si, sj) == (i, j) {
                    None
                } else {
                    Some(((t + 1) as i32, (si * n + sj + 1) as i32))
                }
            })
            .collect();
        let mut prefix_eq: Option<i32> = None; // vacuously true before the first position
        for (idx, &(x, y)) in affected.iter().enumerate() {
            match prefix_eq {
                None => push(&mut out, vec![-x, y]),
                Some(e) => push(&mut out, vec![-e, -x, y]),
            }
            if idx + 1 == affected.len() {
                break;
            }
            out.num_vars += 1;
            let a = out.num_vars as i32;
            match prefix_eq {
                None => {
                    // a <-> (x <-> y)
                    push(&mut out, vec![-a, -x, y]);
                    push(&mut out, vec![-a, x, -y]);
                    push(&mut out, vec![a, -x, -y]);
                    push(&mut out, vec![a, x, y]);
                }
                Some(e) => {
                    // a <-> (e and (x <-> y))
                    push(&mut out, vec![-a, e]);
                    push(&mut out, vec![-a, -x, y]);
                    push(&mut out, vec![-a, x, -y]);
                    push(&mut out, vec![a, -e, -x, -y]);
                    push(&mut out, vec![a, -e, x, y]);
                }
            }
            prefix_eq = Some(a);
        }
    }
    out
}

fn push(cnf: &mut Cnf, mut lits: Vec<i32>) {
    lits.sort_unstable_by_key(|l| (l.abs(), *l < 0));
    cnf.clauses.push(lits);
}
