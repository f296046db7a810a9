//! Direct semantic checker: quantifier expansion over node IDs.
//!
//! This is the reference semantics everything else is tested against; it
//! stays naive on purpose. Graph sizes top out around 30 nodes, so even a
//! triple quantifier is only ~27k atom probes.

use crate::dsl::Formula;
use crate::graph::DirectedGraph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("exhaustive count refused: n = {n} exceeds the budget guard (max {max})")]
    SizeBudget { n: usize, max: usize },
    #[error("formula is not closed: free variable `{0}`")]
    NotClosed(String),
}

/// Largest node count for which `count_satisfying` will scan all graphs
/// (2^(n*n) of them).
pub const MAX_EXHAUSTIVE_NODES: usize = 4;

/// Decides `g |= f` with domain `{0, .., n-1}` and `edge(u, v)` read from
/// adjacency bit `u*n + v`. The formula must be closed.
pub fn check(f: &Formula, g: &DirectedGraph) -> bool {
    let mut env: Vec<(&str, usize)> = Vec::new();
    eval(f, g, &mut env)
}

fn eval<'f>(f: &'f Formula, g: &DirectedGraph, env: &mut Vec<(&'f str, usize)>) -> bool {
    match f {
        Formula::Forall(vars, body) => eval_quant(vars, body, g, env, true),
        Formula::Exists(vars, body) => eval_quant(vars, body, g, env, false),
        Formula::Not(a) => !eval(a, g, env),
        Formula::And(a, b) => eval(a, g, env) && eval(b, g, env),
        Formula::Or(a, b) => eval(a, g, env) || eval(b, g, env),
        Formula::Implies(a, b) => !eval(a, g, env) || eval(b, g, env),
        Formula::Iff(a, b) => eval(a, g, env) == eval(b, g, env),
        Formula::Edge(u, v) => g.has_edge(lookup(env, u), lookup(env, v)),
        Formula::Eq(u, v) => lookup(env, u) == lookup(env, v),
        Formula::Neq(u, v) => lookup(env, u) != lookup(env, v),
    }
}

fn eval_quant<'f>(
    vars: &'f [String],
    body: &'f Formula,
    g: &DirectedGraph,
    env: &mut Vec<(&'f str, usize)>,
    universal: bool,
) -> bool {
    match vars.split_first() {
        None => eval(body, g, env),
        Some((first, rest)) => {
            for node in 0..g.node_count() {
                env.push((first.as_str(), node));
                let inner = eval_quant(rest, body, g, env, universal);
                env.pop();
                if inner != universal {
                    return !universal;
                }
            }
            universal
        }
    }
}

fn lookup(env: &[(&str, usize)], name: &str) -> usize {
    // Innermost binding wins (quantifier shadowing).
    env.iter()
        .rev()
        .find(|(v, _)| *v == name)
        .map(|(_, node)| *node)
        .unwrap_or_else(|| panic!("unbound variable `{name}` reached the evaluator"))
}

/// Exhaustive model count over all `2^(n*n)` graphs; the small-size oracle.
pub fn count_satisfying(f: &Formula, n: usize) -> Result<u64, EvalError> {
    if n == 0 || n > MAX_EXHAUSTIVE_NODES {
        return Err(EvalError::SizeBudget { n, max: MAX_EXHAUSTIVE_NODES });
    }
    if let Some(free) = first_free_variable(f) {
        return Err(EvalError::NotClosed(free));
    }
    let total: u64 = 1 << (n * n);
    let mut count = 0;
    for mask in 0..total {
        let g = DirectedGraph::from_edge_mask(n, mask).expect("n <= 4");
        if check(f, &g) {
            count += 1;
        }
    }
    Ok(count)
}

fn first_free_variable(f: &Formula) -> Option<String> {
    fn walk(f: &Formula, scope: &mut Vec<String>) -> Option<String> {
        match f {
            Formula::Forall(vs, b) | Formula::Exists(vs, b) => {
                scope.extend(vs.iter().cloned());
                let r = walk(b, scope);
                scope.truncate(scope.len() - vs.len());
                r
            }
            Formula::Not(a) => walk(a, scope),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                walk(a, scope).or_else(|| walk(b, scope))
            }
            Formula::Edge(u, v) | Formula::Eq(u, v) | Formula::Neq(u, v) => {
                for name in [u, v] {
                    if !scope.iter().any(|s| s == name) {
                        return Some(name.clone());
                    }
                }
                None
            }
        }
    }
    walk(f, &mut Vec::new())
}
