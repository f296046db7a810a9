//! Grounding of closed formulas into propositional CNF at a fixed size.
//!
//! Variables `1..=n*n` are the edge variables in row-major order (edge
//! `i -> j` is variable `i*n + j + 1`); any variables beyond `n*n` are
//! auxiliary definitions introduced for disjunctions over non-literal
//! subformulas. Auxiliaries are defined with full biconditionals, so every
//! model is uniquely determined by its edge-variable projection.
//!
//! Quantifiers expand over node tuples in lexicographic order, equality
//! atoms are folded to constants at instantiation time, and the clause
//! list is deterministic: same formula and size, byte-identical output.

use std::collections::HashSet;

use crate::dsl::Formula;
use crate::graph::MAX_NODES;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    /// Total variable count; the first `n*n` are edge variables.
    pub num_vars: usize,
    /// Clauses as sorted, deduplicated nonzero DIMACS-style literals.
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn validate(&self) -> Result<(), CnfError> {
        for (ci, clause) in self.clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > self.num_vars {
                    return Err(CnfError::BadLiteral { clause: ci, literal: lit });
                }
            }
        }
        Ok(())
    }

    /// Evaluates the clause set under a total assignment (`assignment[v-1]`
    /// is the value of variable `v`). Test and audit helper.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let v = lit.unsigned_abs() as usize - 1;
                assignment[v] == (lit > 0)
            })
        })
    }

    /// Standard DIMACS text.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Cnf, CnfError> {
        let mut num_vars = None;
        let mut declared_clauses = 0usize;
        let mut clauses = Vec::new();
        let mut current: Vec<i32> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[0] != "cnf" {
                    return Err(CnfError::Dimacs { line: lineno + 1, message: "malformed problem line".into() });
                }
                num_vars = Some(parts[1].parse().map_err(|_| CnfError::Dimacs {
                    line: lineno + 1,
                    message: "bad variable count".into(),
                })?);
                declared_clauses = parts[2].parse().map_err(|_| CnfError::Dimacs {
                    line: lineno + 1,
                    message: "bad clause count".into(),
                })?;
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| CnfError::Dimacs {
                    line: lineno + 1,
                    message: format!("bad literal `{tok}`"),
                })?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        let num_vars = num_vars.ok_or(CnfError::Dimacs { line: 0, message: "missing problem line".into() })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != declared_clauses {
            return Err(CnfError::Dimacs {
                line: 0,
                message: format!("declared {} clauses, found {}", declared_clauses, clauses.len()),
            });
        }
        let cnf = Cnf { num_vars, clauses };
        cnf.validate()?;
        Ok(cnf)
    }
}

/// Standard `v`-line rendering of a model for interop testing.
pub fn model_line(assignment: &[bool]) -> String {
    let mut out = String::from("v");
    for (i, &value) in assignment.iter().enumerate() {
        out.push(' ');
        if !value {
            out.push('-');
        }
        out.push_str(&(i + 1).to_string());
    }
    out.push_str(" 0");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("clause {clause} contains invalid literal {literal}")]
    BadLiteral { clause: usize, literal: i32 },
    #[error("dimacs line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("node count {0} out of range 1..={MAX_NODES}")]
    NodeCountOutOfRange(usize),
    #[error("formula is not closed: free variable `{0}`")]
    UnboundVariable(String),
}

/// Grounds `f` at size `n`: models restricted to the first `n*n` variables
/// are exactly the graphs accepted by the evaluator.
pub fn ground(f: &Formula, n: usize) -> Result<Cnf, GroundError> {
    ground_with_polarity(f, n, true)
}

/// Grounds the negation of `f`; models project to exactly the rejected graphs.
pub fn negate_and_ground(f: &Formula, n: usize) -> Result<Cnf, GroundError> {
    ground_with_polarity(f, n, false)
}

fn ground_with_polarity(f: &Formula, n: usize, positive: bool) -> Result<Cnf, GroundError> {
    if n == 0 || n > MAX_NODES {
        return Err(GroundError::NodeCountOutOfRange(n));
    }
    let mut env: Vec<(&str, usize)> = Vec::new();
    let prop = instantiate(f, n, &mut env, positive)?;
    let mut builder = CnfBuilder::new(n * n);
    builder.emit_top(&prop);
    Ok(Cnf { num_vars: builder.num_vars, clauses: builder.clauses })
}

/// Quantifier-free intermediate in negation normal form with constants folded.
enum Prop {
    Const(bool),
    Lit(i32),
    And(Vec<Prop>),
    Or(Vec<Prop>),
}

impl Prop {
    fn conj(children: Vec<Prop>) -> Prop {
        let mut out = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Prop::Const(true) => {}
                Prop::Const(false) => return Prop::Const(false),
                Prop::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Prop::Const(true),
            1 => out.pop().unwrap(),
            _ => Prop::And(out),
        }
    }

    fn disj(children: Vec<Prop>) -> Prop {
        let mut out = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Prop::Const(false) => {}
                Prop::Const(true) => return Prop::Const(true),
                Prop::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Prop::Const(false),
            1 => out.pop().unwrap(),
            _ => Prop::Or(out),
        }
    }
}

fn instantiate<'f>(
    f: &'f Formula,
    n: usize,
    env: &mut Vec<(&'f str, usize)>,
    positive: bool,
) -> Result<Prop, GroundError> {
    Ok(match f {
        Formula::Forall(vars, body) => expand_quant(vars, body, n, env, positive, true)?,
        Formula::Exists(vars, body) => expand_quant(vars, body, n, env, positive, false)?,
        Formula::Not(a) => instantiate(a, n, env, !positive)?,
        Formula::And(a, b) => {
            let pa = instantiate(a, n, env, positive)?;
            let pb = instantiate(b, n, env, positive)?;
            if positive {
                Prop::conj(vec![pa, pb])
            } else {
                Prop::disj(vec![pa, pb])
            }
        }
        Formula::Or(a, b) => {
            let pa = instantiate(a, n, env, positive)?;
            let pb = instantiate(b, n, env, positive)?;
            if positive {
                Prop::disj(vec![pa, pb])
            } else {
                Prop::conj(vec![pa, pb])
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                let pa = instantiate(a, n, env, false)?;
                let pb = instantiate(b, n, env, true)?;
                Prop::disj(vec![pa, pb])
            } else {
                let pa = instantiate(a, n, env, true)?;
                let pb = instantiate(b, n, env, false)?;
                Prop::conj(vec![pa, pb])
            }
        }
        Formula::Iff(a, b) => {
            if positive {
                let fwd = Prop::disj(vec![
                    instantiate(a, n, env, false)?,
                    instantiate(b, n, env, true)?,
                ]);
                let bwd = Prop::disj(vec![
                    instantiate(b, n, env, false)?,
                    instantiate(a, n, env, true)?,
                ]);
                Prop::conj(vec![fwd, bwd])
            } else {
                let left = Prop::conj(vec![
                    instantiate(a, n, env, true)?,
                    instantiate(b, n, env, false)?,
                ]);
                let right = Prop::conj(vec![
                    instantiate(b, n, env, true)?,
                    instantiate(a, n, env, false)?,
                ]);
                Prop::disj(vec![left, right])
            }
        }
        Formula::Edge(u, v) => {
            let i = lookup(env, u)?;
            let j = lookup(env, v)?;
            let var = (i * n + j + 1) as i32;
            Prop::Lit(if positive { var } else { -var })
        }
        Formula::Eq(u, v) => {
            let equal = lookup(env, u)? == lookup(env, v)?;
            Prop::Const(equal == positive)
        }
        Formula::Neq(u, v) => {
            let differ = lookup(env, u)? != lookup(env, v)?;
            Prop::Const(differ == positive)
        }
    })
}

fn expand_quant<'f>(
    vars: &'f [String],
    body: &'f Formula,
    n: usize,
    env: &mut Vec<(&'f str, usize)>,
    positive: bool,
    universal: bool,
) -> Result<Prop, GroundError> {
    match vars.split_first() {
        None => instantiate(body, n, env, positive),
        Some((first, rest)) => {
            let mut children = Vec::with_capacity(n);
            for node in 0..n {
                env.push((first.as_str(), node));
                let child = expand_quant(rest, body, n, env, positive, universal);
                env.pop();
                children.push(child?);
            }
            // A negated universal is an existential over the negated body;
            // the polarity already flowed into the children.
            Ok(if universal == positive {
                Prop::conj(children)
            } else {
                Prop::disj(children)
            })
        }
    }
}

fn lookup(env: &[(&str, usize)], name: &str) -> Result<usize, GroundError> {
    env.iter()
        .rev()
        .find(|(v, _)| *v == name)
        .map(|(_, node)| *node)
        .ok_or_else(|| GroundError::UnboundVariable(name.to_string()))
}

struct CnfBuilder {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
    seen: HashSet<Vec<i32>>,
}

impl CnfBuilder {
    fn new(edge_vars: usize) -> Self {
        CnfBuilder { num_vars: edge_vars, clauses: Vec::new(), seen: HashSet::new() }
    }

    fn fresh(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    /// Sorts literals by variable, drops tautologies and exact duplicates.
    fn push_clause(&mut self, mut lits: Vec<i32>) {
        lits.sort_unstable_by_key(|l| (l.abs(), *l < 0));
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == -w[1]) {
            return;
        }
        if self.seen.insert(lits.clone()) {
            self.clauses.push(lits);
        }
    }

    fn emit_top(&mut self, p: &Prop) {
        match p {
            Prop::Const(true) => {}
            Prop::Const(false) => {
                // Provably unsatisfiable at this size.
                self.clauses.push(Vec::new());
            }
            Prop::Lit(l) => self.push_clause(vec![*l]),
            Prop::And(cs) => {
                for c in cs {
                    self.emit_top(c);
                }
            }
            Prop::Or(cs) => {
                let lits: Vec<i32> = cs.iter().map(|c| self.reify(c)).collect();
                self.push_clause(lits);
            }
        }
    }

    /// Literal standing for a subformula, introducing a defined auxiliary
    /// for conjunctions/disjunctions.
    fn reify(&mut self, p: &Prop) -> i32 {
        match p {
            Prop::Lit(l) => *l,
            Prop::Const(_) => unreachable!("constants are folded before reification"),
            Prop::And(cs) => {
                let reps: Vec<i32> = cs.iter().map(|c| self.reify(c)).collect();
                let a = self.fresh();
                for &r in &reps {
                    self.push_clause(vec![-a, r]);
                }
                let mut back = Vec::with_capacity(reps.len() + 1);
                back.push(a);
                back.extend(reps.iter().map(|r| -r));
                self.push_clause(back);
                a
            }
            Prop::Or(cs) => {
                let reps: Vec<i32> = cs.iter().map(|c| self.reify(c)).collect();
                let a = self.fresh();
                let mut fwd = Vec::with_capacity(reps.len() + 1);
                fwd.push(-a);
                fwd.extend(&reps);
                self.push_clause(fwd);
                for &r in &reps {
                    self.push_clause(vec![a, -r]);
                }
                a
            }
        }
    }
}
