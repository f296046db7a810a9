//! AST for the relational property language.
//!
//! Formulas quantify over graph nodes and speak about a single binary edge
//! relation plus node (in)equality. Connective precedence, loosest first:
//! `iff` < `implies` < `or` < `and` < `not`. `implies` is right-associative,
//! the other binary connectives left-associative.

use std::collections::HashSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Edge(String, String),
    Eq(String, String),
    Neq(String, String),
}

impl Formula {
    pub fn forall<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        Formula::Forall(vars.into_iter().map(Into::into).collect(), Box::new(body))
    }

    pub fn exists<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        Formula::Exists(vars.into_iter().map(Into::into).collect(), Box::new(body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn edge(u: &str, v: &str) -> Formula {
        Formula::Edge(u.into(), v.into())
    }

    pub fn eq(u: &str, v: &str) -> Formula {
        Formula::Eq(u.into(), v.into())
    }

    pub fn neq(u: &str, v: &str) -> Formula {
        Formula::Neq(u.into(), v.into())
    }

    /// True iff every atom variable is bound by an enclosing quantifier.
    pub fn is_closed(&self) -> bool {
        fn walk(f: &Formula, scope: &mut Vec<String>) -> bool {
            let bound = |scope: &[String], v: &String| scope.iter().any(|s| s == v);
            match f {
                Formula::Forall(vs, b) | Formula::Exists(vs, b) => {
                    scope.extend(vs.iter().cloned());
                    let ok = walk(b, scope);
                    scope.truncate(scope.len() - vs.len());
                    ok
                }
                Formula::Not(a) => walk(a, scope),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => walk(a, scope) && walk(b, scope),
                Formula::Edge(u, v) | Formula::Eq(u, v) | Formula::Neq(u, v) => {
                    bound(scope, u) && bound(scope, v)
                }
            }
        }
        walk(self, &mut Vec::new())
    }

    /// Left-fold conjunction of one or more formulas.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("conjunction of at least one formula");
        it.fold(first, Formula::and)
    }

    pub fn variables(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        fn walk(f: &Formula, out: &mut HashSet<String>) {
            match f {
                Formula::Forall(vs, b) | Formula::Exists(vs, b) => {
                    out.extend(vs.iter().cloned());
                    walk(b, out);
                }
                Formula::Not(a) => walk(a, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Formula::Edge(u, v) | Formula::Eq(u, v) | Formula::Neq(u, v) => {
                    out.insert(u.clone());
                    out.insert(v.clone());
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

// Precedence levels used by the printer; quantifiers bind loosest.
const PREC_QUANT: u8 = 0;
const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_NOT: u8 = 5;
const PREC_ATOM: u8 = 6;

fn write_prec(f: &Formula, out: &mut String, min_prec: u8) {
    let prec = match f {
        Formula::Forall(..) | Formula::Exists(..) => PREC_QUANT,
        Formula::Iff(..) => PREC_IFF,
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Not(..) => PREC_NOT,
        _ => PREC_ATOM,
    };
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Forall(vs, b) | Formula::Exists(vs, b) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "all " } else { "some " });
            out.push_str(&vs.join(", "));
            out.push_str(" | ");
            write_prec(b, out, PREC_QUANT);
        }
        Formula::Iff(a, b) => {
            write_prec(a, out, PREC_IFF);
            out.push_str(" iff ");
            write_prec(b, out, PREC_IFF + 1);
        }
        Formula::Implies(a, b) => {
            write_prec(a, out, PREC_IMPLIES + 1);
            out.push_str(" implies ");
            write_prec(b, out, PREC_IMPLIES);
        }
        Formula::Or(a, b) => {
            write_prec(a, out, PREC_OR);
            out.push_str(" or ");
            write_prec(b, out, PREC_OR + 1);
        }
        Formula::And(a, b) => {
            write_prec(a, out, PREC_AND);
            out.push_str(" and ");
            write_prec(b, out, PREC_AND + 1);
        }
        Formula::Not(a) => {
            out.push_str("not ");
            write_prec(a, out, PREC_NOT);
        }
        Formula::Edge(u, v) => {
            out.push_str("edge(");
            out.push_str(u);
            out.push_str(", ");
            out.push_str(v);
            out.push(')');
        }
        Formula::Eq(u, v) => {
            out.push_str(u);
            out.push_str(" = ");
            out.push_str(v);
        }
        Formula::Neq(u, v) => {
            out.push_str(u);
            out.push_str(" != ");
            out.push_str(v);
        }
    }
    if parens {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    /// Canonical text; `parse(format!("{f}"))` reproduces the AST.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_prec(self, &mut out, PREC_QUANT);
        f.write_str(&out)
    }
}
