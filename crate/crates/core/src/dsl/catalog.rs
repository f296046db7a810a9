//! Built-in catalog of the 16 graph properties.
//!
//! Combined properties are plain conjunctions of their components.
//! `non_strict_order` deliberately shares the formula of `partial_order`
//! (the two entries differ only in base size); `symmetric` is a helper
//! used inside `equivalence`, not a catalog entry of its own.

use super::ast::Formula;
use super::parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyCategory {
    Basic,
    FunctionRelated,
    Combined,
}

impl std::fmt::Display for PropertyCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PropertyCategory::Basic => "basic",
            PropertyCategory::FunctionRelated => "function-related",
            PropertyCategory::Combined => "combined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub name: String,
    pub formula: Formula,
    pub base_size: usize,
    pub category: PropertyCategory,
}

const REFLEXIVE: &str = "all u | edge(u, u)";
const IRREFLEXIVE: &str = "all u | not edge(u, u)";
const ANTISYMMETRIC: &str = "all u, v | (edge(u, v) and edge(v, u)) implies u = v";
const CONNEX: &str = "all u, v | u != v implies (edge(u, v) or edge(v, u))";
const TRANSITIVE: &str = "all u, v, w | (edge(u, v) and edge(v, w)) implies edge(u, w)";
const SYMMETRIC: &str = "all u, v | edge(u, v) implies edge(v, u)";
const SOME_OUTGOING: &str = "all u | some v | edge(u, v)";
const AT_MOST_ONE_OUTGOING: &str = "all u, v, w | (edge(u, v) and edge(u, w)) implies v = w";
const AT_MOST_ONE_INCOMING: &str = "all u, v, w | (edge(u, w) and edge(v, w)) implies u = v";
const SOME_INCOMING: &str = "all v | some u | edge(u, v)";

/// Canonical source text for each catalog property, in catalog order.
pub const CATALOG_SOURCES: [(&str, &[&str], usize); 16] = [
    ("antisymmetry", &[ANTISYMMETRIC], 5),
    ("connex", &[CONNEX], 6),
    ("reflexivity", &[REFLEXIVE], 5),
    ("irreflexivity", &[IRREFLEXIVE], 5),
    ("transitivity", &[TRANSITIVE], 6),
    ("function", &[SOME_OUTGOING, AT_MOST_ONE_OUTGOING], 8),
    ("functionality", &[AT_MOST_ONE_OUTGOING], 8),
    ("injectivity", &[AT_MOST_ONE_INCOMING], 8),
    ("surjectivity", &[SOME_INCOMING], 14),
    (
        "bijectivity",
        &[SOME_OUTGOING, AT_MOST_ONE_OUTGOING, SOME_INCOMING, AT_MOST_ONE_INCOMING],
        14,
    ),
    ("equivalence", &[REFLEXIVE, SYMMETRIC, TRANSITIVE], 20),
    ("partial_order", &[REFLEXIVE, ANTISYMMETRIC, TRANSITIVE], 6),
    ("preorder", &[REFLEXIVE, TRANSITIVE], 7),
    ("strict_order", &[IRREFLEXIVE, TRANSITIVE], 7),
    ("non_strict_order", &[REFLEXIVE, ANTISYMMETRIC, TRANSITIVE], 7),
    ("total_order", &[REFLEXIVE, ANTISYMMETRIC, TRANSITIVE, CONNEX], 13),
];

fn category_of(name: &str) -> PropertyCategory {
    match name {
        "antisymmetry" | "connex" | "reflexivity" | "irreflexivity" | "transitivity" => {
            PropertyCategory::Basic
        }
        "function" | "functionality" | "injectivity" | "surjectivity" | "bijectivity" => {
            PropertyCategory::FunctionRelated
        }
        _ => PropertyCategory::Combined,
    }
}

/// The 16 built-in properties with their base sizes.
pub fn builtin_catalog() -> Vec<PropertyDef> {
    CATALOG_SOURCES
        .iter()
        .map(|&(name, parts, base_size)| {
            let formula = Formula::conjunction(
                parts
                    .iter()
                    .map(|src| parse(src).expect("builtin property source parses")),
            );
            PropertyDef {
                name: name.to_string(),
                formula,
                base_size,
                category: category_of(name),
            }
        })
        .collect()
}

pub fn find_property(name: &str) -> Option<PropertyDef> {
    builtin_catalog().into_iter().find(|p| p.name == name)
}
