//! Property language: lexer, parser, AST, and the built-in catalog.

pub mod ast;
pub mod catalog;
pub mod lexer;
pub mod parser;

pub use ast::Formula;
pub use catalog::{builtin_catalog, find_property, PropertyCategory, PropertyDef, CATALOG_SOURCES};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: lex error: {message}")]
    Lex { line: u32, col: u32, message: String },
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: u32, col: u32, message: String },
    #[error("{line}:{col}: unbound variable `{name}`")]
    UnboundVariable { line: u32, col: u32, name: String },
}
