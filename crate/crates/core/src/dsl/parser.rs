//! Recursive-descent parser.
//!
//! Grammar:
//!
//! ```text
//! formula := quant | iff
//! quant   := ("all" | "some") var ("," var)* "|" formula
//! iff     := implies ("iff" implies)*            (left-associative)
//! implies := or ("implies" implies)?             (right-associative)
//! or      := and ("or" and)*
//! and     := unary ("and" unary)*
//! unary   := "not" unary | "(" formula ")" | atom
//! atom    := "edge" "(" var "," var ")" | var ("=" | "!=") var
//! ```
//!
//! Only closed formulas are accepted; a variable not bound by an enclosing
//! quantifier is reported with its position.

use super::ast::Formula;
use super::lexer::{lex, Token, TokenKind};
use super::ParseError;

pub fn parse(source: &str) -> Result<Formula, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        scope: Vec::new(),
    };
    let formula = p.formula()?;
    if let Some(tok) = p.peek() {
        return Err(ParseError::Syntax {
            line: tok.line,
            col: tok.col,
            message: format!("unexpected {} after formula", tok.kind.describe()),
        });
    }
    Ok(formula)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        match self.next() {
            Some(t) if t.kind == kind => Ok(t),
            Some(t) => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected {}, found {}", kind.describe(), t.kind.describe()),
            }),
            None => Err(self.eof_error(&format!("expected {}", kind.describe()))),
        }
    }

    fn eof_error(&self, what: &str) -> ParseError {
        let (line, col) = self
            .tokens
            .last()
            .map(|t| (t.line, t.col + 1))
            .unwrap_or((1, 1));
        ParseError::Syntax {
            line,
            col,
            message: format!("{what}, found end of input"),
        }
    }

    fn ident(&mut self) -> Result<(String, u32, u32), ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::Ident(name), line, col }) => Ok((name, line, col)),
            Some(t) => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected identifier, found {}", t.kind.describe()),
            }),
            None => Err(self.eof_error("expected identifier")),
        }
    }

    /// Identifier used as a variable reference; must be in scope.
    fn var_ref(&mut self) -> Result<String, ParseError> {
        let (name, line, col) = self.ident()?;
        if self.scope.contains(&name) {
            Ok(name)
        } else {
            Err(ParseError::UnboundVariable { line, col, name })
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::All) | Some(TokenKind::Some_) => self.quantifier(),
            _ => self.iff_level(),
        }
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let universal = match self.next() {
            Some(Token { kind: TokenKind::All, .. }) => true,
            Some(Token { kind: TokenKind::Some_, .. }) => false,
            _ => unreachable!("caller checked quantifier keyword"),
        };
        let mut vars = vec![self.ident()?.0];
        while self.eat(&TokenKind::Comma) {
            vars.push(self.ident()?.0);
        }
        self.expect(TokenKind::Bar)?;
        self.scope.extend(vars.iter().cloned());
        let body = self.formula()?;
        self.scope.truncate(self.scope.len() - vars.len());
        Ok(if universal {
            Formula::Forall(vars, Box::new(body))
        } else {
            Formula::Exists(vars, Box::new(body))
        })
    }

    fn iff_level(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies_level()?;
        while self.eat(&TokenKind::Iff) {
            let rhs = self.implies_level()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies_level(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_level()?;
        if self.eat(&TokenKind::Implies) {
            let rhs = self.implies_level()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_level(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and_level()?;
        while self.eat(&TokenKind::Or) {
            let rhs = self.and_level()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_level(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&TokenKind::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            Some(TokenKind::Edge) => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                let u = self.var_ref()?;
                self.expect(TokenKind::Comma)?;
                let v = self.var_ref()?;
                self.expect(TokenKind::RParen)?;
                Ok(Formula::Edge(u, v))
            }
            Some(TokenKind::Ident(_)) => {
                let u = self.var_ref()?;
                match self.next() {
                    Some(Token { kind: TokenKind::Eq, .. }) => {
                        let v = self.var_ref()?;
                        Ok(Formula::Eq(u, v))
                    }
                    Some(Token { kind: TokenKind::Neq, .. }) => {
                        let v = self.var_ref()?;
                        Ok(Formula::Neq(u, v))
                    }
                    Some(t) => Err(ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        message: format!(
                            "expected `=` or `!=` after variable, found {}",
                            t.kind.describe()
                        ),
                    }),
                    None => Err(self.eof_error("expected `=` or `!=` after variable")),
                }
            }
            Some(_) => {
                let t = self.peek().unwrap();
                Err(ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    message: format!("expected a formula, found {}", t.kind.describe()),
                })
            }
            None => Err(self.eof_error("expected a formula")),
        }
    }
}
