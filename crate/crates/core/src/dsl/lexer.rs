//! Tokenizer for the property language.

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    All,
    Some_,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Edge,
    LParen,
    RParen,
    Comma,
    Bar,
    Eq,
    Neq,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::All => "`all`".into(),
            TokenKind::Some_ => "`some`".into(),
            TokenKind::Not => "`not`".into(),
            TokenKind::And => "`and`".into(),
            TokenKind::Or => "`or`".into(),
            TokenKind::Implies => "`implies`".into(),
            TokenKind::Iff => "`iff`".into(),
            TokenKind::Edge => "`edge`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Bar => "`|`".into(),
            TokenKind::Eq => "`=`".into(),
            TokenKind::Neq => "`!=`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
    pub col: u32,
}

pub fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = source.chars().peekable();

    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match ch {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '(' => {
                bump(&mut chars);
                tokens.push(Token { kind: TokenKind::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump(&mut chars);
                tokens.push(Token { kind: TokenKind::RParen, line: tline, col: tcol });
            }
            ',' => {
                bump(&mut chars);
                tokens.push(Token { kind: TokenKind::Comma, line: tline, col: tcol });
            }
            '|' => {
                bump(&mut chars);
                tokens.push(Token { kind: TokenKind::Bar, line: tline, col: tcol });
            }
            '=' => {
                bump(&mut chars);
                tokens.push(Token { kind: TokenKind::Eq, line: tline, col: tcol });
            }
            '!' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    tokens.push(Token { kind: TokenKind::Neq, line: tline, col: tcol });
                } else {
                    return Err(ParseError::Lex {
                        line: tline,
                        col: tcol,
                        message: "expected `=` after `!`".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_alphanumeric() || c2 == '_' {
                        word.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                let kind = match word.as_str() {
                    "all" => TokenKind::All,
                    "some" => TokenKind::Some_,
                    "not" => TokenKind::Not,
                    "and" => TokenKind::And,
                    "or" => TokenKind::Or,
                    "implies" => TokenKind::Implies,
                    "iff" => TokenKind::Iff,
                    "edge" => TokenKind::Edge,
                    _ => TokenKind::Ident(word),
                };
                tokens.push(Token { kind, line: tline, col: tcol });
            }
            c => {
                return Err(ParseError::Lex {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(tokens)
}
