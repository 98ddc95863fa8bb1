//! Lexer and parser for polynomial expressions.
//!
//! Both user-facing text formats (algebra files and elimination replay
//! scripts) spell coefficients the same way: rational literals such as
//! `5143/7000`, named symbols, `^` powers, `*` or juxtaposition for products,
//! and parenthesized subexpressions. This module owns that shared grammar.
//! Symbol names are resolved through a caller-supplied table, so each format
//! keeps control over which names are legal where.
//!
//! Errors are plain strings; callers attach line numbers.

use crate::scalar::{MultiPoly, Rat};

/// One lexical token of either text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    /// Unsigned integer literal (digits only; sign and `/` are separate).
    Int(String),
    /// Identifier. With indexed-name fusing enabled, `m[1,2]` lexes as a
    /// single identifier including the brackets.
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Eq,
}

impl std::fmt::Display for Token {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Token::Int(s) => write!(f, "`{s}`"),
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Plus => write!(f, "`+`"),
            Token::Minus => write!(f, "`-`"),
            Token::Star => write!(f, "`*`"),
            Token::Slash => write!(f, "`/`"),
            Token::Caret => write!(f, "`^`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::LBracket => write!(f, "`[`"),
            Token::RBracket => write!(f, "`]`"),
            Token::LBrace => write!(f, "`{{`"),
            Token::RBrace => write!(f, "`}}`"),
            Token::Comma => write!(f, "`,`"),
            Token::Eq => write!(f, "`=`"),
        }
    }
}

/// Splits a line into tokens. Text after `#` is a comment and ignored.
///
/// With `fuse_indexed` set, an identifier immediately followed by `[` swallows
/// a bracketed integer index list into the identifier itself, normalizing
/// whitespace: `m[1, 2]` becomes the single name `m[1,2]`. Replay scripts use
/// this; algebra files (where `[` opens a bracket pair) do not.
pub fn tokenize(src: &str, fuse_indexed: bool) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut pos = 0usize;
    while pos < chars.len() {
        let c = chars[pos];
        match c {
            '#' => break,
            _ if c.is_whitespace() => pos += 1,
            '0'..='9' => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                out.push(Token::Int(chars[start..pos].iter().collect()));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_alphanumeric() || chars[pos] == '_')
                {
                    pos += 1;
                }
                let mut name: String = chars[start..pos].iter().collect();
                if fuse_indexed && pos < chars.len() && chars[pos] == '[' {
                    name.push('[');
                    pos += 1;
                    let mut expecting_digit = true;
                    loop {
                        if pos >= chars.len() {
                            return Err(format!(
                                "unterminated index list in `{name}`"
                            ));
                        }
                        let d = chars[pos];
                        if d.is_whitespace() {
                            pos += 1;
                        } else if d.is_ascii_digit() {
                            name.push(d);
                            pos += 1;
                            expecting_digit = false;
                        } else if d == ',' && !expecting_digit {
                            name.push(',');
                            pos += 1;
                            expecting_digit = true;
                        } else if d == ']' && !expecting_digit {
                            name.push(']');
                            pos += 1;
                            break;
                        } else {
                            return Err(format!(
                                "bad character `{d}` in index list of `{name}`"
                            ));
                        }
                    }
                }
                out.push(Token::Ident(name));
            }
            '+' => {
                out.push(Token::Plus);
                pos += 1;
            }
            '-' => {
                out.push(Token::Minus);
                pos += 1;
            }
            '*' => {
                out.push(Token::Star);
                pos += 1;
            }
            '/' => {
                out.push(Token::Slash);
                pos += 1;
            }
            '^' => {
                out.push(Token::Caret);
                pos += 1;
            }
            '(' => {
                out.push(Token::LParen);
                pos += 1;
            }
            ')' => {
                out.push(Token::RParen);
                pos += 1;
            }
            '[' => {
                out.push(Token::LBracket);
                pos += 1;
            }
            ']' => {
                out.push(Token::RBracket);
                pos += 1;
            }
            '{' => {
                out.push(Token::LBrace);
                pos += 1;
            }
            '}' => {
                out.push(Token::RBrace);
                pos += 1;
            }
            ',' => {
                out.push(Token::Comma);
                pos += 1;
            }
            '=' => {
                out.push(Token::Eq);
                pos += 1;
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

/// Recursive-descent parser over a token slice.
///
/// Grammar (whitespace already removed by the lexer):
/// ```text
/// expression := [sign] product (('+'|'-') product)*
/// product    := power (('*')? power)*          -- juxtaposition multiplies
/// power      := atom ['^' INT]
/// atom       := rational | IDENT | '(' expression ')'
/// rational   := INT ['/' INT]
/// ```
pub struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> ExprParser<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        ExprParser { toks, pos: 0 }
    }

    /// Parses the whole slice as one expression; trailing tokens are an error.
    pub fn parse_all(
        toks: &'a [Token],
        resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    ) -> Result<MultiPoly, String> {
        let mut parser = ExprParser::new(toks);
        let expr = parser.expression(resolve)?;
        match parser.peek() {
            None => Ok(expr),
            Some(tok) => Err(format!("unexpected {tok} after expression")),
        }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn advance(&mut self) -> Option<&'a Token> {
        let tok = self.toks.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    pub fn expression(
        &mut self,
        resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    ) -> Result<MultiPoly, String> {
        let mut acc = self.signed_product(resolve)?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    let rhs = self.signed_product(resolve)?;
                    acc = &acc + &rhs;
                }
                Some(Token::Minus) => {
                    self.advance();
                    let rhs = self.signed_product(resolve)?;
                    acc = &acc - &rhs;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn signed_product(
        &mut self,
        resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    ) -> Result<MultiPoly, String> {
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Token::Minus) => {
                    negate = !negate;
                    self.advance();
                }
                Some(Token::Plus) => {
                    self.advance();
                }
                _ => break,
            }
        }
        let product = self.product(resolve)?;
        Ok(if negate { -&product } else { product })
    }

    fn product(
        &mut self,
        resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    ) -> Result<MultiPoly, String> {
        let mut acc = self.power(resolve)?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.advance();
                    let rhs = self.power(resolve)?;
                    acc = &acc * &rhs;
                }
                Some(Token::Int(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    let rhs = self.power(resolve)?;
                    acc = &acc * &rhs;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(
        &mut self,
        resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    ) -> Result<MultiPoly, String> {
        let base = self.atom(resolve)?;
        if let Some(Token::Caret) = self.peek() {
            self.advance();
            let exp = match self.advance() {
                Some(Token::Int(digits)) => digits
                    .parse::<u16>()
                    .map_err(|_| format!("exponent `{digits}` is out of range"))?,
                Some(tok) => return Err(format!("expected an exponent, found {tok}")),
                None => return Err("expected an exponent at end of line".to_string()),
            };
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(
        &mut self,
        resolve: &dyn Fn(&str) -> Option<MultiPoly>,
    ) -> Result<MultiPoly, String> {
        match self.advance() {
            Some(Token::Int(num)) => {
                let mut literal = num.clone();
                if let Some(Token::Slash) = self.peek() {
                    self.advance();
                    match self.advance() {
                        Some(Token::Int(den)) => {
                            literal.push('/');
                            literal.push_str(den);
                        }
                        Some(tok) => {
                            return Err(format!(
                                "expected a denominator after `/`, found {tok}"
                            ))
                        }
                        None => {
                            return Err(
                                "expected a denominator after `/` at end of line"
                                    .to_string(),
                            )
                        }
                    }
                }
                let value = Rat::parse(&literal)
                    .map_err(|_| format!("bad rational literal `{literal}`"))?;
                Ok(MultiPoly::constant(value))
            }
            Some(Token::Ident(name)) => {
                resolve(name).ok_or_else(|| format!("unknown symbol `{name}`"))
            }
            Some(Token::LParen) => {
                let inner = self.expression(resolve)?;
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    Some(tok) => Err(format!("expected `)`, found {tok}")),
                    None => Err("missing `)` at end of line".to_string()),
                }
            }
            Some(tok) => Err(format!("expected a value, found {tok}")),
            None => Err("expected a value at end of line".to_string()),
        }
    }
}
