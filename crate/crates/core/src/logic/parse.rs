//! Recursive-descent parser for Heyting terms and Horn sequents.
//!
//! Grammar (precedence low to high, `->` right-associative, `&`/`|`
//! left-associative):
//!
//! ```text
//! sequent := term | [eq ("," eq)*] "|-" eq
//! eq      := term "=" term
//! term    := or ("->" term)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "0" | "1" | var | "(" term ")"
//! var     := [a-z][a-zA-Z0-9_]*
//! ```
//!
//! `|-` is lexed greedily: `|` immediately followed by `-` is the turnstile.

use thiserror::Error;

use super::{Equation, HornSequent, Term};

/// A syntax error, annotated with the 1-based token index and the byte
/// offset of the offending token (end of input points one past the last
/// byte).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at token {token} (byte {offset}): {message}")]
pub struct ParseError {
    pub token: usize,
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Var(String),
    Not,
    And,
    Or,
    Imp,
    Eq,
    Comma,
    Turnstile,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Zero => "`0`".to_string(),
            Tok::One => "`1`".to_string(),
            Tok::Var(name) => format!("variable `{name}`"),
            Tok::Not => "`~`".to_string(),
            Tok::And => "`&`".to_string(),
            Tok::Or => "`|`".to_string(),
            Tok::Imp => "`->`".to_string(),
            Tok::Eq => "`=`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Turnstile => "`|-`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'0' => {
                toks.push((Tok::Zero, i));
                i += 1;
            }
            b'1' => {
                toks.push((Tok::One, i));
                i += 1;
            }
            b'~' => {
                toks.push((Tok::Not, i));
                i += 1;
            }
            b'&' => {
                toks.push((Tok::And, i));
                i += 1;
            }
            b'|' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    toks.push((Tok::Turnstile, i));
                    i += 2;
                } else {
                    toks.push((Tok::Or, i));
                    i += 1;
                }
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Imp, i));
                    i += 2;
                } else {
                    return Err(ParseError {
                        token: toks.len() + 1,
                        offset: i,
                        message: "`-` must be part of `->`".to_string(),
                    });
                }
            }
            b'=' => {
                toks.push((Tok::Eq, i));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'a'..=b'z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Var(input[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    token: toks.len() + 1,
                    offset: i,
                    message: format!(
                        "unexpected character `{}`",
                        input[i..].chars().next().unwrap()
                    ),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn advance(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let offset = self
            .toks
            .get(self.pos)
            .map(|&(_, o)| o)
            .unwrap_or(self.input_len);
        ParseError {
            token: self.pos + 1,
            offset,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!(
                "expected {}, found {}",
                want.describe(),
                t.describe()
            ))),
            None => Err(self.error(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.pos += 1;
            let rhs = self.term()?;
            return Ok(Term::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            acc = Term::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            acc = Term::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Term::not(self.unary()?))
            }
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some(Tok::Var(_)) => {
                let Some(Tok::Var(name)) = self.advance() else {
                    unreachable!()
                };
                Ok(Term::Var(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(other) => Err(self.error(format!("expected a term, found {}", other.describe()))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    fn equation(&mut self) -> Result<Equation, ParseError> {
        let lhs = self.term()?;
        self.expect(&Tok::Eq)?;
        let rhs = self.term()?;
        Ok(Equation::new(lhs, rhs))
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("expected end of input, found {}", t.describe()))),
        }
    }
}

fn parser(input: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: tokenize(input)?,
        pos: 0,
        input_len: input.len(),
    })
}

/// Parses a term.
pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    let mut p = parser(input)?;
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

/// Parses a Horn sequent. A bare term `t` abbreviates the axiom `|- 1 = t`.
pub fn parse_sequent(input: &str) -> Result<HornSequent, ParseError> {
    let mut p = parser(input)?;

    // Leading turnstile: no premises.
    if p.peek() == Some(&Tok::Turnstile) {
        p.pos += 1;
        let conclusion = p.equation()?;
        p.end()?;
        return Ok(HornSequent::new(Vec::new(), conclusion));
    }

    let first = p.term()?;
    match p.peek() {
        // Bare term: the axiom form.
        None => Ok(HornSequent::axiom(first)),
        Some(Tok::Eq) => {
            p.pos += 1;
            let rhs = p.term()?;
            let mut premises = vec![Equation::new(first, rhs)];
            while p.peek() == Some(&Tok::Comma) {
                p.pos += 1;
                premises.push(p.equation()?);
            }
            p.expect(&Tok::Turnstile)?;
            let conclusion = p.equation()?;
            p.end()?;
            Ok(HornSequent::new(premises, conclusion))
        }
        Some(other) => Err(p.error(format!(
            "expected `=`, `|-`, or end of input, found {}",
            other.describe()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_term("p -> q -> r").unwrap(),
            Term::imp(Term::var("p"), Term::imp(Term::var("q"), Term::var("r")))
        );
        assert_eq!(
            parse_term("p & q | r").unwrap(),
            Term::or(Term::and(Term::var("p"), Term::var("q")), Term::var("r"))
        );
        assert_eq!(
            parse_term("~p & q").unwrap(),
            Term::and(Term::not(Term::var("p")), Term::var("q"))
        );
        assert_eq!(
            parse_term("p | q | r").unwrap(),
            Term::or(Term::or(Term::var("p"), Term::var("q")), Term::var("r"))
        );
    }

    #[test]
    fn turnstile_lexes_greedily() {
        let seq = parse_sequent("p = 1 |- q = 1").unwrap();
        assert_eq!(seq.premises.len(), 1);
    }

    #[test]
    fn error_points_at_first_bad_token() {
        let err = parse_term("p -> -> q").unwrap_err();
        assert_eq!(err.token, 3);
        assert_eq!(err.offset, 5);

        let err = parse_term("p q").unwrap_err();
        assert_eq!(err.token, 2);

        let err = parse_term("p @ q").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn unterminated_parenthesis() {
        let err = parse_term("(p | q").unwrap_err();
        assert!(err.message.contains("`)`"));
    }

    #[test]
    fn bare_equation_without_turnstile_is_rejected() {
        assert!(parse_sequent("p = q").is_err());
    }
}
