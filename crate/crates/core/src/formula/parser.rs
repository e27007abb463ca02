use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

use super::{Formula, FormulaSet};

/// A syntax error; `position` is a character offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Letter(String),
    Not,
    And,
    Or,
    Imp,
    LParen,
    RParen,
    Comma,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Letter(name) => format!("letter `{name}`"),
            Token::Not => "`~`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Imp => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut out = Vec::new();
    let mut chars: Peekable<CharIndices<'_>> = text.char_indices().peekable();
    // Positions are reported in characters, not bytes.
    let char_pos = |byte: usize| text[..byte].chars().count();
    while let Some(&(byte, c)) = chars.peek() {
        let pos = char_pos(byte);
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '~' | '¬' => {
                chars.next();
                out.push((pos, Token::Not));
            }
            '&' | '∧' => {
                chars.next();
                out.push((pos, Token::And));
            }
            '|' | '∨' => {
                chars.next();
                out.push((pos, Token::Or));
            }
            '→' => {
                chars.next();
                out.push((pos, Token::Imp));
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some((_, '>')) => out.push((pos, Token::Imp)),
                    _ => {
                        return Err(ParseError {
                            position: pos,
                            message: "expected `->`".into(),
                        })
                    }
                }
            }
            '(' => {
                chars.next();
                out.push((pos, Token::LParen));
            }
            ')' => {
                chars.next();
                out.push((pos, Token::RParen));
            }
            ',' => {
                chars.next();
                out.push((pos, Token::Comma));
            }
            c if c.is_ascii_lowercase() => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Token::Letter(name)));
            }
            other => {
                return Err(ParseError {
                    position: pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((text.chars().count(), Token::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn position(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.position(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    // imp := dis ("->" imp)?
    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.dis()?;
        if *self.peek() == Token::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(lhs.imp(rhs));
        }
        Ok(lhs)
    }

    // dis := con ("|" con)*
    fn dis(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.con()?;
        while *self.peek() == Token::Or {
            self.bump();
            acc = acc.or(self.con()?);
        }
        Ok(acc)
    }

    // con := neg ("&" neg)*
    fn con(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.neg()?;
        while *self.peek() == Token::And {
            self.bump();
            acc = acc.and(self.neg()?);
        }
        Ok(acc)
    }

    // neg := "~"* atom
    fn neg(&mut self) -> Result<Formula, ParseError> {
        let mut count = 0;
        while *self.peek() == Token::Not {
            self.bump();
            count += 1;
        }
        let mut f = self.atom()?;
        for _ in 0..count {
            f = f.neg();
        }
        Ok(f)
    }

    // atom := letter | "(" formula ")"
    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::Letter(name) => {
                self.bump();
                Ok(Formula::letter(&name))
            }
            Token::LParen => {
                self.bump();
                let inner = self.imp()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("a letter or `(`")),
        }
    }
}

/// Parses a single formula.
///
/// Precedence is `~` > `&` > `|` > `->`; `->` associates to the right,
/// `&` and `|` to the left. `¬ ∧ ∨ →` are accepted as aliases.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let f = parser.imp()?;
    if *parser.peek() != Token::End {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}

/// Parses a comma-separated list of formulas. Blank input is the empty set.
pub fn parse_set(text: &str) -> Result<FormulaSet, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let mut items = Vec::new();
    if *parser.peek() == Token::End {
        return Ok(FormulaSet::new());
    }
    loop {
        items.push(parser.imp()?);
        match parser.peek() {
            Token::Comma => {
                parser.bump();
            }
            Token::End => break,
            _ => return Err(parser.error("`,` or end of input")),
        }
    }
    Ok(items.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::letter("p")
    }
    fn q() -> Formula {
        Formula::letter("q")
    }

    #[test]
    fn implication_is_right_associative() {
        let r = Formula::letter("r");
        assert_eq!(parse("p -> q -> r").unwrap(), p().imp(q().imp(r)));
    }

    #[test]
    fn negation_binds_tightest() {
        assert_eq!(parse("~p & q").unwrap(), p().neg().and(q()));
        assert_eq!(parse("~(p -> p)").unwrap(), p().imp(p()).neg());
    }

    #[test]
    fn conjunction_binds_tighter_than_disjunction() {
        let r = Formula::letter("r");
        assert_eq!(parse("p | q & r").unwrap(), p().or(q().and(r.clone())));
        assert_eq!(parse("p | q -> r").unwrap(), p().or(q()).imp(r));
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("¬p ∧ q").unwrap(), parse("~p & q").unwrap());
        assert_eq!(parse("p ∨ q → p").unwrap(), parse("p | q -> p").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("p & ").unwrap_err();
        assert_eq!(err.position, 4);
        let err = parse("(p | q").unwrap_err();
        assert_eq!(err.position, 6);
        assert!(err.message.contains("`)`"));
        let err = parse("p - q").unwrap_err();
        assert_eq!(err.position, 2);
        let err = parse("P").unwrap_err();
        assert_eq!(err.position, 0);
        let err = parse("¬ #").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(parse("p q").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn formula_sets() {
        let set = parse_set("p | q, ~p").unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&p().or(q())));
        assert!(parse_set("").unwrap().is_empty());
        assert!(parse_set("   ").unwrap().is_empty());
        assert!(parse_set("p,").is_err());
        assert!(parse_set(", p").is_err());
    }
}
