//! Recursive-descent parser for group expressions.
//!
//! Grammar (whitespace-insensitive, `wr` associates to the left):
//!
//! ```text
//! expr ::= atom ("wr" atom)*
//! atom ::= "C2" | "Z" | "Z2" | "(" expr ")"
//! ```

use super::GroupSpec;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
    end: usize,
    pos: usize,
}

impl Lexer {
    fn new(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c == '(' {
                tokens.push((i, Token::LParen));
                i += 1;
            } else if c == ')' {
                tokens.push((i, Token::RParen));
                i += 1;
            } else if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
            } else {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("unexpected character {c:?}"),
                });
            }
        }
        Ok(Lexer {
            tokens,
            end: text.len(),
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(o, _)| *o).unwrap_or(self.end)
    }
}

/// Parse a group expression such as `"C2 wr Z2 wr Z2"`.
///
/// Errors carry the byte offset of the first offending position.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let mut lx = Lexer::new(text)?;
    let spec = parse_expr(&mut lx)?;
    if let Some((offset, tok)) = lx.next() {
        return Err(Error::Parse {
            offset,
            message: format!("unexpected trailing {tok:?}"),
        });
    }
    Ok(spec)
}

fn parse_expr(lx: &mut Lexer) -> Result<GroupSpec> {
    let mut acc = parse_atom(lx)?;
    while let Some((_, Token::Ident(id))) = lx.peek() {
        if id == "wr" {
            lx.next();
            let rhs = parse_atom(lx)?;
            acc = GroupSpec::wreath(acc, rhs);
        } else {
            break;
        }
    }
    Ok(acc)
}

fn parse_atom(lx: &mut Lexer) -> Result<GroupSpec> {
    let offset = lx.here();
    match lx.next() {
        Some((_, Token::Ident(id))) => match id.as_str() {
            "C2" => Ok(GroupSpec::CyclicTwo),
            "Z" => Ok(GroupSpec::IntegerLine),
            "Z2" => Ok(GroupSpec::IntegerGrid),
            "wr" => Err(Error::Parse {
                offset,
                message: "expected a group atom, found operator `wr`".into(),
            }),
            other => Err(Error::Parse {
                offset,
                message: format!("unknown group atom {other:?}"),
            }),
        },
        Some((lp, Token::LParen)) => {
            let inner = parse_expr(lx)?;
            match lx.next() {
                Some((_, Token::RParen)) => Ok(inner),
                Some((offset, tok)) => Err(Error::Parse {
                    offset,
                    message: format!("expected `)`, found {tok:?}"),
                }),
                None => Err(Error::Parse {
                    offset: lx.end,
                    message: format!("unclosed `(` opened at byte {lp}"),
                }),
            }
        }
        Some((offset, tok)) => Err(Error::Parse {
            offset,
            message: format!("expected a group atom, found {tok:?}"),
        }),
        None => Err(Error::Parse {
            offset: lx.end,
            message: "expected a group atom, found end of input".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_and_wreath() {
        assert_eq!(parse_group_spec("C2").unwrap(), GroupSpec::CyclicTwo);
        assert_eq!(
            parse_group_spec("C2 wr Z").unwrap(),
            GroupSpec::wreath(GroupSpec::CyclicTwo, GroupSpec::IntegerLine)
        );
    }

    #[test]
    fn wr_is_left_associative() {
        let iterated = GroupSpec::wreath(
            GroupSpec::wreath(GroupSpec::CyclicTwo, GroupSpec::IntegerGrid),
            GroupSpec::IntegerGrid,
        );
        assert_eq!(parse_group_spec("C2 wr Z2 wr Z2").unwrap(), iterated);
        assert_eq!(parse_group_spec("(C2 wr Z2) wr Z2").unwrap(), iterated);
        assert_ne!(
            parse_group_spec("C2 wr (Z2 wr Z2)").unwrap(),
            iterated,
            "explicit parens must override left associativity"
        );
    }

    #[test]
    fn error_offset_points_past_dangling_operator() {
        let err = parse_group_spec("C2 wr").unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn error_offsets_are_byte_positions() {
        match parse_group_spec("C2 wr Q").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        match parse_group_spec("(C2 wr Z").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 8),
            other => panic!("{other:?}"),
        }
        match parse_group_spec("C2 ) Z").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
    }
}
