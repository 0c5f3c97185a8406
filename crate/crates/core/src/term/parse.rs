use thiserror::Error;

use super::{Perm, PermError, Term};
use crate::stdlib;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input at {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("unexpected character {found:?} at {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("expected a number at {pos}")]
    ExpectedNumber { pos: usize },
    #[error("number too large at {pos}")]
    NumberTooLarge { pos: usize },
    #[error("atom index must be at least 1 (at {pos})")]
    ZeroAtom { pos: usize },
    #[error("bad oracle map at {pos}: {source}")]
    BadOracle { pos: usize, source: PermError },
    #[error("unknown named term ${name} at {pos}")]
    UnknownName { pos: usize, name: String },
    #[error("empty term at {pos}")]
    Empty { pos: usize },
}

/// Parses the textual term syntax.
///
/// ```text
/// term     := atomterm { atomterm }
/// atomterm := "S" | "K" | "I" | "a" nat | "x" nat | "#" nat | "$" name
///           | "z[" [ nat "->" nat { "," nat "->" nat } ] "]" | "(" term ")"
/// ```
///
/// `I`, `#n` and `$name` are expanded to the corresponding closed `S`/`K`
/// terms.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        idx: 0,
        len: text.len(),
    };
    let t = p.term()?;
    p.skip_ws();
    if let Some((pos, c)) = p.peek() {
        return Err(ParseError::Unexpected { pos, found: c });
    }
    Ok(t)
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.idx).copied()
    }

    fn pos(&self) -> usize {
        self.peek().map(|(p, _)| p).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let c = self.peek();
        if c.is_some() {
            self.idx += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some((_, c)) if c.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.bump() {
            Some((_, c)) if c == want => Ok(()),
            Some((pos, c)) => Err(ParseError::Unexpected { pos, found: c }),
            None => Err(ParseError::UnexpectedEnd { pos: self.len }),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos();
        let mut acc: Option<Term> = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some((_, ')')) => break,
                Some(_) => {
                    let t = self.atomterm()?;
                    acc = Some(match acc {
                        None => t,
                        Some(h) => Term::app(h, t),
                    });
                }
            }
        }
        acc.ok_or(ParseError::Empty { pos: start })
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let pos = self.pos();
        let mut digits = String::new();
        while let Some((_, c)) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.idx += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(ParseError::ExpectedNumber { pos });
        }
        digits.parse().map_err(|_| ParseError::NumberTooLarge { pos })
    }

    fn atomterm(&mut self) -> Result<Term, ParseError> {
        let (pos, c) = self.bump().ok_or(ParseError::UnexpectedEnd { pos: self.len })?;
        match c {
            'S' => Ok(Term::s()),
            'K' => Ok(Term::k()),
            'I' => Ok(stdlib::identity()),
            'a' => {
                let n = self.nat()?;
                if n == 0 {
                    return Err(ParseError::ZeroAtom { pos });
                }
                Ok(Term::atom(n))
            }
            'x' => Ok(Term::var(self.nat()?)),
            '#' => Ok(stdlib::numeral(u64::from(self.nat()?))),
            '$' => {
                let mut name = String::new();
                while let Some((_, c)) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        self.idx += 1;
                    } else {
                        break;
                    }
                }
                stdlib::named(&name).ok_or(ParseError::UnknownName { pos, name })
            }
            'z' => {
                self.expect('[')?;
                let mut pairs = Vec::new();
                self.skip_ws();
                if !matches!(self.peek(), Some((_, ']'))) {
                    loop {
                        self.skip_ws();
                        let src = self.nat()?;
                        self.skip_ws();
                        self.expect('-')?;
                        self.expect('>')?;
                        self.skip_ws();
                        let dst = self.nat()?;
                        pairs.push((src, dst));
                        self.skip_ws();
                        match self.peek() {
                            Some((_, ',')) => {
                                self.idx += 1;
                            }
                            _ => break,
                        }
                    }
                }
                self.skip_ws();
                self.expect(']')?;
                let perm = Perm::from_pairs(pairs).map_err(|source| ParseError::BadOracle { pos, source })?;
                Ok(Term::oracle(perm))
            }
            '(' => {
                let t = self.term()?;
                self.skip_ws();
                self.expect(')')?;
                Ok(t)
            }
            found => Err(ParseError::Unexpected { pos, found }),
        }
    }
}

/// Parses a permutation written as `1->2,2->1`, optionally in brackets.
pub fn parse_perm(text: &str) -> Result<Perm, ParseError> {
    let inner = text.trim();
    let inner = inner.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(inner);
    match parse(&format!("z[{inner}]"))?.kind() {
        super::TermKind::Oracle(p) => Ok(p.clone()),
        _ => unreachable!("a bracketed map always parses to an oracle"),
    }
}
