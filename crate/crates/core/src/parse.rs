//! Text syntax for atoms and patterns.
//!
//! ```text
//! atom    := ident '(' arg (',' arg)* ')'
//! pattern := atom (',' atom)*
//! ```
//! Whitespace is allowed between tokens. Identifiers are `[A-Za-z0-9_]+`;
//! predicates must start with a lowercase letter.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::term::{Atom, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("predicate {predicate} used with arity {found}, previously {expected}")]
    ArityConflict {
        predicate: String,
        expected: usize,
        found: usize,
    },
}

impl ParseError {
    fn syntax(offset: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            offset,
            message: message.into(),
        }
    }
}

/// Tracks predicate arities across a corpus so conflicting uses are rejected.
#[derive(Debug, Default, Clone)]
pub struct Signatures {
    arities: HashMap<Arc<str>, usize>,
}

impl Signatures {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, atom: &Atom) -> Result<(), ParseError> {
        match self.arities.get(&atom.predicate) {
            Some(&expected) if expected != atom.arity() => Err(ParseError::ArityConflict {
                predicate: atom.predicate.to_string(),
                expected,
                found: atom.arity(),
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(atom.predicate.clone(), atom.arity());
                Ok(())
            }
        }
    }

    pub fn arity(&self, predicate: &str) -> Option<usize> {
        self.arities.get(predicate).copied()
    }

    /// Parses an atom and records its arity.
    pub fn parse_atom(&mut self, text: &str) -> Result<Atom, ParseError> {
        let atom = parse_atom(text)?;
        self.check(&atom)?;
        Ok(atom)
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(ParseError::syntax(
                self.pos,
                format!("expected '{want}', found '{c}'"),
            )),
            None => Err(ParseError::syntax(
                self.pos,
                format!("expected '{want}', found end of input"),
            )),
        }
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            let message = match self.peek() {
                Some(c) => format!("expected identifier, found '{c}'"),
                None => "expected identifier, found end of input".to_string(),
            };
            return Err(ParseError::syntax(start, message));
        }
        Ok(&self.text[start..self.pos])
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let predicate = self.ident()?;
        if !predicate.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(ParseError::syntax(
                start,
                format!("predicate '{predicate}' must start with a lowercase letter"),
            ));
        }
        self.skip_ws();
        self.expect('(')?;
        let mut args = Vec::new();
        loop {
            self.skip_ws();
            if args.is_empty() && self.peek() == Some(')') {
                return Err(ParseError::syntax(self.pos, "empty argument list"));
            }
            let arg = self.ident()?;
            args.push(Term::from_ident(arg));
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some('(') => {
                    return Err(ParseError::syntax(
                        self.pos,
                        "compound terms are not allowed",
                    ))
                }
                Some(c) => {
                    return Err(ParseError::syntax(
                        self.pos,
                        format!("expected ',' or ')', found '{c}'"),
                    ))
                }
                None => return Err(ParseError::syntax(self.pos, "unbalanced parentheses")),
            }
        }
        Ok(Atom::new(predicate, args))
    }
}

/// Parses a single atom; uppercase-initial arguments become variables.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut cur = Cursor::new(text);
    let atom = cur.atom()?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(ParseError::syntax(cur.pos, "trailing input after atom"));
    }
    Ok(atom)
}

/// Parses a comma-separated conjunction of atoms.
pub fn parse_atom_list(text: &str) -> Result<Vec<Atom>, ParseError> {
    let mut cur = Cursor::new(text);
    let mut atoms = vec![cur.atom()?];
    loop {
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(',') => {
                cur.pos += 1;
                atoms.push(cur.atom()?);
            }
            Some(c) => {
                return Err(ParseError::syntax(
                    cur.pos,
                    format!("expected ',' between atoms, found '{c}'"),
                ))
            }
        }
    }
    Ok(atoms)
}
