//! Datalog terms and atoms.
//!
//! Terms are arity-0 only: a constant or a variable. Variables start with an
//! uppercase ASCII letter or `_`, everything else is a constant.

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Arc<str>),
    Var(Arc<str>),
}

impl Term {
    pub fn constant(name: impl AsRef<str>) -> Self {
        Term::Const(Arc::from(name.as_ref()))
    }

    pub fn var(name: impl AsRef<str>) -> Self {
        Term::Var(Arc::from(name.as_ref()))
    }

    /// Classifies an identifier by the lexical convention.
    pub fn from_ident(name: &str) -> Self {
        if is_variable_name(name) {
            Term::var(name)
        } else {
            Term::constant(name)
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Const(n) | Term::Var(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Term::Const(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn is_variable_name(name: &str) -> bool {
    name.chars()
        .next()
        .map(|c| c.is_ascii_uppercase() || c == '_')
        .unwrap_or(false)
}

/// `predicate(arg, ..., arg)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Arc<str>,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl AsRef<str>, args: Vec<Term>) -> Self {
        Atom {
            predicate: Arc::from(predicate.as_ref()),
            args,
        }
    }

    /// Builds an atom from identifiers, classifying each by the lexical convention.
    pub fn from_idents(predicate: &str, args: &[&str]) -> Self {
        Atom::new(
            predicate,
            args.iter().map(|a| Term::from_ident(a)).collect(),
        )
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_const)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Arc<str>> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }

    pub fn signature(&self) -> (Arc<str>, usize) {
        (self.predicate.clone(), self.args.len())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

/// Comma-joins atoms without spaces, the pattern serialization used everywhere.
pub fn join_atoms(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
