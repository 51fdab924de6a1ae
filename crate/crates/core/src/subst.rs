use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::term::{Atom, Term};

/// A set of variable bindings `{X <- t, ...}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    bindings: BTreeMap<Arc<str>, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a binding. Returns `false` and leaves the substitution unchanged
    /// when the variable is already bound to a different term.
    pub fn bind(&mut self, var: impl AsRef<str>, term: Term) -> bool {
        let var: Arc<str> = Arc::from(var.as_ref());
        match self.bindings.get(&var) {
            Some(existing) => *existing == term,
            None => {
                self.bindings.insert(var, term);
                true
            }
        }
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Arc<str>, &Term)> {
        self.bindings.iter()
    }

    pub fn apply_term(&self, term: &Term) -> Term {
        match term {
            Term::Var(v) => self
                .bindings
                .get(v)
                .cloned()
                .unwrap_or_else(|| term.clone()),
            Term::Const(_) => term.clone(),
        }
    }

    pub fn apply_atom(&self, atom: &Atom) -> Atom {
        Atom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }
}

impl FromIterator<(Arc<str>, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Arc<str>, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.bind(v, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}<-{t}")?;
        }
        f.write_str("}")
    }
}

/// Replaces every bound variable; unbound variables and atom order are kept.
pub fn apply_substitution(atoms: &[Atom], theta: &Substitution) -> Vec<Atom> {
    atoms.iter().map(|a| theta.apply_atom(a)).collect()
}
