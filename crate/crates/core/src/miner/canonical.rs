//! Renaming-invariant keys and θ-equivalence.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::sequence::Pattern;
use crate::subsume::theta_subsumes;
use crate::term::{Atom, Term};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Tok {
    Var(usize),
    Const(Arc<str>),
}

type Row = (Arc<str>, Vec<Tok>);

/// Deterministic key, identical for patterns equal up to variable renaming
/// and atom order.
///
/// Atoms are laid out in the lexicographically smallest order, with variables
/// numbered by first occurrence in that order. Ties between atoms that render
/// identically are explored exhaustively so the minimum is exact.
pub fn canonical_form(pattern: &Pattern) -> String {
    let mut seen = HashSet::new();
    let atoms: Vec<&Atom> = pattern.atoms.iter().filter(|a| seen.insert(*a)).collect();
    let mut search = Search {
        atoms: &atoms,
        best: None,
    };
    let mut used = vec![false; atoms.len()];
    search.run(&mut used, &mut HashMap::new(), &mut Vec::new());
    render(&search.best.unwrap_or_default())
}

struct Search<'a> {
    atoms: &'a [&'a Atom],
    best: Option<Vec<Row>>,
}

impl<'a> Search<'a> {
    fn run(
        &mut self,
        used: &mut [bool],
        names: &mut HashMap<&'a Arc<str>, usize>,
        prefix: &mut Vec<Row>,
    ) {
        if prefix.len() == self.atoms.len() {
            if self
                .best
                .as_ref()
                .is_none_or(|b| prefix.as_slice() < b.as_slice())
            {
                self.best = Some(prefix.clone());
            }
            return;
        }
        let rows: Vec<(usize, Row)> = (0..self.atoms.len())
            .filter(|&i| !used[i])
            .map(|i| (i, row_for(self.atoms[i], names)))
            .collect();
        let min = rows
            .iter()
            .map(|(_, r)| r)
            .min()
            .expect("unused atom")
            .clone();
        if let Some(best) = &self.best {
            let depth = prefix.len();
            let candidate = prefix.iter().chain(std::iter::once(&min));
            if candidate.cmp(best[..depth + 1].iter()) == std::cmp::Ordering::Greater {
                return;
            }
        }
        for (i, row) in rows {
            if row != min {
                continue;
            }
            let atom = self.atoms[i];
            let added: Vec<&Arc<str>> = atom
                .vars()
                .filter(|v| !names.contains_key(v))
                .collect::<Vec<_>>();
            let mut fresh = Vec::new();
            for v in added {
                if !names.contains_key(v) {
                    let n = names.len();
                    names.insert(v, n);
                    fresh.push(v);
                }
            }
            used[i] = true;
            prefix.push(row);
            self.run(used, names, prefix);
            prefix.pop();
            used[i] = false;
            for v in fresh {
                names.remove(v);
            }
        }
    }
}

fn row_for(atom: &Atom, names: &HashMap<&Arc<str>, usize>) -> Row {
    let mut local: HashMap<&Arc<str>, usize> = HashMap::new();
    let toks = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => Tok::Var(match names.get(v) {
                Some(&n) => n,
                None => {
                    let n = names.len() + local.len();
                    *local.entry(v).or_insert(n)
                }
            }),
            Term::Const(c) => Tok::Const(c.clone()),
        })
        .collect();
    (atom.predicate.clone(), toks)
}

fn render(rows: &[Row]) -> String {
    rows.iter()
        .map(|(p, toks)| {
            let args: Vec<String> = toks
                .iter()
                .map(|t| match t {
                    Tok::Var(n) => format!("V{n}"),
                    Tok::Const(c) => c.to_string(),
                })
                .collect();
            format!("{p}({})", args.join(","))
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Mutual θ-subsumption, each side's variables held rigid when it is the
/// specific side.
pub fn is_equivalent(p1: &Pattern, p2: &Pattern) -> bool {
    theta_subsumes(&p1.atoms, &p2.atoms).is_some() && theta_subsumes(&p2.atoms, &p1.atoms).is_some()
}

/// Smallest θ-equivalent sub-pattern, found by dropping atoms the rest can
/// absorb. Atom order of the survivors is preserved.
pub fn reduce(pattern: &Pattern) -> Pattern {
    let mut seen = HashSet::new();
    let mut atoms: Vec<Atom> = pattern
        .atoms
        .iter()
        .filter(|a| seen.insert(*a))
        .cloned()
        .collect();
    'outer: loop {
        for i in (0..atoms.len()).rev() {
            if atoms.len() == 1 {
                break 'outer;
            }
            let mut rest = atoms.clone();
            rest.remove(i);
            if theta_subsumes(&atoms, &rest).is_some() {
                atoms = rest;
                continue 'outer;
            }
        }
        break;
    }
    Pattern::new(atoms)
}
