//! Relational sequences, patterns and pattern occurrence.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::parse::{parse_atom_list, ParseError};
use crate::subsume::Target;
use crate::term::{join_atoms, Atom, Term};

/// Team approach a sequence was recorded under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Cbr,
    Rea,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 2] = [ClassLabel::Cbr, ClassLabel::Rea];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Cbr => "cbr",
            ClassLabel::Rea => "rea",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cbr" => Ok(ClassLabel::Cbr),
            "rea" => Ok(ClassLabel::Rea),
            other => Err(format!(
                "unknown class label '{other}' (expected cbr or rea)"
            )),
        }
    }
}

/// One trial episode as an ordered list of ground atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalSequence {
    pub id: String,
    pub class_label: ClassLabel,
    pub atoms: Vec<Atom>,
    /// Extra `key=value` header attributes (e.g. `scenario`).
    pub attrs: BTreeMap<String, String>,
}

impl RelationalSequence {
    pub fn new(id: impl Into<String>, class_label: ClassLabel, atoms: Vec<Atom>) -> Self {
        RelationalSequence {
            id: id.into(),
            class_label,
            atoms,
            attrs: BTreeMap::new(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atoms.iter().all(Atom::is_ground)
    }
}

/// A conjunction of (possibly non-ground) atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Pattern {
    pub atoms: Vec<Atom>,
}

impl Pattern {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Pattern { atoms }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Ok(Pattern::new(parse_atom_list(text)?))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Distinct variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Arc<str>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for v in self.atoms.iter().flat_map(Atom::vars) {
            if seen.insert(v.clone()) {
                out.push(v.clone());
            }
        }
        out
    }

    /// True when the variable-sharing graph over the atoms has one component.
    pub fn is_connected(&self) -> bool {
        let n = self.atoms.len();
        if n <= 1 {
            return true;
        }
        let mut reached = vec![false; n];
        let mut frontier = vec![0usize];
        reached[0] = true;
        let mut seen_vars: HashSet<&Arc<str>> = HashSet::new();
        while let Some(i) = frontier.pop() {
            for v in self.atoms[i].vars() {
                if !seen_vars.insert(v) {
                    continue;
                }
                for (j, other) in self.atoms.iter().enumerate() {
                    if !reached[j] && other.vars().any(|w| w == v) {
                        reached[j] = true;
                        frontier.push(j);
                    }
                }
            }
        }
        reached.into_iter().all(|r| r)
    }

    /// Renames variables to `A, B, C, ...` by first occurrence.
    pub fn with_standard_names(&self) -> Pattern {
        let names: HashMap<Arc<str>, Term> = self
            .vars()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Term::var(standard_var_name(i))))
            .collect();
        Pattern::new(
            self.atoms
                .iter()
                .map(|a| Atom {
                    predicate: a.predicate.clone(),
                    args: a
                        .args
                        .iter()
                        .map(|t| match t {
                            Term::Var(v) => names[v].clone(),
                            c => c.clone(),
                        })
                        .collect(),
                })
                .collect(),
        )
    }

    /// Replaces every variable by a fresh distinct constant (`sk_<name>`).
    pub fn skolemize(&self) -> Vec<Atom> {
        self.atoms
            .iter()
            .map(|a| Atom {
                predicate: a.predicate.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => Term::constant(format!("sk_{v}")),
                        c => c.clone(),
                    })
                    .collect(),
            })
            .collect()
    }
}

/// `A..Z`, then `A1..Z1`, `A2..`.
pub fn standard_var_name(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    match i / 26 {
        0 => letter.to_string(),
        n => format!("{letter}{n}"),
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_atoms(&self.atoms))
    }
}

impl FromStr for Pattern {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pattern::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Pattern atoms map into the sequence as a set; unmatched atoms may interleave.
    #[default]
    Conjunctive,
    /// Pattern atoms map, in order, onto a contiguous block of sequence atoms.
    Contiguous,
}

pub fn occurs_in(pattern: &Pattern, sequence: &RelationalSequence, mode: MatchMode) -> bool {
    match mode {
        MatchMode::Conjunctive => Target::new(&sequence.atoms).matches(&pattern.atoms),
        MatchMode::Contiguous => occurs_contiguous(&pattern.atoms, &sequence.atoms),
    }
}

fn occurs_contiguous(pattern: &[Atom], seq: &[Atom]) -> bool {
    let k = pattern.len();
    if k == 0 {
        return true;
    }
    if k > seq.len() {
        return false;
    }
    (0..=seq.len() - k).any(|j| {
        let mut theta: HashMap<&Arc<str>, &Term> = HashMap::new();
        pattern.iter().zip(&seq[j..j + k]).all(|(p, s)| {
            p.predicate == s.predicate
                && p.arity() == s.arity()
                && p.args.iter().zip(&s.args).all(|(pt, st)| match pt {
                    Term::Var(v) => *theta.entry(v).or_insert(st) == st,
                    c => c == st,
                })
        })
    })
}

/// Number of sequences in which the pattern occurs (conjunctive semantics).
pub fn support(pattern: &Pattern, corpus: &[RelationalSequence]) -> usize {
    corpus
        .iter()
        .filter(|s| occurs_in(pattern, s, MatchMode::Conjunctive))
        .count()
}

/// Distinct witness substitutions over the pattern's variables.
pub fn count_embeddings(pattern: &Pattern, sequence: &RelationalSequence) -> usize {
    Target::new(&sequence.atoms).count(&pattern.atoms)
}

/// A corpus with each sequence pre-indexed for repeated matching.
#[derive(Debug, Clone)]
pub struct IndexedCorpus {
    pub sequences: Vec<RelationalSequence>,
    targets: Vec<Target>,
}

impl IndexedCorpus {
    pub fn new(sequences: Vec<RelationalSequence>) -> Self {
        let targets = sequences.iter().map(|s| Target::new(&s.atoms)).collect();
        IndexedCorpus { sequences, targets }
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn target(&self, i: usize) -> &Target {
        &self.targets[i]
    }

    pub fn occurs(&self, pattern: &Pattern, i: usize) -> bool {
        self.targets[i].matches(&pattern.atoms)
    }

    pub fn embeddings(&self, pattern: &Pattern, i: usize) -> usize {
        self.targets[i].count(&pattern.atoms)
    }

    pub fn class_sizes(&self) -> BTreeMap<ClassLabel, usize> {
        let mut out = BTreeMap::new();
        for s in &self.sequences {
            *out.entry(s.class_label).or_insert(0) += 1;
        }
        out
    }
}
