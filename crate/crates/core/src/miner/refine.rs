//! Refinement operator: one-atom specializations allowed by the background
//! knowledge.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use super::background::{ArgMode, BackgroundKnowledge, Role};
use crate::sequence::{Pattern, RelationalSequence};
use crate::term::{Atom, Term};

/// Predicates and value constants observed in a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    /// Predicate name to arity.
    pub predicates: BTreeMap<String, usize>,
    /// Constants seen at each `(predicate, argument position)`.
    pub values: BTreeMap<(String, usize), BTreeSet<Arc<str>>>,
}

impl Vocabulary {
    pub fn from_corpus(corpus: &[RelationalSequence]) -> Self {
        let mut v = Vocabulary::default();
        for atom in corpus.iter().flat_map(|s| &s.atoms) {
            v.add(atom);
        }
        v
    }

    pub fn add(&mut self, atom: &Atom) {
        self.predicates
            .entry(atom.predicate.to_string())
            .or_insert(atom.arity());
        for (i, t) in atom.args.iter().enumerate() {
            if let Term::Const(c) = t {
                self.values
                    .entry((atom.predicate.to_string(), i))
                    .or_default()
                    .insert(c.clone());
            }
        }
    }

    pub fn contains(&self, predicate: &str) -> bool {
        self.predicates.contains_key(predicate)
    }

    fn domain(&self, predicate: &str, pos: usize) -> Vec<Arc<str>> {
        self.values
            .get(&(predicate.to_string(), pos))
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }
}

/// How the variables of a pattern are used.
#[derive(Debug, Default)]
pub(crate) struct Shape {
    /// Time variables carrying at least one action.
    pub anchored: Vec<Arc<str>>,
    /// Time variables introduced by a dimensional atom and not yet anchored.
    pub pending: Vec<Arc<str>>,
    pub players: Vec<Arc<str>>,
    pub names: HashSet<Arc<str>>,
}

fn push_unique(v: &mut Vec<Arc<str>>, x: &Arc<str>) {
    if !v.contains(x) {
        v.push(x.clone());
    }
}

pub(crate) fn shape(pattern: &Pattern, bk: &BackgroundKnowledge) -> Shape {
    let mut s = Shape::default();
    let mut times = Vec::new();
    for atom in &pattern.atoms {
        let Some(decl) = bk.get(&atom.predicate) else {
            continue;
        };
        for (t, mode) in atom.args.iter().zip(&decl.modes) {
            let Term::Var(v) = t else { continue };
            s.names.insert(v.clone());
            match mode {
                ArgMode::Time => {
                    push_unique(&mut times, v);
                    if decl.role == Role::Action {
                        push_unique(&mut s.anchored, v);
                    }
                }
                ArgMode::Player => push_unique(&mut s.players, v),
                ArgMode::Value => {}
            }
        }
    }
    s.pending = times
        .into_iter()
        .filter(|t| !s.anchored.contains(t))
        .collect();
    s
}

struct Fresh<'a> {
    taken: &'a HashSet<Arc<str>>,
    next: usize,
}

impl Fresh<'_> {
    fn name(&mut self) -> Arc<str> {
        loop {
            let n: Arc<str> = format!("V{}", self.next).into();
            self.next += 1;
            if !self.taken.contains(&n) {
                return n;
            }
        }
    }
}

/// Choices for one argument slot while building an atom.
enum Slot {
    Fixed(Vec<Term>),
    /// A player slot: an existing player or a fresh one, with fresh players
    /// numbered in order of first use so each shape is produced once.
    Player,
}

fn expand(
    predicate: &Arc<str>,
    slots: &[Slot],
    existing_players: &[Arc<str>],
    fresh_pool: &[Arc<str>],
    out: &mut Vec<Atom>,
) {
    fn go(
        predicate: &Arc<str>,
        slots: &[Slot],
        existing: &[Arc<str>],
        pool: &[Arc<str>],
        used_fresh: usize,
        args: &mut Vec<Term>,
        out: &mut Vec<Atom>,
    ) {
        let i = args.len();
        if i == slots.len() {
            out.push(Atom {
                predicate: predicate.clone(),
                args: args.clone(),
            });
            return;
        }
        match &slots[i] {
            Slot::Fixed(choices) => {
                for c in choices {
                    args.push(c.clone());
                    go(predicate, slots, existing, pool, used_fresh, args, out);
                    args.pop();
                }
            }
            Slot::Player => {
                for p in existing.iter().chain(&pool[..used_fresh]) {
                    args.push(Term::Var(p.clone()));
                    go(predicate, slots, existing, pool, used_fresh, args, out);
                    args.pop();
                }
                if used_fresh < pool.len() {
                    args.push(Term::Var(pool[used_fresh].clone()));
                    go(predicate, slots, existing, pool, used_fresh + 1, args, out);
                    args.pop();
                }
            }
        }
    }
    go(
        predicate,
        slots,
        existing_players,
        fresh_pool,
        0,
        &mut Vec::new(),
        out,
    );
}

fn vars_of(names: &[Arc<str>]) -> Vec<Term> {
    names.iter().cloned().map(Term::Var).collect()
}

/// All patterns obtained by adding one atom to `pattern`.
///
/// * The first atom is an action; its time and players are fresh.
/// * A time variable opened by a dimensional atom must receive an action
///   before anything else is added.
/// * Actions otherwise sit on a time variable that already carries an action
///   and take existing or fresh players.
/// * A dimensional atom links an anchored time to a fresh time.
/// * Descriptive atoms and facts reuse anchored times and existing players;
///   value slots take constants observed at that position in the corpus.
///
/// Children repeating an existing atom are skipped.
pub fn specialize(
    pattern: &Pattern,
    constraints: &BackgroundKnowledge,
    vocabulary: &Vocabulary,
) -> Vec<Pattern> {
    let sh = shape(pattern, constraints);
    let mut new_atoms = Vec::new();
    let empty = pattern.is_empty();
    for (name, decl) in constraints.iter() {
        if !vocabulary.contains(name) || vocabulary.predicates[name] != decl.modes.len() {
            continue;
        }
        let predicate: Arc<str> = name.into();
        let mut fresh = Fresh {
            taken: &sh.names,
            next: sh.names.len(),
        };
        let values = |i: usize| -> Vec<Term> {
            vocabulary
                .domain(name, i)
                .into_iter()
                .map(Term::Const)
                .collect()
        };
        match decl.role {
            Role::Action => {
                let times = if empty {
                    vec![Term::Var(fresh.name())]
                } else if !sh.pending.is_empty() {
                    vars_of(&sh.pending)
                } else {
                    vars_of(&sh.anchored)
                };
                let players = decl.modes.iter().filter(|m| **m == ArgMode::Player).count();
                let pool: Vec<Arc<str>> = (0..players).map(|_| fresh.name()).collect();
                let slots: Vec<Slot> = decl
                    .modes
                    .iter()
                    .enumerate()
                    .map(|(i, m)| match m {
                        ArgMode::Time => Slot::Fixed(times.clone()),
                        ArgMode::Player => Slot::Player,
                        ArgMode::Value => Slot::Fixed(values(i)),
                    })
                    .collect();
                expand(&predicate, &slots, &sh.players, &pool, &mut new_atoms);
            }
            _ if empty || !sh.pending.is_empty() => {}
            Role::Dimensional => {
                let target = Term::Var(fresh.name());
                for t in &sh.anchored {
                    new_atoms.push(Atom {
                        predicate: predicate.clone(),
                        args: vec![Term::Var(t.clone()), target.clone()],
                    });
                }
            }
            Role::Descriptive | Role::Fact => {
                let slots: Vec<Slot> = decl
                    .modes
                    .iter()
                    .enumerate()
                    .map(|(i, m)| match m {
                        ArgMode::Time => Slot::Fixed(vars_of(&sh.anchored)),
                        ArgMode::Player => Slot::Fixed(vars_of(&sh.players)),
                        ArgMode::Value => Slot::Fixed(values(i)),
                    })
                    .collect();
                expand(&predicate, &slots, &sh.players, &[], &mut new_atoms);
            }
            Role::Ignore => {}
        }
    }
    new_atoms
        .into_iter()
        .filter(|a| !pattern.atoms.contains(a))
        .map(|a| {
            let mut atoms = pattern.atoms.clone();
            atoms.push(a);
            Pattern::new(atoms)
        })
        .collect()
}
