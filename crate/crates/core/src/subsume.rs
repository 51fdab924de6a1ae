//! θ-subsumption by backtracking search.
//!
//! The specific side is indexed once into a [`Target`]; its terms are rigid,
//! so a variable appearing there behaves like a constant. General-side
//! variables bind to target terms. The search is complete: every candidate
//! binding is tried before failure is reported.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::subst::Substitution;
use crate::term::{Atom, Term};

const UNBOUND: u32 = u32::MAX;

/// Interned argument tuples keyed by (predicate, arity).
type Groups = HashMap<(Arc<str>, usize), Vec<Box<[u32]>>>;

/// Indexed, deduplicated set of atoms to match into.
#[derive(Debug, Clone, Default)]
pub struct Target {
    groups: Groups,
    ids: HashMap<Term, u32>,
    terms: Vec<Term>,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Var(usize),
    Fixed(u32),
}

struct QueryAtom<'t> {
    candidates: Vec<&'t [u32]>,
    slots: Vec<Slot>,
}

struct Query<'t> {
    vars: Vec<Arc<str>>,
    atoms: Vec<QueryAtom<'t>>,
}

impl Target {
    pub fn new(atoms: &[Atom]) -> Self {
        let mut target = Target::default();
        let mut seen = HashSet::new();
        for atom in atoms {
            if !seen.insert(atom) {
                continue;
            }
            let tuple: Box<[u32]> = atom.args.iter().map(|t| target.intern(t)).collect();
            target
                .groups
                .entry(atom.signature())
                .or_default()
                .push(tuple);
        }
        target
    }

    fn intern(&mut self, term: &Term) -> u32 {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = self.terms.len() as u32;
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    /// Number of distinct atoms.
    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn has_predicate(&self, predicate: &str, arity: usize) -> bool {
        self.groups.contains_key(&(Arc::from(predicate), arity))
    }

    fn compile<'t>(&'t self, general: &[Atom]) -> Option<Query<'t>> {
        let mut var_index: HashMap<&Arc<str>, usize> = HashMap::new();
        let mut vars = Vec::new();
        let mut seen = HashSet::new();
        let mut atoms = Vec::new();
        for atom in general {
            if !seen.insert(atom) {
                continue;
            }
            let group = self.groups.get(&atom.signature())?;
            let mut slots = Vec::with_capacity(atom.args.len());
            for term in &atom.args {
                let slot = match term {
                    Term::Var(v) => {
                        let next = vars.len();
                        let idx = *var_index.entry(v).or_insert_with(|| {
                            vars.push(v.clone());
                            next
                        });
                        Slot::Var(idx)
                    }
                    Term::Const(_) => Slot::Fixed(*self.ids.get(term)?),
                };
                slots.push(slot);
            }
            let candidates: Vec<&[u32]> = group
                .iter()
                .map(|t| &**t)
                .filter(|tuple| {
                    slots.iter().zip(tuple.iter()).all(|(s, &v)| match s {
                        Slot::Fixed(c) => *c == v,
                        Slot::Var(_) => true,
                    }) && repeated_vars_agree(&slots, tuple)
                })
                .collect();
            if candidates.is_empty() {
                return None;
            }
            atoms.push(QueryAtom { candidates, slots });
        }
        let atoms = order_atoms(atoms, vars.len());
        Some(Query { vars, atoms })
    }

    /// Visits every distinct solution; the visitor returns `false` to stop.
    fn search(&self, general: &[Atom], mut visit: impl FnMut(&Query<'_>, &[u32]) -> bool) {
        let Some(query) = self.compile(general) else {
            return;
        };
        let mut binding = vec![UNBOUND; query.vars.len()];
        let mut trail = Vec::with_capacity(query.vars.len());
        descend(&query, 0, &mut binding, &mut trail, &mut |b| {
            visit(&query, b)
        });
    }

    /// A witness θ with `general θ ⊆ target`, if one exists.
    pub fn find(&self, general: &[Atom]) -> Option<Substitution> {
        let mut found = None;
        self.search(general, |query, binding| {
            found = Some(
                query
                    .vars
                    .iter()
                    .zip(binding)
                    .map(|(v, &id)| (v.clone(), self.terms[id as usize].clone()))
                    .collect(),
            );
            false
        });
        found
    }

    pub fn matches(&self, general: &[Atom]) -> bool {
        let mut hit = false;
        self.search(general, |_, _| {
            hit = true;
            false
        });
        hit
    }

    /// Number of distinct substitutions over the variables of `general`.
    pub fn count(&self, general: &[Atom]) -> usize {
        let mut n = 0usize;
        self.search(general, |_, _| {
            n += 1;
            true
        });
        n
    }
}

fn repeated_vars_agree(slots: &[Slot], tuple: &[u32]) -> bool {
    for i in 0..slots.len() {
        if let Slot::Var(a) = slots[i] {
            for j in (i + 1)..slots.len() {
                if let Slot::Var(b) = slots[j] {
                    if a == b && tuple[i] != tuple[j] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Most constrained first: start from the atom with fewest candidates, then
/// prefer atoms whose variables are already bound.
fn order_atoms(mut pending: Vec<QueryAtom<'_>>, nvars: usize) -> Vec<QueryAtom<'_>> {
    let mut bound = vec![false; nvars];
    let mut ordered = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let best = (0..pending.len())
            .min_by_key(|&i| {
                let a = &pending[i];
                let connected = a
                    .slots
                    .iter()
                    .any(|s| matches!(s, Slot::Var(v) if bound[*v]));
                (!connected && !ordered.is_empty(), a.candidates.len(), i)
            })
            .expect("nonempty");
        let atom = pending.remove(best);
        for s in &atom.slots {
            if let Slot::Var(v) = s {
                bound[*v] = true;
            }
        }
        ordered.push(atom);
    }
    ordered
}

fn descend(
    query: &Query<'_>,
    depth: usize,
    binding: &mut [u32],
    trail: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if depth == query.atoms.len() {
        return visit(binding);
    }
    let atom = &query.atoms[depth];
    'cand: for tuple in &atom.candidates {
        let mark = trail.len();
        for (slot, &value) in atom.slots.iter().zip(tuple.iter()) {
            if let Slot::Var(v) = *slot {
                let cur = binding[v];
                if cur == UNBOUND {
                    binding[v] = value;
                    trail.push(v);
                } else if cur != value {
                    undo(binding, trail, mark);
                    continue 'cand;
                }
            }
        }
        let keep_going = descend(query, depth + 1, binding, trail, visit);
        undo(binding, trail, mark);
        if !keep_going {
            return false;
        }
    }
    true
}

fn undo(binding: &mut [u32], trail: &mut Vec<usize>, mark: usize) {
    while trail.len() > mark {
        let v = trail.pop().expect("trail");
        binding[v] = UNBOUND;
    }
}

/// Returns θ with `general θ ⊆ specific` (set inclusion), or `None`.
///
/// Variables in `specific` are treated as rigid symbols, which is what the
/// mutual-subsumption equivalence test needs.
pub fn theta_subsumes(general: &[Atom], specific: &[Atom]) -> Option<Substitution> {
    if general.is_empty() {
        return Some(Substitution::new());
    }
    Target::new(specific).find(general)
}
