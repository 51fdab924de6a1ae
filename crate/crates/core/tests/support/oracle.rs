//! Slow, obviously-correct reference implementations used to check the
//! library: exhaustive substitution enumeration, atom-to-atom embedding
//! search, a declarative description of the pattern language and a
//! generate-from-occurrences frequent pattern enumerator.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use teamseq_core::miner::{ArgMode, BackgroundKnowledge, Role};
use teamseq_core::{Atom, ClassLabel, RelationalSequence, Term};

fn vars_of(atoms: &[Atom]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for a in atoms {
        for t in &a.args {
            if let Term::Var(v) = t {
                if !out.iter().any(|o| **o == **v) {
                    out.push(v.to_string());
                }
            }
        }
    }
    out
}

fn subst(atoms: &[Atom], map: &HashMap<String, Term>) -> Vec<Atom> {
    atoms
        .iter()
        .map(|a| Atom {
            predicate: a.predicate.clone(),
            args: a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => map.get(&**v).cloned().unwrap_or_else(|| t.clone()),
                    c => c.clone(),
                })
                .collect(),
        })
        .collect()
}

/// Tries every assignment of the general side's variables to the terms of
/// the specific side (whose variables count as constants).
pub fn brute_subsumes(general: &[Atom], specific: &[Atom]) -> bool {
    let vars = vars_of(general);
    let mut terms: Vec<Term> = specific
        .iter()
        .flat_map(|a| a.args.iter().cloned())
        .collect();
    terms.sort();
    terms.dedup();
    let target: HashSet<&Atom> = specific.iter().collect();
    if vars.is_empty() {
        return general.iter().all(|a| target.contains(a));
    }
    if terms.is_empty() {
        return false;
    }
    let k = terms.len();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let map: HashMap<String, Term> = vars
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| terms[i].clone()))
            .collect();
        if subst(general, &map).iter().all(|a| target.contains(a)) {
            return true;
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                return false;
            }
            idx[d] += 1;
            if idx[d] < k {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Every consistent way of sending each pattern atom to a sequence atom,
/// reported as the set of distinct variable bindings.
pub fn embeddings_by_atom_map(
    pattern: &[Atom],
    specific: &[Atom],
) -> BTreeSet<Vec<(String, String)>> {
    fn go(
        pattern: &[Atom],
        specific: &[Atom],
        i: usize,
        bind: &mut BTreeMap<String, String>,
        out: &mut BTreeSet<Vec<(String, String)>>,
    ) {
        if i == pattern.len() {
            out.insert(bind.iter().map(|(a, b)| (a.clone(), b.clone())).collect());
            return;
        }
        let p = &pattern[i];
        for s in specific {
            if s.predicate != p.predicate || s.args.len() != p.args.len() {
                continue;
            }
            let mut added = Vec::new();
            let mut ok = true;
            for (pt, st) in p.args.iter().zip(&s.args) {
                match pt {
                    Term::Var(v) => match bind.get(&**v) {
                        Some(b) if b != st.name() => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            bind.insert(v.to_string(), st.name().to_string());
                            added.push(v.to_string());
                        }
                    },
                    c => {
                        if c != st {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                go(pattern, specific, i + 1, bind, out);
            }
            for v in added {
                bind.remove(&v);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(pattern, specific, 0, &mut BTreeMap::new(), &mut out);
    out
}

pub fn embeds(pattern: &[Atom], specific: &[Atom]) -> bool {
    !embeddings_by_atom_map(pattern, specific).is_empty()
}

pub fn brute_support(pattern: &[Atom], corpus: &[RelationalSequence]) -> usize {
    corpus.iter().filter(|s| embeds(pattern, &s.atoms)).count()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Key identical for exactly the α-variants of an atom set: the smallest
/// rendering over all atom orders with variables numbered by first use.
pub fn alpha_key(atoms: &[Atom]) -> String {
    let mut uniq: Vec<&Atom> = Vec::new();
    for a in atoms {
        if !uniq.contains(&a) {
            uniq.push(a);
        }
    }
    let mut best: Option<String> = None;
    for perm in permutations(uniq.len()) {
        let mut names: HashMap<&str, usize> = HashMap::new();
        let mut parts = Vec::new();
        for &i in &perm {
            let a = uniq[i];
            let args: Vec<String> = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => {
                        let n = names.len();
                        format!("_{}", names.entry(v).or_insert(n))
                    }
                    c => c.name().to_string(),
                })
                .collect();
            parts.push(format!("{}({})", a.predicate, args.join(",")));
        }
        let s = parts.join(",");
        if best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
    }
    best.unwrap_or_default()
}

/// A smallest subset of `atoms` that the whole set still maps into.
pub fn core_of(atoms: &[Atom]) -> Vec<Atom> {
    let mut uniq: Vec<Atom> = Vec::new();
    for a in atoms {
        if !uniq.contains(a) {
            uniq.push(a.clone());
        }
    }
    let n = uniq.len();
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for m in masks {
        let sub: Vec<Atom> = (0..n)
            .filter(|i| m >> i & 1 == 1)
            .map(|i| uniq[i].clone())
            .collect();
        if embeds(&uniq, &sub) {
            return sub;
        }
    }
    uniq
}

/// Same key ⇔ θ-equivalent.
pub fn class_key(atoms: &[Atom]) -> String {
    alpha_key(&core_of(atoms))
}

/// The mining language, stated as properties of a finished pattern rather
/// than as a construction procedure.
pub fn in_language(atoms: &[Atom], bk: &BackgroundKnowledge) -> bool {
    if atoms.is_empty() {
        return false;
    }
    for (i, a) in atoms.iter().enumerate() {
        if atoms[..i].contains(a) {
            return false;
        }
    }
    let mut sort: HashMap<&str, ArgMode> = HashMap::new();
    let mut anchored: HashSet<&str> = HashSet::new();
    let mut times: HashSet<&str> = HashSet::new();
    let mut action_players: HashSet<&str> = HashSet::new();
    let mut players: HashSet<&str> = HashSet::new();
    let mut incoming: HashMap<&str, usize> = HashMap::new();
    let mut has_action = false;
    for a in atoms {
        let Some(d) = bk.get(&a.predicate) else {
            return false;
        };
        if d.role == Role::Ignore || d.modes.len() != a.args.len() {
            return false;
        }
        for (t, &m) in a.args.iter().zip(&d.modes) {
            match (t, m) {
                (Term::Const(_), ArgMode::Value) => {}
                (Term::Var(v), ArgMode::Time | ArgMode::Player) => {
                    if *sort.entry(v).or_insert(m) != m {
                        return false;
                    }
                    if m == ArgMode::Time {
                        times.insert(v);
                    } else {
                        players.insert(v);
                    }
                }
                _ => return false,
            }
        }
        match d.role {
            Role::Action => {
                has_action = true;
                for (t, &m) in a.args.iter().zip(&d.modes) {
                    match m {
                        ArgMode::Time => {
                            anchored.insert(t.name());
                        }
                        ArgMode::Player => {
                            action_players.insert(t.name());
                        }
                        ArgMode::Value => {}
                    }
                }
            }
            Role::Dimensional => {
                *incoming.entry(a.args[1].name()).or_default() += 1;
            }
            _ => {}
        }
    }
    if !has_action {
        return false;
    }
    // every player is introduced by an action
    if players.iter().any(|p| !action_players.contains(p)) {
        return false;
    }
    // descriptive atoms, facts and link sources sit on anchored times
    for a in atoms {
        let d = bk.get(&a.predicate).unwrap();
        let checked: Vec<&Term> = match d.role {
            Role::Descriptive | Role::Fact => a
                .args
                .iter()
                .zip(&d.modes)
                .filter(|(_, m)| **m == ArgMode::Time)
                .map(|(t, _)| t)
                .collect(),
            Role::Dimensional => vec![&a.args[0]],
            _ => vec![],
        };
        if checked.iter().any(|t| !anchored.contains(t.name())) {
            return false;
        }
    }
    // time variables form a tree of successor links with a single root
    let roots = times.iter().filter(|t| !incoming.contains_key(*t)).count();
    if roots != 1 || incoming.values().any(|&n| n > 1) {
        return false;
    }
    // at most one linked time still waiting for its action
    times.iter().filter(|t| !anchored.contains(*t)).count() <= 1
}

fn restricted_growth(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max.min(n) {
            cur.push(b);
            go(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every language pattern of at most `maxsize` atoms occurring in at least
/// one sequence, keyed by [`alpha_key`].
///
/// An occurring pattern is a variabilization of some multiset of at most
/// `maxsize` sequence atoms in which equal variables always map to equal
/// constants, so enumerating, per multiset, every partition of the
/// time/player slots that refines equality of their constants yields them all.
pub fn occurring_patterns(
    corpus: &[RelationalSequence],
    bk: &BackgroundKnowledge,
    maxsize: usize,
) -> HashMap<String, Vec<Atom>> {
    let mut out = HashMap::new();
    for s in corpus {
        let mut atoms: Vec<&Atom> = Vec::new();
        for a in &s.atoms {
            let keep = bk.get(&a.predicate).is_some_and(|d| d.role != Role::Ignore);
            if keep && !atoms.contains(&a) {
                atoms.push(a);
            }
        }
        for k in 1..=maxsize {
            for pick in multisets(atoms.len(), k) {
                let chosen: Vec<&Atom> = pick.iter().map(|&i| atoms[i]).collect();
                // group variable slots by the constant they hold
                let mut groups: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
                for (ai, a) in chosen.iter().enumerate() {
                    let modes = &bk.get(&a.predicate).unwrap().modes;
                    for (j, m) in modes.iter().enumerate() {
                        if *m != ArgMode::Value {
                            groups
                                .entry(a.args[j].name().to_string())
                                .or_default()
                                .push((ai, j));
                        }
                    }
                }
                let options: Vec<(usize, Vec<Vec<usize>>)> = groups
                    .values()
                    .enumerate()
                    .map(|(g, slots)| (g, restricted_growth(slots.len())))
                    .collect();
                let slot_lists: Vec<&Vec<(usize, usize)>> = groups.values().collect();
                let mut choice = vec![0usize; options.len()];
                loop {
                    let mut pat: Vec<Atom> = chosen.iter().map(|a| (*a).clone()).collect();
                    for (g, (_, parts)) in options.iter().enumerate() {
                        for (slot, block) in slot_lists[g].iter().zip(&parts[choice[g]]) {
                            pat[slot.0].args[slot.1] = Term::var(format!("G{g}_{block}"));
                        }
                    }
                    let mut uniq: Vec<Atom> = Vec::new();
                    for a in pat {
                        if !uniq.contains(&a) {
                            uniq.push(a);
                        }
                    }
                    if in_language(&uniq, bk) {
                        out.entry(alpha_key(&uniq)).or_insert(uniq);
                    }
                    let mut d = 0;
                    loop {
                        if d == choice.len() {
                            break;
                        }
                        choice[d] += 1;
                        if choice[d] < options[d].1.len() {
                            break;
                        }
                        choice[d] = 0;
                        d += 1;
                    }
                    if d == choice.len() {
                        break;
                    }
                }
            }
        }
    }
    out
}

/// θ-equivalence classes of frequent language patterns with their support.
pub fn frequent_classes(
    occurring: &HashMap<String, (Vec<Atom>, usize)>,
    threshold: usize,
) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for (atoms, sup) in occurring.values() {
        if *sup >= threshold {
            let key = class_key(atoms);
            let prev = out.insert(key, *sup);
            assert!(
                prev.is_none_or(|p| p == *sup),
                "equivalent patterns differ in support"
            );
        }
    }
    out
}

pub fn with_support(
    patterns: HashMap<String, Vec<Atom>>,
    corpus: &[RelationalSequence],
) -> HashMap<String, (Vec<Atom>, usize)> {
    patterns
        .into_iter()
        .map(|(k, p)| {
            let s = brute_support(&p, corpus);
            (k, (p, s))
        })
        .collect()
}

pub fn threshold(alpha: f64, n: usize) -> usize {
    // smallest integer count c with c >= alpha * n, robust to alpha*n
    // landing a hair above an integer
    (0..=n)
        .find(|&c| c as f64 >= alpha * n as f64 - 1e-9)
        .unwrap_or(n)
}

fn atom(p: &str, args: &[&str]) -> Atom {
    Atom::from_idents(p, args)
}

/// A small time-chained corpus over getball/pass/intercept, next_a, one world
/// relation and ignored facts; at most `max_atoms` atoms per sequence.
pub fn random_corpus<R: Rng>(rng: &mut R, n: usize, max_atoms: usize) -> Vec<RelationalSequence> {
    let players = ["r1", "r2", "r3"];
    (0..n)
        .map(|i| {
            let class = if rng.gen_bool(0.5) {
                ClassLabel::Cbr
            } else {
                ClassLabel::Rea
            };
            let steps = rng.gen_range(1..=4);
            let mut atoms = Vec::new();
            for k in 1..=steps {
                let t = format!("t{k}");
                let p = *players.choose(rng).unwrap();
                let q = *players.choose(rng).unwrap();
                let mut acts = vec![match rng.gen_range(0..3) {
                    0 => atom("getball", &[&t, p]),
                    1 => atom("pass", &[&t, q, p]),
                    _ => atom("intercept", &[&t, p]),
                }];
                if rng.gen_bool(0.1) {
                    acts.push(atom("getball", &[&t, q]));
                }
                atoms.extend(acts);
                if rng.gen_bool(0.5) {
                    let h = *["forward", "behind"].choose(rng).unwrap();
                    let v = *["left", "same"].choose(rng).unwrap();
                    atoms.push(atom("rel_with_ball", &[&t, p, h, v]));
                }
                if k < steps {
                    atoms.push(atom("next_a", &[&t, &format!("t{}", k + 1)]));
                }
            }
            if rng.gen_bool(0.5) {
                atoms.push(atom("goal", &[&format!("t{}", steps + 1)]));
            }
            if rng.gen_bool(0.3) {
                atoms.push(atom("agent", &["r1"]));
            }
            atoms.truncate(max_atoms);
            RelationalSequence::new(format!("s{i}"), class, atoms)
        })
        .collect()
}

/// A random general/specific pair with at most `max_vars` variables on the
/// general side and at most `max_consts` constants on the ground side.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_vars: usize,
    max_consts: usize,
) -> (Vec<Atom>, Vec<Atom>) {
    let preds = [("p", 1), ("q", 2), ("r", 2), ("s", 3)];
    let nconst = rng.gen_range(1..=max_consts);
    let consts: Vec<String> = (0..nconst).map(|i| format!("c{i}")).collect();
    let nvars = rng.gen_range(1..=max_vars);
    let vars: Vec<String> = (0..nvars).map(|i| format!("X{i}")).collect();
    let specific: Vec<Atom> = (0..rng.gen_range(1..=8))
        .map(|_| {
            let (p, k) = *preds.choose(rng).unwrap();
            let args: Vec<&str> = (0..k)
                .map(|_| consts.choose(rng).unwrap().as_str())
                .collect();
            atom(p, &args)
        })
        .collect();
    let general: Vec<Atom> = if rng.gen_bool(0.5) {
        // generalize a random subset of the specific atoms, so matches are common
        let mut out = Vec::new();
        for a in &specific {
            if out.len() == 4 || !rng.gen_bool(0.5) {
                continue;
            }
            let args: Vec<&str> = a
                .args
                .iter()
                .map(|t| {
                    if rng.gen_bool(0.7) {
                        vars.choose(rng).unwrap().as_str()
                    } else {
                        t.name()
                    }
                })
                .collect();
            out.push(atom(&a.predicate, &args));
        }
        out
    } else {
        (0..rng.gen_range(1..=4))
            .map(|_| {
                let (p, k) = *preds.choose(rng).unwrap();
                let args: Vec<&str> = (0..k)
                    .map(|_| {
                        if rng.gen_bool(0.8) {
                            vars.choose(rng).unwrap().as_str()
                        } else {
                            consts.choose(rng).unwrap().as_str()
                        }
                    })
                    .collect();
                atom(p, &args)
            })
            .collect()
    };
    let general = if general.is_empty() {
        vec![atom("p", &[vars[0].as_str()])]
    } else {
        general
    };
    (general, specific)
}

/// Fisher score evaluated directly from per-class feature values.
pub fn direct_fisher(values: &BTreeMap<ClassLabel, Vec<f64>>) -> f64 {
    let all: Vec<f64> = values.values().flatten().copied().collect();
    let grand = all.iter().sum::<f64>() / all.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for xs in values.values().filter(|x| !x.is_empty()) {
        let n = xs.len() as f64;
        let mu = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n;
        num += n * (mu - grand) * (mu - grand);
        den += n * var;
    }
    if den == 0.0 {
        if num > 1e-12 * grand.abs().max(1.0) {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        num / den
    }
}
