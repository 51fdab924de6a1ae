//! Level-wise frequent pattern mining over relational sequences.

mod background;
mod canonical;
mod refine;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

pub use background::{ArgMode, BackgroundError, BackgroundKnowledge, PredicateDecl, Role};
pub use canonical::{canonical_form, is_equivalent, reduce};
pub use refine::{specialize, Vocabulary};

use crate::sequence::{ClassLabel, IndexedCorpus, Pattern, RelationalSequence};

#[derive(Debug, Clone)]
pub struct MiningConfig {
    /// Minimum support as a fraction of the (class) corpus, in `(0, 1]`.
    pub min_support_alpha: f64,
    /// Maximum number of atoms per pattern.
    pub maxsize: usize,
    pub constraints: BackgroundKnowledge,
    /// When set, frequency is judged within this class only.
    pub target_class: Option<ClassLabel>,
}

impl MiningConfig {
    pub fn new(min_support_alpha: f64, maxsize: usize, constraints: BackgroundKnowledge) -> Self {
        MiningConfig {
            min_support_alpha,
            maxsize,
            constraints,
            target_class: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequentPattern {
    pub pattern: Pattern,
    pub support_total: usize,
    pub support_per_class: BTreeMap<ClassLabel, usize>,
    pub mean_embeddings_per_class: BTreeMap<ClassLabel, f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MineError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("predicate {0} is not declared in the background knowledge")]
    Undeclared(String),
    #[error("predicate {predicate} declared with {declared} arguments but used with {found}")]
    ArityMismatch {
        predicate: String,
        declared: usize,
        found: usize,
    },
    #[error("invalid mining configuration: {0}")]
    InvalidConfig(String),
    #[error("target class {0} has no sequences")]
    EmptyClass(ClassLabel),
}

/// Smallest support count meeting `alpha` over `n` sequences.
pub fn min_support_count(alpha: f64, n: usize) -> usize {
    ((alpha * n as f64) - 1e-9).ceil().max(0.0) as usize
}

fn check(corpus: &[RelationalSequence], config: &MiningConfig) -> Result<Vocabulary, MineError> {
    if corpus.is_empty() {
        return Err(MineError::EmptyCorpus);
    }
    let a = config.min_support_alpha;
    if !(a > 0.0 && a <= 1.0) {
        return Err(MineError::InvalidConfig(format!(
            "min_support_alpha must lie in (0,1], got {a}"
        )));
    }
    if config.maxsize == 0 {
        return Err(MineError::InvalidConfig(
            "maxsize must be at least 1".into(),
        ));
    }
    let vocab = Vocabulary::from_corpus(corpus);
    for (p, &arity) in &vocab.predicates {
        let decl = config
            .constraints
            .get(p)
            .ok_or_else(|| MineError::Undeclared(p.clone()))?;
        if decl.modes.len() != arity {
            return Err(MineError::ArityMismatch {
                predicate: p.clone(),
                declared: decl.modes.len(),
                found: arity,
            });
        }
    }
    Ok(vocab)
}

struct Node {
    pattern: Pattern,
    /// Indices of the sequences the pattern occurs in.
    tids: Vec<u32>,
}

/// Mines every pattern in the background-knowledge language with at most
/// `maxsize` atoms whose support reaches `ceil(alpha * N)`.
///
/// Each level specializes all frequent patterns of the previous level, so a
/// pattern is only evaluated on sequences where its parent occurs. Results
/// are reported once per θ-equivalence class, as the reduced form with
/// variables renamed `A, B, C, ...`, ordered by length then canonical key.
pub fn mine(
    corpus: &[RelationalSequence],
    config: &MiningConfig,
) -> Result<Vec<FrequentPattern>, MineError> {
    let vocab = check(corpus, config)?;
    let indexed = IndexedCorpus::new(corpus.to_vec());
    let classes: Vec<ClassLabel> = corpus.iter().map(|s| s.class_label).collect();
    let class_sizes = indexed.class_sizes();

    let (threshold, in_scope): (usize, Box<dyn Fn(u32) -> bool + Sync>) = match config.target_class
    {
        None => (
            min_support_count(config.min_support_alpha, corpus.len()),
            Box::new(|_| true),
        ),
        Some(c) => {
            let n = *class_sizes.get(&c).ok_or(MineError::EmptyClass(c))?;
            let classes = classes.clone();
            (
                min_support_count(config.min_support_alpha, n),
                Box::new(move |t| classes[t as usize] == c),
            )
        }
    };
    let frequent = |tids: &[u32]| tids.iter().filter(|&&t| in_scope(t)).count() >= threshold;

    let mut frontier = vec![Node {
        pattern: Pattern::default(),
        tids: (0..corpus.len() as u32).collect(),
    }];
    let mut found: HashMap<String, (Pattern, Vec<u32>)> = HashMap::new();

    for level in 1..=config.maxsize {
        let children: Vec<Vec<Pattern>> = frontier
            .par_iter()
            .map(|n| specialize(&n.pattern, &config.constraints, &vocab))
            .collect();
        let mut seen = HashMap::new();
        let mut candidates = Vec::new();
        for (parent, kids) in children.into_iter().enumerate() {
            for kid in kids {
                let key = canonical_form(&kid);
                if seen.insert(key, ()).is_none() {
                    candidates.push((parent, kid));
                }
            }
        }
        let mut next: Vec<(String, Node)> = candidates
            .into_par_iter()
            .filter_map(|(parent, pattern)| {
                let tids: Vec<u32> = frontier[parent]
                    .tids
                    .iter()
                    .copied()
                    .filter(|&t| indexed.occurs(&pattern, t as usize))
                    .collect();
                if !frequent(&tids) {
                    return None;
                }
                Some((canonical_form(&pattern), Node { pattern, tids }))
            })
            .collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        log::debug!("level {level}: {} frequent", next.len());

        let reduced: Vec<(String, Pattern)> = next
            .par_iter()
            .map(|(_, n)| {
                let core = reduce(&n.pattern);
                (canonical_form(&core), core)
            })
            .collect();
        for ((key, core), (_, node)) in reduced.into_iter().zip(&next) {
            found
                .entry(key)
                .or_insert_with(|| (core, node.tids.clone()));
        }
        frontier = next.into_iter().map(|(_, n)| n).collect();
        if frontier.is_empty() {
            break;
        }
    }

    let mut out: Vec<(String, Pattern, Vec<u32>)> =
        found.into_iter().map(|(k, (p, t))| (k, p, t)).collect();
    out.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(out
        .into_par_iter()
        .map(|(_, pattern, tids)| {
            let pattern = pattern.with_standard_names();
            let mut support_per_class: BTreeMap<ClassLabel, usize> =
                class_sizes.keys().map(|&c| (c, 0)).collect();
            let mut embeddings: BTreeMap<ClassLabel, usize> =
                class_sizes.keys().map(|&c| (c, 0)).collect();
            for &t in &tids {
                let c = classes[t as usize];
                *support_per_class.get_mut(&c).unwrap() += 1;
                *embeddings.get_mut(&c).unwrap() += indexed.embeddings(&pattern, t as usize);
            }
            let mean_embeddings_per_class = embeddings
                .into_iter()
                .map(|(c, e)| (c, e as f64 / class_sizes[&c] as f64))
                .collect();
            FrequentPattern {
                support_total: tids.len(),
                support_per_class,
                mean_embeddings_per_class,
                pattern,
            }
        })
        .collect())
}
