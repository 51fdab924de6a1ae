//! Fisher-score ranking of mined patterns and action distribution tables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::miner::{canonical_form, FrequentPattern};
use crate::sequence::{ClassLabel, IndexedCorpus, Pattern, RelationalSequence};
use crate::vocab;

/// Per-sequence feature value of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeatureMode {
    /// Number of distinct embeddings.
    #[default]
    Embeddings,
    /// 1 if the pattern occurs, else 0.
    Binary,
}

impl std::str::FromStr for FeatureMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "embeddings" => Ok(FeatureMode::Embeddings),
            "binary" => Ok(FeatureMode::Binary),
            other => Err(format!(
                "unknown feature mode '{other}' (expected embeddings or binary)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMoments {
    pub n: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub classes: BTreeMap<ClassLabel, ClassMoments>,
    /// Grand mean over all sequences.
    pub mean: f64,
}

impl ClassStats {
    /// Statistics from raw per-sequence feature values; classes with no
    /// values are left out.
    pub fn from_values(values: &BTreeMap<ClassLabel, Vec<f64>>) -> Self {
        let mut classes = BTreeMap::new();
        let mut total = 0.0;
        let mut count = 0usize;
        for (&c, xs) in values {
            if xs.is_empty() {
                continue;
            }
            let n = xs.len();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
            // a constant class can pick up round-off variance from the mean
            let floor = 8.0 * f64::EPSILON * mean.abs().max(1.0);
            let var = if var.sqrt() <= floor { 0.0 } else { var };
            classes.insert(
                c,
                ClassMoments {
                    n,
                    mean,
                    std: var.sqrt(),
                },
            );
            total += mean * n as f64;
            count += n;
        }
        let mean = if count == 0 {
            0.0
        } else {
            total / count as f64
        };
        ClassStats { classes, mean }
    }

    /// Class with the larger mean; ties go to the lexicographically smaller
    /// label.
    pub fn attributed_class(&self) -> Option<ClassLabel> {
        let mut best: Option<(ClassLabel, f64)> = None;
        let mut labels: Vec<_> = self.classes.iter().collect();
        labels.sort_by_key(|(c, _)| c.as_str());
        for (&c, m) in labels {
            if best.is_none_or(|(_, b)| m.mean > b) {
                best = Some((c, m.mean));
            }
        }
        best.map(|(c, _)| c)
    }
}

fn feature_values(
    pattern: &Pattern,
    corpus: &IndexedCorpus,
    mode: FeatureMode,
) -> BTreeMap<ClassLabel, Vec<f64>> {
    let mut out: BTreeMap<ClassLabel, Vec<f64>> = BTreeMap::new();
    for (i, s) in corpus.sequences.iter().enumerate() {
        let v = match mode {
            FeatureMode::Embeddings => corpus.embeddings(pattern, i) as f64,
            FeatureMode::Binary => corpus.occurs(pattern, i) as u8 as f64,
        };
        out.entry(s.class_label).or_default().push(v);
    }
    out
}

pub fn class_stats(pattern: &Pattern, corpus: &[RelationalSequence]) -> ClassStats {
    class_stats_indexed(
        pattern,
        &IndexedCorpus::new(corpus.to_vec()),
        FeatureMode::Embeddings,
    )
}

pub fn class_stats_indexed(
    pattern: &Pattern,
    corpus: &IndexedCorpus,
    mode: FeatureMode,
) -> ClassStats {
    ClassStats::from_values(&feature_values(pattern, corpus, mode))
}

/// Between-class scatter over within-class scatter:
/// `Σ n_i (μ_i − μ)² / Σ n_i σ_i²`.
///
/// A zero denominator yields `f64::INFINITY` when the numerator is positive
/// and 0 otherwise.
pub fn fisher_score(stats: &ClassStats) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    // Means that differ only by round-off count as equal.
    let tol = 8.0 * f64::EPSILON * stats.mean.abs().max(1.0);
    for m in stats.classes.values() {
        let n = m.n as f64;
        let d = m.mean - stats.mean;
        if d.abs() > tol {
            num += n * d * d;
        }
        den += n * m.std * m.std;
    }
    if den == 0.0 {
        if num > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        num / den
    }
}

/// Renders a score for reports: `inf` or eight decimals.
pub fn format_fisher(score: f64) -> String {
    if score.is_infinite() {
        "inf".to_string()
    } else {
        format!("{score:.8}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedPattern {
    pub pattern: Pattern,
    pub fisher: f64,
    pub attributed_class: ClassLabel,
    pub stats: ClassStats,
    pub support_total: usize,
    pub support_per_class: BTreeMap<ClassLabel, usize>,
}

impl RankedPattern {
    /// `pattern | Fisher score | team`
    pub fn table_row(&self) -> String {
        format!(
            "{} | {} | {}",
            self.pattern,
            format_fisher(self.fisher),
            self.attributed_class
        )
    }
}

/// Scores every pattern and returns the `top_k` best, by Fisher score
/// descending, then support descending, then canonical key.
pub fn rank(
    patterns: &[FrequentPattern],
    corpus: &[RelationalSequence],
    top_k: usize,
    mode: FeatureMode,
) -> Vec<RankedPattern> {
    if top_k == 0 || patterns.is_empty() {
        return Vec::new();
    }
    let indexed = IndexedCorpus::new(corpus.to_vec());
    let mut scored: Vec<(String, RankedPattern)> = patterns
        .par_iter()
        .map(|fp| {
            let stats = class_stats_indexed(&fp.pattern, &indexed, mode);
            let ranked = RankedPattern {
                pattern: fp.pattern.clone(),
                fisher: fisher_score(&stats),
                attributed_class: stats.attributed_class().unwrap_or(ClassLabel::Cbr),
                stats,
                support_total: fp.support_total,
                support_per_class: fp.support_per_class.clone(),
            };
            (canonical_form(&fp.pattern), ranked)
        })
        .collect();
    scored.sort_by(|(ka, a), (kb, b)| {
        b.fisher
            .partial_cmp(&a.fisher)
            .unwrap_or(Ordering::Equal)
            .then(b.support_total.cmp(&a.support_total))
            .then_with(|| ka.cmp(kb))
    });
    scored.truncate(top_k);
    scored.into_iter().map(|(_, r)| r).collect()
}

/// Action counts for one column of the distribution table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActionCounts {
    pub sequences: usize,
    /// Count per action predicate, all seven present.
    pub counts: BTreeMap<String, usize>,
}

impl ActionCounts {
    fn empty() -> Self {
        ActionCounts {
            sequences: 0,
            counts: vocab::ACTIONS
                .iter()
                .map(|(p, _)| (p.to_string(), 0))
                .collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, action: &str) -> usize {
        self.counts.get(action).copied().unwrap_or(0)
    }

    /// Share of `action` among all actions, in percent.
    pub fn percentage(&self, action: &str) -> f64 {
        match self.total() {
            0 => 0.0,
            t => 100.0 * self.count(action) as f64 / t as f64,
        }
    }
}

/// Columns keyed by a grouping label (e.g. scenario) and class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActionTable {
    pub columns: BTreeMap<(String, ClassLabel), ActionCounts>,
}

/// Action counts per class.
pub fn action_distribution(corpus: &[RelationalSequence]) -> ActionTable {
    action_distribution_by(corpus, |_| String::new())
}

/// Action counts per `(group(sequence), class)`. Both classes appear for
/// every group seen.
pub fn action_distribution_by(
    corpus: &[RelationalSequence],
    group: impl Fn(&RelationalSequence) -> String,
) -> ActionTable {
    let mut table = ActionTable::default();
    if corpus.is_empty() {
        for c in ClassLabel::ALL {
            table
                .columns
                .insert((String::new(), c), ActionCounts::empty());
        }
        return table;
    }
    for s in corpus {
        let g = group(s);
        for c in ClassLabel::ALL {
            table
                .columns
                .entry((g.clone(), c))
                .or_insert_with(ActionCounts::empty);
        }
        let col = table.columns.get_mut(&(g, s.class_label)).unwrap();
        col.sequences += 1;
        for a in &s.atoms {
            if let Some(n) = col.counts.get_mut(&*a.predicate) {
                *n += 1;
            }
        }
    }
    table
}

impl ActionTable {
    pub fn column(&self, group: &str, class: ClassLabel) -> Option<&ActionCounts> {
        self.columns.get(&(group.to_string(), class))
    }

    /// Sum of all columns of one class.
    pub fn class_total(&self, class: ClassLabel) -> ActionCounts {
        let mut out = ActionCounts::empty();
        for ((_, c), col) in &self.columns {
            if *c != class {
                continue;
            }
            out.sequences += col.sequences;
            for (a, n) in &col.counts {
                *out.counts.get_mut(a).unwrap() += n;
            }
        }
        out
    }

    /// Plain-text table: one column per (group, class), rows for sequence
    /// count, the seven actions and the action total.
    pub fn render(&self) -> String {
        let headers: Vec<String> = self
            .columns
            .keys()
            .map(|(g, c)| {
                if g.is_empty() {
                    c.as_str().to_uppercase()
                } else {
                    format!("{g}/{}", c.as_str().to_uppercase())
                }
            })
            .collect();
        let label_w = vocab::ACTIONS
            .iter()
            .map(|(p, _)| p.len())
            .max()
            .unwrap_or(0)
            .max("tot. Actions".len());
        let col_w = headers.iter().map(String::len).max().unwrap_or(0).max(6);
        let mut out = String::new();
        let row = |out: &mut String, label: &str, cells: Vec<String>| {
            write!(out, "{label:<label_w$}").unwrap();
            for c in cells {
                write!(out, " {c:>col_w$}").unwrap();
            }
            out.push('\n');
        };
        row(&mut out, "", headers.clone());
        row(
            &mut out,
            "N. sequences",
            self.columns
                .values()
                .map(|c| c.sequences.to_string())
                .collect(),
        );
        for (a, _) in vocab::ACTIONS {
            row(
                &mut out,
                a,
                self.columns
                    .values()
                    .map(|c| c.count(a).to_string())
                    .collect(),
            );
        }
        row(
            &mut out,
            "tot. Actions",
            self.columns
                .values()
                .map(|c| c.total().to_string())
                .collect(),
        );
        out
    }

    /// CSV with one row per (group, class, action): count and percentage.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,class,action,count,percentage\n");
        for ((g, c), col) in &self.columns {
            for (a, _) in vocab::ACTIONS {
                writeln!(out, "{g},{c},{a},{},{:.4}", col.count(a), col.percentage(a)).unwrap();
            }
        }
        out
    }
}
