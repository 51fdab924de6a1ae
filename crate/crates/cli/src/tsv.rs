//! Tab-separated pattern tables.
//!
//! Mined patterns: `pattern len support_total support_cbr support_rea`.
//! Ranked patterns add `fisher class`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use teamseq_core::miner::FrequentPattern;
use teamseq_core::scoring::{format_fisher, RankedPattern};
use teamseq_core::{ClassLabel, Pattern};

pub const PATTERN_HEADER: &str = "pattern\tlen\tsupport_total\tsupport_cbr\tsupport_rea";
pub const RANKED_HEADER: &str =
    "pattern\tlen\tsupport_total\tsupport_cbr\tsupport_rea\tfisher\tclass";

#[derive(Debug, Clone, PartialEq)]
pub struct PatternRow {
    pub pattern: Pattern,
    pub support_total: usize,
    pub support_cbr: usize,
    pub support_rea: usize,
    /// Fisher score and attributed class, for ranked tables.
    pub ranked: Option<(f64, ClassLabel)>,
}

impl PatternRow {
    pub fn frequent(&self) -> FrequentPattern {
        let mut per_class = BTreeMap::new();
        per_class.insert(ClassLabel::Cbr, self.support_cbr);
        per_class.insert(ClassLabel::Rea, self.support_rea);
        FrequentPattern {
            pattern: self.pattern.clone(),
            support_total: self.support_total,
            support_per_class: per_class,
            mean_embeddings_per_class: BTreeMap::new(),
        }
    }

    /// `pattern | Fisher score | team`
    pub fn table_row(&self) -> Option<String> {
        self.ranked
            .map(|(f, c)| format!("{} | {} | {}", self.pattern, format_fisher(f), c))
    }
}

fn class_support(map: &BTreeMap<ClassLabel, usize>, c: ClassLabel) -> usize {
    map.get(&c).copied().unwrap_or(0)
}

pub fn write_patterns(found: &[FrequentPattern]) -> String {
    let mut s = format!("{PATTERN_HEADER}\n");
    for fp in found {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}",
            fp.pattern,
            fp.pattern.len(),
            fp.support_total,
            class_support(&fp.support_per_class, ClassLabel::Cbr),
            class_support(&fp.support_per_class, ClassLabel::Rea)
        );
    }
    s
}

pub fn write_ranked(ranked: &[RankedPattern]) -> String {
    let mut s = format!("{RANKED_HEADER}\n");
    for r in ranked {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.pattern,
            r.pattern.len(),
            r.support_total,
            class_support(&r.support_per_class, ClassLabel::Cbr),
            class_support(&r.support_per_class, ClassLabel::Rea),
            format_fisher(r.fisher),
            r.attributed_class
        );
    }
    s
}

/// Reads either table; the header decides which.
pub fn read_patterns(text: &str) -> Result<Vec<PatternRow>, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let ranked = match lines.next() {
        Some((_, h)) if h.trim_end() == PATTERN_HEADER => false,
        Some((_, h)) if h.trim_end() == RANKED_HEADER => true,
        _ => return Err("missing pattern table header".into()),
    };
    let width = if ranked { 7 } else { 5 };
    let mut rows = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        let f: Vec<&str> = line.trim_end_matches(['\r', '\n']).split('\t').collect();
        if f.len() != width {
            return Err(format!(
                "line {n}: expected {width} columns, found {}",
                f.len()
            ));
        }
        let pattern = Pattern::parse(f[0]).map_err(|e| format!("line {n}: {e}"))?;
        let count = |k: usize| {
            f[k].parse::<usize>()
                .map_err(|_| format!("line {n}: bad count '{}'", f[k]))
        };
        if count(1)? != pattern.len() {
            return Err(format!(
                "line {n}: length column disagrees with the pattern"
            ));
        }
        let row = PatternRow {
            pattern,
            support_total: count(2)?,
            support_cbr: count(3)?,
            support_rea: count(4)?,
            ranked: if ranked {
                let fisher = match f[5] {
                    "inf" => f64::INFINITY,
                    v => v
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite() && *x >= 0.0)
                        .ok_or_else(|| format!("line {n}: bad fisher score '{v}'"))?,
                };
                let class = f[6]
                    .parse::<ClassLabel>()
                    .map_err(|e| format!("line {n}: {e}"))?;
                Some((fisher, class))
            } else {
                None
            },
        };
        rows.push(row);
    }
    Ok(rows)
}
