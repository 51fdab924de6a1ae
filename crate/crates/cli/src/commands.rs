//! The pipeline stages behind each subcommand.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use teamseq_core::abstraction::{abstract_trial, AbstractionConfig, TrialLog};
use teamseq_core::miner::{
    min_support_count, mine, BackgroundKnowledge, FrequentPattern, MiningConfig,
};
use teamseq_core::scoring::{
    action_distribution, action_distribution_by, rank, FeatureMode, RankedPattern,
};
use teamseq_core::seqfile::{read_sequences, write_sequences};
use teamseq_core::vocab;
use teamseq_core::{ClassLabel, RelationalSequence};
use teamseq_sim::experiment::MANIFEST_FILE;
use teamseq_sim::{
    run_experiment, Approach, CaseBase, ExperimentPlan, Manifest, OpponentConfig, Scenario,
};

use crate::error::{usage, CliError};
use crate::tsv::{read_patterns, write_patterns, write_ranked, PatternRow};

/// `1`..`4` or `all`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenarios(pub Vec<Scenario>);

impl FromStr for Scenarios {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(Scenarios(Scenario::ALL.to_vec()));
        }
        s.parse::<u8>()
            .ok()
            .and_then(Scenario::from_number)
            .map(|x| Scenarios(vec![x]))
            .ok_or_else(|| format!("unknown scenario '{s}' (expected 1, 2, 3, 4 or all)"))
    }
}

/// `cbr`, `rea` or `both`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approaches(pub Vec<Approach>);

impl FromStr for Approaches {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("both") {
            return Ok(Approaches(Approach::ALL.to_vec()));
        }
        s.parse::<Approach>()
            .map(|a| Approaches(vec![a]))
            .map_err(|_| format!("unknown approach '{s}' (expected cbr, rea or both)"))
    }
}

/// Mining language: the full soccer vocabulary, action chains only, or a
/// background-knowledge file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Language {
    Soccer,
    Actions,
    File(PathBuf),
}

impl FromStr for Language {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "soccer" => Language::Soccer,
            "actions" => Language::Actions,
            path => Language::File(PathBuf::from(path)),
        })
    }
}

impl Language {
    pub fn load(&self) -> Result<BackgroundKnowledge> {
        Ok(match self {
            Language::Soccer => BackgroundKnowledge::soccer(),
            Language::Actions => BackgroundKnowledge::soccer_actions_only(),
            Language::File(p) => {
                BackgroundKnowledge::parse(&read(p)?).with_context(|| format!("{}", p.display()))?
            }
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Debug, Clone)]
pub struct SimulateOptions {
    pub scenarios: Vec<Scenario>,
    pub config: OpponentConfig,
    pub approaches: Vec<Approach>,
    pub trials: usize,
    pub seed: u64,
    pub timeout: f64,
    /// Hand cases; the shipped ones when absent.
    pub cases: Option<PathBuf>,
    pub out: PathBuf,
}

impl SimulateOptions {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(usage("--trials must be at least 1"));
        }
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            return Err(usage("--timeout must be a positive number of seconds"));
        }
        Ok(())
    }
}

/// Runs the trial matrix, writing the logs and the manifest.
pub fn simulate(o: &SimulateOptions) -> Result<Manifest> {
    let mut plan = ExperimentPlan::new(
        o.scenarios.clone(),
        vec![o.config],
        o.approaches.clone(),
        o.trials,
        o.seed,
    );
    plan.template.timeout = o.timeout;
    let cb = if o.approaches.contains(&Approach::Cbr) {
        Some(match &o.cases {
            None => CaseBase::default_cases(plan.template.field),
            Some(p) => CaseBase::parse(&read(p)?, plan.template.field)
                .with_context(|| format!("{}", p.display()))?,
        })
    } else {
        None
    };
    log::info!(
        "running {} cells x {} trials into {}",
        plan.cells().len(),
        o.trials,
        o.out.display()
    );
    run_experiment(&plan, cb.as_ref(), &o.out).map_err(|e| anyhow!(e))
}

pub fn outcome_tally(m: &Manifest) -> String {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &m.rows {
        *counts.entry(r.outcome.as_str()).or_default() += 1;
    }
    counts
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Abstracts every log listed in the directory's manifest, in manifest
/// order; each sequence is labelled with its row's approach.
pub fn abstract_logs(logs: &Path) -> Result<Vec<RelationalSequence>> {
    let mpath = logs.join(MANIFEST_FILE);
    if !mpath.exists() {
        bail!("no {MANIFEST_FILE} in {}", logs.display());
    }
    let manifest =
        Manifest::parse_csv(&read(&mpath)?).map_err(|e| anyhow!("{}: {e}", mpath.display()))?;
    if manifest.rows.is_empty() {
        bail!("{} lists no trials", mpath.display());
    }
    let cfg = AbstractionConfig::default();
    let mut out = Vec::new();
    for row in &manifest.rows {
        let path = logs.join(&row.path);
        let log =
            TrialLog::parse_jsonl(&read(&path)?).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let id = row.path.strip_suffix(".jsonl").unwrap_or(&row.path);
        log::debug!("abstracting {}", path.display());
        let seqs = abstract_trial(&log, id, row.approach.class_label(), &cfg)
            .map_err(|e| anyhow!("{}: {e}", path.display()))?;
        for mut s in seqs {
            s.attrs.insert("scenario".into(), row.scenario.to_string());
            s.attrs.insert("config".into(), row.config.clone());
            out.push(s);
        }
    }
    Ok(out)
}

pub fn abstract_to_file(logs: &Path, out: &Path) -> Result<Vec<RelationalSequence>> {
    let seqs = abstract_logs(logs)?;
    write(out, &write_sequences(&seqs))?;
    Ok(seqs)
}

pub fn load_sequences(path: &Path) -> Result<Vec<RelationalSequence>> {
    read_sequences(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

#[derive(Debug, Clone)]
pub struct MineOptions {
    pub seqs: PathBuf,
    pub min_support: f64,
    pub maxsize: usize,
    pub language: Language,
    pub out: PathBuf,
}

impl MineOptions {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.min_support > 0.0 && self.min_support <= 1.0) {
            return Err(usage(format!(
                "--min-support must lie in (0, 1], got {}",
                self.min_support
            )));
        }
        if self.maxsize == 0 {
            return Err(usage("--maxsize must be at least 1"));
        }
        Ok(())
    }
}

pub struct Mined {
    pub patterns: Vec<FrequentPattern>,
    pub sequences: usize,
    pub threshold: usize,
}

pub fn mine_file(o: &MineOptions) -> Result<Mined> {
    let corpus = load_sequences(&o.seqs)?;
    let cfg = MiningConfig::new(o.min_support, o.maxsize, o.language.load()?);
    log::info!(
        "mining {} sequences, min support {}, maxsize {}",
        corpus.len(),
        o.min_support,
        o.maxsize
    );
    let patterns = mine(&corpus, &cfg).with_context(|| format!("mining {}", o.seqs.display()))?;
    write(&o.out, &write_patterns(&patterns))?;
    Ok(Mined {
        threshold: min_support_count(o.min_support, corpus.len()),
        sequences: corpus.len(),
        patterns,
    })
}

pub fn load_patterns(path: &Path) -> Result<Vec<PatternRow>> {
    read_patterns(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn rank_file(
    seqs: &Path,
    patterns: &Path,
    top: usize,
    feature: FeatureMode,
    out: &Path,
) -> Result<Vec<RankedPattern>> {
    let corpus = load_sequences(seqs)?;
    let found: Vec<FrequentPattern> = load_patterns(patterns)?
        .iter()
        .map(PatternRow::frequent)
        .collect();
    let ranked = rank(&found, &corpus, top, feature);
    write(out, &write_ranked(&ranked))?;
    Ok(ranked)
}

/// Scenario label (`s2`) from the sequence's `scenario` attribute, else
/// from an id such as `s2_dg_cbr_t0007_1`.
pub fn scenario_group(s: &RelationalSequence) -> String {
    if let Some(n) = s.attrs.get("scenario") {
        return format!("s{n}");
    }
    let head = s.id.split('_').next().unwrap_or("");
    let digits = head.strip_prefix('s').unwrap_or("");
    if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
        head.to_string()
    } else {
        String::new()
    }
}

/// Files written by [`report`].
pub struct ReportFiles {
    pub actions_table: PathBuf,
    pub percentages: PathBuf,
    pub by_scenario: PathBuf,
    pub top_patterns: PathBuf,
}

/// One row per action, one percentage column per class.
pub fn percentage_csv(corpus: &[RelationalSequence]) -> String {
    let table = action_distribution(corpus);
    let totals: Vec<_> = ClassLabel::ALL
        .iter()
        .map(|&c| table.class_total(c))
        .collect();
    let mut s = String::from("action");
    for c in ClassLabel::ALL {
        let _ = write!(s, ",{c}");
    }
    s.push('\n');
    for (a, _) in vocab::ACTIONS {
        s.push_str(a);
        for t in &totals {
            let _ = write!(s, ",{:.4}", t.percentage(a));
        }
        s.push('\n');
    }
    s
}

pub fn report(seqs: &Path, ranked: &Path, top: usize, out: &Path) -> Result<ReportFiles> {
    let corpus = load_sequences(seqs)?;
    let rows = load_patterns(ranked)?;
    if rows.iter().any(|r| r.ranked.is_none()) {
        bail!("{} is not a ranked pattern table", ranked.display());
    }
    let files = ReportFiles {
        actions_table: out.join("actions.txt"),
        percentages: out.join("actions.csv"),
        by_scenario: out.join("actions_by_scenario.csv"),
        top_patterns: out.join("top_patterns.txt"),
    };
    let by = action_distribution_by(&corpus, scenario_group);
    let table = format!("{}\n{}", by.render(), action_distribution(&corpus).render());
    write(&files.actions_table, &table)?;
    write(&files.percentages, &percentage_csv(&corpus))?;
    write(&files.by_scenario, &by.to_csv())?;
    let mut listing = String::from("pattern | Fisher score | team\n");
    for r in rows.iter().take(top) {
        listing.push_str(&r.table_row().expect("ranked row"));
        listing.push('\n');
    }
    write(&files.top_patterns, &listing)?;
    Ok(files)
}
