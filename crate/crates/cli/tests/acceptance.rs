//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p teamseq-cli --test acceptance`.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use teamseq_cli::commands::{
    abstract_to_file, load_sequences, mine_file, rank_file, report, simulate, Language,
    MineOptions, SimulateOptions,
};
use teamseq_core::abstraction::{abstract_trial, AbstractionConfig};
use teamseq_core::parse::parse_atom_list;
use teamseq_core::scoring::{action_distribution, FeatureMode, RankedPattern};
use teamseq_core::term::join_atoms;
use teamseq_core::ClassLabel;
use teamseq_sim::{Approach, OpponentConfig, Scenario};

const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let took = start.elapsed();
    match (r, limit) {
        (Ok(msg), Some(l)) if took > l => Err(format!("{msg}, but took {took:.1?} (limit {l:?})")),
        (Ok(msg), _) => Ok(format!("{msg} in {took:.2?}")),
        (Err(e), _) => Err(e),
    }
}

fn c5_abstraction() -> Outcome {
    let cases = support::abstraction_cases::cases();
    if cases.len() < 12 {
        return Err(format!("only {} curated logs", cases.len()));
    }
    if !cases.iter().any(|c| c.name == "worked example") {
        return Err("worked example missing from the suite".into());
    }
    let cfg = AbstractionConfig::default();
    for case in &cases {
        let seqs = abstract_trial(&case.log, "x", ClassLabel::Cbr, &cfg)
            .map_err(|e| format!("{}: {e}", case.name))?;
        let got: Vec<String> = seqs.iter().map(|s| join_atoms(&s.atoms)).collect();
        let mut want = Vec::new();
        for e in &case.expected {
            want.push(join_atoms(
                &parse_atom_list(e).map_err(|e| format!("{}: {e}", case.name))?,
            ));
        }
        if got != want {
            return Err(format!("{}: expected {want:?}, got {got:?}", case.name));
        }
    }
    Ok(format!("{} curated logs match", cases.len()))
}

struct Run {
    ranked: Vec<RankedPattern>,
}

fn desk_pipeline(dir: &Path) -> Result<Run, String> {
    let sim = SimulateOptions {
        scenarios: Scenario::ALL.to_vec(),
        config: OpponentConfig::Dg,
        approaches: Approach::ALL.to_vec(),
        trials: 50,
        seed: SEED,
        timeout: 60.0,
        cases: None,
        out: dir.join("logs"),
    };
    let seqs = dir.join("sequences.txt");
    let patterns = dir.join("patterns.tsv");
    let ranked = dir.join("ranked.tsv");
    simulate(&sim).map_err(|e| format!("{e:#}"))?;
    abstract_to_file(&sim.out, &seqs).map_err(|e| format!("{e:#}"))?;
    let mine = MineOptions {
        seqs: seqs.clone(),
        min_support: 0.10,
        maxsize: 3,
        language: Language::Soccer,
        out: patterns.clone(),
    };
    mine_file(&mine).map_err(|e| format!("{e:#}"))?;
    let ranked_rows = rank_file(&seqs, &patterns, 20, FeatureMode::Embeddings, &ranked)
        .map_err(|e| format!("{e:#}"))?;
    report(&seqs, &ranked, 20, &dir.join("report")).map_err(|e| format!("{e:#}"))?;
    Ok(Run {
        ranked: ranked_rows,
    })
}

fn c6_directional(dir: &Path) -> Outcome {
    let run = desk_pipeline(dir)?;
    let corpus = load_sequences(&dir.join("sequences.txt")).map_err(|e| format!("{e:#}"))?;
    let table = action_distribution(&corpus);
    let (cbr, rea) = (
        table.class_total(ClassLabel::Cbr),
        table.class_total(ClassLabel::Rea),
    );
    let n = |c: ClassLabel| corpus.iter().filter(|s| s.class_label == c).count();
    let mut failures = Vec::new();
    if cbr.count("pass") <= rea.count("pass") {
        failures.push(format!(
            "(a) passes cbr {} <= rea {}",
            cbr.count("pass"),
            rea.count("pass")
        ));
    }
    if rea.percentage("dribbling") <= cbr.percentage("dribbling") {
        failures.push(format!(
            "(b) dribbling share rea {:.4} <= cbr {:.4}",
            rea.percentage("dribbling"),
            cbr.percentage("dribbling")
        ));
    }
    if n(ClassLabel::Cbr) <= n(ClassLabel::Rea) {
        failures.push(format!(
            "(c) sequences cbr {} <= rea {}",
            n(ClassLabel::Cbr),
            n(ClassLabel::Rea)
        ));
    }
    let has = |r: &RankedPattern, preds: &[&str]| {
        r.pattern
            .atoms
            .iter()
            .any(|a| preds.contains(&&*a.predicate))
    };
    let cbr_pass = run
        .ranked
        .iter()
        .any(|r| r.attributed_class == ClassLabel::Cbr && has(r, &["pass"]));
    let rea_attack = run
        .ranked
        .iter()
        .any(|r| r.attributed_class == ClassLabel::Rea && has(r, &["intercept", "progressToGoal"]));
    if !cbr_pass {
        failures.push("(d) no pass pattern attributed to cbr in the top 20".into());
    }
    if !rea_attack {
        failures
            .push("(d) no intercept/progressToGoal pattern attributed to rea in the top 20".into());
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    Ok(format!(
        "passes {}/{}, dribbling share {:.2}%/{:.2}%, sequences {}/{} (cbr/rea), top-20 attribution ok",
        cbr.count("pass"),
        rea.count("pass"),
        cbr.percentage("dribbling"),
        rea.percentage("dribbling"),
        n(ClassLabel::Cbr),
        n(ClassLabel::Rea)
    ))
}

fn tree_bytes(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))? {
        let p = entry.map_err(|e| e.to_string())?.path();
        let bytes = fs::read(&p).map_err(|e| format!("{}: {e}", p.display()))?;
        out.insert(p.file_name().unwrap().to_string_lossy().into_owned(), bytes);
    }
    Ok(out)
}

fn c7_determinism(first: &Path, second: &Path) -> Outcome {
    desk_pipeline(second)?;
    let (a, b) = (
        tree_bytes(&first.join("logs"))?,
        tree_bytes(&second.join("logs"))?,
    );
    if a != b {
        let diff = a
            .keys()
            .find(|k| a.get(*k) != b.get(*k))
            .cloned()
            .unwrap_or_default();
        return Err(format!("logs differ (first mismatch: {diff})"));
    }
    for f in ["sequences.txt", "ranked.tsv"] {
        let x = fs::read(first.join(f)).map_err(|e| e.to_string())?;
        let y = fs::read(second.join(f)).map_err(|e| e.to_string())?;
        if x != y {
            return Err(format!("{f} differs between runs"));
        }
    }
    Ok(format!(
        "{} log files, sequences and ranked table identical",
        a.len()
    ))
}

fn miner_criteria() -> (Outcome, Outcome) {
    let start = Instant::now();
    let r = support::criteria::miner_vs_enumeration(50, SEED);
    let took = start.elapsed();
    match r {
        Err(e) => (Err(e.clone()), Err(format!("miner comparison failed: {e}"))),
        Ok(m) => {
            let c2 = if took > Duration::from_secs(60) {
                Err(format!(
                    "{} runs match, but took {took:.1?} (limit 60s)",
                    m.runs
                ))
            } else {
                Ok(format!(
                    "{} runs, {} patterns match in {took:.2?}",
                    m.runs, m.patterns
                ))
            };
            let c3 = if m.antimonotone_violations == 0 {
                Ok(format!(
                    "{} generalizations checked, 0 violations",
                    m.checked_generalizations
                ))
            } else {
                Err(format!("{} violations", m.antimonotone_violations))
            };
            (c2, c3)
        }
    }
}

fn main() {
    let work = tempfile::tempdir().expect("temp dir");
    let (first, second) = (work.path().join("run1"), work.path().join("run2"));
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push((
        "1 subsumption oracle",
        timed(Some(Duration::from_secs(10)), || {
            support::criteria::subsumption_vs_enumeration(1000, SEED)
        }),
    ));
    let (c2, c3) = miner_criteria();
    results.push(("2 miner completeness/soundness", c2));
    results.push(("3 antimonotonicity", c3));
    results.push((
        "4 fisher score",
        timed(None, || support::criteria::fisher_properties(1000, SEED)),
    ));
    results.push(("5 abstraction regression", timed(None, c5_abstraction)));
    results.push((
        "6 end-to-end direction",
        timed(Some(Duration::from_secs(300)), || c6_directional(&first)),
    ));
    results.push((
        "7 determinism",
        timed(None, || c7_determinism(&first, &second)),
    ));
    results.push((
        "8 format round-trip",
        timed(None, support::criteria::format_round_trip),
    ));
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
