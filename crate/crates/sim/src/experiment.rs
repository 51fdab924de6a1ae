//! Batches of trials over a scenario × configuration × approach matrix,
//! written as one JSONL log per trial plus a CSV manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::case::CaseBase;
use crate::config::{Approach, OpponentConfig, Scenario, SimConfig};
use crate::error::SimError;
use crate::trial::run_trial;

pub const MANIFEST_FILE: &str = "manifest.csv";
pub const MANIFEST_HEADER: &str =
    "cell,scenario,config,approach,trial,seed,timeout,path,outcome,sha256";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub scenario: Scenario,
    pub opponents: OpponentConfig,
    pub approach: Approach,
}

impl Cell {
    pub fn name(&self) -> String {
        format!(
            "s{}_{}_{}",
            self.scenario.number(),
            self.opponents,
            self.approach
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub scenarios: Vec<Scenario>,
    pub configs: Vec<OpponentConfig>,
    pub approaches: Vec<Approach>,
    pub trials_per_cell: usize,
    pub master_seed: u64,
    /// Physical constants, noise and timeout shared by every trial.
    pub template: SimConfig,
}

impl ExperimentPlan {
    pub fn new(
        scenarios: Vec<Scenario>,
        configs: Vec<OpponentConfig>,
        approaches: Vec<Approach>,
        trials_per_cell: usize,
        master_seed: u64,
    ) -> Self {
        ExperimentPlan {
            scenarios,
            configs,
            approaches,
            trials_per_cell,
            master_seed,
            template: SimConfig::new(Scenario::S1, OpponentConfig::Dg, Approach::Rea, 0),
        }
    }

    /// Cells in scenario, configuration, approach order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &scenario in &self.scenarios {
            for &opponents in &self.configs {
                for &approach in &self.approaches {
                    out.push(Cell {
                        scenario,
                        opponents,
                        approach,
                    });
                }
            }
        }
        out
    }

    pub fn trial_config(&self, cell: &Cell, cell_index: usize, trial: usize) -> SimConfig {
        SimConfig {
            scenario: cell.scenario,
            opponents: cell.opponents,
            approach: cell.approach,
            seed: trial_seed(self.master_seed, cell_index, trial),
            ..self.template
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one trial: the cell index is mixed into the master seed, then the
/// trial number.
pub fn trial_seed(master: u64, cell_index: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(cell_index as u64)) ^ trial as u64)
}

pub fn log_file_name(cell: &Cell, trial: usize) -> String {
    format!("{}_t{trial:04}.jsonl", cell.name())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    pub cell: String,
    pub scenario: u8,
    pub config: String,
    pub approach: Approach,
    pub trial: usize,
    pub seed: u64,
    pub timeout: f64,
    /// Log file, relative to the manifest's directory.
    pub path: String,
    pub outcome: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(MANIFEST_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.cell,
                r.scenario,
                r.config,
                r.approach,
                r.trial,
                r.seed,
                r.timeout,
                r.path,
                r.outcome,
                r.sha256
            );
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Manifest, String> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == MANIFEST_HEADER => {}
            _ => {
                return Err(format!(
                    "manifest must start with the header '{MANIFEST_HEADER}'"
                ))
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let n = i + 1;
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 10 {
                return Err(format!("line {n}: expected 10 fields, found {}", f.len()));
            }
            let num = |v: &str, what: &str| format!("line {n}: bad {what} '{v}'");
            rows.push(ManifestRow {
                cell: f[0].to_string(),
                scenario: f[1].parse().map_err(|_| num(f[1], "scenario"))?,
                config: f[2].to_string(),
                approach: f[3].parse().map_err(|e: String| format!("line {n}: {e}"))?,
                trial: f[4].parse().map_err(|_| num(f[4], "trial"))?,
                seed: f[5].parse().map_err(|_| num(f[5], "seed"))?,
                timeout: f[6].parse().map_err(|_| num(f[6], "timeout"))?,
                path: f[7].to_string(),
                outcome: f[8].to_string(),
                sha256: f[9].to_string(),
            });
        }
        Ok(Manifest { rows })
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SimError + '_ {
    move |source| SimError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs every trial of the plan (in parallel), writes the logs and
/// `manifest.csv` into `out`, and returns the manifest.
pub fn run_experiment(
    plan: &ExperimentPlan,
    casebase: Option<&CaseBase>,
    out: &Path,
) -> Result<Manifest, SimError> {
    if plan.trials_per_cell == 0 {
        return Err(SimError::Config(
            "trials per cell must be at least 1".into(),
        ));
    }
    plan.template.validate()?;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let cells = plan.cells();
    let jobs: Vec<(usize, Cell, usize)> = cells
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..plan.trials_per_cell).map(move |t| (ci, *c, t)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(ci, cell, trial)| {
            let config = plan.trial_config(&cell, ci, trial);
            let log = run_trial(&config, casebase)?;
            let text = log.to_jsonl();
            let name = log_file_name(&cell, trial);
            let path: PathBuf = out.join(&name);
            fs::write(&path, &text).map_err(io_err(&path))?;
            Ok(ManifestRow {
                cell: cell.name(),
                scenario: cell.scenario.number(),
                config: cell.opponents.to_string(),
                approach: cell.approach,
                trial,
                seed: config.seed,
                timeout: config.timeout,
                path: name,
                outcome: log
                    .outcome
                    .as_ref()
                    .map_or_else(String::new, |o| o.outcome.clone()),
                sha256: hex::encode(Sha256::digest(text.as_bytes())),
            })
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let manifest = Manifest { rows };
    let mpath = out.join(MANIFEST_FILE);
    fs::write(&mpath, manifest.to_csv()).map_err(io_err(&mpath))?;
    Ok(manifest)
}
