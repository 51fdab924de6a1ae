//! Command-line front end: simulate trials, abstract the logs into
//! relational sequences, mine frequent patterns, rank them and write the
//! report tables.

pub mod commands;
pub mod error;
pub mod settings;
pub mod tsv;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use teamseq_core::scoring::FeatureMode;
use teamseq_sim::OpponentConfig;

use crate::commands::{
    abstract_to_file, mine_file, outcome_tally, rank_file, report, simulate, Approaches, Language,
    MineOptions, Scenarios, SimulateOptions,
};
use crate::error::{usage, CliError};
use crate::settings::Settings;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "TEAMSEQ_OUT";
pub const DEFAULT_ROOT: &str = "teamseq-out";

#[derive(Debug, Parser)]
#[command(
    name = "teamseq",
    version,
    about = "Mine team-play patterns from simulated robot soccer trials"
)]
pub struct Cli {
    /// `key = value` settings file; flags override it
    #[arg(long, global = true, value_name = "FILE")]
    pub settings: Option<PathBuf>,
    /// Output root for default paths [default: $TEAMSEQ_OUT or ./teamseq-out]
    #[arg(long, global = true, value_name = "DIR")]
    pub root: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run trials and write JSONL logs plus a manifest
    Simulate(SimArgs),
    /// Turn trial logs into relational sequences
    Abstract(AbstractArgs),
    /// Mine frequent patterns from a sequence file
    Mine(MineArgs),
    /// Rank mined patterns by Fisher score
    Rank(RankArgs),
    /// Write action tables, percentage CSVs and the top pattern listing
    Report(ReportArgs),
    /// simulate, abstract, mine, rank and report under the output root
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args, Default)]
pub struct SimArgs {
    /// 1, 2, 3, 4 or all [default: all]
    #[arg(long)]
    pub scenario: Option<Scenarios>,
    /// Opponents: dg or 2d [default: dg]
    #[arg(long)]
    pub config: Option<OpponentConfig>,
    /// cbr, rea or both [default: both]
    #[arg(long)]
    pub approach: Option<Approaches>,
    /// Trials per cell [default: 50]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed [default: 2024]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trial timeout in seconds [default: 60]
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Hand-coded case file [default: the shipped cases]
    #[arg(long, value_name = "FILE")]
    pub cases: Option<PathBuf>,
    /// Log directory [default: ROOT/logs]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct AbstractArgs {
    /// Directory holding the logs and manifest.csv [default: ROOT/logs]
    #[arg(long, value_name = "DIR")]
    pub logs: Option<PathBuf>,
    /// Sequence file [default: ROOT/sequences.txt]
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct MiningArgs {
    /// Minimum support as a fraction of the sequences [default: 0.10]
    #[arg(long)]
    pub min_support: Option<f64>,
    /// Maximum atoms per pattern [default: 3]
    #[arg(long)]
    pub maxsize: Option<usize>,
    /// soccer, actions or a background-knowledge file [default: soccer]
    #[arg(long)]
    pub bk: Option<Language>,
}

#[derive(Debug, Args, Default)]
pub struct MineArgs {
    /// Sequence file [default: ROOT/sequences.txt]
    #[arg(long, value_name = "FILE")]
    pub seqs: Option<PathBuf>,
    #[command(flatten)]
    pub mining: MiningArgs,
    /// Pattern table [default: ROOT/patterns.tsv]
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct RankingArgs {
    /// Patterns to keep [default: 20]
    #[arg(long)]
    pub top: Option<usize>,
    /// embeddings or binary [default: embeddings]
    #[arg(long)]
    pub feature: Option<FeatureMode>,
}

#[derive(Debug, Args, Default)]
pub struct RankArgs {
    /// Sequence file [default: ROOT/sequences.txt]
    #[arg(long, value_name = "FILE")]
    pub seqs: Option<PathBuf>,
    /// Pattern table from `mine` [default: ROOT/patterns.tsv]
    #[arg(long, value_name = "FILE")]
    pub patterns: Option<PathBuf>,
    #[command(flatten)]
    pub ranking: RankingArgs,
    /// Ranked table [default: ROOT/ranked.tsv]
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct ReportArgs {
    /// Sequence file [default: ROOT/sequences.txt]
    #[arg(long, value_name = "FILE")]
    pub seqs: Option<PathBuf>,
    /// Ranked table from `rank` [default: ROOT/ranked.tsv]
    #[arg(long, value_name = "FILE")]
    pub ranked: Option<PathBuf>,
    /// Patterns to list [default: 20]
    #[arg(long)]
    pub top: Option<usize>,
    /// Report directory [default: ROOT/report]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct PipelineArgs {
    /// 1, 2, 3, 4 or all [default: all]
    #[arg(long)]
    pub scenario: Option<Scenarios>,
    /// Opponents: dg or 2d [default: dg]
    #[arg(long)]
    pub config: Option<OpponentConfig>,
    /// cbr, rea or both [default: both]
    #[arg(long)]
    pub approach: Option<Approaches>,
    /// Trials per cell [default: 50]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed [default: 2024]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trial timeout in seconds [default: 60]
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Hand-coded case file [default: the shipped cases]
    #[arg(long, value_name = "FILE")]
    pub cases: Option<PathBuf>,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[command(flatten)]
    pub ranking: RankingArgs,
}

/// Resolved paths and settings shared by the subcommands.
struct Context {
    settings: Settings,
    root: PathBuf,
}

impl Context {
    fn path(&self, flag: Option<PathBuf>, key: &str, default: &str) -> Result<PathBuf, CliError> {
        Ok(self
            .settings
            .pick_opt(flag, key)?
            .unwrap_or_else(|| self.root.join(default)))
    }

    fn logs(&self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        self.path(flag, "logs", "logs")
    }

    fn seqs(&self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        self.path(flag, "seqs", "sequences.txt")
    }

    fn patterns(&self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        self.path(flag, "patterns", "patterns.tsv")
    }

    fn ranked(&self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        self.path(flag, "ranked", "ranked.tsv")
    }

    fn report(&self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        self.path(flag, "report", "report")
    }

    fn simulate_options(&self, a: SimArgs) -> Result<SimulateOptions, CliError> {
        let s = &self.settings;
        let o = SimulateOptions {
            scenarios: s
                .pick(a.scenario, "scenario", "all".parse().expect("valid"))?
                .0,
            config: s.pick(a.config, "config", OpponentConfig::Dg)?,
            approaches: s
                .pick(a.approach, "approach", "both".parse().expect("valid"))?
                .0,
            trials: s.pick(a.trials, "trials", 50)?,
            seed: s.pick(a.seed, "seed", 2024)?,
            timeout: s.pick(a.timeout, "timeout", 60.0)?,
            cases: s.pick_opt(a.cases, "cases")?,
            out: self.logs(a.out)?,
        };
        o.validate()?;
        Ok(o)
    }

    fn mine_options(
        &self,
        seqs: PathBuf,
        m: MiningArgs,
        out: PathBuf,
    ) -> Result<MineOptions, CliError> {
        let s = &self.settings;
        let o = MineOptions {
            seqs,
            min_support: s.pick(m.min_support, "min-support", 0.10)?,
            maxsize: s.pick(m.maxsize, "maxsize", 3)?,
            language: s.pick(m.bk, "bk", Language::Soccer)?,
            out,
        };
        o.validate()?;
        Ok(o)
    }

    fn ranking(&self, r: RankingArgs) -> Result<(usize, FeatureMode), CliError> {
        Ok((
            self.settings.pick(r.top, "top", 20)?,
            self.settings
                .pick(r.feature, "feature", FeatureMode::Embeddings)?,
        ))
    }
}

fn do_simulate(ctx: &Context, a: SimArgs) -> Result<(), CliError> {
    let o = ctx.simulate_options(a)?;
    let m = simulate(&o)?;
    println!(
        "{} trials written to {}: {}",
        m.rows.len(),
        o.out.display(),
        outcome_tally(&m)
    );
    Ok(())
}

fn do_abstract(logs: PathBuf, out: PathBuf) -> Result<(), CliError> {
    let seqs = abstract_to_file(&logs, &out)?;
    println!("{} sequences written to {}", seqs.len(), out.display());
    Ok(())
}

fn do_mine(o: &MineOptions) -> Result<(), CliError> {
    let m = mine_file(o)?;
    println!(
        "{} patterns with support >= {} of {} sequences written to {}",
        m.patterns.len(),
        m.threshold,
        m.sequences,
        o.out.display()
    );
    Ok(())
}

fn do_rank(
    seqs: PathBuf,
    patterns: PathBuf,
    top: usize,
    feature: FeatureMode,
    out: PathBuf,
) -> Result<(), CliError> {
    let ranked = rank_file(&seqs, &patterns, top, feature, &out)?;
    println!(
        "{} ranked patterns written to {}",
        ranked.len(),
        out.display()
    );
    Ok(())
}

fn do_report(seqs: PathBuf, ranked: PathBuf, top: usize, out: PathBuf) -> Result<(), CliError> {
    let f = report(&seqs, &ranked, top, &out)?;
    println!(
        "report written: {}, {}, {}, {}",
        f.actions_table.display(),
        f.percentages.display(),
        f.by_scenario.display(),
        f.top_patterns.display()
    );
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let settings = match &cli.settings {
        None => Settings::default(),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            Settings::parse(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
    };
    let env_root = std::env::var_os(OUT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    let root = settings
        .pick_opt(cli.root, "root")?
        .or(env_root)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_ROOT));
    let ctx = Context { settings, root };
    match cli.command {
        Command::Simulate(a) => do_simulate(&ctx, a),
        Command::Abstract(a) => do_abstract(ctx.logs(a.logs)?, ctx.seqs(a.out)?),
        Command::Mine(a) => {
            let o = ctx.mine_options(ctx.seqs(a.seqs)?, a.mining, ctx.patterns(a.out)?)?;
            do_mine(&o)
        }
        Command::Rank(a) => {
            let (top, feature) = ctx.ranking(a.ranking)?;
            do_rank(
                ctx.seqs(a.seqs)?,
                ctx.patterns(a.patterns)?,
                top,
                feature,
                ctx.ranked(a.out)?,
            )
        }
        Command::Report(a) => {
            let top = ctx.settings.pick(a.top, "top", 20)?;
            do_report(
                ctx.seqs(a.seqs)?,
                ctx.ranked(a.ranked)?,
                top,
                ctx.report(a.out)?,
            )
        }
        Command::Pipeline(a) => {
            let sim = ctx.simulate_options(SimArgs {
                scenario: a.scenario,
                config: a.config,
                approach: a.approach,
                trials: a.trials,
                seed: a.seed,
                timeout: a.timeout,
                cases: a.cases,
                out: None,
            })?;
            let (seqs, patterns, ranked) =
                (ctx.seqs(None)?, ctx.patterns(None)?, ctx.ranked(None)?);
            let mine = ctx.mine_options(seqs.clone(), a.mining, patterns.clone())?;
            let (top, feature) = ctx.ranking(a.ranking)?;
            let m = simulate(&sim)?;
            println!(
                "{} trials written to {}: {}",
                m.rows.len(),
                sim.out.display(),
                outcome_tally(&m)
            );
            do_abstract(sim.out.clone(), seqs.clone())?;
            do_mine(&mine)?;
            do_rank(seqs.clone(), patterns, top, feature, ranked.clone())?;
            do_report(seqs, ranked, top, ctx.report(None)?)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
