//! From raw trial logs to relational sequences.
//!
//! The pipeline is `segment_trial` → `detect_events` → `classify_actions` →
//! `emit_sequence`; [`abstract_trial`] runs all of it.

mod classify;
mod events;
mod log;
mod world;

use thiserror::Error;

pub use classify::{
    classify_actions, recognize_actions, ActionAtomGroup, ActionKind, RecognizedAction,
};
pub use events::{detect_events, Event, EventKind};
pub use log::{BallState, Frame, LogError, OutcomeKind, OutcomeLine, RobotState, Team, TrialLog};
pub use world::{describe_world, direction_view, relative_position, wrap_angle};

use crate::field::FieldModel;
use crate::sequence::{ClassLabel, RelationalSequence};
use crate::term::{Atom, Term};
use crate::vocab;

/// Thresholds of the recognition rules, in seconds and metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbstractionConfig {
    pub field: FieldModel,
    /// Minimum time without an owner for a gain to count as getball.
    pub t_free: f64,
    /// Minimum displacement for a dribbling.
    pub d_drib: f64,
    /// Advance towards the penalty box that makes a progress action.
    pub d_prog: f64,
    /// Opponent-to-ball distance that opens a challenge.
    pub challenge_radius: f64,
    /// Dead zone of the qualitative relations.
    pub eps_same: f64,
    /// Margin outside a post within which an exit counts as to_goal.
    pub w_near: f64,
}

impl Default for AbstractionConfig {
    fn default() -> Self {
        AbstractionConfig {
            field: FieldModel::default(),
            t_free: 1.0,
            d_drib: 0.5,
            d_prog: 0.5,
            challenge_radius: 0.4,
            eps_same: 0.1,
            w_near: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub kind: OutcomeKind,
    pub t: f64,
}

impl TrialOutcome {
    pub fn atom(&self, time: &str) -> Atom {
        Atom::new(self.kind.as_str(), vec![Term::constant(time)])
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AbstractionError {
    #[error(transparent)]
    Log(#[from] LogError),
}

/// Classifies a ball leaving the field between two consecutive positions.
/// Crossing the attacked goal line between the posts is a goal, within
/// `w_near` outside a post a to_goal, anything else a ball_out.
pub fn exit_outcome(prev: (f64, f64), cur: (f64, f64), cfg: &AbstractionConfig) -> OutcomeKind {
    let f = &cfg.field;
    let (hl, hw) = (f.half_length(), f.half_width());
    let (dx, dy) = (cur.0 - prev.0, cur.1 - prev.1);
    // fraction of the step at which each violated boundary is reached
    let at = |p: f64, d: f64, limit: f64| {
        if d.abs() < 1e-12 {
            0.0
        } else {
            ((limit - p) / d).clamp(0.0, 1.0)
        }
    };
    let mut first: Option<(f64, bool)> = None;
    let mut consider = |s: f64, goal_line: bool| {
        if first.is_none_or(|(b, _)| s < b) {
            first = Some((s, goal_line));
        }
    };
    if cur.0 > hl {
        consider(at(prev.0, dx, hl), true);
    }
    if cur.0 < -hl {
        consider(at(prev.0, dx, -hl), false);
    }
    if cur.1 > hw {
        consider(at(prev.1, dy, hw), false);
    }
    if cur.1 < -hw {
        consider(at(prev.1, dy, -hw), false);
    }
    match first {
        Some((s, true)) => {
            let y = (prev.1 + s * dy).abs();
            if y <= f.goal_half_width {
                OutcomeKind::Goal
            } else if y <= f.goal_half_width + cfg.w_near {
                OutcomeKind::ToGoal
            } else {
                OutcomeKind::BallOut
            }
        }
        _ => OutcomeKind::BallOut,
    }
}

/// The outcome of a terminated log, judged from its last frames: an exit is
/// classified geometrically, a defender holding the ball in the attacked
/// penalty box is a block, anything else ran out of time.
pub fn classify_outcome(log: &TrialLog, cfg: &AbstractionConfig) -> Result<TrialOutcome, LogError> {
    let line = log.outcome.as_ref().ok_or(LogError::NotTerminated)?;
    let last = log.frames.last().ok_or(LogError::Empty)?;
    let ball = (last.ball.x, last.ball.y);
    let kind = if !cfg.field.contains(ball.0, ball.1) {
        let prev = log
            .frames
            .iter()
            .rev()
            .nth(1)
            .map(|f| (f.ball.x, f.ball.y))
            .unwrap_or(ball);
        exit_outcome(prev, ball, cfg)
    } else if last
        .poss
        .as_deref()
        .and_then(|p| last.robot(p))
        .is_some_and(|r| r.team == Team::Defend && cfg.field.attack_box().contains(r.x, r.y))
    {
        OutcomeKind::Block
    } else {
        OutcomeKind::OutOfTime
    };
    Ok(TrialOutcome { kind, t: line.t })
}

/// Builds the sequence: each action atom followed by its relations and, when
/// another action follows, the `next_a` link; then the outcome atom (if any)
/// on a fresh time constant; then `agent/1` facts for `agents` and the two
/// `opponent/1` facts.
pub fn emit_sequence(
    id: &str,
    class_label: ClassLabel,
    actions: &[ActionAtomGroup],
    outcome: Option<&TrialOutcome>,
    agents: &[String],
) -> RelationalSequence {
    let n = actions.len();
    let mut atoms = Vec::with_capacity(n * 7 + 5);
    let times: Vec<String> = (1..=n + 1).map(|i| format!("time_{i}")).collect();
    for (i, g) in actions.iter().enumerate() {
        let rename = |a: &Atom| Atom {
            predicate: a.predicate.clone(),
            args: a
                .args
                .iter()
                .map(|t| match t {
                    Term::Const(c) if **c == *g.time_constant => Term::constant(&times[i]),
                    other => other.clone(),
                })
                .collect(),
        };
        atoms.push(rename(&g.action));
        atoms.extend(g.relations.iter().map(rename));
        if i + 1 < n {
            atoms.push(Atom::new(
                vocab::NEXT,
                vec![Term::constant(&times[i]), Term::constant(&times[i + 1])],
            ));
        }
    }
    if let Some(o) = outcome {
        atoms.push(o.atom(&times[n]));
    }
    let mut agents = agents.to_vec();
    agents.sort();
    for a in &agents {
        atoms.push(Atom::new(vocab::AGENT, vec![Term::constant(a)]));
    }
    for o in ["op_1", "op_2"] {
        atoms.push(Atom::new(vocab::OPPONENT, vec![Term::constant(o)]));
    }
    RelationalSequence::new(id, class_label, atoms)
}

/// A stretch of a trial that becomes one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub log: TrialLog,
    /// The outcome closing the segment; `None` when it ends with the ball
    /// lost to the defenders.
    pub outcome: Option<TrialOutcome>,
    /// Index of the segment's first frame in the full log.
    pub first_frame: usize,
}

/// Splits a trial into attack episodes. A segment ends when the defenders
/// take the ball from the attackers, on a block, or when the ball leaves the
/// field; the last one runs to the end of the log. Segments in which no
/// attacker ever holds the ball are dropped.
pub fn segment_trial(log: &TrialLog, cfg: &AbstractionConfig) -> Result<Vec<Segment>, LogError> {
    let events = detect_events(log, cfg)?;
    let frames = &log.frames;
    let mut cuts: Vec<(usize, usize, Option<TrialOutcome>)> = Vec::new();
    let mut prev_team: Option<Team> = None;
    for e in &events {
        let b = e.frame_start;
        match e.kind {
            EventKind::BallOut | EventKind::GoalLineCross => {
                let prev = if b > 0 {
                    &frames[b - 1].ball
                } else {
                    &frames[b].ball
                };
                let kind =
                    exit_outcome((prev.x, prev.y), (frames[b].ball.x, frames[b].ball.y), cfg);
                cuts.push((b, b + 1, Some(TrialOutcome { kind, t: e.t_start })));
                prev_team = None;
            }
            EventKind::Block => {
                let outcome = TrialOutcome {
                    kind: OutcomeKind::Block,
                    t: e.t_start,
                };
                cuts.push((b, b, Some(outcome)));
                prev_team = Some(Team::Defend);
            }
            EventKind::PossessionGain => {
                let subject = e.subject.as_deref().expect("possession subject");
                let team = frames[b].team_of(subject).expect("holder present");
                if team == Team::Defend && prev_team == Some(Team::Attack) {
                    cuts.push((b, b, None));
                }
                prev_team = Some(team);
            }
            EventKind::PossessionChallenge => {}
        }
    }
    let mut segments = Vec::new();
    let mut start = 0;
    let mut push = |from: usize, to: usize, outcome: Option<TrialOutcome>| {
        let slice = &frames[from..=to];
        let attacked = slice.iter().any(|f| {
            f.poss
                .as_deref()
                .and_then(|p| f.team_of(p))
                .is_some_and(|t| t == Team::Attack)
        });
        if attacked {
            segments.push(Segment {
                log: TrialLog {
                    frames: slice.to_vec(),
                    outcome: None,
                },
                outcome,
                first_frame: from,
            });
        }
    };
    for (b, next, outcome) in cuts {
        if b >= start {
            push(start, b, outcome);
            start = next;
        }
    }
    if start < frames.len() {
        let outcome = match log.outcome {
            Some(_) => Some(classify_outcome(log, cfg)?),
            None => None,
        };
        push(start, frames.len() - 1, outcome);
    }
    Ok(segments)
}

/// Abstracts a whole trial into one sequence per segment with at least one
/// action, with ids `<id>_1`, `<id>_2`, ...
pub fn abstract_trial(
    log: &TrialLog,
    id: &str,
    class_label: ClassLabel,
    cfg: &AbstractionConfig,
) -> Result<Vec<RelationalSequence>, AbstractionError> {
    let agents = log.attackers();
    let mut out = Vec::new();
    for seg in segment_trial(log, cfg)? {
        let events = detect_events(&seg.log, cfg)?;
        let actions = classify_actions(&events, &seg.log, cfg);
        if actions.is_empty() {
            continue;
        }
        let sid = format!("{id}_{}", out.len() + 1);
        out.push(emit_sequence(
            &sid,
            class_label,
            &actions,
            seg.outcome.as_ref(),
            &agents,
        ));
    }
    Ok(out)
}
