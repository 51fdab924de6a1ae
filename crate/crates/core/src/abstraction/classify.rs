//! Turning possession events into the seven attacker actions.

use super::events::{Event, EventKind};
use super::log::{Frame, Team, TrialLog};
use super::world::describe_world;
use super::AbstractionConfig;
use crate::term::{Atom, Term};
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    GetBall,
    Catch,
    Pass,
    Dribbling,
    ProgressToGoal,
    AloneProgressToGoal,
    Intercept,
}

impl ActionKind {
    pub fn predicate(self) -> &'static str {
        match self {
            ActionKind::GetBall => vocab::GETBALL,
            ActionKind::Catch => vocab::CATCH,
            ActionKind::Pass => vocab::PASS,
            ActionKind::Dribbling => vocab::DRIBBLING,
            ActionKind::ProgressToGoal => vocab::PROGRESS,
            ActionKind::AloneProgressToGoal => vocab::ALONE_PROGRESS,
            ActionKind::Intercept => vocab::INTERCEPT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecognizedAction {
    pub kind: ActionKind,
    pub frame: usize,
    pub t: f64,
    /// Robot the action is charged to; world relations are taken from its
    /// viewpoint (the receiver for a pass, the loser for an intercept).
    pub subject: String,
    /// Kicker of a pass.
    pub kicker: Option<String>,
}

/// An action atom with its five world-relation atoms, all on one time
/// constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionAtomGroup {
    pub action: Atom,
    pub relations: Vec<Atom>,
    pub time_constant: String,
    pub t: f64,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

struct Hold {
    holder: String,
    team: Team,
    release_frame: usize,
    challenged_at_release: bool,
    /// Progress reference at release, if no challenge was running.
    reference: Option<(f64, f64)>,
}

struct Ctx<'a> {
    log: &'a TrialLog,
    target: (f64, f64),
    out: Vec<RecognizedAction>,
}

impl Ctx<'_> {
    fn pos(&self, frame: usize, id: &str) -> (f64, f64) {
        self.log.frames[frame]
            .robot(id)
            .expect("robot present")
            .pos()
    }

    fn to_box(&self, p: (f64, f64)) -> f64 {
        dist(p, self.target)
    }

    fn push(&mut self, kind: ActionKind, frame: usize, subject: &str, kicker: Option<&str>) {
        self.out.push(RecognizedAction {
            kind,
            frame,
            t: self.log.frames[frame].t,
            subject: subject.to_string(),
            kicker: kicker.map(str::to_string),
        });
    }

    /// progressToGoal when a teammate is closer to the penalty box than the
    /// holder, aloneProgressToGoal otherwise.
    fn progress_kind(&self, frame: usize, holder: &str) -> ActionKind {
        let f: &Frame = &self.log.frames[frame];
        let me = self.to_box(self.pos(frame, holder));
        let team = f.team_of(holder).expect("holder present");
        let supported = f
            .team(team)
            .iter()
            .any(|r| r.id != holder && self.to_box(r.pos()) < me);
        if supported {
            ActionKind::ProgressToGoal
        } else {
            ActionKind::AloneProgressToGoal
        }
    }
}

/// Applies the recognition rules to the possession events of one log.
///
/// On an attacker gaining the ball:
/// * free for at least `t_free` (or no earlier owner) → getball;
/// * taken from an opponent → catch;
/// * from a teammate → pass(kicker, receiver);
/// * regained by the same robot → dribbling if it was being challenged when
///   it let go, progressToGoal/aloneProgressToGoal if it advanced at least
///   `d_prog` towards the penalty box, getball otherwise.
///
/// While an attacker holds the ball, escaping a challenge after moving at
/// least `d_drib` is a dribbling, and each unchallenged advance of `d_prog`
/// towards the penalty box is a progress action.
///
/// A defender gaining the ball from an attacker outside the penalty box is an
/// intercept charged to the attacker.
pub fn recognize_actions(
    events: &[Event],
    log: &TrialLog,
    cfg: &AbstractionConfig,
) -> Vec<RecognizedAction> {
    let mut cx = Ctx {
        log,
        target: cfg.field.attack_box().center(),
        out: Vec::new(),
    };
    let frames = &log.frames;
    let mut prev: Option<Hold> = None;
    for (ei, e) in events.iter().enumerate() {
        if e.kind.is_exit() {
            prev = None;
            continue;
        }
        if !e.kind.is_possession() {
            continue;
        }
        let r = e.subject.as_deref().expect("possession subject");
        let g = e.frame_start;
        let team = frames[g].team_of(r).expect("holder present");
        let mut end = g;
        while end + 1 < frames.len()
            && frames[end + 1].poss.as_deref() == Some(r)
            && cfg
                .field
                .contains(frames[end + 1].ball.x, frames[end + 1].ball.y)
        {
            end += 1;
        }
        let challenges: Vec<&Event> = events
            .iter()
            .filter(|c| c.kind == EventKind::PossessionChallenge && c.contemporary_with == Some(ei))
            .collect();

        if team == Team::Defend {
            if let Some(p) = &prev {
                if p.team == Team::Attack && e.kind == EventKind::PossessionGain {
                    let loser = p.holder.clone();
                    cx.push(ActionKind::Intercept, g, &loser, None);
                }
            }
            prev = Some(Hold {
                holder: r.to_string(),
                team,
                release_frame: end,
                challenged_at_release: false,
                reference: None,
            });
            continue;
        }

        let here = cx.pos(g, r);
        match &prev {
            None => cx.push(ActionKind::GetBall, g, r, None),
            Some(p) if frames[g].t - frames[p.release_frame].t >= cfg.t_free => {
                cx.push(ActionKind::GetBall, g, r, None)
            }
            Some(p) if p.team == Team::Defend => cx.push(ActionKind::Catch, g, r, None),
            Some(p) if p.holder != r => {
                let kicker = p.holder.clone();
                cx.push(ActionKind::Pass, g, r, Some(&kicker));
            }
            Some(p) => {
                if p.challenged_at_release {
                    cx.push(ActionKind::Dribbling, g, r, None);
                } else if p
                    .reference
                    .is_some_and(|rf| cx.to_box(rf) - cx.to_box(here) >= cfg.d_prog)
                {
                    let kind = cx.progress_kind(g, r);
                    cx.push(kind, g, r, None);
                } else {
                    cx.push(ActionKind::GetBall, g, r, None);
                }
            }
        }

        let mut reference = Some(here);
        let mut chal_start = here;
        #[allow(clippy::needless_range_loop)]
        for j in g..=end {
            let p = cx.pos(j, r);
            if challenges.iter().any(|c| c.frame_start == j) {
                reference = None;
                chal_start = p;
            }
            let escaped = challenges.iter().any(|c| {
                c.frame_end == j && c.frame_end > c.frame_start && {
                    let who = c.subject.as_deref().expect("challenger");
                    let b = &frames[j].ball;
                    dist(cx.pos(j, who), (b.x, b.y)) > cfg.challenge_radius
                }
            });
            let active = challenges
                .iter()
                .any(|c| c.frame_start <= j && j < c.frame_end);
            if escaped {
                if dist(chal_start, p) >= cfg.d_drib {
                    cx.push(ActionKind::Dribbling, j, r, None);
                }
                reference = Some(p);
            } else if !active {
                if let Some(rf) = reference {
                    if cx.to_box(rf) - cx.to_box(p) >= cfg.d_prog {
                        let kind = cx.progress_kind(j, r);
                        cx.push(kind, j, r, None);
                        reference = Some(p);
                    }
                }
            }
        }
        let challenged_at_release = challenges
            .iter()
            .any(|c| c.frame_start <= end && c.frame_end > end);
        prev = Some(Hold {
            holder: r.to_string(),
            team,
            release_frame: end,
            challenged_at_release,
            reference: if challenged_at_release {
                None
            } else {
                reference
            },
        });
    }
    cx.out
}

/// Recognized actions with their world relations, on time constants
/// `time_1, time_2, ...` in temporal order.
pub fn classify_actions(
    events: &[Event],
    log: &TrialLog,
    cfg: &AbstractionConfig,
) -> Vec<ActionAtomGroup> {
    recognize_actions(events, log, cfg)
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            let time = format!("time_{}", i + 1);
            let mut args = vec![Term::constant(&time)];
            if let Some(k) = &a.kicker {
                args.push(Term::constant(k));
            }
            args.push(Term::constant(&a.subject));
            ActionAtomGroup {
                action: Atom::new(a.kind.predicate(), args),
                relations: describe_world(&log.frames[a.frame], &a.subject, &time, cfg),
                time_constant: time,
                t: a.t,
            }
        })
        .collect()
}
