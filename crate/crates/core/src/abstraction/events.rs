//! Low-level events with persistence: possession, challenges, ball exits.

use super::log::{Frame, LogError, Team, TrialLog};
use super::AbstractionConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    PossessionGain,
    /// An opponent within challenge radius of the ball while it is held.
    PossessionChallenge,
    BallOut,
    /// The ball crossed the attacked goal line between the posts.
    GoalLineCross,
    /// A defender took the ball inside the attacked penalty box.
    Block,
}

impl EventKind {
    /// Events that carry possession of the ball.
    pub fn is_possession(self) -> bool {
        matches!(self, EventKind::PossessionGain | EventKind::Block)
    }

    pub fn is_exit(self) -> bool {
        matches!(self, EventKind::BallOut | EventKind::GoalLineCross)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub t_start: f64,
    pub t_end: f64,
    pub frame_start: usize,
    /// Frame on which the event was closed (inclusive).
    pub frame_end: usize,
    /// Robot gaining the ball, or the challenger; `None` for exits.
    pub subject: Option<String>,
    /// Index of the host event for a contemporary event.
    pub contemporary_with: Option<usize>,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Nearest robot of `team` within `radius` of the ball.
fn challenger(frame: &Frame, team: Team, radius: f64) -> Option<String> {
    let ball = (frame.ball.x, frame.ball.y);
    frame
        .robots
        .iter()
        .filter(|r| r.team == team)
        .map(|r| (dist(r.pos(), ball), &r.id))
        .filter(|(d, _)| *d <= radius)
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)))
        .map(|(_, id)| id.clone())
}

fn opposite(team: Team) -> Team {
    match team {
        Team::Attack => Team::Defend,
        Team::Defend => Team::Attack,
    }
}

/// Recognizes events frame by frame.
///
/// A possession event opens whenever possession passes to a robot and stays
/// open until the next possession event or a ball exit. A challenge opens
/// inside a possession while an opponent is within the challenge radius of
/// the held ball, and closes when the holder gets clear, when someone else
/// takes the ball, or on an exit.
pub fn detect_events(log: &TrialLog, cfg: &AbstractionConfig) -> Result<Vec<Event>, LogError> {
    log.validate()?;
    let field = &cfg.field;
    let mut events: Vec<Event> = Vec::new();
    let mut open_poss: Option<usize> = None;
    let mut open_chal: Option<usize> = None;
    let mut prev_poss: Option<&str> = None;
    let mut was_in = true;

    fn close(events: &mut [Event], slot: &mut Option<usize>, frame: usize, t: f64) {
        if let Some(i) = slot.take() {
            events[i].frame_end = frame;
            events[i].t_end = t;
        }
    }

    for (i, f) in log.frames.iter().enumerate() {
        let inside = field.contains(f.ball.x, f.ball.y);
        if !inside {
            if was_in {
                close(&mut events, &mut open_chal, i, f.t);
                close(&mut events, &mut open_poss, i, f.t);
                let prev = if i > 0 {
                    &log.frames[i - 1].ball
                } else {
                    &f.ball
                };
                let kind = match super::exit_outcome((prev.x, prev.y), (f.ball.x, f.ball.y), cfg) {
                    super::OutcomeKind::Goal => EventKind::GoalLineCross,
                    _ => EventKind::BallOut,
                };
                events.push(Event {
                    kind,
                    t_start: f.t,
                    t_end: f.t,
                    frame_start: i,
                    frame_end: i,
                    subject: None,
                    contemporary_with: None,
                });
            }
            was_in = false;
            prev_poss = None;
            continue;
        }
        was_in = true;

        let poss = f.poss.as_deref();
        if poss != prev_poss {
            if let Some(r) = poss {
                close(&mut events, &mut open_chal, i, f.t);
                close(&mut events, &mut open_poss, i, f.t);
                let robot = f.robot(r).expect("validated possession id");
                let kind = if robot.team == Team::Defend
                    && field.attack_box().contains(robot.x, robot.y)
                {
                    EventKind::Block
                } else {
                    EventKind::PossessionGain
                };
                open_poss = Some(events.len());
                events.push(Event {
                    kind,
                    t_start: f.t,
                    t_end: f.t,
                    frame_start: i,
                    frame_end: i,
                    subject: Some(r.to_string()),
                    contemporary_with: None,
                });
            }
        }
        prev_poss = poss;

        let Some(h) = poss else { continue };
        let host_is_holder = open_poss
            .map(|k| events[k].subject.as_deref() == Some(h))
            .unwrap_or(false);
        if !host_is_holder {
            continue;
        }
        let team = f.team_of(h).expect("validated possession id");
        match open_chal {
            None => {
                if let Some(c) = challenger(f, opposite(team), cfg.challenge_radius) {
                    open_chal = Some(events.len());
                    events.push(Event {
                        kind: EventKind::PossessionChallenge,
                        t_start: f.t,
                        t_end: f.t,
                        frame_start: i,
                        frame_end: i,
                        subject: Some(c),
                        contemporary_with: open_poss,
                    });
                }
            }
            Some(k) => {
                let c = events[k].subject.as_deref().expect("challenger id");
                let cpos = f.robot(c).map(|r| r.pos()).expect("challenger present");
                if dist(cpos, (f.ball.x, f.ball.y)) > cfg.challenge_radius {
                    close(&mut events, &mut open_chal, i, f.t);
                }
            }
        }
    }
    let last = log.frames.len() - 1;
    let t = log.frames[last].t;
    close(&mut events, &mut open_chal, last, t);
    close(&mut events, &mut open_poss, last, t);
    Ok(events)
}
