//! Case-based attackers: a coordinator retrieves a case, robots walk to
//! their adapted positions, execute their gameplays in sync and report back.

use std::collections::VecDeque;

use teamseq_core::abstraction::Team;

use crate::case::{CaseBase, Gameplay, Problem};
use crate::config::{Kinematics, SimConfig, Tactics};
use crate::geom::Vec2;
use crate::policy::step_reactive;
use crate::world::{Intent, StepReport, World, ATTACKERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    SelectCoordinator,
    Retrieving,
    Positioning,
    Executing,
    Reporting,
    Aborted,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::SelectCoordinator => "select_coordinator",
            Phase::Retrieving => "retrieving",
            Phase::Positioning => "positioning",
            Phase::Executing => "executing",
            Phase::Reporting => "reporting",
            Phase::Aborted => "aborted",
        }
    }
}

/// Team messages, delivered reliably and in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Message {
    /// A robot kicked the ball as part of the running case.
    Kicked {
        from: usize,
    },
    /// A robot finished its gameplays.
    Done {
        from: usize,
    },
    Abort,
}

/// One involved robot's progress through its gameplays.
#[derive(Debug, Clone, PartialEq)]
pub struct Executor {
    pub robot: usize,
    pub position: Vec2,
    pub actions: Vec<Gameplay>,
    pub next: usize,
    pub inbox: VecDeque<Message>,
}

impl Executor {
    pub fn finished(&self) -> bool {
        self.next >= self.actions.len()
    }

    fn current(&self) -> Option<Gameplay> {
        self.actions.get(self.next).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActiveCase {
    pub case: usize,
    pub executors: Vec<Executor>,
    /// Step at which the current phase began.
    pub since_step: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinationState {
    pub phase: Phase,
    pub coordinator: Option<usize>,
    pub active: Option<ActiveCase>,
    /// Messages broadcast this step, for the record.
    pub pending: Vec<Message>,
    /// Count of retrieved cases so far; identifies the current episode.
    pub episode: u64,
}

impl Default for CoordinationState {
    fn default() -> Self {
        CoordinationState {
            phase: Phase::SelectCoordinator,
            coordinator: None,
            active: None,
            pending: Vec::new(),
            episode: 0,
        }
    }
}

/// Per-step snapshot of the coordination state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub step: u64,
    pub phase: Phase,
    pub coordinators: usize,
    pub episode: u64,
}

impl CoordinationState {
    pub fn trace(&self, step: u64) -> TraceEntry {
        TraceEntry {
            step,
            phase: self.phase,
            coordinators: self.coordinator.is_some() as usize,
            episode: self.episode,
        }
    }

    fn abort(&mut self) {
        self.phase = Phase::Aborted;
        self.pending.push(Message::Abort);
    }

    fn reset(&mut self) {
        self.phase = Phase::SelectCoordinator;
        self.coordinator = None;
        self.active = None;
    }
}

/// Whether a case may be retrieved now: the team holds the ball or it is
/// (nearly) at rest.
fn can_retrieve(world: &World, tactics: &Tactics) -> bool {
    match world.holder_team() {
        Some(Team::Attack) => true,
        Some(Team::Defend) => false,
        None => world.ball.speed() <= tactics.retrieve_max_ball_speed,
    }
}

/// Whether the running case still applies: the ball stays inside its scope
/// and the opponents do not have it.
fn applicable(world: &World, cb: &CaseBase, active: &ActiveCase) -> bool {
    let case = &cb.cases[active.case];
    let ball = world.ball.pos;
    world.holder_team() != Some(Team::Defend)
        && world
            .field
            .region_of(ball.x, ball.y)
            .is_some_and(|r| case.scope_ball.contains(&r))
}

fn reactive_all(world: &World, tactics: &Tactics, kin: &Kinematics) -> [Intent; 2] {
    ATTACKERS.map(|i| step_reactive(i, world, tactics, kin))
}

fn hold(world: &World, robot: usize) -> Intent {
    Intent::MoveTo {
        target: world.robots[robot].pos,
        face: Some(world.ball.pos),
    }
}

/// Intent for an executor's current gameplay, advancing past gameplays that
/// are already complete.
fn execute(
    ex: &mut Executor,
    world: &World,
    tactics: &Tactics,
    kin: &Kinematics,
    pending: &mut Vec<Message>,
) -> Intent {
    let me = ex.robot;
    loop {
        let Some(g) = ex.current() else {
            return hold(world, me);
        };
        let holding = world.holder == Some(me);
        let mate_holds = world
            .holder
            .is_some_and(|h| h != me && world.robots[h].team == Team::Attack);
        match g {
            Gameplay::Grab => {
                if holding {
                    ex.next += 1;
                    continue;
                }
                return if mate_holds {
                    hold(world, me)
                } else {
                    Intent::Chase
                };
            }
            Gameplay::KickToward(target) => {
                if holding {
                    return Intent::Kick {
                        target,
                        speed: kin.kick_speed,
                    };
                }
                return if mate_holds {
                    hold(world, me)
                } else {
                    Intent::Chase
                };
            }
            Gameplay::MoveTo(target) => {
                if world.robots[me].pos.dist(target) <= tactics.arrive_tolerance {
                    ex.next += 1;
                    continue;
                }
                return if holding {
                    Intent::Dribble { target }
                } else {
                    Intent::MoveTo {
                        target,
                        face: Some(world.ball.pos),
                    }
                };
            }
            Gameplay::WaitSync => {
                if let Some(pos) = ex
                    .inbox
                    .iter()
                    .position(|m| matches!(m, Message::Kicked { .. }))
                {
                    ex.inbox.remove(pos);
                    ex.next += 1;
                    if ex.finished() {
                        pending.push(Message::Done { from: me });
                    }
                    continue;
                }
                return hold(world, me);
            }
        }
    }
}

/// Drives the coordination state machine for one step. `last` reports what
/// happened during the previous physics step (kicks in particular).
pub fn step_cbr(
    world: &World,
    state: &mut CoordinationState,
    last: &StepReport,
    cb: &CaseBase,
    config: &SimConfig,
) -> [Intent; 2] {
    let (tactics, kin, dt) = (&config.tactics, &config.kinematics, config.dt);
    state.pending.clear();
    // deliver kick messages of the previous step
    if let Some(active) = state.active.as_mut() {
        for &k in &last.kicks {
            if let Some(ex) = active.executors.iter_mut().find(|e| e.robot == k) {
                if matches!(ex.current(), Some(Gameplay::KickToward(_))) {
                    ex.next += 1;
                    if ex.finished() {
                        state.pending.push(Message::Done { from: k });
                    }
                }
                for other in active.executors.iter_mut().filter(|e| e.robot != k) {
                    other.inbox.push_back(Message::Kicked { from: k });
                }
                state.pending.push(Message::Kicked { from: k });
            }
        }
    }

    for _ in 0..6 {
        match state.phase {
            Phase::SelectCoordinator => {
                state.coordinator = Some(world.closest_to_ball(Team::Attack));
                state.phase = Phase::Retrieving;
            }
            Phase::Retrieving => {
                let found = can_retrieve(world, tactics)
                    .then(|| {
                        cb.retrieve(
                            &Problem::from_world(world, tactics.opponent_radius),
                            tactics.similarity_scale,
                        )
                    })
                    .flatten();
                let Some(r) = found else {
                    state.reset();
                    return reactive_all(world, tactics, kin);
                };
                let plans = cb.cases[r.case].adapted(world.ball.pos, &cb.field);
                let attackers: Vec<usize> = ATTACKERS.to_vec();
                state.episode += 1;
                state.active = Some(ActiveCase {
                    case: r.case,
                    executors: plans
                        .into_iter()
                        .zip(&r.assignment)
                        .map(|(p, &a)| Executor {
                            robot: attackers[a],
                            position: p.position,
                            actions: p.actions,
                            next: 0,
                            inbox: VecDeque::new(),
                        })
                        .collect(),
                    since_step: world.step,
                });
                state.phase = Phase::Positioning;
            }
            Phase::Positioning => {
                let active = state.active.as_ref().expect("positioning needs a case");
                let elapsed = (world.step - active.since_step) as f64 * dt;
                if !applicable(world, cb, active) || elapsed > tactics.positioning_timeout {
                    state.abort();
                    return reactive_all(world, tactics, kin);
                }
                let ready = |ex: &Executor| {
                    world.robots[ex.robot].pos.dist(ex.position) <= tactics.arrive_tolerance
                        || (world.holder == Some(ex.robot)
                            && ex.actions.first() == Some(&Gameplay::Grab))
                };
                // readiness messages arrive one step later, so positioning
                // always lasts at least one step
                if world.step > active.since_step && active.executors.iter().all(ready) {
                    let active = state.active.as_mut().expect("active");
                    active.since_step = world.step;
                    state.phase = Phase::Executing;
                    continue;
                }
                let mut out = reactive_all(world, tactics, kin);
                for ex in &active.executors {
                    out[ex.robot] = if ready(ex) {
                        hold(world, ex.robot)
                    } else {
                        Intent::MoveTo {
                            target: ex.position,
                            face: Some(world.ball.pos),
                        }
                    };
                }
                return out;
            }
            Phase::Executing => {
                let active = state.active.as_mut().expect("executing needs a case");
                let elapsed = (world.step - active.since_step) as f64 * dt;
                if !applicable(world, cb, active) || elapsed > tactics.executing_timeout {
                    state.abort();
                    return reactive_all(world, tactics, kin);
                }
                let mut out = reactive_all(world, tactics, kin);
                for ex in active.executors.iter_mut() {
                    out[ex.robot] = execute(ex, world, tactics, kin, &mut state.pending);
                }
                if active.executors.iter().all(Executor::finished) {
                    state.phase = Phase::Reporting;
                }
                return out;
            }
            Phase::Reporting | Phase::Aborted => {
                state.reset();
                return reactive_all(world, tactics, kin);
            }
        }
    }
    unreachable!("coordination settles within a few transitions")
}
