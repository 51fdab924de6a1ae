//! World state and the fixed-step physics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamseq_core::abstraction::{
    classify_outcome, exit_outcome, wrap_angle, AbstractionConfig, BallState, Frame, OutcomeKind,
    OutcomeLine, RobotState, Team, TrialLog,
};
use teamseq_core::field::{FieldModel, Rect};

use crate::config::{opponent_specs, SimConfig};
use crate::geom::Vec2;

/// How far inside the touch lines robot centres are kept.
pub const ROBOT_MARGIN: f64 = 0.15;

#[derive(Debug, Clone, PartialEq)]
pub struct Robot {
    pub id: String,
    pub team: Team,
    pub pos: Vec2,
    pub heading: f64,
    pub vel: Vec2,
    /// Seconds until the robot may try to grab again.
    pub cooldown: f64,
    /// Area the robot's centre never leaves.
    pub confine: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub pos: Vec2,
    pub vel: Vec2,
}

impl Ball {
    pub fn speed(&self) -> f64 {
        self.vel.norm()
    }

    /// Where a free ball will be after `tau` seconds under constant
    /// deceleration.
    pub fn predict(&self, tau: f64, friction: f64) -> Vec2 {
        let s = self.speed();
        if s < 1e-12 {
            return self.pos;
        }
        let tau = if friction > 0.0 {
            tau.min(s / friction)
        } else {
            tau
        };
        let d = s * tau - 0.5 * friction * tau * tau;
        self.pos + self.vel.unit() * d
    }
}

/// Robots are ordered attackers first: `robot_1`, `robot_2` attack,
/// `robot_3`, `robot_4` defend.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub step: u64,
    pub t: f64,
    pub robots: Vec<Robot>,
    pub ball: Ball,
    pub holder: Option<usize>,
    pub field: FieldModel,
}

pub const ATTACKERS: [usize; 2] = [0, 1];
pub const DEFENDERS: [usize; 2] = [2, 3];

fn inset(r: Rect, m: f64) -> Rect {
    Rect {
        x0: r.x0 + m,
        y0: r.y0 + m,
        x1: r.x1 - m,
        y1: r.y1 - m,
    }
}

fn intersect(a: Rect, b: Rect) -> Rect {
    Rect {
        x0: a.x0.max(b.x0),
        y0: a.y0.max(b.y0),
        x1: a.x1.min(b.x1),
        y1: a.y1.min(b.y1),
    }
}

impl World {
    /// Kick-off state of a configuration.
    pub fn initial(config: &SimConfig) -> World {
        let field = config.field;
        let (ball, attackers) = config.scenario.layout();
        let play = inset(field.bounds(), ROBOT_MARGIN);
        let mut robots = Vec::with_capacity(4);
        for (i, p) in attackers.into_iter().enumerate() {
            robots.push(Robot {
                id: format!("robot_{}", i + 1),
                team: Team::Attack,
                pos: p,
                heading: (ball - p).angle(),
                vel: Vec2::ZERO,
                cooldown: 0.0,
                confine: play,
            });
        }
        for (i, spec) in opponent_specs(config.opponents, &field)
            .into_iter()
            .enumerate()
        {
            let confine = intersect(spec.confine, play);
            let w = spec.wait.clamp(ball.x, ball.y);
            let p: Vec2 = confine.clamp(w.0, w.1).into();
            robots.push(Robot {
                id: format!("robot_{}", i + 3),
                team: Team::Defend,
                pos: p,
                heading: (ball - p).angle(),
                vel: Vec2::ZERO,
                cooldown: 0.0,
                confine,
            });
        }
        World {
            step: 0,
            t: 0.0,
            robots,
            ball: Ball {
                pos: ball,
                vel: Vec2::ZERO,
            },
            holder: None,
            field,
        }
    }

    pub fn holder_team(&self) -> Option<Team> {
        self.holder.map(|h| self.robots[h].team)
    }

    /// Robot of `team` closest to the ball; ties go to the lower index.
    pub fn closest_to_ball(&self, team: Team) -> usize {
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in self.robots.iter().enumerate() {
            if r.team != team {
                continue;
            }
            let d = r.pos.dist(self.ball.pos);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.expect("team has robots").0
    }

    pub fn goal_center(&self) -> Vec2 {
        self.field.attack_goal_center().into()
    }

    pub fn frame(&self) -> Frame {
        Frame {
            t: self.t,
            robots: self
                .robots
                .iter()
                .map(|r| RobotState {
                    id: r.id.clone(),
                    team: r.team,
                    x: r.pos.x,
                    y: r.pos.y,
                    heading: wrap_angle(r.heading),
                })
                .collect(),
            ball: BallState {
                x: self.ball.pos.x,
                y: self.ball.pos.y,
                vx: self.ball.vel.x,
                vy: self.ball.vel.y,
            },
            poss: self.holder.map(|h| self.robots[h].id.clone()),
        }
    }
}

/// What a robot tries to do during one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intent {
    Idle,
    /// Walk to `target`, facing `face` if given, else the walking direction.
    MoveTo {
        target: Vec2,
        face: Option<Vec2>,
    },
    /// Run to where the ball can be reached and try to grab it. A chasing
    /// defender next to a ball held by an attacker tries to take it.
    Chase,
    /// Carry the held ball towards `target`.
    Dribble {
        target: Vec2,
    },
    /// Turn the held ball towards `target` and kick it at `speed`.
    Kick {
        target: Vec2,
        speed: f64,
    },
}

/// Point on the ball's path the robot can reach in time, else where the ball
/// stops.
pub fn intercept_point(pos: Vec2, ball: &Ball, speed: f64, friction: f64, reach: f64) -> Vec2 {
    if ball.speed() < 0.05 {
        return ball.pos;
    }
    for k in 1..=60 {
        let tau = k as f64 * 0.1;
        let p = ball.predict(tau, friction);
        if pos.dist(p) - reach <= speed * tau {
            return p;
        }
    }
    ball.predict(f64::INFINITY, friction)
}

fn segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 < 1e-18 {
        return p.dist(a);
    }
    let s = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * s)
}

/// Things that happened during one step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepReport {
    pub kicks: Vec<usize>,
    pub gained: Option<usize>,
    pub finished: Option<OutcomeKind>,
}

/// A running trial: the world, its RNG and the frames recorded so far.
pub struct Simulation {
    pub config: SimConfig,
    pub world: World,
    rng: ChaCha8Rng,
    frames: Vec<Frame>,
    finished: Option<OutcomeKind>,
}

impl Simulation {
    pub fn new(config: SimConfig, world: World) -> Simulation {
        let frames = vec![world.frame()];
        Simulation {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            world,
            frames,
            finished: None,
        }
    }

    pub fn finished(&self) -> Option<OutcomeKind> {
        self.finished
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    /// Advances one time step under the given intents (one per robot).
    pub fn step(&mut self, intents: &[Intent]) -> StepReport {
        assert_eq!(
            intents.len(),
            self.world.robots.len(),
            "one intent per robot"
        );
        assert!(self.finished.is_none(), "trial already finished");
        let k = self.config.kinematics;
        let dt = self.config.dt;
        let mut report = StepReport::default();
        let w = &mut self.world;

        // robots move and turn
        let mut release: Option<(usize, Vec2, f64)> = None;
        for (i, intent) in intents.iter().enumerate() {
            let holding = w.holder == Some(i);
            let r = &w.robots[i];
            let (target, face, may_walk): (Option<Vec2>, Option<f64>, bool) = match *intent {
                Intent::Idle => (None, None, true),
                Intent::MoveTo { target, face } if !holding => {
                    let h = face
                        .map(|f| (f - r.pos).angle())
                        .or_else(|| (target.dist(r.pos) > 0.02).then(|| (target - r.pos).angle()));
                    (Some(target), h, true)
                }
                Intent::MoveTo { target, .. } | Intent::Dribble { target } => {
                    if holding {
                        let h = (target - r.pos).angle();
                        let aligned = wrap_angle(h - r.heading).abs() < 0.6;
                        (Some(target), Some(h), aligned)
                    } else {
                        (Some(target), None, true)
                    }
                }
                Intent::Chase => {
                    if holding {
                        (None, None, true)
                    } else {
                        let p = intercept_point(
                            r.pos,
                            &w.ball,
                            k.robot_speed,
                            k.friction,
                            k.grab_radius,
                        );
                        (Some(p), Some((w.ball.pos - r.pos).angle()), true)
                    }
                }
                Intent::Kick { target, .. } => {
                    if holding {
                        let h = (target - r.pos).angle();
                        (None, Some(h), true)
                    } else {
                        (None, None, true)
                    }
                }
            };
            let r = &mut w.robots[i];
            if let Some(h) = face {
                let err = wrap_angle(h - r.heading);
                let turn = err.clamp(-k.turn_rate * dt, k.turn_rate * dt);
                r.heading = wrap_angle(r.heading + turn);
            }
            let old = r.pos;
            if let (Some(t), true) = (target, may_walk) {
                let d = t - r.pos;
                let top = if holding {
                    k.dribble_speed
                } else {
                    k.robot_speed
                };
                let step = d.norm().min(top * dt);
                let next = r.pos + d.unit() * step;
                r.pos = r.confine.clamp(next.x, next.y).into();
            }
            r.vel = (r.pos - old) * (1.0 / dt);
            if let Intent::Kick { target, speed } = *intent {
                if holding && wrap_angle((target - r.pos).angle() - r.heading).abs() <= k.kick_align
                {
                    release = Some((i, target, speed));
                }
            }
        }

        // ball
        let prev_ball = w.ball.pos;
        if let Some(h) = w.holder {
            let r = &w.robots[h];
            w.ball.pos = r.pos + Vec2::from_angle(r.heading) * k.hold_offset;
            w.ball.vel = r.vel;
        }
        let u_angle: f64 = self.rng.gen();
        let u_speed: f64 = self.rng.gen();
        if let Some((i, target, speed)) = release {
            let n = &self.config.noise;
            let spread = n.kick_angle_deg.to_radians();
            let bearing = (target - w.ball.pos).angle() + (2.0 * u_angle - 1.0) * spread;
            let s = speed * (1.0 + (2.0 * u_speed - 1.0) * n.kick_speed_frac);
            w.ball.vel = Vec2::from_angle(bearing) * s;
            w.holder = None;
            w.robots[i].cooldown = k.grab_cooldown;
            report.kicks.push(i);
        } else if w.holder.is_none() {
            let s = w.ball.speed();
            if s > 0.0 {
                let dir = w.ball.vel.unit();
                w.ball.pos = w.ball.pos + w.ball.vel * dt;
                let s2 = (s - k.friction * dt).max(0.0);
                w.ball.vel = dir * s2;
            }
        }

        if !w.field.contains(w.ball.pos.x, w.ball.pos.y) {
            let acfg = AbstractionConfig {
                field: w.field,
                ..AbstractionConfig::default()
            };
            report.finished = Some(exit_outcome(prev_ball.tuple(), w.ball.pos.tuple(), &acfg));
        } else if w.holder.is_none() && release.is_none() && w.ball.speed() <= k.max_grab_speed {
            // grabs, closest first
            let mut cands: Vec<(f64, usize)> = intents
                .iter()
                .enumerate()
                .filter(|(i, it)| matches!(it, Intent::Chase) && w.robots[*i].cooldown <= 0.0)
                .map(|(i, _)| (segment_distance(w.robots[i].pos, prev_ball, w.ball.pos), i))
                .filter(|(d, _)| *d <= k.grab_radius)
                .collect();
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (_, i) in cands {
                let u: f64 = self.rng.gen();
                if u >= self.config.noise.grab_failure {
                    w.holder = Some(i);
                    report.gained = Some(i);
                    break;
                }
                w.robots[i].cooldown = k.grab_cooldown / 2.0;
            }
        } else if w.holder.is_some_and(|h| w.robots[h].team == Team::Attack) {
            // only defenders tackle; they clear the ball at once anyway
            let mut cands: Vec<(f64, usize)> = intents
                .iter()
                .enumerate()
                .filter(|(i, it)| {
                    matches!(it, Intent::Chase)
                        && w.robots[*i].team == Team::Defend
                        && w.robots[*i].cooldown <= 0.0
                })
                .map(|(i, _)| (w.robots[i].pos.dist(w.ball.pos), i))
                .filter(|(d, _)| *d <= k.steal_radius)
                .collect();
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (_, i) in cands {
                let u: f64 = self.rng.gen();
                if u < k.steal_rate * dt {
                    w.holder = Some(i);
                    report.gained = Some(i);
                    break;
                }
            }
        }
        if let Some(g) = report.gained {
            let r = &w.robots[g];
            w.ball.pos = r.pos + Vec2::from_angle(r.heading) * k.hold_offset;
            w.ball.vel = r.vel;
        }

        for r in &mut w.robots {
            r.cooldown = (r.cooldown - dt).max(0.0);
        }
        w.step += 1;
        w.t = w.step as f64 * dt;
        if report.finished.is_none() && w.step >= self.config.max_steps() {
            report.finished = Some(OutcomeKind::OutOfTime);
        }
        self.frames.push(w.frame());
        self.finished = report.finished;
        report
    }

    /// The recorded log. Its outcome line is judged from the final frames
    /// the same way the abstraction does.
    pub fn into_log(self) -> TrialLog {
        let t = self.world.t;
        let mut log = TrialLog {
            frames: self.frames,
            outcome: Some(OutcomeLine {
                outcome: OutcomeKind::OutOfTime.as_str().to_string(),
                t,
            }),
        };
        if self.finished.is_some() {
            let acfg = AbstractionConfig {
                field: self.world.field,
                ..AbstractionConfig::default()
            };
            let kind = classify_outcome(&log, &acfg)
                .map(|o| o.kind)
                .unwrap_or(OutcomeKind::OutOfTime);
            log.outcome = Some(OutcomeLine {
                outcome: kind.as_str().to_string(),
                t,
            });
        } else {
            log.outcome = None;
        }
        log
    }
}
