//! The reactive attacker policy and the home-region opponents.

use teamseq_core::abstraction::Team;
use teamseq_core::field::Rect;

use crate::config::{Kinematics, OpponentSpec, Tactics};
use crate::geom::Vec2;
use crate::world::{Intent, World, DEFENDERS, ROBOT_MARGIN};

/// Where a teammate of the ball carrier waits: ahead of the ball, in the
/// lane on the other side of the field's long axis.
pub fn support_position(world: &World, tactics: &Tactics) -> Vec2 {
    let ball = world.ball.pos;
    let f = &world.field;
    let lane = if ball.y >= 0.0 {
        ball.y - tactics.support_lateral
    } else {
        ball.y + tactics.support_lateral
    };
    let x = (ball.x + tactics.support_ahead).min(f.half_length() - 0.6);
    let y = lane.clamp(-f.half_width() + 0.5, f.half_width() - 0.5);
    Vec2::new(x, y)
}

fn play_area(world: &World) -> Rect {
    let b = world.field.bounds();
    Rect {
        x0: b.x0 + ROBOT_MARGIN,
        y0: b.y0 + ROBOT_MARGIN,
        x1: b.x1 - ROBOT_MARGIN,
        y1: b.y1 - ROBOT_MARGIN,
    }
}

/// Closest opponent within `radius` of `robot` and in front of it relative
/// to the attacked goal. Measured from the robot rather than the held ball,
/// which swings with the robot's heading.
fn opponent_ahead(world: &World, robot: usize, radius: f64) -> Option<usize> {
    let r = &world.robots[robot];
    let goal_dir = (world.goal_center() - r.pos).unit();
    let mut best: Option<(usize, f64)> = None;
    for (i, o) in world.robots.iter().enumerate() {
        if o.team == r.team {
            continue;
        }
        let d = o.pos.dist(r.pos);
        if d <= radius && (o.pos - r.pos).dot(goal_dir) > 0.0 && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// Intent of the ball carrier under the reactive policy: push past an
/// opponent in front, shoot when in range, else carry the ball to goal.
pub fn holder_intent(robot: usize, world: &World, tactics: &Tactics, kin: &Kinematics) -> Intent {
    let r = &world.robots[robot];
    let goal = world.goal_center();
    let ball = world.ball.pos;
    if let Some(o) = opponent_ahead(world, robot, tactics.challenge_radius + kin.hold_offset) {
        let to_goal = goal - r.pos;
        let opp = world.robots[o].pos;
        // turn away from the opponent's side; head-on, towards the open
        // middle of the field
        let side = if opp.y > ball.y + 0.05 {
            -1.0
        } else if opp.y < ball.y - 0.05 {
            1.0
        } else if ball.y > 0.0 {
            -1.0
        } else {
            1.0
        };
        let area = play_area(world);
        let offset = tactics.push_angle_deg.to_radians();
        let mut target = ball + Vec2::from_angle(to_goal.angle() + side * offset) * 0.6;
        if !area.contains(target.x, target.y) {
            target = ball + Vec2::from_angle(to_goal.angle() - side * offset) * 0.6;
        }
        return Intent::Kick {
            target,
            speed: kin.push_speed,
        };
    }
    if r.pos.dist(goal) <= tactics.shoot_range {
        return Intent::Kick {
            target: goal,
            speed: kin.kick_speed,
        };
    }
    Intent::Dribble { target: goal }
}

/// Reactive attacker: the holder attacks the goal alone, the attacker
/// closest to a loose ball chases it, the other one spreads out. No passes
/// are ever planned.
pub fn step_reactive(robot: usize, world: &World, tactics: &Tactics, kin: &Kinematics) -> Intent {
    debug_assert_eq!(world.robots[robot].team, Team::Attack);
    match world.holder {
        Some(h) if h == robot => holder_intent(robot, world, tactics, kin),
        Some(h) if world.robots[h].team == Team::Attack => Intent::MoveTo {
            target: support_position(world, tactics),
            face: Some(world.ball.pos),
        },
        _ => {
            if world.closest_to_ball(Team::Attack) == robot {
                Intent::Chase
            } else {
                Intent::MoveTo {
                    target: support_position(world, tactics),
                    face: Some(world.ball.pos),
                }
            }
        }
    }
}

/// Where a defender clears the ball to: straight ahead if it already faces
/// away from its goal and the ball would stay in play, else back upfield
/// towards the middle.
pub fn clear_target(pos: Vec2, heading: f64, world: &World) -> Vec2 {
    let ahead = pos + Vec2::from_angle(heading) * 2.0;
    if Vec2::from_angle(heading).x < -0.3 && play_area(world).contains(ahead.x, ahead.y) {
        return ahead;
    }
    Vec2::new(pos.x - 2.0, pos.y * 0.5)
}

/// Home-region rule for both defending robots.
pub fn step_opponents(specs: &[OpponentSpec; 2], world: &World, kin: &Kinematics) -> [Intent; 2] {
    let ball = world.ball.pos;
    let mut out = [Intent::Idle; 2];
    for (k, &i) in DEFENDERS.iter().enumerate() {
        let spec = &specs[k];
        let r = &world.robots[i];
        let wait = {
            let (x, y) = spec.wait.clamp(ball.x, ball.y);
            let (x, y) = r.confine.clamp(x, y);
            Intent::MoveTo {
                target: Vec2::new(x, y),
                face: Some(ball),
            }
        };
        out[k] = match world.holder {
            Some(h) if h == i => Intent::Kick {
                target: clear_target(r.pos, r.heading, world),
                speed: kin.kick_speed,
            },
            Some(h) if world.robots[h].team == Team::Defend => wait,
            _ if spec.engage.contains(ball.x, ball.y) => Intent::Chase,
            _ => wait,
        };
    }
    out
}
