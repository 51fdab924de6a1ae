//! Egocentric qualitative relations around the acting robot.

use std::f64::consts::{FRAC_PI_4, PI};

use super::log::{Frame, Team};
use super::AbstractionConfig;
use crate::term::{Atom, Term};
use crate::vocab;

/// Wraps an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Where the attacked penalty box lies relative to the actor's heading:
/// `front`, `left`, `right` or `backwards` by 90° sectors.
pub fn direction_view(pos: (f64, f64), heading: f64, target: (f64, f64)) -> &'static str {
    let bearing = (target.1 - pos.1).atan2(target.0 - pos.0);
    let rel = wrap_angle(bearing - heading);
    if rel.abs() <= FRAC_PI_4 {
        "front"
    } else if rel.abs() >= 3.0 * FRAC_PI_4 {
        "backwards"
    } else if rel > 0.0 {
        "left"
    } else {
        "right"
    }
}

/// Horizontal (`forward`/`behind`/`same`) and vertical (`left`/`right`/`same`)
/// position of `other` in the actor's body frame, with a dead zone `eps`.
pub fn relative_position(
    pos: (f64, f64),
    heading: f64,
    other: (f64, f64),
    eps: f64,
) -> (&'static str, &'static str) {
    let (dx, dy) = (other.0 - pos.0, other.1 - pos.1);
    let (c, s) = (heading.cos(), heading.sin());
    let ahead = dx * c + dy * s;
    let lateral = -dx * s + dy * c;
    let h = if ahead > eps {
        "forward"
    } else if ahead < -eps {
        "behind"
    } else {
        "same"
    };
    let v = if lateral > eps {
        "left"
    } else if lateral < -eps {
        "right"
    } else {
        "same"
    };
    (h, v)
}

/// The five world-relation atoms for `actor` at `frame`, in emission order:
/// teammate, view direction, ball, first and second opponent (by id).
pub fn describe_world(
    frame: &Frame,
    actor: &str,
    time: &str,
    cfg: &AbstractionConfig,
) -> Vec<Atom> {
    let me = frame.robot(actor).expect("actor present in frame");
    let pos = me.pos();
    let rel = |pred: &str, other: (f64, f64)| {
        let (h, v) = relative_position(pos, me.heading, other, cfg.eps_same);
        Atom::new(
            pred,
            vec![
                Term::constant(time),
                Term::constant(actor),
                Term::constant(h),
                Term::constant(v),
            ],
        )
    };
    let mate = frame
        .team(me.team)
        .into_iter()
        .find(|r| r.id != actor)
        .map(|r| r.pos())
        .unwrap_or(pos);
    let opponents = frame.team(match me.team {
        Team::Attack => Team::Defend,
        Team::Defend => Team::Attack,
    });
    let opp = |k: usize| opponents.get(k).map(|r| r.pos()).unwrap_or(pos);
    let target = cfg.field.attack_box().center();
    vec![
        rel(vocab::REL_TEAM, mate),
        Atom::new(
            vocab::DIRECTION_VIEW,
            vec![
                Term::constant(time),
                Term::constant(actor),
                Term::constant(direction_view(pos, me.heading, target)),
            ],
        ),
        rel(vocab::REL_BALL, (frame.ball.x, frame.ball.y)),
        rel(vocab::REL_OPP1, opp(0)),
        rel(vocab::REL_OPP2, opp(1)),
    ]
}
