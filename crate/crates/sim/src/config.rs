//! Trial configuration: scenario, opponents, attacker approach and the
//! physical constants.

use std::fmt;
use std::str::FromStr;

use teamseq_core::field::{FieldModel, Rect};
use teamseq_core::ClassLabel;

use crate::error::SimError;
use crate::geom::Vec2;

/// Starting layout of ball and attackers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Middle of the field, back half.
    S1,
    /// Left side, back half.
    S2,
    /// Middle of the field, front half, attackers behind the ball.
    S3,
    /// Middle of the field, front half, attackers spread on both wings.
    S4,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::S1, Scenario::S2, Scenario::S3, Scenario::S4];

    pub fn number(self) -> u8 {
        match self {
            Scenario::S1 => 1,
            Scenario::S2 => 2,
            Scenario::S3 => 3,
            Scenario::S4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Scenario> {
        Scenario::ALL.into_iter().find(|s| s.number() == n)
    }

    /// Ball and the two attackers' positions at kick-off.
    pub fn layout(self) -> (Vec2, [Vec2; 2]) {
        match self {
            Scenario::S1 => (
                Vec2::new(-1.0, 0.0),
                [Vec2::new(-1.3, 0.0), Vec2::new(-1.6, 0.9)],
            ),
            Scenario::S2 => (
                Vec2::new(-0.5, 1.3),
                [Vec2::new(-0.8, 1.3), Vec2::new(-1.2, 0.3)],
            ),
            Scenario::S3 => (
                Vec2::new(0.8, 0.0),
                [Vec2::new(0.5, 0.0), Vec2::new(0.3, -0.9)],
            ),
            Scenario::S4 => (
                Vec2::new(0.8, 0.0),
                [Vec2::new(0.3, 0.7), Vec2::new(0.3, -0.7)],
            ),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpponentConfig {
    /// A defender in front of the box and a goalie inside it.
    Dg,
    /// A midfield defender and a defender with overlapping home regions.
    TwoD,
}

impl OpponentConfig {
    pub const ALL: [OpponentConfig; 2] = [OpponentConfig::Dg, OpponentConfig::TwoD];

    pub fn as_str(self) -> &'static str {
        match self {
            OpponentConfig::Dg => "dg",
            OpponentConfig::TwoD => "2d",
        }
    }
}

impl fmt::Display for OpponentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OpponentConfig {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dg" => Ok(OpponentConfig::Dg),
            "2d" => Ok(OpponentConfig::TwoD),
            _ => Err(format!(
                "unknown opponent configuration '{s}' (expected dg or 2d)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Approach {
    Cbr,
    Rea,
}

impl Approach {
    pub const ALL: [Approach; 2] = [Approach::Cbr, Approach::Rea];

    pub fn as_str(self) -> &'static str {
        self.class_label().as_str()
    }

    pub fn class_label(self) -> ClassLabel {
        match self {
            Approach::Cbr => ClassLabel::Cbr,
            Approach::Rea => ClassLabel::Rea,
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Approach {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cbr" => Ok(Approach::Cbr),
            "rea" => Ok(Approach::Rea),
            _ => Err(format!("unknown approach '{s}' (expected cbr or rea)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Noise {
    /// Half-width of the uniform kick direction error, degrees.
    pub kick_angle_deg: f64,
    /// Half-width of the uniform relative kick speed error.
    pub kick_speed_frac: f64,
    pub grab_failure: f64,
}

impl Noise {
    pub const NONE: Noise = Noise {
        kick_angle_deg: 0.0,
        kick_speed_frac: 0.0,
        grab_failure: 0.0,
    };
}

impl Default for Noise {
    fn default() -> Self {
        Noise {
            kick_angle_deg: 10.0,
            kick_speed_frac: 0.1,
            grab_failure: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub robot_speed: f64,
    /// Top speed while carrying the ball.
    pub dribble_speed: f64,
    /// rad/s
    pub turn_rate: f64,
    pub kick_speed: f64,
    /// Speed of the short push a reactive holder uses to get past a defender.
    pub push_speed: f64,
    /// m/s²
    pub friction: f64,
    pub grab_radius: f64,
    /// Fastest ball a robot can trap.
    pub max_grab_speed: f64,
    /// Distance from the robot centre to a held ball.
    pub hold_offset: f64,
    /// Heading error below which a kick is released.
    pub kick_align: f64,
    /// Seconds a robot cannot grab after kicking or failing a grab.
    pub grab_cooldown: f64,
    /// Distance to a held ball from which a challenger may take it.
    pub steal_radius: f64,
    /// Expected steals per second of contact.
    pub steal_rate: f64,
}

impl Default for Kinematics {
    fn default() -> Self {
        Kinematics {
            robot_speed: 0.3,
            dribble_speed: 0.2,
            turn_rate: 3.0,
            kick_speed: 1.5,
            push_speed: 0.5,
            friction: 0.5,
            grab_radius: 0.15,
            max_grab_speed: 1.3,
            hold_offset: 0.12,
            kick_align: 0.15,
            grab_cooldown: 0.4,
            steal_radius: 0.2,
            steal_rate: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub opponents: OpponentConfig,
    pub approach: Approach,
    pub seed: u64,
    /// Seconds.
    pub timeout: f64,
    pub dt: f64,
    pub noise: Noise,
    pub kinematics: Kinematics,
    pub tactics: Tactics,
    pub field: FieldModel,
}

impl SimConfig {
    pub fn new(
        scenario: Scenario,
        opponents: OpponentConfig,
        approach: Approach,
        seed: u64,
    ) -> Self {
        SimConfig {
            scenario,
            opponents,
            approach,
            seed,
            timeout: 60.0,
            dt: 0.05,
            noise: Noise::default(),
            kinematics: Kinematics::default(),
            tactics: Tactics::default(),
            field: FieldModel::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::Config(m.to_string()));
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            return bad("timeout must be positive");
        }
        if !(self.dt > 0.0 && self.dt <= self.timeout) {
            return bad("time step must be positive and below the timeout");
        }
        if !(0.0..=1.0).contains(&self.noise.grab_failure) {
            return bad("grab failure probability must lie in [0, 1]");
        }
        if !(self.noise.kick_angle_deg >= 0.0 && (0.0..1.0).contains(&self.noise.kick_speed_frac)) {
            return bad("kick noise spreads must be non-negative, speed spread below 1");
        }
        let k = &self.kinematics;
        if !(k.friction >= 0.0 && k.robot_speed > 0.0 && k.kick_speed > 0.0 && k.turn_rate > 0.0) {
            return bad("speeds must be positive and friction non-negative");
        }
        if !(k.hold_offset <= k.grab_radius && k.steal_rate >= 0.0) {
            return bad("a held ball must sit within the grab radius");
        }
        Ok(())
    }

    /// Number of simulation steps before the timeout fires.
    pub fn max_steps(&self) -> u64 {
        (self.timeout / self.dt).round() as u64
    }
}

/// How a defending robot behaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpponentRole {
    /// Owns the penalty box.
    Goalie,
    /// Never enters the penalty box.
    Defender,
}

/// A defending robot's home region: it goes for the ball inside `engage`,
/// otherwise waits at the point of `wait` closest to the ball. It never
/// leaves `confine`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpponentSpec {
    pub role: OpponentRole,
    pub engage: Rect,
    pub wait: Rect,
    pub confine: Rect,
}

pub fn opponent_specs(config: OpponentConfig, field: &FieldModel) -> [OpponentSpec; 2] {
    let hl = field.half_length();
    let hw = field.half_width();
    let bx = field.attack_box();
    // a defender's body must stay clear of the box edge
    let front = bx.x0 - 0.15;
    let defender = |x0: f64, x1: f64| {
        let r = Rect {
            x0,
            y0: -hw,
            x1,
            y1: hw,
        };
        OpponentSpec {
            role: OpponentRole::Defender,
            engage: r,
            wait: r,
            confine: r,
        }
    };
    match config {
        OpponentConfig::Dg => [
            OpponentSpec {
                role: OpponentRole::Goalie,
                engage: bx,
                wait: Rect {
                    x0: hl - 0.25,
                    y0: -field.goal_half_width - 0.1,
                    x1: hl - 0.05,
                    y1: field.goal_half_width + 0.1,
                },
                confine: bx,
            },
            defender(0.0, front),
        ],
        OpponentConfig::TwoD => [defender(-1.5, 0.8), defender(0.2, front)],
    }
}

/// Constants of the attacker policies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tactics {
    /// Opponent-to-ball distance at which a reactive holder pushes past.
    pub challenge_radius: f64,
    /// Distance to the goal centre from which a reactive holder shoots.
    pub shoot_range: f64,
    /// Angle between the goal bearing and a push past an opponent.
    pub push_angle_deg: f64,
    /// How far ahead of the ball a reactive supporter waits.
    pub support_ahead: f64,
    /// Lateral offset of the supporter's lane.
    pub support_lateral: f64,
    /// Opponents this close to the ball enter the case-retrieval problem.
    pub opponent_radius: f64,
    /// Length scale of the Gaussian feature similarity.
    pub similarity_scale: f64,
    /// Distance at which a robot counts as arrived.
    pub arrive_tolerance: f64,
    /// Free-ball speed above which no case is retrieved.
    pub retrieve_max_ball_speed: f64,
    pub positioning_timeout: f64,
    pub executing_timeout: f64,
}

impl Default for Tactics {
    fn default() -> Self {
        Tactics {
            challenge_radius: 0.4,
            shoot_range: 1.6,
            push_angle_deg: 50.0,
            support_ahead: 0.6,
            support_lateral: 1.0,
            opponent_radius: 1.5,
            similarity_scale: 1.0,
            arrive_tolerance: 0.12,
            retrieve_max_ball_speed: 0.3,
            positioning_timeout: 6.0,
            executing_timeout: 10.0,
        }
    }
}
