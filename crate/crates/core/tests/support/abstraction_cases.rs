//! Hand-built trial logs with the sequences they must abstract to.
//!
//! Positions are placed so that every relation value can be read off by
//! hand: each robot faces `+x` unless stated, the attacked penalty box centre
//! is `(2.5, 0)`, the dead zone is 0.1 m.

#![allow(dead_code)]

use teamseq_core::abstraction::{BallState, Frame, OutcomeLine, RobotState, Team, TrialLog};

pub const DT: f64 = 0.05;

pub struct Script {
    frames: Vec<Frame>,
    cur: Frame,
    t: f64,
}

fn robot(id: &str, team: Team, x: f64, y: f64, heading: f64) -> RobotState {
    RobotState {
        id: id.into(),
        team,
        x,
        y,
        heading,
    }
}

impl Script {
    /// robot_1 (0,0), robot_2 (0,1), goalie robot_3 (2.7,0), robot_4 (1.5,-1),
    /// ball just in front of robot_1, nobody in possession.
    pub fn new() -> Self {
        let pi = std::f64::consts::PI;
        Script {
            frames: Vec::new(),
            cur: Frame {
                t: 0.0,
                robots: vec![
                    robot("robot_1", Team::Attack, 0.0, 0.0, 0.0),
                    robot("robot_2", Team::Attack, 0.0, 1.0, 0.0),
                    robot("robot_3", Team::Defend, 2.7, 0.0, pi),
                    robot("robot_4", Team::Defend, 1.5, -1.0, pi),
                ],
                ball: BallState {
                    x: 0.12,
                    y: 0.0,
                    vx: 0.0,
                    vy: 0.0,
                },
                poss: None,
            },
            t: 0.0,
        }
    }

    pub fn at(mut self, id: &str, x: f64, y: f64) -> Self {
        let r = self.cur.robots.iter_mut().find(|r| r.id == id).unwrap();
        r.x = x;
        r.y = y;
        self
    }

    pub fn facing(mut self, id: &str, heading: f64) -> Self {
        let r = self.cur.robots.iter_mut().find(|r| r.id == id).unwrap();
        r.heading = heading;
        self
    }

    pub fn ball(mut self, x: f64, y: f64) -> Self {
        self.cur.ball.x = x;
        self.cur.ball.y = y;
        self
    }

    pub fn poss(mut self, id: Option<&str>) -> Self {
        self.cur.poss = id.map(str::to_string);
        self
    }

    /// Emits the current state as a frame.
    pub fn frame(mut self) -> Self {
        self.cur.t = self.t;
        self.frames.push(self.cur.clone());
        self.t = ((self.t + DT) * 1e6).round() / 1e6;
        self
    }

    pub fn frames(mut self, n: usize) -> Self {
        for _ in 0..n {
            self = self.frame();
        }
        self
    }

    pub fn end(self, outcome: &str) -> TrialLog {
        let t = self.frames.last().map(|f| f.t).unwrap_or(0.0);
        TrialLog {
            frames: self.frames,
            outcome: Some(OutcomeLine {
                outcome: outcome.into(),
                t,
            }),
        }
    }
}

impl Default for Script {
    fn default() -> Self {
        Self::new()
    }
}

type Hv = (&'static str, &'static str);

/// The five relation atoms of one action, in emission order.
pub fn rels(t: &str, who: &str, team: Hv, view: &str, ball: Hv, o1: Hv, o2: Hv) -> String {
    format!(
        "rel_with_team({t},{who},{},{}),direction_view({t},{who},{view}),\
         rel_with_ball({t},{who},{},{}),rel_with_opp1({t},{who},{},{}),\
         rel_with_opp2({t},{who},{},{})",
        team.0, team.1, ball.0, ball.1, o1.0, o1.1, o2.0, o2.1
    )
}

/// robot_1 at its start position with everyone else at theirs.
fn r1_home(t: &str) -> String {
    rels(
        t,
        "robot_1",
        ("same", "left"),
        "front",
        ("forward", "same"),
        ("forward", "same"),
        ("forward", "right"),
    )
}

const FACTS: &str = "agent(robot_1),agent(robot_2),opponent(op_1),opponent(op_2)";

pub struct Case {
    pub name: &'static str,
    pub log: TrialLog,
    /// One comma-joined atom list per expected sequence.
    pub expected: Vec<String>,
}

fn getball_then(outcome: &str) -> String {
    format!(
        "getball(time_1,robot_1),{},{outcome}(time_2),{FACTS}",
        r1_home("time_1")
    )
}

/// Kick from the start position towards `(x, y)`, crossing the line on the
/// final frame.
fn shot(end: (f64, f64), outcome: &str) -> TrialLog {
    Script::new()
        .frame()
        .poss(Some("robot_1"))
        .frame()
        .poss(None)
        .ball(1.0, end.1 * 0.3)
        .frame()
        .ball(2.0, end.1 * 0.65)
        .frame()
        .ball(2.9, end.1 * 0.95)
        .frame()
        .ball(end.0, end.1)
        .frame()
        .end(outcome)
}

pub fn cases() -> Vec<Case> {
    let mut out = Vec::new();

    out.push(Case {
        name: "worked example",
        log: Script::new()
            .at("robot_2", 1.0, -1.0)
            .at("robot_3", 2.7, -0.5)
            .at("robot_4", 1.5, -1.5)
            .ball(0.12, -0.12)
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .poss(None)
            .at("robot_1", 1.5, -0.5)
            .at("robot_3", 2.7, -1.5)
            .ball(0.5, -0.5)
            .frame()
            .ball(0.9, -0.9)
            .frame()
            .facing("robot_2", -std::f64::consts::FRAC_PI_2)
            .ball(1.12, -1.12)
            .poss(Some("robot_2"))
            .frame()
            .facing("robot_2", 0.0)
            .at("robot_4", 1.4, -1.4)
            .ball(1.3, -1.3)
            .poss(Some("robot_4"))
            .frame()
            .frames(2)
            .end("out_of_time"),
        expected: vec![format!(
            "getball(time_1,robot_1),rel_with_team(time_1,robot_1,forward,right),\
             direction_view(time_1,robot_1,front),rel_with_ball(time_1,robot_1,forward,right),\
             rel_with_opp1(time_1,robot_1,forward,right),rel_with_opp2(time_1,robot_1,forward,right),\
             next_a(time_1,time_2),pass(time_2,robot_1,robot_2),\
             rel_with_team(time_2,robot_2,behind,left),direction_view(time_2,robot_2,left),\
             rel_with_ball(time_2,robot_2,forward,left),rel_with_opp1(time_2,robot_2,forward,left),\
             rel_with_opp2(time_2,robot_2,forward,left),next_a(time_2,time_3),\
             intercept(time_3,robot_2),rel_with_team(time_3,robot_2,forward,left),\
             direction_view(time_3,robot_2,front),rel_with_ball(time_3,robot_2,forward,right),\
             rel_with_opp1(time_3,robot_2,forward,right),rel_with_opp2(time_3,robot_2,forward,right),\
             {FACTS}"
        )],
    });

    out.push(Case {
        name: "getball after a free ball",
        log: Script::new()
            .frames(3)
            .poss(Some("robot_1"))
            .frames(2)
            .end("out_of_time"),
        expected: vec![getball_then("out_of_time")],
    });

    out.push(Case {
        name: "getball when a pass rolls too long",
        log: Script::new()
            .ball(0.12, 1.0)
            .poss(Some("robot_2"))
            .frame()
            .poss(None)
            .ball(0.12, 0.5)
            .frames(20)
            .ball(0.12, 0.0)
            .poss(Some("robot_1"))
            .frame()
            .end("out_of_time"),
        expected: vec![format!(
            "getball(time_1,robot_2),{},next_a(time_1,time_2),getball(time_2,robot_1),{},\
             out_of_time(time_3),{FACTS}",
            rels(
                "time_1",
                "robot_2",
                ("same", "right"),
                "front",
                ("forward", "same"),
                ("forward", "right"),
                ("forward", "right")
            ),
            r1_home("time_2")
        )],
    });

    out.push(Case {
        name: "catch from an opponent",
        log: Script::new()
            .ball(1.38, -1.0)
            .poss(Some("robot_4"))
            .frame()
            .ball(0.12, 0.0)
            .poss(Some("robot_1"))
            .frame()
            .end("out_of_time"),
        expected: vec![format!(
            "catch(time_1,robot_1),{},out_of_time(time_2),{FACTS}",
            r1_home("time_1")
        )],
    });

    out.push(Case {
        name: "pass between teammates",
        log: Script::new()
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .poss(None)
            .ball(0.12, 0.4)
            .frame()
            .ball(0.12, 0.8)
            .frame()
            .ball(0.12, 1.0)
            .poss(Some("robot_2"))
            .frame()
            .end("out_of_time"),
        expected: vec![format!(
            "getball(time_1,robot_1),{},next_a(time_1,time_2),pass(time_2,robot_1,robot_2),{},\
             out_of_time(time_3),{FACTS}",
            r1_home("time_1"),
            rels(
                "time_2",
                "robot_2",
                ("same", "right"),
                "front",
                ("forward", "same"),
                ("forward", "right"),
                ("forward", "right")
            )
        )],
    });

    out.push(Case {
        name: "dribbling away from a challenger",
        log: Script::new()
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .at("robot_4", 0.3, -0.2)
            .frame()
            .at("robot_1", 0.0, 0.3)
            .at("robot_4", 0.3, 0.1)
            .ball(0.12, 0.3)
            .frame()
            .at("robot_1", 0.0, 0.6)
            .ball(0.12, 0.6)
            .frame()
            .end("out_of_time"),
        expected: vec![format!(
            "getball(time_1,robot_1),{},next_a(time_1,time_2),dribbling(time_2,robot_1),{},\
             out_of_time(time_3),{FACTS}",
            r1_home("time_1"),
            rels(
                "time_2",
                "robot_1",
                ("same", "left"),
                "front",
                ("forward", "same"),
                ("forward", "right"),
                ("forward", "right")
            )
        )],
    });

    out.push(Case {
        name: "dribbling by pushing the ball past a challenger",
        log: Script::new()
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .at("robot_4", 0.3, -0.2)
            .frame()
            .poss(None)
            .ball(0.12, 0.5)
            .frame()
            .at("robot_1", 0.0, 0.35)
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .end("out_of_time"),
        expected: vec![format!(
            "getball(time_1,robot_1),{},next_a(time_1,time_2),dribbling(time_2,robot_1),{},\
             out_of_time(time_3),{FACTS}",
            r1_home("time_1"),
            rels(
                "time_2",
                "robot_1",
                ("same", "left"),
                "front",
                ("forward", "left"),
                ("forward", "right"),
                ("forward", "right")
            )
        )],
    });

    let progress_rels = |t: &str, mate: Hv| {
        rels(
            t,
            "robot_1",
            mate,
            "front",
            ("forward", "same"),
            ("forward", "same"),
            ("forward", "right"),
        )
    };
    let advance = |s: Script| {
        s.frame()
            .poss(Some("robot_1"))
            .frame()
            .at("robot_1", 0.3, 0.0)
            .ball(0.42, 0.0)
            .frame()
            .at("robot_1", 0.6, 0.0)
            .ball(0.72, 0.0)
            .frame()
            .end("out_of_time")
    };
    out.push(Case {
        name: "progressToGoal with a teammate ahead",
        log: advance(Script::new().at("robot_2", 1.5, 1.0)),
        expected: vec![format!(
            "getball(time_1,robot_1),{},next_a(time_1,time_2),progressToGoal(time_2,robot_1),{},\
             out_of_time(time_3),{FACTS}",
            progress_rels("time_1", ("forward", "left")),
            progress_rels("time_2", ("forward", "left"))
        )],
    });
    out.push(Case {
        name: "aloneProgressToGoal with the teammate behind",
        log: advance(Script::new().at("robot_2", -1.0, 1.0)),
        expected: vec![format!(
            "getball(time_1,robot_1),{},next_a(time_1,time_2),aloneProgressToGoal(time_2,robot_1),{},\
             out_of_time(time_3),{FACTS}",
            progress_rels("time_1", ("behind", "left")),
            progress_rels("time_2", ("behind", "left"))
        )],
    });

    out.push(Case {
        name: "intercept by a defender",
        log: Script::new()
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .at("robot_4", 0.3, 0.2)
            .ball(0.2, 0.0)
            .poss(Some("robot_4"))
            .frame()
            .frames(2)
            .end("out_of_time"),
        expected: vec![format!(
            "getball(time_1,robot_1),{},next_a(time_1,time_2),intercept(time_2,robot_1),{},{FACTS}",
            r1_home("time_1"),
            rels(
                "time_2",
                "robot_1",
                ("same", "left"),
                "front",
                ("forward", "same"),
                ("forward", "same"),
                ("forward", "left")
            )
        )],
    });

    out.push(Case {
        name: "goal between the posts",
        log: shot((3.1, 0.1), "goal"),
        expected: vec![getball_then("goal")],
    });
    out.push(Case {
        name: "to_goal just outside a post",
        log: shot((3.1, 0.6), "to_goal"),
        expected: vec![getball_then("to_goal")],
    });
    out.push(Case {
        name: "ball_out over the goal line wide",
        log: shot((3.1, 1.5), "ball_out"),
        expected: vec![getball_then("ball_out")],
    });
    out.push(Case {
        name: "block by the goalie",
        log: Script::new()
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .poss(None)
            .ball(1.2, 0.0)
            .frame()
            .ball(2.2, 0.0)
            .frame()
            .ball(2.58, 0.0)
            .poss(Some("robot_3"))
            .frame()
            .frames(2)
            .end("block"),
        expected: vec![getball_then("block")],
    });
    out.push(Case {
        name: "out_of_time while holding",
        log: Script::new()
            .poss(Some("robot_1"))
            .frames(4)
            .end("out_of_time"),
        expected: vec![getball_then("out_of_time")],
    });

    out.push(Case {
        name: "block then goal gives two sequences",
        log: Script::new()
            .frame()
            .poss(Some("robot_1"))
            .frame()
            .poss(None)
            .ball(1.2, 0.0)
            .frame()
            .ball(2.58, 0.0)
            .poss(Some("robot_3"))
            .frame()
            .poss(None)
            .ball(1.2, 1.0)
            .frame()
            .ball(0.12, 1.0)
            .poss(Some("robot_2"))
            .frame()
            .poss(None)
            .ball(2.0, 0.4)
            .frame()
            .ball(3.1, 0.1)
            .frame()
            .end("goal"),
        expected: vec![
            getball_then("block"),
            format!(
                "catch(time_1,robot_2),{},goal(time_2),{FACTS}",
                rels(
                    "time_1",
                    "robot_2",
                    ("same", "right"),
                    "front",
                    ("forward", "same"),
                    ("forward", "right"),
                    ("forward", "right")
                )
            ),
        ],
    });

    out
}
