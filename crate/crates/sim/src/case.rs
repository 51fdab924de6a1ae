//! Cases, the case-base text format, symmetry expansion and retrieval.
//!
//! ```text
//! case pass_forward
//! goal yellow
//! ball -0.3 0
//! ref -0.15 0 0
//! teammate -0.2 -0.9
//! opponent 0.7 0
//! scope_ball 7 8 9 13 14 15
//! scope_opponents 8 9 10 14 15 16
//! robot -0.45 0 : grab ; kick_toward 0.4 -0.75
//! robot 0.4 -0.8 : wait_sync ; grab ; move_to 1.2 -0.8
//! end
//! ```
//!
//! `ball` is global; `ref`, `teammate` and `opponent` are relative to the
//! ball; `robot` lines give each involved robot's adapted position and its
//! gameplays in global coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use teamseq_core::abstraction::{wrap_angle, Team};
use teamseq_core::field::FieldModel;

use crate::error::SimError;
use crate::geom::Vec2;
use crate::world::{World, ROBOT_MARGIN};

/// The goal a team defends. Attackers in this simulator defend `Yellow`,
/// which sits at `-x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Goal {
    Yellow,
    Cyan,
}

impl Goal {
    pub fn as_str(self) -> &'static str {
        match self {
            Goal::Yellow => "yellow",
            Goal::Cyan => "cyan",
        }
    }

    pub fn flipped(self) -> Goal {
        match self {
            Goal::Yellow => Goal::Cyan,
            Goal::Cyan => Goal::Yellow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gameplay {
    MoveTo(Vec2),
    KickToward(Vec2),
    Grab,
    /// Wait for a teammate's kick.
    WaitSync,
}

impl Gameplay {
    fn map(self, f: impl Fn(Vec2) -> Vec2) -> Gameplay {
        match self {
            Gameplay::MoveTo(p) => Gameplay::MoveTo(f(p)),
            Gameplay::KickToward(p) => Gameplay::KickToward(f(p)),
            g => g,
        }
    }
}

impl fmt::Display for Gameplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gameplay::MoveTo(p) => write!(f, "move_to {} {}", p.x, p.y),
            Gameplay::KickToward(p) => write!(f, "kick_toward {} {}", p.x, p.y),
            Gameplay::Grab => f.write_str("grab"),
            Gameplay::WaitSync => f.write_str("wait_sync"),
        }
    }
}

/// One involved robot's part of a case solution.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotPlan {
    /// Adapted position, global.
    pub position: Vec2,
    pub actions: Vec<Gameplay>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub name: String,
    /// Reference robot offset from the ball and heading.
    pub reference: (Vec2, f64),
    pub ball: Vec2,
    pub goal: Goal,
    /// Relative to the ball.
    pub teammates: Vec<Vec2>,
    /// Relative to the ball.
    pub opponents: Vec<Vec2>,
    pub scope_ball: BTreeSet<usize>,
    pub scope_opponents: BTreeSet<usize>,
    pub plans: Vec<RobotPlan>,
}

pub const TEAM_SIZE: usize = 2;

impl Case {
    pub fn players(&self) -> usize {
        self.plans.len()
    }

    pub fn validate(&self, field: &FieldModel) -> Result<(), SimError> {
        let bad = |m: String| {
            Err(SimError::InvalidCase {
                name: self.name.clone(),
                message: m,
            })
        };
        if self.plans.is_empty() || self.plans.len() > TEAM_SIZE {
            return bad(format!(
                "{} robots involved; need 1..={TEAM_SIZE}",
                self.plans.len()
            ));
        }
        if self.opponents.len() > TEAM_SIZE {
            return bad(format!(
                "{} opponents; at most {TEAM_SIZE}",
                self.opponents.len()
            ));
        }
        if !field.contains(self.ball.x, self.ball.y) {
            return bad("ball outside the field".into());
        }
        for p in &self.plans {
            if !field.contains(p.position.x, p.position.y) {
                return bad(format!(
                    "adapted position ({}, {}) outside the field",
                    p.position.x, p.position.y
                ));
            }
            if p.actions.is_empty() {
                return bad("robot without gameplays".into());
            }
        }
        if self.scope_ball.is_empty() {
            return bad("empty ball scope".into());
        }
        let n = field.region_count();
        if let Some(r) = self
            .scope_ball
            .iter()
            .chain(&self.scope_opponents)
            .find(|r| **r >= n)
        {
            return bad(format!("region {r} outside the {n}-region grid"));
        }
        Ok(())
    }

    fn transform(
        &self,
        suffix: &str,
        point: impl Fn(Vec2) -> Vec2,
        rel: impl Fn(Vec2) -> Vec2,
        heading: impl Fn(f64) -> f64,
        region: impl Fn(usize) -> usize,
        goal: Goal,
    ) -> Case {
        Case {
            name: format!("{}{suffix}", self.name),
            reference: (rel(self.reference.0), wrap_angle(heading(self.reference.1))),
            ball: point(self.ball),
            goal,
            teammates: self.teammates.iter().map(|v| rel(*v)).collect(),
            opponents: self.opponents.iter().map(|v| rel(*v)).collect(),
            scope_ball: self.scope_ball.iter().map(|r| region(*r)).collect(),
            scope_opponents: self.scope_opponents.iter().map(|r| region(*r)).collect(),
            plans: self
                .plans
                .iter()
                .map(|p| RobotPlan {
                    position: point(p.position),
                    actions: p.actions.iter().map(|g| g.map(&point)).collect(),
                })
                .collect(),
        }
    }

    /// Reflection across the long axis (`y → −y`).
    pub fn mirror_long_axis(&self, field: &FieldModel) -> Case {
        let m = |v: Vec2| Vec2::new(v.x, -v.y);
        self.transform("~y", m, m, |h| -h, |r| field.mirror_region_y(r), self.goal)
    }

    /// Reflection across the halfway line (`x → −x`); the defended goal
    /// swaps.
    pub fn mirror_midfield(&self, field: &FieldModel) -> Case {
        let m = |v: Vec2| Vec2::new(-v.x, v.y);
        self.transform(
            "~x",
            m,
            m,
            |h| PI - h,
            |r| field.mirror_region_x(r),
            self.goal.flipped(),
        )
    }

    /// Positions and gameplays shifted so the case's ball lands on `ball`,
    /// kept inside the field.
    pub fn adapted(&self, ball: Vec2, field: &FieldModel) -> Vec<RobotPlan> {
        let shift = ball - self.ball;
        let b = field.bounds();
        let clamp = |p: Vec2| {
            Vec2::new(
                (p.x + shift.x).clamp(b.x0 + ROBOT_MARGIN, b.x1 - ROBOT_MARGIN),
                (p.y + shift.y).clamp(b.y0 + ROBOT_MARGIN, b.y1 - ROBOT_MARGIN),
            )
        };
        self.plans
            .iter()
            .map(|p| RobotPlan {
                position: clamp(p.position),
                actions: p
                    .actions
                    .iter()
                    .map(|g| match g {
                        // kicks may aim beyond the field (at the goal)
                        Gameplay::KickToward(t) => Gameplay::KickToward(*t + shift),
                        g => g.map(clamp),
                    })
                    .collect(),
            })
            .collect()
    }
}

/// Reflections across the long axis, across midfield (with the defending
/// goal flipped) and their composition.
pub fn generate_symmetric_cases(case: &Case, field: &FieldModel) -> [Case; 3] {
    let y = case.mirror_long_axis(field);
    let x = case.mirror_midfield(field);
    let mut xy = y.mirror_midfield(field);
    xy.name = format!("{}~xy", case.name);
    [y, x, xy]
}

/// The situation a coordinator retrieves a case for.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub goal: Goal,
    pub ball: Vec2,
    /// Own robots, global.
    pub teammates: Vec<Vec2>,
    /// Opponents that matter, global.
    pub opponents: Vec<Vec2>,
}

impl Problem {
    /// The attackers' view of `world`: opponents within `radius` of the ball.
    pub fn from_world(world: &World, radius: f64) -> Problem {
        let ball = world.ball.pos;
        Problem {
            goal: Goal::Yellow,
            ball,
            teammates: world
                .robots
                .iter()
                .filter(|r| r.team == Team::Attack)
                .map(|r| r.pos)
                .collect(),
            opponents: world
                .robots
                .iter()
                .filter(|r| r.team == Team::Defend && r.pos.dist(ball) <= radius)
                .map(|r| r.pos)
                .collect(),
        }
    }
}

pub fn harmonic_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    if values.iter().any(|v| *v <= 0.0) {
        return 0.0;
    }
    values.len() as f64 / values.iter().map(|v| 1.0 / v).sum::<f64>()
}

/// Gaussian of a distance with length scale `scale` metres.
pub fn feature_similarity(d: f64, scale: f64) -> f64 {
    (-(d / scale).powi(2)).exp()
}

fn permutations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Harmonic mean of the ball similarity and the opponent similarities under
/// the best opponent correspondence. Opponents are compared relative to the
/// ball. Different opponent counts give 0.
pub fn similarity(problem: &Problem, case: &Case, scale: f64) -> f64 {
    if problem.opponents.len() != case.opponents.len() {
        return 0.0;
    }
    let ball = feature_similarity(problem.ball.dist(case.ball), scale);
    let mut best = 0.0f64;
    for perm in permutations(problem.opponents.len(), case.opponents.len()) {
        let mut parts = vec![ball];
        for (j, &i) in perm.iter().enumerate() {
            let d = (problem.opponents[i] - problem.ball).dist(case.opponents[j]);
            parts.push(feature_similarity(d, scale));
        }
        best = best.max(harmonic_mean(&parts));
    }
    best
}

/// Minimum total distance over injective robot → target assignments, and
/// the assignment (`result[k]` is the robot sent to target `k`). Ties keep
/// the first assignment in lexicographic order.
pub fn assignment_cost(robots: &[Vec2], targets: &[Vec2]) -> Option<(f64, Vec<usize>)> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in permutations(robots.len(), targets.len()) {
        let c: f64 = perm
            .iter()
            .zip(targets)
            .map(|(&r, t)| robots[r].dist(*t))
            .sum();
        if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
            best = Some((c, perm));
        }
    }
    best
}

/// Cost of moving the problem's robots to the case's adapted positions.
pub fn adaptation_cost(
    problem: &Problem,
    case: &Case,
    field: &FieldModel,
) -> Option<(f64, Vec<usize>)> {
    let targets: Vec<Vec2> = case
        .adapted(problem.ball, field)
        .iter()
        .map(|p| p.position)
        .collect();
    assignment_cost(&problem.teammates, &targets)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Retrieved {
    pub case: usize,
    /// Robot (index into the problem's teammates) for each plan.
    pub assignment: Vec<usize>,
    pub similarity: f64,
    pub cost: f64,
}

/// Hand cases expanded by symmetry and indexed by defended goal and
/// opponent count.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseBase {
    pub field: FieldModel,
    pub cases: Vec<Case>,
    index: BTreeMap<(Goal, usize), Vec<usize>>,
}

pub const DEFAULT_CASES: &str = include_str!("../cases/default.cases");

impl CaseBase {
    pub fn empty(field: FieldModel) -> CaseBase {
        CaseBase {
            field,
            cases: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    /// Validates the hand cases and adds three reflections of each.
    pub fn from_hand_cases(hand: Vec<Case>, field: FieldModel) -> Result<CaseBase, SimError> {
        let mut cb = CaseBase::empty(field);
        for c in hand {
            c.validate(&field)?;
            let [y, x, xy] = generate_symmetric_cases(&c, &field);
            for case in [c, y, x, xy] {
                case.validate(&field)?;
                cb.push(case);
            }
        }
        Ok(cb)
    }

    pub fn parse(text: &str, field: FieldModel) -> Result<CaseBase, SimError> {
        CaseBase::from_hand_cases(parse_cases(text)?, field)
    }

    /// The shipped twelve hand cases.
    pub fn default_cases(field: FieldModel) -> CaseBase {
        CaseBase::parse(DEFAULT_CASES, field).expect("shipped case base is valid")
    }

    fn push(&mut self, case: Case) {
        self.index
            .entry((case.goal, case.opponents.len()))
            .or_default()
            .push(self.cases.len());
        self.cases.push(case);
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Cases indexed under a defended goal and opponent count.
    pub fn indexed(&self, goal: Goal, opponents: usize) -> &[usize] {
        self.index
            .get(&(goal, opponents))
            .map_or(&[], |v| v.as_slice())
    }

    pub fn in_scope(&self, problem: &Problem, case: &Case) -> bool {
        let f = &self.field;
        let ball_ok = f
            .region_of(problem.ball.x, problem.ball.y)
            .is_some_and(|r| case.scope_ball.contains(&r));
        ball_ok
            && problem.opponents.iter().all(|o| {
                f.region_of(o.x, o.y)
                    .is_some_and(|r| case.scope_opponents.contains(&r))
            })
    }

    /// Best in-scope case: most players involved, then highest similarity,
    /// then lowest adaptation cost, then lowest index.
    pub fn retrieve(&self, problem: &Problem, scale: f64) -> Option<Retrieved> {
        let mut best: Option<(usize, Retrieved)> = None;
        for &i in self.indexed(problem.goal, problem.opponents.len()) {
            let case = &self.cases[i];
            if !self.in_scope(problem, case) {
                continue;
            }
            let Some((cost, assignment)) = adaptation_cost(problem, case, &self.field) else {
                continue;
            };
            let cand = Retrieved {
                case: i,
                assignment,
                similarity: similarity(problem, case, scale),
                cost,
            };
            let players = case.players();
            let better = match &best {
                None => true,
                Some((bp, b)) => {
                    players > *bp
                        || (players == *bp
                            && (cand.similarity > b.similarity
                                || (cand.similarity == b.similarity && cand.cost < b.cost)))
                }
            };
            if better {
                best = Some((players, cand));
            }
        }
        best.map(|(_, r)| r)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> SimError {
    SimError::CaseParse {
        line,
        message: message.into(),
    }
}

fn numbers<const N: usize>(line: usize, parts: &[&str]) -> Result<[f64; N], SimError> {
    if parts.len() != N {
        return Err(parse_err(
            line,
            format!("expected {N} numbers, found {}", parts.len()),
        ));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| parse_err(line, format!("bad number '{p}'")))?;
    }
    Ok(out)
}

fn parse_gameplay(line: usize, text: &str) -> Result<Gameplay, SimError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    match parts.as_slice() {
        ["grab"] => Ok(Gameplay::Grab),
        ["wait_sync"] => Ok(Gameplay::WaitSync),
        ["move_to", rest @ ..] => {
            let [x, y] = numbers::<2>(line, rest)?;
            Ok(Gameplay::MoveTo(Vec2::new(x, y)))
        }
        ["kick_toward", rest @ ..] => {
            let [x, y] = numbers::<2>(line, rest)?;
            Ok(Gameplay::KickToward(Vec2::new(x, y)))
        }
        _ => Err(parse_err(
            line,
            format!("unknown gameplay '{}'", text.trim()),
        )),
    }
}

/// Reads case records. Lines starting with `#` or `%` are comments.
pub fn parse_cases(text: &str) -> Result<Vec<Case>, SimError> {
    let mut out = Vec::new();
    let mut cur: Option<(Case, [bool; 3])> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') || body.starts_with('%') {
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let args: Vec<&str> = rest.split_whitespace().collect();
        if key == "case" {
            if cur.is_some() {
                return Err(parse_err(line, "'case' before the previous 'end'"));
            }
            let [name] = args.as_slice() else {
                return Err(parse_err(line, "expected 'case <name>'"));
            };
            cur = Some((
                Case {
                    name: name.to_string(),
                    reference: (Vec2::ZERO, 0.0),
                    ball: Vec2::ZERO,
                    goal: Goal::Yellow,
                    teammates: Vec::new(),
                    opponents: Vec::new(),
                    scope_ball: BTreeSet::new(),
                    scope_opponents: BTreeSet::new(),
                    plans: Vec::new(),
                },
                [false; 3],
            ));
            continue;
        }
        let Some((case, seen)) = cur.as_mut() else {
            return Err(parse_err(line, format!("'{key}' outside a case record")));
        };
        match key {
            "goal" => {
                case.goal = match args.as_slice() {
                    ["yellow"] => Goal::Yellow,
                    ["cyan"] => Goal::Cyan,
                    _ => return Err(parse_err(line, "goal must be yellow or cyan")),
                };
                seen[0] = true;
            }
            "ball" => {
                let [x, y] = numbers::<2>(line, &args)?;
                case.ball = Vec2::new(x, y);
                seen[1] = true;
            }
            "ref" => {
                let [x, y, h] = numbers::<3>(line, &args)?;
                case.reference = (Vec2::new(x, y), h);
                seen[2] = true;
            }
            "teammate" => {
                let [x, y] = numbers::<2>(line, &args)?;
                case.teammates.push(Vec2::new(x, y));
            }
            "opponent" => {
                let [x, y] = numbers::<2>(line, &args)?;
                case.opponents.push(Vec2::new(x, y));
            }
            "scope_ball" | "scope_opponents" => {
                let mut set = BTreeSet::new();
                for a in &args {
                    set.insert(
                        a.parse::<usize>()
                            .map_err(|_| parse_err(line, format!("bad region '{a}'")))?,
                    );
                }
                if key == "scope_ball" {
                    case.scope_ball = set;
                } else {
                    case.scope_opponents = set;
                }
            }
            "robot" => {
                let (pos, plan) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(line, "expected 'robot <x> <y> : <gameplays>'"))?;
                let [x, y] = numbers::<2>(line, &pos.split_whitespace().collect::<Vec<_>>())?;
                let actions = plan
                    .split(';')
                    .map(|g| parse_gameplay(line, g))
                    .collect::<Result<Vec<_>, _>>()?;
                case.plans.push(RobotPlan {
                    position: Vec2::new(x, y),
                    actions,
                });
            }
            "end" => {
                let (case, seen) = cur.take().expect("inside a record");
                if let Some(i) = seen.iter().position(|s| !s) {
                    let field = ["goal", "ball", "ref"][i];
                    return Err(parse_err(
                        line,
                        format!("case '{}' has no '{field}' line", case.name),
                    ));
                }
                out.push(case);
            }
            other => return Err(parse_err(line, format!("unknown field '{other}'"))),
        }
    }
    if cur.is_some() {
        return Err(parse_err(text.lines().count(), "missing 'end'"));
    }
    Ok(out)
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Writes cases in the format read by [`parse_cases`].
pub fn format_cases(cases: &[Case]) -> String {
    let mut s = String::new();
    for c in cases {
        let _ = writeln!(s, "case {}", c.name);
        let _ = writeln!(s, "goal {}", c.goal.as_str());
        let _ = writeln!(s, "ball {} {}", c.ball.x, c.ball.y);
        let _ = writeln!(
            s,
            "ref {} {} {}",
            c.reference.0.x, c.reference.0.y, c.reference.1
        );
        for t in &c.teammates {
            let _ = writeln!(s, "teammate {} {}", t.x, t.y);
        }
        for o in &c.opponents {
            let _ = writeln!(s, "opponent {} {}", o.x, o.y);
        }
        let _ = writeln!(s, "scope_ball {}", join(&c.scope_ball, " "));
        let _ = writeln!(s, "scope_opponents {}", join(&c.scope_opponents, " "));
        for p in &c.plans {
            let _ = writeln!(
                s,
                "robot {} {} : {}",
                p.position.x,
                p.position.y,
                join(&p.actions, " ; ")
            );
        }
        s.push_str("end\n\n");
    }
    s
}
