//! Trial logs: one JSON object per line.
//!
//! ```text
//! {"t":0.0,"robots":[{"id":"robot_1","team":"attack","x":-1.0,"y":0.0,"heading":0.0},...],
//!  "ball":{"x":-0.8,"y":0.0,"vx":0.0,"vy":0.0},"poss":null}
//! ...
//! {"outcome":"goal","t":12.35}
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Team {
    Attack,
    Defend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotState {
    pub id: String,
    pub team: Team,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl RobotState {
    pub fn pos(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Frame {
    pub t: f64,
    pub robots: Vec<RobotState>,
    pub ball: BallState,
    pub poss: Option<String>,
}

impl Frame {
    pub fn robot(&self, id: &str) -> Option<&RobotState> {
        self.robots.iter().find(|r| r.id == id)
    }

    pub fn team_of(&self, id: &str) -> Option<Team> {
        self.robot(id).map(|r| r.team)
    }

    /// Robots of `team`, ordered by id.
    pub fn team(&self, team: Team) -> Vec<&RobotState> {
        let mut v: Vec<_> = self.robots.iter().filter(|r| r.team == team).collect();
        v.sort_by(|a, b| a.id.cmp(&b.id));
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeKind {
    Goal,
    ToGoal,
    BallOut,
    Block,
    OutOfTime,
}

impl OutcomeKind {
    pub const ALL: [OutcomeKind; 5] = [
        OutcomeKind::Goal,
        OutcomeKind::ToGoal,
        OutcomeKind::BallOut,
        OutcomeKind::Block,
        OutcomeKind::OutOfTime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeKind::Goal => "goal",
            OutcomeKind::ToGoal => "to_goal",
            OutcomeKind::BallOut => "ball_out",
            OutcomeKind::Block => "block",
            OutcomeKind::OutOfTime => "out_of_time",
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OutcomeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OutcomeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown outcome '{s}'"))
    }
}

/// Final line of a terminated log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeLine {
    pub outcome: String,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrialLog {
    pub frames: Vec<Frame>,
    pub outcome: Option<OutcomeLine>,
}

#[derive(Debug, Error, PartialEq)]
pub enum LogError {
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("log has no frames")]
    Empty,
    #[error("frame {index}: time {t} does not increase")]
    NonMonotone { index: usize, t: f64 },
    #[error("frame {index}: {message}")]
    BadFrame { index: usize, message: String },
    #[error("line {line}: data after the outcome line")]
    AfterOutcome { line: usize },
    #[error("log has no outcome line")]
    NotTerminated,
    #[error("unknown outcome '{0}'")]
    UnknownOutcome(String),
}

impl TrialLog {
    pub fn parse_jsonl(text: &str) -> Result<TrialLog, LogError> {
        let mut log = TrialLog::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() {
                continue;
            }
            if log.outcome.is_some() {
                return Err(LogError::AfterOutcome { line });
            }
            let json = |e: serde_json::Error| LogError::Json {
                line,
                message: e.to_string(),
            };
            if body.contains("\"outcome\"") {
                let o: OutcomeLine = serde_json::from_str(body).map_err(json)?;
                o.outcome
                    .parse::<OutcomeKind>()
                    .map_err(|_| LogError::UnknownOutcome(o.outcome.clone()))?;
                log.outcome = Some(o);
            } else {
                log.frames.push(serde_json::from_str(body).map_err(json)?);
            }
        }
        log.validate()?;
        Ok(log)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for f in &self.frames {
            out.push_str(&serde_json::to_string(f).expect("frame serializes"));
            out.push('\n');
        }
        if let Some(o) = &self.outcome {
            out.push_str(&serde_json::to_string(o).expect("outcome serializes"));
            out.push('\n');
        }
        out
    }

    /// Checks frame timing, robot rosters and possession ids.
    pub fn validate(&self) -> Result<(), LogError> {
        if self.frames.is_empty() {
            return Err(LogError::Empty);
        }
        let bad = |index: usize, message: String| LogError::BadFrame { index, message };
        let mut prev_t = f64::NEG_INFINITY;
        for (index, f) in self.frames.iter().enumerate() {
            if !f.t.is_finite() || f.t <= prev_t {
                return Err(LogError::NonMonotone { index, t: f.t });
            }
            prev_t = f.t;
            let numbers = [f.ball.x, f.ball.y, f.ball.vx, f.ball.vy];
            let robots_finite = f
                .robots
                .iter()
                .all(|r| r.x.is_finite() && r.y.is_finite() && r.heading.is_finite());
            if !numbers.iter().all(|v| v.is_finite()) || !robots_finite {
                return Err(bad(index, "non-finite coordinate".into()));
            }
            for team in [Team::Attack, Team::Defend] {
                let n = f.robots.iter().filter(|r| r.team == team).count();
                if n != 2 {
                    return Err(bad(index, format!("expected 2 {team:?} robots, found {n}")));
                }
            }
            for (i, r) in f.robots.iter().enumerate() {
                if f.robots[..i].iter().any(|o| o.id == r.id) {
                    return Err(bad(index, format!("duplicate robot id {}", r.id)));
                }
            }
            if let Some(p) = &f.poss {
                if f.robot(p).is_none() {
                    return Err(bad(index, format!("possession by unknown robot {p}")));
                }
            }
            if index > 0 {
                let first = &self.frames[0];
                let same_roster = f.robots.len() == first.robots.len()
                    && first
                        .robots
                        .iter()
                        .all(|r| f.team_of(&r.id) == Some(r.team));
                if !same_roster {
                    return Err(bad(index, "robot roster changed".into()));
                }
            }
        }
        if let Some(o) = &self.outcome {
            if !o.t.is_finite() || o.t < prev_t {
                return Err(LogError::NonMonotone {
                    index: self.frames.len(),
                    t: o.t,
                });
            }
        }
        Ok(())
    }

    /// Ids of the attacking robots, sorted.
    pub fn attackers(&self) -> Vec<String> {
        self.frames
            .first()
            .map(|f| {
                f.team(Team::Attack)
                    .into_iter()
                    .map(|r| r.id.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRAME: &str = r#"{"t":0.0,"robots":[{"id":"robot_1","team":"attack","x":-1.0,"y":0.0,"heading":0.0},{"id":"robot_2","team":"attack","x":-1.0,"y":1.0,"heading":0.0},{"id":"robot_3","team":"defend","x":2.5,"y":0.0,"heading":3.14},{"id":"robot_4","team":"defend","x":1.0,"y":0.0,"heading":3.14}],"ball":{"x":0.0,"y":0.0,"vx":0.0,"vy":0.0},"poss":null}"#;

    #[test]
    fn round_trip() {
        let text = format!(
            "{FRAME}\n{}\n{{\"outcome\":\"goal\",\"t\":0.1}}\n",
            FRAME.replace("\"t\":0.0", "\"t\":0.05")
        );
        let log = TrialLog::parse_jsonl(&text).unwrap();
        assert_eq!(log.frames.len(), 2);
        assert_eq!(log.attackers(), vec!["robot_1", "robot_2"]);
        assert_eq!(TrialLog::parse_jsonl(&log.to_jsonl()).unwrap(), log);
    }

    #[test]
    fn rejects_bad_logs() {
        assert_eq!(TrialLog::parse_jsonl(""), Err(LogError::Empty));
        let twice = format!("{FRAME}\n{FRAME}\n");
        assert!(matches!(
            TrialLog::parse_jsonl(&twice),
            Err(LogError::NonMonotone { index: 1, .. })
        ));
        let after = format!("{{\"outcome\":\"goal\",\"t\":0.1}}\n{FRAME}\n");
        assert_eq!(
            TrialLog::parse_jsonl(&after),
            Err(LogError::AfterOutcome { line: 2 })
        );
        let unknown = format!("{FRAME}\n{{\"outcome\":\"win\",\"t\":0.1}}\n");
        assert!(matches!(
            TrialLog::parse_jsonl(&unknown),
            Err(LogError::UnknownOutcome(_))
        ));
        let ghost = FRAME.replace("\"poss\":null", "\"poss\":\"robot_9\"");
        assert!(matches!(
            TrialLog::parse_jsonl(&ghost),
            Err(LogError::BadFrame { .. })
        ));
        assert!(matches!(
            TrialLog::parse_jsonl("{not json"),
            Err(LogError::Json { line: 1, .. })
        ));
    }
}
