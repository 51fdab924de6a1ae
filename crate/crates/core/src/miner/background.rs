//! Background knowledge: how each predicate may take part in a pattern.
//!
//! Text form, one declaration per line (`%` starts a comment):
//!
//! ```text
//! action      pass(time,player,player)
//! dimensional next_a(time,time)
//! descriptive rel_with_ball(time,player,value,value)
//! fact        agent(player)
//! ignore      goal(time)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::parse::parse_atom;
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Anchors a time point; seeds every pattern.
    Action,
    /// Links an anchored time to a fresh successor time.
    Dimensional,
    /// Describes the world at an anchored time.
    Descriptive,
    /// Static fact over existing variables.
    Fact,
    /// Never added to patterns.
    Ignore,
}

impl Role {
    fn keyword(self) -> &'static str {
        match self {
            Role::Action => "action",
            Role::Dimensional => "dimensional",
            Role::Descriptive => "descriptive",
            Role::Fact => "fact",
            Role::Ignore => "ignore",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArgMode {
    Time,
    Player,
    /// Filled with constants observed at this position in the corpus.
    Value,
}

impl ArgMode {
    fn keyword(self) -> &'static str {
        match self {
            ArgMode::Time => "time",
            ArgMode::Player => "player",
            ArgMode::Value => "value",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub role: Role,
    pub modes: Vec<ArgMode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackgroundError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: predicate {predicate} declared twice")]
    Duplicate { line: usize, predicate: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BackgroundKnowledge {
    decls: BTreeMap<String, PredicateDecl>,
}

impl BackgroundKnowledge {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, predicate: &str, role: Role, modes: Vec<ArgMode>) {
        self.decls
            .insert(predicate.to_string(), PredicateDecl { role, modes });
    }

    pub fn get(&self, predicate: &str) -> Option<&PredicateDecl> {
        self.decls.get(predicate)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PredicateDecl)> {
        self.decls.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Actions, next_a and the five world relations are minable; role facts
    /// and outcomes are ignored.
    pub fn soccer() -> Self {
        use ArgMode::*;
        let mut bk = BackgroundKnowledge::new();
        for (p, arity) in vocab::ACTIONS {
            let mut modes = vec![Time];
            modes.extend(std::iter::repeat_n(Player, arity - 1));
            bk.declare(p, Role::Action, modes);
        }
        bk.declare(vocab::NEXT, Role::Dimensional, vec![Time, Time]);
        bk.declare(
            vocab::DIRECTION_VIEW,
            Role::Descriptive,
            vec![Time, Player, Value],
        );
        for p in [
            vocab::REL_BALL,
            vocab::REL_TEAM,
            vocab::REL_OPP1,
            vocab::REL_OPP2,
        ] {
            bk.declare(p, Role::Descriptive, vec![Time, Player, Value, Value]);
        }
        bk.declare(vocab::AGENT, Role::Ignore, vec![Player]);
        bk.declare(vocab::OPPONENT, Role::Ignore, vec![Player]);
        for p in vocab::OUTCOMES {
            bk.declare(p, Role::Ignore, vec![Time]);
        }
        bk
    }

    /// Like [`soccer`](Self::soccer) but with world relations ignored, so only
    /// action chains are mined.
    pub fn soccer_actions_only() -> Self {
        let mut bk = Self::soccer();
        for (p, _) in vocab::RELATIONS {
            if let Some(d) = bk.decls.get_mut(p) {
                d.role = Role::Ignore;
            }
        }
        bk
    }

    pub fn parse(text: &str) -> Result<Self, BackgroundError> {
        let mut bk = BackgroundKnowledge::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('%').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (kw, rest) =
                body.split_once(char::is_whitespace)
                    .ok_or_else(|| BackgroundError::Syntax {
                        line,
                        message: format!("expected '<role> <predicate>(<modes>)', got '{body}'"),
                    })?;
            let role = match kw {
                "action" => Role::Action,
                "dimensional" => Role::Dimensional,
                "descriptive" => Role::Descriptive,
                "fact" => Role::Fact,
                "ignore" => Role::Ignore,
                other => {
                    return Err(BackgroundError::Syntax {
                        line,
                        message: format!("unknown role '{other}'"),
                    })
                }
            };
            let atom = parse_atom(rest.trim()).map_err(|e| BackgroundError::Syntax {
                line,
                message: e.to_string(),
            })?;
            let modes = atom
                .args
                .iter()
                .map(|t| match t.name() {
                    "time" => Ok(ArgMode::Time),
                    "player" => Ok(ArgMode::Player),
                    "value" => Ok(ArgMode::Value),
                    other => Err(BackgroundError::Syntax {
                        line,
                        message: format!("unknown argument mode '{other}'"),
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            validate(line, role, &modes)?;
            let name = atom.predicate.to_string();
            if bk.decls.contains_key(&name) {
                return Err(BackgroundError::Duplicate {
                    line,
                    predicate: name,
                });
            }
            bk.decls.insert(name, PredicateDecl { role, modes });
        }
        Ok(bk)
    }
}

fn validate(line: usize, role: Role, modes: &[ArgMode]) -> Result<(), BackgroundError> {
    let times = modes.iter().filter(|m| **m == ArgMode::Time).count();
    let vars = modes.iter().filter(|m| **m != ArgMode::Value).count();
    let message = match role {
        Role::Action if times != 1 => Some("an action needs exactly one time argument"),
        Role::Dimensional if modes != [ArgMode::Time, ArgMode::Time] => {
            Some("a dimensional predicate must be (time,time)")
        }
        Role::Descriptive | Role::Fact if vars == 0 => {
            Some("a descriptive or fact predicate needs a time or player argument")
        }
        _ => None,
    };
    match message {
        Some(m) => Err(BackgroundError::Invalid {
            line,
            message: m.to_string(),
        }),
        None => Ok(()),
    }
}

impl fmt::Display for BackgroundKnowledge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, decl) in &self.decls {
            let modes: Vec<_> = decl.modes.iter().map(|m| m.keyword()).collect();
            writeln!(f, "{} {}({})", decl.role.keyword(), name, modes.join(","))?;
        }
        Ok(())
    }
}
