//! Predicate vocabulary for robot-soccer trial sequences.

use crate::parse::ParseError;
use crate::sequence::Pattern;
use crate::term::{Atom, Term};

/// The temporal successor relation between action times.
pub const NEXT: &str = "next_a";
/// Older spelling of the successor relation, accepted on input.
pub const NEXT_ALIAS: &str = "next";

pub const GETBALL: &str = "getball";
pub const CATCH: &str = "catch";
pub const PASS: &str = "pass";
pub const DRIBBLING: &str = "dribbling";
pub const PROGRESS: &str = "progressToGoal";
pub const ALONE_PROGRESS: &str = "aloneProgressToGoal";
pub const INTERCEPT: &str = "intercept";

/// The seven action predicates with their arities, in report order.
pub const ACTIONS: [(&str, usize); 7] = [
    (PASS, 3),
    (DRIBBLING, 2),
    (CATCH, 2),
    (INTERCEPT, 2),
    (ALONE_PROGRESS, 2),
    (PROGRESS, 2),
    (GETBALL, 2),
];

pub const DIRECTION_VIEW: &str = "direction_view";
pub const REL_BALL: &str = "rel_with_ball";
pub const REL_TEAM: &str = "rel_with_team";
pub const REL_OPP1: &str = "rel_with_opp1";
pub const REL_OPP2: &str = "rel_with_opp2";

/// World-relation predicates in emission order.
pub const RELATIONS: [(&str, usize); 5] = [
    (REL_TEAM, 4),
    (DIRECTION_VIEW, 3),
    (REL_BALL, 4),
    (REL_OPP1, 4),
    (REL_OPP2, 4),
];

pub const OUTCOMES: [&str; 5] = ["goal", "to_goal", "ball_out", "block", "out_of_time"];

pub const AGENT: &str = "agent";
pub const OPPONENT: &str = "opponent";

pub const DIRECTIONS: [&str; 4] = ["front", "left", "right", "backwards"];
pub const HORIZONTAL: [&str; 3] = ["forward", "behind", "same"];
pub const VERTICAL: [&str; 3] = ["left", "right", "same"];

pub fn is_action(predicate: &str) -> bool {
    ACTIONS.iter().any(|(p, _)| *p == predicate)
}

pub fn is_relation(predicate: &str) -> bool {
    RELATIONS.iter().any(|(p, _)| *p == predicate)
}

pub fn is_outcome(predicate: &str) -> bool {
    OUTCOMES.contains(&predicate)
}

pub fn action_arity(predicate: &str) -> Option<usize> {
    ACTIONS
        .iter()
        .find(|(p, _)| *p == predicate)
        .map(|(_, a)| *a)
}

/// Maps input synonyms onto the canonical vocabulary: `up`/`down` in the
/// vertical slot of a two-argument relation become `left`/`right`, and
/// `next/2` becomes `next_a/2`.
pub fn normalize_atom(mut atom: Atom) -> Atom {
    if &*atom.predicate == NEXT_ALIAS && atom.arity() == 2 {
        atom.predicate = NEXT.into();
    }
    if atom.predicate.starts_with("rel_with_") && atom.arity() == 4 {
        if let Term::Const(c) = &atom.args[3] {
            let mapped = match &**c {
                "up" => Some("left"),
                "down" => Some("right"),
                _ => None,
            };
            if let Some(m) = mapped {
                atom.args[3] = Term::constant(m);
            }
        }
    }
    atom
}

/// Parses a pattern and normalizes synonyms.
pub fn parse_pattern(text: &str) -> Result<Pattern, ParseError> {
    let p = Pattern::parse(text)?;
    Ok(Pattern::new(
        p.atoms.into_iter().map(normalize_atom).collect(),
    ))
}
