//! Running one trial.

use teamseq_core::abstraction::TrialLog;

use crate::case::CaseBase;
use crate::cbr::{step_cbr, CoordinationState, TraceEntry};
use crate::config::{opponent_specs, Approach, SimConfig};
use crate::error::SimError;
use crate::policy::{step_opponents, step_reactive};
use crate::world::{Intent, Simulation, StepReport, World, ATTACKERS, DEFENDERS};

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRun {
    pub log: TrialLog,
    /// Coordination state after each step; empty under the reactive
    /// approach.
    pub trace: Vec<TraceEntry>,
}

/// Simulates one trial from the scenario's kick-off until a goal, an exit
/// or the timeout.
pub fn run_trial(config: &SimConfig, casebase: Option<&CaseBase>) -> Result<TrialLog, SimError> {
    run_trial_traced(config, casebase).map(|r| r.log)
}

pub fn run_trial_traced(
    config: &SimConfig,
    casebase: Option<&CaseBase>,
) -> Result<TrialRun, SimError> {
    config.validate()?;
    let cb = match (config.approach, casebase) {
        (Approach::Cbr, None) => return Err(SimError::MissingCasebase),
        (_, cb) => cb,
    };
    let specs = opponent_specs(config.opponents, &config.field);
    let mut sim = Simulation::new(*config, World::initial(config));
    let mut state = CoordinationState::default();
    let mut last = StepReport::default();
    let mut trace = Vec::new();
    while sim.finished().is_none() {
        let w = &sim.world;
        let mut intents = [Intent::Idle; 4];
        match (config.approach, cb) {
            (Approach::Cbr, Some(cb)) => {
                let a = step_cbr(w, &mut state, &last, cb, config);
                for (k, &i) in ATTACKERS.iter().enumerate() {
                    intents[i] = a[k];
                }
            }
            _ => {
                for &i in &ATTACKERS {
                    intents[i] = step_reactive(i, w, &config.tactics, &config.kinematics);
                }
            }
        }
        let d = step_opponents(&specs, w, &config.kinematics);
        for (k, &i) in DEFENDERS.iter().enumerate() {
            intents[i] = d[k];
        }
        if config.approach == Approach::Cbr {
            trace.push(state.trace(w.step));
        }
        last = sim.step(&intents);
    }
    Ok(TrialRun {
        log: sim.into_log(),
        trace,
    })
}
