use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::netcore::Network;

use super::{best_response_identity, find_blocking_set, is_identity_equilibrium, require_nonpositive, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CascadeMode {
    /// Only B -> A switches, synchronous rounds; needs a non-increasing
    /// schedule.
    Monotone,
    /// Bidirectional myopic best response, synchronous rounds with a
    /// sequential fallback when the rounds cycle.
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeRound {
    /// 1-based across the whole run.
    pub round: usize,
    /// Index into the cost schedule.
    pub phase: usize,
    pub c: f64,
    /// Whether this round is a sequential ascending-index sweep.
    pub sequential: bool,
    /// Individuals who switched, in the order they switched.
    pub switchers: Vec<usize>,
    /// Assignment after the round.
    pub assignment: Vec<Side>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleReport {
    pub phase: usize,
    pub c: f64,
    /// Synchronous rounds run before a snapshot repeated.
    pub rounds_before_repeat: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeTrace {
    pub mode: CascadeMode,
    pub c_schedule: Vec<f64>,
    pub initial: Vec<Side>,
    pub rounds: Vec<CascadeRound>,
    pub converged: bool,
    /// Phases whose synchronous rounds cycled and were re-run sequentially.
    pub cycles: Vec<CycleReport>,
}

impl CascadeTrace {
    pub fn final_assignment(&self) -> &[Side] {
        self.rounds.last().map_or(&self.initial, |r| &r.assignment)
    }

    pub fn a_fraction(&self) -> f64 {
        let fin = self.final_assignment();
        if fin.is_empty() {
            return 0.0;
        }
        fin.iter().filter(|&&s| s == Side::A).count() as f64 / fin.len() as f64
    }

    /// Individuals still on side B at the end.
    pub fn stall_set(&self) -> Vec<usize> {
        self.final_assignment().iter().enumerate().filter(|(_, &s)| s == Side::B).map(|(i, _)| i).collect()
    }

    pub fn switch_count(&self) -> usize {
        self.rounds.iter().map(|r| r.switchers.len()).sum()
    }

    /// Rounds run within one schedule phase.
    pub fn rounds_in_phase(&self, phase: usize) -> usize {
        self.rounds.iter().filter(|r| r.phase == phase).count()
    }
}

/// Myopic best-response dynamics in identities under a schedule of costs.
///
/// Each cost in `c_schedule` runs to a fixed point starting from where the
/// previous one stopped. A synchronous round computes every switch against
/// the round-start assignment and then applies them together; rounds without
/// switches end a phase and are not recorded.
pub fn cascade(net: &Network, initial: &[Side], c_schedule: &[f64], mode: CascadeMode) -> Result<CascadeTrace> {
    if initial.len() != net.n() {
        return Err(Error::InvalidParameter(format!(
            "initial assignment has {} entries, network has {}",
            initial.len(),
            net.n()
        )));
    }
    if c_schedule.is_empty() {
        return Err(Error::InvalidParameter("cost schedule is empty".into()));
    }
    if let Some(c) = c_schedule.iter().find(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter(format!("cost schedule contains {c}")));
    }
    if mode == CascadeMode::Monotone && c_schedule.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Precondition("monotone mode needs a non-increasing cost schedule".into()));
    }

    let mut trace = CascadeTrace {
        mode,
        c_schedule: c_schedule.to_vec(),
        initial: initial.to_vec(),
        rounds: Vec::new(),
        converged: true,
        cycles: Vec::new(),
    };
    let mut state = initial.to_vec();
    for (phase, &c) in c_schedule.iter().enumerate() {
        match mode {
            CascadeMode::Monotone => run_synchronous(net, &mut state, c, phase, true, &mut trace),
            CascadeMode::General => {
                let start = state.clone();
                let rounds_before = trace.rounds.len();
                if let Some(cycle) = run_general_synchronous(net, &mut state, c, phase, &mut trace) {
                    trace.rounds.truncate(rounds_before);
                    trace.cycles.push(cycle);
                    state = start;
                    run_sequential(net, &mut state, c, phase, &mut trace)?;
                }
            }
        }
    }
    trace.converged = is_fixed_point(net, &state, *c_schedule.last().unwrap(), mode);
    Ok(trace)
}

fn is_fixed_point(net: &Network, state: &[Side], c: f64, mode: CascadeMode) -> bool {
    match mode {
        CascadeMode::General => is_identity_equilibrium(net, state, c).is_equilibrium,
        CascadeMode::Monotone => {
            (0..net.n()).all(|i| state[i] == Side::A || best_response_identity(net, state, i, c) == Side::B)
        }
    }
}

fn round_switchers(net: &Network, state: &[Side], c: f64, monotone: bool) -> Vec<usize> {
    (0..net.n())
        .into_par_iter()
        .filter(|&i| {
            let want = best_response_identity(net, state, i, c);
            want != state[i] && (!monotone || want == Side::A)
        })
        .collect()
}

fn push_round(trace: &mut CascadeTrace, phase: usize, c: f64, sequential: bool, switchers: Vec<usize>, state: &[Side]) {
    let round = trace.rounds.len() + 1;
    trace.rounds.push(CascadeRound { round, phase, c, sequential, switchers, assignment: state.to_vec() });
}

/// Monotone rounds: at most `n` of them, since each one moves somebody to A.
fn run_synchronous(net: &Network, state: &mut [Side], c: f64, phase: usize, monotone: bool, trace: &mut CascadeTrace) {
    loop {
        let switchers = round_switchers(net, state, c, monotone);
        if switchers.is_empty() {
            return;
        }
        for &i in &switchers {
            state[i] = state[i].other();
        }
        push_round(trace, phase, c, false, switchers, state);
    }
}

/// Synchronous bidirectional rounds; returns a cycle report if a snapshot
/// repeats before a fixed point is reached.
fn run_general_synchronous(
    net: &Network,
    state: &mut Vec<Side>,
    c: f64,
    phase: usize,
    trace: &mut CascadeTrace,
) -> Option<CycleReport> {
    let mut seen: Vec<Vec<Side>> = vec![state.clone()];
    let mut index: HashSet<Vec<Side>> = HashSet::from([state.clone()]);
    loop {
        let switchers = round_switchers(net, state, c, false);
        if switchers.is_empty() {
            return None;
        }
        for &i in &switchers {
            state[i] = state[i].other();
        }
        push_round(trace, phase, c, false, switchers, state);
        if !index.insert(state.clone()) {
            let first = seen.iter().position(|s| s == state).unwrap();
            return Some(CycleReport { phase, c, rounds_before_repeat: seen.len(), period: seen.len() - first });
        }
        seen.push(state.clone());
    }
}

/// Ascending-index sweeps where each switch is visible to later individuals.
///
/// Terminates: the game has an exact potential (intrinsic values plus
/// `beta` per same-identity link), every switch weakly raises it, and
/// zero-gain switches only go B -> A.
fn run_sequential(net: &Network, state: &mut [Side], c: f64, phase: usize, trace: &mut CascadeTrace) -> Result<()> {
    let cap = 4 * net.n() * (net.edge_count() + net.n()) + 16;
    for _ in 0..cap {
        let mut switchers = Vec::new();
        for i in 0..net.n() {
            let want = best_response_identity(net, state, i, c);
            if want != state[i] {
                state[i] = want;
                switchers.push(i);
            }
        }
        if switchers.is_empty() {
            return Ok(());
        }
        push_round(trace, phase, c, true, switchers, state);
    }
    Err(Error::Internal("sequential best response did not settle".into()))
}

/// The three diffusion conditions for a drop of the cost to `c_prime`,
/// starting from everybody on side B, next to an actual cascade run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffusionReport {
    pub c_prime: f64,
    /// `min d_i <= |c'|`: needed for anybody to switch.
    pub necessary_min_degree: bool,
    /// No subset with all `k_i(S) > |c'|`: needed for complete diffusion.
    pub necessary_no_blocking_set: bool,
    /// `max d_i - 2 <= |c'|`: a single A-neighbour suffices for everybody.
    pub sufficient_max_degree: bool,
    pub blocking_set: Vec<usize>,
    /// Complete diffusion predicted: the trigger and the max-degree
    /// condition both hold on a connected network.
    pub predicts_full_diffusion: bool,
    pub cascade_rounds: usize,
    pub cascade_switches: usize,
    pub cascade_full_diffusion: bool,
    pub cascade_stall_set: Vec<usize>,
}

pub fn full_diffusion_conditions(net: &Network, c_prime: f64) -> Result<DiffusionReport> {
    require_nonpositive(c_prime)?;
    let bound = c_prime.abs();
    let blocking_set = find_blocking_set(net, c_prime, None)?;
    let necessary_min_degree = net.min_degree() as f64 <= bound;
    let sufficient_max_degree = net.max_degree() as f64 - 2.0 <= bound;
    let trace = cascade(net, &vec![Side::B; net.n()], &[c_prime], CascadeMode::Monotone)?;
    Ok(DiffusionReport {
        c_prime,
        necessary_min_degree,
        necessary_no_blocking_set: blocking_set.is_empty(),
        sufficient_max_degree,
        predicts_full_diffusion: necessary_min_degree && sufficient_max_degree && net.is_connected(),
        blocking_set,
        cascade_rounds: trace.rounds.len(),
        cascade_switches: trace.switch_count(),
        cascade_full_diffusion: trace.stall_set().is_empty(),
        cascade_stall_set: trace.stall_set(),
    })
}
