//! Stage-2 action equilibrium.
//!
//! Given who holds which identity, every individual picks an action `x_i`
//! maximising
//!
//! ```text
//! U_i = mu_I + beta d_{i,I} + x_i - x_i^2 / (2 w_i)
//!       - alpha/2 (x_i - x̄_{i,I})^2 - gamma/2 (x_i - v_I)^2
//! ```
//!
//! where `x̄_{i,I}` averages the actions of `i`'s same-identity neighbours.
//! The first-order condition `x_i = b_i (1 + gamma v_I + alpha x̄_{i,I})`
//! with `b_i = 1/(gamma + alpha + 1/w_i)` is linear, so each identity's
//! equilibrium is a linear solve. When `i` has no same-identity neighbour
//! the neighbour-conformity term is dropped (`x̄ := x_i`).

mod solve;

pub use solve::{
    max_foc_residual, path_connected_members, solve_actions, solve_actions_iterative, spectral_bound,
    IterOptions, DIRECT_RESIDUAL_TOL,
};

use serde::Serialize;

use crate::error::Result;
use crate::netcore::{IdentityAssignment, IdentityId, Population};
use crate::society::Society;

/// Equilibrium (or candidate) actions with derived quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionProfile {
    pub x: Vec<f64>,
    pub xbar: Vec<f64>,
    pub utility: Vec<f64>,
    /// Map applications used by the iterative solver; `None` for direct solves.
    #[serde(skip)]
    pub iterations: Option<usize>,
}

/// Conformity weights `b_i` for a population.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformityWeights {
    pub b: Vec<f64>,
}

impl ConformityWeights {
    pub fn new(pop: &Population) -> Self {
        ConformityWeights { b: (0..pop.n()).map(|i| pop.conformity_weight(i)).collect() }
    }

    pub fn max(&self) -> f64 {
        self.b.iter().copied().fold(0.0, f64::max)
    }
}

/// Average action of `i`'s neighbours that hold `i`'s identity, or `None`
/// when there are none.
pub fn neighbor_average(soc: &Society, assign: &IdentityAssignment, x: &[f64], i: usize) -> Option<f64> {
    neighbor_average_for(soc, assign, x, i, assign.get(i))
}

/// Average action of `i`'s neighbours holding `id`.
pub fn neighbor_average_for(
    soc: &Society,
    assign: &IdentityAssignment,
    x: &[f64],
    i: usize,
    id: IdentityId,
) -> Option<f64> {
    let (sum, count) = soc
        .net()
        .neighbors(i)
        .iter()
        .filter(|&&j| assign.get(j) == id)
        .fold((0.0, 0usize), |(s, c), &j| (s + x[j], c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Raw utility formula. `xbar = None` means no same-identity neighbour, so
/// the neighbour-conformity penalty vanishes.
pub fn utility_value(pop: &Population, i: usize, mu: f64, v: f64, same_degree: usize, xi: f64, xbar: Option<f64>) -> f64 {
    let w = pop.ability(i);
    let peer = xbar.map_or(0.0, |m| (xi - m) * (xi - m));
    mu + pop.beta * same_degree as f64 + xi - xi * xi / (2.0 * w)
        - 0.5 * pop.alpha * peer
        - 0.5 * pop.gamma * (xi - v) * (xi - v)
}

/// Utility of individual `i` at action vector `x` under `assign`.
pub fn utility(soc: &Society, assign: &IdentityAssignment, x: &[f64], i: usize) -> f64 {
    let id = assign.get(i);
    let spec = soc.identities().get(id);
    let d_same = soc.net().neighbors(i).iter().filter(|&&j| assign.get(j) == id).count();
    utility_value(soc.pop(), i, spec.mu, spec.v, d_same, x[i], neighbor_average(soc, assign, x, i))
}

/// How a counterfactual identity switch treats everybody else's actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeviationMode {
    /// Others keep their current equilibrium actions; only the deviator
    /// re-optimises.
    #[default]
    FixedProfile,
    /// The whole stage-2 game is re-solved after the switch.
    Resolve,
}

/// `V_{i,I}`: the best utility `i` can reach by holding identity `id`.
///
/// `profile` must be the action equilibrium of `assign`.
pub fn value_function(
    soc: &Society,
    assign: &IdentityAssignment,
    profile: &ActionProfile,
    i: usize,
    id: IdentityId,
    mode: DeviationMode,
) -> Result<f64> {
    soc.net().check_index(i)?;
    match mode {
        DeviationMode::FixedProfile => Ok(fixed_profile_value(soc, assign, &profile.x, i, id)),
        DeviationMode::Resolve => {
            if assign.get(i) == id {
                return Ok(profile.utility[i]);
            }
            let moved = assign.with(i, id);
            let p = solve_actions(soc, &moved)?;
            Ok(p.utility[i])
        }
    }
}

fn fixed_profile_value(soc: &Society, assign: &IdentityAssignment, x: &[f64], i: usize, id: IdentityId) -> f64 {
    let pop = soc.pop();
    let spec = soc.identities().get(id);
    let d_same = soc.net().neighbors(i).iter().filter(|&&j| assign.get(j) == id).count();
    let xbar = neighbor_average_for(soc, assign, x, i, id);
    let best = match xbar {
        Some(avg) => pop.conformity_weight(i) * (1.0 + pop.gamma * spec.v + pop.alpha * avg),
        None => pop.isolated_action(i, spec.v),
    };
    utility_value(pop, i, spec.mu, spec.v, d_same, best, xbar)
}

/// Value functions for every (individual, identity) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueTable {
    /// `values[i][I] = V_{i,I}`.
    pub values: Vec<Vec<f64>>,
    /// `intrinsic[i][I] = V_{i,I} - beta d_{i,I}`.
    pub intrinsic: Vec<Vec<f64>>,
}

pub fn value_table(
    soc: &Society,
    assign: &IdentityAssignment,
    profile: &ActionProfile,
    mode: DeviationMode,
) -> Result<ValueTable> {
    let typed = crate::netcore::typed_degrees(soc.net(), assign);
    let mut values = Vec::with_capacity(soc.n());
    let mut intrinsic = Vec::with_capacity(soc.n());
    for i in 0..soc.n() {
        let mut row = Vec::with_capacity(soc.identities().len());
        let mut irow = Vec::with_capacity(soc.identities().len());
        for id in soc.identities().ids() {
            let v = value_function(soc, assign, profile, i, id, mode)?;
            row.push(v);
            irow.push(v - soc.pop().beta * typed[i][id.0] as f64);
        }
        values.push(row);
        intrinsic.push(irow);
    }
    Ok(ValueTable { values, intrinsic })
}

/// Common equilibrium action under homogeneous ability `w`:
/// `(1 + gamma v) / (gamma + 1/w)`.
pub fn homogeneous_action(w: f64, gamma: f64, v: f64) -> f64 {
    (1.0 + gamma * v) / (gamma + 1.0 / w)
}

/// Action-dependent part of the homogeneous value function:
/// `[1 + gamma v (2 - v/w)] / (2 (gamma + 1/w))`.
pub fn homogeneous_bracket(w: f64, gamma: f64, v: f64) -> f64 {
    (1.0 + gamma * v * (2.0 - v / w)) / (2.0 * (gamma + 1.0 / w))
}

/// Intrinsic value `mu + bracket` of an identity under homogeneous ability.
pub fn homogeneous_intrinsic_value(w: f64, gamma: f64, mu: f64, v: f64) -> f64 {
    mu + homogeneous_bracket(w, gamma, v)
}

/// Homogeneous value function `mu + beta d_{i,I} + bracket`.
pub fn homogeneous_value(w: f64, gamma: f64, beta: f64, mu: f64, v: f64, same_degree: usize) -> f64 {
    homogeneous_intrinsic_value(w, gamma, mu, v) + beta * same_degree as f64
}
