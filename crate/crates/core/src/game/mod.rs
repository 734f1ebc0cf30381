//! Stage-1 identity choice.
//!
//! With two identities and a common ability, the whole identity game is
//! driven by one number, the relative cost `c`: individual `i` prefers the
//! first identity (side [`Side::A`]) exactly when `d_{i,A} - d_{i,B} >= c`.
//! Everything here except [`best_response_general`] works on that reduced
//! form. By convention `A` is the intrinsically weakly more attractive side
//! whenever an operation requires `c <= 0`.

mod blocking;
mod cascade;
mod enumerate;

pub use blocking::find_blocking_set;
pub use cascade::{cascade, full_diffusion_conditions, CascadeMode, CascadeRound, CascadeTrace, CycleReport, DiffusionReport};
pub use enumerate::{enumerate_equilibria, DEFAULT_ENUMERATION_LIMIT};

use serde::{Deserialize, Serialize};

use crate::action::{self, value_table, ActionProfile, DeviationMode};
use crate::error::{Error, Result};
use crate::netcore::{IdentityAssignment, IdentityId, IdentitySet, IdentitySpec, Network, Population};
use crate::society::Society;

/// Value differences closer than this count as ties.
pub const VALUE_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Maps a two-identity reduction onto concrete identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orientation {
    pub a: IdentityId,
    pub b: IdentityId,
}

impl Orientation {
    pub fn new(a: IdentityId, b: IdentityId) -> Result<Self> {
        if a == b {
            return Err(Error::Precondition("the two sides need distinct identities".into()));
        }
        Ok(Orientation { a, b })
    }

    pub fn from_labels(identities: &IdentitySet, a: &str, b: &str) -> Result<Self> {
        Orientation::new(identities.id_of(a)?, identities.id_of(b)?)
    }

    pub fn swapped(self) -> Self {
        Orientation { a: self.b, b: self.a }
    }

    pub fn id(&self, side: Side) -> IdentityId {
        match side {
            Side::A => self.a,
            Side::B => self.b,
        }
    }

    /// Reads a profile as sides; fails if anyone holds a third identity.
    pub fn to_sides(&self, assign: &IdentityAssignment) -> Result<Vec<Side>> {
        assign
            .ids()
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                if id == self.a {
                    Ok(Side::A)
                } else if id == self.b {
                    Ok(Side::B)
                } else {
                    Err(Error::Precondition(format!(
                        "individual {i} holds identity #{} outside the two-identity reduction",
                        id.0
                    )))
                }
            })
            .collect()
    }

    pub fn to_assignment(&self, sides: &[Side], identities: &IdentitySet) -> Result<IdentityAssignment> {
        IdentityAssignment::new(sides.iter().map(|&s| self.id(s)).collect(), identities)
    }
}

/// Relative cost of the first identity against the second.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeCost {
    pub c: f64,
    /// Label playing side A.
    pub a: String,
    pub b: String,
    pub intrinsic_a: f64,
    pub intrinsic_b: f64,
}

impl RelativeCost {
    /// Same comparison with sides swapped if needed so that `c <= 0`.
    pub fn oriented(&self) -> RelativeCost {
        if self.c <= 0.0 {
            return self.clone();
        }
        RelativeCost {
            c: -self.c,
            a: self.b.clone(),
            b: self.a.clone(),
            intrinsic_a: self.intrinsic_b,
            intrinsic_b: self.intrinsic_a,
        }
    }

    /// True when side A is intrinsically weakly more attractive.
    pub fn a_favored(&self) -> bool {
        self.c <= 0.0
    }
}

/// Scaled intrinsic-value gap between identities `a` and `b`:
///
/// ```text
/// c = (1/beta) [ gamma/(2(gamma + 1/w)) (v_B(2 - v_B/w) - v_A(2 - v_A/w)) - (mu_A - mu_B) ]
/// ```
///
/// Requires a common ability and `beta > 0`.
pub fn relative_cost(a: &IdentitySpec, b: &IdentitySpec, pop: &Population) -> Result<RelativeCost> {
    let w = pop
        .homogeneous_ability()
        .ok_or_else(|| Error::Precondition("relative cost is only defined for a common ability".into()))?;
    let intrinsic_a = action::homogeneous_intrinsic_value(w, pop.gamma, a.mu, a.v);
    let intrinsic_b = action::homogeneous_intrinsic_value(w, pop.gamma, b.mu, b.v);
    if pop.beta == 0.0 {
        return Err(Error::Precondition(format!(
            "beta = 0: neighbor term absent; identity choice degenerates to sign of V~_A - V~_B = {}",
            intrinsic_a - intrinsic_b
        )));
    }
    let g = pop.gamma;
    let shape = |v: f64| v * (2.0 - v / w);
    let c = (g / (2.0 * (g + 1.0 / w)) * (shape(b.v) - shape(a.v)) - (a.mu - b.mu)) / pop.beta;
    Ok(RelativeCost { c, a: a.label.clone(), b: b.label.clone(), intrinsic_a, intrinsic_b })
}

/// Neighbours of `i` on each side.
pub fn side_degrees(net: &Network, sides: &[Side], i: usize) -> (usize, usize) {
    let d_a = net.neighbors(i).iter().filter(|&&j| sides[j] == Side::A).count();
    (d_a, net.neighbors(i).len() - d_a)
}

/// A iff `d_{i,A} - d_{i,B} >= c`; ties go to A.
pub fn best_response_identity(net: &Network, sides: &[Side], i: usize, c: f64) -> Side {
    let (d_a, d_b) = side_degrees(net, sides, i);
    prefers_a(d_a, d_b, c)
}

pub(crate) fn prefers_a(d_a: usize, d_b: usize, c: f64) -> Side {
    if d_a as f64 - d_b as f64 >= c {
        Side::A
    } else {
        Side::B
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumCheck {
    pub is_equilibrium: bool,
    /// Individuals whose best response differs from their current identity.
    pub violators: Vec<usize>,
}

pub fn is_identity_equilibrium(net: &Network, sides: &[Side], c: f64) -> EquilibriumCheck {
    let violators: Vec<usize> =
        (0..net.n()).filter(|&i| best_response_identity(net, sides, i, c) != sides[i]).collect();
    EquilibriumCheck { is_equilibrium: violators.is_empty(), violators }
}

fn require_nonpositive(c: f64) -> Result<()> {
    if c.is_nan() || c > 0.0 {
        return Err(Error::Precondition(format!("c must be <= 0 (A intrinsically weakly better), got {c}")));
    }
    Ok(())
}

/// Whether everybody holding the less attractive identity is an equilibrium:
/// `min_i d_i > |c|`.
pub fn all_low_equilibrium_exists(net: &Network, c: f64) -> Result<bool> {
    require_nonpositive(c)?;
    Ok(net.min_degree() as f64 > c.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// Needs at least `absolute` neighbours on side A.
    Conditional,
    /// `absolute <= 0`: adopts A whatever the neighbours do.
    Unconditional,
    /// No neighbours: adopts A iff `c <= 0`.
    Isolated,
}

/// Adoption threshold of one individual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub degree: usize,
    /// `t_i = (c + d_i) / 2`.
    pub absolute: f64,
    /// `q_i = t_i / d_i`; `None` for isolated individuals.
    pub fraction: Option<f64>,
    pub kind: ThresholdKind,
    #[serde(skip)]
    c: f64,
}

impl Threshold {
    /// Whether `count_a` neighbours on side A reach the threshold.
    ///
    /// Evaluates `2 count_a - d_i >= c`, which is `count_a >= t_i` without
    /// rounding `c + d_i`.
    pub fn adopts(&self, count_a: usize) -> bool {
        2.0 * count_a as f64 - self.degree as f64 >= self.c
    }
}

pub fn threshold_for(degree: usize, c: f64) -> Threshold {
    let absolute = (c + degree as f64) / 2.0;
    let (fraction, kind) = if degree == 0 {
        (None, ThresholdKind::Isolated)
    } else if absolute <= 0.0 {
        (Some(absolute / degree as f64), ThresholdKind::Unconditional)
    } else {
        (Some(absolute / degree as f64), ThresholdKind::Conditional)
    };
    Threshold { degree, absolute, fraction, kind, c }
}

/// Per-individual adoption thresholds for side A.
pub fn thresholds(net: &Network, c: f64) -> Result<Vec<Threshold>> {
    require_nonpositive(c)?;
    Ok(net.degrees().into_iter().map(|d| threshold_for(d, c)).collect())
}

/// Best identity for `i` among any number of identities: the argmax of
/// `V_{i,I}`, ties broken by higher intrinsic value, then by label.
pub fn best_response_general(
    soc: &Society,
    assign: &IdentityAssignment,
    profile: &ActionProfile,
    i: usize,
    mode: DeviationMode,
) -> Result<IdentityId> {
    let mut best: Option<(IdentityId, f64, f64)> = None;
    let typed = crate::netcore::typed_degrees(soc.net(), assign);
    for id in soc.identities().ids() {
        let v = action::value_function(soc, assign, profile, i, id, mode)?;
        let intrinsic = v - soc.pop().beta * typed[i][id.0] as f64;
        best = Some(match best {
            None => (id, v, intrinsic),
            Some(cur) => {
                if better(soc, (id, v, intrinsic), cur) {
                    (id, v, intrinsic)
                } else {
                    cur
                }
            }
        });
    }
    Ok(best.expect("at least two identities").0)
}

fn better(soc: &Society, cand: (IdentityId, f64, f64), cur: (IdentityId, f64, f64)) -> bool {
    if cand.1 > cur.1 + VALUE_TIE_TOL {
        return true;
    }
    if cand.1 < cur.1 - VALUE_TIE_TOL {
        return false;
    }
    if cand.2 > cur.2 + VALUE_TIE_TOL {
        return true;
    }
    if cand.2 < cur.2 - VALUE_TIE_TOL {
        return false;
    }
    soc.identities().get(cand.0).label < soc.identities().get(cur.0).label
}

/// Identity-equilibrium check for any number of identities, using value
/// functions at the action equilibrium of `assign`.
pub fn is_identity_equilibrium_general(
    soc: &Society,
    assign: &IdentityAssignment,
    mode: DeviationMode,
) -> Result<EquilibriumCheck> {
    let profile = action::solve_actions(soc, assign)?;
    let mut violators = Vec::new();
    for i in 0..soc.n() {
        if best_response_general(soc, assign, &profile, i, mode)? != assign.get(i) {
            violators.push(i);
        }
    }
    Ok(EquilibriumCheck { is_equilibrium: violators.is_empty(), violators })
}

/// Full value table for an assignment, solved at its action equilibrium.
pub fn values_at_equilibrium(
    soc: &Society,
    assign: &IdentityAssignment,
    mode: DeviationMode,
) -> Result<(ActionProfile, action::ValueTable)> {
    let profile = action::solve_actions(soc, assign)?;
    let table = value_table(soc, assign, &profile, mode)?;
    Ok((profile, table))
}

#[cfg(test)]
mod tests;
