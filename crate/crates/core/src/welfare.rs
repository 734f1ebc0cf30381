//! Welfare accounting and the two upward-mobility examples.
//!
//! Welfare is the utilitarian sum of equilibrium utilities; total action is
//! reported next to it since the two objectives can disagree.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::action::{self, homogeneous_bracket, ActionProfile};
use crate::error::{Error, Result};
use crate::game::relative_cost;
use crate::netcore::{IdentityAssignment, IdentitySpec, Population};
use crate::society::Society;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityWelfare {
    pub members: usize,
    pub total_utility: f64,
    pub total_action: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WelfareReport {
    pub total_utility: f64,
    pub total_action: f64,
    /// Keyed by identity label; identities nobody holds are listed with zeros.
    pub per_identity: BTreeMap<String, IdentityWelfare>,
    /// Edges whose endpoints hold different identities.
    pub cross_identity_links: usize,
}

/// Welfare at the action equilibrium of `assign`.
pub fn welfare(soc: &Society, assign: &IdentityAssignment) -> Result<WelfareReport> {
    let profile = action::solve_actions(soc, assign)?;
    welfare_of_profile(soc, assign, &profile)
}

/// Welfare of a given profile, re-evaluating every utility as a consistency
/// check on the stored ones.
pub fn welfare_of_profile(soc: &Society, assign: &IdentityAssignment, profile: &ActionProfile) -> Result<WelfareReport> {
    let mut per_identity: BTreeMap<String, IdentityWelfare> = soc
        .identities()
        .specs()
        .iter()
        .map(|s| (s.label.clone(), IdentityWelfare { members: 0, total_utility: 0.0, total_action: 0.0 }))
        .collect();
    let mut total_utility = 0.0;
    let mut total_action = 0.0;
    for i in 0..soc.n() {
        let u = action::utility(soc, assign, &profile.x, i);
        if (u - profile.utility[i]).abs() > 1e-9 * u.abs().max(1.0) {
            return Err(Error::Internal(format!(
                "stored utility {} of individual {i} disagrees with re-evaluation {u}",
                profile.utility[i]
            )));
        }
        total_utility += u;
        total_action += profile.x[i];
        let entry = per_identity.get_mut(&soc.identities().get(assign.get(i)).label).expect("label present");
        entry.members += 1;
        entry.total_utility += u;
        entry.total_action += profile.x[i];
    }
    let cross_identity_links = soc.net().edges().filter(|&(i, j)| assign.get(i) != assign.get(j)).count();
    Ok(WelfareReport { total_utility, total_action, per_identity, cross_identity_links })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WelfareDelta {
    /// `other - base`.
    pub utility: f64,
    pub action: f64,
}

pub fn compare(base: &WelfareReport, other: &WelfareReport) -> WelfareDelta {
    WelfareDelta {
        utility: other.total_utility - base.total_utility,
        action: other.total_action - base.total_action,
    }
}

/// Welfare for several named assignments, keyed by name.
pub fn welfare_table(
    soc: &Society,
    named: &[(String, IdentityAssignment)],
) -> Result<BTreeMap<String, WelfareReport>> {
    named.iter().map(|(name, a)| Ok((name.clone(), welfare(soc, a)?))).collect()
}

const TEMPLATE_TOL: f64 = 1e-12;

fn common_ability(pop: &Population) -> Result<f64> {
    pop.homogeneous_ability()
        .ok_or_else(|| Error::TemplateMismatch("the welfare examples assume a common ability".into()))
}

fn check_template(spec: &IdentitySpec, ratio: f64, w: f64) -> Result<()> {
    let want = ratio * w;
    if (spec.v - want).abs() > TEMPLATE_TOL * want.abs().max(1.0) {
        return Err(Error::TemplateMismatch(format!(
            "identity {:?} needs v = {ratio} w = {want}, got {}",
            spec.label, spec.v
        )));
    }
    Ok(())
}

fn check_status_order(a: &IdentitySpec, b: &IdentitySpec, strict: bool) -> Result<()> {
    let ok = if strict { a.mu > b.mu } else { a.mu >= b.mu };
    if !ok {
        return Err(Error::TemplateMismatch(format!(
            "identity {:?} must have the higher status (mu {} vs {})",
            a.label, a.mu, b.mu
        )));
    }
    Ok(())
}

/// Identities prescribing `1.5 w` (high status) and `0.5 w` (low status).
pub fn example1_identities(w: f64, mu_a: f64, mu_b: f64) -> (IdentitySpec, IdentitySpec) {
    (IdentitySpec::new("A", mu_a, 1.5 * w), IdentitySpec::new("B", mu_b, 0.5 * w))
}

/// Identities prescribing `2 w` (high status) and `w` (low status).
pub fn example2_identities(w: f64, mu_a: f64, mu_b: f64) -> (IdentitySpec, IdentitySpec) {
    (IdentitySpec::new("A", mu_a, 2.0 * w), IdentitySpec::new("B", mu_b, w))
}

/// Equal action terms; identities differ only in status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example1Report {
    pub w: f64,
    pub gamma: f64,
    pub beta: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    /// `(1 + 3/4 gamma w) / (2 (gamma + 1/w))`, shared by both identities.
    pub bracket: f64,
    pub intrinsic_a: f64,
    pub intrinsic_b: f64,
    /// Whether the general value formula reproduces `bracket` for both.
    pub bracket_agrees: bool,
    /// `None` when `beta = 0`.
    pub c: Option<f64>,
    /// `mu_A - beta < mu_B`: coordination on the low-status identity can
    /// persist, blocking welfare-enhancing mobility.
    pub low_status_lock_in: bool,
}

pub fn example1_check(pop: &Population, a: &IdentitySpec, b: &IdentitySpec) -> Result<Example1Report> {
    let w = common_ability(pop)?;
    check_template(a, 1.5, w)?;
    check_template(b, 0.5, w)?;
    check_status_order(a, b, true)?;
    let g = pop.gamma;
    let bracket = (1.0 + 0.75 * g * w) / (2.0 * (g + 1.0 / w));
    let tol = 1e-12 * bracket.abs().max(1.0);
    let bracket_agrees = (homogeneous_bracket(w, g, a.v) - bracket).abs() <= tol
        && (homogeneous_bracket(w, g, b.v) - bracket).abs() <= tol;
    let c = if pop.beta > 0.0 { Some(relative_cost(a, b, pop)?.c) } else { None };
    Ok(Example1Report {
        w,
        gamma: g,
        beta: pop.beta,
        mu_a: a.mu,
        mu_b: b.mu,
        bracket,
        intrinsic_a: a.mu + bracket,
        intrinsic_b: b.mu + bracket,
        bracket_agrees,
        c,
        low_status_lock_in: a.mu - pop.beta < b.mu,
    })
}

/// Lower prescription on the low-status side can make it intrinsically
/// better.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example2Report {
    pub w: f64,
    pub gamma: f64,
    pub beta: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    pub intrinsic_a: f64,
    pub intrinsic_b: f64,
    /// Whether the general value formula reproduces both intrinsic values.
    pub bracket_agrees: bool,
    /// `2 (mu_A - mu_B)`.
    pub status_gap_doubled: f64,
    /// `w gamma / (gamma + 1/w)`.
    pub action_gain: f64,
    /// `2 (mu_A - mu_B) < w gamma / (gamma + 1/w)`.
    pub b_intrinsically_better: bool,
    /// `gamma w / (2 (gamma + 1/w)) - (mu_A - mu_B)`, i.e. `V~_B - V~_A`.
    pub intrinsic_gap: f64,
    /// `beta > gap > 0`: high-status coordination persists although it is
    /// welfare-dominated.
    pub high_status_lock_in: bool,
    /// `None` when `beta = 0`.
    pub c: Option<f64>,
}

pub fn example2_check(pop: &Population, a: &IdentitySpec, b: &IdentitySpec) -> Result<Example2Report> {
    let w = common_ability(pop)?;
    check_template(a, 2.0, w)?;
    check_template(b, 1.0, w)?;
    check_status_order(a, b, false)?;
    let g = pop.gamma;
    let denom = 2.0 * (g + 1.0 / w);
    let intrinsic_a = a.mu + 1.0 / denom;
    let intrinsic_b = b.mu + (1.0 + g * w) / denom;
    let tol = 1e-12 * intrinsic_a.abs().max(intrinsic_b.abs()).max(1.0);
    let bracket_agrees = (action::homogeneous_intrinsic_value(w, g, a.mu, a.v) - intrinsic_a).abs() <= tol
        && (action::homogeneous_intrinsic_value(w, g, b.mu, b.v) - intrinsic_b).abs() <= tol;
    let dmu = a.mu - b.mu;
    let action_gain = w * g / (g + 1.0 / w);
    let intrinsic_gap = g * w / denom - dmu;
    let c = if pop.beta > 0.0 { Some(relative_cost(a, b, pop)?.c) } else { None };
    Ok(Example2Report {
        w,
        gamma: g,
        beta: pop.beta,
        mu_a: a.mu,
        mu_b: b.mu,
        intrinsic_a,
        intrinsic_b,
        bracket_agrees,
        status_gap_doubled: 2.0 * dmu,
        action_gain,
        b_intrinsically_better: 2.0 * dmu < action_gain,
        intrinsic_gap,
        high_status_lock_in: pop.beta > intrinsic_gap && intrinsic_gap > 0.0,
        c,
    })
}
