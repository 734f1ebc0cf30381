use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::netcore::IdentityAssignment;
use crate::society::Society;

use super::{neighbor_average, utility, ActionProfile};

/// Per-coordinate bound on the first-order-condition residual of a direct
/// solve, relative to `max(1, |x_i|)`.
pub const DIRECT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for IterOptions {
    fn default() -> Self {
        IterOptions { tol: 1e-12, max_iters: 1_000_000 }
    }
}

/// Same-identity neighbours of every individual under `assign`.
fn same_neighbors(soc: &Society, assign: &IdentityAssignment) -> Vec<Vec<usize>> {
    (0..soc.n())
        .map(|i| {
            let id = assign.get(i);
            soc.net().neighbors(i).iter().copied().filter(|&j| assign.get(j) == id).collect()
        })
        .collect()
}

/// Connected components of the same-identity subgraph, each ascending.
fn identity_components(same: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = same.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            for &v in &same[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

fn check_assignment(soc: &Society, assign: &IdentityAssignment) -> Result<()> {
    if assign.n() != soc.n() {
        return Err(Error::InvalidParameter(format!(
            "assignment covers {} individuals, network has {}",
            assign.n(),
            soc.n()
        )));
    }
    if assign.identity_count() != soc.identities().len() {
        return Err(Error::InvalidParameter("assignment was built for a different identity set".into()));
    }
    Ok(())
}

/// Unique Nash equilibrium in actions for every identity.
///
/// Each same-identity component solves `(I - alpha G~) x = (1 + gamma v) b`
/// by dense LU, where `G~` has rows `b_i ĝ_i`. Members without same-identity
/// neighbours take `(1 + gamma v) / (gamma + 1/w_i)`.
pub fn solve_actions(soc: &Society, assign: &IdentityAssignment) -> Result<ActionProfile> {
    check_assignment(soc, assign)?;
    let pop = soc.pop();
    let alpha = pop.alpha;
    let same = same_neighbors(soc, assign);
    let mut x = vec![0.0; soc.n()];

    for comp in identity_components(&same) {
        let id = assign.get(comp[0]);
        let v = soc.identities().get(id).v;
        if comp.len() == 1 {
            let i = comp[0];
            x[i] = pop.isolated_action(i, v);
            continue;
        }
        let size = comp.len();
        let mut pos = std::collections::HashMap::with_capacity(size);
        for (k, &i) in comp.iter().enumerate() {
            pos.insert(i, k);
        }
        let mut m = DMatrix::<f64>::identity(size, size);
        let mut rhs = DVector::<f64>::zeros(size);
        for (r, &i) in comp.iter().enumerate() {
            let b = pop.conformity_weight(i);
            debug_assert!(alpha * b < 1.0);
            let w = alpha * b / same[i].len() as f64;
            for j in &same[i] {
                m[(r, pos[j])] -= w;
            }
            rhs[r] = (1.0 + pop.gamma * v) * b;
        }
        let sol = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Internal("singular action system despite alpha * b_i < 1".into()))?;
        for (k, &i) in comp.iter().enumerate() {
            x[i] = sol[k];
        }
    }

    let profile = finish_profile(soc, assign, x, None)?;
    let worst = max_foc_residual(soc, assign, &profile.x);
    if worst > DIRECT_RESIDUAL_TOL {
        return Err(Error::Internal(format!("direct solve left first-order residual {worst:e}")));
    }
    Ok(profile)
}

/// Fixed-point iteration `x <- b (1 + gamma v + alpha x̄)` from `x0`.
///
/// The map is a contraction with modulus `alpha * max b_i < 1`, so it
/// reaches the direct solution from any start. `iterations` counts map
/// applications until the sup-norm step drops to `tol`.
pub fn solve_actions_iterative(
    soc: &Society,
    assign: &IdentityAssignment,
    x0: &[f64],
    opts: IterOptions,
) -> Result<ActionProfile> {
    check_assignment(soc, assign)?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if x0.len() != soc.n() || x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("initial vector must be finite with one entry per individual".into()));
    }
    let pop = soc.pop();
    let same = same_neighbors(soc, assign);
    let b: Vec<f64> = (0..soc.n()).map(|i| pop.conformity_weight(i)).collect();
    let anchor: Vec<f64> = (0..soc.n())
        .map(|i| 1.0 + pop.gamma * soc.identities().get(assign.get(i)).v)
        .collect();

    let mut x = x0.to_vec();
    let mut next = vec![0.0; soc.n()];
    let mut iterations = 0;
    loop {
        let mut step = 0.0f64;
        for i in 0..soc.n() {
            next[i] = if same[i].is_empty() {
                anchor[i] / (pop.gamma + 1.0 / pop.ability(i))
            } else {
                let avg = same[i].iter().map(|&j| x[j]).sum::<f64>() / same[i].len() as f64;
                b[i] * (anchor[i] + pop.alpha * avg)
            };
            step = step.max((next[i] - x[i]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        iterations += 1;
        if step <= opts.tol {
            break;
        }
        if iterations >= opts.max_iters {
            return Err(Error::NotConverged { iterations, residual: step });
        }
    }
    finish_profile(soc, assign, x, Some(iterations))
}

fn finish_profile(
    soc: &Society,
    assign: &IdentityAssignment,
    x: Vec<f64>,
    iterations: Option<usize>,
) -> Result<ActionProfile> {
    if let Some((i, &xi)) = x.iter().enumerate().find(|(_, &xi)| !(xi >= 0.0)) {
        return Err(Error::Internal(format!("equilibrium action of individual {i} is {xi}")));
    }
    let xbar: Vec<f64> =
        (0..soc.n()).map(|i| neighbor_average(soc, assign, &x, i).unwrap_or(x[i])).collect();
    let utility = (0..soc.n()).map(|i| utility(soc, assign, &x, i)).collect();
    Ok(ActionProfile { x, xbar, utility, iterations })
}

/// Largest scaled first-order-condition residual over all individuals.
pub fn max_foc_residual(soc: &Society, assign: &IdentityAssignment, x: &[f64]) -> f64 {
    let pop = soc.pop();
    (0..soc.n())
        .map(|i| {
            let v = soc.identities().get(assign.get(i)).v;
            let target = match neighbor_average(soc, assign, x, i) {
                Some(avg) => pop.conformity_weight(i) * (1.0 + pop.gamma * v + pop.alpha * avg),
                None => pop.isolated_action(i, v),
            };
            (x[i] - target).abs() / x[i].abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// `alpha * max_i b_i`, the contraction modulus of the best-response map.
pub fn spectral_bound(soc: &Society) -> f64 {
    let pop = soc.pop();
    (0..soc.n()).map(|i| pop.alpha * pop.conformity_weight(i)).fold(0.0, f64::max)
}

/// Members of `id` reachable from `i` through same-identity links (including `i`).
pub fn path_connected_members(soc: &Society, assign: &IdentityAssignment, i: usize) -> Vec<usize> {
    let same = same_neighbors(soc, assign);
    identity_components(&same).into_iter().find(|c| c.contains(&i)).unwrap_or_default()
}
