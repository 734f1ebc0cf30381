use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::netcore::Network;

use super::{prefers_a, Side};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

/// Largest network the bitmask enumeration can represent.
const HARD_LIMIT: usize = 40;

/// Every identity equilibrium of the two-identity game at cost `c`.
///
/// Tests all `2^n` assignments; refuses networks above `limit` individuals.
/// Sorted by number of A-members, then lexicographically (A before B).
pub fn enumerate_equilibria(net: &Network, c: f64, limit: usize) -> Result<Vec<Vec<Side>>> {
    let n = net.n();
    if n > limit.min(HARD_LIMIT) {
        return Err(Error::EnumerationLimit { n, limit: limit.min(HARD_LIMIT) });
    }
    let masks: Vec<u64> = (0..n)
        .map(|i| net.neighbors(i).iter().fold(0u64, |m, &j| m | (1u64 << j)))
        .collect();
    let degrees = net.degrees();

    // bit i set <=> individual i on side A
    let total = 1u64 << n;
    let stable = |a_mask: u64| {
        (0..n).all(|i| {
            let d_a = (masks[i] & a_mask).count_ones() as usize;
            let want = prefers_a(d_a, degrees[i] - d_a, c);
            (want == Side::A) == (a_mask >> i & 1 == 1)
        })
    };
    let mut found: Vec<u64> = (0..total).into_par_iter().filter(|&m| stable(m)).collect();
    found.sort_unstable();

    let mut out: Vec<Vec<Side>> = found
        .into_iter()
        .map(|m| (0..n).map(|i| if m >> i & 1 == 1 { Side::A } else { Side::B }).collect())
        .collect();
    out.sort_by(|x, y| {
        let ax = x.iter().filter(|&&s| s == Side::A).count();
        let ay = y.iter().filter(|&&s| s == Side::A).count();
        ax.cmp(&ay).then_with(|| x.cmp(y))
    });
    Ok(out)
}
