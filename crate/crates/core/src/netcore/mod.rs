//! Graph and population model.
//!
//! Holds the network, the identity catalogue, abilities and preference
//! weights, the stage-1 identity profile, and the neighbourhood statistics
//! every other module reads: identity-conditioned degrees, same-identity
//! row-normalised interaction matrices and subgroup link differences.

mod graph;
mod population;

pub use graph::{Connectivity, Network};
pub use population::{IdentityAssignment, IdentityId, IdentitySet, IdentitySpec, Population};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `d_{i,I}`: neighbours of `i` currently holding identity `id`.
///
/// Independent of `i`'s own identity.
pub fn typed_degree(net: &Network, assign: &IdentityAssignment, i: usize, id: IdentityId) -> Result<usize> {
    net.check_index(i)?;
    if id.0 >= assign.identity_count() {
        return Err(Error::UnknownIdentity(format!("#{}", id.0)));
    }
    Ok(net.neighbors(i).iter().filter(|&&j| assign.get(j) == id).count())
}

/// All `d_{i,I}` as an `n x m` table.
pub fn typed_degrees(net: &Network, assign: &IdentityAssignment) -> Vec<Vec<usize>> {
    (0..net.n())
        .map(|i| {
            let mut row = vec![0; assign.identity_count()];
            for &j in net.neighbors(i) {
                row[assign.get(j).0] += 1;
            }
            row
        })
        .collect()
}

/// Row-normalised same-identity interaction matrix for identity `id`.
#[derive(Debug, Clone, PartialEq)]
pub struct SameIdentityMatrix {
    /// Members of the identity, ascending; row/column `k` is `members[k]`.
    pub members: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

/// Builds `ĝ_I` with entries `g_{ij,I} / d_{i,I}`.
///
/// A member without same-identity neighbours gets a zero row.
pub fn same_identity_row_matrix(net: &Network, assign: &IdentityAssignment, id: IdentityId) -> SameIdentityMatrix {
    let members = assign.members(id);
    let mut position = vec![usize::MAX; net.n()];
    for (k, &i) in members.iter().enumerate() {
        position[i] = k;
    }
    let size = members.len();
    let mut matrix = DMatrix::zeros(size, size);
    for (r, &i) in members.iter().enumerate() {
        let same: Vec<usize> = net.neighbors(i).iter().copied().filter(|&j| assign.get(j) == id).collect();
        if same.is_empty() {
            continue;
        }
        let weight = 1.0 / same.len() as f64;
        for j in same {
            matrix[(r, position[j])] = weight;
        }
    }
    SameIdentityMatrix { members, matrix }
}

/// Link differences `k_i(S)` for the members of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupView {
    /// Members of `S`, ascending and deduplicated.
    pub members: Vec<usize>,
    pub links_in: Vec<usize>,
    pub links_out: Vec<usize>,
}

impl SubgroupView {
    /// `k_i(S)` for the `idx`-th member.
    pub fn k(&self, idx: usize) -> i64 {
        self.links_in[idx] as i64 - self.links_out[idx] as i64
    }

    pub fn ks(&self) -> Vec<i64> {
        (0..self.members.len()).map(|idx| self.k(idx)).collect()
    }

    pub fn min_k(&self) -> Option<i64> {
        (0..self.members.len()).map(|idx| self.k(idx)).min()
    }
}

/// Computes `k_i(S)` = links into `S` minus links out of `S` for each `i in S`.
pub fn link_difference(net: &Network, subset: &[usize]) -> Result<SubgroupView> {
    if subset.is_empty() {
        return Err(Error::Precondition("subgroup must be non-empty".into()));
    }
    let mut inside = vec![false; net.n()];
    for &i in subset {
        net.check_index(i)?;
        inside[i] = true;
    }
    let members: Vec<usize> = (0..net.n()).filter(|&i| inside[i]).collect();
    let mut links_in = Vec::with_capacity(members.len());
    let mut links_out = Vec::with_capacity(members.len());
    for &i in &members {
        let din = net.neighbors(i).iter().filter(|&&j| inside[j]).count();
        links_in.push(din);
        links_out.push(net.neighbors(i).len() - din);
    }
    Ok(SubgroupView { members, links_in, links_out })
}
