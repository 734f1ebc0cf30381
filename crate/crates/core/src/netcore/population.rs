use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of an identity within its [`IdentitySet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IdentityId(pub usize);

/// A social identity: a status payoff and a prescribed action level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub label: String,
    pub mu: f64,
    pub v: f64,
}

impl IdentitySpec {
    pub fn new(label: impl Into<String>, mu: f64, v: f64) -> Self {
        IdentitySpec { label: label.into(), mu, v }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySet {
    specs: Vec<IdentitySpec>,
}

impl IdentitySet {
    pub fn new(specs: Vec<IdentitySpec>) -> Result<Self> {
        if specs.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "at least 2 identities are required, got {}",
                specs.len()
            )));
        }
        for (k, s) in specs.iter().enumerate() {
            if s.label.is_empty() {
                return Err(Error::InvalidParameter(format!("identity {k} has an empty label")));
            }
            if specs[..k].iter().any(|o| o.label == s.label) {
                return Err(Error::InvalidParameter(format!("duplicate identity label {:?}", s.label)));
            }
            if !s.mu.is_finite() || !s.v.is_finite() {
                return Err(Error::InvalidParameter(format!("identity {:?} has a non-finite mu or v", s.label)));
            }
            if s.v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "identity {:?}: prescribed action must be non-negative, got {}",
                    s.label, s.v
                )));
            }
        }
        Ok(IdentitySet { specs })
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn get(&self, id: IdentityId) -> &IdentitySpec {
        &self.specs[id.0]
    }

    pub fn specs(&self) -> &[IdentitySpec] {
        &self.specs
    }

    pub fn ids(&self) -> impl Iterator<Item = IdentityId> {
        (0..self.specs.len()).map(IdentityId)
    }

    pub fn id_of(&self, label: &str) -> Result<IdentityId> {
        self.specs
            .iter()
            .position(|s| s.label == label)
            .map(IdentityId)
            .ok_or_else(|| Error::UnknownIdentity(label.to_string()))
    }

    /// Pairs violating "higher prescribed action implies higher status".
    ///
    /// The ordering eases interpretation but no result depends on it, so
    /// violations are reported as warnings.
    pub fn pairing_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (a, sa) in self.specs.iter().enumerate() {
            for sb in &self.specs[a + 1..] {
                // distinct identities need strictly co-ordered (v, mu)
                let dv = sa.v - sb.v;
                let dmu = sa.mu - sb.mu;
                let bad = dv == 0.0 || dmu == 0.0 || (dv > 0.0) != (dmu > 0.0);
                if bad {
                    out.push(format!(
                        "identities {:?} (mu={}, v={}) and {:?} (mu={}, v={}) are not monotonically paired",
                        sa.label, sa.mu, sa.v, sb.label, sb.mu, sb.v
                    ));
                }
            }
        }
        out
    }
}

/// Abilities and preference weights.
///
/// `alpha` weighs conformity to same-identity neighbours, `beta` the value
/// of each same-identity neighbour and `gamma` conformity to the prescribed
/// action.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    abilities: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Population {
    pub fn new(abilities: Vec<f64>, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, p) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !p.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
            if p < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {p}")));
            }
        }
        for (i, &w) in abilities.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::InvalidParameter(format!("ability of individual {i} is not finite")));
            }
            if w <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "ability must be positive (individual {i} has {w})"
                )));
            }
        }
        Ok(Population { abilities, alpha, beta, gamma })
    }

    pub fn homogeneous(n: usize, w: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Population::new(vec![w; n], alpha, beta, gamma)
    }

    pub fn n(&self) -> usize {
        self.abilities.len()
    }

    pub fn abilities(&self) -> &[f64] {
        &self.abilities
    }

    pub fn ability(&self, i: usize) -> f64 {
        self.abilities[i]
    }

    /// The common ability when every individual has the same one.
    pub fn homogeneous_ability(&self) -> Option<f64> {
        let first = *self.abilities.first()?;
        self.abilities.iter().all(|&w| w == first).then_some(first)
    }

    /// Conformity weight `1 / (gamma + alpha + 1/w_i)`.
    pub fn conformity_weight(&self, i: usize) -> f64 {
        1.0 / (self.gamma + self.alpha + 1.0 / self.abilities[i])
    }

    /// Action of `i` when no same-identity neighbour is present:
    /// `(1 + gamma v) / (gamma + 1/w_i)`.
    pub fn isolated_action(&self, i: usize, v: f64) -> f64 {
        (1.0 + self.gamma * v) / (self.gamma + 1.0 / self.abilities[i])
    }
}

/// Stage-1 profile: the identity held by each individual.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdentityAssignment {
    ids: Vec<IdentityId>,
    m: usize,
}

impl IdentityAssignment {
    pub fn new(ids: Vec<IdentityId>, identities: &IdentitySet) -> Result<Self> {
        let m = identities.len();
        if let Some((i, id)) = ids.iter().enumerate().find(|(_, id)| id.0 >= m) {
            return Err(Error::InvalidParameter(format!(
                "individual {i} holds identity index {} but only {m} identities exist",
                id.0
            )));
        }
        Ok(IdentityAssignment { ids, m })
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S], identities: &IdentitySet) -> Result<Self> {
        let ids = labels.iter().map(|l| identities.id_of(l.as_ref())).collect::<Result<Vec<_>>>()?;
        IdentityAssignment::new(ids, identities)
    }

    /// Everybody holds `id`.
    pub fn uniform(n: usize, id: IdentityId, identities: &IdentitySet) -> Result<Self> {
        IdentityAssignment::new(vec![id; n], identities)
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn identity_count(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize) -> IdentityId {
        self.ids[i]
    }

    pub fn ids(&self) -> &[IdentityId] {
        &self.ids
    }

    /// Copy of this assignment with individual `i` moved to `id`.
    pub fn with(&self, i: usize, id: IdentityId) -> Self {
        let mut ids = self.ids.clone();
        ids[i] = id;
        IdentityAssignment { ids, m: self.m }
    }

    /// `n_I` for every identity, indexed by identity position.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.m];
        for id in &self.ids {
            counts[id.0] += 1;
        }
        counts
    }

    /// Members of `id` in ascending index order.
    pub fn members(&self, id: IdentityId) -> Vec<usize> {
        self.ids.iter().enumerate().filter(|(_, &x)| x == id).map(|(i, _)| i).collect()
    }

    pub fn labels<'a>(&self, identities: &'a IdentitySet) -> Vec<&'a str> {
        self.ids.iter().map(|&id| identities.get(id).label.as_str()).collect()
    }
}
