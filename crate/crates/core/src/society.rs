use crate::error::{Error, Result};
use crate::netcore::{IdentitySet, Network, Population};

/// The fixed environment of the game: network, identity catalogue and
/// population parameters. Identity choices vary on top of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Society {
    net: Network,
    identities: IdentitySet,
    pop: Population,
}

impl Society {
    pub fn new(net: Network, identities: IdentitySet, pop: Population) -> Result<Self> {
        if pop.n() != net.n() {
            return Err(Error::InvalidParameter(format!(
                "{} abilities given for a network of {} individuals",
                pop.n(),
                net.n()
            )));
        }
        Ok(Society { net, identities, pop })
    }

    pub fn net(&self) -> &Network {
        &self.net
    }

    pub fn identities(&self) -> &IdentitySet {
        &self.identities
    }

    pub fn pop(&self) -> &Population {
        &self.pop
    }

    pub fn n(&self) -> usize {
        self.net.n()
    }
}
