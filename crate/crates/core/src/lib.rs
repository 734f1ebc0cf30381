//! Two-stage network game of social identity and action choice.
//!
//! Individuals on a fixed network first pick an identity (a status payoff
//! plus a prescribed action), then an action level that trades off their
//! own ability against conformity to the prescription and to same-identity
//! neighbours. The crate solves the action stage exactly, analyses the
//! identity stage (best responses, equilibria, cohesive blocking sets,
//! threshold cascades) and compares welfare across identity profiles.

pub mod action;
pub mod error;
pub mod game;
pub mod io;
pub mod netcore;
pub mod scenarios;
pub mod society;
pub mod welfare;

pub use error::{Error, Result};
pub use society::Society;
