//! Coarse structures on discrete groups: generating families, the shear
//! calculus for invariant entourages, and machine-verified
//! asymptotic-dimension certificates.

pub mod coarse;
pub mod cli;
pub mod construct;
pub mod cover;
pub mod group;
pub mod rational;

pub use group::{GroupElement, GroupError, GroupHom, GroupKind, GroupModel, Limits, Subgroup, Window};
pub use rational::Rat;
