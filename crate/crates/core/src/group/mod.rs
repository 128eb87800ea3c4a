//! Discrete groups in normal form, weighted word norms and balls.

mod element;
mod hom;
mod model;
mod norm;
mod subgroup;

pub mod descriptor;

pub use element::{GroupElement, Letter};
pub use hom::GroupHom;
pub use model::{GroupKind, GroupModel, Limits, WeightedGeneratingSet};
pub use norm::Window;
pub use subgroup::Subgroup;
pub(crate) use subgroup::cyclic_coordinate;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("element `{element}` does not belong to {model}")]
    ModelMismatch { element: String, model: String },
    #[error("`{element}` is not generated by the generating set of {model}")]
    NotGenerated { element: String, model: String },
    #[error("{what}: search budget of {budget} expansions exhausted")]
    Budget { what: String, budget: usize },
    #[error("ball of radius {radius} exceeds the cap of {cap} elements")]
    ResourceLimit { radius: String, cap: usize },
    #[error("invalid generating set: {0}")]
    InvalidGenerators(String),
    #[error("cannot parse `{input}` in {model}: {reason}")]
    Parse {
        input: String,
        model: String,
        reason: String,
    },
    #[error("invalid group description: {0}")]
    Config(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl GroupError {
    /// True for errors caused by a configured budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, GroupError::Budget { .. } | GroupError::ResourceLimit { .. })
    }
}
