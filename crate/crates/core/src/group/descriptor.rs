//! JSON group descriptions and named presets.
//!
//! ```json
//! {"kind":"free_abelian","rank":2}
//! {"kind":"free","rank":2,"generators":[{"gen":"a","weight":"1"},{"gen":"b","weight":"2"}]}
//! {"kind":"quotient","source":{"kind":"free_abelian","rank":2},
//!  "target":{"kind":"free_abelian","rank":1},"images":["0","1"]}
//! ```
//!
//! Element strings: `(x,y,..)` or a bare integer for ℤ, reduced words over
//! `a..z` with uppercase inverses (`1` for the identity), residues, dyadic
//! rationals `p/q`, and `[x;y]` for products.

use serde::{Deserialize, Serialize};

use super::{GroupError, GroupHom, GroupKind, GroupModel};
use crate::rational::{fmt_rat, parse_rat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub gen: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDescriptor {
    FreeAbelian {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<GeneratorEntry>>,
    },
    Free {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<GeneratorEntry>>,
    },
    Cyclic {
        order: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<GeneratorEntry>>,
    },
    Dyadic {
        max_exponent: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<GeneratorEntry>>,
    },
    Product {
        factors: Vec<GroupDescriptor>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<GeneratorEntry>>,
    },
    /// Image of `source` in `target` under the map given on canonical generators.
    Quotient {
        source: Box<GroupDescriptor>,
        target: Box<GroupDescriptor>,
        images: Vec<String>,
    },
}

impl GroupDescriptor {
    pub fn build(&self) -> Result<GroupModel, GroupError> {
        let (base, gens) = match self {
            GroupDescriptor::FreeAbelian { rank, generators } => (GroupModel::free_abelian(*rank), generators),
            GroupDescriptor::Free { rank, generators } => {
                if *rank > 26 {
                    return Err(GroupError::Config("free groups support at most 26 generators".into()));
                }
                (GroupModel::free(*rank), generators)
            }
            GroupDescriptor::Cyclic { order, generators } => {
                if *order == 0 {
                    return Err(GroupError::Config("cyclic order must be positive".into()));
                }
                (GroupModel::cyclic(*order), generators)
            }
            GroupDescriptor::Dyadic { max_exponent, generators } => {
                if *max_exponent > 40 {
                    return Err(GroupError::Config("dyadic max_exponent must be at most 40".into()));
                }
                (GroupModel::dyadic(*max_exponent), generators)
            }
            GroupDescriptor::Product { factors, generators } => {
                let fs = factors.iter().map(GroupDescriptor::build).collect::<Result<Vec<_>, _>>()?;
                (GroupModel::product(fs), generators)
            }
            GroupDescriptor::Quotient { source, target, images } => {
                let s = source.build()?;
                let t = target.build()?;
                let refs: Vec<&str> = images.iter().map(String::as_str).collect();
                return GroupModel::image(GroupHom::parse(s, t, &refs)?);
            }
        };
        match gens {
            None => Ok(base),
            Some(list) => {
                let entries = list
                    .iter()
                    .map(|e| {
                        let g = base.parse(&e.gen)?;
                        let w = parse_rat(&e.weight).map_err(|err| GroupError::Config(err.to_string()))?;
                        Ok((g, w))
                    })
                    .collect::<Result<Vec<_>, GroupError>>()?;
                base.with_generators(entries)
            }
        }
    }

    /// Describes `model`, listing generators only when they differ from the default.
    pub fn from_model(model: &GroupModel) -> Result<Self, GroupError> {
        let listed = |default: &GroupModel| {
            (default.generators() != model.generators()).then(|| {
                model
                    .generators()
                    .entries()
                    .iter()
                    .map(|(g, w)| GeneratorEntry { gen: g.to_string(), weight: fmt_rat(w) })
                    .collect()
            })
        };
        Ok(match model.kind() {
            GroupKind::FreeAbelian { rank } => GroupDescriptor::FreeAbelian {
                rank: *rank,
                generators: listed(&GroupModel::free_abelian(*rank)),
            },
            GroupKind::Free { rank } => GroupDescriptor::Free {
                rank: *rank,
                generators: listed(&GroupModel::free(*rank)),
            },
            GroupKind::Cyclic { order } => GroupDescriptor::Cyclic {
                order: *order,
                generators: listed(&GroupModel::cyclic(*order)),
            },
            GroupKind::Dyadic { max_exponent } => GroupDescriptor::Dyadic {
                max_exponent: *max_exponent,
                generators: listed(&GroupModel::dyadic(*max_exponent)),
            },
            GroupKind::Product { factors } => GroupDescriptor::Product {
                factors: factors.iter().map(GroupDescriptor::from_model).collect::<Result<_, _>>()?,
                generators: listed(&GroupModel::product(factors.clone())),
            },
            GroupKind::Image { hom } => {
                if GroupModel::image((**hom).clone())?.generators() != model.generators() {
                    return Err(GroupError::Unsupported(
                        "describing an image model with custom generators".into(),
                    ));
                }
                GroupDescriptor::Quotient {
                    source: Box::new(GroupDescriptor::from_model(hom.source())?),
                    target: Box::new(GroupDescriptor::from_model(hom.target())?),
                    images: hom.images().iter().map(ToString::to_string).collect(),
                }
            }
        })
    }
}

/// Parses a preset name (`Z`, `Z2`, `F2`, `Z_mod_7`, `Dyadic(6)`, ...) or a
/// JSON description.
pub fn parse_group(desc: &str) -> Result<GroupModel, GroupError> {
    let s = desc.trim();
    if s.starts_with('{') {
        let d: GroupDescriptor =
            serde_json::from_str(s).map_err(|e| GroupError::Config(format!("bad group JSON: {e}")))?;
        return d.build();
    }
    let bad = || GroupError::Config(format!("unknown group preset `{s}`"));
    if let Some(m) = s.strip_prefix("Z_mod_") {
        let order: u64 = m.parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        return Ok(GroupModel::cyclic(order));
    }
    if let Some(rest) = s.strip_prefix("Dyadic") {
        let k = rest
            .trim_start_matches('(')
            .trim_end_matches(')')
            .parse::<u32>()
            .map_err(|_| bad())?;
        return GroupDescriptor::Dyadic { max_exponent: k, generators: None }.build();
    }
    if s == "Z" {
        return Ok(GroupModel::integers());
    }
    if let Some(n) = s.strip_prefix('Z') {
        let rank: usize = n.trim_start_matches('^').parse().map_err(|_| bad())?;
        return Ok(GroupModel::free_abelian(rank));
    }
    if let Some(n) = s.strip_prefix('F') {
        let rank: usize = n.parse().map_err(|_| bad())?;
        return GroupDescriptor::Free { rank, generators: None }.build();
    }
    Err(bad())
}
