//! Certificate constructors for model groups, and the transport of
//! certificates along subgroups, coset systems and extensions.
//!
//! Every constructor verifies its output before returning it; a failed
//! verification surfaces as [`ConstructError::Verification`].

mod extension;
mod transport;
mod zero_dim;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::coarse::{CoarseError, GapSet};
use crate::cover::{Cell, Certificate, Cover, CoverError, VerificationReport};
use crate::group::{GroupElement, GroupError, GroupModel, Letter, Limits, Subgroup};
use crate::rational::{fmt_rat, rat, Rat};

pub use extension::{extension_combine, z2_extension_demo, ExtensionData, ExtensionReport};
pub use transport::{
    CosetSide, TransportRun,
    dyadic_demo, even_integers_demo, subgroup_interval_certificate, translate_certificate, CosetDecomposition,
};
pub use zero_dim::{zero_dim_analysis, ZeroDimVerdict};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Coarse(#[from] CoarseError),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{what} did not verify: {detail}")]
    Verification { what: String, detail: String },
    #[error("search budget exceeded: {0}")]
    Budget(String),
}

impl ConstructError {
    pub fn is_budget(&self) -> bool {
        match self {
            ConstructError::Budget(_) => true,
            ConstructError::Group(e) => e.is_budget(),
            ConstructError::Cover(CoverError::Group(e)) => e.is_budget(),
            ConstructError::Coarse(CoarseError::Group(e)) => e.is_budget(),
            _ => false,
        }
    }
}

/// Short description of what failed in a verification report.
pub(crate) fn failure_summary(r: &VerificationReport) -> String {
    let mut parts = Vec::new();
    if !r.covered {
        parts.push(format!("{} window elements uncovered", r.uncovered.len()));
    }
    if !r.colors_ok {
        parts.push(format!("{} colors used", r.colors_used));
    }
    if !r.disjointness.pass {
        let d = &r.disjointness;
        parts.push(format!(
            "cells {:?} of color {} not disjoint (witness {})",
            d.cells.unwrap_or((0, 0)),
            d.color.unwrap_or(0),
            d.witness.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
        ));
    }
    if !r.bound_ok {
        parts.push(format!("cell diameter {} over the declared bound", fmt_rat(&r.computed_bound)));
    }
    parts.join("; ")
}

/// Verifies `cert` and turns a failing report into an error.
pub(crate) fn checked(model: &GroupModel, cert: Certificate, what: &str) -> Result<Certificate, ConstructError> {
    let cert = cert.verified(model)?;
    match &cert.report {
        Some(r) if !r.pass => Err(ConstructError::Verification { what: what.into(), detail: failure_summary(r) }),
        _ => Ok(cert),
    }
}

pub(crate) fn ball_set(model: &GroupModel, r: Rat) -> Result<GapSet, GroupError> {
    Ok(GapSet::from_window(&model.ball(r)?))
}

/// Groups keyed elements into cells, ordered by key.
fn cells_from_keys<K: Ord>(keyed: impl IntoIterator<Item = (K, usize, GroupElement)>) -> Vec<Cell> {
    let mut by_key: BTreeMap<K, Cell> = BTreeMap::new();
    for (key, color, g) in keyed {
        by_key.entry(key).or_insert_with(|| Cell { color, members: GapSet::new() }).members.insert(g);
    }
    by_key.into_values().collect()
}

/// Two-color cover of ℤ by the intervals [2Rm, 2R(m+1)−1], colored by
/// parity of m, at scale ball(R) on the window B(window_r).
pub fn interval_cover_z(r: i64, window_r: i64) -> Result<Certificate, ConstructError> {
    if r < 1 {
        return Err(ConstructError::Precondition(format!("scale radius must be positive, got {r}")));
    }
    if window_r < 4 * r {
        return Err(ConstructError::WindowTooSmall(format!("window {window_r} < 4·{r}")));
    }
    let z = GroupModel::integers();
    let window = z.ball(rat(window_r))?;
    let side = 2 * r;
    let cells = ((-window_r).div_euclid(side)..=window_r.div_euclid(side))
        .map(|m| Cell {
            color: m.rem_euclid(2) as usize,
            members: (side * m..side * (m + 1)).map(|t| GroupElement::vector([t])).collect(),
        })
        .collect();
    let cert = Certificate {
        scale: ball_set(&z, rat(r))?,
        colors: 2,
        cover: Cover::new(window, cells)?,
        uniform_bound_radius: rat(side - 1),
        report: None,
    };
    checked(&z, cert, "interval cover")
}

/// Parameters of the staggered-cube cover of ℤⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct BrickParams {
    pub rank: usize,
    pub scale: i64,
    /// Cube side; default (n+1)(2R+1).
    pub side: Option<i64>,
    /// Window radius; default three times the initial side.
    pub window: Option<i64>,
    /// Forces a color count by merging grid colors modulo it.
    pub colors: Option<usize>,
}

impl BrickParams {
    pub fn new(rank: usize, scale: i64) -> Self {
        BrickParams { rank, scale, side: None, window: None, colors: None }
    }

    pub fn default_side(&self) -> i64 {
        (self.rank as i64 + 1) * (2 * self.scale + 1)
    }
}

/// Points closer than this to a cube face are left to the other grids.
fn brick_margin(scale: i64) -> i64 {
    scale / 2 + 1
}

/// Builds the staggered-cube certificate without verifying it.
///
/// Grid j consists of cubes of side L shifted by j·⌊L/(n+1)⌋ along the
/// diagonal; its cells are the cubes shrunk by the margin on every face,
/// truncated to the window. A point is lost by grid j only if one of its
/// coordinates sits near a face of that grid, and each coordinate can do so
/// for at most one grid.
pub fn brick_certificate(params: &BrickParams, side: i64, window_r: i64) -> Result<Certificate, ConstructError> {
    let n = params.rank;
    if n == 0 || params.scale < 1 || side < 1 {
        return Err(ConstructError::Precondition("rank, scale and side must be positive".into()));
    }
    let model = GroupModel::free_abelian(n);
    let window = model.ball(rat(window_r))?;
    let grids = n + 1;
    let colors = params.colors.unwrap_or(grids);
    if colors == 0 {
        return Err(ConstructError::Precondition("at least one color is required".into()));
    }
    let stagger = side / grids as i64;
    let margin = brick_margin(params.scale);
    let mut keyed = Vec::new();
    for g in window.elements() {
        let v = g.as_vector().ok_or_else(|| model.mismatch(g))?;
        for j in 0..grids {
            let shift = j as i64 * stagger;
            let inside = v.iter().all(|x| {
                let off = (x - shift).rem_euclid(side);
                off >= margin && off < side - margin
            });
            if inside {
                let cube: Vec<i64> = v.iter().map(|x| (x - shift).div_euclid(side)).collect();
                keyed.push(((j, cube), j % colors, g.clone()));
            }
        }
    }
    let cells = cells_from_keys(keyed);
    let cell_side = (side - 2 * margin - 1).max(0);
    Ok(Certificate {
        scale: ball_set(&model, rat(params.scale))?,
        colors,
        cover: Cover::compacted(window, cells)?,
        uniform_bound_radius: rat(n as i64 * cell_side),
        report: None,
    })
}

/// Verified (n+1)-color cover of ℤⁿ at scale ball(R). When the colors are
/// not forced and verification fails, the side is doubled (up to three
/// times) before giving up.
pub fn brick_cover_zn(params: &BrickParams) -> Result<Certificate, ConstructError> {
    let side0 = params.side.unwrap_or_else(|| params.default_side());
    let window_r = params.window.unwrap_or(3 * side0);
    let model = GroupModel::free_abelian(params.rank);
    let attempts = if params.colors.is_some() { 1 } else { 4 };
    let mut side = side0;
    let mut last = String::new();
    for _ in 0..attempts {
        let cert = brick_certificate(params, side, window_r)?.verified(&model)?;
        match &cert.report {
            Some(r) if !r.pass => last = failure_summary(r),
            _ => return Ok(cert),
        }
        side *= 2;
    }
    Err(ConstructError::Verification {
        what: "brick cover".into(),
        detail: format!("{last}; try a larger cube side than {}", side / 2),
    })
}

/// Two-color cover of the free group F_k at scale ball(R): annuli of
/// width 2R colored by parity, split by the prefix of length 2Rm − R.
pub fn tree_cover_free(k: usize, r: i64, window_r: i64, limits: Limits) -> Result<Certificate, ConstructError> {
    if r < 1 {
        return Err(ConstructError::Precondition(format!("scale radius must be positive, got {r}")));
    }
    if window_r < 6 * r {
        return Err(ConstructError::WindowTooSmall(format!("window {window_r} < 6·{r}")));
    }
    let model = GroupModel::free(k).with_limits(limits);
    let window = model.ball(rat(window_r))?;
    let width = 2 * r as usize;
    let keyed = window.elements().map(|g| {
        let w = g.as_word().unwrap_or(&[]);
        let m = w.len() / width;
        let cut = (width * m).saturating_sub(r as usize);
        let prefix: Vec<Letter> = w[..cut].to_vec();
        ((m, prefix), m % 2, g.clone())
    });
    let cells = cells_from_keys(keyed.collect::<Vec<_>>());
    let cert = Certificate {
        scale: ball_set(&model, rat(r))?,
        colors: 2,
        cover: Cover::new(window, cells)?,
        uniform_bound_radius: rat(6 * r),
        report: None,
    };
    checked(&model, cert, "tree cover")
}

/// Restricts a certificate to a subgroup H: cells U ∩ H over the window
/// W ∩ H at scale K ∩ H. Norms stay those of the ambient group.
pub fn restrict_certificate(
    model: &GroupModel,
    cert: &Certificate,
    h: &Subgroup,
) -> Result<Certificate, ConstructError> {
    let mut member: HashMap<&GroupElement, bool> = HashMap::new();
    for g in cert.cover.window().elements() {
        member.insert(g, h.contains(model, g)?);
    }
    let window = cert.cover.window().filter(|g| member[g]);
    if window.is_empty() {
        return Err(ConstructError::Precondition(format!("{} misses the window", h.describe())));
    }
    let mut cells = Vec::new();
    for c in cert.cover.cells() {
        let mut members = GapSet::new();
        for g in &c.members {
            let inside = match member.get(g) {
                Some(b) => *b,
                None => h.contains(model, g)?,
            };
            if inside {
                members.insert(g.clone());
            }
        }
        cells.push(Cell { color: c.color, members });
    }
    let mut scale = GapSet::new();
    for g in &cert.scale {
        if h.contains(model, g)? {
            scale.insert(g.clone());
        }
    }
    let restricted = Certificate {
        scale,
        colors: cert.colors,
        cover: Cover::compacted(window, cells)?,
        uniform_bound_radius: cert.uniform_bound_radius,
        report: None,
    };
    checked(model, restricted, "restricted certificate")
}

/// Merges colors modulo `colors` without re-verifying.
pub fn recolor_mod(cert: &Certificate, colors: usize) -> Result<Certificate, ConstructError> {
    if colors == 0 {
        return Err(ConstructError::Precondition("at least one color is required".into()));
    }
    let cells = cert
        .cover
        .cells()
        .iter()
        .map(|c| Cell { color: c.color % colors, members: c.members.clone() })
        .collect();
    Ok(Certificate {
        scale: cert.scale.clone(),
        colors,
        cover: Cover::compacted(cert.cover.window().clone(), cells)?,
        uniform_bound_radius: cert.uniform_bound_radius,
        report: None,
    })
}

/// Largest norm of an element of K, or 0.
pub(crate) fn scale_of(model: &GroupModel, k: &GapSet) -> Result<Rat, GroupError> {
    let r = model.scale_radius(k)?;
    Ok(if r < Rat::zero() { Rat::zero() } else { r })
}
