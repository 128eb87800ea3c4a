//! Colored covers over a window and the checks that turn them into
//! asymptotic-dimension certificates.

mod convert;
mod json;

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::coarse::GapSet;
use crate::group::{GroupElement, GroupError, GroupModel, Letter, Window};
use crate::rational::{fmt_rat, Rat};

pub use convert::{convert_a_to_b, convert_b_to_c, BFormReport, CFormReport};
pub use json::{certificate_from_json, certificate_to_json, cover_from_json, cover_to_json};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoverError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cell {0} is empty")]
    EmptyCell(usize),
    #[error("colors are not contiguous from 0: color {0} is unused")]
    ColorGap(usize),
    #[error("cover has no cells")]
    NoCells,
    #[error("precondition failed: not {scale}-disjoint (cells {cells:?}, witness {witness}); B-form count {b_count}")]
    APrecondition {
        scale: String,
        cells: (usize, usize),
        witness: String,
        b_count: usize,
    },
    #[error("precondition failed: {count} cells meet {g}·K⁻¹, more than {bound}")]
    BPrecondition { g: String, count: usize, bound: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("malformed certificate: {0}")]
    Json(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub color: usize,
    pub members: GapSet,
}

/// Colored cells declared to cover a window.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    window: Window,
    cells: Vec<Cell>,
}

impl Cover {
    /// Validates that cells are nonempty and colors run 0..n without gaps.
    pub fn new(window: Window, cells: Vec<Cell>) -> Result<Self, CoverError> {
        if cells.is_empty() {
            return Err(CoverError::NoCells);
        }
        if let Some(i) = cells.iter().position(|c| c.members.is_empty()) {
            return Err(CoverError::EmptyCell(i));
        }
        let used: BTreeSet<usize> = cells.iter().map(|c| c.color).collect();
        if let Some(gap) = (0..used.len()).find(|c| !used.contains(c)) {
            return Err(CoverError::ColorGap(gap));
        }
        Ok(Cover { window, cells })
    }

    /// Drops empty cells and renumbers colors to be contiguous, keeping order.
    pub fn compacted(window: Window, cells: Vec<Cell>) -> Result<Self, CoverError> {
        let cells: Vec<Cell> = cells.into_iter().filter(|c| !c.members.is_empty()).collect();
        let used: Vec<usize> = cells.iter().map(|c| c.color).collect::<BTreeSet<_>>().into_iter().collect();
        let cells = cells
            .into_iter()
            .map(|c| Cell { color: used.binary_search(&c.color).expect("present"), members: c.members })
            .collect();
        Self::new(window, cells)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn colors(&self) -> usize {
        self.cells.iter().map(|c| c.color + 1).max().unwrap_or(0)
    }

    /// Applies a color relabelling (must be a bijection on 0..colors).
    pub fn recolored(&self, perm: impl Fn(usize) -> usize) -> Result<Cover, CoverError> {
        let cells = self.cells.iter().map(|c| Cell { color: perm(c.color), members: c.members.clone() }).collect();
        Cover::new(self.window.clone(), cells)
    }

    /// Element → indices of the cells containing it.
    fn index(&self) -> HashMap<&GroupElement, Vec<usize>> {
        let mut idx: HashMap<&GroupElement, Vec<usize>> = HashMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            for g in &c.members {
                idx.entry(g).or_default().push(i);
            }
        }
        idx
    }

    pub fn uncovered(&self) -> Vec<GroupElement> {
        let idx = self.index();
        self.window.elements().filter(|g| !idx.contains_key(g)).cloned().collect()
    }
}

/// A cover with its scale, color budget and declared uniform bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub scale: GapSet,
    pub colors: usize,
    pub cover: Cover,
    pub uniform_bound_radius: Rat,
    pub report: Option<VerificationReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisjointnessReport {
    pub pass: bool,
    pub color: Option<usize>,
    /// Ordered pair (A, B) with (B⁻¹A) ∩ K ≠ ∅.
    pub cells: Option<(usize, usize)>,
    /// Least element of (B⁻¹A) ∩ K for that pair.
    pub witness: Option<GroupElement>,
}

/// For every color, distinct cells A, B satisfy (B⁻¹A) ∩ K = ∅.
pub fn k_disjoint_check(model: &GroupModel, cover: &Cover, k: &GapSet) -> Result<DisjointnessReport, CoverError> {
    let idx = cover.index();
    let k_inv: Vec<GroupElement> = k.iter().map(|x| model.invert(x)).collect::<Result<_, _>>()?;
    let cells = cover.cells();
    // For each cell, the least other same-color cell it clashes with.
    let clashes: Vec<Option<usize>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, a)| -> Result<Option<usize>, GroupError> {
            let mut best: Option<usize> = None;
            for x in &a.members {
                for ki in &k_inv {
                    // y = x·k⁻¹ lies in B iff k = y⁻¹x ∈ B⁻¹A.
                    let y = model.multiply(x, ki)?;
                    if let Some(js) = idx.get(&y) {
                        for &j in js {
                            if j != i && cells[j].color == a.color && best.is_none_or(|b| j < b) {
                                best = Some(j);
                            }
                        }
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<_, _>>()?;
    let Some((i, j)) = clashes.iter().enumerate().find_map(|(i, j)| j.map(|j| (i, j))) else {
        return Ok(DisjointnessReport { pass: true, color: None, cells: None, witness: None });
    };
    let diff = cells[j].members.inverse(model)?.product(model, &cells[i].members)?;
    let witness = diff.intersection(k).iter().next().cloned();
    Ok(DisjointnessReport { pass: false, color: Some(cells[i].color), cells: Some((i, j)), witness })
}

/// Largest norm over A⁻¹A, maximised over cells.
pub fn uniform_bound(model: &GroupModel, cover: &Cover) -> Result<Rat, CoverError> {
    let per_cell: Vec<Rat> = cover
        .cells()
        .par_iter()
        .map(|c| cell_diameter(model, &c.members))
        .collect::<Result<_, _>>()?;
    Ok(per_cell.into_iter().max().unwrap_or_else(Rat::zero))
}

/// max |a⁻¹b| over a, b in the cell.
pub fn cell_diameter(model: &GroupModel, cell: &GapSet) -> Result<Rat, GroupError> {
    if let Some(weights) = model.axis_weights() {
        // Weighted L1 diameter: max over sign vectors σ of the spread of σ·(w∘x).
        let n = weights.len();
        let mut best = Rat::zero();
        for mask in 0u32..(1 << n) {
            let mut lo: Option<Rat> = None;
            let mut hi: Option<Rat> = None;
            for g in cell {
                let v = g.as_vector().ok_or_else(|| model.mismatch(g))?;
                let s: Rat = (0..n)
                    .map(|i| {
                        let t = weights[i] * Rat::from_integer(v[i]);
                        if mask >> i & 1 == 1 { -t } else { t }
                    })
                    .sum();
                lo = Some(lo.map_or(s, |l| l.min(s)));
                hi = Some(hi.map_or(s, |h| h.max(s)));
            }
            if let (Some(l), Some(h)) = (lo, hi) {
                best = best.max(h - l);
            }
        }
        return Ok(best);
    }
    if let Some(weights) = model.letter_weights() {
        let mut words: Vec<&[Letter]> = Vec::with_capacity(cell.len());
        for g in cell {
            words.push(g.as_word().ok_or_else(|| model.mismatch(g))?);
        }
        words.sort();
        return Ok(tree_diameter(&words, 0, Rat::zero(), weights).1);
    }
    let items: Vec<&GroupElement> = cell.iter().collect();
    let mut best = Rat::zero();
    for (i, a) in items.iter().enumerate() {
        let a_inv = model.invert(a)?;
        for b in &items[i + 1..] {
            best = best.max(model.norm(&model.multiply(&a_inv, b)?)?);
        }
    }
    Ok(best)
}

/// (deepest member weight, diameter) for sorted reduced words sharing a
/// prefix of length `depth` and weight `base`. In a tree the distance is
/// |x| + |y| − 2|common prefix|.
fn tree_diameter(words: &[&[Letter]], depth: usize, base: Rat, weights: &[Rat]) -> (Rat, Rat) {
    let mut tips: Vec<Rat> = Vec::new();
    let mut diam = Rat::zero();
    let mut rest = words;
    if rest.first().is_some_and(|w| w.len() == depth) {
        tips.push(base);
        rest = &rest[1..];
    }
    while let Some(first) = rest.first() {
        let l = first[depth];
        let end = rest.iter().position(|w| w[depth] != l).unwrap_or(rest.len());
        let (deep, d) = tree_diameter(&rest[..end], depth + 1, base + weights[l.unsigned_abs() as usize - 1], weights);
        tips.push(deep);
        diam = diam.max(d);
        rest = &rest[end..];
    }
    tips.sort_unstable_by(|a, b| b.cmp(a));
    let deepest = tips.first().copied().unwrap_or(base);
    if tips.len() >= 2 {
        diam = diam.max(tips[0] + tips[1] - base - base);
    }
    (deepest, diam)
}

/// Largest number of cells containing a single window element.
pub fn multiplicity(cover: &Cover) -> usize {
    multiplicity_on(cover, cover.window())
}

pub(crate) fn multiplicity_on(cover: &Cover, window: &Window) -> usize {
    let idx = cover.index();
    window.elements().map(|g| idx.get(g).map_or(0, Vec::len)).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LebesgueReport {
    pub pass: bool,
    pub core_radius: Rat,
    pub tested: usize,
    /// Points g of the core for which no cell contains gK.
    pub failures: Vec<GroupElement>,
}

/// For every g in the core sub-window, some cell contains the translate gK.
pub fn lebesgue_check(model: &GroupModel, cover: &Cover, k: &GapSet) -> Result<LebesgueReport, CoverError> {
    let core_radius = core_radius(model, cover.window(), k)?;
    let core = cover.window().core(core_radius);
    let idx = cover.index();
    let core_elems: Vec<&GroupElement> = core.elements().collect();
    let mut failures: Vec<GroupElement> = core_elems
        .par_iter()
        .map(|g| -> Result<Option<GroupElement>, GroupError> {
            let translate = k.translate(model, g)?;
            let Some(first) = translate.iter().next() else { return Ok(None) };
            let found = idx
                .get(first)
                .is_some_and(|cands| cands.iter().any(|&c| translate.is_subset(&cover.cells()[c].members)));
            Ok((!found).then(|| (*g).clone()))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    failures.sort();
    Ok(LebesgueReport { pass: failures.is_empty(), core_radius, tested: core_elems.len(), failures })
}

/// Window radius minus the largest norm in K, clamped at 0.
pub fn core_radius(model: &GroupModel, window: &Window, k: &GapSet) -> Result<Rat, GroupError> {
    let r = window.radius() - model.scale_radius(k)?;
    Ok(if r < Rat::zero() { Rat::zero() } else { r })
}

/// Aggregate outcome of certificate verification.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub pass: bool,
    pub window_radius: Rat,
    pub covered: bool,
    pub uncovered: Vec<GroupElement>,
    pub colors_ok: bool,
    pub colors_used: usize,
    pub disjointness: DisjointnessReport,
    pub computed_bound: Rat,
    pub bound_ok: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pass": self.pass,
            "window_r": fmt_rat(&self.window_radius),
            "coverage": {
                "pass": self.covered,
                "uncovered": self.uncovered.iter().map(ToString::to_string).collect::<Vec<_>>(),
            },
            "colors": {"pass": self.colors_ok, "used": self.colors_used},
            "disjointness": {
                "pass": self.disjointness.pass,
                "color": self.disjointness.color,
                "cells": self.disjointness.cells.map(|(a, b)| vec![a, b]),
                "witness": self.disjointness.witness.as_ref().map(ToString::to_string),
            },
            "uniform_bound": {"pass": self.bound_ok, "computed": fmt_rat(&self.computed_bound)},
        })
    }

    /// One `check<TAB>pass<TAB>detail` row per check.
    pub fn to_tsv(&self) -> String {
        let yn = |b: bool| if b { "pass" } else { "FAIL" };
        let mut out = String::from("check\tresult\tdetail\n");
        out += &format!(
            "coverage\t{}\twindow_r={} uncovered={}\n",
            yn(self.covered),
            fmt_rat(&self.window_radius),
            self.uncovered.len()
        );
        out += &format!("colors\t{}\tused={}\n", yn(self.colors_ok), self.colors_used);
        let d = &self.disjointness;
        let detail = match (&d.cells, &d.witness) {
            (Some((a, b)), Some(w)) => format!("color={} cells={a},{b} witness={w}", d.color.unwrap_or(0)),
            _ => "-".into(),
        };
        out += &format!("disjointness\t{}\t{detail}\n", yn(d.pass));
        out += &format!("uniform_bound\t{}\tcomputed={}\n", yn(self.bound_ok), fmt_rat(&self.computed_bound));
        out += &format!("certificate\t{}\t-\n", yn(self.pass));
        out
    }
}

/// Coverage, per-color K-disjointness and the declared uniform bound.
pub fn verify_certificate(model: &GroupModel, cert: &Certificate) -> Result<VerificationReport, CoverError> {
    let mut uncovered = cert.cover.uncovered();
    let covered = uncovered.is_empty();
    uncovered.truncate(16);
    let colors_used = cert.cover.colors();
    let colors_ok = colors_used <= cert.colors;
    let disjointness = k_disjoint_check(model, &cert.cover, &cert.scale)?;
    let computed_bound = uniform_bound(model, &cert.cover)?;
    let bound_ok = computed_bound <= cert.uniform_bound_radius;
    Ok(VerificationReport {
        pass: covered && colors_ok && disjointness.pass && bound_ok,
        window_radius: cert.cover.window().radius(),
        covered,
        uncovered,
        colors_ok,
        colors_used,
        disjointness,
        computed_bound,
        bound_ok,
    })
}

impl Certificate {
    /// Verifies and stores the report.
    pub fn verified(mut self, model: &GroupModel) -> Result<Self, CoverError> {
        self.report = Some(verify_certificate(model, &self)?);
        Ok(self)
    }

    pub fn passes(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.pass)
    }
}
