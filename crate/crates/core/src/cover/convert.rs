//! Conversions between the three equivalent forms of a dimension bound:
//! disjoint colored families (A), bounded overlap of translates (B), and
//! bounded multiplicity with a Lebesgue scale (C).

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{core_radius, k_disjoint_check, lebesgue_check, multiplicity_on, Cell, Cover, CoverError, LebesgueReport};
use crate::coarse::GapSet;
use crate::group::{GroupElement, GroupError, GroupModel};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct BFormReport {
    pub pass: bool,
    /// Allowed number of cells meeting a translate (the color count).
    pub bound: usize,
    pub max_count: usize,
    /// A core point whose translate meets `max_count` cells.
    pub worst: Option<GroupElement>,
    pub core_radius: Rat,
    pub tested: usize,
}

/// At most `bound` cells meet gK, for every g in the core sub-window.
pub fn b_form_check(model: &GroupModel, cover: &Cover, k: &GapSet, bound: usize) -> Result<BFormReport, CoverError> {
    let core_r = core_radius(model, cover.window(), k)?;
    let core = cover.window().core(core_r);
    let idx = cover.index();
    let points: Vec<&GroupElement> = core.elements().collect();
    let counts: Vec<usize> = points
        .par_iter()
        .map(|g| -> Result<usize, GroupError> {
            let mut hit: BTreeSet<usize> = BTreeSet::new();
            for x in k {
                if let Some(cells) = idx.get(&model.multiply(g, x)?) {
                    hit.extend(cells.iter().copied());
                }
            }
            Ok(hit.len())
        })
        .collect::<Result<_, _>>()?;
    let (worst, max_count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map_or((None, 0), |(i, c)| (Some(points[i].clone()), *c));
    Ok(BFormReport {
        pass: max_count <= bound,
        bound,
        max_count,
        worst,
        core_radius: core_r,
        tested: points.len(),
    })
}

/// Checks the A-form hypothesis at scale K⁻¹K and then the B-form
/// conclusion at K: each color class meets gK at most once, so at most
/// `colors` cells meet it.
pub fn convert_a_to_b(model: &GroupModel, cover: &Cover, k: &GapSet) -> Result<BFormReport, CoverError> {
    let wide = k.difference_set(model)?;
    let a_form = k_disjoint_check(model, cover, &wide)?;
    let b_form = b_form_check(model, cover, k, cover.colors())?;
    if !a_form.pass {
        return Err(CoverError::APrecondition {
            scale: "K⁻¹K".into(),
            cells: a_form.cells.unwrap_or((0, 0)),
            witness: a_form.witness.map_or_else(|| "-".into(), |w| w.to_string()),
            b_count: b_form.max_count,
        });
    }
    Ok(b_form)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CFormReport {
    pub pass: bool,
    pub multiplicity: usize,
    pub multiplicity_bound: usize,
    /// Radius of the sub-window on which multiplicity was measured.
    pub multiplicity_core_radius: Rat,
    pub lebesgue: LebesgueReport,
}

/// Thickens each cell V to VK (truncated to the window). Requires that at
/// most `colors` cells meet each gK⁻¹; then the thickened cover has
/// multiplicity at most `colors` and every gK lies in a single cell.
pub fn convert_b_to_c(model: &GroupModel, cover: &Cover, k: &GapSet) -> Result<(Cover, CFormReport), CoverError> {
    let bound = cover.colors();
    let k_inv = k.inverse(model)?;
    let pre = b_form_check(model, cover, &k_inv, bound)?;
    if !pre.pass {
        return Err(CoverError::BPrecondition {
            g: pre.worst.map_or_else(|| "-".into(), |g| g.to_string()),
            count: pre.max_count,
            bound,
        });
    }
    let window = cover.window();
    let cells: Vec<Cell> = cover
        .cells()
        .par_iter()
        .map(|c| -> Result<Cell, GroupError> {
            let thick: GapSet = c.members.product(model, k)?.iter().filter(|g| window.contains(g)).cloned().collect();
            Ok(Cell { color: c.color, members: thick })
        })
        .collect::<Result<_, _>>()?;
    let thick = Cover::compacted(window.clone(), cells)?;
    let mult_r = core_radius(model, window, &k_inv)?;
    let multiplicity = multiplicity_on(&thick, &window.core(mult_r));
    let lebesgue = lebesgue_check(model, &thick, k)?;
    let report = CFormReport {
        pass: multiplicity <= bound && lebesgue.pass,
        multiplicity,
        multiplicity_bound: bound,
        multiplicity_core_radius: mult_r,
        lebesgue,
    };
    Ok((thick, report))
}
