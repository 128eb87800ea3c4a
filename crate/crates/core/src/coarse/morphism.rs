use std::collections::BTreeMap;

use super::{shear, CoarseError, Descriptor, FamilyView, GapSet};
use crate::group::{GroupElement, GroupHom, GroupModel, Subgroup, Window};
use crate::rational::{fmt_rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismMode {
    /// Images of members are members.
    Uniform,
    /// Preimages of members are members.
    Proper,
    Embedding,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphismReport {
    pub uniform: Option<bool>,
    pub proper: Option<bool>,
    pub holds: bool,
    pub window_radius: Rat,
    /// Description of the first failing sample.
    pub witness: Option<String>,
}

/// Ball radii sampled for norm families: r/2, r/4, ... (at most four) plus
/// the least generator weight, all at most half the window radius.
fn sample_radii(model: &GroupModel, window: &Window) -> Vec<Rat> {
    let half = window.radius() / Rat::from_integer(2);
    let mut radii: Vec<Rat> = Vec::new();
    let mut s = half;
    while s > Rat::from_integer(0) && radii.len() < 4 {
        radii.push(s);
        s /= Rat::from_integer(2);
    }
    if let Some((_, w)) = model.generators().entries().first() {
        if *w <= half && !radii.contains(w) {
            radii.push(*w);
        }
    }
    radii
}

/// Sample members of a family, as subsets of `window` where the family is
/// not explicit.
fn sample_members(family: &FamilyView, window: &Window) -> Vec<(String, GapSet)> {
    match family.descriptor() {
        Descriptor::Explicit(members) => members
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("member {i}"), m.clone()))
            .collect(),
        Descriptor::NormBounded | Descriptor::CardinalityBounded => sample_radii(family.model(), window)
            .into_iter()
            .map(|s| (format!("ball of radius {}", fmt_rat(&s)), GapSet::from_window(&window.core(s))))
            .collect(),
    }
}

/// Checks coarse uniformity and/or properness of `phi` on a window of the
/// source. A preimage that reaches the window boundary counts as unbounded.
pub fn morphism_check(
    phi: &GroupHom,
    source: &FamilyView,
    target: &FamilyView,
    mode: MorphismMode,
    window: &Window,
) -> Result<MorphismReport, CoarseError> {
    let mut report = MorphismReport {
        uniform: None,
        proper: None,
        holds: true,
        window_radius: window.radius(),
        witness: None,
    };
    let tm = target.model();
    if matches!(mode, MorphismMode::Uniform | MorphismMode::Embedding) {
        let mut ok = true;
        for (label, m) in sample_members(source, window) {
            let img: GapSet = m.iter().map(|g| phi.evaluate(g)).collect::<Result<_, _>>()?;
            if !target.contains(&img)? {
                ok = false;
                report.witness = Some(format!("image of {label} is not in the target completion"));
                break;
            }
        }
        report.uniform = Some(ok);
    }
    if matches!(mode, MorphismMode::Proper | MorphismMode::Embedding) {
        let images: Vec<(GroupElement, GroupElement)> = window
            .elements()
            .map(|g| Ok((g.clone(), phi.evaluate(g)?)))
            .collect::<Result<_, CoarseError>>()?;
        let mut ok = true;
        type Member = Box<dyn Fn(&GroupElement) -> bool>;
        let target_samples: Vec<(String, Member)> = match target.descriptor() {
            Descriptor::Explicit(members) => members
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let m = m.clone();
                    (format!("member {i}"), Box::new(move |y: &GroupElement| m.contains(y)) as Member)
                })
                .collect(),
            _ => sample_radii(source.model(), window)
                .into_iter()
                .map(|radius| {
                    let tm = tm.clone();
                    (
                        format!("target ball of radius {}", fmt_rat(&radius)),
                        Box::new(move |y: &GroupElement| tm.norm(y).is_ok_and(|n| n <= radius)) as Member,
                    )
                })
                .collect(),
        };
        for (label, member) in target_samples {
            let pre: GapSet = images.iter().filter(|(_, y)| member(y)).map(|(g, _)| g.clone()).collect();
            let reaches_edge = pre.iter().any(|g| window.norm_of(g) == Some(window.radius()));
            if reaches_edge || !source.contains(&pre)? {
                ok = false;
                if report.witness.is_none() {
                    report.witness = Some(format!(
                        "preimage of {label} {}",
                        if reaches_edge { "reaches the window boundary" } else { "is not in the source completion" }
                    ));
                }
                break;
            }
        }
        report.proper = Some(ok);
    }
    report.holds = report.uniform.unwrap_or(true) && report.proper.unwrap_or(true);
    Ok(report)
}

/// Are the maps p, q close, i.e. is {(p(s), q(s))} an entourage of the
/// target structure? Decided by π(E) ⊆ A⁻¹A for some member A.
pub fn closeness_check<S: Ord + std::fmt::Debug>(
    model: &GroupModel,
    p: &BTreeMap<S, GroupElement>,
    q: &BTreeMap<S, GroupElement>,
    target: &FamilyView,
) -> Result<bool, CoarseError> {
    if p.len() != q.len() || p.keys().zip(q.keys()).any(|(a, b)| a != b) {
        let missing = p
            .keys()
            .find(|k| !q.contains_key(k))
            .or_else(|| q.keys().find(|k| !p.contains_key(k)));
        return Err(CoarseError::DomainMismatch(format!("first unmatched point {missing:?}")));
    }
    let mut d = GapSet::new();
    for (s, x) in p {
        d.insert(shear(model, x, &q[s])?);
    }
    match target.descriptor() {
        Descriptor::Explicit(members) => {
            for a in members {
                if d.is_subset(&a.difference_set(model)?) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        // Norm balls and finite sets: D ⊆ A⁻¹A for A = D ∪ {1}, itself a member.
        _ => target.contains(&d),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocompactReport {
    /// Every window element factors as h·b.
    pub factors: bool,
    /// The retraction x·b ↦ x moves points by shear values in B⁻¹.
    pub retraction_close: bool,
    pub window_radius: Rat,
    pub witness: Option<GroupElement>,
}

impl CocompactReport {
    pub fn pass(&self) -> bool {
        self.factors && self.retraction_close
    }
}

/// Checks HB ⊇ W and the closeness of the retraction onto H.
pub fn cocompact_inclusion_check(
    model: &GroupModel,
    h: &Subgroup,
    b: &GapSet,
    window: &Window,
) -> Result<CocompactReport, CoarseError> {
    let b_inv = b.inverse(model)?;
    let mut report = CocompactReport {
        factors: true,
        retraction_close: true,
        window_radius: window.radius(),
        witness: None,
    };
    for x in window.elements() {
        // The least b with x·b⁻¹ ∈ H; it depends only on the coset Hx.
        let mut chosen = None;
        for cand in b {
            let s = model.multiply(x, &model.invert(cand)?)?;
            if h.contains(model, &s)? {
                chosen = Some(s);
                break;
            }
        }
        let Some(s) = chosen else {
            report.factors = false;
            report.witness = Some(x.clone());
            return Ok(report);
        };
        // Pair (s(x), x) has shear x⁻¹·s(x) = b⁻¹.
        if !b_inv.contains(&shear(model, &s, x)?) {
            report.retraction_close = false;
            report.witness = Some(x.clone());
            return Ok(report);
        }
    }
    Ok(report)
}
