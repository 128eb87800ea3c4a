//! Moving certificates from a subgroup to the whole group along left
//! coset representatives.

use std::collections::HashMap;

use num_traits::Zero;

use super::{ball_set, checked, ConstructError};
use crate::coarse::{CosetIndex, GapSet};
use crate::cover::{Cell, Certificate, Cover};
use crate::group::cyclic_coordinate;
use crate::group::{GroupElement, GroupModel, Subgroup, Window};
use crate::rational::{rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetSide {
    Left,
    Right,
}

/// Left cosets zH meeting a window, each with its least-norm element
/// (ties broken by normal form) as representative.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub subgroup: Subgroup,
    pub representatives: Vec<GroupElement>,
    pub side: CosetSide,
    /// Window element → (representative index, z⁻¹x ∈ H).
    factor: HashMap<GroupElement, (usize, GroupElement)>,
    window: Window,
}

impl CosetDecomposition {
    pub fn new(model: &GroupModel, h: &Subgroup, window: &Window) -> Result<Self, ConstructError> {
        let index = CosetIndex::new(model, h, window)?;
        let mut rep_of_class: HashMap<usize, usize> = HashMap::new();
        let mut representatives = Vec::new();
        let mut factor = HashMap::new();
        // Window order is (norm, normal form), so the first element seen in
        // each class is its representative.
        for x in window.elements() {
            let class = index.class_of(x);
            let i = *rep_of_class.entry(class).or_insert_with(|| {
                representatives.push(x.clone());
                representatives.len() - 1
            });
            let h_part = model.left_quotient(&representatives[i], x)?;
            factor.insert(x.clone(), (i, h_part));
        }
        Ok(CosetDecomposition {
            subgroup: h.clone(),
            representatives,
            side: CosetSide::Left,
            factor,
            window: window.clone(),
        })
    }

    /// Uses the given representatives, which must hit every coset meeting
    /// the window exactly once.
    pub fn with_representatives(
        model: &GroupModel,
        h: &Subgroup,
        window: &Window,
        representatives: Vec<GroupElement>,
    ) -> Result<Self, ConstructError> {
        for (i, a) in representatives.iter().enumerate() {
            for b in &representatives[..i] {
                if h.contains(model, &model.left_quotient(b, a)?)? {
                    return Err(ConstructError::Precondition(format!("{a} and {b} lie in the same coset")));
                }
            }
        }
        let mut factor = HashMap::new();
        for x in window.elements() {
            let mut found = None;
            for (i, z) in representatives.iter().enumerate() {
                let h_part = model.left_quotient(z, x)?;
                if h.contains(model, &h_part)? {
                    found = Some((i, h_part));
                    break;
                }
            }
            let f = found.ok_or_else(|| ConstructError::Precondition(format!("no representative for {x}")))?;
            factor.insert(x.clone(), f);
        }
        Ok(CosetDecomposition {
            subgroup: h.clone(),
            representatives,
            side: CosetSide::Left,
            factor,
            window: window.clone(),
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// (representative, z⁻¹x) for a window element.
    pub fn factor(&self, x: &GroupElement) -> Option<(&GroupElement, &GroupElement)> {
        self.factor.get(x).map(|(i, h)| (&self.representatives[*i], h))
    }

    /// The subgroup parts z⁻¹x of all window elements, with their norms.
    pub fn subgroup_window(&self, model: &GroupModel) -> Result<Window, ConstructError> {
        let mut entries: Vec<(GroupElement, Rat)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (_, h) in self.factor.values() {
            if seen.insert(h.clone()) {
                entries.push((h.clone(), model.norm(h)?));
            }
        }
        let radius = entries.iter().map(|(_, n)| *n).max().unwrap_or_else(Rat::zero);
        Ok(Window::from_entries(radius, entries))
    }
}

/// Two-color interval certificate on the cyclic subgroup ⟨h⟩ over the
/// given window of subgroup elements. Intervals in the exponent are long
/// enough that same-color intervals stay K-disjoint, where every element
/// of K must be a power of h. The declared bound is the computed one.
pub fn subgroup_interval_certificate(
    model: &GroupModel,
    h: &GroupElement,
    k: &GapSet,
    window: &Window,
) -> Result<Certificate, ConstructError> {
    let mut reach = 1i64;
    for x in k {
        let t = cyclic_coordinate(model, h, x)?
            .ok_or_else(|| ConstructError::Precondition(format!("scale element {x} is not a power of {h}")))?;
        reach = reach.max(t.abs());
    }
    let side = 2 * reach;
    let mut cells: std::collections::BTreeMap<i64, GapSet> = std::collections::BTreeMap::new();
    for g in window.elements() {
        let t = cyclic_coordinate(model, h, g)?
            .ok_or_else(|| ConstructError::Precondition(format!("window element {g} is not a power of {h}")))?;
        cells.entry(t.div_euclid(side)).or_default().insert(g.clone());
    }
    let cells: Vec<Cell> =
        cells.into_iter().map(|(m, members)| Cell { color: m.rem_euclid(2) as usize, members }).collect();
    let cover = Cover::compacted(window.clone(), cells)?;
    let bound = crate::cover::uniform_bound(model, &cover)?;
    let cert = Certificate { scale: k.clone(), colors: 2, cover, uniform_bound_radius: bound, report: None };
    checked(model, cert, "subgroup interval cover")
}

/// Translates a certificate for H (scale K ⊆ H) over the coset
/// representatives: cells zU for every representative z and cell U,
/// truncated to the window. Colors and the declared bound carry over.
pub fn translate_certificate(
    model: &GroupModel,
    cert_h: &Certificate,
    cosets: &CosetDecomposition,
) -> Result<Certificate, ConstructError> {
    for x in &cert_h.scale {
        if !cosets.subgroup.contains(model, x)? {
            return Err(ConstructError::Precondition(format!(
                "scale element {x} lies outside {}",
                cosets.subgroup.describe()
            )));
        }
    }
    let window = cosets.window();
    let mut cells = Vec::new();
    for z in &cosets.representatives {
        for c in cert_h.cover.cells() {
            let mut members = GapSet::new();
            for u in &c.members {
                let x = model.multiply(z, u)?;
                if window.contains(&x) {
                    members.insert(x);
                }
            }
            cells.push(Cell { color: c.color, members });
        }
    }
    let cert = Certificate {
        scale: cert_h.scale.clone(),
        colors: cert_h.colors,
        cover: Cover::compacted(window.clone(), cells)?,
        uniform_bound_radius: cert_h.uniform_bound_radius,
        report: None,
    };
    checked(model, cert, "translated certificate")
}

/// Result of a subgroup-to-group transport run.
#[derive(Clone, Debug)]
pub struct TransportRun {
    pub model: GroupModel,
    pub subgroup_certificate: Certificate,
    pub cosets: CosetDecomposition,
    pub certificate: Certificate,
}

fn transport_run(
    model: GroupModel,
    h: GroupElement,
    k: GapSet,
    window_r: Rat,
    representatives: Option<Vec<GroupElement>>,
) -> Result<TransportRun, ConstructError> {
    let window = model.ball(window_r)?;
    let sub = Subgroup::generated_by([h.clone()]);
    let cosets = match representatives {
        Some(reps) => CosetDecomposition::with_representatives(&model, &sub, &window, reps)?,
        None => CosetDecomposition::new(&model, &sub, &window)?,
    };
    let h_window = cosets.subgroup_window(&model)?;
    let subgroup_certificate = subgroup_interval_certificate(&model, &h, &k, &h_window)?;
    let certificate = translate_certificate(&model, &subgroup_certificate, &cosets)?;
    Ok(TransportRun { model, subgroup_certificate, cosets, certificate })
}

/// ℤ from its subgroup 2ℤ: scale {−4, …, 4} ∩ 2ℤ, representatives {0, 1}.
pub fn even_integers_demo(window_r: i64) -> Result<TransportRun, ConstructError> {
    let z = GroupModel::integers();
    let two = GroupElement::vector([2]);
    let k: GapSet = (-2..=2).map(|t| GroupElement::vector([2 * t])).collect();
    let reps = vec![GroupElement::vector([0]), GroupElement::vector([1])];
    transport_run(z, two, k, rat(window_r), Some(reps))
}

/// Dyadic rationals with denominators up to 2^max_exponent, from the
/// cyclic subgroup ⟨2^-sub_exponent⟩ at scale ball(scale_r). The ball must
/// lie in the subgroup.
pub fn dyadic_demo(
    max_exponent: u32,
    sub_exponent: u32,
    scale_r: Rat,
    window_r: Rat,
) -> Result<TransportRun, ConstructError> {
    let model = GroupModel::dyadic(max_exponent);
    let h = GroupElement::dyadic(1, 1 << sub_exponent);
    let k = ball_set(&model, scale_r)?;
    transport_run(model, h, k, window_r, None)
}
