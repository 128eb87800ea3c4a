//! Weighted word norms: exact uniform-cost search, closed forms for the
//! standard generating sets, and ball enumeration.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use indexmap::IndexMap;
use num_traits::{Signed, Zero};

use super::element::GroupElement;
use super::model::{GroupKind, GroupModel};
use super::subgroup::Subgroup;
use super::GroupError;
use crate::rational::{fmt_rat, Rat};

/// Closed-form norm available for a recognised generating set.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum NormShape {
    /// ℤⁿ generated by ±eᵢ with per-axis weights.
    AxisL1(Vec<Rat>),
    /// F_k generated by its letters with per-letter weights.
    FreeLetters(Vec<Rat>),
    Cyclic { order: u64, weight: Rat },
    /// Truncated dyadics with the standard generators ±2⁻ᵏ of weight k+1.
    Dyadic { max_exponent: u32 },
    Product(Vec<NormShape>),
}

pub(crate) fn detect_shape(model: &GroupModel) -> Option<NormShape> {
    let gens = model.generators().entries();
    match model.kind() {
        GroupKind::FreeAbelian { rank } => {
            let mut weights: Vec<Option<Rat>> = vec![None; *rank];
            for (g, w) in gens {
                let v = g.as_vector()?;
                let mut nz = v.iter().enumerate().filter(|(_, x)| **x != 0);
                let (i, x) = nz.next()?;
                if nz.next().is_some() || x.abs() != 1 {
                    return None;
                }
                weights[i] = Some(*w);
            }
            weights.into_iter().collect::<Option<Vec<_>>>().map(NormShape::AxisL1)
        }
        GroupKind::Free { rank } => {
            let mut weights: Vec<Option<Rat>> = vec![None; *rank];
            for (g, w) in gens {
                match g.as_word()? {
                    [l] => weights[l.unsigned_abs() as usize - 1] = Some(*w),
                    _ => return None,
                }
            }
            weights.into_iter().collect::<Option<Vec<_>>>().map(NormShape::FreeLetters)
        }
        GroupKind::Cyclic { order } => {
            if *order == 1 {
                return Some(NormShape::Cyclic { order: 1, weight: Rat::zero() });
            }
            let expected = if *order == 2 { 1 } else { 2 };
            if gens.len() != expected {
                return None;
            }
            gens.iter()
                .all(|(g, _)| matches!(g, GroupElement::Residue(r) if *r == 1 || *r == order - 1))
                .then(|| NormShape::Cyclic { order: *order, weight: gens[0].1 })
        }
        GroupKind::Dyadic { max_exponent } => {
            if gens.len() != 2 * (*max_exponent as usize + 1) {
                return None;
            }
            let standard = gens.iter().all(|(g, w)| match g {
                GroupElement::Dyadic(q) => {
                    let d = *q.denom();
                    q.numer().abs() == 1
                        && d.count_ones() == 1
                        && d.trailing_zeros() <= *max_exponent
                        && *w == Rat::from_integer(d.trailing_zeros() as i64 + 1)
                }
                _ => false,
            });
            standard.then_some(NormShape::Dyadic { max_exponent: *max_exponent })
        }
        GroupKind::Product { factors } => {
            let ids: Vec<GroupElement> = factors.iter().map(GroupModel::identity).collect();
            let mut per_factor: Vec<Vec<(GroupElement, Rat)>> = vec![vec![]; factors.len()];
            for (g, w) in gens {
                let GroupElement::Tuple(parts) = g else { return None };
                let mut moved = parts.iter().zip(&ids).enumerate().filter(|(_, (p, e))| p != e);
                let (i, (p, _)) = moved.next()?;
                if moved.next().is_some() {
                    return None;
                }
                per_factor[i].push(((*p).clone(), *w));
            }
            let shapes = factors
                .iter()
                .zip(per_factor)
                .map(|(f, list)| f.with_generators(list).ok().and_then(|m| m.shape().cloned()))
                .collect::<Option<Vec<_>>>()?;
            Some(NormShape::Product(shapes))
        }
        GroupKind::Image { .. } => None,
    }
}

impl NormShape {
    /// `None` when the element is not generated (or has the wrong shape).
    fn eval(&self, g: &GroupElement) -> Option<Rat> {
        match (self, g) {
            (NormShape::AxisL1(w), GroupElement::Vector(v)) => Some(
                w.iter()
                    .zip(v)
                    .map(|(w, x)| *w * Rat::from_integer(x.abs()))
                    .sum(),
            ),
            (NormShape::FreeLetters(w), GroupElement::Word(letters)) => {
                Some(letters.iter().map(|l| w[l.unsigned_abs() as usize - 1]).sum())
            }
            (NormShape::Cyclic { order, weight }, GroupElement::Residue(r)) => {
                let steps = (*r).min(order - r);
                Some(*weight * Rat::from_integer(steps as i64))
            }
            (NormShape::Dyadic { max_exponent }, GroupElement::Dyadic(q)) => {
                dyadic_cost(q, *max_exponent)
            }
            (NormShape::Product(shapes), GroupElement::Tuple(parts)) => shapes
                .iter()
                .zip(parts)
                .map(|(s, p)| s.eval(p))
                .sum::<Option<Rat>>(),
            _ => None,
        }
    }
}

/// Minimal cost of writing `q` as Σ cₖ 2⁻ᵏ with cost Σ |cₖ|(k+1).
///
/// Two copies of 2⁻ᵏ (cost 2k+2) are never cheaper than one 2⁻⁽ᵏ⁻¹⁾ (cost k),
/// so |cₖ| ≤ 1 for k ≥ 1 and the digits are fixed by parity up to a carry.
fn dyadic_cost(q: &Rat, max_exponent: u32) -> Option<Rat> {
    let d = *q.denom();
    let full = 1i64.checked_shl(max_exponent)?;
    if d > full {
        return None;
    }
    let t = q.numer().checked_mul(full / d)?;
    let mut states: BTreeMap<i64, i64> = BTreeMap::from([(t, 0)]);
    for level in (1..=max_exponent as i64).rev() {
        let mut next: BTreeMap<i64, i64> = BTreeMap::new();
        for (v, c) in states {
            let options: &[(i64, i64)] = if v.rem_euclid(2) == 0 {
                &[(v / 2, c)]
            } else {
                &[((v - 1) / 2, c + level + 1), ((v + 1) / 2, c + level + 1)]
            };
            for &(nv, nc) in options {
                let slot = next.entry(nv).or_insert(nc);
                *slot = (*slot).min(nc);
            }
        }
        states = next;
    }
    states
        .into_iter()
        .map(|(v, c)| c + v.abs())
        .min()
        .map(Rat::from_integer)
}

/// Finite ball `{g : |g| ≤ radius}` with exact norms, sorted by (norm, normal form).
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    radius: Rat,
    elements: IndexMap<GroupElement, Rat>,
    /// True when this is a complete ball of the model.
    full_ball: bool,
}

impl Window {
    /// Builds a window from explicit (element, norm) data. Entries above the
    /// radius are dropped.
    pub fn from_entries(radius: Rat, entries: impl IntoIterator<Item = (GroupElement, Rat)>) -> Self {
        let mut v: Vec<(GroupElement, Rat)> = entries.into_iter().filter(|(_, n)| *n <= radius).collect();
        v.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        v.dedup_by(|a, b| a.0 == b.0);
        Window { radius, elements: v.into_iter().collect(), full_ball: false }
    }

    pub fn radius(&self) -> Rat {
        self.radius
    }

    /// Whether the window is a complete ball rather than a subset of one.
    pub fn is_full_ball(&self) -> bool {
        self.full_ball
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains_key(g)
    }

    pub fn norm_of(&self, g: &GroupElement) -> Option<Rat> {
        self.elements.get(g).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Rat)> {
        self.elements.iter()
    }

    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.keys()
    }

    pub fn max_norm(&self) -> Rat {
        self.elements.values().copied().max().unwrap_or_else(Rat::zero)
    }

    /// Sub-window of elements with norm ≤ `radius` (clamped at 0).
    pub fn core(&self, radius: Rat) -> Window {
        let radius = if radius.is_negative() { Rat::zero() } else { radius };
        Window {
            radius,
            elements: self
                .elements
                .iter()
                .take_while(|(_, n)| **n <= radius)
                .map(|(g, n)| (g.clone(), *n))
                .collect(),
            full_ball: self.full_ball,
        }
    }

    /// Elements satisfying `keep`, radius unchanged.
    pub fn filter(&self, mut keep: impl FnMut(&GroupElement) -> bool) -> Window {
        Window {
            radius: self.radius,
            elements: self
                .elements
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, n)| (g.clone(), *n))
                .collect(),
            full_ball: false,
        }
    }
}

impl GroupModel {
    /// Word norm, using a closed form when the generating set is recognised
    /// and uniform-cost search otherwise.
    pub fn norm(&self, g: &GroupElement) -> Result<Rat, GroupError> {
        if !self.belongs(g) {
            return Err(self.mismatch(g));
        }
        match self.shape() {
            Some(shape) => shape.eval(g).ok_or_else(|| GroupError::NotGenerated {
                element: g.to_string(),
                model: self.describe(),
            }),
            None => self.weighted_norm(g),
        }
    }

    /// Word norm by exact uniform-cost search over normal forms.
    ///
    /// Elements outside the generated subgroup are reported as `NotGenerated`
    /// whenever membership is decidable; otherwise an exhausted budget is
    /// reported as `Budget`.
    pub fn weighted_norm(&self, g: &GroupElement) -> Result<Rat, GroupError> {
        if !self.belongs(g) {
            return Err(self.mismatch(g));
        }
        let not_generated = || GroupError::NotGenerated {
            element: g.to_string(),
            model: self.describe(),
        };
        let gens: Vec<GroupElement> = self.generators().entries().iter().map(|(s, _)| s.clone()).collect();
        if let Ok(false) = Subgroup::Generated(gens).contains(self.carrier(), g) {
            return Err(not_generated());
        }
        let id = self.identity();
        let mut best: HashMap<GroupElement, Rat> = HashMap::from([(id.clone(), Rat::zero())]);
        let mut heap = BinaryHeap::from([Reverse((Rat::zero(), id))]);
        let mut expansions = 0usize;
        while let Some(Reverse((d, x))) = heap.pop() {
            if best.get(&x).is_some_and(|b| *b < d) {
                continue;
            }
            if x == *g {
                return Ok(d);
            }
            expansions += 1;
            if expansions > self.limits().search_cap {
                return Err(GroupError::Budget {
                    what: format!("norm of `{g}` in {}", self.describe()),
                    budget: self.limits().search_cap,
                });
            }
            for (s, w) in self.generators().entries() {
                let y = self.multiply(&x, s)?;
                let nd = d + w;
                if best.get(&y).is_none_or(|b| nd < *b) {
                    best.insert(y.clone(), nd);
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        Err(not_generated())
    }

    /// Closed ball of radius `r` around the identity.
    pub fn ball(&self, r: Rat) -> Result<Window, GroupError> {
        if r.is_negative() {
            return Err(GroupError::Config(format!("negative radius {}", fmt_rat(&r))));
        }
        let cap = self.limits().ball_cap;
        let id = self.identity();
        let mut best: HashMap<GroupElement, Rat> = HashMap::from([(id.clone(), Rat::zero())]);
        let mut settled: Vec<(GroupElement, Rat)> = Vec::new();
        let mut heap = BinaryHeap::from([Reverse((Rat::zero(), id))]);
        while let Some(Reverse((d, x))) = heap.pop() {
            if best.get(&x).is_some_and(|b| *b < d) {
                continue;
            }
            for (s, w) in self.generators().entries() {
                let nd = d + w;
                if nd > r {
                    // Generators are sorted by weight.
                    break;
                }
                let y = self.multiply(&x, s)?;
                if best.get(&y).is_none_or(|b| nd < *b) {
                    best.insert(y.clone(), nd);
                    if best.len() > cap {
                        return Err(GroupError::ResourceLimit { radius: fmt_rat(&r), cap });
                    }
                    heap.push(Reverse((nd, y)));
                }
            }
            settled.push((x, d));
        }
        let mut w = Window::from_entries(r, settled);
        w.full_ball = true;
        Ok(w)
    }

    /// Per-axis weights when the norm is a weighted L1 norm on ℤⁿ.
    pub(crate) fn axis_weights(&self) -> Option<&[Rat]> {
        match self.shape() {
            Some(NormShape::AxisL1(w)) => Some(w),
            _ => None,
        }
    }

    /// Per-letter weights when the norm is a weighted length on a free group.
    pub(crate) fn letter_weights(&self) -> Option<&[Rat]> {
        match self.shape() {
            Some(NormShape::FreeLetters(w)) => Some(w),
            _ => None,
        }
    }

    /// Largest norm among `elements`; 0 for the empty set.
    pub fn scale_radius<'a>(&self, elements: impl IntoIterator<Item = &'a GroupElement>) -> Result<Rat, GroupError> {
        let mut m = Rat::zero();
        for g in elements {
            m = m.max(self.norm(g)?);
        }
        Ok(m)
    }
}
