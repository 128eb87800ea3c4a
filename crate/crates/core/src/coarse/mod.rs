//! Gap sets, invariant entourages via the shear map, generating families.

mod family;
mod morphism;

use std::collections::BTreeSet;


use crate::group::{GroupElement, GroupError, GroupModel, Window};

pub(crate) use family::CosetIndex;
pub use family::{ConnectedReport, Descriptor, FamilyView, Membership, Witness};
pub use morphism::{
    closeness_check, cocompact_inclusion_check, morphism_check, CocompactReport, MorphismMode, MorphismReport,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoarseError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("no member of the family meets {0}")]
    EmptyFamily(String),
    #[error("subgroup is not normal: {g}·{n}·{g}⁻¹ leaves it")]
    NotNormal { n: String, g: String },
    #[error("maps are defined on different domains: {0}")]
    DomainMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Finite subset of a group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapSet {
    elements: BTreeSet<GroupElement>,
}

impl FromIterator<GroupElement> for GapSet {
    fn from_iter<I: IntoIterator<Item = GroupElement>>(iter: I) -> Self {
        GapSet { elements: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a GapSet {
    type Item = &'a GroupElement;
    type IntoIter = std::collections::btree_set::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl GapSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(g: GroupElement) -> Self {
        [g].into_iter().collect()
    }

    /// All elements of a window.
    pub fn from_window(w: &Window) -> Self {
        w.elements().cloned().collect()
    }

    pub fn parse(model: &GroupModel, items: &[&str]) -> Result<Self, GroupError> {
        items.iter().map(|s| model.parse(s)).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn insert(&mut self, g: GroupElement) -> bool {
        self.elements.insert(g)
    }

    pub fn is_subset(&self, other: &GapSet) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn as_set(&self) -> &BTreeSet<GroupElement> {
        &self.elements
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.elements.iter().map(ToString::to_string).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.to_strings())
    }

    pub fn from_json(model: &GroupModel, v: &serde_json::Value) -> Result<Self, GroupError> {
        let items: Vec<String> =
            serde_json::from_value(v.clone()).map_err(|e| GroupError::Config(format!("gap set: {e}")))?;
        items.iter().map(|s| model.parse(s)).collect()
    }

    /// A ∪ B.
    pub fn union(&self, other: &GapSet) -> GapSet {
        self.elements.union(&other.elements).cloned().collect()
    }

    /// A ∩ B.
    pub fn intersection(&self, other: &GapSet) -> GapSet {
        self.elements.intersection(&other.elements).cloned().collect()
    }

    /// AB = {ab}.
    pub fn product(&self, model: &GroupModel, other: &GapSet) -> Result<GapSet, GroupError> {
        let mut out = GapSet::new();
        for a in self {
            for b in other {
                out.insert(model.multiply(a, b)?);
            }
        }
        Ok(out)
    }

    /// A⁻¹.
    pub fn inverse(&self, model: &GroupModel) -> Result<GapSet, GroupError> {
        self.iter().map(|a| model.invert(a)).collect()
    }

    /// A⁻¹A, the shear image of G(A×A).
    pub fn difference_set(&self, model: &GroupModel) -> Result<GapSet, GroupError> {
        self.inverse(model)?.product(model, self)
    }

    /// gA.
    pub fn translate(&self, model: &GroupModel, g: &GroupElement) -> Result<GapSet, GroupError> {
        self.iter().map(|a| model.multiply(g, a)).collect()
    }

    /// Symmetric closure with the identity adjoined.
    pub fn symmetrized(&self, model: &GroupModel) -> Result<GapSet, GroupError> {
        let mut out = self.union(&self.inverse(model)?);
        out.insert(model.identity());
        Ok(out)
    }
}

/// The shear map (x, y) ↦ y⁻¹x.
pub fn shear(model: &GroupModel, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
    model.left_quotient(y, x)
}

/// Finite set of pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EntourageSample {
    pairs: BTreeSet<(GroupElement, GroupElement)>,
}

impl FromIterator<(GroupElement, GroupElement)> for EntourageSample {
    fn from_iter<I: IntoIterator<Item = (GroupElement, GroupElement)>>(iter: I) -> Self {
        EntourageSample { pairs: iter.into_iter().collect() }
    }
}

impl EntourageSample {
    pub fn parse(model: &GroupModel, pairs: &[(&str, &str)]) -> Result<Self, GroupError> {
        pairs
            .iter()
            .map(|(x, y)| Ok((model.parse(x)?, model.parse(y)?)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(GroupElement, GroupElement)> {
        self.pairs.iter()
    }

    pub fn contains(&self, x: &GroupElement, y: &GroupElement) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn inverse(&self) -> EntourageSample {
        self.pairs.iter().map(|(x, y)| (y.clone(), x.clone())).collect()
    }

    pub fn union(&self, other: &EntourageSample) -> EntourageSample {
        self.pairs.union(&other.pairs).cloned().collect()
    }

    pub fn is_subset(&self, other: &EntourageSample) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// π(E) = {y⁻¹x : (x, y) ∈ E}.
    pub fn shear_image(&self, model: &GroupModel) -> Result<GapSet, GroupError> {
        self.pairs.iter().map(|(x, y)| shear(model, x, y)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(
            self.pairs
                .iter()
                .map(|(x, y)| vec![x.to_string(), y.to_string()])
                .collect::<Vec<_>>(),
        )
    }

    pub fn from_json(model: &GroupModel, v: &serde_json::Value) -> Result<Self, GroupError> {
        let items: Vec<(String, String)> =
            serde_json::from_value(v.clone()).map_err(|e| GroupError::Config(format!("entourage: {e}")))?;
        items
            .iter()
            .map(|(x, y)| Ok((model.parse(x)?, model.parse(y)?)))
            .collect()
    }
}

/// E ⊆ G(A×A), decided by π(E) ⊆ A⁻¹A.
pub fn entourage_membership(model: &GroupModel, e: &EntourageSample, a: &GapSet) -> Result<bool, GroupError> {
    if e.is_empty() {
        return Ok(true);
    }
    Ok(e.shear_image(model)?.is_subset(&a.difference_set(model)?))
}

/// E₁∘E₂ = {(x, z) : (x, y) ∈ E₁, (y, z) ∈ E₂}.
pub fn compose_entourages(e1: &EntourageSample, e2: &EntourageSample) -> EntourageSample {
    let mut out = EntourageSample::default();
    for (x, y) in e1.iter() {
        for (y2, z) in e2.iter() {
            if y == y2 {
                out.pairs.insert((x.clone(), z.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainmentReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub counterexample: Option<(GroupElement, GroupElement)>,
}

/// Checks G(A×A)∘G(B×B) ⊆ G(A×(AB⁻¹B)) on all triples x, y, z inside the window.
pub fn containment_lemma_check(
    model: &GroupModel,
    a: &GapSet,
    b: &GapSet,
    window: &Window,
) -> Result<ContainmentReport, GroupError> {
    let mut report = ContainmentReport { holds: true, pairs_checked: 0, counterexample: None };
    if a.is_empty() || b.is_empty() {
        return Ok(report);
    }
    let da = a.difference_set(model)?;
    let db = b.difference_set(model)?;
    let c = a.product(model, &b.inverse(model)?)?.product(model, b)?;
    // (x, z) ∈ G(A×C) iff z⁻¹x ∈ C⁻¹A.
    let allowed = c.inverse(model)?.product(model, a)?;
    let mut seen = BTreeSet::new();
    for x in window.elements() {
        for d1 in &da {
            let y = model.multiply(x, d1)?;
            if !window.contains(&y) {
                continue;
            }
            for d2 in &db {
                let z = model.multiply(&y, d2)?;
                if !window.contains(&z) || !seen.insert((x.clone(), z.clone())) {
                    continue;
                }
                report.pairs_checked += 1;
                if !allowed.contains(&shear(model, x, &z)?) {
                    report.holds = false;
                    report.counterexample = Some((x.clone(), z));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn z() -> GroupModel {
        GroupModel::integers()
    }

    #[test]
    fn shear_examples() {
        let z2 = GroupModel::free_abelian(2);
        let s = shear(&z2, &GroupElement::vector([1, 0]), &GroupElement::vector([0, 0])).unwrap();
        assert_eq!(s, GroupElement::vector([1, 0]));
        let f2 = GroupModel::free(2);
        let g = f2.parse("ab").unwrap();
        assert_eq!(shear(&f2, &g, &g).unwrap(), f2.identity());
        let s = shear(&f2, &g, &f2.parse("b").unwrap()).unwrap();
        assert_eq!(s, f2.parse("Bab").unwrap());
    }

    #[test]
    fn family_operations() {
        let m = z();
        let a = GapSet::parse(&m, &["0", "1"]).unwrap();
        let b = GapSet::parse(&m, &["0", "2"]).unwrap();
        assert_eq!(a.product(&m, &b).unwrap(), GapSet::parse(&m, &["0", "1", "2", "3"]).unwrap());
        let f2 = GroupModel::free(2);
        let a = GapSet::parse(&f2, &["a"]).unwrap();
        assert_eq!(a.inverse(&f2).unwrap(), GapSet::parse(&f2, &["A"]).unwrap());
        let z2 = GroupModel::free_abelian(2);
        let u = GapSet::parse(&z2, &["(1,0)"]).unwrap().union(&GapSet::parse(&z2, &["(0,1)"]).unwrap());
        let p = u.product(&z2, &GapSet::parse(&z2, &["(0,0)"]).unwrap()).unwrap();
        assert_eq!(p, GapSet::parse(&z2, &["(1,0)", "(0,1)"]).unwrap());
    }

    #[test]
    fn entourage_membership_examples() {
        let m = z();
        let a = GapSet::parse(&m, &["0", "1", "2"]).unwrap();
        let e = EntourageSample::parse(&m, &[("5", "3")]).unwrap();
        assert!(entourage_membership(&m, &e, &a).unwrap());
        let e = EntourageSample::parse(&m, &[("10", "0")]).unwrap();
        assert!(!entourage_membership(&m, &e, &GapSet::parse(&m, &["0", "1"]).unwrap()).unwrap());
        let e = EntourageSample::parse(&m, &[("4", "4")]).unwrap();
        assert!(entourage_membership(&m, &e, &GapSet::parse(&m, &["9"]).unwrap()).unwrap());
    }

    #[test]
    fn composition_examples() {
        let m = z();
        let e1 = EntourageSample::parse(&m, &[("2", "1"), ("3", "1")]).unwrap();
        let e2 = EntourageSample::parse(&m, &[("1", "0")]).unwrap();
        assert_eq!(
            compose_entourages(&e1, &e2),
            EntourageSample::parse(&m, &[("2", "0"), ("3", "0")]).unwrap()
        );
        assert!(compose_entourages(&e1, &EntourageSample::default()).is_empty());
    }

    #[test]
    fn containment_lemma_examples() {
        let m = z();
        let w = m.ball(rat(8)).unwrap();
        let a = GapSet::parse(&m, &["0", "1"]).unwrap();
        let b = GapSet::parse(&m, &["0", "2"]).unwrap();
        let r = containment_lemma_check(&m, &a, &b, &w).unwrap();
        assert!(r.holds && r.pairs_checked > 0);
        assert!(containment_lemma_check(&m, &GapSet::new(), &b, &w).unwrap().holds);
        let f2 = GroupModel::free(2);
        let w = f2.ball(rat(4)).unwrap();
        let a = GapSet::parse(&f2, &["a"]).unwrap();
        let b = GapSet::parse(&f2, &["b"]).unwrap();
        assert!(containment_lemma_check(&f2, &a, &b, &w).unwrap().holds);
    }

    #[test]
    fn json_round_trip() {
        let m = GroupModel::free(2);
        let e = EntourageSample::parse(&m, &[("ab", "b"), ("1", "A")]).unwrap();
        assert_eq!(EntourageSample::from_json(&m, &e.to_json()).unwrap(), e);
        let a = GapSet::parse(&m, &["ab", "1"]).unwrap();
        assert_eq!(GapSet::from_json(&m, &a.to_json()).unwrap(), a);
    }
}
