use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{CoarseError, GapSet};
use crate::group::{GroupElement, GroupError, GroupHom, GroupModel, Subgroup, Window};
use crate::rational::{fmt_rat, parse_rat, Rat};

/// How the members of a generating family are described.
#[derive(Clone, Debug, PartialEq)]
pub enum Descriptor {
    /// All balls B(r) of the word norm.
    NormBounded,
    /// All finite subsets.
    CardinalityBounded,
    /// A finite list of members.
    Explicit(Vec<GapSet>),
}

/// A generating family on a group, with membership in its completion
/// (the downward closure) decided per descriptor.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyView {
    model: GroupModel,
    descriptor: Descriptor,
    /// Members are intersected with each of these subgroups.
    restrictions: Vec<Subgroup>,
    /// Set when members are truncations of infinite sets to a window.
    window_radius: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Contained in the ball of this radius.
    Radius(Rat),
    /// A finite set, and the family contains every finite set.
    Finite,
    /// Contained in the explicit member with this index.
    Member(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<Witness>,
    /// First element that rules out membership, if any.
    pub obstruction: Option<GroupElement>,
}

impl Membership {
    fn yes(w: Witness) -> Self {
        Membership { member: true, witness: Some(w), obstruction: None }
    }

    fn no(obstruction: Option<GroupElement>) -> Self {
        Membership { member: false, witness: None, obstruction }
    }
}

/// Outcome of a connectedness check, valid on the window only.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectedReport {
    pub connected: bool,
    pub window_radius: Rat,
    pub uncovered: Vec<GroupElement>,
}

impl FamilyView {
    pub fn norm_bounded(model: GroupModel) -> Self {
        Self::with(model, Descriptor::NormBounded)
    }

    pub fn cardinality_bounded(model: GroupModel) -> Self {
        Self::with(model, Descriptor::CardinalityBounded)
    }

    /// Explicit members; the family needs at least one nonempty member.
    pub fn explicit(model: GroupModel, members: Vec<GapSet>) -> Result<Self, CoarseError> {
        if members.iter().all(GapSet::is_empty) {
            return Err(CoarseError::EmptyFamily("the group".into()));
        }
        for g in members.iter().flat_map(GapSet::iter) {
            if !model.belongs(g) {
                return Err(GroupError::ModelMismatch { element: g.to_string(), model: model.describe() }.into());
            }
        }
        Ok(Self::with(model, Descriptor::Explicit(members)))
    }

    fn with(model: GroupModel, descriptor: Descriptor) -> Self {
        FamilyView { model, descriptor, restrictions: vec![], window_radius: None }
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn restrictions(&self) -> &[Subgroup] {
        &self.restrictions
    }

    /// Radius of the window that truncated the members, if any.
    pub fn window_radius(&self) -> Option<Rat> {
        self.window_radius
    }

    pub fn members(&self) -> Option<&[GapSet]> {
        match &self.descriptor {
            Descriptor::Explicit(m) => Some(m),
            _ => None,
        }
    }

    fn in_restrictions(&self, g: &GroupElement) -> Result<bool, GroupError> {
        for h in &self.restrictions {
            if !h.contains(&self.model, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Is `a` contained in some member?
    pub fn completion_membership(&self, a: &GapSet) -> Result<Membership, CoarseError> {
        for g in a {
            if !self.model.belongs(g) {
                return Err(self.model.mismatch(g).into());
            }
            if !self.in_restrictions(g)? {
                return Ok(Membership::no(Some(g.clone())));
            }
        }
        match &self.descriptor {
            Descriptor::NormBounded => {
                let mut r = Rat::zero();
                for g in a {
                    match self.model.norm(g) {
                        Ok(n) => r = r.max(n),
                        Err(GroupError::NotGenerated { .. }) => return Ok(Membership::no(Some(g.clone()))),
                        Err(e) => return Err(e.into()),
                    }
                }
                Ok(Membership::yes(Witness::Radius(r)))
            }
            Descriptor::CardinalityBounded => {
                for g in a {
                    match self.model.norm(g) {
                        Ok(_) => {}
                        Err(GroupError::NotGenerated { .. }) => return Ok(Membership::no(Some(g.clone()))),
                        Err(e) => return Err(e.into()),
                    }
                }
                Ok(Membership::yes(Witness::Finite))
            }
            Descriptor::Explicit(members) => Ok(members
                .iter()
                .position(|m| a.is_subset(m))
                .map_or_else(|| Membership::no(None), |i| Membership::yes(Witness::Member(i)))),
        }
    }

    pub fn contains(&self, a: &GapSet) -> Result<bool, CoarseError> {
        Ok(self.completion_membership(a)?.member)
    }

    /// B is bounded iff B⁻¹B lies in the completion.
    pub fn is_bounded(&self, b: &GapSet) -> Result<bool, CoarseError> {
        self.contains(&b.difference_set(&self.model)?)
    }

    /// Every window element lies in some member.
    pub fn is_connected(&self, window: &Window) -> Result<ConnectedReport, CoarseError> {
        let mut uncovered = Vec::new();
        for g in window.elements() {
            if !self.contains(&GapSet::singleton(g.clone()))? {
                uncovered.push(g.clone());
            }
        }
        Ok(ConnectedReport { connected: uncovered.is_empty(), window_radius: window.radius(), uncovered })
    }

    /// Members intersected with `h`. For explicit members the non-emptiness
    /// requirement is checked exactly; for truncated members it is a window
    /// check only.
    pub fn restrict_family(&self, h: &Subgroup) -> Result<FamilyView, CoarseError> {
        let mut out = self.clone();
        match &self.descriptor {
            Descriptor::NormBounded | Descriptor::CardinalityBounded => {
                out.restrictions.push(h.clone());
            }
            Descriptor::Explicit(members) => {
                let mut kept = Vec::new();
                for m in members {
                    let mut cut = GapSet::new();
                    for g in m {
                        if h.contains(&self.model, g)? {
                            cut.insert(g.clone());
                        }
                    }
                    if !cut.is_empty() {
                        kept.push(cut);
                    }
                }
                if kept.is_empty() {
                    return Err(CoarseError::EmptyFamily(h.describe()));
                }
                out.descriptor = Descriptor::Explicit(kept);
                out.restrictions.push(h.clone());
            }
        }
        Ok(out)
    }

    /// The family of images φ(A). Norm-bounded families map to the balls of
    /// the quotient norm on the image.
    pub fn pushforward(&self, phi: &GroupHom) -> Result<FamilyView, CoarseError> {
        if *phi.source() != self.model {
            return Err(CoarseError::Unsupported("homomorphism source differs from the family's group".into()));
        }
        match &self.descriptor {
            Descriptor::NormBounded | Descriptor::CardinalityBounded => {
                if !self.restrictions.is_empty() {
                    return Err(CoarseError::Unsupported("pushforward of a restricted norm family".into()));
                }
                let image = GroupModel::image(phi.clone())?;
                Ok(Self::with(image, self.descriptor.clone()))
            }
            Descriptor::Explicit(members) => {
                let imgs = members
                    .iter()
                    .map(|m| m.iter().map(|g| phi.evaluate(g)).collect::<Result<GapSet, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let mut out = Self::with(phi.target().clone(), Descriptor::Explicit(imgs));
                out.window_radius = self.window_radius;
                Ok(out)
            }
        }
    }

    /// The family {NA} for a normal subgroup N, with members truncated to the window.
    pub fn enlarge_by_normal(&self, n: &Subgroup, window: &Window) -> Result<FamilyView, CoarseError> {
        if matches!(n, Subgroup::Trivial) {
            return Ok(self.clone());
        }
        if let Some((x, g)) = n.normality_witness(&self.model, window, window)? {
            return Err(CoarseError::NotNormal { n: x.to_string(), g: g.to_string() });
        }
        let keys = CosetIndex::new(&self.model, n, window)?;
        let members = match &self.descriptor {
            Descriptor::Explicit(members) => members
                .iter()
                .map(|a| keys.saturate(&self.model, n, a, window))
                .collect::<Result<Vec<_>, _>>()?,
            Descriptor::NormBounded => {
                // N·B(s) ∩ W = {x ∈ W : the coset Nx meets B(s)}.
                let mut depth: BTreeMap<usize, Rat> = BTreeMap::new();
                for (g, norm) in window.iter() {
                    let c = keys.class_of(g);
                    let slot = depth.entry(c).or_insert(*norm);
                    *slot = (*slot).min(*norm);
                }
                let levels: BTreeSet<Rat> = depth.values().copied().collect();
                levels
                    .iter()
                    .map(|s| {
                        window
                            .elements()
                            .filter(|g| depth[&keys.class_of(g)] <= *s)
                            .cloned()
                            .collect::<GapSet>()
                    })
                    .collect()
            }
            Descriptor::CardinalityBounded => {
                return Err(CoarseError::Unsupported(
                    "normal enlargement of the finite-set family".into(),
                ))
            }
        };
        let mut out = Self::with(self.model.clone(), Descriptor::Explicit(members));
        out.restrictions = self.restrictions.clone();
        out.window_radius = Some(window.radius());
        Ok(out)
    }

    /// Explicit members with non-maximal ones removed; same completion.
    pub fn canonical_members(&self) -> Option<Vec<GapSet>> {
        let members = self.members()?;
        let mut sorted: Vec<&GapSet> = members.iter().collect();
        sorted.sort_by_key(|m| std::cmp::Reverse(m.len()));
        let mut kept: Vec<GapSet> = Vec::new();
        for m in sorted {
            if !kept.iter().any(|k| m.is_subset(k)) {
                kept.push(m.clone());
            }
        }
        kept.sort();
        Some(kept)
    }

    /// The explicit family whose members are the completion's canonical
    /// maximal sets (idempotent on explicit views).
    pub fn completed(&self) -> Option<FamilyView> {
        let mut out = self.clone();
        out.descriptor = Descriptor::Explicit(self.canonical_members()?);
        Some(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = match &self.descriptor {
            Descriptor::NormBounded => serde_json::json!({"descriptor": "norm_bounded"}),
            Descriptor::CardinalityBounded => serde_json::json!({"descriptor": "cardinality_bounded"}),
            Descriptor::Explicit(m) => serde_json::json!({
                "descriptor": "explicit",
                "members": m.iter().map(GapSet::to_json).collect::<Vec<_>>(),
            }),
        };
        if let Some(r) = self.window_radius {
            v["window_r"] = serde_json::Value::from(fmt_rat(&r));
        }
        v
    }

    pub fn from_json(model: &GroupModel, v: &serde_json::Value) -> Result<Self, CoarseError> {
        let raw: FamilyJson = serde_json::from_value(v.clone())
            .map_err(|e| GroupError::Config(format!("family view: {e}")))?;
        let mut view = match raw.descriptor.as_str() {
            "norm_bounded" => Self::norm_bounded(model.clone()),
            "cardinality_bounded" => Self::cardinality_bounded(model.clone()),
            "explicit" => {
                let members = raw
                    .members
                    .unwrap_or_default()
                    .iter()
                    .map(|m| m.iter().map(|s| model.parse(s)).collect::<Result<GapSet, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Self::explicit(model.clone(), members)?
            }
            other => {
                return Err(CoarseError::Unsupported(format!("family descriptor `{other}`")));
            }
        };
        if let Some(r) = raw.window_r {
            view.window_radius = Some(parse_rat(&r).map_err(|e| GroupError::Config(e.to_string()))?);
        }
        Ok(view)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    descriptor: String,
    #[serde(default)]
    members: Option<Vec<Vec<String>>>,
    #[serde(default)]
    window_r: Option<String>,
}

/// Partition of a window into cosets of a subgroup.
pub(crate) struct CosetIndex {
    class: std::collections::HashMap<GroupElement, usize>,
}

impl CosetIndex {
    pub(crate) fn new(model: &GroupModel, n: &Subgroup, window: &Window) -> Result<Self, GroupError> {
        let mut class = std::collections::HashMap::new();
        let mut by_key: BTreeMap<GroupElement, usize> = BTreeMap::new();
        let mut reps: Vec<GroupElement> = Vec::new();
        for g in window.elements() {
            let id = match n.coset_key(model, g)? {
                Some(k) => {
                    let next = by_key.len();
                    *by_key.entry(k).or_insert(next)
                }
                None => {
                    let mut found = None;
                    for (i, r) in reps.iter().enumerate() {
                        if n.contains(model, &model.left_quotient(r, g)?)? {
                            found = Some(i);
                            break;
                        }
                    }
                    found.unwrap_or_else(|| {
                        reps.push(g.clone());
                        reps.len() - 1
                    })
                }
            };
            class.insert(g.clone(), id);
        }
        Ok(CosetIndex { class })
    }

    pub(crate) fn class_of(&self, g: &GroupElement) -> usize {
        self.class[g]
    }

    /// NA ∩ W for an arbitrary finite A (A need not lie in W).
    fn saturate(&self, model: &GroupModel, n: &Subgroup, a: &GapSet, window: &Window) -> Result<GapSet, GroupError> {
        let mut hit: BTreeSet<usize> = BTreeSet::new();
        let mut outside: Vec<&GroupElement> = Vec::new();
        for g in a {
            match self.class.get(g) {
                Some(c) => {
                    hit.insert(*c);
                }
                None => outside.push(g),
            }
        }
        let mut out = GapSet::new();
        for g in window.elements() {
            let mut inside = hit.contains(&self.class[g]);
            if !inside {
                for x in &outside {
                    if n.contains(model, &model.left_quotient(x, g)?)? {
                        inside = true;
                        break;
                    }
                }
            }
            if inside {
                out.insert(g.clone());
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn completion_membership_examples() {
        let z = GroupModel::integers();
        let f = FamilyView::norm_bounded(z.clone());
        let m = f.completion_membership(&GapSet::parse(&z, &["-3", "5"]).unwrap()).unwrap();
        assert!(m.member);
        assert_eq!(m.witness, Some(Witness::Radius(rat(5))));

        let e = FamilyView::explicit(z.clone(), vec![GapSet::new(), GapSet::parse(&z, &["0"]).unwrap()]).unwrap();
        assert!(!e.contains(&GapSet::parse(&z, &["1"]).unwrap()).unwrap());

        let d = GroupModel::dyadic(6);
        let f = FamilyView::norm_bounded(d.clone());
        let m = f.completion_membership(&GapSet::parse(&d, &["3/4"]).unwrap()).unwrap();
        assert!(m.member);
        assert_eq!(m.witness, Some(Witness::Radius(rat(4))));
    }

    #[test]
    fn boundedness_examples() {
        let z = GroupModel::integers();
        let f = FamilyView::norm_bounded(z.clone());
        let b: GapSet = (0..=5).map(|i| GroupElement::vector([i])).collect();
        assert!(f.is_bounded(&b).unwrap());
        assert_eq!(b.difference_set(&z).unwrap().len(), 11);
        assert!(f.is_bounded(&GapSet::new()).unwrap());
        let e = FamilyView::explicit(z.clone(), vec![GapSet::parse(&z, &["0"]).unwrap()]).unwrap();
        assert!(!e.is_bounded(&GapSet::parse(&z, &["0", "7"]).unwrap()).unwrap());
    }

    #[test]
    fn connectedness_examples() {
        let z = GroupModel::integers();
        let w = z.ball(rat(10)).unwrap();
        assert!(FamilyView::norm_bounded(z.clone()).is_connected(&w).unwrap().connected);
        let e = FamilyView::explicit(z.clone(), vec![GapSet::parse(&z, &["0"]).unwrap()]).unwrap();
        let r = e.is_connected(&z.ball(rat(1)).unwrap()).unwrap();
        assert!(!r.connected);
        assert_eq!(r.uncovered.len(), 2);
        let d = GroupModel::dyadic(6);
        let r = FamilyView::norm_bounded(d.clone()).is_connected(&d.ball(rat(6)).unwrap()).unwrap();
        assert!(r.connected);
    }

    #[test]
    fn restriction_examples() {
        let z2 = GroupModel::free_abelian(2);
        let axis = Subgroup::generated_by([GroupElement::vector([1, 0])]);
        let f = FamilyView::norm_bounded(z2.clone()).restrict_family(&axis).unwrap();
        let m = f.completion_membership(&GapSet::parse(&z2, &["(-4,0)", "(2,0)"]).unwrap()).unwrap();
        assert_eq!(m.witness, Some(Witness::Radius(rat(4))));
        assert!(!f.contains(&GapSet::parse(&z2, &["(0,1)"]).unwrap()).unwrap());

        let e = FamilyView::explicit(z2.clone(), vec![GapSet::parse(&z2, &["(0,0)"]).unwrap()]).unwrap();
        let r = e.restrict_family(&axis).unwrap();
        assert_eq!(r.members().unwrap(), &[GapSet::parse(&z2, &["(0,0)"]).unwrap()]);

        let t = FamilyView::norm_bounded(z2.clone()).restrict_family(&Subgroup::Trivial).unwrap();
        assert!(t.contains(&GapSet::singleton(z2.identity())).unwrap());
        assert!(!t.contains(&GapSet::parse(&z2, &["(1,0)"]).unwrap()).unwrap());

        let e = FamilyView::explicit(z2.clone(), vec![GapSet::parse(&z2, &["(0,1)"]).unwrap()]).unwrap();
        assert!(matches!(e.restrict_family(&axis), Err(CoarseError::EmptyFamily(_))));
    }

    #[test]
    fn pushforward_examples() {
        let z2 = GroupModel::free_abelian(2);
        let z = GroupModel::integers();
        let proj = GroupHom::parse(z2.clone(), z.clone(), &["1", "0"]).unwrap();
        let f = FamilyView::norm_bounded(z2.clone()).pushforward(&proj).unwrap();
        let m = f.completion_membership(&GapSet::parse(&z, &["-3", "2"]).unwrap()).unwrap();
        assert_eq!(m.witness, Some(Witness::Radius(rat(3))));

        let f2 = GroupModel::free(2);
        let ab = GroupHom::parse(f2.clone(), z2.clone(), &["(1,0)", "(0,1)"]).unwrap();
        let e = FamilyView::explicit(f2.clone(), vec![GapSet::parse(&f2, &["a", "b"]).unwrap()]).unwrap();
        let p = e.pushforward(&ab).unwrap();
        assert_eq!(p.members().unwrap(), &[GapSet::parse(&z2, &["(1,0)", "(0,1)"]).unwrap()]);
    }

    #[test]
    fn normal_enlargement_examples() {
        let z2 = GroupModel::free_abelian(2);
        let n = Subgroup::generated_by([GroupElement::vector([1, 0])]);
        let w = z2.ball(rat(5)).unwrap();
        let e = FamilyView::explicit(
            z2.clone(),
            vec![GapSet::parse(&z2, &["(0,0)"]).unwrap(), GapSet::parse(&z2, &["(0,1)"]).unwrap()],
        )
        .unwrap();
        let big = e.enlarge_by_normal(&n, &w).unwrap();
        let line0: GapSet = (-5..=5).map(|t| GroupElement::vector([t, 0])).collect();
        let line1: GapSet = (-4..=4).map(|t| GroupElement::vector([t, 1])).collect();
        assert_eq!(big.members().unwrap(), &[line0, line1]);
        assert_eq!(big.window_radius(), Some(rat(5)));

        assert_eq!(e.enlarge_by_normal(&Subgroup::Trivial, &w).unwrap(), e);

        let f2 = GroupModel::free(2);
        let a = Subgroup::generated_by([f2.parse("a").unwrap()]);
        let w = f2.ball(rat(2)).unwrap();
        let fam = FamilyView::norm_bounded(f2.clone());
        assert!(matches!(fam.enlarge_by_normal(&a, &w), Err(CoarseError::NotNormal { .. })));
    }

    #[test]
    fn json_round_trip() {
        let z = GroupModel::integers();
        let e = FamilyView::explicit(z.clone(), vec![GapSet::parse(&z, &["0", "1"]).unwrap()]).unwrap();
        assert_eq!(FamilyView::from_json(&z, &e.to_json()).unwrap(), e);
        let n = FamilyView::norm_bounded(z.clone());
        assert_eq!(FamilyView::from_json(&z, &n.to_json()).unwrap(), n);
        assert!(FamilyView::from_json(&z, &serde_json::json!({"descriptor":"predicate"})).is_err());
    }
}
