use num_traits::Zero;

use super::element::GroupElement;
use super::model::{GroupKind, GroupModel};
use super::norm::Window;
use super::GroupError;
use crate::rational::Rat;

/// Homomorphism fixed by the images of the source's canonical generators:
/// eᵢ for ℤⁿ, the letters for F_k, 1 for ℤ/m, 2^-K for truncated dyadics,
/// and the concatenation of the factors' lists for products.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupHom {
    source: GroupModel,
    target: GroupModel,
    images: Vec<GroupElement>,
}

/// Canonical generators of a (non-image) model, in the order `GroupHom` expects.
pub fn canonical_generators(model: &GroupModel) -> Result<Vec<GroupElement>, GroupError> {
    Ok(match model.kind() {
        GroupKind::FreeAbelian { rank } => (0..*rank)
            .map(|i| {
                let mut v = vec![0; *rank];
                v[i] = 1;
                GroupElement::Vector(v)
            })
            .collect(),
        GroupKind::Free { rank } => (1..=*rank as i8).map(|l| GroupElement::Word(vec![l])).collect(),
        GroupKind::Cyclic { order } => vec![GroupElement::Residue(1 % order)],
        GroupKind::Dyadic { max_exponent } => {
            vec![GroupElement::Dyadic(Rat::new(1, 1i64 << max_exponent))]
        }
        GroupKind::Product { factors } => {
            let ids: Vec<GroupElement> = factors.iter().map(GroupModel::identity).collect();
            let mut out = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                for g in canonical_generators(f)? {
                    let mut parts = ids.clone();
                    parts[i] = g;
                    out.push(GroupElement::Tuple(parts));
                }
            }
            out
        }
        GroupKind::Image { .. } => {
            return Err(GroupError::Unsupported(
                "homomorphisms out of an image model".into(),
            ))
        }
    })
}

impl GroupHom {
    pub fn new(source: GroupModel, target: GroupModel, images: Vec<GroupElement>) -> Result<Self, GroupError> {
        let expected = canonical_generators(&source)?.len();
        if images.len() != expected {
            return Err(GroupError::NotHomomorphism(format!(
                "{} needs {expected} generator images, got {}",
                source.describe(),
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|g| !target.belongs(g)) {
            return Err(target.mismatch(bad));
        }
        if let GroupKind::Cyclic { order } = source.kind() {
            if target.pow(&images[0], *order as i64)? != target.identity() {
                return Err(GroupError::NotHomomorphism(format!(
                    "image `{}` of the generator has order not dividing {order}",
                    images[0]
                )));
            }
        }
        Ok(GroupHom { source, target, images })
    }

    /// Builds a homomorphism from images written as normal-form strings.
    pub fn parse(source: GroupModel, target: GroupModel, images: &[&str]) -> Result<Self, GroupError> {
        let imgs = images.iter().map(|s| target.parse(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, imgs)
    }

    pub fn identity(model: &GroupModel) -> Result<Self, GroupError> {
        Self::new(model.clone(), model.clone(), canonical_generators(model)?)
    }

    /// The homomorphism sending everything to the identity.
    pub fn trivial(source: GroupModel, target: GroupModel) -> Result<Self, GroupError> {
        let n = canonical_generators(&source)?.len();
        let e = target.identity();
        Self::new(source, target, vec![e; n])
    }

    pub fn source(&self) -> &GroupModel {
        &self.source
    }

    pub fn target(&self) -> &GroupModel {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn evaluate(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        if !self.source.belongs(g) {
            return Err(self.source.mismatch(g));
        }
        self.eval_in(&self.source, &self.images, g)
    }

    fn eval_in(&self, model: &GroupModel, images: &[GroupElement], g: &GroupElement) -> Result<GroupElement, GroupError> {
        let t = &self.target;
        match (model.kind(), g) {
            (GroupKind::FreeAbelian { .. }, GroupElement::Vector(v)) => {
                let mut acc = t.identity();
                for (img, x) in images.iter().zip(v) {
                    if *x != 0 {
                        acc = t.multiply(&acc, &t.pow(img, *x)?)?;
                    }
                }
                Ok(acc)
            }
            (GroupKind::Free { .. }, GroupElement::Word(w)) => {
                let mut acc = t.identity();
                for &l in w {
                    let img = &images[l.unsigned_abs() as usize - 1];
                    let step = if l > 0 { img.clone() } else { t.invert(img)? };
                    acc = t.multiply(&acc, &step)?;
                }
                Ok(acc)
            }
            (GroupKind::Cyclic { .. }, GroupElement::Residue(r)) => t.pow(&images[0], *r as i64),
            (GroupKind::Dyadic { max_exponent }, GroupElement::Dyadic(q)) => {
                let steps = *q * Rat::from_integer(1i64 << max_exponent);
                if !steps.is_integer() {
                    return Err(GroupError::NotGenerated {
                        element: g.to_string(),
                        model: model.describe(),
                    });
                }
                t.pow(&images[0], steps.to_integer())
            }
            (GroupKind::Product { factors }, GroupElement::Tuple(parts)) => {
                let mut acc = t.identity();
                let mut offset = 0;
                for (f, p) in factors.iter().zip(parts) {
                    let n = canonical_generators(f)?.len();
                    let img = self.eval_in(f, &images[offset..offset + n], p)?;
                    acc = t.multiply(&acc, &img)?;
                    offset += n;
                }
                Ok(acc)
            }
            _ => Err(model.mismatch(g)),
        }
    }

    pub fn is_in_kernel(&self, g: &GroupElement) -> Result<bool, GroupError> {
        Ok(self.evaluate(g)? == self.target.identity())
    }

    /// Checks f(xy) = f(x)f(y) for all pairs drawn from the first `limit`
    /// window elements.
    pub fn check_on_window(&self, window: &Window, limit: usize) -> Result<(), GroupError> {
        let sample: Vec<&GroupElement> = window.elements().take(limit).collect();
        let images = sample
            .iter()
            .map(|g| self.evaluate(g))
            .collect::<Result<Vec<_>, _>>()?;
        for (x, fx) in sample.iter().zip(&images) {
            for (y, fy) in sample.iter().zip(&images) {
                let lhs = self.evaluate(&self.source.multiply(x, y)?)?;
                let rhs = self.target.multiply(fx, fy)?;
                if lhs != rhs {
                    return Err(GroupError::NotHomomorphism(format!(
                        "f({x}·{y}) = {lhs} but f({x})·f({y}) = {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest norm ratio |f(s)| / |s| over generators, a Lipschitz constant.
    pub fn lipschitz_bound(&self) -> Result<Rat, GroupError> {
        let mut best = Rat::zero();
        for (s, w) in self.source.generators().entries() {
            let n = self.target.norm(&self.evaluate(s)?)?;
            best = best.max(n / w);
        }
        Ok(best)
    }
}
