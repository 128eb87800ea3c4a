use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::element::{invert_word, push_reduced, GroupElement, Letter};
use super::hom::GroupHom;
use super::norm::{detect_shape, NormShape};
use super::GroupError;
use crate::rational::{fmt_rat, parse_rat, Rat};

/// Resource limits for ball enumeration and uniform-cost search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub ball_cap: usize,
    pub search_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ball_cap: 1_000_000,
            search_cap: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    Cyclic { order: u64 },
    /// ℤ[1/2] truncated to generators ±2⁻ᵏ, 0 ≤ k ≤ `max_exponent`.
    Dyadic { max_exponent: u32 },
    Product { factors: Vec<GroupModel> },
    /// The image of a homomorphism, i.e. the quotient of its source by the
    /// kernel. Elements are target elements; generators are images of the
    /// source generators, so the word norm is the quotient norm.
    Image { hom: Box<GroupHom> },
}

/// Symmetric, identity-free list of weighted generators.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGeneratingSet {
    entries: Vec<(GroupElement, Rat)>,
}

impl WeightedGeneratingSet {
    pub fn entries(&self) -> &[(GroupElement, Rat)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight_of(&self, g: &GroupElement) -> Option<Rat> {
        self.entries.iter().find(|(s, _)| s == g).map(|(_, w)| *w)
    }
}

#[derive(Clone, Debug)]
pub struct GroupModel {
    kind: GroupKind,
    generators: WeightedGeneratingSet,
    shape: Option<NormShape>,
    limits: Limits,
}

impl PartialEq for GroupModel {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.generators == other.generators
    }
}

impl GroupModel {
    pub fn free_abelian(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                (GroupElement::Vector(v), Rat::one())
            })
            .collect();
        Self::from_parts(GroupKind::FreeAbelian { rank }, gens).expect("standard basis")
    }

    pub fn integers() -> Self {
        Self::free_abelian(1)
    }

    pub fn free(rank: usize) -> Self {
        assert!(rank <= 26, "free groups are limited to 26 generators");
        let gens = (1..=rank as Letter)
            .map(|l| (GroupElement::Word(vec![l]), Rat::one()))
            .collect();
        Self::from_parts(GroupKind::Free { rank }, gens).expect("standard letters")
    }

    pub fn cyclic(order: u64) -> Self {
        assert!(order >= 1, "cyclic group order must be positive");
        let gens = if order == 1 {
            vec![]
        } else {
            vec![(GroupElement::Residue(1), Rat::one())]
        };
        Self::from_parts(GroupKind::Cyclic { order }, gens).expect("standard generator")
    }

    /// The trivial group, as ℤ/1.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Truncated ℤ[1/2] with generators ±2⁻ᵏ of weight k+1.
    pub fn dyadic(max_exponent: u32) -> Self {
        assert!(max_exponent <= 40, "dyadic truncation exponent too large");
        let gens = (0..=max_exponent)
            .map(|k| {
                (
                    GroupElement::Dyadic(Rat::new(1, 1i64 << k)),
                    Rat::from_integer(k as i64 + 1),
                )
            })
            .collect();
        Self::from_parts(GroupKind::Dyadic { max_exponent }, gens).expect("standard dyadic")
    }

    /// Direct product with the union of the embedded factor generating sets.
    pub fn product(factors: Vec<GroupModel>) -> Self {
        let ids: Vec<GroupElement> = factors.iter().map(GroupModel::identity).collect();
        let mut gens = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for (s, w) in f.generators.entries() {
                let mut parts = ids.clone();
                parts[i] = s.clone();
                gens.push((GroupElement::Tuple(parts), *w));
            }
        }
        Self::from_parts(GroupKind::Product { factors }, gens).expect("embedded factor generators")
    }

    /// Image of `hom` with generators φ(s), keeping the minimal weight per image.
    pub fn image(hom: GroupHom) -> Result<Self, GroupError> {
        let mut best: BTreeMap<GroupElement, Rat> = BTreeMap::new();
        let target_id = hom.target().identity();
        for (s, w) in hom.source().generators().entries() {
            let img = hom.evaluate(s)?;
            if img == target_id {
                continue;
            }
            let slot = best.entry(img).or_insert(*w);
            if *w < *slot {
                *slot = *w;
            }
        }
        let limits = hom.source().limits;
        let gens = best.into_iter().collect();
        Ok(Self::from_parts(GroupKind::Image { hom: Box::new(hom) }, gens)?.with_limits(limits))
    }

    /// Replaces the generating set. Missing inverses are added with the same
    /// weight; the identity and non-positive weights are rejected.
    pub fn with_generators(&self, entries: Vec<(GroupElement, Rat)>) -> Result<Self, GroupError> {
        let mut m = Self::from_parts(self.kind.clone(), entries)?;
        m.limits = self.limits;
        Ok(m)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    fn from_parts(kind: GroupKind, entries: Vec<(GroupElement, Rat)>) -> Result<Self, GroupError> {
        let mut model = GroupModel {
            kind,
            generators: WeightedGeneratingSet { entries: vec![] },
            shape: None,
            limits: Limits::default(),
        };
        let id = model.identity();
        let mut table: BTreeMap<GroupElement, Rat> = BTreeMap::new();
        for (g, w) in entries {
            if !w.is_positive() {
                return Err(GroupError::InvalidGenerators(format!(
                    "weight {} of `{g}` is not positive",
                    fmt_rat(&w)
                )));
            }
            if !model.belongs(&g) {
                return Err(model.mismatch(&g));
            }
            if g == id {
                return Err(GroupError::InvalidGenerators(
                    "the identity is never a generator".into(),
                ));
            }
            let inv = model.invert(&g)?;
            for e in [g, inv] {
                match table.get(&e) {
                    Some(prev) if *prev != w => {
                        return Err(GroupError::InvalidGenerators(format!(
                            "`{e}` listed with weights {} and {}",
                            fmt_rat(prev),
                            fmt_rat(&w)
                        )))
                    }
                    _ => {
                        table.insert(e, w);
                    }
                }
            }
        }
        let mut entries: Vec<(GroupElement, Rat)> = table.into_iter().collect();
        entries.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        model.generators = WeightedGeneratingSet { entries };
        model.shape = detect_shape(&model);
        Ok(model)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &WeightedGeneratingSet {
        &self.generators
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub(crate) fn shape(&self) -> Option<&NormShape> {
        self.shape.as_ref()
    }

    /// The model whose element representation and operations this model uses.
    pub fn carrier(&self) -> &GroupModel {
        match &self.kind {
            GroupKind::Image { hom } => hom.target().carrier(),
            _ => self,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            GroupKind::FreeAbelian { rank: 1 } => "Z".into(),
            GroupKind::FreeAbelian { rank } => format!("Z^{rank}"),
            GroupKind::Free { rank } => format!("F{rank}"),
            GroupKind::Cyclic { order } => format!("Z/{order}"),
            GroupKind::Dyadic { max_exponent } => format!("Dyadic({max_exponent})"),
            GroupKind::Product { factors } => factors
                .iter()
                .map(GroupModel::describe)
                .collect::<Vec<_>>()
                .join(" x "),
            GroupKind::Image { hom } => format!(
                "image({} -> {})",
                hom.source().describe(),
                hom.target().describe()
            ),
        }
    }

    /// Group order when it is finite and known from the kind.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            GroupKind::FreeAbelian { rank: 0 } | GroupKind::Free { rank: 0 } => Some(1),
            GroupKind::Cyclic { order } => Some(*order),
            GroupKind::Product { factors } => factors
                .iter()
                .try_fold(1u64, |acc, f| f.order().and_then(|o| acc.checked_mul(o))),
            _ => None,
        }
    }

    pub(crate) fn mismatch(&self, g: &GroupElement) -> GroupError {
        GroupError::ModelMismatch {
            element: g.to_string(),
            model: self.describe(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.carrier().kind {
            GroupKind::FreeAbelian { rank } => GroupElement::Vector(vec![0; *rank]),
            GroupKind::Free { .. } => GroupElement::Word(vec![]),
            GroupKind::Cyclic { .. } => GroupElement::Residue(0),
            GroupKind::Dyadic { .. } => GroupElement::Dyadic(Rat::zero()),
            GroupKind::Product { factors } => {
                GroupElement::Tuple(factors.iter().map(GroupModel::identity).collect())
            }
            GroupKind::Image { .. } => unreachable!("carrier is never an image"),
        }
    }

    /// Whether `g` is a well-formed element of the carrier group.
    pub fn belongs(&self, g: &GroupElement) -> bool {
        match (&self.carrier().kind, g) {
            (GroupKind::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            (GroupKind::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupKind::Cyclic { order }, GroupElement::Residue(r)) => r < order,
            (GroupKind::Dyadic { .. }, GroupElement::Dyadic(q)) => {
                let d = *q.denom();
                d > 0 && d & (d - 1) == 0
            }
            (GroupKind::Product { factors }, GroupElement::Tuple(parts)) => {
                parts.len() == factors.len()
                    && factors.iter().zip(parts).all(|(f, p)| f.belongs(p))
            }
            _ => false,
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let c = self.carrier();
        match (&c.kind, a, b) {
            (GroupKind::FreeAbelian { rank }, GroupElement::Vector(x), GroupElement::Vector(y))
                if x.len() == *rank && y.len() == *rank =>
            {
                Ok(GroupElement::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect()))
            }
            (GroupKind::Free { .. }, GroupElement::Word(x), GroupElement::Word(y)) => {
                let mut out = Vec::with_capacity(x.len() + y.len());
                out.extend_from_slice(x);
                push_reduced(&mut out, y);
                Ok(GroupElement::Word(out))
            }
            (GroupKind::Cyclic { order }, GroupElement::Residue(x), GroupElement::Residue(y))
                if x < order && y < order =>
            {
                Ok(GroupElement::Residue(((*x as u128 + *y as u128) % *order as u128) as u64))
            }
            (GroupKind::Dyadic { .. }, GroupElement::Dyadic(x), GroupElement::Dyadic(y)) => {
                Ok(GroupElement::Dyadic(x + y))
            }
            (GroupKind::Product { factors }, GroupElement::Tuple(x), GroupElement::Tuple(y))
                if x.len() == factors.len() && y.len() == factors.len() =>
            {
                let parts = factors
                    .iter()
                    .zip(x.iter().zip(y))
                    .map(|(f, (p, q))| f.multiply(p, q))
                    .collect::<Result<_, _>>()?;
                Ok(GroupElement::Tuple(parts))
            }
            _ => Err(if c.belongs(a) { c.mismatch(b) } else { c.mismatch(a) }),
        }
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        let c = self.carrier();
        match (&c.kind, a) {
            (GroupKind::FreeAbelian { rank }, GroupElement::Vector(x)) if x.len() == *rank => {
                Ok(GroupElement::Vector(x.iter().map(|p| -p).collect()))
            }
            (GroupKind::Free { .. }, GroupElement::Word(w)) => Ok(GroupElement::Word(invert_word(w))),
            (GroupKind::Cyclic { order }, GroupElement::Residue(x)) if x < order => {
                Ok(GroupElement::Residue((order - x) % order))
            }
            (GroupKind::Dyadic { .. }, GroupElement::Dyadic(x)) => Ok(GroupElement::Dyadic(-x)),
            (GroupKind::Product { factors }, GroupElement::Tuple(x)) if x.len() == factors.len() => {
                let parts = factors
                    .iter()
                    .zip(x)
                    .map(|(f, p)| f.invert(p))
                    .collect::<Result<_, _>>()?;
                Ok(GroupElement::Tuple(parts))
            }
            _ => Err(c.mismatch(a)),
        }
    }

    /// `a⁻¹·b`, the shear of the pair `(b, a)`.
    pub fn left_quotient(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.multiply(&self.invert(a)?, b)
    }

    pub fn pow(&self, a: &GroupElement, n: i64) -> Result<GroupElement, GroupError> {
        let mut base = if n < 0 { self.invert(a)? } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Parses a normal-form string (see the crate docs for the per-kind syntax).
    pub fn parse(&self, input: &str) -> Result<GroupElement, GroupError> {
        let c = self.carrier();
        let fail = |reason: &str| GroupError::Parse {
            input: input.to_string(),
            model: self.describe(),
            reason: reason.to_string(),
        };
        let s = input.trim();
        match &c.kind {
            GroupKind::FreeAbelian { rank } => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .unwrap_or(s);
                let coords: Vec<i64> = if inner.trim().is_empty() {
                    vec![]
                } else {
                    inner
                        .split(',')
                        .map(|t| t.trim().parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| fail("expected integer coordinates"))?
                };
                if coords.len() != *rank {
                    return Err(fail(&format!("expected {rank} coordinates")));
                }
                Ok(GroupElement::Vector(coords))
            }
            GroupKind::Free { rank } => {
                if s == "1" || s.is_empty() {
                    return Ok(GroupElement::Word(vec![]));
                }
                let mut letters = Vec::with_capacity(s.len());
                for ch in s.chars() {
                    let l = match ch {
                        'a'..='z' => (ch as u8 - b'a' + 1) as Letter,
                        'A'..='Z' => -((ch as u8 - b'A' + 1) as Letter),
                        _ => return Err(fail("letters must be a..z or A..Z")),
                    };
                    if l.unsigned_abs() as usize > *rank {
                        return Err(fail("letter outside the generator range"));
                    }
                    letters.push(l);
                }
                Ok(GroupElement::word(&letters))
            }
            GroupKind::Cyclic { order } => {
                let v: i128 = s.parse().map_err(|_| fail("expected an integer residue"))?;
                Ok(GroupElement::Residue(v.rem_euclid(*order as i128) as u64))
            }
            GroupKind::Dyadic { .. } => {
                let q = parse_rat(s).map_err(|_| fail("expected a rational p/2^k"))?;
                let d = *q.denom();
                if d & (d - 1) != 0 {
                    return Err(fail("denominator is not a power of two"));
                }
                Ok(GroupElement::Dyadic(q))
            }
            GroupKind::Product { factors } => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| fail("product elements are written [x;y;...]"))?;
                let pieces = split_top_level(inner);
                if pieces.len() != factors.len() {
                    return Err(fail(&format!("expected {} components", factors.len())));
                }
                let parts = factors
                    .iter()
                    .zip(pieces)
                    .map(|(f, p)| f.parse(p))
                    .collect::<Result<_, _>>()?;
                Ok(GroupElement::Tuple(parts))
            }
            GroupKind::Image { .. } => unreachable!("carrier is never an image"),
        }
    }

    pub fn format(&self, g: &GroupElement) -> String {
        g.to_string()
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
