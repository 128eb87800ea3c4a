//! Subgroup descriptors with decidable membership and coset keys.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::element::{GroupElement, Letter};
use super::hom::GroupHom;
use super::model::{GroupKind, GroupModel};
use super::norm::Window;
use super::GroupError;
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum Subgroup {
    Whole,
    Trivial,
    /// Subgroup generated by finitely many elements.
    Generated(Vec<GroupElement>),
    /// Kernel of a homomorphism out of the ambient group.
    Kernel(GroupHom),
}

impl Subgroup {
    pub fn generated_by(gens: impl IntoIterator<Item = GroupElement>) -> Self {
        Subgroup::Generated(gens.into_iter().collect())
    }

    pub fn describe(&self) -> String {
        match self {
            Subgroup::Whole => "whole group".into(),
            Subgroup::Trivial => "trivial subgroup".into(),
            Subgroup::Generated(gens) => format!(
                "<{}>",
                gens.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            ),
            Subgroup::Kernel(h) => format!("kernel of a map to {}", h.target().describe()),
        }
    }

    /// Membership test; `model` is the ambient group.
    pub fn contains(&self, model: &GroupModel, g: &GroupElement) -> Result<bool, GroupError> {
        if !model.belongs(g) {
            return Err(model.mismatch(g));
        }
        match self {
            Subgroup::Whole => Ok(true),
            Subgroup::Trivial => Ok(model.is_identity(g)),
            Subgroup::Kernel(h) => h.is_in_kernel(g),
            Subgroup::Generated(gens) => generated_contains(model.carrier(), gens, g),
        }
    }

    /// Canonical label of the coset gH (left and right cosets agree for
    /// every case where a key is produced). `None` when no cheap canonical
    /// form is known; callers then compare cosets by membership of a⁻¹b.
    pub fn coset_key(&self, model: &GroupModel, g: &GroupElement) -> Result<Option<GroupElement>, GroupError> {
        match self {
            Subgroup::Whole => Ok(Some(model.identity())),
            Subgroup::Trivial => Ok(Some(g.clone())),
            Subgroup::Kernel(h) => h.evaluate(g).map(Some),
            Subgroup::Generated(gens) => Ok(abelian_reduce(model.carrier(), gens, g)),
        }
    }

    /// Looks for `n ∈ H ∩ sample` and `g ∈ conjugators` with g n g⁻¹ ∉ H.
    pub fn normality_witness(
        &self,
        model: &GroupModel,
        sample: &Window,
        conjugators: &Window,
    ) -> Result<Option<(GroupElement, GroupElement)>, GroupError> {
        if matches!(self, Subgroup::Whole | Subgroup::Trivial | Subgroup::Kernel(_)) {
            return Ok(None);
        }
        for n in sample.elements() {
            if !self.contains(model, n)? {
                continue;
            }
            for g in conjugators.elements() {
                let c = model.multiply(&model.multiply(g, n)?, &model.invert(g)?)?;
                if !self.contains(model, &c)? {
                    return Ok(Some((n.clone(), g.clone())));
                }
            }
        }
        Ok(None)
    }
}

fn generated_contains(carrier: &GroupModel, gens: &[GroupElement], g: &GroupElement) -> Result<bool, GroupError> {
    match carrier.kind() {
        GroupKind::FreeAbelian { .. } => {
            let lattice = Lattice::new(gens.iter().filter_map(|x| x.as_vector().map(<[i64]>::to_vec)));
            Ok(lattice.reduce(g.as_vector().unwrap_or_default()).iter().all(|x| *x == 0))
        }
        GroupKind::Free { .. } => {
            let graph = FoldedGraph::new(gens.iter().filter_map(GroupElement::as_word));
            Ok(graph.accepts(g.as_word().unwrap_or_default()))
        }
        GroupKind::Cyclic { .. } | GroupKind::Dyadic { .. } => {
            Ok(abelian_reduce(carrier, gens, g).is_some_and(|r| r == carrier.identity()))
        }
        GroupKind::Product { factors } => {
            let ids: Vec<GroupElement> = factors.iter().map(GroupModel::identity).collect();
            let mut per_factor: Vec<Vec<GroupElement>> = vec![vec![]; factors.len()];
            for s in gens {
                let GroupElement::Tuple(parts) = s else { return Err(carrier.mismatch(s)) };
                let moved: Vec<usize> = (0..parts.len()).filter(|&i| parts[i] != ids[i]).collect();
                match moved.as_slice() {
                    [] => {}
                    [i] => per_factor[*i].push(parts[*i].clone()),
                    _ => {
                        return Err(GroupError::Unsupported(
                            "membership in a product for generators spanning several factors".into(),
                        ))
                    }
                }
            }
            let GroupElement::Tuple(parts) = g else { return Err(carrier.mismatch(g)) };
            for ((f, p), list) in factors.iter().zip(parts).zip(per_factor) {
                if !generated_contains(f.carrier(), &list, p)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        GroupKind::Image { .. } => unreachable!("carrier is never an image"),
    }
}

/// Canonical coset representative of g modulo ⟨gens⟩ in abelian carriers.
fn abelian_reduce(carrier: &GroupModel, gens: &[GroupElement], g: &GroupElement) -> Option<GroupElement> {
    match (carrier.kind(), g) {
        (GroupKind::FreeAbelian { .. }, GroupElement::Vector(v)) => {
            let lattice = Lattice::new(gens.iter().filter_map(|x| x.as_vector().map(<[i64]>::to_vec)));
            Some(GroupElement::Vector(lattice.reduce(v)))
        }
        (GroupKind::Cyclic { order }, GroupElement::Residue(r)) => {
            let d = gens.iter().fold(*order, |acc, s| match s {
                GroupElement::Residue(x) => acc.gcd(x),
                _ => acc,
            });
            Some(GroupElement::Residue(r % d))
        }
        (GroupKind::Dyadic { .. }, GroupElement::Dyadic(q)) => {
            let step = gens.iter().fold(Rat::zero(), |acc, s| match s {
                GroupElement::Dyadic(x) => rat_gcd(acc, *x),
                _ => acc,
            });
            if step.is_zero() {
                return Some(g.clone());
            }
            let k = (*q / step).floor();
            Some(GroupElement::Dyadic(*q - k * step))
        }
        _ => None,
    }
}

fn rat_gcd(a: Rat, b: Rat) -> Rat {
    let (a, b) = (a.abs(), b.abs());
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let l = a.denom().lcm(b.denom());
    let na = a.numer() * (l / a.denom());
    let nb = b.numer() * (l / b.denom());
    Rat::new(na.gcd(&nb), l)
}

/// Integer lattice in Hermite normal form (rows with positive pivots,
/// entries above each pivot reduced into [0, pivot)).
struct Lattice {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Lattice {
    fn new(vectors: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let mut pending: Vec<Vec<i128>> = vectors
            .into_iter()
            .map(|v| v.into_iter().map(i128::from).collect())
            .filter(|v: &Vec<i128>| v.iter().any(|x| *x != 0))
            .collect();
        let dim = pending.first().map_or(0, Vec::len);
        let mut rows: Vec<(usize, Vec<i128>)> = Vec::new();
        for col in 0..dim {
            // Euclid on column `col` among pending rows.
            loop {
                let mut nz: Vec<usize> = (0..pending.len()).filter(|&i| pending[i][col] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                nz.sort_by_key(|&i| pending[i][col].abs());
                let p = nz[0];
                for &i in &nz[1..] {
                    let q = pending[i][col].div_euclid(pending[p][col]);
                    let pivot = pending[p].clone();
                    for (x, y) in pending[i].iter_mut().zip(&pivot) {
                        *x -= q * y;
                    }
                }
            }
            if let Some(i) = (0..pending.len()).find(|&i| pending[i][col] != 0) {
                let mut row = pending.swap_remove(i);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                rows.push((col, row));
            }
            pending.retain(|v| v.iter().any(|x| *x != 0));
        }
        // Reduce entries above pivots.
        for k in 0..rows.len() {
            let (col, pivot_row) = rows[k].clone();
            for (_, row) in rows.iter_mut().take(k) {
                let q = row[col].div_euclid(pivot_row[col]);
                for c in 0..row.len() {
                    row[c] -= q * pivot_row[c];
                }
            }
        }
        Lattice { rows }
    }

    /// Canonical representative of v modulo the lattice.
    fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut out: Vec<i128> = v.iter().map(|x| i128::from(*x)).collect();
        for (col, row) in &self.rows {
            if row.len() != out.len() {
                continue;
            }
            let q = out[*col].div_euclid(row[*col]);
            for c in 0..out.len() {
                out[c] -= q * row[c];
            }
        }
        out.into_iter().map(|x| x as i64).collect()
    }
}

/// Stallings graph of a finitely generated subgroup of a free group.
struct FoldedGraph {
    next: HashMap<(usize, Letter), usize>,
}

impl FoldedGraph {
    fn new<'a>(words: impl IntoIterator<Item = &'a [Letter]>) -> Self {
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        let mut vertices = 1;
        for w in words {
            if w.is_empty() {
                continue;
            }
            let mut cur = 0;
            for (i, &l) in w.iter().enumerate() {
                let to = if i + 1 == w.len() {
                    0
                } else {
                    vertices += 1;
                    vertices - 1
                };
                edges.push((cur, l, to));
                cur = to;
            }
        }
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        loop {
            let mut changed = false;
            let mut next: HashMap<(usize, Letter), usize> = HashMap::new();
            for &(u, l, v) in &edges {
                for (a, lab, b) in [(u, l, v), (v, -l, u)] {
                    let (a, b) = (find(&mut parent, a), find(&mut parent, b));
                    match next.get(&(a, lab)).copied() {
                        Some(c) => {
                            let c = find(&mut parent, c);
                            if c != b {
                                let (lo, hi) = (c.min(b), c.max(b));
                                parent[hi] = lo;
                                changed = true;
                            }
                        }
                        None => {
                            next.insert((a, lab), b);
                        }
                    }
                }
            }
            if !changed {
                let next = next
                    .into_iter()
                    .map(|((a, l), b)| ((find(&mut parent, a), l), find(&mut parent, b)))
                    .collect();
                return FoldedGraph { next };
            }
        }
    }

    fn accepts(&self, w: &[Letter]) -> bool {
        let mut cur = 0;
        for &l in w {
            match self.next.get(&(cur, l)) {
                Some(&v) => cur = v,
                None => return false,
            }
        }
        cur == 0
    }
}

/// The integer t with g = hᵗ, if any.
pub(crate) fn cyclic_coordinate(model: &GroupModel, h: &GroupElement, g: &GroupElement) -> Result<Option<i64>, GroupError> {
    if model.is_identity(g) {
        return Ok(Some(0));
    }
    if model.is_identity(h) {
        return Ok(None);
    }
    let guess = match (h, g) {
        (GroupElement::Vector(hv), GroupElement::Vector(gv)) => {
            let i = hv.iter().position(|x| *x != 0).unwrap_or(0);
            if gv[i] % hv[i] != 0 {
                return Ok(None);
            }
            gv[i] / hv[i]
        }
        (GroupElement::Dyadic(hq), GroupElement::Dyadic(gq)) => {
            let t = *gq / *hq;
            if !t.is_integer() {
                return Ok(None);
            }
            t.to_integer()
        }
        (GroupElement::Word(hw), GroupElement::Word(gw)) => {
            // Works for cyclically reduced h, where |hᵗ| = |t|·|h|.
            let t = (gw.len() / hw.len().max(1)) as i64;
            if model.pow(h, t)? == *g {
                return Ok(Some(t));
            }
            -t
        }
        (GroupElement::Residue(hr), GroupElement::Residue(gr)) => {
            let order = model.order().unwrap_or(u64::MAX);
            let mut t = 0u64;
            let mut acc = 0u64;
            while t < order {
                if acc == *gr {
                    return Ok(Some(t as i64));
                }
                acc = (acc + hr) % order;
                t += 1;
            }
            return Ok(None);
        }
        _ => return Ok(None),
    };
    Ok((model.pow(h, guess)? == *g).then_some(guess))
}
