//! One-color covers: a K-disjoint cover by a single color class exists
//! with bounded cells exactly when the subgroup generated by K is bounded.

use std::collections::{HashMap, VecDeque};

use super::{checked, ConstructError};
use crate::coarse::GapSet;
use crate::cover::{cell_diameter, Cell, Certificate, Cover};
use crate::group::{GroupElement, GroupModel};
use crate::rational::{fmt_rat, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroDimVerdict {
    /// Cells are the cosets x⟨K⟩ meeting the window.
    Certificate(Box<Certificate>),
    /// Any cell containing the identity must also contain each element of
    /// `chain`, since each step multiplies on the right by an element of K;
    /// the last one is too far from the identity.
    NoCertificate { chain: Vec<GroupElement>, reason: String },
}

/// Searches for a one-color K-disjoint cover of B(window_r) with cells of
/// diameter at most `bound`. K is symmetrized and the identity adjoined.
///
/// The cell B containing the identity satisfies B = BK, so it contains the
/// whole ⟨K⟩-orbit of the identity; the search explores that orbit
/// breadth-first and stops once it leaves B(bound).
pub fn zero_dim_analysis(
    model: &GroupModel,
    k: &GapSet,
    bound: Rat,
    window_r: Rat,
) -> Result<ZeroDimVerdict, ConstructError> {
    let mut steps = k.symmetrized(model)?;
    steps.insert(model.identity());
    let e = model.identity();
    let mut parent: HashMap<GroupElement, Option<GroupElement>> = HashMap::new();
    parent.insert(e.clone(), None);
    let mut queue = VecDeque::from([e.clone()]);
    let mut log: Vec<String> = Vec::new();
    while let Some(x) = queue.pop_front() {
        for s in &steps {
            let y = model.multiply(&x, s)?;
            if parent.contains_key(&y) {
                continue;
            }
            let norm = model.norm(&y)?;
            parent.insert(y.clone(), Some(x.clone()));
            if norm > bound {
                let mut chain = vec![y.clone()];
                let mut cur = &y;
                while let Some(Some(p)) = parent.get(cur) {
                    chain.push(p.clone());
                    cur = p;
                }
                chain.reverse();
                let reason = format!("{y} has norm {} > {}", fmt_rat(&norm), fmt_rat(&bound));
                return Ok(ZeroDimVerdict::NoCertificate { chain, reason });
            }
            if norm > window_r {
                log.push(format!("{y} (norm {})", fmt_rat(&norm)));
                return Err(ConstructError::Budget(format!(
                    "orbit left the window before exceeding the bound; explored {} elements, last {}",
                    parent.len(),
                    log.join(", ")
                )));
            }
            if parent.len() > model.limits().search_cap {
                return Err(ConstructError::Budget(format!("orbit search passed {} elements", parent.len())));
            }
            queue.push_back(y);
        }
    }

    // The orbit is a finite subgroup inside B(bound).
    let orbit: GapSet = parent.into_keys().collect();
    let diameter = cell_diameter(model, &orbit)?;
    if diameter > bound {
        let far = orbit
            .iter()
            .flat_map(|a| orbit.iter().map(move |b| (a, b)))
            .find(|(a, b)| model.left_quotient(a, b).and_then(|d| model.norm(&d)).is_ok_and(|n| n == diameter))
            .map(|(a, b)| vec![a.clone(), b.clone()])
            .unwrap_or_default();
        return Ok(ZeroDimVerdict::NoCertificate {
            chain: far,
            reason: format!("the subgroup generated by K has diameter {} > {}", fmt_rat(&diameter), fmt_rat(&bound)),
        });
    }
    let window = model.ball(window_r)?;
    let mut cells: Vec<Cell> = Vec::new();
    let mut placed: HashMap<GroupElement, usize> = HashMap::new();
    for x in window.elements() {
        if placed.contains_key(x) {
            continue;
        }
        let coset = orbit.translate(model, x)?;
        for y in &coset {
            placed.insert(y.clone(), cells.len());
        }
        cells.push(Cell { color: 0, members: coset });
    }
    let cert = Certificate {
        scale: k.clone(),
        colors: 1,
        cover: Cover::new(window, cells)?,
        uniform_bound_radius: diameter,
        report: None,
    };
    Ok(ZeroDimVerdict::Certificate(Box::new(checked(model, cert, "one-color cover")?)))
}
