//! Seeded comparisons between fast paths and direct definitions.

use std::io::Write;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CliError;
use crate::coarse::{entourage_membership, EntourageSample, GapSet};
use crate::group::{GroupElement, GroupModel, Limits};
use crate::rational::rat;

struct Tally {
    name: String,
    cases: usize,
    agree: usize,
}

/// (x, y) ∈ G(A×A) by trying every g = x·a⁻¹.
fn realized(model: &GroupModel, e: &EntourageSample, a: &GapSet) -> Result<bool, CliError> {
    for (x, y) in e.iter() {
        let mut found = false;
        for p in a {
            let g = model.multiply(x, &model.invert(p)?)?;
            let b = model.left_quotient(&g, y)?;
            if a.contains(&b) {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

fn models(limits: Limits) -> Vec<(&'static str, GroupModel, i64)> {
    vec![
        ("Z2", GroupModel::free_abelian(2).with_limits(limits), 4),
        ("F2", GroupModel::free(2).with_limits(limits), 3),
        ("Dyadic(4)", GroupModel::dyadic(4).with_limits(limits), 5),
    ]
}

pub(super) fn run(seed: u64, cases: usize, limits: Limits, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut tallies = Vec::new();
    for (name, model, r) in models(limits) {
        let pool: Vec<GroupElement> = model.ball(rat(r))?.elements().cloned().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| pool.choose(rng).expect("nonempty ball").clone();

        let mut norms = Tally { name: format!("{name}\tnorm_vs_search"), cases, agree: 0 };
        let mut axioms = Tally { name: format!("{name}\tgroup_axioms"), cases, agree: 0 };
        let mut shear = Tally { name: format!("{name}\tshear_vs_realization"), cases, agree: 0 };
        for _ in 0..cases {
            let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            norms.agree += usize::from(model.norm(&x)? == model.weighted_norm(&x)?);

            let assoc = model.multiply(&model.multiply(&x, &y)?, &z)? == model.multiply(&x, &model.multiply(&y, &z)?)?;
            let inv = model.is_identity(&model.multiply(&x, &model.invert(&x)?)?);
            let tri = model.norm(&model.multiply(&x, &y)?)? <= model.norm(&x)? + model.norm(&y)?;
            axioms.agree += usize::from(assoc && inv && tri);

            let a: GapSet = (0..rng.random_range(1..=4)).map(|_| pick(&mut rng)).collect();
            let items: Vec<&GroupElement> = a.iter().collect();
            let mut pairs = Vec::new();
            for _ in 0..rng.random_range(1..=3) {
                let pair = if rng.random_bool(0.5) {
                    let g = pick(&mut rng);
                    let p = *items.choose(&mut rng).expect("nonempty");
                    let q = *items.choose(&mut rng).expect("nonempty");
                    (model.multiply(&g, p)?.to_string(), model.multiply(&g, q)?.to_string())
                } else {
                    (pick(&mut rng).to_string(), pick(&mut rng).to_string())
                };
                pairs.push(pair);
            }
            let refs: Vec<(&str, &str)> = pairs.iter().map(|(p, q)| (p.as_str(), q.as_str())).collect();
            let e = EntourageSample::parse(&model, &refs)?;
            shear.agree += usize::from(entourage_membership(&model, &e, &a)? == realized(&model, &e, &a)?);
        }
        tallies.extend([norms, axioms, shear]);
    }
    writeln!(out, "seed\t{seed}")?;
    writeln!(out, "group\tcheck\tcases\tagree")?;
    let mut ok = true;
    for t in &tallies {
        writeln!(out, "{}\t{}\t{}", t.name, t.cases, t.agree)?;
        ok &= t.agree == t.cases;
    }
    Ok(if ok { 0 } else { 1 })
}
