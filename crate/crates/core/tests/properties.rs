//! Property tests for the algebraic and certificate invariants.

mod common;

use coarsedim::coarse::{entourage_membership, EntourageSample, FamilyView, GapSet};
use coarsedim::construct::{interval_cover_z, restrict_certificate, translate_certificate, CosetDecomposition};
use coarsedim::cover::{
    certificate_from_json, certificate_to_json, k_disjoint_check, verify_certificate, Cell, Certificate, Cover,
};
use coarsedim::{GroupElement, GroupHom, GroupModel, Rat, Subgroup};
use proptest::prelude::*;

fn rat(n: i64) -> Rat {
    Rat::from_integer(n)
}

fn z2_elem() -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(-6i64..=6, 2).prop_map(GroupElement::vector)
}

fn f2_elem() -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..7).prop_map(|w| GroupElement::word(&w))
}

fn dyadic_elem() -> impl Strategy<Value = GroupElement> {
    (-96i64..=96).prop_map(|n| GroupElement::dyadic(n, 64))
}

fn residue_elem() -> impl Strategy<Value = GroupElement> {
    (0u64..7).prop_map(GroupElement::Residue)
}

/// A model together with a strategy for its elements.
fn model_and_elements() -> impl Strategy<Value = (GroupModel, Vec<GroupElement>)> {
    prop_oneof![
        prop::collection::vec(z2_elem(), 3).prop_map(|v| (GroupModel::free_abelian(2), v)),
        prop::collection::vec(f2_elem(), 3).prop_map(|v| (GroupModel::free(2), v)),
        prop::collection::vec(dyadic_elem(), 3).prop_map(|v| (GroupModel::dyadic(6), v)),
        prop::collection::vec(residue_elem(), 3).prop_map(|v| (GroupModel::cyclic(7), v)),
    ]
}

fn int_set(max_len: usize) -> impl Strategy<Value = GapSet> {
    prop::collection::btree_set(-12i64..=12, 1..=max_len)
        .prop_map(|s| s.into_iter().map(|t| GroupElement::vector([t])).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn group_axioms_and_norm((model, xs) in model_and_elements()) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let xy = model.multiply(x, y).unwrap();
        prop_assert_eq!(
            model.multiply(&xy, z).unwrap(),
            model.multiply(x, &model.multiply(y, z).unwrap()).unwrap()
        );
        let xi = model.invert(x).unwrap();
        prop_assert!(model.is_identity(&model.multiply(&xi, x).unwrap()));
        prop_assert_eq!(model.multiply(&model.identity(), x).unwrap(), x.clone());
        let n = |g: &GroupElement| model.norm(g).unwrap();
        prop_assert_eq!(n(&xi), n(x));
        prop_assert!(n(&xy) <= n(x) + n(y));
        prop_assert_eq!(n(x), model.weighted_norm(x).unwrap());
        prop_assert_eq!(model.parse(&x.to_string()).unwrap(), x.clone());
    }

    #[test]
    fn set_operations(a in int_set(5), b in int_set(5)) {
        let z = GroupModel::integers();
        prop_assert_eq!(a.union(&b).inverse(&z).unwrap(), a.inverse(&z).unwrap().union(&b.inverse(&z).unwrap()));
        prop_assert_eq!(
            a.product(&z, &b).unwrap().inverse(&z).unwrap(),
            b.inverse(&z).unwrap().product(&z, &a.inverse(&z).unwrap()).unwrap()
        );
        prop_assert!(a.difference_set(&z).unwrap().contains(&z.identity()));
    }

    #[test]
    fn homomorphisms_respect_products(img in prop::collection::vec(-3i64..=3, 2), x in z2_elem(), y in z2_elem()) {
        let z2 = GroupModel::free_abelian(2);
        let z = GroupModel::integers();
        let images: Vec<String> = img.iter().map(ToString::to_string).collect();
        let refs: Vec<&str> = images.iter().map(String::as_str).collect();
        let phi = GroupHom::parse(z2.clone(), z.clone(), &refs).unwrap();
        let lhs = phi.evaluate(&z2.multiply(&x, &y).unwrap()).unwrap();
        let rhs = z.multiply(&phi.evaluate(&x).unwrap(), &phi.evaluate(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn free_abelianization_is_a_homomorphism(x in f2_elem(), y in f2_elem()) {
        let f2 = GroupModel::free(2);
        let z2 = GroupModel::free_abelian(2);
        let ab = GroupHom::parse(f2.clone(), z2.clone(), &["(1,0)", "(0,1)"]).unwrap();
        let lhs = ab.evaluate(&f2.multiply(&x, &y).unwrap()).unwrap();
        let rhs = z2.multiply(&ab.evaluate(&x).unwrap(), &ab.evaluate(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shear_criterion_matches_realization(seed in any::<u64>()) {
        let f2 = GroupModel::free(2);
        let pool: Vec<GroupElement> = f2.ball(rat(2)).unwrap().elements().cloned().collect();
        let mut rng = common::rng(seed);
        let (e, a) = common::random_entourage_case(&f2, &mut rng, &pool);
        let lat = common::Lattice::Free(2);
        let pairs: Vec<_> = e.iter().map(|(x, y)| (lat.to_node(x), lat.to_node(y))).collect();
        let nodes: Vec<_> = a.iter().map(|g| lat.to_node(g)).collect();
        prop_assert_eq!(entourage_membership(&f2, &e, &a).unwrap(), common::realized_by_search(lat, &pairs, &nodes));
    }

    #[test]
    fn entourage_axioms(a in int_set(4), xs in prop::collection::vec((-10i64..=10, -10i64..=10), 1..5)) {
        let z = GroupModel::integers();
        let strs: Vec<(String, String)> = xs.iter().map(|(p, q)| (p.to_string(), q.to_string())).collect();
        let refs: Vec<(&str, &str)> = strs.iter().map(|(p, q)| (p.as_str(), q.as_str())).collect();
        let e = EntourageSample::parse(&z, &refs).unwrap();
        let diag = EntourageSample::parse(&z, &[("3", "3"), ("-7", "-7")]).unwrap();
        prop_assert!(entourage_membership(&z, &diag, &a).unwrap());
        let inside = entourage_membership(&z, &e, &a).unwrap();
        prop_assert_eq!(entourage_membership(&z, &e.inverse(), &a).unwrap(), inside);
        let first = EntourageSample::parse(&z, &refs[..1]).unwrap();
        if inside {
            prop_assert!(entourage_membership(&z, &first, &a).unwrap());
        }
    }

    #[test]
    fn completion_is_idempotent(members in prop::collection::vec(int_set(4), 1..4), probe in int_set(3)) {
        let z = GroupModel::integers();
        let fam = FamilyView::explicit(z, members).unwrap();
        let once = fam.completed().unwrap();
        let twice = once.completed().unwrap();
        let m = fam.contains(&probe).unwrap();
        prop_assert_eq!(once.contains(&probe).unwrap(), m);
        prop_assert_eq!(twice.contains(&probe).unwrap(), m);
        // Downward closure.
        if m {
            let smaller: GapSet = probe.iter().take(1).cloned().collect();
            prop_assert!(fam.contains(&smaller).unwrap());
        }
    }
}

fn two_cell_cover(a: GapSet, b: GapSet) -> Cover {
    let z = GroupModel::integers();
    let w = z.ball(rat(12)).unwrap();
    let rest: GapSet = w.elements().filter(|g| !a.contains(g) && !b.contains(g)).cloned().collect();
    let mut cells = vec![Cell { color: 0, members: a }, Cell { color: 0, members: b }];
    if !rest.is_empty() {
        cells.push(Cell { color: 1, members: rest });
    }
    Cover::new(w, cells).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn disjointness_is_symmetric_and_monotone(a in int_set(4), b in int_set(4), r in 0i64..5, s in 0i64..5) {
        let z = GroupModel::integers();
        let k = GapSet::from_window(&z.ball(rat(r)).unwrap());
        let cover = two_cell_cover(a.clone(), b.clone());
        let ab = k_disjoint_check(&z, &cover, &k).unwrap().pass;
        let ba = k_disjoint_check(&z, &two_cell_cover(b, a), &k).unwrap().pass;
        prop_assert_eq!(ab, ba);
        let smaller = GapSet::from_window(&z.ball(rat(r.min(s))).unwrap());
        if ab {
            prop_assert!(k_disjoint_check(&z, &cover, &smaller).unwrap().pass);
        }
    }
}

fn permuted(cert: &Certificate, shift: usize) -> Certificate {
    let n = cert.cover.colors();
    Certificate {
        cover: cert.cover.recolored(|c| (c + shift) % n).unwrap(),
        report: None,
        ..cert.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn reports_ignore_color_names(r in 1i64..6, shift in 0usize..2) {
        let z = GroupModel::integers();
        let cert = interval_cover_z(r, 8 * r).unwrap();
        let a = verify_certificate(&z, &cert).unwrap();
        let b = verify_certificate(&z, &permuted(&cert, shift)).unwrap();
        prop_assert_eq!(a.pass, b.pass);
        prop_assert_eq!(a.computed_bound, b.computed_bound);
        prop_assert_eq!(a.colors_used, b.colors_used);
    }

    #[test]
    fn restriction_never_grows(r in 1i64..5, m in 1i64..6) {
        let z = GroupModel::integers();
        let cert = interval_cover_z(r, 10 * r).unwrap();
        let h = Subgroup::generated_by([GroupElement::vector([m])]);
        let sub = restrict_certificate(&z, &cert, &h).unwrap();
        prop_assert!(sub.passes());
        prop_assert!(sub.cover.colors() <= cert.cover.colors());
        prop_assert!(sub.report.unwrap().computed_bound <= cert.report.unwrap().computed_bound);
    }

    #[test]
    fn translation_keeps_colors_and_bound(m in 2i64..5, r in 1i64..4) {
        let z = GroupModel::integers();
        let h = GroupElement::vector([m]);
        let sub = Subgroup::generated_by([h.clone()]);
        let k: GapSet = (-r..=r).map(|t| GroupElement::vector([m * t])).collect();
        let window = z.ball(rat(15 * m)).unwrap();
        let cosets = CosetDecomposition::new(&z, &sub, &window).unwrap();
        prop_assert_eq!(cosets.representatives.len() as i64, m);
        let h_window = cosets.subgroup_window(&z).unwrap();
        let cert_h = coarsedim::construct::subgroup_interval_certificate(&z, &h, &k, &h_window).unwrap();
        let moved = translate_certificate(&z, &cert_h, &cosets).unwrap();
        prop_assert!(moved.passes());
        prop_assert_eq!(moved.cover.colors(), cert_h.cover.colors());
        prop_assert_eq!(moved.uniform_bound_radius, cert_h.uniform_bound_radius);
    }

    #[test]
    fn certificates_survive_json(r in 1i64..6) {
        let z = GroupModel::integers();
        let cert = interval_cover_z(r, 6 * r).unwrap();
        let v = certificate_to_json(&z, &cert).unwrap();
        let (model, back) = certificate_from_json(&v, None).unwrap();
        prop_assert_eq!(&model, &z);
        prop_assert_eq!(verify_certificate(&model, &back).unwrap(), cert.report.clone().unwrap());
        prop_assert_eq!(back.cover, cert.cover);
    }
}
