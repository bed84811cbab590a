//! Exhaustive agreement between the categorical constructions and their
//! pointwise formulas over every fixture monoid.

use galmon::actions::{
    adjunction_check_restrict_coinduct, canonical_site, coinduct, fixed_points, free_action, regular_action,
    trivial_action, MAction, Site, SiteSpec,
};
use galmon::ends::{TannakianContext, DEFAULT_MAX_FAMILIES};
use galmon::fixtures;
use galmon::galois::{
    enumerate_subfunctors, fixes, invariants, invariants_oracle, stabilizer, stabilizer_in, Subfunctor,
};
use galmon::monoid::{enumerate_submonoids, enumerate_subgroups, MonoidHom};
use galmon::sampling::enumerate_actions;
use galmon::FinSet;

#[test]
fn invariants_match_pointwise_formula() {
    for (name, m) in fixtures::named_monoids() {
        let site = canonical_site(&m, &SiteSpec::default_for(&m)).unwrap();
        for s in enumerate_submonoids(&m) {
            let inv = invariants(s.inclusion(), &site).unwrap();
            assert_eq!(inv, invariants_oracle(s.inclusion(), &site).unwrap(), "{name} {:?}", s.labels());
            assert!(fixes(s.inclusion(), &inv).unwrap());
        }
    }
}

#[test]
fn stabilizer_through_ends_matches_pointwise() {
    for (name, m) in fixtures::named_monoids() {
        let site = canonical_site(&m, &SiteSpec::default_for(&m)).unwrap();
        let ctx = TannakianContext::new(&site, DEFAULT_MAX_FAMILIES).unwrap();
        for s in enumerate_submonoids(&m) {
            let inv = invariants(s.inclusion(), &site).unwrap();
            assert_eq!(stabilizer_in(&ctx, &inv).unwrap(), stabilizer(&inv).unwrap(), "{name} {:?}", s.labels());
        }
    }
}

#[test]
fn fixed_points_are_invariants_of_the_identity() {
    for (_, m) in fixtures::core_monoids() {
        for n in 1..=3 {
            for action in enumerate_actions(&m, n) {
                let site = Site::new(&m, vec![("M".into(), action.clone())]).unwrap();
                let inv = invariants(&MonoidHom::identity(&m), &site).unwrap();
                assert_eq!(inv.subset(0), fixed_points(&action).positions());
            }
        }
    }
}

fn small_site(m: &galmon::Monoid, picks: &[(usize, usize)]) -> Site {
    let objects: Vec<(String, MAction)> = picks
        .iter()
        .enumerate()
        .filter_map(|(k, &(n, i))| {
            let all = enumerate_actions(m, n);
            (!all.is_empty()).then(|| (format!("M{k}"), all[i % all.len()].clone()))
        })
        .collect();
    Site::new(m, objects).unwrap()
}

#[test]
fn invariants_and_stabilizers_are_universal() {
    for (name, m) in fixtures::core_monoids() {
        for picks in [[(2, 1), (3, 2)], [(3, 5), (1, 0)], [(2, 0), (2, 3)]] {
            let site = small_site(&m, &picks);
            let subs = enumerate_submonoids(&m);
            for v in enumerate_subfunctors(&site, 12, 1 << 12).unwrap() {
                let stab = stabilizer(&v).unwrap();
                for s in &subs {
                    if fixes(s.inclusion(), &v).unwrap() {
                        let inv = invariants(s.inclusion(), &site).unwrap();
                        assert!(v.is_subset_of(&inv), "{name}");
                        assert!(s.is_subset_of(&stab), "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn enlarging_the_site_shrinks_stabilizers() {
    for (name, g) in fixtures::groups_up_to_6() {
        let small = canonical_site(&g, &"cosets".parse().unwrap()).unwrap();
        let big = canonical_site(&g, &"free+cosets".parse().unwrap()).unwrap();
        for s in enumerate_subgroups(&g) {
            let v_big = invariants(s.inclusion(), &big).unwrap();
            // restrict to the objects both sites share
            let v_small = Subfunctor::new(
                &small,
                (0..small.len()).map(|i| v_big.subset(big.find(small.name(i)).unwrap()).to_vec()).collect(),
            )
            .unwrap();
            let (sb, ss) = (stabilizer(&v_big).unwrap(), stabilizer(&v_small).unwrap());
            assert!(sb.is_subset_of(&ss), "{name} {:?}", s.labels());
        }
    }
}

#[test]
fn coinduction_cardinalities_over_sites() {
    for (name, a) in fixtures::named_monoids().into_iter().filter(|(_, m)| m.len() <= 4) {
        for s in enumerate_submonoids(&a) {
            let b = s.monoid();
            let ns = [regular_action(b), trivial_action(b, &FinSet::range(2))];
            let ms = [free_action(&a, &FinSet::singleton()), trivial_action(&a, &FinSet::range(2))];
            for n in &ns {
                assert_eq!(galmon::actions::validate_action(&coinduct(s.inclusion(), n).unwrap()), Ok(()));
                for m in &ms {
                    let r = adjunction_check_restrict_coinduct(s.inclusion(), m, n).unwrap();
                    assert!(r.holds(), "{name} {:?} {r:?}", s.labels());
                }
            }
        }
    }
}
