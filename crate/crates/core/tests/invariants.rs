//! Cross-module invariants on randomly drawn small instances.

use posetmep::fourier::{dual_weight_partition, macwilliams_identity_check, property_audit, weight_partition};
use posetmep::instance::Instance;
use posetmep::isometry::weight_isometry_group;
use posetmep::mep::{mep_brute_force, mep_predicate, MepMode};
use posetmep::poset::{all_labeled_posets, Poset, WeightFunction};
use posetmep::space::AmbientSpace;
use posetmep::Limits;
use proptest::prelude::*;

fn small_poset() -> impl Strategy<Value = Poset> {
    let all: Vec<Poset> = (1..=3).flat_map(all_labeled_posets).collect();
    proptest::sample::select(all)
}

fn instance() -> impl Strategy<Value = (Poset, Vec<i64>, Vec<usize>, u32)> {
    small_poset().prop_flat_map(|p| {
        let n = p.len();
        (
            Just(p),
            proptest::collection::vec(1i64..4, n),
            proptest::collection::vec(1usize..3, n),
            proptest::sample::select(vec![2u32, 3]),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isometries_preserve_weight((p, w, dims, q) in instance(), seed in any::<u64>()) {
        prop_assume!(dims.iter().sum::<usize>() <= 4);
        let limits = Limits::default();
        let omega = WeightFunction::from_integers(&w).unwrap();
        let space = AmbientSpace::new(q, dims).unwrap();
        let group = weight_isometry_group(&space, &p, &omega, &limits).unwrap();
        let g = &group[(seed as usize) % group.len()];
        for i in 0..space.size() as usize {
            let v = space.vector_at(i);
            let image = space.vector_from_flat(g.apply(v.as_slice())).unwrap();
            prop_assert_eq!(space.weight(&image, &p, &omega), space.weight(&v, &p, &omega));
        }
        let inv = g.inverse(&space, &p).unwrap();
        prop_assert!(g.compose(&inv, &space, &p).unwrap().lambda().is_identity());
    }

    #[test]
    fn audit_implications_hold((p, w, _dims, q) in instance()) {
        let limits = Limits::default();
        let omega = WeightFunction::from_integers(&w).unwrap();
        let space = AmbientSpace::new(q, vec![1; p.len()]).unwrap();
        let audit = property_audit(&space, &p, &omega, &limits).unwrap();
        prop_assert!(audit.consistent(), "{:?}", audit.violations);
    }

    #[test]
    fn predicate_agrees_with_search_when_available((p, _w, dims, _q) in instance()) {
        prop_assume!(dims.iter().sum::<usize>() <= 4);
        let limits = Limits::default();
        let ones = WeightFunction::ones(p.len());
        let space = AmbientSpace::new(2, dims).unwrap();
        if let Ok(closed) = mep_predicate(&space, &p, &ones, &limits) {
            let brute = mep_brute_force(&space, &p, &ones, MepMode::Weight, &limits).unwrap();
            prop_assert_eq!(closed.holds, brute.holds);
        }
    }

    #[test]
    fn instance_json_round_trips((p, w, dims, q) in instance()) {
        let inst = Instance::from_parts(q, p, WeightFunction::from_integers(&w).unwrap(), dims).unwrap();
        let again = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(again.digest(), inst.digest());
        prop_assert_eq!(&again.poset, &inst.poset);
    }
}

/// Distribution conservation: block counts of any code sum to its size.
#[test]
fn distributions_count_every_codeword() {
    let limits = Limits::default();
    let p = Poset::chain(2);
    let omega = WeightFunction::ones(2);
    let space = AmbientSpace::new(3, vec![1, 1]).unwrap();
    let primal = weight_partition(&space, &p, &omega, &limits).unwrap();
    let dual = dual_weight_partition(&space, &p, &omega, &limits).unwrap();
    for code in space.enumerate_codes(&limits).unwrap() {
        for part in [&primal, &dual] {
            let total: usize = part.distribution(&space, &code).iter().sum();
            assert_eq!(total as u128, code.size());
        }
    }
}

#[test]
fn chain_macwilliams_with_integer_weights() {
    let limits = Limits::default();
    let space = AmbientSpace::new(2, vec![1, 1, 1]).unwrap();
    let omega = WeightFunction::from_integers(&[1, 2, 3]).unwrap();
    assert!(macwilliams_identity_check(&space, &Poset::chain(3), &omega, &limits).unwrap().holds);
}
