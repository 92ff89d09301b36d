use proptest::prelude::*;

use tritile::analysis::{periodic_test_patch, CrownFamily};
use tritile::io::{parse_patch, serialize_patch};
use tritile::tiles::SideKind;
use tritile::{
    compose, crossing_at, crown_at, crown_census, decompose, group_into_squares, period_scan, scaled, similar_eq,
    supertile, tile_census, validate, Equivalence, LatticePoint, LegalCrossingTable, Patch, Seed, SimilarityMap,
    SupertileSpec, ValidationMode,
};

fn seed_strategy() -> impl Strategy<Value = Seed> {
    (0usize..128).prop_map(|i| Seed::all().nth(i).unwrap())
}

fn st(n: u32, seed: Seed) -> Patch {
    supertile(&SupertileSpec::new(n, seed)).unwrap()
}

#[test]
fn every_seed_grows_correct_supertiles() {
    let table = LegalCrossingTable::builtin();
    for seed in Seed::all() {
        for n in 0..=7 {
            let r = validate(&st(n, seed), &table, ValidationMode::SupertileBoundary);
            assert!(r.is_clean(), "S_{n} from {seed}: {r:?}");
        }
    }
}

#[test]
fn c4_crowns_merge_in_pairs_under_compose() {
    let table = LegalCrossingTable::builtin();
    let p = st(7, Seed::default());
    let q = compose(&p, &table).unwrap();
    for v in p.interior_vertices() {
        let crown = crown_at(&p, v, false).unwrap();
        if crown.family != (CrownFamily { tiles: 4, filling: None }) {
            continue;
        }
        // the four tiles become two parents, each with v at its hypotenuse midpoint
        let parents: Vec<_> = q.tiles().iter().filter(|t| t.a() + t.b() == v * 2).collect();
        assert_eq!(parents.len(), 2, "at {v}");
        assert!(!q.is_vertex(v));
    }
}

#[test]
fn harvested_c8_sides_and_bodies_alternate() {
    let p = st(10, Seed::default());
    for v in p.interior_vertices() {
        let c = crossing_at(&p, v).unwrap();
        if c.corners().len() != 8 {
            continue;
        }
        let kinds: Vec<SideKind> = tritile::Direction8::all().map(|d| c.germ(d).unwrap().kind).collect();
        let bodies = c.sector_bodies();
        for i in 0..8 {
            assert_ne!(kinds[i], kinds[(i + 1) % 8]);
            assert_ne!(bodies[i], bodies[(i + 1) % 8]);
        }
    }
}

#[test]
fn period_scan_is_monotone() {
    let (p, _) = periodic_test_patch(8);
    let small = period_scan(&p, 6, 6).unwrap().survivors;
    let large = period_scan(&p, 6, 10).unwrap().survivors;
    let restricted: Vec<LatticePoint> = large.into_iter().filter(|t| t.norm2() <= 36).collect();
    assert_eq!(small, restricted);
}

#[test]
fn crown_census_grows_then_settles() {
    let counts: Vec<usize> = (4..=12).map(|n| crown_census(&st(n, Seed::default()), true).len()).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    assert_eq!(counts[counts.len() - 1], counts[counts.len() - 3]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decompose_preserves_area(seed in seed_strategy(), n in 0u32..9) {
        let p = st(n, seed);
        let q = decompose(&scaled(&p, 1)).unwrap();
        prop_assert_eq!(q.area2(), scaled(&p, 1).area2());
        prop_assert_eq!(q.len(), 2 * p.len());
    }

    #[test]
    fn compose_inverts_decompose(seed in seed_strategy(), n in 0u32..9) {
        let table = LegalCrossingTable::builtin();
        let p = scaled(&st(n, seed), 1);
        prop_assert_eq!(compose(&decompose(&p).unwrap(), &table).unwrap(), p);
    }

    #[test]
    fn composition_matches_the_previous_level(seed in seed_strategy(), n in 1u32..10) {
        let table = LegalCrossingTable::builtin();
        let c = compose(&st(n, seed), &table).unwrap();
        prop_assert!(similar_eq(&c, &st(n - 1, seed)).is_some());
    }

    #[test]
    fn documents_round_trip(seed in seed_strategy(), n in 0u32..8) {
        let p = st(n, seed);
        let text = serialize_patch(&p);
        let back = parse_patch(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(serialize_patch(&back), text);
    }

    #[test]
    fn censuses_ignore_translation(seed in seed_strategy(), dx in -50i64..50, dy in -50i64..50) {
        let p = st(7, seed);
        let q = p.mapped(&SimilarityMap::translation(LatticePoint::new(dx, dy))).unwrap();
        prop_assert_eq!(tile_census(&p, Equivalence::Translation), tile_census(&q, Equivalence::Translation));
        prop_assert_eq!(crown_census(&p, false), crown_census(&q, false));
    }

    #[test]
    fn squares_cover_all_interior_right_angles(seed in seed_strategy(), n in 4u32..9) {
        let table = LegalCrossingTable::builtin();
        let p = st(n, seed);
        let (sp, leftover) = group_into_squares(&p, &table).unwrap();
        prop_assert_eq!(4 * sp.len() + leftover.len(), p.len());
        prop_assert!(leftover.tiles().iter().all(|t| !p.is_interior_vertex(t.r())));
    }
}

#[test]
fn square_census_settles_by_level_14() {
    use std::collections::BTreeSet;
    let table = LegalCrossingTable::builtin();
    let classes = |n: u32, up_to: Equivalence| -> BTreeSet<tritile::squares::SquareClass> {
        let (sp, _) = group_into_squares(&st(n, Seed::default()), &table).unwrap();
        tritile::square_census(&sp, up_to).into_keys().collect()
    };
    let (c12, c14, c16) = (
        classes(12, Equivalence::Translation),
        classes(14, Equivalence::Translation),
        classes(16, Equivalence::Translation),
    );
    assert!(c12.is_subset(&c14));
    assert_eq!(c14, c16);
    assert!(c14.len() <= 4096);
    assert_eq!(classes(12, Equivalence::TranslationRotation), classes(14, Equivalence::TranslationRotation));
    println!("square classes: S_12 {}, S_14 {}, S_16 {}", c12.len(), c14.len(), c16.len());
}
