mod common;

use lifeframe::catalog;
use lifeframe::chess::{run_carrier_bullet, run_carrier_bullet_scheduled};
use lifeframe::detect::detect_ship;
use lifeframe::kinematics::{
    compose_oblique, compose_parallel, invert_oblique, CompositionInput, Velocity,
};
use lifeframe::pattern_io::{
    emit_plaintext, emit_rle, parse_plaintext, parse_rle, PatternDocument,
};
use lifeframe::{Pattern, Rational};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn unit() -> impl Strategy<Value = Rational> {
    (1i128..=200).prop_flat_map(|d| (0..=d).prop_map(move |n| Rational::new(n, d)))
}

fn signed_unit() -> impl Strategy<Value = Rational> {
    (1i128..=200).prop_flat_map(|d| (-d..=d).prop_map(move |n| Rational::new(n, d)))
}

fn sub_light() -> impl Strategy<Value = Rational> {
    (2i128..=200).prop_flat_map(|d| (0..d).prop_map(move |n| Rational::new(n, d)))
}

fn small_pattern() -> impl Strategy<Value = Pattern> {
    proptest::collection::vec((-8i64..8, -8i64..8), 0..40).prop_map(Pattern::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn parallel_law_is_closed_commutative_associative(a in unit(), b in unit(), c in unit()) {
        let ab = compose_parallel(a, b).unwrap();
        prop_assert!(ab >= Rational::from_integer(0) && ab <= Rational::from_integer(1));
        prop_assert_eq!(ab, compose_parallel(b, a).unwrap());
        prop_assert_eq!(
            compose_parallel(ab, c).unwrap(),
            compose_parallel(a, compose_parallel(b, c).unwrap()).unwrap()
        );
        prop_assert!(ab >= a.max(b));
    }

    #[test]
    fn oblique_inverse_round_trip(v1 in sub_light(), bx in signed_unit(), by in signed_unit()) {
        let bullet = Velocity::new(bx, by);
        let input = CompositionInput::new(v1, bullet.clone()).unwrap();
        let ground = compose_oblique(&input).v12;
        prop_assert!(ground.chebyshev_speed() <= Rational::from_integer(1));
        prop_assert_eq!(invert_oblique(v1, &ground).unwrap(), bullet);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rle_round_trip(p in small_pattern()) {
        let doc = PatternDocument::from_pattern(&p).unwrap();
        let text = emit_rle(&doc);
        let back = parse_rle(&text).unwrap();
        prop_assert_eq!(emit_rle(&back), text);
        let (canon, _) = if p.is_empty() { (Pattern::empty(), (0, 0)) } else { p.canonicalize().unwrap() };
        prop_assert!(back.to_pattern().same_cells(&canon));
    }

    #[test]
    fn plaintext_round_trip(p in small_pattern()) {
        let doc = PatternDocument::from_pattern(&p).unwrap();
        let back = parse_plaintext(&emit_plaintext(&doc)).unwrap();
        prop_assert!(back.to_pattern().same_cells(&doc.to_pattern()));
    }

    #[test]
    fn step_is_translation_equivariant(p in small_pattern(), dx in -1000i64..1000, dy in -1000i64..1000) {
        let a = p.step().unwrap().translate(dx, dy).unwrap();
        let b = p.translate(dx, dy).unwrap().step().unwrap();
        prop_assert!(a.same_cells(&b));
    }

    #[test]
    fn step_is_local(p in small_pattern(), far in 20i64..100) {
        // A pattern placed far away evolves independently.
        let other = catalog::pattern("blinker").translate(far + 20, far).unwrap();
        let mut joined: Vec<_> = p.cells().to_vec();
        joined.extend_from_slice(other.cells());
        let both = Pattern::new(joined).step_n(3).unwrap();
        let mut apart: Vec<_> = p.step_n(3).unwrap().cells().to_vec();
        apart.extend_from_slice(other.step_n(3).unwrap().cells());
        prop_assert!(both.same_cells(&Pattern::new(apart)));
    }

    #[test]
    fn detection_is_phase_invariant(name in prop::sample::select(vec!["glider", "lwss", "mwss", "hwss", "blinker", "toad"]), phase in 0u64..12) {
        let base = catalog::pattern(name);
        let r0 = detect_ship(&base, 16).unwrap().into_report().unwrap();
        let shifted = base.step_n(phase).unwrap();
        let r1 = detect_ship(&shifted, 16).unwrap().into_report().unwrap();
        prop_assert_eq!(r0.period, r1.period);
        prop_assert_eq!(r0.displacement, r1.displacement);
        prop_assert_eq!(r0.velocity, r1.velocity);
    }

    #[test]
    fn token_result_ignores_schedule(p in 1u64..24, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n1 = rng.gen_range(0..=p);
        let n2 = rng.gen_range(0..=p - n1);
        let mut moves: Vec<u64> = (0..p).collect();
        moves.shuffle(&mut rng);
        let carrier: BTreeSet<u64> = moves[..n1 as usize].iter().copied().collect();
        let bullet: BTreeSet<u64> = moves[n1 as usize..(n1 + n2) as usize].iter().copied().collect();
        let shuffled = run_carrier_bullet_scheduled(p, carrier, bullet).unwrap();
        let earliest = run_carrier_bullet(p, n1, n2).unwrap();
        prop_assert_eq!(shuffled.v12, earliest.v12);
        prop_assert_eq!(shuffled.displacement, earliest.displacement);
    }
}

#[test]
fn dense_reference_agrees_on_catalog() {
    for e in catalog::entries() {
        let p = e.pattern().unwrap();
        let bb = p.bounding_box().unwrap();
        let margin = 40;
        let w = (bb.width() as i64 + 2 * margin) as usize;
        let h = (bb.height() as i64 + 2 * margin) as usize;
        let mut dense =
            common::DenseGrid::from_pattern(&p, w, h, (margin - bb.min_x, margin - bb.min_y));
        let mut sparse = p;
        for _ in 0..30 {
            sparse = sparse.step().unwrap();
            dense = dense.step();
            assert_eq!(common::live_cells(&sparse), dense.live(), "{}", e.name);
        }
    }
}
