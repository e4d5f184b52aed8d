mod common;

use common::{probe_polys, random_instance, random_poly, SpanOracle};
use hopfw::rewrite::CompletionOptions;
use hopfw::{NcPoly, RewriteSystem, Scalar, Truncation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn membership_matches_span_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let sys = RewriteSystem::complete(&inst.alphabet, &inst.relations, inst.degree).unwrap();
        let oracle = SpanOracle::new(&inst.alphabet, &inst.relations, inst.degree);
        for p in probe_polys(&mut rng, &inst, 12) {
            prop_assert_eq!(sys.ideal_member(&p).unwrap(), oracle.contains(&p), "{}", p);
        }
    }

    #[test]
    fn normal_form_is_linear_and_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let sys = RewriteSystem::complete(&inst.alphabet, &inst.relations, inst.degree).unwrap();
        let p = random_poly(&mut rng, &inst.alphabet, inst.degree, 5);
        let q = random_poly(&mut rng, &inst.alphabet, inst.degree, 5);
        let c = Scalar::ratio(-3, 2);
        let nf = |x: &NcPoly| sys.normal_form(x).unwrap();
        prop_assert_eq!(nf(&nf(&p)), nf(&p));
        let mut combo = p.clone();
        combo.add_scaled(&q, &c);
        let mut expected = nf(&p);
        expected.add_scaled(&nf(&q), &c);
        prop_assert_eq!(nf(&combo), expected);
    }

    #[test]
    fn completion_is_confluent_at_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let sys = RewriteSystem::complete(&inst.alphabet, &inst.relations, inst.degree).unwrap();
        prop_assert!(sys.unresolved_ambiguities().is_empty(), "{:?}", sys.unresolved_ambiguities());
        for r in &inst.relations {
            prop_assert!(sys.normal_form(r).unwrap().is_zero());
        }
    }

    #[test]
    fn completion_is_schedule_independent(seed in any::<u64>(), shuffle in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let mut reversed = inst.relations.clone();
        reversed.reverse();
        for truncation in [Truncation::Sugar, Truncation::Word] {
            let run = |relations: &[NcPoly], shuffle_seed| {
                let options = CompletionOptions { shuffle_seed, truncation, ..Default::default() };
                RewriteSystem::complete_with(&inst.alphabet, relations, inst.degree, &options)
                    .unwrap()
                    .dump()
            };
            let plain = run(&inst.relations, None);
            prop_assert_eq!(&plain, &run(&inst.relations, Some(shuffle)));
            prop_assert_eq!(&plain, &run(&reversed, None));
        }
    }

    #[test]
    fn truncations_agree_once_saturated(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let sugar = RewriteSystem::complete(&inst.alphabet, &inst.relations, inst.degree).unwrap();
        let options = CompletionOptions { truncation: Truncation::Word, ..Default::default() };
        let word = RewriteSystem::complete_with(&inst.alphabet, &inst.relations, inst.degree, &options).unwrap();
        for p in probe_polys(&mut rng, &inst, 8) {
            if sugar.ideal_member(&p).unwrap() && word.is_saturated() {
                prop_assert!(word.saturated_normal_form(&p).unwrap().is_zero(), "{}", p);
            }
            if sugar.is_saturated() && word.is_saturated() {
                prop_assert_eq!(
                    sugar.saturated_normal_form(&p).unwrap(),
                    word.saturated_normal_form(&p).unwrap()
                );
            }
        }
    }

    #[test]
    fn dump_roundtrip_preserves_normal_forms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let sys = RewriteSystem::complete(&inst.alphabet, &inst.relations, inst.degree).unwrap();
        let back = RewriteSystem::parse_dump(&sys.dump()).unwrap();
        prop_assert_eq!(back.dump(), sys.dump());
        for p in probe_polys(&mut rng, &inst, 6) {
            prop_assert_eq!(back.normal_form(&p).unwrap(), sys.normal_form(&p).unwrap());
        }
    }

    #[test]
    fn saturated_systems_decide_higher_degrees(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let sys = RewriteSystem::complete(&inst.alphabet, &inst.relations, inst.degree).unwrap();
        if sys.is_saturated() {
            let top = inst.degree + 1;
            let ecart = sys.rules().iter().map(|r| r.sugar - r.leading.degree()).max().unwrap_or(0);
            let level = (top + ecart).min(6);
            let oracle = SpanOracle::new(&inst.alphabet, &inst.relations, level);
            let wide = common::Instance { degree: top.min(level), ..inst };
            for p in probe_polys(&mut rng, &wide, 6) {
                let member = sys.saturated_normal_form(&p).unwrap().is_zero();
                if oracle.contains(&p) {
                    prop_assert!(member, "{}", p);
                } else if level == top + ecart {
                    prop_assert!(!member, "{}", p);
                }
            }
        }
    }
}
