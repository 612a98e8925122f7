mod common;

use std::path::Path;
use std::sync::Arc;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use gpdkit_core::cover::{extend_groupoid, restrict_cover, star_determinacy_check};
use gpdkit_core::equivalence::counit_epsilon;
use gpdkit_core::groupoid::closure_from_generators;
use gpdkit_core::io::{parse_document, serialize, Document};
use gpdkit_core::morphism::{compose_morphism, decide_equivalence, enumerate_morphisms, identity_morphism};
use gpdkit_core::SearchBound;

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn faithful_bases_have_trivial_stabilisers(seed in any::<u64>()) {
        let g = common::random_connected(&mut rng(seed), 3, 4);
        for i in 0..g.object_count() {
            let group = g.aut_group(i);
            let all: Vec<usize> = (0..g.carrier_size(i)).collect();
            prop_assert_eq!(group.pointwise_stabiliser(&all).len(), 1);
            let b = g.faithful_base(i);
            prop_assert_eq!(group.pointwise_stabiliser(&b.positions).len(), 1);
            prop_assert!(b.positions.len() <= g.carrier_size(i));
        }
    }

    #[test]
    fn hom_sets_are_torsors(seed in any::<u64>()) {
        let g = common::random_connected(&mut rng(seed), 3, 4);
        prop_assert!(g.validate().is_ok());
        for i in 0..g.object_count() {
            let order = g.aut_group(i).order();
            prop_assert!(g.aut_group(i).is_group());
            for j in 0..g.object_count() {
                prop_assert_eq!(g.hom(i, j).len(), order);
            }
        }
    }

    #[test]
    fn closure_is_idempotent(seed in any::<u64>()) {
        let g = common::random_connected(&mut rng(seed), 3, 3);
        let again = closure_from_generators(g.objects().to_vec(), g.morphisms().to_vec()).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let gs: Vec<_> = (0..3).map(|_| Arc::new(common::random_connected(&mut r, 2, 2))).collect();
        let bound = SearchBound::default();
        let ab = enumerate_morphisms(&gs[0], &gs[1], &bound).unwrap();
        let bc = enumerate_morphisms(&gs[1], &gs[2], &bound).unwrap();
        let id_a = identity_morphism(gs[0].clone());
        for f in &ab {
            prop_assert_eq!(&compose_morphism(&id_a, f).unwrap(), f);
            prop_assert_eq!(&compose_morphism(f, &identity_morphism(gs[1].clone())).unwrap(), f);
            for g in &bc {
                let fg = compose_morphism(f, g).unwrap();
                prop_assert!(fg.validate().is_ok());
                let h = identity_morphism(gs[2].clone());
                prop_assert_eq!(compose_morphism(&fg, &h).unwrap(), compose_morphism(f, &compose_morphism(g, &h).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn extension_round_trips(seed in any::<u64>()) {
        let g = common::random_connected(&mut rng(seed), 3, 3);
        for i in 0..g.object_count() {
            let v = extend_groupoid(&g, i).unwrap();
            prop_assert!(v.validate().is_ok());
            prop_assert!(star_determinacy_check(&v).is_ok());
            prop_assert_eq!(restrict_cover(&v), g.clone());
            prop_assert_eq!(counit_epsilon(&g, i).unwrap(), identity_morphism(Arc::new(g.clone())));
        }
    }

    #[test]
    fn restrictions_are_equivalent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::random_connected(&mut r, 3, 3);
        let g1 = Arc::new(common::random_restriction(&mut r, &g));
        let g2 = Arc::new(common::random_restriction(&mut r, &g));
        let d = decide_equivalence(&g1, &g2).unwrap();
        let w = d.witness.expect("restrictions of one groupoid are equivalent");
        prop_assert!(w.embed_left.validate().is_ok());
        prop_assert!(w.embed_right.validate().is_ok());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let g = common::random_connected(&mut rng(seed), 3, 3);
        for doc in [Document::Groupoid(g.clone()), Document::Cover(extend_groupoid(&g, 0).unwrap())] {
            let text = serialize(&doc);
            let back = parse_document(&text, Path::new(".")).unwrap();
            prop_assert_eq!(serialize(&back), text);
            prop_assert_eq!(back, doc);
        }
    }

    #[test]
    fn candidates_are_judged(seed in any::<u64>()) {
        let c = common::random_candidate(&mut rng(seed));
        let g = c.build();
        if c.mutation == "none" || c.mutation == "duplicate" {
            prop_assert_eq!(g.validate().is_ok(), c.mutation == "none");
        }
    }
}
