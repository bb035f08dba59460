mod common;

use common::{random_coalgebra, random_indexed, rng};
use omegacoalg::bisim::{bounded_bisim, partition_refine};
use omegacoalg::indexed::{
    i_into, i_out, iapproximate, ibounded_bisim, ipartition_refine, iunfold, iuniqueness_probe, iverify_morphism,
    well_sorted, IndexedCoalgebra,
};
use omegacoalg::{approximate, unfold, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn indexed_operations_stay_well_sorted(seed in any::<u64>()) {
        let c = random_indexed(&mut rng(seed));
        let ic = c.base();
        for s in 0..c.len() {
            for n in 0..=20 {
                prop_assert!(well_sorted(ic, &iapproximate(&c, s, n).unwrap()));
            }
            let m = iunfold(&c, s).unwrap();
            prop_assert!(well_sorted(ic, &m.at(20)));
            let (label, children) = i_out(ic, &m).unwrap();
            for (child, &x) in children.iter().zip(c.step(s).1) {
                prop_assert_eq!(&child.sort, c.sort_of(x));
                prop_assert!(well_sorted(ic, &child.at(15)));
                prop_assert!(child.observe_eq(&iunfold(&c, x).unwrap(), 20));
            }
            let back = i_into(ic, m.sort, label, children).unwrap();
            prop_assert!(well_sorted(ic, &back.at(20)));
            prop_assert!(back.observe_eq(&iunfold(&c, s).unwrap(), 20));
        }
        let owned = c.clone();
        prop_assert!(iuniqueness_probe(&c, |s| iunfold(&owned, s).unwrap(), 20).unwrap());
    }

    #[test]
    fn single_sort_embedding_agrees_with_plain(seed in any::<u64>()) {
        let plain = random_coalgebra(&mut rng(seed));
        let c = IndexedCoalgebra::from_plain(&plain, ()).unwrap();
        for s in 0..plain.len() {
            for n in 0..=30 {
                prop_assert_eq!(iapproximate(&c, s, n).unwrap().tree, approximate(&plain, &s, n).unwrap());
            }
            prop_assert!(iunfold(&c, s).unwrap().element.observe_eq(&unfold(&plain, &s), 30));
            for t in 0..plain.len() {
                prop_assert_eq!(ibounded_bisim(&c, s, t, 30).unwrap(), bounded_bisim(&plain, &s, &t, 30).unwrap());
            }
        }
        prop_assert_eq!(ipartition_refine(&c).unwrap(), partition_refine(&plain).unwrap());
    }

    #[test]
    fn bisimilarity_respects_sorts(seed in any::<u64>()) {
        let c = random_indexed(&mut rng(seed));
        let p = ipartition_refine(&c).unwrap();
        for s in 0..c.len() {
            for t in 0..c.len() {
                if c.sort_of(s) == c.sort_of(t) {
                    prop_assert_eq!(p.same_block(&s, &t), ibounded_bisim(&c, s, t, 2 * c.len()).unwrap());
                } else {
                    prop_assert!(!p.same_block(&s, &t));
                    let err = ibounded_bisim(&c, s, t, 3).unwrap_err();
                    prop_assert!(matches!(err, Error::SortMismatch { .. }), "{:?}", err);
                }
            }
        }
    }

    #[test]
    fn shifted_map_fails_the_square(seed in any::<u64>()) {
        let c = random_indexed(&mut rng(seed));
        let owned = c.clone();
        // a map that changes the sort of some state can never be a morphism
        let moved = (0..c.len()).find(|&s| (0..c.len()).any(|t| c.sort_of(t) != c.sort_of(s)));
        if let Some(s0) = moved {
            let other = (0..c.len()).find(|&t| c.sort_of(t) != c.sort_of(s0)).unwrap();
            let f = move |s: usize| iunfold(&owned, if s == s0 { other } else { s }).unwrap();
            prop_assert!(iverify_morphism(&c, f, 5).is_err());
        }
    }
}
