//! Randomized invariant checks for the word algebra and the Z/vZ set
//! transforms. These complement the exhaustive small-order sweeps in the
//! unit tests with arbitrary inputs.

use proptest::prelude::*;

use singer_core::grouppres::{canonical_relator, free_reduce, invert, Letter};
use singer_core::pds::{verify_pds, DiffSet};
use singer_core::tripres::{canonical_rotation, rotations};

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0u32..5, prop_oneof![Just(1i8), Just(-1i8)]), 0..12)
}

proptest! {
    #[test]
    fn free_reduction_is_idempotent_and_kills_inverses(w in letters()) {
        let r = free_reduce(&w);
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert!(r.windows(2).all(|p| p[0] != (p[1].0, -p[1].1)));

        let mut cancel = w.clone();
        cancel.extend(invert(&w));
        prop_assert!(free_reduce(&cancel).is_empty());
    }

    #[test]
    fn inversion_is_an_involution(w in letters()) {
        prop_assert_eq!(invert(&invert(&w)), w);
    }

    #[test]
    fn relator_keys_ignore_rotation_and_inversion(w in letters(), k in 0usize..12) {
        let r = free_reduce(&w);
        // keys are defined on cyclically reduced words
        prop_assume!(!r.is_empty());
        prop_assume!(r.first().unwrap() != &(r.last().unwrap().0, -r.last().unwrap().1));
        let key = canonical_relator(&r);
        let mut rotated = r.clone();
        rotated.rotate_left(k % r.len());
        prop_assert_eq!(canonical_relator(&rotated), key.clone());
        prop_assert_eq!(canonical_relator(&invert(&r)), key);
    }

    #[test]
    fn triple_keys_are_least_rotations(t in prop::array::uniform3(0u64..100)) {
        let c = canonical_rotation(t);
        prop_assert!(rotations(t).contains(&c));
        prop_assert!(rotations(t).iter().all(|r| c <= *r));
        prop_assert_eq!(canonical_rotation(c), c);
    }

    #[test]
    fn set_transforms_compose_affinely(
        u1 in 1u64..13, u2 in 1u64..13, s1 in 0u64..13, s2 in 0u64..13,
    ) {
        // units mod 13 are 1..12, so any nonzero residue works
        let d = DiffSet::new(3, &[0, 1, 3, 9]).unwrap();
        let two_step = d.scale(u1).shift(s1).scale(u2).shift(s2);
        let one_step = d.scale(u2 * u1 % 13).shift((u2 * s1 + s2) % 13);
        prop_assert_eq!(two_step.elems(), one_step.elems());
    }

    #[test]
    fn transformed_sets_stay_perfect(u in 1u64..13, s in 0u64..13) {
        let d = DiffSet::new(3, &[0, 1, 3, 9]).unwrap();
        prop_assert!(verify_pds(d.scale(u).shift(s).elems(), 3).ok);
    }

    #[test]
    fn verification_never_accepts_the_wrong_size(
        cand in prop::collection::btree_set(0u64..13, 0..6),
    ) {
        let cand: Vec<u64> = cand.into_iter().collect();
        let check = verify_pds(&cand, 3);
        if cand.len() != 4 {
            prop_assert!(!check.ok);
        }
    }
}
