//! Randomized invariants over the public API.

use proptest::prelude::*;

use percube::engine;
use percube::hypercube::{CoordPermutation, Dimension, Vertex, WordSet};

fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

fn word_set(d: u32, words: impl IntoIterator<Item = u64>) -> WordSet {
    let mask = (1u64 << d) - 1;
    WordSet::from_words(d, words.into_iter().map(|w| w & mask)).unwrap()
}

fn arb_perm(d: u32) -> impl Strategy<Value = CoordPermutation> {
    Just((1..=d).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|map| CoordPermutation::new(map).unwrap())
}

proptest! {
    // Hamming distance is a metric and neighbours are exactly distance 1.
    #[test]
    fn distance_is_a_metric(d in 1u32..=16, a: u64, b: u64, c: u64) {
        let mask = (1u64 << d) - 1;
        let (a, b, c) = (
            Vertex::new(d, a & mask).unwrap(),
            Vertex::new(d, b & mask).unwrap(),
            Vertex::new(d, c & mask).unwrap(),
        );
        prop_assert_eq!(a.distance(b).unwrap(), b.distance(a).unwrap());
        prop_assert_eq!(a.distance(b).unwrap() == 0, a == b);
        prop_assert!(
            a.distance(c).unwrap() <= a.distance(b).unwrap() + b.distance(c).unwrap()
        );
        for n in a.neighbors() {
            prop_assert_eq!(a.distance(n).unwrap(), 1);
        }
    }

    // Vertex text form round-trips.
    #[test]
    fn vertex_text_round_trips(d in 1u32..=32, w: u64) {
        let v = Vertex::new(d, w & ((1u64 << d) - 1)).unwrap();
        prop_assert_eq!(Vertex::parse_text(&v.to_string()).unwrap(), v);
    }

    // Coordinate permutations and XOR translations are cube automorphisms:
    // infection times transform along with the initial set.
    #[test]
    fn dynamics_commute_with_automorphisms(
        words in proptest::collection::btree_set(0u64..64, 1..20),
        mask in 0u64..64,
        perm in arb_perm(6),
        r in 1u32..=3,
    ) {
        let d = dim(6);
        let initial = word_set(6, words);
        let shift = Vertex::new(6, mask).unwrap();
        let moved = initial.permute_coords(&perm).unwrap().xor_translate(shift).unwrap();
        let base = engine::run(d, r, &initial, false).unwrap();
        let image = engine::run(d, r, &moved, false).unwrap();
        prop_assert_eq!(base.percolated, image.percolated);
        prop_assert_eq!(base.total_time, image.total_time);
        for v in initial.vertices() {
            let w = perm.apply_word(v.bits()) ^ mask;
            prop_assert_eq!(base.time_of(v.bits()), image.time_of(w));
        }
    }

    // Adding initial sites never slows any vertex down.
    #[test]
    fn monotone_in_the_initial_set(
        words in proptest::collection::btree_set(0u64..32, 1..12),
        extra in 0u64..32,
        r in 1u32..=3,
    ) {
        let d = dim(5);
        let small = word_set(5, words.iter().copied());
        let mut bigger = small.clone();
        bigger.insert_word(extra).unwrap();
        let a = engine::run(d, r, &small, false).unwrap();
        let b = engine::run(d, r, &bigger, false).unwrap();
        for w in 0..32u64 {
            match (a.time_of(w), b.time_of(w)) {
                (Some(ta), Some(tb)) => prop_assert!(tb <= ta),
                (None, _) => {}
                (Some(_), None) => prop_assert!(false, "vertex lost infection"),
            }
        }
    }

    // Vertex-set files round-trip through the text format.
    #[test]
    fn word_set_lines_round_trip(
        d in 1u32..=12,
        words in proptest::collection::btree_set(any::<u64>(), 0..40),
    ) {
        let set = word_set(d, words);
        let parsed = WordSet::parse_lines(&set.to_lines(), Some(d)).unwrap();
        prop_assert_eq!(parsed, set);
    }
}
