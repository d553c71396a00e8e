//! Property tests for the algebraic laws the whole construction rests on.

use proptest::prelude::*;

use wreathlab_core::semigroup::{corpus, Elem, FiniteSemigroupWithZero};
use wreathlab_core::system::{
    eval_word, satisfies_shift_eq_by_window, witness_schema, Equation, WreathPoint,
};
use wreathlab_core::term::{decompose, SemiWord, Var};
use wreathlab_core::vector::{wreath_mul, FinSuppVector, Start, WreathElement};

fn corpus_semigroup(idx: usize) -> FiniteSemigroupWithZero {
    match idx % 4 {
        0 => corpus::semilattice2(),
        1 => corpus::null_semigroup(2),
        2 => corpus::monogenic_nilpotent(4),
        _ => corpus::semilattice_with_null(),
    }
}

prop_compose! {
    fn arb_vector(order: usize)(
        default in 0..order,
        entries in prop::collection::btree_map(1u64..9, 0..order, 0..5),
    ) -> FinSuppVector {
        FinSuppVector::new(
            Start::One,
            Elem(default as u8),
            entries.into_iter().map(|(c, e)| (c, Elem(e as u8))),
        )
        .unwrap()
    }
}

prop_compose! {
    fn arb_element(order: usize)(
        vector in arb_vector(order),
        b in 1u64..5,
    ) -> WreathElement {
        WreathElement { vector, b }
    }
}

prop_compose! {
    fn arb_word(n: usize)(
        letters in prop::collection::vec(0..n, 1..7),
    ) -> SemiWord {
        SemiWord::new(letters.into_iter().map(Var).collect()).unwrap()
    }
}

prop_compose! {
    fn arb_point(order: usize, n: usize)(
        vectors in prop::collection::vec(arb_vector(order), n),
        bvals in prop::collection::vec(1u64..4, n),
    ) -> WreathPoint {
        WreathPoint::new(Start::One, vectors, bvals).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wreath_multiplication_is_associative(
        sg_idx in 0usize..4,
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_element(order), arb_element(order), arb_element(order))
        }),
    ) {
        let _ = sg_idx;
        let (i, a, b, c) = seed;
        let sg = corpus_semigroup(i);
        let left = wreath_mul(&wreath_mul(&a, &b, &sg).unwrap(), &c, &sg).unwrap();
        let right = wreath_mul(&a, &wreath_mul(&b, &c, &sg).unwrap(), &sg).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shift_adds_up(
        seed in (0usize..4).prop_flat_map(|i| (Just(i), arb_vector(corpus_semigroup(i).order()))),
        a in 0u64..6,
        b in 0u64..6,
    ) {
        let (_, v) = seed;
        prop_assert_eq!(v.shift(a).shift(b), v.shift(a + b));
    }

    #[test]
    fn reindex_is_a_bijection_compatible_with_the_operations(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_vector(order), arb_vector(order), 0u64..5)
        }),
    ) {
        let (i, v, w, b) = seed;
        let sg = corpus_semigroup(i);
        prop_assert_eq!(v.reindex().reindex(), v.clone());
        prop_assert_eq!(
            v.pointwise_mul(&w, &sg).unwrap().reindex(),
            v.reindex().pointwise_mul(&w.reindex(), &sg).unwrap()
        );
        prop_assert_eq!(v.shift(b).reindex(), v.reindex().shift(b));
    }

    #[test]
    fn zero_vector_annihilates(
        seed in (0usize..4).prop_flat_map(|i| (Just(i), arb_vector(corpus_semigroup(i).order()))),
    ) {
        let (i, v) = seed;
        let sg = corpus_semigroup(i);
        let zero = FinSuppVector::zero(Start::One, &sg);
        // annihilation needs a zero default on the other side too
        let v0 = FinSuppVector::new(Start::One, sg.zero(), v.support()).unwrap();
        prop_assert_eq!(v0.pointwise_mul(&zero, &sg).unwrap(), zero);
    }

    #[test]
    fn decomposition_matches_direct_evaluation(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_word(3), arb_point(order, 3))
        }),
    ) {
        let (i, w, pt) = seed;
        let sg = corpus_semigroup(i);
        let direct = eval_word(&w, &pt, &sg).unwrap();
        let (wt, bt) = decompose(&w);
        let st = wt.specialize(pt.bvals()).unwrap();
        prop_assert_eq!(direct.vector, st.eval(pt.vectors(), &sg).unwrap());
        prop_assert_eq!(direct.b, bt.eval(pt.bvals()).unwrap());
    }

    #[test]
    fn projections_commute_with_evaluation(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_word(3), arb_point(order, 3))
        }),
    ) {
        let (i, w, pt) = seed;
        let sg = corpus_semigroup(i);
        let (wt, _) = decompose(&w);
        let st = wt.specialize(pt.bvals()).unwrap();
        let value = st.eval(pt.vectors(), &sg).unwrap();
        let hi = pt
            .vectors()
            .iter()
            .filter_map(|v| v.max_support())
            .max()
            .unwrap_or(1)
            + st.max_offset()
            + 2;
        for b in 1..=hi {
            prop_assert_eq!(
                value.get(b),
                st.projection(b).eval(pt.vectors(), &sg).unwrap()
            );
        }
    }

    #[test]
    fn long_words_vanish_on_small_supports(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            // supports confined to at most 3 coordinates, words of length > 3
            (
                Just(i),
                prop::collection::vec(1u64..7, 1..4),
                prop::collection::vec((0usize..3, prop::collection::vec(0usize..order, 3)), 3),
                prop::collection::vec(0usize..3, 4..8),
                prop::collection::vec(1u64..4, 3),
            )
        }),
    ) {
        let (i, site_pool, vec_specs, letters, bvals) = seed;
        let sg = corpus_semigroup(i);
        let sites: Vec<u64> = site_pool;
        let vectors: Vec<FinSuppVector> = vec_specs
            .iter()
            .map(|(_, elems)| {
                FinSuppVector::new(
                    Start::One,
                    sg.zero(),
                    sites
                        .iter()
                        .zip(elems)
                        .map(|(&c, &e)| (c, Elem(e as u8))),
                )
                .unwrap()
            })
            .collect();
        let distinct_sites: std::collections::BTreeSet<u64> = sites.iter().copied().collect();
        prop_assume!(letters.len() > distinct_sites.len());
        let w = SemiWord::new(letters.into_iter().map(Var).collect()).unwrap();
        let (wt, _) = decompose(&w);
        let st = wt.specialize(&bvals).unwrap();
        let value = st.eval(&vectors, &sg).unwrap();
        prop_assert!(value.is_constant());
        prop_assert_eq!(value.default_elem(), sg.zero());
    }

    #[test]
    fn window_check_agrees_with_vector_equality(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_word(3), arb_word(3), arb_point(order, 3))
        }),
    ) {
        let (i, lw, rw, pt) = seed;
        let sg = corpus_semigroup(i);
        let (lt, _) = decompose(&lw);
        let (rt, _) = decompose(&rw);
        let l = lt.specialize(pt.bvals()).unwrap();
        let r = rt.specialize(pt.bvals()).unwrap();
        let by_vectors =
            l.eval(pt.vectors(), &sg).unwrap() == r.eval(pt.vectors(), &sg).unwrap();
        let by_window =
            satisfies_shift_eq_by_window(&l, &r, pt.vectors(), &sg).unwrap();
        prop_assert_eq!(by_vectors, by_window);
    }

    #[test]
    fn shifting_vectors_shifts_evaluations(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_word(3), arb_point(order, 3), 1u64..5)
        }),
    ) {
        let (i, w, pt, beta) = seed;
        let sg = corpus_semigroup(i);
        let (wt, _) = decompose(&w);
        let st = wt.specialize(pt.bvals()).unwrap();
        let original = st.eval(pt.vectors(), &sg).unwrap();
        let shifted_vectors: Vec<FinSuppVector> =
            pt.vectors().iter().map(|v| v.shift(beta - 1)).collect();
        let shifted = st.eval(&shifted_vectors, &sg).unwrap();
        prop_assert_eq!(shifted, original.shift(beta - 1));
    }

    #[test]
    fn doubling_with_all_ones_reproduces_the_value(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_word(3), arb_point(order, 3))
        }),
    ) {
        let (i, w, pt) = seed;
        let sg = corpus_semigroup(i);
        let base = sg.adjoin_unit().unwrap();
        let one = base.unit().unwrap();
        let n = 3;
        let mut vectors: Vec<FinSuppVector> =
            pt.vectors().iter().map(|v| v.reindex()).collect();
        vectors.extend((0..n).map(|_| FinSuppVector::constant(Start::Zero, one)));
        let mut bvals = pt.bvals().to_vec();
        bvals.extend([0; 3]);
        let doubled_pt = WreathPoint::new(Start::Zero, vectors, bvals).unwrap();
        let doubled = eval_word(&w.doubled(n), &doubled_pt, &base).unwrap();
        let plain = eval_word(&w, &pt, &sg).unwrap();
        prop_assert_eq!(doubled.vector, plain.vector.reindex());
        prop_assert_eq!(doubled.b, plain.b);
    }

    #[test]
    fn grouping_does_not_matter_for_word_evaluation(
        seed in (0usize..4).prop_flat_map(|i| {
            let order = corpus_semigroup(i).order();
            (Just(i), arb_word(3), arb_point(order, 3))
        }),
    ) {
        let (i, w, pt) = seed;
        let sg = corpus_semigroup(i);
        let left_fold = eval_word(&w, &pt, &sg).unwrap();
        // right fold over the letters
        let mut letters: Vec<WreathElement> = w
            .letters()
            .iter()
            .map(|&v| pt.value_of(v).unwrap())
            .collect();
        let mut acc = letters.pop().unwrap();
        while let Some(prev) = letters.pop() {
            acc = wreath_mul(&prev, &acc, &sg).unwrap();
        }
        prop_assert_eq!(left_fold, acc);
    }

    #[test]
    fn doubling_schema_commutes_with_instantiation(idx in 0u64..6) {
        let schema = witness_schema();
        let direct: Equation = schema.instantiate(idx).unwrap().doubled(6);
        let via_schema = schema.doubled(6).instantiate(idx).unwrap();
        prop_assert_eq!(direct, via_schema);
    }
}
