//! The two sides of the witness machinery are mutually exclusive on the
//! bundled corpus: either the witness construction succeeds for every small
//! n, or the system collapses to a finite one that the box oracle confirms.

mod common;

use common::rng;
use rand::Rng;

use wreathlab_core::bounded::{bounded_consequence_check_multi, Bounds, CheckSystem, TargetEq};
use wreathlab_core::noether::{
    nilpotency_index, nilpotent_reduce, nonzero_product_witness, verify_noetherian_failure,
};
use wreathlab_core::semigroup::{corpus, Elem, FiniteSemigroupWithZero};
use wreathlab_core::system::{witness_schema, System, WreathPoint};
use wreathlab_core::term::{decompose, SemiWord, Var};
use wreathlab_core::vector::{FinSuppVector, Start};

fn corpus_list() -> Vec<FiniteSemigroupWithZero> {
    vec![
        corpus::semilattice2(),
        corpus::null_semigroup(2),
        corpus::monogenic_nilpotent(4),
        corpus::semilattice_with_null(),
    ]
}

#[test]
fn nilpotency_agrees_with_witness_probe() {
    for sg in corpus_list() {
        let report = nilpotency_index(&sg);
        let probe = nonzero_product_witness(&sg, sg.order() + 1);
        assert_eq!(report.nilpotent, probe.is_none(), "{}", sg.name());
    }
}

#[test]
fn exactly_one_side_of_the_dichotomy_holds() {
    for sg in corpus_list() {
        let report = nilpotency_index(&sg);
        let witness_ok = (1..=5).all(|n| verify_noetherian_failure(&sg, n).is_ok());
        let reduction_ok = match report.index {
            None => false,
            Some(s) => {
                let sys = System::new(6, vec![], vec![witness_schema()]).unwrap();
                let reduced = nilpotent_reduce(&sys, &sg, s).unwrap();
                // mutual consequence with the first five instances in a
                // small box
                let bounds = Bounds::new(2, 2, 100_000_000).unwrap();
                let instances: Vec<_> = (0..5)
                    .map(|i| witness_schema().instantiate(i).unwrap())
                    .collect();
                let forward = bounded_consequence_check_multi(
                    &sg,
                    6,
                    &CheckSystem::from(&reduced),
                    &instances
                        .iter()
                        .cloned()
                        .map(TargetEq::full)
                        .collect::<Vec<_>>(),
                    &bounds,
                )
                .unwrap();
                let mut back_targets: Vec<TargetEq> = reduced
                    .full
                    .iter()
                    .map(|se| TargetEq::full(se.equation.clone()))
                    .collect();
                back_targets.extend(reduced.additive_only.iter().map(|se| TargetEq {
                    equation: se.equation.clone(),
                    additive_only: true,
                }));
                let backward = bounded_consequence_check_multi(
                    &sg,
                    6,
                    &CheckSystem::of_equations(instances),
                    &back_targets,
                    &bounds,
                )
                .unwrap();
                forward.iter().all(|o| o.holds()) && backward.iter().all(|o| o.holds())
            }
        };
        assert_ne!(
            witness_ok,
            reduction_ok,
            "{}: exactly one side must hold",
            sg.name()
        );
        assert_eq!(witness_ok, !report.nilpotent, "{}", sg.name());
    }
}

#[test]
fn long_words_vanish_over_nilpotent_bases() {
    for sg in [corpus::null_semigroup(2), corpus::monogenic_nilpotent(4)] {
        let s = nilpotency_index(&sg).index.unwrap();
        let mut r = rng(0xD1C4_0000 ^ s as u64);
        for _ in 0..1000 {
            let n = 3;
            let len = s + r.gen_range(0..4usize);
            let letters: Vec<Var> = (0..len).map(|_| Var(r.gen_range(0..n))).collect();
            let w = SemiWord::new(letters).unwrap();
            let vectors: Vec<FinSuppVector> = (0..n)
                .map(|_| {
                    let entries: Vec<(u64, Elem)> = (0..r.gen_range(0..5))
                        .map(|_| (r.gen_range(1..8), Elem(r.gen_range(0..sg.order()) as u8)))
                        .collect();
                    FinSuppVector::new(Start::One, sg.zero(), entries).unwrap()
                })
                .collect();
            let bvals: Vec<u64> = (0..n).map(|_| r.gen_range(1..4)).collect();
            let pt = WreathPoint::new(Start::One, vectors, bvals).unwrap();
            let (wt, _) = decompose(&w);
            let value = wt
                .specialize(pt.bvals())
                .unwrap()
                .eval(pt.vectors(), &sg)
                .unwrap();
            assert!(value.is_constant() && value.default_elem() == sg.zero());
        }
    }
}
