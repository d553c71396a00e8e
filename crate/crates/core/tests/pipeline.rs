//! End-to-end exercises of the counterexample transport pipeline.

use wreathlab_core::bounded::{
    bounded_consequence_check, Bounds, CheckOutcome, CheckSystem, TargetEq,
};
use wreathlab_core::noether::witness_point;
use wreathlab_core::qcompact::{
    propagate_counterexample, ConsequenceInstance, PipelineOutcome, QError,
};
use wreathlab_core::semigroup::corpus;
use wreathlab_core::solver::DiscriminationConfig;
use wreathlab_core::system::{satisfies, witness_schema, Equation, System, WreathPoint};
use wreathlab_core::term::{SemiWord, Var};
use wreathlab_core::vector::{FinSuppVector, Start};

fn word(letters: &[usize]) -> SemiWord {
    SemiWord::new(letters.iter().map(|&i| Var(i)).collect()).unwrap()
}

/// Target not entailed by the witness schema: same additive parts as
/// instance 0, but the right-hand word reversed.
fn reversed_target() -> Equation {
    Equation::new(word(&[0, 2]), word(&[5, 3]))
}

/// A point satisfying the whole witness schema but violating the reversed
/// target at projection 2.
fn reversed_failing_point(sg: &wreathlab_core::FiniteSemigroupWithZero) -> WreathPoint {
    let e = sg.elem("e").unwrap();
    let z = FinSuppVector::zero(Start::One, sg);
    let p4 = FinSuppVector::new(Start::One, sg.zero(), [(3, e)]).unwrap();
    let p6 = FinSuppVector::new(Start::One, sg.zero(), [(2, e)]).unwrap();
    WreathPoint::new(
        Start::One,
        vec![z.clone(), z.clone(), z.clone(), p4, z, p6],
        vec![1; 6],
    )
    .unwrap()
}

#[test]
fn transport_over_witness_schema_with_reversed_target() {
    let sg = corpus::semilattice2();
    let system = System::new(6, vec![], vec![witness_schema()]).unwrap();
    let inst = ConsequenceInstance::new(system, reversed_target()).unwrap();
    let failing = reversed_failing_point(&sg);

    let outcome =
        propagate_counterexample(&inst, &failing, &sg, &DiscriminationConfig::default()).unwrap();
    let report = match outcome {
        PipelineOutcome::Transported(r) => r,
        other => panic!("expected a transport, got {other:?}"),
    };
    assert_eq!(report.beta, 2);
    assert_eq!(report.t_less.len(), 5);
    assert_eq!(report.star.len(), 4);
    // the final point satisfies the first nine schema instances directly
    let schema = witness_schema();
    for i in 0..=8 {
        let eq = schema.instantiate(i).unwrap();
        assert!(
            satisfies(&report.point, &eq, &sg).unwrap(),
            "final point must satisfy instance {i}"
        );
    }
    assert!(!satisfies(&report.point, &inst.equation, &sg).unwrap());
    // supports stay within the transport bound
    for v in report.point.vectors() {
        assert!(v.support_len() <= report.t_less.len());
    }
    println!("q = {:?}, support = {:?}", report.q, report.support);
}

#[test]
fn transport_rejects_point_satisfying_target() {
    let sg = corpus::semilattice2();
    let system = System::new(6, vec![], vec![witness_schema()]).unwrap();
    let inst = ConsequenceInstance::new(system, reversed_target()).unwrap();
    let all_zero = WreathPoint::new(
        Start::One,
        vec![FinSuppVector::zero(Start::One, &sg); 6],
        vec![1; 6],
    )
    .unwrap();
    let err = propagate_counterexample(&inst, &all_zero, &sg, &DiscriminationConfig::default())
        .unwrap_err();
    assert!(matches!(err, QError::PointSatisfiesTarget));
}

#[test]
fn transport_resolves_inconsistent_additive_system() {
    let sg = corpus::semilattice2();
    // x1 = x1 x1 forces b1 = 2 b1, impossible over positive shifts
    let system = System::new(2, vec![Equation::new(word(&[0]), word(&[0, 0]))], vec![]).unwrap();
    let inst = ConsequenceInstance::new(system, Equation::new(word(&[0]), word(&[1]))).unwrap();
    let any_point = WreathPoint::new(
        Start::One,
        vec![FinSuppVector::zero(Start::One, &sg); 2],
        vec![1; 2],
    )
    .unwrap();
    let outcome =
        propagate_counterexample(&inst, &any_point, &sg, &DiscriminationConfig::default()).unwrap();
    assert!(matches!(
        outcome,
        PipelineOutcome::ResolvedInconsistent { .. }
    ));
}

/// Small instance where the transported point fits in a checkable box: the
/// box oracle must agree that a counterexample exists.
#[test]
fn transport_agrees_with_box_oracle() {
    let sg = corpus::semilattice2();
    let e = sg.elem("e").unwrap();
    // system: the tautology x1 = x1; target: x1 x2 = x2 x1
    let system = System::new(2, vec![Equation::new(word(&[0]), word(&[0]))], vec![]).unwrap();
    let target = Equation::new(word(&[0, 1]), word(&[1, 0]));
    let inst = ConsequenceInstance::new(system, target.clone()).unwrap();
    let v1 = FinSuppVector::new(Start::One, sg.zero(), [(1, e)]).unwrap();
    let v2 = FinSuppVector::new(Start::One, sg.zero(), [(2, e)]).unwrap();
    let failing = WreathPoint::new(Start::One, vec![v1, v2], vec![1, 2]).unwrap();
    assert!(!satisfies(&failing, &target, &sg).unwrap());

    let outcome =
        propagate_counterexample(&inst, &failing, &sg, &DiscriminationConfig::default()).unwrap();
    let report = match outcome {
        PipelineOutcome::Transported(r) => r,
        other => panic!("expected a transport, got {other:?}"),
    };
    let max_support = report.support.iter().max().copied().unwrap_or(1);
    let max_b = report.q.iter().max().copied().unwrap();
    let bounds = Bounds::new(max_support.max(1), max_b.max(2), 100_000_000).unwrap();
    let sys = CheckSystem::of_equations([Equation::new(word(&[0]), word(&[0]))]);
    let out = bounded_consequence_check(&sg, 2, &sys, &TargetEq::full(target), &bounds).unwrap();
    assert!(
        matches!(out, CheckOutcome::Counterexample(_)),
        "box containing the transported point must also contain a counterexample"
    );
}

/// The witness point for n = 1 separates the schema-without-instance-1 from
/// instance 1; transport must reproduce that separation with a small point.
#[test]
fn transport_of_thinned_schema_instance() {
    let sg = corpus::semilattice2();
    let schema = witness_schema();
    let mut thinned = wreathlab_core::system::Schema::new(vec![], vec![], 0);
    let _ = &mut thinned;
    // schema restricted to i >= 2 plus the explicit instance 0
    let tail = {
        let (lhs, rhs) = schema.sides();
        wreathlab_core::system::Schema::new(lhs.clone(), rhs.clone(), 2).unwrap()
    };
    let system = System::new(6, vec![schema.instantiate(0).unwrap()], vec![tail]).unwrap();
    let target = schema.instantiate(1).unwrap();
    let inst = ConsequenceInstance::new(system, target.clone()).unwrap();

    let (failing, _) = witness_point(&sg, 1).unwrap();
    assert!(!satisfies(&failing, &target, &sg).unwrap());

    let outcome =
        propagate_counterexample(&inst, &failing, &sg, &DiscriminationConfig::default()).unwrap();
    let report = match outcome {
        PipelineOutcome::Transported(r) => r,
        other => panic!("expected a transport, got {other:?}"),
    };
    // the final point separates the full system from the target
    assert!(!satisfies(&report.point, &target, &sg).unwrap());
    assert!(satisfies(&report.point, &inst.system.equations[0], &sg).unwrap());
    for i in 2..=10 {
        let eq = schema.instantiate(i).unwrap();
        assert!(satisfies(&report.point, &eq, &sg).unwrap());
    }
}
