//! Counterexample transport: from a point separating a finite star subsystem
//! from a candidate consequence, to a finitely supported point separating the
//! full infinite system from it.
//!
//! The pipeline stages, each machine-checked as it runs:
//!
//! 1. additive precheck: extract the finite equivalent subsystem of the
//!    additive parts; an inconsistent additive system resolves the instance
//!    outright, and additive parts that are not equivalent refute it with an
//!    explicit witness tuple;
//! 2. the star subsystem: the extracted subsystem plus every equation with a
//!    short additive side, short meaning at most the size of the downward
//!    closure of the target's additive part (zero adjoined);
//! 3. shift-to-first: a failing projection is moved into position one by
//!    shifting every vector;
//! 4. variable doubling: each variable splits into a carrier and an all-ones
//!    companion over the unit-adjoined base, moving to start index zero;
//! 5. discrimination: a solution tuple at which all relevant terms take
//!    pairwise distinct values indexes the transported coordinates;
//! 6. transport and recombination: coordinates are re-addressed through the
//!    term values, producing a point with uniformly bounded supports that
//!    still satisfies the star subsystem and still fails the target; bounded
//!    supports make every long excluded equation vanish identically.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::semigroup::{FiniteSemigroupWithZero, SemigroupError};
use crate::solver::{
    discriminating_point, finite_equivalent_subsystem, AdditiveSchema, Discrimination,
    DiscriminationConfig, Domain, SolutionBasis, SolveError, StreamRef,
};
use crate::system::{
    eval_vector_parts, satisfies, EqRef, Equation, SysEq, System, SystemError, WreathPoint,
};
use crate::term::{AddTerm, AddTermOrZero, TermError};
use crate::vector::{FinSuppVector, Start, VectorError};

#[derive(Debug, Error)]
pub enum QError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Vector(#[from] VectorError),
    #[error("the point does not satisfy `{eq}`")]
    PointNotSolution { eq: String },
    #[error("the point satisfies the target equation; nothing to transport")]
    PointSatisfiesTarget,
    #[error("internal consistency check failed: {0}")]
    InternalCheck(String),
}

/// A system paired with a candidate consequence equation. The inclusion of
/// the system's solution set in the equation's is never decided over the
/// infinite point space; the status records how far it has been examined.
#[derive(Debug, Clone)]
pub struct ConsequenceInstance {
    pub system: System,
    pub equation: Equation,
    pub status: InclusionStatus,
}

/// How far the instance's inclusion claim has been examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InclusionStatus {
    Assumed,
    BoundedVerified,
    Refuted,
}

impl InclusionStatus {
    pub fn name(self) -> &'static str {
        match self {
            InclusionStatus::Assumed => "assumed",
            InclusionStatus::BoundedVerified => "bounded-verified",
            InclusionStatus::Refuted => "refuted",
        }
    }
}

impl ConsequenceInstance {
    pub fn new(system: System, equation: Equation) -> Result<Self, SystemError> {
        if equation.max_var() >= system.arity() {
            return Err(SystemError::VarOutOfRange(
                crate::term::Var(equation.max_var()),
                system.arity(),
            ));
        }
        Ok(Self {
            system,
            equation,
            status: InclusionStatus::Assumed,
        })
    }

    /// Records the outcome of an examination; a refutation is never
    /// downgraded.
    pub fn record(&mut self, status: InclusionStatus) {
        if self.status != InclusionStatus::Refuted {
            self.status = status;
        }
    }

    fn additive_stream(&self) -> (Vec<(AddTerm, AddTerm)>, Vec<AdditiveSchema>) {
        let n = self.system.arity();
        let finite = self
            .system
            .equations
            .iter()
            .map(|eq| eq.additive_parts())
            .collect();
        let schemas = self
            .system
            .schemas
            .iter()
            .map(|sc| {
                let (lhs, rhs) = sc.additive_affine(n);
                AdditiveSchema {
                    lhs,
                    rhs,
                    min_index: sc.min_index(),
                }
            })
            .collect();
        (finite, schemas)
    }

    fn resolve_ref(&self, r: StreamRef) -> Result<SysEq, QError> {
        Ok(match r {
            StreamRef::Finite(i) => SysEq {
                source: EqRef::Explicit(i),
                equation: self.system.equations[i].clone(),
            },
            StreamRef::Instance { schema, index } => SysEq {
                source: EqRef::Instance { schema, index },
                equation: self.system.schemas[schema].instantiate(index)?,
            },
        })
    }
}

/// Result of the additive-level examination of an instance.
#[derive(Debug, Clone)]
pub struct BPrecheck {
    pub s_hat: Vec<SysEq>,
    pub basis: SolutionBasis,
    pub outcome: BOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BOutcome {
    /// The additive system is inconsistent; the extracted subsystem already
    /// has an empty solution set, which settles the inclusion.
    Inconsistent,
    /// The target's additive parts differ at the witness tuple, refuting the
    /// inclusion at the additive level.
    NotEquivalent { witness: Vec<u64> },
    /// The target's additive parts agree on every solution.
    Equivalent,
}

/// Extracts the finite additive subsystem and tests the target's additive
/// parts against it.
pub fn check_b_precondition(inst: &ConsequenceInstance) -> Result<BPrecheck, QError> {
    let n = inst.system.arity();
    let (finite, schemas) = inst.additive_stream();
    let sub = finite_equivalent_subsystem(n, Domain::Positive, &finite, &schemas)?;
    let s_hat = sub
        .kept
        .iter()
        .map(|(r, _)| inst.resolve_ref(*r))
        .collect::<Result<Vec<_>, _>>()?;
    let basis = sub.basis;
    if basis.is_empty() {
        return Ok(BPrecheck {
            s_hat,
            basis,
            outcome: BOutcome::Inconsistent,
        });
    }
    let (tb, sb) = inst.equation.additive_parts();
    if basis.term_equiv(&tb, &sb)? {
        return Ok(BPrecheck {
            s_hat,
            basis,
            outcome: BOutcome::Equivalent,
        });
    }
    // build a concrete solution where the two sides differ
    let mut witness = None;
    'search: for p in &basis.particular {
        if tb.eval(p)? != sb.eval(p)? {
            witness = Some(p.clone());
            break;
        }
        for h in &basis.homogeneous {
            let q: Vec<u64> = p.iter().zip(h).map(|(&a, &b)| a + b).collect();
            if tb.eval(&q)? != sb.eval(&q)? {
                witness = Some(q);
                break 'search;
            }
        }
    }
    let witness = witness.ok_or_else(|| {
        QError::InternalCheck("non-equivalent additive parts admit a separating solution".into())
    })?;
    Ok(BPrecheck {
        s_hat,
        basis,
        outcome: BOutcome::NotEquivalent { witness },
    })
}

/// The downward closure of the target's additive part with the zero term
/// adjoined. Both sides yield the same set; this is asserted.
pub fn less_set(basis: &SolutionBasis, eq: &Equation) -> Result<Vec<AddTermOrZero>, QError> {
    let (tb, sb) = eq.additive_parts();
    let left: BTreeSet<AddTerm> = basis.down_set(&tb)?.into_iter().collect();
    let right: BTreeSet<AddTerm> = basis.down_set(&sb)?.into_iter().collect();
    if left != right {
        return Err(QError::InternalCheck(
            "downward closures of equivalent sides differ".into(),
        ));
    }
    let mut out = vec![AddTermOrZero::Zero];
    out.extend(left.into_iter().map(AddTermOrZero::Term));
    Ok(out)
}

/// The star subsystem and everything computed on the way to it.
#[derive(Debug, Clone)]
pub struct StarReport {
    pub s_hat: Vec<SysEq>,
    pub basis: SolutionBasis,
    pub t_less: Vec<AddTermOrZero>,
    pub star: Vec<SysEq>,
}

#[derive(Debug, Clone)]
pub enum StarOutcome {
    /// Inconsistent additive part: the extracted subsystem is the certificate.
    ResolvedInconsistent {
        s_hat: Vec<SysEq>,
    },
    /// The target fails at the additive level at the witness tuple.
    RefutedAdditive {
        s_hat: Vec<SysEq>,
        witness: Vec<u64>,
    },
    Star(StarReport),
}

/// Computes the star subsystem: the extracted additive subsystem plus every
/// system equation one of whose additive sides is at most as long as the
/// downward-closure set.
pub fn star_subsystem(inst: &ConsequenceInstance) -> Result<StarOutcome, QError> {
    let pre = check_b_precondition(inst)?;
    match pre.outcome {
        BOutcome::Inconsistent => {
            return Ok(StarOutcome::ResolvedInconsistent { s_hat: pre.s_hat })
        }
        BOutcome::NotEquivalent { witness } => {
            return Ok(StarOutcome::RefutedAdditive {
                s_hat: pre.s_hat,
                witness,
            })
        }
        BOutcome::Equivalent => {}
    }
    let t_less = less_set(&pre.basis, &inst.equation)?;
    let limit = t_less.len() as u64;
    let mut star: Vec<SysEq> = Vec::new();
    let mut seen: BTreeSet<EqRef> = BTreeSet::new();
    for se in &pre.s_hat {
        if seen.insert(se.source) {
            star.push(se.clone());
        }
    }
    let keep = |eq: &Equation| {
        let (tb, sb) = eq.additive_parts();
        tb.len() <= limit || sb.len() <= limit
    };
    for (i, eq) in inst.system.equations.iter().enumerate() {
        if keep(eq) && seen.insert(EqRef::Explicit(i)) {
            star.push(SysEq {
                source: EqRef::Explicit(i),
                equation: eq.clone(),
            });
        }
    }
    for (si, schema) in inst.system.schemas.iter().enumerate() {
        let (laf, raf) = schema.additive_affine(inst.system.arity());
        let mut i = schema.min_index();
        // both side lengths grow strictly, so the filter selects a prefix
        while laf_len(&lf(&laf, i)) <= limit || laf_len(&lf(&raf, i)) <= limit {
            let source = EqRef::Instance {
                schema: si,
                index: i,
            };
            if seen.insert(source) {
                star.push(SysEq {
                    source,
                    equation: schema.instantiate(i)?,
                });
            }
            i += 1;
        }
    }
    Ok(StarOutcome::Star(StarReport {
        s_hat: pre.s_hat,
        basis: pre.basis,
        t_less,
        star,
    }))
}

fn lf(f: &crate::system::AffineForm, i: u64) -> Vec<u64> {
    f.at(i)
}

fn laf_len(coeffs: &[u64]) -> u64 {
    coeffs.iter().sum()
}

/// Shifts every vector down by beta - 1, so that what held at projection
/// b + (beta - 1) now holds at projection b.
pub fn shift_to_first(vectors: &[FinSuppVector], beta: u64) -> Vec<FinSuppVector> {
    assert!(beta >= 1);
    vectors.iter().map(|v| v.shift(beta - 1)).collect()
}

/// The least coordinate where the two evaluated sides of the equation differ,
/// or None when the point satisfies the equation's vector part.
pub fn find_failing_projection(
    eq: &Equation,
    pt: &WreathPoint,
    sg: &FiniteSemigroupWithZero,
) -> Result<Option<u64>, QError> {
    let (l, r) = eval_vector_parts(eq, pt, sg)?;
    if l == r {
        return Ok(None);
    }
    let start = pt.start().min_coord();
    let hi = l
        .max_support()
        .into_iter()
        .chain(r.max_support())
        .max()
        .map(|m| m + 1)
        .unwrap_or(start);
    for b in start..=hi {
        if l.get(b) != r.get(b) {
            return Ok(Some(b));
        }
    }
    Err(QError::InternalCheck(
        "vectors differ but no differing coordinate found".into(),
    ))
}

/// The doubled data: the unit-adjoined base, the doubled equations, and the
/// doubled point whose first block carries the original vectors reindexed to
/// start zero and whose second block is all ones.
#[derive(Debug, Clone)]
pub struct DoubledLift {
    pub base: FiniteSemigroupWithZero,
    pub star_doubled: Vec<Equation>,
    pub target_doubled: Equation,
    pub point: WreathPoint,
}

/// Builds the doubled world and verifies the three lifting claims: the
/// doubled shift tuple solves the doubled additive parts, the doubled point
/// solves the doubled star equations, and projection zero of the doubled
/// target still fails.
pub fn lift_to_doubled(
    sg: &FiniteSemigroupWithZero,
    star: &[SysEq],
    target: &Equation,
    vectors: &[FinSuppVector],
    shifts: &[u64],
) -> Result<DoubledLift, QError> {
    let n = vectors.len();
    let base = sg.adjoin_unit()?;
    let one = base.unit().expect("unit was adjoined");
    let mut doubled_vectors: Vec<FinSuppVector> = vectors.iter().map(|v| v.reindex()).collect();
    doubled_vectors.extend((0..n).map(|_| FinSuppVector::constant(Start::Zero, one)));
    let mut doubled_shifts: Vec<u64> = shifts.to_vec();
    doubled_shifts.extend(std::iter::repeat_n(0, n));
    let point = WreathPoint::new(Start::Zero, doubled_vectors, doubled_shifts)?;
    let star_doubled: Vec<Equation> = star.iter().map(|se| se.equation.doubled(n)).collect();
    let target_doubled = target.doubled(n);
    for (se, deq) in star.iter().zip(&star_doubled) {
        let (tb, sb) = deq.additive_parts();
        if tb.eval(point.bvals())? != sb.eval(point.bvals())? {
            return Err(QError::InternalCheck(format!(
                "doubled additive part of {} fails at the doubled shifts",
                se.source
            )));
        }
        if !satisfies(&point, deq, &base)? {
            return Err(QError::InternalCheck(format!(
                "doubled point does not satisfy doubled {}",
                se.source
            )));
        }
    }
    let (l, r) = eval_vector_parts(&target_doubled, &point, &base)?;
    if l.get(0) == r.get(0) {
        return Err(QError::InternalCheck(
            "projection zero of the doubled target unexpectedly holds".into(),
        ));
    }
    Ok(DoubledLift {
        base,
        star_doubled,
        target_doubled,
        point,
    })
}

/// All additive-side terms of the star subsystem together with their downward
/// closures. Contains, up to equivalence, every prefix of every star word;
/// this is asserted.
pub fn prefix_terms(star: &[SysEq], basis: &SolutionBasis) -> Result<Vec<AddTerm>, QError> {
    let mut out: BTreeSet<AddTerm> = BTreeSet::new();
    for se in star {
        let (tb, sb) = se.equation.additive_parts();
        for side in [&tb, &sb] {
            out.insert(side.clone());
            for s in basis.down_set(side)? {
                out.insert(s);
            }
        }
    }
    for se in star {
        for word in [&se.equation.lhs, &se.equation.rhs] {
            let mut prefix: Option<AddTerm> = None;
            for &v in word.letters() {
                let next = match &prefix {
                    None => AddTerm::var(v),
                    Some(p) => p.add(&AddTerm::var(v)),
                };
                let mut matched = false;
                for u in &out {
                    if basis.term_equiv(&next, u)? {
                        matched = true;
                        break;
                    }
                }
                if !matched {
                    return Err(QError::InternalCheck(format!(
                        "prefix {next} of {} has no equivalent member",
                        se.equation
                    )));
                }
                prefix = Some(next);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The transport address set: the downward closure of the target's additive
/// part, the zero term, and the additive part itself.
///
/// The target's own additive part must be addressable: the companion factor
/// of the last letter of each doubled target side sits at the coordinate the
/// whole additive part takes, and losing it collapses both sides of the
/// zeroth projection to zero. Including it costs one extra coordinate, and a
/// k-letter word needs k+1 addressed coordinates to survive, so equations
/// filtered out by the downward-closure length still vanish.
pub fn transport_address_set(t_less: &[AddTermOrZero], target: &Equation) -> Vec<AddTermOrZero> {
    let (tb, _) = target.additive_parts();
    let mut out: BTreeSet<AddTermOrZero> = t_less.iter().cloned().collect();
    out.insert(AddTermOrZero::Term(tb));
    out.into_iter().collect()
}

/// The transport index set: every sum of an address-set member and a prefix
/// term, together with the address set itself.
pub fn transport_terms(address: &[AddTermOrZero], t_star: &[AddTerm]) -> Vec<AddTermOrZero> {
    let mut out: BTreeSet<AddTermOrZero> = address.iter().cloned().collect();
    for t in address {
        for s in t_star {
            out.insert(AddTermOrZero::Term(t.plus(s)));
        }
    }
    out.into_iter().collect()
}

/// Discriminating tuple for the transport set over the star basis.
pub fn build_q(
    terms: &[AddTermOrZero],
    basis: &SolutionBasis,
    cfg: &DiscriminationConfig,
) -> Result<Discrimination, QError> {
    Ok(discriminating_point(terms, basis, cfg)?)
}

/// Re-addresses the doubled point's coordinates through the term values:
/// coordinate s(Q) of the result takes the value at coordinate s(P) of the
/// input, everything else becomes zero. Well-definedness (equal values at Q
/// force equal values at P) is checked.
pub fn transport_points(
    p_first: &[FinSuppVector],
    p_second: &[FinSuppVector],
    p: &[u64],
    q: &[u64],
    t_less: &[AddTermOrZero],
    base: &FiniteSemigroupWithZero,
) -> Result<(Vec<FinSuppVector>, Vec<FinSuppVector>), QError> {
    let mut address: BTreeMap<u64, u64> = BTreeMap::new();
    for s in t_less {
        let b = s.eval(q)?;
        let c = s.eval(p)?;
        if let Some(&prev) = address.get(&b) {
            if prev != c {
                return Err(QError::InternalCheck(format!(
                    "transport is not well-defined at coordinate {b}"
                )));
            }
        } else {
            address.insert(b, c);
        }
    }
    let zero = base.zero();
    let build = |src: &FinSuppVector| -> Result<FinSuppVector, QError> {
        Ok(FinSuppVector::new(
            Start::Zero,
            zero,
            address.iter().map(|(&b, &c)| (b, src.get(c))),
        )?)
    };
    let first = p_first.iter().map(&build).collect::<Result<Vec<_>, _>>()?;
    let second = p_second.iter().map(&build).collect::<Result<Vec<_>, _>>()?;
    Ok((first, second))
}

/// Re-checks the transported pair against the doubled star system at the
/// discriminating shifts, and that projection zero of the doubled target
/// still fails.
pub fn verify_transport(
    lift: &DoubledLift,
    q_first: &[FinSuppVector],
    q_second: &[FinSuppVector],
    q: &[u64],
) -> Result<WreathPoint, QError> {
    let n = q_first.len();
    let mut vectors = q_first.to_vec();
    vectors.extend_from_slice(q_second);
    let mut shifts = q.to_vec();
    shifts.extend(std::iter::repeat_n(0, n));
    let point = WreathPoint::new(Start::Zero, vectors, shifts)?;
    for deq in &lift.star_doubled {
        let (tb, sb) = deq.additive_parts();
        if tb.eval(point.bvals())? != sb.eval(point.bvals())? {
            return Err(QError::InternalCheck(
                "doubled additive part fails at the discriminating shifts".into(),
            ));
        }
        if !satisfies(&point, deq, &lift.base)? {
            return Err(QError::InternalCheck(format!(
                "transported point does not satisfy doubled `{deq}`"
            )));
        }
    }
    let (l, r) = eval_vector_parts(&lift.target_doubled, &point, &lift.base)?;
    if l.get(0) == r.get(0) {
        return Err(QError::InternalCheck(
            "projection zero of the doubled target holds after transport".into(),
        ));
    }
    Ok(point)
}

/// Collapses the doubled pair back to single variables over the original
/// base: each vector is the pointwise product of its carrier with its shifted
/// companion, reindexed to start one. The result must not contain the
/// adjoined unit; this is asserted.
pub fn recombine(
    q_first: &[FinSuppVector],
    q_second: &[FinSuppVector],
    q: &[u64],
    base: &FiniteSemigroupWithZero,
) -> Result<Vec<FinSuppVector>, QError> {
    let unit = base
        .unit()
        .expect("recombination runs over the unit-adjoined base");
    let mut out = Vec::with_capacity(q_first.len());
    for (i, (qf, qs)) in q_first.iter().zip(q_second).enumerate() {
        let combined = qf.pointwise_mul(&qs.shift(q[i]), base)?;
        let vec = combined.reindex();
        if vec.default_elem() == unit || vec.support().any(|(_, e)| e == unit) {
            return Err(QError::InternalCheck(
                "recombined vector contains the adjoined unit".into(),
            ));
        }
        out.push(vec);
    }
    Ok(out)
}

/// Everything the transport produced, stage by stage.
#[derive(Debug, Clone)]
pub struct TransportReport {
    /// The projection the input point failed, before shifting.
    pub beta: u64,
    pub s_hat: Vec<SysEq>,
    pub t_less: Vec<AddTermOrZero>,
    pub star: Vec<SysEq>,
    pub t_star: Vec<AddTerm>,
    /// The address set: the downward closure plus the target's additive part.
    pub transport_address: Vec<AddTermOrZero>,
    pub transport_set: Vec<AddTermOrZero>,
    /// The discriminating tuple and its value table over the transport set.
    pub q: Vec<u64>,
    pub q_values: Vec<u64>,
    /// The final point over the original base, start index one.
    pub point: WreathPoint,
    /// Union of all vector supports of the final point.
    pub support: Vec<u64>,
    /// Excluded schema instances re-checked by direct evaluation.
    pub spot_checked: Vec<(usize, u64)>,
}

#[derive(Debug, Clone)]
pub enum PipelineOutcome {
    ResolvedInconsistent {
        s_hat: Vec<SysEq>,
    },
    RefutedAdditive {
        s_hat: Vec<SysEq>,
        witness: Vec<u64>,
    },
    Transported(Box<TransportReport>),
}

/// Number of excluded schema instances re-checked by direct evaluation after
/// a transport.
const SPOT_CHECK_INSTANCES: u64 = 3;

/// Runs the full pipeline on a point separating the star subsystem from the
/// target equation, producing a point that separates the whole system from
/// it.
pub fn propagate_counterexample(
    inst: &ConsequenceInstance,
    failing: &WreathPoint,
    sg: &FiniteSemigroupWithZero,
    cfg: &DiscriminationConfig,
) -> Result<PipelineOutcome, QError> {
    let report = match star_subsystem(inst)? {
        StarOutcome::ResolvedInconsistent { s_hat } => {
            return Ok(PipelineOutcome::ResolvedInconsistent { s_hat })
        }
        StarOutcome::RefutedAdditive { s_hat, witness } => {
            return Ok(PipelineOutcome::RefutedAdditive { s_hat, witness })
        }
        StarOutcome::Star(r) => r,
    };
    // precondition: the point solves the star subsystem and fails the target
    for se in &report.star {
        if !satisfies(failing, &se.equation, sg)? {
            return Err(QError::PointNotSolution {
                eq: se.equation.to_string(),
            });
        }
    }
    if satisfies(failing, &inst.equation, sg)? {
        return Err(QError::PointSatisfiesTarget);
    }
    let (tb, sb) = inst.equation.additive_parts();
    if tb.eval(failing.bvals())? != sb.eval(failing.bvals())? {
        return Err(QError::InternalCheck(
            "target additive part fails although it is equivalent on the solution set".into(),
        ));
    }
    let beta = find_failing_projection(&inst.equation, failing, sg)?
        .ok_or_else(|| QError::InternalCheck("no failing projection found".into()))?;

    // stage: move the failure into the first projection
    let shifted = shift_to_first(failing.vectors(), beta);
    let shifted_point = WreathPoint::new(Start::One, shifted.clone(), failing.bvals().to_vec())?;
    for se in &report.star {
        if !satisfies(&shifted_point, &se.equation, sg)? {
            return Err(QError::InternalCheck(format!(
                "shifted point lost {}",
                se.source
            )));
        }
    }
    if find_failing_projection(&inst.equation, &shifted_point, sg)? != Some(1) {
        return Err(QError::InternalCheck(
            "shifting did not move the failure to the first projection".into(),
        ));
    }

    // stage: double the variables over the unit-adjoined base
    let lift = lift_to_doubled(sg, &report.star, &inst.equation, &shifted, failing.bvals())?;

    // stage: discrimination over the transport set
    let t_star = prefix_terms(&report.star, &report.basis)?;
    let address = transport_address_set(&report.t_less, &inst.equation);
    let transport_set = transport_terms(&address, &t_star);
    debug_assert!(address.iter().all(|t| transport_set.contains(t)));
    debug_assert!(t_star
        .iter()
        .all(|s| transport_set.contains(&AddTermOrZero::Term(s.clone()))));
    let disc = build_q(&transport_set, &report.basis, cfg)?;

    // stage: transport and verification in the doubled world
    let n = inst.system.arity();
    let (p_first, p_second) = lift.point.vectors().split_at(n);
    let (q_first, q_second) = transport_points(
        p_first,
        p_second,
        failing.bvals(),
        &disc.point,
        &address,
        &lift.base,
    )?;
    verify_transport(&lift, &q_first, &q_second, &disc.point)?;

    // stage: recombination back to single variables
    let final_vectors = recombine(&q_first, &q_second, &disc.point, &lift.base)?;
    let point = WreathPoint::new(Start::One, final_vectors, disc.point.clone())?;

    let bound = address.len();
    let mut support: BTreeSet<u64> = BTreeSet::new();
    for v in point.vectors() {
        support.extend(v.support().map(|(c, _)| c));
        if v.support_len() > bound {
            return Err(QError::InternalCheck(
                "a transported vector has more nonzero coordinates than the bound".into(),
            ));
        }
    }
    if support.len() > bound {
        return Err(QError::InternalCheck(
            "the union of transported supports exceeds the bound".into(),
        ));
    }

    // final membership checks over the original base
    for se in &report.star {
        if !satisfies(&point, &se.equation, sg)? {
            return Err(QError::InternalCheck(format!(
                "final point does not satisfy {}",
                se.source
            )));
        }
    }
    if find_failing_projection(&inst.equation, &point, sg)? != Some(1) {
        return Err(QError::InternalCheck(
            "final point does not fail the first projection of the target".into(),
        ));
    }
    if tb.eval(point.bvals())? != sb.eval(point.bvals())? {
        return Err(QError::InternalCheck(
            "final shifts do not satisfy the target's additive part".into(),
        ));
    }
    // excluded explicit equations are all short enough to check directly
    let star_refs: BTreeSet<EqRef> = report.star.iter().map(|se| se.source).collect();
    for (i, eq) in inst.system.equations.iter().enumerate() {
        if !star_refs.contains(&EqRef::Explicit(i)) && !satisfies(&point, eq, sg)? {
            return Err(QError::InternalCheck(format!(
                "final point does not satisfy excluded equation {eq}"
            )));
        }
    }
    // excluded schema instances: both their sides exceed the downward-closure
    // length, and a side of k letters needs k+1 addressed coordinates to
    // survive, so they vanish identically; spot-check the first few by
    // direct evaluation
    let filter_limit = report.t_less.len() as u64;
    let mut spot_checked = Vec::new();
    for (si, schema) in inst.system.schemas.iter().enumerate() {
        let mut first_excluded = schema.min_index();
        while star_refs.contains(&EqRef::Instance {
            schema: si,
            index: first_excluded,
        }) {
            first_excluded += 1;
        }
        for i in first_excluded..first_excluded + SPOT_CHECK_INSTANCES {
            let eq = schema.instantiate(i)?;
            let (etb, esb) = eq.additive_parts();
            if etb.len() <= filter_limit || esb.len() <= filter_limit {
                return Err(QError::InternalCheck(
                    "an excluded instance has a short side".into(),
                ));
            }
            if !satisfies(&point, &eq, sg)? {
                return Err(QError::InternalCheck(format!(
                    "final point does not satisfy excluded instance {eq}"
                )));
            }
            spot_checked.push((si, i));
        }
    }

    Ok(PipelineOutcome::Transported(Box::new(TransportReport {
        beta,
        s_hat: report.s_hat,
        t_less: report.t_less,
        star: report.star,
        t_star,
        transport_address: address,
        transport_set,
        q: disc.point,
        q_values: disc.values,
        point,
        support: support.into_iter().collect(),
        spot_checked,
    })))
}
