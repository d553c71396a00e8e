//! Exact solving of additive equation systems over the positive integers and
//! the nonnegative integers.
//!
//! The solution set of a linear system over the naturals is represented by
//! its minimal particular solutions plus the Hilbert basis of the associated
//! homogeneous system; both are computed by a completion procedure that grows
//! candidate vectors coordinate by coordinate, extends only along descent
//! directions of the defect, and prunes everything dominated by an already
//! found minimal solution. Positive domains are reduced to the naturals by
//! the substitution x = y + 1.
//!
//! On top of the basis sit the term equivalence relation (equality on every
//! solution), the strict order `s < t` (some nonempty term completes s to t),
//! downward closures, finite equivalent subsystems of schema streams, and
//! discriminating points.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::system::AffineForm;
use crate::term::{AddTerm, AddTermOrZero, TermError};

/// Solution domain: positive integers or nonnegative integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Positive,
    Nonneg,
}

impl Domain {
    pub fn min_value(self) -> u64 {
        match self {
            Domain::Positive => 1,
            Domain::Nonneg => 0,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("completion exceeded its candidate budget ({0})")]
    CompletionBudget(usize),
    #[error("operation requires the positive domain")]
    PositiveDomainRequired,
    #[error("operation requires a consistent basis")]
    InconsistentBasis,
    #[error("discrimination search exhausted; could not separate `{t1}` from `{t2}`")]
    DiscriminationExhausted { t1: String, t2: String },
    #[error("schema scan did not stabilize within {0} instances")]
    SchemaScanExhausted(u64),
    #[error("arithmetic overflow during search")]
    Overflow,
    #[error("schema side degenerates to the empty sum at index {0}")]
    EmptySchemaSide(u64),
}

/// A finite system of additive equations over a fixed variable count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinSystem {
    pub n: usize,
    pub domain: Domain,
    pub equations: Vec<(AddTerm, AddTerm)>,
}

impl LinSystem {
    pub fn new(n: usize, domain: Domain, equations: Vec<(AddTerm, AddTerm)>) -> Self {
        for (l, r) in &equations {
            assert!(
                l.max_var() < n && r.max_var() < n,
                "coefficients confined to n variables"
            );
        }
        Self {
            n,
            domain,
            equations,
        }
    }

    pub fn satisfied_by(&self, point: &[u64]) -> Result<bool, SolveError> {
        if point.iter().any(|&p| p < self.domain.min_value()) {
            return Ok(false);
        }
        for (l, r) in &self.equations {
            if l.eval(point)? != r.eval(point)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One row of an integer system sum(coeffs[j] * x_j) = constant over the
/// naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Row {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

const COMPLETION_BUDGET: usize = 4_000_000;

/// Minimal nonzero solutions of the homogeneous system given by columns.
///
/// `cols[j]` is the defect contribution of incrementing variable j. Candidates
/// are grown breadth-first; a non-solution t is extended by e_j only when the
/// defect of t and the defect of e_j point in opposing directions, and every
/// candidate dominated by a found minimal solution is dropped.
fn complete_minimal(cols: &[Vec<i64>], budget: usize) -> Result<Vec<Vec<u64>>, SolveError> {
    let n = cols.len();
    let mut minimals: Vec<Vec<u64>> = Vec::new();
    let mut frontier: BTreeMap<Vec<u64>, Vec<i64>> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        let mut unit = vec![0u64; n];
        unit[j] = 1;
        frontier.insert(unit, col.clone());
    }
    let mut processed = 0usize;
    while !frontier.is_empty() {
        let mut next: BTreeMap<Vec<u64>, Vec<i64>> = BTreeMap::new();
        let mut level_solutions: Vec<Vec<u64>> = Vec::new();
        for (cand, defect) in &frontier {
            processed += 1;
            if processed > budget {
                return Err(SolveError::CompletionBudget(budget));
            }
            if defect.iter().all(|&d| d == 0) {
                level_solutions.push(cand.clone());
            }
        }
        minimals.extend(level_solutions);
        for (cand, defect) in frontier {
            if defect.iter().all(|&d| d == 0) {
                continue;
            }
            for (j, col) in cols.iter().enumerate() {
                let descent: i64 = defect.iter().zip(col).map(|(&d, &c)| d * c).sum();
                if descent >= 0 {
                    continue;
                }
                let mut ext = cand.clone();
                ext[j] += 1;
                if minimals
                    .iter()
                    .any(|m| m.iter().zip(&ext).all(|(&a, &b)| a <= b))
                {
                    continue;
                }
                if next.contains_key(&ext) {
                    continue;
                }
                let new_defect = defect.iter().zip(col).map(|(&d, &c)| d + c).collect();
                next.insert(ext, new_defect);
            }
        }
        frontier = next;
    }
    minimals.sort();
    Ok(minimals)
}

/// Minimal particular solutions paired with the Hilbert basis of the
/// homogeneous part.
pub(crate) type NatBasis = (Vec<Vec<u64>>, Vec<Vec<u64>>);

/// Solves an inhomogeneous system over the naturals by adjoining a slack
/// column carrying the negated constants: solutions with slack 1 are the
/// minimal particular solutions, those with slack 0 the homogeneous basis.
pub(crate) fn solve_nat(rows: &[Row], n: usize) -> Result<NatBasis, SolveError> {
    let m = rows.len();
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(n + 1);
    for j in 0..n {
        cols.push(rows.iter().map(|r| r.coeffs[j]).collect());
    }
    cols.push(rows.iter().map(|r| -r.constant).collect());
    let minimals = complete_minimal(&cols, COMPLETION_BUDGET)?;
    let mut particular = Vec::new();
    let mut homogeneous = Vec::new();
    for mut sol in minimals {
        let slack = sol[n];
        sol.truncate(n);
        match slack {
            0 => homogeneous.push(sol),
            1 => particular.push(sol),
            _ => {}
        }
    }
    let _ = m;
    Ok((particular, homogeneous))
}

/// Exact description of the solution set of a [`LinSystem`].
///
/// Every solution is some particular solution plus a natural combination of
/// the homogeneous generators; an empty particular set means the system is
/// inconsistent over its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionBasis {
    pub n: usize,
    pub domain: Domain,
    pub particular: Vec<Vec<u64>>,
    pub homogeneous: Vec<Vec<u64>>,
}

fn rows_for(system: &LinSystem) -> Vec<Row> {
    system
        .equations
        .iter()
        .map(|(l, r)| {
            let lv = l.coeff_vec(system.n);
            let rv = r.coeff_vec(system.n);
            let coeffs: Vec<i64> = lv
                .iter()
                .zip(&rv)
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect();
            let constant = match system.domain {
                Domain::Nonneg => 0,
                // x = y + 1 moves the coefficient sums into the constant
                Domain::Positive => -coeffs.iter().sum::<i64>(),
            };
            Row { coeffs, constant }
        })
        .collect()
}

/// Minimal nonzero solutions over the naturals of a system's homogeneous
/// reading (additive equations carry no constants).
pub fn hilbert_basis(system: &LinSystem) -> Result<Vec<Vec<u64>>, SolveError> {
    let rows: Vec<Row> = system
        .equations
        .iter()
        .map(|(l, r)| {
            let lv = l.coeff_vec(system.n);
            let rv = r.coeff_vec(system.n);
            Row {
                coeffs: lv
                    .iter()
                    .zip(&rv)
                    .map(|(&a, &b)| a as i64 - b as i64)
                    .collect(),
                constant: 0,
            }
        })
        .collect();
    let (_, homogeneous) = solve_nat(&rows, system.n)?;
    Ok(homogeneous)
}

/// Solves a system over its domain. Inconsistency is a value, not an error.
pub fn solve(system: &LinSystem) -> Result<SolutionBasis, SolveError> {
    let rows = rows_for(system);
    let (mut particular, homogeneous) = solve_nat(&rows, system.n)?;
    if system.domain == Domain::Positive {
        for p in &mut particular {
            for c in p.iter_mut() {
                *c += 1;
            }
        }
    }
    Ok(SolutionBasis {
        n: system.n,
        domain: system.domain,
        particular,
        homogeneous,
    })
}

impl SolutionBasis {
    pub fn is_empty(&self) -> bool {
        self.particular.is_empty()
    }

    /// All evaluation points that determine term equality on the whole
    /// solution set: the particular solutions followed by the homogeneous
    /// generators.
    pub fn eval_points(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.particular.iter().chain(self.homogeneous.iter())
    }

    /// Whether lhs = rhs holds on the entire solution set. Exact by
    /// linearity: it suffices to test the particular solutions and the
    /// homogeneous generators. Vacuously true for an inconsistent basis.
    pub fn is_consequence(&self, lhs: &AddTerm, rhs: &AddTerm) -> Result<bool, SolveError> {
        for p in self.eval_points() {
            if lhs.eval(p)? != rhs.eval(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The equivalence t ~ s: equal values at every solution.
    pub fn term_equiv(&self, t: &AddTerm, s: &AddTerm) -> Result<bool, SolveError> {
        self.is_consequence(t, s)
    }

    /// Equivalence extended to the adjoined zero term.
    pub fn term_equiv_z(&self, t: &AddTermOrZero, s: &AddTermOrZero) -> Result<bool, SolveError> {
        for p in self.eval_points() {
            if t.eval(p)? != s.eval(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generates the solution set restricted to the box [min..max]^n, from
    /// the basis representation. Used to compare against brute force.
    pub fn generate_in_box(&self, max: u64) -> Vec<Vec<u64>> {
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut work: Vec<Vec<u64>> = Vec::new();
        for p in &self.particular {
            if p.iter().all(|&c| c <= max) && seen.insert(p.clone()) {
                work.push(p.clone());
            }
        }
        while let Some(cur) = work.pop() {
            for h in &self.homogeneous {
                let ext: Vec<u64> = cur.iter().zip(h).map(|(&a, &b)| a + b).collect();
                if ext.iter().all(|&c| c <= max) && seen.insert(ext.clone()) {
                    work.push(ext);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn first_particular(&self) -> Result<&Vec<u64>, SolveError> {
        self.particular.first().ok_or(SolveError::InconsistentBasis)
    }

    fn require_positive(&self) -> Result<(), SolveError> {
        if self.domain != Domain::Positive {
            return Err(SolveError::PositiveDomainRequired);
        }
        Ok(())
    }

    /// Residuals t(x) - s(x) over all evaluation points, or None if any is
    /// negative.
    fn residuals(&self, s: &AddTerm, t: &AddTerm) -> Result<Option<Vec<i64>>, SolveError> {
        let mut out = Vec::new();
        for p in self.eval_points() {
            let d = t.eval(p)? as i64 - s.eval(p)? as i64;
            if d < 0 {
                return Ok(None);
            }
            out.push(d);
        }
        Ok(Some(out))
    }

    /// Whether some term s' with length >= 1 satisfies s + s' ~ t.
    ///
    /// Feasibility of the completing term is a small natural linear system:
    /// s'(x) = t(x) - s(x) for every evaluation point x. Over the positive
    /// domain, a nonzero completion forces a strictly positive gap at every
    /// particular solution, and that gap bounds the search.
    pub fn less_than(&self, s: &AddTerm, t: &AddTerm) -> Result<bool, SolveError> {
        self.require_positive()?;
        let gaps = match self.residuals(s, t)? {
            None => return Ok(false),
            Some(g) => g,
        };
        let p0 = self.first_particular()?;
        let gap0 = t.eval(p0)? as i64 - s.eval(p0)? as i64;
        if gap0 < 1 {
            return Ok(false);
        }
        Ok(self.constrained_exists(&gaps))
    }

    /// Whether some vector over the naturals hits the targets exactly at all
    /// evaluation points. Bounded for the same reason as
    /// [`enumerate_constrained`](Self::enumerate_constrained); exits on the
    /// first solution.
    fn constrained_exists(&self, targets: &[i64]) -> bool {
        let points: Vec<&Vec<u64>> = self.eval_points().collect();
        let mut residuals: Vec<i64> = targets.to_vec();
        fn rec(j: usize, n: usize, points: &[&Vec<u64>], residuals: &mut Vec<i64>) -> bool {
            if j == n {
                return residuals.iter().all(|&r| r == 0);
            }
            let mut cap = u64::MAX;
            for (pi, p) in points.iter().enumerate() {
                if let Some(q) = (residuals[pi] as u64).checked_div(p[j]) {
                    cap = cap.min(q);
                }
            }
            debug_assert!(cap < u64::MAX);
            for v in 0..=cap {
                if v > 0 {
                    for (pi, p) in points.iter().enumerate() {
                        residuals[pi] -= p[j] as i64;
                    }
                }
                if rec(j + 1, n, points, residuals) {
                    for (pi, p) in points.iter().enumerate() {
                        residuals[pi] += (v * p[j]) as i64;
                    }
                    return true;
                }
            }
            for (pi, p) in points.iter().enumerate() {
                residuals[pi] += (cap * p[j]) as i64;
            }
            false
        }
        rec(0, self.n, &points, &mut residuals)
    }

    /// Enumerates coefficient vectors constrained by the evaluation points.
    ///
    /// In exact mode the values must match `targets` exactly; in bounded mode
    /// they must stay below them. Recursion assigns variables in order and
    /// caps each coordinate by the remaining residual of every point that
    /// touches it, so the positive particular solutions keep the enumeration
    /// finite.
    fn enumerate_constrained(&self, targets: &[i64], exact: bool) -> Vec<Vec<u64>> {
        let points: Vec<&Vec<u64>> = self.eval_points().collect();
        let mut residuals: Vec<i64> = targets.to_vec();
        let mut current = vec![0u64; self.n];
        let mut out = Vec::new();
        fn rec(
            j: usize,
            n: usize,
            points: &[&Vec<u64>],
            residuals: &mut Vec<i64>,
            current: &mut Vec<u64>,
            exact: bool,
            out: &mut Vec<Vec<u64>>,
        ) {
            if j == n {
                if (!exact || residuals.iter().all(|&r| r == 0)) && current.iter().any(|&c| c > 0) {
                    out.push(current.clone());
                }
                return;
            }
            let mut cap = u64::MAX;
            for (pi, p) in points.iter().enumerate() {
                if let Some(q) = (residuals[pi] as u64).checked_div(p[j]) {
                    cap = cap.min(q);
                }
            }
            debug_assert!(
                cap < u64::MAX,
                "positive particular solutions bound every variable"
            );
            for v in 0..=cap {
                if v > 0 {
                    for (pi, p) in points.iter().enumerate() {
                        residuals[pi] -= p[j] as i64;
                    }
                    current[j] = v;
                }
                rec(j + 1, n, points, residuals, current, exact, out);
            }
            for (pi, p) in points.iter().enumerate() {
                residuals[pi] += (current[j] * p[j]) as i64;
            }
            current[j] = 0;
        }
        rec(
            0,
            self.n,
            &points,
            &mut residuals,
            &mut current,
            exact,
            &mut out,
        );
        out
    }

    /// The equivalence class [t]: every term with the same value as t at all
    /// evaluation points. Finite over the positive domain.
    pub fn equiv_class(&self, t: &AddTerm) -> Result<Vec<AddTerm>, SolveError> {
        self.require_positive()?;
        if self.is_empty() {
            return Err(SolveError::InconsistentBasis);
        }
        let targets: Vec<i64> = self
            .eval_points()
            .map(|p| t.eval(p).map(|v| v as i64))
            .collect::<Result<_, _>>()?;
        let vecs = self.enumerate_constrained(&targets, true);
        let mut out: Vec<AddTerm> = vecs
            .iter()
            .map(|v| AddTerm::from_coeff_vec(v).expect("nonzero vector"))
            .collect();
        out.sort();
        Ok(out)
    }

    /// The downward closure of t under the strict order.
    pub fn down_set(&self, t: &AddTerm) -> Result<Vec<AddTerm>, SolveError> {
        self.require_positive()?;
        if self.is_empty() {
            return Err(SolveError::InconsistentBasis);
        }
        let targets: Vec<i64> = self
            .eval_points()
            .map(|p| t.eval(p).map(|v| v as i64))
            .collect::<Result<_, _>>()?;
        let candidates = self.enumerate_constrained(&targets, false);
        let mut out = Vec::new();
        for v in candidates {
            let s = AddTerm::from_coeff_vec(&v).expect("nonzero vector");
            if self.less_than(&s, t)? {
                out.push(s);
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Search limits for [`discriminating_point`].
#[derive(Debug, Clone, Copy)]
pub struct DiscriminationConfig {
    /// Largest total generator multiplicity tried by the graded search.
    pub max_total: u64,
    /// Cap on graded-search candidates per particular solution.
    pub max_candidates: usize,
}

impl Default for DiscriminationConfig {
    fn default() -> Self {
        Self {
            max_total: 10,
            max_candidates: 100_000,
        }
    }
}

/// A solution point whose values separate all pairwise non-equivalent terms,
/// together with the value table as its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrimination {
    pub point: Vec<u64>,
    /// Values of the input terms at the point, in input order.
    pub values: Vec<u64>,
}

fn graded_vectors(g: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; g];
    fn rec(j: usize, remaining: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if j + 1 == cur.len() {
            cur[j] = remaining;
            out.push(cur.clone());
            return;
        }
        for v in 0..=remaining {
            cur[j] = v;
            rec(j + 1, remaining - v, cur, out);
        }
    }
    if g == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, total, &mut cur, &mut out);
    out
}

/// Finds a point of the solution set at which all pairwise non-equivalent
/// terms of T take pairwise distinct values.
///
/// Searches each particular solution's cone: first small generator
/// combinations in graded order, then one positional-base combination whose
/// base exceeds every term value on the generators, which separates
/// everything the cone can separate. Fails only when no cone separates some
/// pair, and then names it.
pub fn discriminating_point(
    terms: &[AddTermOrZero],
    basis: &SolutionBasis,
    cfg: &DiscriminationConfig,
) -> Result<Discrimination, SolveError> {
    basis.require_positive()?;
    if basis.is_empty() {
        return Err(SolveError::InconsistentBasis);
    }
    // group terms into equivalence classes by their evaluation signature
    let mut signatures: Vec<Vec<u64>> = Vec::with_capacity(terms.len());
    for t in terms {
        let sig: Vec<u64> = basis
            .eval_points()
            .map(|p| t.eval(p))
            .collect::<Result<_, _>>()?;
        signatures.push(sig);
    }
    let mut class_of_sig: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for (i, sig) in signatures.iter().enumerate() {
        class_of_sig.entry(sig.clone()).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
    }
    let g = basis.homogeneous.len();
    let npart = basis.particular.len();
    let finish = |point: Vec<u64>| -> Result<Discrimination, SolveError> {
        let values = terms
            .iter()
            .map(|t| t.eval(&point))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Discrimination { point, values })
    };
    let mut unseparated: Option<(usize, usize)> = None;
    for pi in 0..npart {
        // value of rep r at p + sum k_i h_i, read off the signature
        let rep_val = |r: usize, ks: &[u64]| -> Option<u64> {
            let sig = &signatures[reps[r]];
            let mut acc = sig[pi];
            for (i, &k) in ks.iter().enumerate() {
                acc = acc.checked_add(k.checked_mul(sig[npart + i])?)?;
            }
            Some(acc)
        };
        let all_distinct = |ks: &[u64]| -> Option<bool> {
            let mut vals = Vec::with_capacity(reps.len());
            for r in 0..reps.len() {
                vals.push(rep_val(r, ks)?);
            }
            vals.sort_unstable();
            Some(vals.windows(2).all(|w| w[0] != w[1]))
        };
        let build = |ks: &[u64]| -> Vec<u64> {
            let mut q = basis.particular[pi].clone();
            for (i, &k) in ks.iter().enumerate() {
                for (c, &h) in q.iter_mut().zip(&basis.homogeneous[i]) {
                    *c += k * h;
                }
            }
            q
        };
        let mut tried = 0usize;
        'graded: for total in 0..=cfg.max_total {
            // among the separating candidates of one grade, prefer the
            // lexicographically smallest resulting point
            let mut best: Option<Vec<u64>> = None;
            for ks in graded_vectors(g, total) {
                tried += 1;
                if tried > cfg.max_candidates {
                    break 'graded;
                }
                if all_distinct(&ks) == Some(true) {
                    let q = build(&ks);
                    if best.as_ref().is_none_or(|b| q < *b) {
                        best = Some(q);
                    }
                }
            }
            if let Some(q) = best {
                return finish(q);
            }
        }
        // positional fallback: base larger than any digit makes the combined
        // value injective on the per-cone signatures
        let max_digit = reps
            .iter()
            .map(|&r| {
                let sig = &signatures[r];
                std::iter::once(sig[pi])
                    .chain((0..g).map(|i| sig[npart + i]))
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0);
        let base = max_digit + 1;
        let mut ks = vec![0u64; g];
        let mut pow = 1u64;
        let mut overflow = false;
        for k in ks.iter_mut() {
            *k = pow;
            match pow.checked_mul(base) {
                Some(p) => pow = p,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if !overflow {
            match all_distinct(&ks) {
                Some(true) => return finish(build(&ks)),
                Some(false) => {
                    // two classes share the whole per-cone signature; remember one pair
                    'outer: for a in 0..reps.len() {
                        for b in a + 1..reps.len() {
                            let sa = &signatures[reps[a]];
                            let sb = &signatures[reps[b]];
                            let same_cone =
                                sa[pi] == sb[pi] && (0..g).all(|i| sa[npart + i] == sb[npart + i]);
                            if same_cone {
                                unseparated = Some((reps[a], reps[b]));
                                break 'outer;
                            }
                        }
                    }
                }
                None => return Err(SolveError::Overflow),
            }
        } else {
            return Err(SolveError::Overflow);
        }
    }
    let (a, b) = unseparated.unwrap_or((0, terms.len().saturating_sub(1)));
    Err(SolveError::DiscriminationExhausted {
        t1: terms[a].to_string(),
        t2: terms[b].to_string(),
    })
}

/// Additive image of a schema: affine coefficient forms for both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveSchema {
    pub lhs: AffineForm,
    pub rhs: AffineForm,
    pub min_index: u64,
}

impl AdditiveSchema {
    pub fn instance(&self, i: u64) -> Result<(AddTerm, AddTerm), SolveError> {
        let l =
            AddTerm::from_coeff_vec(&self.lhs.at(i)).map_err(|_| SolveError::EmptySchemaSide(i))?;
        let r =
            AddTerm::from_coeff_vec(&self.rhs.at(i)).map_err(|_| SolveError::EmptySchemaSide(i))?;
        Ok((l, r))
    }
}

/// Reference into the stream consumed by [`finite_equivalent_subsystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StreamRef {
    Finite(usize),
    Instance { schema: usize, index: u64 },
}

/// A finite subsystem with the same solution set as the full stream.
#[derive(Debug, Clone)]
pub struct FiniteSubsystem {
    pub kept: Vec<(StreamRef, (AddTerm, AddTerm))>,
    pub basis: SolutionBasis,
}

const SCHEMA_SCAN_CAP: u64 = 64;

/// Extracts a finite subsystem equivalent to a finite list of equations plus
/// affine schema families.
///
/// Equations are scanned in order and kept when they are not yet consequences
/// of the kept set. A schema scan stops once two consecutive instances are
/// consequences: instance values are affine in the index, so agreement at two
/// consecutive indices propagates to all of them.
pub fn finite_equivalent_subsystem(
    n: usize,
    domain: Domain,
    finite: &[(AddTerm, AddTerm)],
    schemas: &[AdditiveSchema],
) -> Result<FiniteSubsystem, SolveError> {
    finite_equivalent_subsystem_seeded(n, domain, &[], finite, schemas)
}

/// Like [`finite_equivalent_subsystem`], with additional equations assumed to
/// hold from the start. Seeded equations constrain the consequence checks but
/// are not reported in the kept list.
pub fn finite_equivalent_subsystem_seeded(
    n: usize,
    domain: Domain,
    seed: &[(AddTerm, AddTerm)],
    finite: &[(AddTerm, AddTerm)],
    schemas: &[AdditiveSchema],
) -> Result<FiniteSubsystem, SolveError> {
    let mut kept: Vec<(StreamRef, (AddTerm, AddTerm))> = Vec::new();
    let resolve = |kept: &[(StreamRef, (AddTerm, AddTerm))]| -> Result<SolutionBasis, SolveError> {
        let eqs = seed
            .iter()
            .cloned()
            .chain(kept.iter().map(|(_, eq)| eq.clone()))
            .collect();
        solve(&LinSystem::new(n, domain, eqs))
    };
    let mut basis = resolve(&kept)?;
    for (idx, eq) in finite.iter().enumerate() {
        if !basis.is_consequence(&eq.0, &eq.1)? {
            kept.push((StreamRef::Finite(idx), eq.clone()));
            basis = resolve(&kept)?;
        }
    }
    for (sidx, schema) in schemas.iter().enumerate() {
        let mut consecutive = 0u32;
        let mut i = schema.min_index;
        loop {
            if i - schema.min_index > SCHEMA_SCAN_CAP {
                return Err(SolveError::SchemaScanExhausted(SCHEMA_SCAN_CAP));
            }
            let inst = schema.instance(i)?;
            if basis.is_consequence(&inst.0, &inst.1)? {
                consecutive += 1;
                if consecutive == 2 {
                    break;
                }
            } else {
                consecutive = 0;
                kept.push((
                    StreamRef::Instance {
                        schema: sidx,
                        index: i,
                    },
                    inst,
                ));
                basis = resolve(&kept)?;
            }
            i += 1;
        }
    }
    // every scanned item must be a consequence of the final kept set
    for eq in finite {
        debug_assert!(basis.is_consequence(&eq.0, &eq.1)?);
    }
    Ok(FiniteSubsystem { kept, basis })
}

/// Canonical representatives of term equivalence classes, with a cache.
#[derive(Debug)]
pub struct CoordinateQuotient {
    basis: SolutionBasis,
    cache: HashMap<AddTerm, AddTerm>,
}

impl CoordinateQuotient {
    pub fn new(basis: SolutionBasis) -> Result<Self, SolveError> {
        basis.require_positive()?;
        if basis.is_empty() {
            return Err(SolveError::InconsistentBasis);
        }
        Ok(Self {
            basis,
            cache: HashMap::new(),
        })
    }

    pub fn basis(&self) -> &SolutionBasis {
        &self.basis
    }

    /// The least member of [t] by (length, coefficient vector).
    pub fn representative(&mut self, t: &AddTerm) -> Result<AddTerm, SolveError> {
        if let Some(rep) = self.cache.get(t) {
            return Ok(rep.clone());
        }
        let class = self.basis.equiv_class(t)?;
        let rep = class
            .iter()
            .min_by_key(|s| (s.len(), (*s).clone()))
            .expect("class contains t")
            .clone();
        for member in class {
            self.cache.insert(member, rep.clone());
        }
        Ok(rep)
    }

    pub fn same_class(&mut self, t: &AddTerm, s: &AddTerm) -> Result<bool, SolveError> {
        Ok(self.representative(t)? == self.representative(s)?)
    }
}
