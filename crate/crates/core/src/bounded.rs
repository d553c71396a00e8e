//! Brute-force consequence checking over a finite box of points.
//!
//! The box holds every point whose shift components lie in [1..M]^n and whose
//! vectors are zero outside the window [1..W]. Products of such vectors again
//! live inside the window, so window-sized dense values decide satisfaction
//! exactly.
//!
//! Enumeration order is fixed: shift tuples ascend lexicographically, then
//! per-variable vector assignments ascend in the dense code order (coordinate
//! 1 most significant, elements by table index). A reported counterexample is
//! always the first one in this order.
//!
//! When every left side touches only variables strictly before every right
//! side (the shape of all the schema workloads), the check splits the
//! assignment space in half: right halves are bucketed by their side-value
//! keys and left halves probe the buckets, which replaces the product of the
//! half spaces by their sum.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use thiserror::Error;

use crate::semigroup::{Elem, FiniteSemigroupWithZero};
use crate::system::{Equation, SystemError, WreathPoint};
use crate::term::{decompose, TermError};
use crate::vector::{FinSuppVector, Start};

/// Multiply-xor hasher for the short side-value keys; the enumeration is
/// single threaded and the keys are already well mixed, so a keyed hasher
/// buys nothing here.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0 ^ x).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        self.0 ^= self.0 >> 29;
    }

    fn write_usize(&mut self, x: usize) {
        self.write_u64(x as u64);
    }
}

type KeyMap<V> = HashMap<Box<[u64]>, V, BuildHasherDefault<KeyHasher>>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundedError {
    #[error("enumeration estimate {estimate} exceeds the budget {budget}")]
    BudgetExceeded { estimate: u64, budget: u64 },
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Box dimensions and the work budget in enumeration units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Vector supports range over [1..=window].
    pub window: u64,
    /// Shift components range over [1..=max_b].
    pub max_b: u64,
    /// Cap on the number of assignment evaluations.
    pub budget: u64,
}

impl Bounds {
    pub fn new(window: u64, max_b: u64, budget: u64) -> Result<Self, BoundedError> {
        if window == 0 || window > 8 {
            return Err(BoundedError::InvalidBounds(format!(
                "window must be within 1..=8, got {window}"
            )));
        }
        if max_b == 0 {
            return Err(BoundedError::InvalidBounds("max_b must be positive".into()));
        }
        Ok(Self {
            window,
            max_b,
            budget,
        })
    }
}

/// The system side of a check: equations enforced in full, plus equations
/// enforced only through their additive parts.
#[derive(Debug, Clone, Default)]
pub struct CheckSystem {
    pub wreath: Vec<Equation>,
    pub additive_only: Vec<Equation>,
}

impl CheckSystem {
    pub fn of_equations(eqs: impl IntoIterator<Item = Equation>) -> Self {
        Self {
            wreath: eqs.into_iter().collect(),
            additive_only: Vec::new(),
        }
    }
}

impl From<&crate::noether::ReducedSystem> for CheckSystem {
    fn from(r: &crate::noether::ReducedSystem) -> Self {
        Self {
            wreath: r.full.iter().map(|e| e.equation.clone()).collect(),
            additive_only: r.additive_only.iter().map(|e| e.equation.clone()).collect(),
        }
    }
}

/// A consequence candidate: checked in full, or on additive parts only.
#[derive(Debug, Clone)]
pub struct TargetEq {
    pub equation: Equation,
    pub additive_only: bool,
}

impl TargetEq {
    pub fn full(equation: Equation) -> Self {
        Self {
            equation,
            additive_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    HoldsInBox,
    Counterexample(WreathPoint),
}

impl CheckOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CheckOutcome::HoldsInBox)
    }
}

/// Checks whether every box point satisfying the system also satisfies the
/// target equation; returns the first counterexample otherwise.
pub fn bounded_consequence_check(
    sg: &FiniteSemigroupWithZero,
    n: usize,
    sys: &CheckSystem,
    target: &TargetEq,
    bounds: &Bounds,
) -> Result<CheckOutcome, BoundedError> {
    let mut outcomes =
        bounded_consequence_check_multi(sg, n, sys, std::slice::from_ref(target), bounds)?;
    Ok(outcomes.pop().expect("one outcome per target"))
}

struct SideSpec {
    /// (offset, var): the specialization of one equation side at a fixed P.
    factors: Vec<(u64, usize)>,
}

fn decode(code: u64, vars: &[usize], w: usize, order: u64, assign: &mut [Vec<Elem>]) {
    // most significant digit: coordinate 1 of the first listed variable
    let mut rest = code;
    let digits = vars.len() * w;
    for d in (0..digits).rev() {
        let var = vars[d / w];
        let coord = d % w;
        assign[var][coord] = Elem((rest % order) as u8);
        rest /= order;
    }
}

/// Steps assignments through the same order as sequential [`decode`] codes:
/// a base-`order` counter over the listed variables, least significant digit
/// last, updated in place.
struct Odometer {
    digits: Vec<u8>,
}

impl Odometer {
    fn new(vars: &[usize], w: usize) -> Self {
        Self {
            digits: vec![0; vars.len() * w],
        }
    }

    fn advance(&mut self, vars: &[usize], w: usize, order: u64, assign: &mut [Vec<Elem>]) {
        for d in (0..self.digits.len()).rev() {
            let next = self.digits[d] as u64 + 1;
            let var = vars[d / w];
            let coord = d % w;
            if next < order {
                self.digits[d] = next as u8;
                assign[var][coord] = Elem(next as u8);
                return;
            }
            self.digits[d] = 0;
            assign[var][coord] = Elem(0);
        }
    }
}

fn assignment_to_point(
    assign: &[Vec<Elem>],
    bvals: &[u64],
    sg: &FiniteSemigroupWithZero,
) -> Result<WreathPoint, SystemError> {
    let zero = sg.zero();
    let vectors = assign
        .iter()
        .map(|dense| {
            FinSuppVector::new(
                Start::One,
                zero,
                dense.iter().enumerate().map(|(i, &e)| (i as u64 + 1, e)),
            )
            .expect("window coordinates are valid")
        })
        .collect();
    WreathPoint::new(Start::One, vectors, bvals.to_vec())
}

struct PreparedEq {
    lhs: SideSpec,
    rhs: SideSpec,
}

fn prepare(eq: &Equation, p: &[u64]) -> Result<PreparedEq, TermError> {
    let spec = |w: &crate::term::SemiWord| -> Result<SideSpec, TermError> {
        let (wt, _) = decompose(w);
        Ok(SideSpec {
            factors: wt
                .specialize(p)?
                .factors()
                .iter()
                .map(|&(o, v)| (o, v.0))
                .collect(),
        })
    };
    Ok(PreparedEq {
        lhs: spec(&eq.lhs)?,
        rhs: spec(&eq.rhs)?,
    })
}

/// A batch evaluator for many sides at once. Sides of one system share long
/// factor prefixes (schema instances extend each other), so the factor
/// sequences are merged into a trie and every coordinate is one walk with
/// zero-product cutoff instead of one scan per side.
struct SideTrie {
    nodes: Vec<TrieNode>,
    roots: Vec<usize>,
    n_sides: usize,
}

struct TrieNode {
    offset: u64,
    var: usize,
    sides: Vec<usize>,
    children: Vec<usize>,
}

impl SideTrie {
    fn build(sides: &[&SideSpec]) -> Self {
        let mut nodes: Vec<TrieNode> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for (si, side) in sides.iter().enumerate() {
            let mut cursor: Option<usize> = None;
            for &(offset, var) in &side.factors {
                let found = match cursor {
                    None => &roots,
                    Some(c) => &nodes[c].children,
                }
                .iter()
                .copied()
                .find(|&id| nodes[id].offset == offset && nodes[id].var == var);
                let id = match found {
                    Some(id) => id,
                    None => {
                        let id = nodes.len();
                        nodes.push(TrieNode {
                            offset,
                            var,
                            sides: Vec::new(),
                            children: Vec::new(),
                        });
                        match cursor {
                            None => roots.push(id),
                            Some(c) => nodes[c].children.push(id),
                        }
                        id
                    }
                };
                cursor = Some(id);
            }
            nodes[cursor.expect("sides are nonempty")].sides.push(si);
        }
        Self {
            nodes,
            roots,
            n_sides: sides.len(),
        }
    }

    /// Evaluates every side over the window, packing each dense value into
    /// one u64 written to `out` (which must hold `n_sides` entries).
    fn eval_all(
        &self,
        assign: &[Vec<Elem>],
        w: usize,
        sg: &FiniteSemigroupWithZero,
        out: &mut [u64],
    ) {
        debug_assert_eq!(out.len(), self.n_sides);
        let zero = sg.zero();
        out.fill(0);
        let mut coordvals = vec![zero; self.n_sides];
        for c in 1..=w as u64 {
            coordvals.fill(zero);
            for &root in &self.roots {
                self.walk(root, None, c, assign, w, sg, zero, &mut coordvals);
            }
            for (o, &v) in out.iter_mut().zip(&coordvals) {
                *o = (*o << 8) | v.0 as u64;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        id: usize,
        acc: Option<Elem>,
        c: u64,
        assign: &[Vec<Elem>],
        w: usize,
        sg: &FiniteSemigroupWithZero,
        zero: Elem,
        coordvals: &mut [Elem],
    ) {
        let node = &self.nodes[id];
        let idx = c + node.offset;
        let e = if idx > w as u64 {
            zero
        } else {
            assign[node.var][(idx - 1) as usize]
        };
        let v = match acc {
            None => e,
            Some(a) => sg.mul(a, e),
        };
        if v == zero {
            // the default is already in place for the whole subtree
            return;
        }
        for &si in &node.sides {
            coordvals[si] = v;
        }
        for &child in &node.children {
            self.walk(child, Some(v), c, assign, w, sg, zero, coordvals);
        }
    }
}

fn additive_holds(eq: &Equation, p: &[u64]) -> Result<bool, TermError> {
    let (tb, sb) = eq.additive_parts();
    Ok(tb.eval(p)? == sb.eval(p)?)
}

/// Variable partition for the split strategy: left sides and right sides must
/// use disjoint variables, with every left variable preceding every right
/// variable so the split scan preserves the global lexicographic order.
fn split_partition(
    sys: &CheckSystem,
    targets: &[TargetEq],
    n: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut left = vec![false; n];
    let mut right = vec![false; n];
    let mut mark = |eq: &Equation| {
        for v in eq.lhs.letters() {
            left[v.0] = true;
        }
        for v in eq.rhs.letters() {
            right[v.0] = true;
        }
    };
    for eq in &sys.wreath {
        mark(eq);
    }
    for t in targets {
        if !t.additive_only {
            mark(&t.equation);
        }
    }
    if (0..n).any(|v| left[v] && right[v]) {
        return None;
    }
    let lvars: Vec<usize> = (0..n).filter(|&v| left[v]).collect();
    let rvars: Vec<usize> = (0..n).filter(|&v| right[v]).collect();
    match (lvars.last(), rvars.first()) {
        (Some(&lmax), Some(&rmin)) if lmax > rmin => None,
        _ => Some((lvars, rvars)),
    }
}

/// Checks several target equations against one system in a single shared
/// enumeration. Outcomes are per target, in input order.
pub fn bounded_consequence_check_multi(
    sg: &FiniteSemigroupWithZero,
    n: usize,
    sys: &CheckSystem,
    targets: &[TargetEq],
    bounds: &Bounds,
) -> Result<Vec<CheckOutcome>, BoundedError> {
    let w = bounds.window as usize;
    let order = sg.order() as u64;
    let m = bounds.max_b;

    let btuples = m
        .checked_pow(n as u32)
        .ok_or(BoundedError::BudgetExceeded {
            estimate: u64::MAX,
            budget: bounds.budget,
        })?;
    if btuples > bounds.budget {
        return Err(BoundedError::BudgetExceeded {
            estimate: btuples,
            budget: bounds.budget,
        });
    }

    // collect shift tuples satisfying every additive constraint of the system
    let mut valid_ps: Vec<Vec<u64>> = Vec::new();
    let mut p = vec![1u64; n];
    'scan: loop {
        let mut ok = true;
        for eq in sys.wreath.iter().chain(&sys.additive_only) {
            if !additive_holds(eq, &p)? {
                ok = false;
                break;
            }
        }
        if ok {
            valid_ps.push(p.clone());
        }
        for j in (0..n).rev() {
            if p[j] < m {
                p[j] += 1;
                p[j + 1..].fill(1);
                continue 'scan;
            }
        }
        break;
    }

    let split = split_partition(sys, targets, n);
    let full_space = order.checked_pow((w * n) as u32);
    let estimate: u128 = match &split {
        Some((l, r)) => {
            let lspace = order.checked_pow((w * l.len()) as u32).unwrap_or(u64::MAX) as u128;
            let rspace = order.checked_pow((w * r.len()) as u32).unwrap_or(u64::MAX) as u128;
            valid_ps.len() as u128 * (lspace + rspace)
        }
        None => valid_ps.len() as u128 * full_space.unwrap_or(u64::MAX) as u128,
    };
    if estimate > bounds.budget as u128 {
        return Err(BoundedError::BudgetExceeded {
            estimate: estimate.min(u64::MAX as u128) as u64,
            budget: bounds.budget,
        });
    }

    let mut resolved: Vec<Option<WreathPoint>> = vec![None; targets.len()];
    let all_resolved = |resolved: &[Option<WreathPoint>]| resolved.iter().all(|r| r.is_some());

    for p in &valid_ps {
        if all_resolved(&resolved) {
            break;
        }
        let zero_assign: Vec<Vec<Elem>> = vec![vec![sg.zero(); w]; n];
        // a target whose additive part fails here is violated by every
        // system point at this shift tuple; the all-zero assignment is the
        // least one and satisfies any wreath system
        let mut pending: Vec<usize> = Vec::new();
        for (i, t) in targets.iter().enumerate() {
            if resolved[i].is_some() {
                continue;
            }
            if !additive_holds(&t.equation, p)? {
                resolved[i] = Some(assignment_to_point(&zero_assign, p, sg)?);
            } else if !t.additive_only {
                pending.push(i);
            }
        }
        if pending.is_empty() {
            continue;
        }
        let sys_prep: Vec<PreparedEq> = sys
            .wreath
            .iter()
            .map(|eq| prepare(eq, p))
            .collect::<Result<_, _>>()?;
        let tgt_prep: Vec<PreparedEq> = pending
            .iter()
            .map(|&i| prepare(&targets[i].equation, p))
            .collect::<Result<_, _>>()?;

        match &split {
            Some((lvars, rvars)) => {
                struct Bucket {
                    min_code: u64,
                    min_vals: Vec<u64>,
                    alt: Vec<Option<u64>>,
                }
                let rspace = order.checked_pow((w * rvars.len()) as u32).unwrap();
                let mut buckets: KeyMap<Bucket> = KeyMap::default();
                let mut assign = zero_assign.clone();
                let nsys = sys_prep.len();
                let rhs_specs: Vec<&SideSpec> = sys_prep
                    .iter()
                    .map(|e| &e.rhs)
                    .chain(tgt_prep.iter().map(|e| &e.rhs))
                    .collect();
                let rhs_trie = SideTrie::build(&rhs_specs);
                let mut rhs_vals = vec![0u64; rhs_specs.len()];
                let mut odo = Odometer::new(rvars, w);
                for rcode in 0..rspace {
                    if rcode > 0 {
                        odo.advance(rvars, w, order, &mut assign);
                    }
                    rhs_trie.eval_all(&assign, w, sg, &mut rhs_vals);
                    let (key, vals) = rhs_vals.split_at(nsys);
                    match buckets.get_mut(key) {
                        None => {
                            buckets.insert(
                                key.to_vec().into_boxed_slice(),
                                Bucket {
                                    min_code: rcode,
                                    alt: vec![None; vals.len()],
                                    min_vals: vals.to_vec(),
                                },
                            );
                        }
                        Some(b) => {
                            for (ti, &v) in vals.iter().enumerate() {
                                if b.alt[ti].is_none() && v != b.min_vals[ti] {
                                    b.alt[ti] = Some(rcode);
                                }
                            }
                        }
                    }
                }
                let lspace = order.checked_pow((w * lvars.len()) as u32).unwrap();
                let mut open: Vec<usize> = (0..pending.len()).collect();
                let lhs_specs: Vec<&SideSpec> = sys_prep
                    .iter()
                    .map(|e| &e.lhs)
                    .chain(tgt_prep.iter().map(|e| &e.lhs))
                    .collect();
                let lhs_trie = SideTrie::build(&lhs_specs);
                let mut lhs_vals = vec![0u64; lhs_specs.len()];
                // the left variables are still all zero: the right pass only
                // ever touched the right block
                let mut odo = Odometer::new(lvars, w);
                for lcode in 0..lspace {
                    if open.is_empty() {
                        break;
                    }
                    if lcode > 0 {
                        odo.advance(lvars, w, order, &mut assign);
                    }
                    lhs_trie.eval_all(&assign, w, sg, &mut lhs_vals);
                    let (key, fvals) = lhs_vals.split_at(nsys);
                    let bucket = match buckets.get(key) {
                        None => continue,
                        Some(b) => b,
                    };
                    open.retain(|&pi| {
                        let f = fvals[pi];
                        let rcode = if bucket.min_vals[pi] != f {
                            Some(bucket.min_code)
                        } else {
                            bucket.alt[pi]
                        };
                        match rcode {
                            None => true,
                            Some(rc) => {
                                let mut point_assign = assign.clone();
                                decode(rc, rvars, w, order, &mut point_assign);
                                resolved[pending[pi]] = Some(
                                    assignment_to_point(&point_assign, p, sg)
                                        .expect("box assignments form valid points"),
                                );
                                false
                            }
                        }
                    });
                }
            }
            None => {
                let space = full_space.unwrap();
                let all_vars: Vec<usize> = (0..n).collect();
                let mut assign = zero_assign.clone();
                let mut open: Vec<usize> = (0..pending.len()).collect();
                let nsys = sys_prep.len();
                let specs: Vec<&SideSpec> = sys_prep
                    .iter()
                    .chain(tgt_prep.iter())
                    .flat_map(|e| [&e.lhs, &e.rhs])
                    .collect();
                let trie = SideTrie::build(&specs);
                let mut vals = vec![0u64; specs.len()];
                let mut odo = Odometer::new(&all_vars, w);
                for code in 0..space {
                    if open.is_empty() {
                        break;
                    }
                    if code > 0 {
                        odo.advance(&all_vars, w, order, &mut assign);
                    }
                    trie.eval_all(&assign, w, sg, &mut vals);
                    let sat = (0..nsys).all(|i| vals[2 * i] == vals[2 * i + 1]);
                    if !sat {
                        continue;
                    }
                    open.retain(|&pi| {
                        let l = vals[2 * (nsys + pi)];
                        let r = vals[2 * (nsys + pi) + 1];
                        if l != r {
                            resolved[pending[pi]] = Some(
                                assignment_to_point(&assign, p, sg)
                                    .expect("box assignments form valid points"),
                            );
                            false
                        } else {
                            true
                        }
                    });
                }
            }
        }
    }

    Ok(resolved
        .into_iter()
        .map(|r| match r {
            None => CheckOutcome::HoldsInBox,
            Some(pt) => CheckOutcome::Counterexample(pt),
        })
        .collect())
}
