//! Brute-force oracles and deterministic generators shared by the
//! integration suites. Everything here is independent of the basis machinery
//! it is used to check: solutions are found by box enumeration and term
//! relations by bounded search over the box.

#![allow(dead_code)] // shared helpers; not every suite uses every one

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wreathlab_core::solver::{Domain, LinSystem};
use wreathlab_core::term::{AddTerm, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All solutions of the system inside the box [domain-min..=max]^n, by
/// direct enumeration.
pub fn box_solutions(sys: &LinSystem, max: u64) -> Vec<Vec<u64>> {
    let lo = sys.domain.min_value();
    let mut out = Vec::new();
    let mut point = vec![lo; sys.n];
    'scan: loop {
        if sys.satisfied_by(&point).unwrap() {
            out.push(point.clone());
        }
        for j in (0..sys.n).rev() {
            if point[j] < max {
                point[j] += 1;
                point[j + 1..].fill(lo);
                continue 'scan;
            }
        }
        break;
    }
    out
}

/// Coordinatewise-minimal nonzero vectors of a set.
pub fn minimal_vectors(mut sols: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    sols.retain(|s| s.iter().any(|&c| c > 0));
    let mut out: Vec<Vec<u64>> = Vec::new();
    for s in &sols {
        if sols
            .iter()
            .any(|t| t != s && t.iter().zip(s).all(|(&a, &b)| a <= b))
        {
            continue;
        }
        out.push(s.clone());
    }
    out.sort();
    out.dedup();
    out
}

/// Term equality on every box solution.
pub fn box_term_equiv(box_sols: &[Vec<u64>], t: &AddTerm, s: &AddTerm) -> bool {
    box_sols
        .iter()
        .all(|p| t.eval(p).unwrap() == s.eval(p).unwrap())
}

/// All nonzero coefficient vectors over n variables with length at most the
/// bound.
pub fn terms_up_to_length(n: usize, bound: u64) -> Vec<AddTerm> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    fn rec(j: usize, remaining: u64, cur: &mut Vec<u64>, out: &mut Vec<AddTerm>) {
        if j == cur.len() {
            if cur.iter().any(|&c| c > 0) {
                out.push(AddTerm::from_coeff_vec(cur).unwrap());
            }
            return;
        }
        for v in 0..=remaining {
            cur[j] = v;
            rec(j + 1, remaining - v, cur, out);
            cur[j] = 0;
        }
    }
    rec(0, remaining_start(bound), &mut cur, &mut out);
    out.sort();
    out
}

fn remaining_start(bound: u64) -> u64 {
    bound
}

/// The strict order by bounded search over the box relation: some completing
/// term of length between 1 and the value gap makes the sum box-equivalent
/// to t.
pub fn brute_less_than(box_sols: &[Vec<u64>], n: usize, s: &AddTerm, t: &AddTerm) -> bool {
    let p0 = &box_sols[0];
    let tv = t.eval(p0).unwrap();
    let sv = s.eval(p0).unwrap();
    if tv <= sv {
        return false;
    }
    for cand in terms_up_to_length(n, tv - sv) {
        if box_term_equiv(box_sols, &s.add(&cand), t) {
            return true;
        }
    }
    false
}

/// The downward closure by brute force over the box relation.
pub fn brute_down_set(box_sols: &[Vec<u64>], n: usize, t: &AddTerm) -> Vec<AddTerm> {
    let bound = t.eval(&box_sols[0]).unwrap();
    let mut out: Vec<AddTerm> = terms_up_to_length(n, bound)
        .into_iter()
        .filter(|s| brute_less_than(box_sols, n, s, t))
        .collect();
    out.sort();
    out
}

/// A random additive term over n variables with small coefficients.
pub fn rand_term(rng: &mut ChaCha8Rng, n: usize, max_coeff: u64) -> AddTerm {
    loop {
        let coeffs: Vec<(Var, u64)> = (0..n)
            .map(|v| (Var(v), rng.gen_range(0..=max_coeff)))
            .collect();
        if coeffs.iter().any(|&(_, c)| c > 0) {
            return AddTerm::new(coeffs).unwrap();
        }
    }
}

/// A random consistent positive-domain system, resampled until consistent.
pub fn rand_consistent_system(rng: &mut ChaCha8Rng, n: usize, eqs: usize) -> LinSystem {
    loop {
        let equations = (0..eqs)
            .map(|_| (rand_term(rng, n, 2), rand_term(rng, n, 2)))
            .collect();
        let sys = LinSystem::new(n, Domain::Positive, equations);
        if !wreathlab_core::solver::solve(&sys).unwrap().is_empty() {
            return sys;
        }
    }
}
