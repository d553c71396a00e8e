//! Finitely supported vectors over a semigroup, indexed by the positive or
//! the nonnegative integers, and the wreath-product multiplication built on
//! them.
//!
//! A vector stores a default element and a finite support map; it represents
//! the infinite tuple that equals the default outside the support. Support
//! entries never store the default, so structural equality is semantic
//! equality. Vectors do not own their semigroup; operations that multiply
//! elements take it as an argument.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::semigroup::{Elem, FiniteSemigroupWithZero};

/// First valid coordinate: 1 for vectors over B, 0 for vectors over B0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Start {
    One,
    Zero,
}

impl Start {
    pub fn min_coord(self) -> u64 {
        match self {
            Start::One => 1,
            Start::Zero => 0,
        }
    }

    pub fn flipped(self) -> Start {
        match self {
            Start::One => Start::Zero,
            Start::Zero => Start::One,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VectorError {
    #[error("coordinate {coord} below start index {start}")]
    CoordinateBelowStart { coord: u64, start: u64 },
    #[error("start index mismatch")]
    StartMismatch,
    #[error("b-component {b} not allowed for this variant")]
    BadShiftComponent { b: u64 },
}

/// An eventually-constant vector with finitely many exceptional coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSuppVector {
    start: Start,
    default: Elem,
    support: BTreeMap<u64, Elem>,
}

impl FinSuppVector {
    /// Builds a vector; entries equal to the default are dropped.
    pub fn new(
        start: Start,
        default: Elem,
        entries: impl IntoIterator<Item = (u64, Elem)>,
    ) -> Result<Self, VectorError> {
        let mut support = BTreeMap::new();
        for (c, e) in entries {
            if c < start.min_coord() {
                return Err(VectorError::CoordinateBelowStart {
                    coord: c,
                    start: start.min_coord(),
                });
            }
            if e != default {
                support.insert(c, e);
            }
        }
        Ok(Self {
            start,
            default,
            support,
        })
    }

    /// The constant vector with the given default everywhere.
    pub fn constant(start: Start, default: Elem) -> Self {
        Self {
            start,
            default,
            support: BTreeMap::new(),
        }
    }

    /// All-zero vector of the semigroup.
    pub fn zero(start: Start, sg: &FiniteSemigroupWithZero) -> Self {
        Self::constant(start, sg.zero())
    }

    pub fn start(&self) -> Start {
        self.start
    }

    pub fn default_elem(&self) -> Elem {
        self.default
    }

    pub fn support(&self) -> impl Iterator<Item = (u64, Elem)> + '_ {
        self.support.iter().map(|(&c, &e)| (c, e))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn max_support(&self) -> Option<u64> {
        self.support.keys().next_back().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.support.is_empty()
    }

    /// Value at a coordinate; the coordinate must be >= the start index.
    #[inline]
    pub fn get(&self, c: u64) -> Elem {
        debug_assert!(c >= self.start.min_coord());
        *self.support.get(&c).unwrap_or(&self.default)
    }

    /// The b-th projection, with the precondition checked.
    pub fn project(&self, b: u64) -> Result<Elem, VectorError> {
        if b < self.start.min_coord() {
            return Err(VectorError::CoordinateBelowStart {
                coord: b,
                start: self.start.min_coord(),
            });
        }
        Ok(self.get(b))
    }

    /// Shift by b: the result's coordinate c holds this vector's value at c+b.
    pub fn shift(&self, b: u64) -> Self {
        if b == 0 {
            return self.clone();
        }
        let min = self.start.min_coord();
        let support = self
            .support
            .iter()
            .filter_map(|(&c, &e)| c.checked_sub(b).filter(|&nc| nc >= min).map(|nc| (nc, e)))
            .collect();
        Self {
            start: self.start,
            default: self.default,
            support,
        }
    }

    /// Coordinate-wise product. Both operands must share the start index.
    pub fn pointwise_mul(
        &self,
        other: &Self,
        sg: &FiniteSemigroupWithZero,
    ) -> Result<Self, VectorError> {
        if self.start != other.start {
            return Err(VectorError::StartMismatch);
        }
        let default = sg.mul(self.default, other.default);
        let mut support = BTreeMap::new();
        for &c in self.support.keys().chain(other.support.keys()) {
            let v = sg.mul(self.get(c), other.get(c));
            if v != default {
                support.insert(c, v);
            }
        }
        Ok(Self {
            start: self.start,
            default,
            support,
        })
    }

    /// Converts between start index 1 and 0 along a_i = a'_(i-1); the values
    /// and the default are untouched, so a round trip is the identity.
    pub fn reindex(&self) -> Self {
        let (new_start, delta): (Start, i64) = match self.start {
            Start::One => (Start::Zero, -1),
            Start::Zero => (Start::One, 1),
        };
        let support = self
            .support
            .iter()
            .map(|(&c, &e)| ((c as i64 + delta) as u64, e))
            .collect();
        Self {
            start: new_start,
            default: self.default,
            support,
        }
    }
}

impl fmt::Display for FinSuppVector {
    /// Renders as `default=<idx>; c:<idx> ...` with raw element indices; the
    /// CLI layer substitutes element names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "default={}", self.default.0)?;
        for (c, e) in &self.support {
            write!(f, " {}:{}", c, e.0)?;
        }
        Ok(())
    }
}

/// An element of the wreath product: a vector paired with a shift component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    pub vector: FinSuppVector,
    pub b: u64,
}

impl WreathElement {
    /// Pairs a vector with a b-component, enforcing b >= 1 for start index 1.
    pub fn new(vector: FinSuppVector, b: u64) -> Result<Self, VectorError> {
        if vector.start() == Start::One && b == 0 {
            return Err(VectorError::BadShiftComponent { b });
        }
        Ok(Self { vector, b })
    }
}

/// Wreath multiplication: (a1, b1)(a2, b2) = (a1 * shift(a2, b1), b1 + b2).
pub fn wreath_mul(
    w1: &WreathElement,
    w2: &WreathElement,
    sg: &FiniteSemigroupWithZero,
) -> Result<WreathElement, VectorError> {
    let vector = w1.vector.pointwise_mul(&w2.vector.shift(w1.b), sg)?;
    Ok(WreathElement {
        vector,
        b: w1.b + w2.b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::corpus;

    fn sl2() -> (FiniteSemigroupWithZero, Elem, Elem) {
        let sg = corpus::semilattice2();
        let z = sg.zero();
        let e = sg.elem("e").unwrap();
        (sg, z, e)
    }

    fn v(start: Start, default: Elem, entries: &[(u64, Elem)]) -> FinSuppVector {
        FinSuppVector::new(start, default, entries.iter().copied()).unwrap()
    }

    #[test]
    fn shift_relabels_support() {
        let (_, z, e) = sl2();
        let f = e;
        let x = v(Start::One, z, &[(2, e), (5, f)]);
        let shifted = x.shift(1);
        assert_eq!(shifted, v(Start::One, z, &[(1, e), (4, f)]));
    }

    #[test]
    fn shift_identity_and_past_support() {
        let (_, z, e) = sl2();
        let x = v(Start::One, z, &[(1, e)]);
        assert_eq!(x.shift(0), x);
        let y = v(Start::Zero, z, &[(0, e)]);
        assert_eq!(y.shift(1), FinSuppVector::constant(Start::Zero, z));
    }

    #[test]
    fn pointwise_mul_disjoint_supports_vanishes() {
        let (sg, z, e) = sl2();
        let a = v(Start::One, z, &[(1, e)]);
        let b = v(Start::One, z, &[(2, e)]);
        assert_eq!(
            a.pointwise_mul(&b, &sg).unwrap(),
            FinSuppVector::constant(Start::One, z)
        );
        // idempotent on shared coordinate
        assert_eq!(a.pointwise_mul(&a, &sg).unwrap(), a);
        // anything times the all-zero vector is all-zero
        let zero = FinSuppVector::zero(Start::One, &sg);
        assert_eq!(a.pointwise_mul(&zero, &sg).unwrap(), zero);
    }

    #[test]
    fn pointwise_mul_start_mismatch() {
        let (sg, z, e) = sl2();
        let a = v(Start::One, z, &[(1, e)]);
        let b = v(Start::Zero, z, &[(1, e)]);
        assert_eq!(
            a.pointwise_mul(&b, &sg).unwrap_err(),
            VectorError::StartMismatch
        );
    }

    #[test]
    fn wreath_mul_examples() {
        let (sg, z, e) = sl2();
        let w = |entries: &[(u64, Elem)], b: u64| {
            WreathElement::new(v(Start::One, z, entries), b).unwrap()
        };
        // ([1->e],1)([1->e],1) = (zero, 2)
        let p = wreath_mul(&w(&[(1, e)], 1), &w(&[(1, e)], 1), &sg).unwrap();
        assert_eq!(p, w(&[], 2).clone());
        // ([1->e],1)([2->e],2) = ([1->e],3)
        let q = wreath_mul(&w(&[(1, e)], 1), &w(&[(2, e)], 2), &sg).unwrap();
        assert_eq!(q, w(&[(1, e)], 3));
        // zero vector annihilates on the left
        let r = wreath_mul(&w(&[], 2), &w(&[(1, e)], 1), &sg).unwrap();
        assert_eq!(r, w(&[], 3));
    }

    #[test]
    fn reindex_moves_start() {
        let (_, z, e) = sl2();
        let a = v(Start::One, z, &[(1, e)]);
        let b = a.reindex();
        assert_eq!(b, v(Start::Zero, z, &[(0, e)]));
        assert_eq!(b.reindex(), a);
        let c = FinSuppVector::constant(Start::One, e);
        assert_eq!(c.reindex().reindex(), c);
    }

    #[test]
    fn equality_is_on_the_normalized_form() {
        let (_, z, e) = sl2();
        // entries equal to the default are dropped, so these are one vector
        let a = FinSuppVector::new(Start::One, z, [(1, e), (2, z), (5, z)]).unwrap();
        let b = FinSuppVector::new(Start::One, z, [(1, e)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.support_len(), 1);
        // same support, different default: different vectors
        let c = FinSuppVector::new(Start::One, e, [(1, e)]).unwrap();
        assert_ne!(b, c);
        assert_eq!(c.support_len(), 0);
    }

    #[test]
    fn projection_bounds() {
        let (_, z, e) = sl2();
        let a = v(Start::One, z, &[(1, e)]);
        assert_eq!(a.project(1).unwrap(), e);
        assert_eq!(a.project(7).unwrap(), z);
        assert!(a.project(0).is_err());
        let d = FinSuppVector::constant(Start::One, e);
        assert_eq!(d.project(3).unwrap(), e);
    }
}
