//! Semigroup words, additive terms, and the decomposition of a word into its
//! vector part and its additive part.
//!
//! A word x_{i1}...x_{ik} splits into a wreath term (one factor per letter,
//! shifted by the formal sum of the preceding letters) and an additive term
//! (the letter counts). Specializing the wreath term at an integer point
//! turns the formal shifts into constant offsets; projecting a shift term at
//! a coordinate yields a plain word in doubly indexed variables.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::semigroup::{Elem, FiniteSemigroupWithZero};
use crate::vector::FinSuppVector;

/// A variable, identified by its 0-based index. Displayed as `x1`, `x2`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("empty word")]
    EmptyWord,
    #[error("empty additive term")]
    EmptyTerm,
    #[error("variable {0} out of range (arity {1})")]
    VarOutOfRange(Var, usize),
    #[error("point arity {found} does not match term arity (need index {need})")]
    ArityMismatch { need: usize, found: usize },
}

/// A nonempty product of variables.
#[allow(clippy::len_without_is_empty)] // never empty by construction
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemiWord {
    letters: Vec<Var>,
}

impl SemiWord {
    pub fn new(letters: Vec<Var>) -> Result<Self, TermError> {
        if letters.is_empty() {
            return Err(TermError::EmptyWord);
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[Var] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn max_var(&self) -> usize {
        self.letters.iter().map(|v| v.0).max().unwrap()
    }

    /// Each letter x_i replaced by the two-letter block x'_i x''_i, where
    /// x'_i = Var(i) and x''_i = Var(n + i) in the doubled variable set.
    pub fn doubled(&self, n: usize) -> SemiWord {
        let letters = self
            .letters
            .iter()
            .flat_map(|v| [Var(v.0), Var(n + v.0)])
            .collect();
        SemiWord { letters }
    }
}

impl fmt::Display for SemiWord {
    /// Collapses runs of a repeated letter into `x^k` sugar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let v = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == v {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// A formal sum of variables with nonnegative coefficients; total length >= 1.
#[allow(clippy::len_without_is_empty)] // never empty by construction
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddTerm {
    coeffs: BTreeMap<Var, u64>,
}

impl AddTerm {
    pub fn new(coeffs: impl IntoIterator<Item = (Var, u64)>) -> Result<Self, TermError> {
        let mut map = BTreeMap::new();
        for (v, c) in coeffs {
            if c > 0 {
                *map.entry(v).or_insert(0) += c;
            }
        }
        if map.is_empty() {
            return Err(TermError::EmptyTerm);
        }
        Ok(Self { coeffs: map })
    }

    pub fn var(v: Var) -> Self {
        Self {
            coeffs: BTreeMap::from([(v, 1)]),
        }
    }

    /// Letter counts of a word.
    pub fn of_word(w: &SemiWord) -> Self {
        let mut coeffs = BTreeMap::new();
        for &v in w.letters() {
            *coeffs.entry(v).or_insert(0) += 1;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (Var, u64)> + '_ {
        self.coeffs.iter().map(|(&v, &c)| (v, c))
    }

    pub fn coeff(&self, v: Var) -> u64 {
        self.coeffs.get(&v).copied().unwrap_or(0)
    }

    /// The length: the sum of all coefficients.
    pub fn len(&self) -> u64 {
        self.coeffs.values().sum()
    }

    pub fn max_var(&self) -> usize {
        self.coeffs.keys().map(|v| v.0).max().unwrap()
    }

    pub fn eval(&self, point: &[u64]) -> Result<u64, TermError> {
        let mut acc = 0u64;
        for (v, c) in &self.coeffs {
            let p = point.get(v.0).ok_or(TermError::ArityMismatch {
                need: v.0,
                found: point.len(),
            })?;
            acc += c * p;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &AddTerm) -> AddTerm {
        let mut coeffs = self.coeffs.clone();
        for (&v, &c) in &other.coeffs {
            *coeffs.entry(v).or_insert(0) += c;
        }
        AddTerm { coeffs }
    }

    /// Dense coefficient vector of length n.
    pub fn coeff_vec(&self, n: usize) -> Vec<u64> {
        let mut out = vec![0; n];
        for (&v, &c) in &self.coeffs {
            out[v.0] = c;
        }
        out
    }

    pub fn from_coeff_vec(coeffs: &[u64]) -> Result<Self, TermError> {
        Self::new(coeffs.iter().enumerate().map(|(i, &c)| (Var(i), c)))
    }

    /// Same coefficients moved onto the second block of a doubled variable
    /// set, i.e. x_i becomes x''_i = Var(n + i).
    pub fn on_second_block(&self, n: usize) -> AddTerm {
        AddTerm {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&v, &c)| (Var(n + v.0), c))
                .collect(),
        }
    }
}

impl fmt::Display for AddTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&v, &c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{c}{v}")?;
            }
        }
        Ok(())
    }
}

/// An additive term with the adjoined zero term; the zero term only arises
/// where the construction explicitly adjoins it, never from a word.
#[allow(clippy::len_without_is_empty)]
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AddTermOrZero {
    Zero,
    Term(AddTerm),
}

impl AddTermOrZero {
    pub fn eval(&self, point: &[u64]) -> Result<u64, TermError> {
        match self {
            AddTermOrZero::Zero => Ok(0),
            AddTermOrZero::Term(t) => t.eval(point),
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            AddTermOrZero::Zero => 0,
            AddTermOrZero::Term(t) => t.len(),
        }
    }

    /// Sum with a plain term; 0 + s = s.
    pub fn plus(&self, s: &AddTerm) -> AddTerm {
        match self {
            AddTermOrZero::Zero => s.clone(),
            AddTermOrZero::Term(t) => t.add(s),
        }
    }
}

impl fmt::Display for AddTermOrZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AddTermOrZero::Zero => write!(f, "0"),
            AddTermOrZero::Term(t) => write!(f, "{t}"),
        }
    }
}

/// One factor of a wreath term: a variable shifted by the formal sum of the
/// letters preceding it (`None` for the first letter).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathFactor {
    pub prefix: Option<AddTerm>,
    pub var: Var,
}

/// The vector part of a word: structurally derived by [`decompose`], never
/// built free-form, so the prefix invariant always holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathTerm {
    factors: Vec<WreathFactor>,
}

impl WreathTerm {
    pub fn factors(&self) -> &[WreathFactor] {
        &self.factors
    }

    /// Evaluates every prefix at a tuple of shift components.
    pub fn specialize(&self, b_point: &[u64]) -> Result<ShiftTerm, TermError> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let offset = match &f.prefix {
                None => 0,
                Some(p) => p.eval(b_point)?,
            };
            if f.var.0 >= b_point.len() {
                return Err(TermError::ArityMismatch {
                    need: f.var.0,
                    found: b_point.len(),
                });
            }
            factors.push((offset, f.var));
        }
        let term = ShiftTerm { factors };
        // prefix sums of nonnegative components never decrease
        debug_assert!(term.offsets_weakly_increasing());
        Ok(term)
    }
}

impl fmt::Display for WreathTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for factor in &self.factors {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match &factor.prefix {
                None => write!(f, "{}", factor.var)?,
                Some(p) => write!(f, "s[{}]({})", p, factor.var)?,
            }
        }
        Ok(())
    }
}

/// Splits a word into its wreath term and its additive term.
pub fn decompose(w: &SemiWord) -> (WreathTerm, AddTerm) {
    let mut factors = Vec::with_capacity(w.len());
    let mut prefix: Option<AddTerm> = None;
    for &v in w.letters() {
        factors.push(WreathFactor {
            prefix: prefix.clone(),
            var: v,
        });
        prefix = Some(match prefix {
            None => AddTerm::var(v),
            Some(p) => p.add(&AddTerm::var(v)),
        });
    }
    (WreathTerm { factors }, AddTerm::of_word(w))
}

/// A wreath term with the shifts specialized to constants.
#[allow(clippy::len_without_is_empty)] // never empty by construction
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftTerm {
    factors: Vec<(u64, Var)>,
}

impl ShiftTerm {
    pub fn new(factors: Vec<(u64, Var)>) -> Result<Self, TermError> {
        if factors.is_empty() {
            return Err(TermError::EmptyWord);
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(u64, Var)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn max_offset(&self) -> u64 {
        self.factors.iter().map(|&(o, _)| o).max().unwrap_or(0)
    }

    /// Offsets are prefix sums, hence weakly increasing whenever the shift
    /// components are nonnegative; callers over positive points may rely on
    /// strict growth.
    pub fn offsets_weakly_increasing(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].0 <= w[1].0)
    }

    /// The b-th projection: factor (o, x) contributes the indexed letter
    /// (x, b + o).
    pub fn projection(&self, b: u64) -> ProjectionWord {
        ProjectionWord {
            letters: self.factors.iter().map(|&(o, v)| (v, b + o)).collect(),
        }
    }

    /// Pointwise product of the shifted vectors, in factor order.
    pub fn eval(
        &self,
        vectors: &[FinSuppVector],
        sg: &FiniteSemigroupWithZero,
    ) -> Result<FinSuppVector, TermError> {
        let mut acc: Option<FinSuppVector> = None;
        for &(offset, v) in &self.factors {
            let vec = vectors.get(v.0).ok_or(TermError::ArityMismatch {
                need: v.0,
                found: vectors.len(),
            })?;
            let shifted = vec.shift(offset);
            acc = Some(match acc {
                None => shifted,
                Some(a) => a
                    .pointwise_mul(&shifted, sg)
                    .expect("start indices agree within one point"),
            });
        }
        Ok(acc.expect("shift terms are nonempty"))
    }
}

impl fmt::Display for ShiftTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(o, v) in &self.factors {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if o == 0 {
                write!(f, "{v}")?;
            } else {
                write!(f, "s{o}({v})")?;
            }
        }
        Ok(())
    }
}

/// A product of doubly indexed variables x_{i,b}: the projection of a shift
/// term at a fixed coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionWord {
    letters: Vec<(Var, u64)>,
}

impl ProjectionWord {
    pub fn letters(&self) -> &[(Var, u64)] {
        &self.letters
    }

    /// Product in the base semigroup of the indexed coordinates.
    pub fn eval(
        &self,
        vectors: &[FinSuppVector],
        sg: &FiniteSemigroupWithZero,
    ) -> Result<Elem, TermError> {
        let mut acc: Option<Elem> = None;
        for &(v, c) in &self.letters {
            let vec = vectors.get(v.0).ok_or(TermError::ArityMismatch {
                need: v.0,
                found: vectors.len(),
            })?;
            let e = vec.get(c);
            acc = Some(match acc {
                None => e,
                Some(a) => sg.mul(a, e),
            });
        }
        Ok(acc.expect("projection words are nonempty"))
    }
}

impl fmt::Display for ProjectionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(v, c) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{v}[{c}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(letters: &[usize]) -> SemiWord {
        SemiWord::new(letters.iter().map(|&i| Var(i)).collect()).unwrap()
    }

    fn term(pairs: &[(usize, u64)]) -> AddTerm {
        AddTerm::new(pairs.iter().map(|&(v, c)| (Var(v), c))).unwrap()
    }

    #[test]
    fn decompose_single_letter() {
        let (wt, bt) = decompose(&word(&[0]));
        assert_eq!(wt.factors().len(), 1);
        assert_eq!(wt.factors()[0].prefix, None);
        assert_eq!(bt, term(&[(0, 1)]));
    }

    #[test]
    fn decompose_x1_x3() {
        let (wt, bt) = decompose(&word(&[0, 2]));
        assert_eq!(wt.factors()[0].prefix, None);
        assert_eq!(wt.factors()[0].var, Var(0));
        assert_eq!(wt.factors()[1].prefix, Some(term(&[(0, 1)])));
        assert_eq!(wt.factors()[1].var, Var(2));
        assert_eq!(bt, term(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn decompose_with_repetition() {
        // x1 x2 x1 -> prefixes (), x1, x1+x2; additive part 2x1 + x2
        let (wt, bt) = decompose(&word(&[0, 1, 0]));
        assert_eq!(wt.factors()[2].prefix, Some(term(&[(0, 1), (1, 1)])));
        assert_eq!(wt.factors()[2].var, Var(0));
        assert_eq!(bt, term(&[(0, 2), (1, 1)]));
    }

    #[test]
    fn specialize_evaluates_prefixes() {
        let (wt, _) = decompose(&word(&[0, 1, 0]));
        let st = wt.specialize(&[2, 3]).unwrap();
        assert_eq!(st.factors(), &[(0, Var(0)), (2, Var(1)), (5, Var(0))]);
        assert!(st.offsets_weakly_increasing());
    }

    #[test]
    fn specialize_single_letter_any_point() {
        let (wt, _) = decompose(&word(&[0]));
        let st = wt.specialize(&[7]).unwrap();
        assert_eq!(st.factors(), &[(0, Var(0))]);
    }

    #[test]
    fn specialize_arity_mismatch() {
        let (wt, _) = decompose(&word(&[0, 2]));
        assert!(wt.specialize(&[1]).is_err());
    }

    #[test]
    fn projection_applies_offsets() {
        let st = ShiftTerm::new(vec![(0, Var(0)), (2, Var(1))]).unwrap();
        let pw = st.projection(1);
        assert_eq!(pw.letters(), &[(Var(0), 1), (Var(1), 3)]);

        let st2 = ShiftTerm::new(vec![(0, Var(0)), (1, Var(1)), (3, Var(0))]).unwrap();
        assert_eq!(
            st2.projection(2).letters(),
            &[(Var(0), 2), (Var(1), 3), (Var(0), 5)]
        );
        let st3 = ShiftTerm::new(vec![(0, Var(3))]).unwrap();
        assert_eq!(st3.projection(5).letters(), &[(Var(3), 5)]);
    }

    #[test]
    fn word_display_round_shape() {
        assert_eq!(word(&[0, 1, 1, 1, 2]).to_string(), "x1 x2^3 x3");
        assert_eq!(word(&[0]).to_string(), "x1");
    }

    #[test]
    fn addterm_display() {
        assert_eq!(term(&[(0, 1), (1, 2)]).to_string(), "x1 + 2x2");
        assert_eq!(AddTermOrZero::Zero.to_string(), "0");
    }

    #[test]
    fn doubled_word_interleaves_blocks() {
        let w = word(&[0, 2]);
        let d = w.doubled(6);
        assert_eq!(
            d.letters(),
            &[Var(0), Var(6), Var(2), Var(8)],
            "x1 x3 doubles to x1' x1'' x3' x3''"
        );
    }
}
