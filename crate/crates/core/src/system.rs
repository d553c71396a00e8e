//! Equations, one-parameter schema families, systems, and points of the
//! wreath product, together with word evaluation and satisfaction checks.
//!
//! A schema is an affine family of equations: a sequence of letter blocks
//! whose exponents are either constants or the single parameter `i`. Every
//! instance has additive parts of the form base + i * step per side; both
//! side lengths are required to grow strictly with `i`, which keeps the
//! length-filtered subsystems finite.

use std::fmt;

use thiserror::Error;

use crate::semigroup::FiniteSemigroupWithZero;
use crate::term::{decompose, AddTerm, SemiWord, TermError, Var};
use crate::vector::{wreath_mul, FinSuppVector, Start, VectorError, WreathElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Vector(#[from] VectorError),
    #[error("schema side has no parametric block; instance lengths would not grow")]
    SchemaNotIncreasing,
    #[error("schema side is empty at index {0}")]
    SchemaEmptyInstance(u64),
    #[error("schema index {index} below declared minimum {min}")]
    SchemaIndexBelowMin { index: u64, min: u64 },
    #[error("point arity {found}, expected {expected}")]
    PointArity { expected: usize, found: usize },
    #[error("point start index does not match the requested variant")]
    PointVariant,
    #[error("variable {0} out of range for system with {1} variables")]
    VarOutOfRange(Var, usize),
}

/// A coefficient-free word equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: SemiWord,
    pub rhs: SemiWord,
}

impl Equation {
    pub fn new(lhs: SemiWord, rhs: SemiWord) -> Self {
        Self { lhs, rhs }
    }

    /// Additive parts of both sides.
    pub fn additive_parts(&self) -> (AddTerm, AddTerm) {
        (AddTerm::of_word(&self.lhs), AddTerm::of_word(&self.rhs))
    }

    pub fn max_var(&self) -> usize {
        self.lhs.max_var().max(self.rhs.max_var())
    }

    pub fn doubled(&self, n: usize) -> Equation {
        Equation {
            lhs: self.lhs.doubled(n),
            rhs: self.rhs.doubled(n),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Exponent of a schema block: a constant or the schema parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockExp {
    Const(u64),
    Param,
}

/// A run of letters raised to a block exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchemaBlock {
    pub letters: Vec<Var>,
    pub exp: BlockExp,
}

/// One side of a schema pattern.
pub type SchemaSide = Vec<SchemaBlock>;

/// A one-parameter affine family of equations with a declared lower index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schema {
    lhs: SchemaSide,
    rhs: SchemaSide,
    min_index: u64,
}

fn side_letters(side: &SchemaSide, i: u64) -> Vec<Var> {
    let mut out = Vec::new();
    for block in side {
        let reps = match block.exp {
            BlockExp::Const(k) => k,
            BlockExp::Param => i,
        };
        for _ in 0..reps {
            out.extend(block.letters.iter().copied());
        }
    }
    out
}

/// Additive part of one schema side as base + i * step coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub base: Vec<u64>,
    pub step: Vec<u64>,
}

impl AffineForm {
    pub fn at(&self, i: u64) -> Vec<u64> {
        self.base
            .iter()
            .zip(&self.step)
            .map(|(&b, &s)| b + i * s)
            .collect()
    }

    pub fn len_at(&self, i: u64) -> u64 {
        self.base.iter().sum::<u64>() + i * self.step.iter().sum::<u64>()
    }
}

fn side_affine(side: &SchemaSide, n: usize) -> AffineForm {
    let mut base = vec![0u64; n];
    let mut step = vec![0u64; n];
    for block in side {
        for &v in &block.letters {
            match block.exp {
                BlockExp::Const(k) => base[v.0] += k,
                BlockExp::Param => step[v.0] += 1,
            }
        }
    }
    AffineForm { base, step }
}

impl Schema {
    /// Validates that both sides grow strictly with the parameter and that
    /// every instance at or above the minimum index is a well-formed word.
    pub fn new(lhs: SchemaSide, rhs: SchemaSide, min_index: u64) -> Result<Self, SystemError> {
        for side in [&lhs, &rhs] {
            let parametric = side
                .iter()
                .any(|b| b.exp == BlockExp::Param && !b.letters.is_empty());
            if !parametric {
                return Err(SystemError::SchemaNotIncreasing);
            }
        }
        let schema = Self {
            lhs,
            rhs,
            min_index,
        };
        // larger indices only add letters, so nonempty at the minimum suffices
        if side_letters(&schema.lhs, min_index).is_empty()
            || side_letters(&schema.rhs, min_index).is_empty()
        {
            return Err(SystemError::SchemaEmptyInstance(min_index));
        }
        Ok(schema)
    }

    pub fn min_index(&self) -> u64 {
        self.min_index
    }

    pub fn sides(&self) -> (&SchemaSide, &SchemaSide) {
        (&self.lhs, &self.rhs)
    }

    pub fn instantiate(&self, i: u64) -> Result<Equation, SystemError> {
        if i < self.min_index {
            return Err(SystemError::SchemaIndexBelowMin {
                index: i,
                min: self.min_index,
            });
        }
        let lhs = SemiWord::new(side_letters(&self.lhs, i))?;
        let rhs = SemiWord::new(side_letters(&self.rhs, i))?;
        Ok(Equation::new(lhs, rhs))
    }

    /// Additive parts of both sides as affine functions of the parameter.
    pub fn additive_affine(&self, n: usize) -> (AffineForm, AffineForm) {
        (side_affine(&self.lhs, n), side_affine(&self.rhs, n))
    }

    pub fn max_var(&self) -> usize {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .flat_map(|b| b.letters.iter())
            .map(|v| v.0)
            .max()
            .unwrap_or(0)
    }

    pub fn doubled(&self, n: usize) -> Schema {
        let double_side = |side: &SchemaSide| {
            side.iter()
                .map(|b| SchemaBlock {
                    letters: b
                        .letters
                        .iter()
                        .flat_map(|v| [Var(v.0), Var(n + v.0)])
                        .collect(),
                    exp: b.exp,
                })
                .collect()
        };
        Schema {
            lhs: double_side(&self.lhs),
            rhs: double_side(&self.rhs),
            min_index: self.min_index,
        }
    }
}

fn display_side(side: &SchemaSide, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for block in side {
        if !first {
            write!(f, " ")?;
        }
        first = false;
        let body = block
            .letters
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        match (block.letters.len(), block.exp) {
            (1, BlockExp::Const(1)) => write!(f, "{body}")?,
            (1, BlockExp::Const(k)) => write!(f, "{body}^{k}")?,
            (1, BlockExp::Param) => write!(f, "{body}^i")?,
            (_, BlockExp::Const(1)) => write!(f, "( {body} )")?,
            (_, BlockExp::Const(k)) => write!(f, "( {body} )^{k}")?,
            (_, BlockExp::Param) => write!(f, "( {body} )^i")?,
        }
    }
    Ok(())
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i>={} : ", self.min_index)?;
        display_side(&self.lhs, f)?;
        write!(f, " = ")?;
        display_side(&self.rhs, f)
    }
}

/// A finite list of equations plus a finite list of schemas over a fixed
/// variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    n: usize,
    names: Vec<String>,
    pub equations: Vec<Equation>,
    pub schemas: Vec<Schema>,
}

impl System {
    pub fn new(
        n: usize,
        equations: Vec<Equation>,
        schemas: Vec<Schema>,
    ) -> Result<Self, SystemError> {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        Self::with_names(n, names, equations, schemas)
    }

    pub fn with_names(
        n: usize,
        names: Vec<String>,
        equations: Vec<Equation>,
        schemas: Vec<Schema>,
    ) -> Result<Self, SystemError> {
        assert_eq!(names.len(), n);
        for eq in &equations {
            if eq.max_var() >= n {
                return Err(SystemError::VarOutOfRange(Var(eq.max_var()), n));
            }
        }
        for s in &schemas {
            if s.max_var() >= n {
                return Err(SystemError::VarOutOfRange(Var(s.max_var()), n));
            }
        }
        Ok(Self {
            n,
            names,
            equations,
            schemas,
        })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.names[v.0]
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    /// The same system in the doubled variable set: every letter x_i becomes
    /// the block x'_i x''_i, with x'_i = Var(i) and x''_i = Var(n + i).
    pub fn doubled(&self) -> System {
        let n = self.n;
        let names = self
            .names
            .iter()
            .map(|s| format!("{s}'"))
            .chain(self.names.iter().map(|s| format!("{s}''")))
            .collect();
        System {
            n: 2 * n,
            names,
            equations: self.equations.iter().map(|e| e.doubled(n)).collect(),
            schemas: self.schemas.iter().map(|s| s.doubled(n)).collect(),
        }
    }
}

/// Identifies an equation of a system: either an explicit member or a schema
/// instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EqRef {
    Explicit(usize),
    Instance { schema: usize, index: u64 },
}

impl fmt::Display for EqRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqRef::Explicit(i) => write!(f, "eq#{i}"),
            EqRef::Instance { schema, index } => write!(f, "schema#{schema}[i={index}]"),
        }
    }
}

/// A selected equation together with its provenance inside the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SysEq {
    pub source: EqRef,
    pub equation: Equation,
}

/// A candidate solution: one vector and one shift component per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathPoint {
    start: Start,
    vectors: Vec<FinSuppVector>,
    bvals: Vec<u64>,
}

impl WreathPoint {
    pub fn new(
        start: Start,
        vectors: Vec<FinSuppVector>,
        bvals: Vec<u64>,
    ) -> Result<Self, SystemError> {
        if vectors.len() != bvals.len() {
            return Err(SystemError::PointArity {
                expected: vectors.len(),
                found: bvals.len(),
            });
        }
        for v in &vectors {
            if v.start() != start {
                return Err(SystemError::PointVariant);
            }
        }
        if start == Start::One && bvals.contains(&0) {
            return Err(SystemError::PointVariant);
        }
        Ok(Self {
            start,
            vectors,
            bvals,
        })
    }

    pub fn start(&self) -> Start {
        self.start
    }

    pub fn arity(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[FinSuppVector] {
        &self.vectors
    }

    pub fn bvals(&self) -> &[u64] {
        &self.bvals
    }

    pub fn value_of(&self, v: Var) -> Result<WreathElement, SystemError> {
        if v.0 >= self.vectors.len() {
            return Err(SystemError::VarOutOfRange(v, self.vectors.len()));
        }
        Ok(WreathElement {
            vector: self.vectors[v.0].clone(),
            b: self.bvals[v.0],
        })
    }
}

/// Left-to-right product of the letters' values.
pub fn eval_word(
    w: &SemiWord,
    pt: &WreathPoint,
    sg: &FiniteSemigroupWithZero,
) -> Result<WreathElement, SystemError> {
    let mut acc: Option<WreathElement> = None;
    for &v in w.letters() {
        let val = pt.value_of(v)?;
        acc = Some(match acc {
            None => val,
            Some(a) => wreath_mul(&a, &val, sg)?,
        });
    }
    Ok(acc.expect("words are nonempty"))
}

/// Whether a point satisfies a full wreath equation (vector and b part).
pub fn satisfies(
    pt: &WreathPoint,
    eq: &Equation,
    sg: &FiniteSemigroupWithZero,
) -> Result<bool, SystemError> {
    let l = eval_word(&eq.lhs, pt, sg)?;
    let r = eval_word(&eq.rhs, pt, sg)?;
    Ok(l == r)
}

/// Whether the point's b components satisfy the additive part of an equation.
pub fn satisfies_additive(pt: &WreathPoint, eq: &Equation) -> Result<bool, SystemError> {
    let (tb, sb) = eq.additive_parts();
    Ok(tb.eval(pt.bvals())? == sb.eval(pt.bvals())?)
}

/// Evaluates only the vector parts of both sides at the point.
pub fn eval_vector_parts(
    eq: &Equation,
    pt: &WreathPoint,
    sg: &FiniteSemigroupWithZero,
) -> Result<(FinSuppVector, FinSuppVector), SystemError> {
    let (lw, _) = decompose(&eq.lhs);
    let (rw, _) = decompose(&eq.rhs);
    let lt = lw.specialize(pt.bvals())?;
    let rt = rw.specialize(pt.bvals())?;
    Ok((lt.eval(pt.vectors(), sg)?, rt.eval(pt.vectors(), sg)?))
}

/// A shift-equation satisfaction check via projections over a finite window.
///
/// The window covers every support coordinate plus the maximal offset; one
/// extra out-of-window coordinate compares the defaults. Equivalent to
/// comparing the evaluated vectors, and kept as an independent route.
pub fn satisfies_shift_eq_by_window(
    lhs: &crate::term::ShiftTerm,
    rhs: &crate::term::ShiftTerm,
    vectors: &[FinSuppVector],
    sg: &FiniteSemigroupWithZero,
) -> Result<bool, TermError> {
    let start = vectors.first().map(|v| v.start().min_coord()).unwrap_or(1);
    let max_supp = vectors.iter().filter_map(|v| v.max_support()).max();
    let max_off = lhs.max_offset().max(rhs.max_offset());
    let hi = match max_supp {
        // one coordinate beyond the window checks the defaults
        Some(m) => m + max_off + 1,
        None => start,
    };
    for b in start..=hi {
        if lhs.projection(b).eval(vectors, sg)? != rhs.projection(b).eval(vectors, sg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the standard six-variable witness schema x1 x2^i x3 = x4 x5^i x6.
pub fn witness_schema() -> Schema {
    let block = |v: usize, exp: BlockExp| SchemaBlock {
        letters: vec![Var(v)],
        exp,
    };
    Schema::new(
        vec![
            block(0, BlockExp::Const(1)),
            block(1, BlockExp::Param),
            block(2, BlockExp::Const(1)),
        ],
        vec![
            block(3, BlockExp::Const(1)),
            block(4, BlockExp::Param),
            block(5, BlockExp::Const(1)),
        ],
        0,
    )
    .expect("witness schema is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::corpus;

    fn word(letters: &[usize]) -> SemiWord {
        SemiWord::new(letters.iter().map(|&i| Var(i)).collect()).unwrap()
    }

    #[test]
    fn schema_instances_match_expected_words() {
        let s = witness_schema();
        assert_eq!(s.instantiate(0).unwrap().to_string(), "x1 x3 = x4 x6");
        assert_eq!(s.instantiate(1).unwrap().to_string(), "x1 x2 x3 = x4 x5 x6");
        assert_eq!(
            s.instantiate(3).unwrap().to_string(),
            "x1 x2^3 x3 = x4 x5^3 x6"
        );
        assert_eq!(
            s.instantiate(2).unwrap(),
            Equation::new(word(&[0, 1, 1, 2]), word(&[3, 4, 4, 5]))
        );
    }

    #[test]
    fn schema_index_below_min_rejected() {
        let s = Schema::new(
            vec![SchemaBlock {
                letters: vec![Var(0)],
                exp: BlockExp::Param,
            }],
            vec![SchemaBlock {
                letters: vec![Var(1)],
                exp: BlockExp::Param,
            }],
            1,
        )
        .unwrap();
        assert!(s.instantiate(0).is_err());
        assert!(s.instantiate(1).is_ok());
    }

    #[test]
    fn schema_needs_parametric_blocks_on_both_sides() {
        let err = Schema::new(
            vec![SchemaBlock {
                letters: vec![Var(0)],
                exp: BlockExp::Param,
            }],
            vec![SchemaBlock {
                letters: vec![Var(1)],
                exp: BlockExp::Const(1),
            }],
            0,
        )
        .unwrap_err();
        assert_eq!(err, SystemError::SchemaNotIncreasing);
    }

    #[test]
    fn schema_empty_instance_rejected() {
        // x2^i alone is empty at i = 0
        let err = Schema::new(
            vec![SchemaBlock {
                letters: vec![Var(0)],
                exp: BlockExp::Param,
            }],
            vec![SchemaBlock {
                letters: vec![Var(1)],
                exp: BlockExp::Param,
            }],
            0,
        )
        .unwrap_err();
        assert_eq!(err, SystemError::SchemaEmptyInstance(0));
    }

    #[test]
    fn affine_parts_track_instances() {
        let s = witness_schema();
        let (l, r) = s.additive_affine(6);
        assert_eq!(l.at(0), vec![1, 0, 1, 0, 0, 0]);
        assert_eq!(l.at(2), vec![1, 2, 1, 0, 0, 0]);
        assert_eq!(r.at(2), vec![0, 0, 0, 1, 2, 1]);
        assert_eq!(l.len_at(3), 5);
    }

    #[test]
    fn eval_word_matches_direct_multiplication() {
        let sg = corpus::semilattice2();
        let e = sg.elem("e").unwrap();
        let z = sg.zero();
        let v1 = FinSuppVector::new(Start::One, z, [(1, e)]).unwrap();
        let pt = WreathPoint::new(Start::One, vec![v1.clone()], vec![1]).unwrap();
        let single = eval_word(&word(&[0]), &pt, &sg).unwrap();
        assert_eq!(single, WreathElement { vector: v1, b: 1 });
        let squared = eval_word(&word(&[0, 0]), &pt, &sg).unwrap();
        assert_eq!(squared.b, 2);
        assert!(squared.vector.is_constant());
        assert_eq!(squared.vector.default_elem(), z);
    }

    #[test]
    fn doubled_system_duplicates_additive_coefficients() {
        let sys = System::new(2, vec![Equation::new(word(&[0]), word(&[1]))], vec![]).unwrap();
        let d = sys.doubled();
        assert_eq!(d.arity(), 4);
        let eq = &d.equations[0];
        let (tb, sb) = eq.additive_parts();
        assert_eq!(tb.coeff(Var(0)), 1);
        assert_eq!(tb.coeff(Var(2)), 1);
        assert_eq!(sb.coeff(Var(1)), 1);
        assert_eq!(sb.coeff(Var(3)), 1);
        assert_eq!(d.var_name(Var(2)), "x1''");
    }

    #[test]
    fn point_variant_checks() {
        let sg = corpus::semilattice2();
        let z = sg.zero();
        let v = FinSuppVector::constant(Start::One, z);
        assert!(WreathPoint::new(Start::One, vec![v.clone()], vec![0]).is_err());
        assert!(WreathPoint::new(Start::Zero, vec![v], vec![0]).is_err());
    }
}
