//! Finite semigroups with zero, given by an explicit multiplication table.
//!
//! Elements are small indices into a name table; the table is row-major with
//! the row indexed by the left factor. A semigroup may optionally carry a
//! unit, either declared in its table or adjoined with [`FiniteSemigroupWithZero::adjoin_unit`].

use std::fmt;

use thiserror::Error;

/// Index of an element in its semigroup's name table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u8);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Structural problems that prevent a table from being built at all.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("table references undeclared element `{0}`")]
    UndeclaredElement(String),
    #[error("expected {expected} table rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("table row {row} has {found} entries, expected {expected}")]
    RowWidth {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("semigroup has no elements")]
    Empty,
    #[error("too many elements ({0}); at most 255 supported")]
    TooLarge(usize),
    #[error("element name `1` already taken; cannot adjoin a unit")]
    UnitNameTaken,
}

/// Law violations found by [`FiniteSemigroupWithZero::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Triples (x, y, z) with (xy)z != x(yz).
    pub assoc_violations: Vec<(Elem, Elem, Elem)>,
    /// Elements x with 0x != 0 or x0 != 0.
    pub zero_violations: Vec<Elem>,
    /// Elements x with 1x != x or x1 != x (only when a unit is declared).
    pub unit_violations: Vec<Elem>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.assoc_violations.is_empty()
            && self.zero_violations.is_empty()
            && self.unit_violations.is_empty()
    }
}

/// A finite semigroup with a designated zero and an optional unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroupWithZero {
    name: String,
    elements: Vec<String>,
    table: Vec<Elem>,
    zero: Elem,
    unit: Option<Elem>,
}

impl FiniteSemigroupWithZero {
    /// Builds a semigroup from element names and a table of product names.
    ///
    /// Only structural errors are reported here; law violations are left to
    /// [`validate`](Self::validate) so that broken tables can still be
    /// inspected.
    pub fn new(
        name: impl Into<String>,
        element_names: &[&str],
        rows: &[Vec<&str>],
        zero: &str,
        unit: Option<&str>,
    ) -> Result<Self, SemigroupError> {
        if element_names.is_empty() {
            return Err(SemigroupError::Empty);
        }
        if element_names.len() > u8::MAX as usize {
            return Err(SemigroupError::TooLarge(element_names.len()));
        }
        let mut elements = Vec::with_capacity(element_names.len());
        for &n in element_names {
            if elements.iter().any(|e| e == n) {
                return Err(SemigroupError::DuplicateElement(n.to_string()));
            }
            elements.push(n.to_string());
        }
        let resolve = |n: &str| -> Result<Elem, SemigroupError> {
            elements
                .iter()
                .position(|e| e == n)
                .map(|i| Elem(i as u8))
                .ok_or_else(|| SemigroupError::UndeclaredElement(n.to_string()))
        };
        if rows.len() != elements.len() {
            return Err(SemigroupError::RowCount {
                expected: elements.len(),
                found: rows.len(),
            });
        }
        let mut table = Vec::with_capacity(elements.len() * elements.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != elements.len() {
                return Err(SemigroupError::RowWidth {
                    row: i,
                    expected: elements.len(),
                    found: row.len(),
                });
            }
            for entry in row {
                table.push(resolve(entry)?);
            }
        }
        let zero = resolve(zero)?;
        let unit = unit.map(resolve).transpose()?;
        Ok(Self {
            name: name.into(),
            elements,
            table,
            zero,
            unit,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn unit(&self) -> Option<Elem> {
        self.unit
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.elements.len()).map(|i| Elem(i as u8))
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.elements
            .iter()
            .position(|e| e == name)
            .map(|i| Elem(i as u8))
    }

    pub fn elem_name(&self, e: Elem) -> &str {
        &self.elements[e.index()]
    }

    pub fn element_names(&self) -> &[String] {
        &self.elements
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a.index() * self.elements.len() + b.index()]
    }

    #[inline]
    pub fn is_zero(&self, e: Elem) -> bool {
        e == self.zero
    }

    /// Product of a nonempty sequence, left to right.
    ///
    /// Panics on an empty iterator; words always have length >= 1.
    pub fn product(&self, factors: impl IntoIterator<Item = Elem>) -> Elem {
        let mut it = factors.into_iter();
        let first = it.next().expect("product of an empty sequence");
        it.fold(first, |acc, e| self.mul(acc, e))
    }

    /// Exhaustive check of associativity, zero laws and (if declared) unit laws.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for x in self.elems() {
            if self.mul(self.zero, x) != self.zero || self.mul(x, self.zero) != self.zero {
                report.zero_violations.push(x);
            }
            if let Some(u) = self.unit {
                if self.mul(u, x) != x || self.mul(x, u) != x {
                    report.unit_violations.push(x);
                }
            }
        }
        for x in self.elems() {
            for y in self.elems() {
                for z in self.elems() {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        report.assoc_violations.push((x, y, z));
                    }
                }
            }
        }
        report
    }

    /// The semigroup with a fresh unit element `1` adjoined.
    ///
    /// Existing element indices are preserved, so `Elem` values remain valid
    /// in the extended semigroup.
    pub fn adjoin_unit(&self) -> Result<Self, SemigroupError> {
        if self.elements.iter().any(|e| e == "1") {
            return Err(SemigroupError::UnitNameTaken);
        }
        let n = self.elements.len();
        if n + 1 > u8::MAX as usize {
            return Err(SemigroupError::TooLarge(n + 1));
        }
        let unit = Elem(n as u8);
        let mut elements = self.elements.clone();
        elements.push("1".to_string());
        let m = n + 1;
        let mut table = vec![unit; m * m];
        for a in 0..n {
            for b in 0..n {
                table[a * m + b] = self.table[a * n + b];
            }
        }
        for a in 0..m {
            table[a * m + n] = Elem(a as u8);
            table[n * m + a] = Elem(a as u8);
        }
        Ok(Self {
            name: format!("{}_1", self.name),
            elements,
            table,
            zero: self.zero,
            unit: Some(unit),
        })
    }
}

impl fmt::Display for FiniteSemigroupWithZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semigroup {}", self.name)?;
        writeln!(f, "elements {}", self.elements.join(" "))?;
        writeln!(f, "zero {}", self.elem_name(self.zero))?;
        if let Some(u) = self.unit {
            writeln!(f, "unit {}", self.elem_name(u))?;
        }
        writeln!(f, "table")?;
        let n = self.elements.len();
        for a in 0..n {
            let row: Vec<&str> = (0..n)
                .map(|b| self.elem_name(self.table[a * n + b]))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Small stock semigroups used across tests and the bundled fixtures.
pub mod corpus {
    use super::*;

    /// The two-element semilattice {0, e} with idempotent e.
    pub fn semilattice2() -> FiniteSemigroupWithZero {
        FiniteSemigroupWithZero::new(
            "semilattice2",
            &["0", "e"],
            &[vec!["0", "0"], vec!["0", "e"]],
            "0",
            None,
        )
        .expect("corpus table")
    }

    /// Null semigroup on k non-zero generators: every product is zero.
    pub fn null_semigroup(k: usize) -> FiniteSemigroupWithZero {
        let names: Vec<String> = std::iter::once("0".to_string())
            .chain((1..=k).map(|i| format!("a{i}")))
            .collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let rows: Vec<Vec<&str>> = (0..=k).map(|_| vec!["0"; k + 1]).collect();
        FiniteSemigroupWithZero::new(format!("null{k}"), &refs, &rows, "0", None)
            .expect("corpus table")
    }

    /// Monogenic nilpotent semigroup {0, a, a^2, ..., a^(r-1)} with a^r = 0.
    ///
    /// Its nilpotency index is r.
    pub fn monogenic_nilpotent(r: usize) -> FiniteSemigroupWithZero {
        assert!(r >= 2, "need at least one non-zero power");
        let names: Vec<String> = std::iter::once("0".to_string())
            .chain((1..r).map(|i| {
                if i == 1 {
                    "a".to_string()
                } else {
                    format!("a{i}")
                }
            }))
            .collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        // name of a^i for 1 <= i < r, else "0"
        let power = |i: usize| -> &str {
            if i >= r {
                "0"
            } else {
                refs[i]
            }
        };
        let mut rows: Vec<Vec<&str>> = Vec::new();
        rows.push(vec!["0"; r]);
        for i in 1..r {
            let mut row = vec!["0"];
            for j in 1..r {
                row.push(power(i + j));
            }
            rows.push(row);
        }
        FiniteSemigroupWithZero::new(format!("monogenic{r}"), &refs, &rows, "0", None)
            .expect("corpus table")
    }

    /// {0, e, a} with e idempotent and a absorbed into the null part:
    /// ee = e, ea = ae = a, aa = 0. Not nilpotent.
    pub fn semilattice_with_null() -> FiniteSemigroupWithZero {
        FiniteSemigroupWithZero::new(
            "semilattice_null",
            &["0", "e", "a"],
            &[
                vec!["0", "0", "0"],
                vec!["0", "e", "a"],
                vec!["0", "a", "0"],
            ],
            "0",
            None,
        )
        .expect("corpus table")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semilattice_is_valid() {
        let sg = corpus::semilattice2();
        assert!(sg.validate().is_valid());
        let e = sg.elem("e").unwrap();
        assert_eq!(sg.mul(e, e), e);
        assert_eq!(sg.mul(sg.zero(), e), sg.zero());
    }

    #[test]
    fn undeclared_element_is_structural_error() {
        let err = FiniteSemigroupWithZero::new(
            "bad",
            &["0", "e"],
            &[vec!["0", "0"], vec!["0", "f"]],
            "0",
            None,
        )
        .unwrap_err();
        assert_eq!(err, SemigroupError::UndeclaredElement("f".to_string()));
    }

    #[test]
    fn associativity_violation_is_reported_with_triple() {
        // a*b=a, b*a=b, a*a=b, b*b=a: (a a) a = b a = b, a (a a) = a b = a.
        let sg = FiniteSemigroupWithZero::new(
            "broken",
            &["0", "a", "b"],
            &[
                vec!["0", "0", "0"],
                vec!["0", "b", "a"],
                vec!["0", "b", "a"],
            ],
            "0",
            None,
        )
        .unwrap();
        let report = sg.validate();
        assert!(!report.is_valid());
        let a = sg.elem("a").unwrap();
        assert!(report.assoc_violations.contains(&(a, a, a)));
    }

    #[test]
    fn corpus_tables_are_valid() {
        for sg in [
            corpus::semilattice2(),
            corpus::null_semigroup(2),
            corpus::monogenic_nilpotent(4),
            corpus::semilattice_with_null(),
        ] {
            let report = sg.validate();
            assert!(report.is_valid(), "{} failed: {:?}", sg.name(), report);
        }
    }

    #[test]
    fn adjoin_unit_extends_table() {
        let sg = corpus::semilattice2();
        let sg1 = sg.adjoin_unit().unwrap();
        assert_eq!(sg1.order(), 3);
        assert!(sg1.validate().is_valid());
        let e = sg1.elem("e").unwrap();
        let u = sg1.unit().unwrap();
        assert_eq!(sg1.mul(u, e), e);
        assert_eq!(sg1.mul(e, u), e);
        // indices of the original elements survive
        assert_eq!(sg.elem("e"), sg1.elem("e"));
    }

    #[test]
    fn monogenic_powers() {
        let sg = corpus::monogenic_nilpotent(4);
        let a = sg.elem("a").unwrap();
        let a2 = sg.elem("a2").unwrap();
        let a3 = sg.elem("a3").unwrap();
        assert_eq!(sg.mul(a, a), a2);
        assert_eq!(sg.mul(a2, a), a3);
        assert_eq!(sg.mul(a2, a2), sg.zero());
        assert_eq!(sg.product([a, a, a]), a3);
    }
}
