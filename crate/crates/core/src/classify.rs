//! Closed-form answer for `L_(d_1..d_r)(2^n)` at general points: the expected
//! dimension, except for four families.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LinearSystem, MultiDegree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Speciality {
    NonSpecial,
    Special,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExceptionFamily {
    /// `(2, 2a)` with `2a + 1` points.
    TwoTwoA,
    /// `(1, 1, 2a)` with `2a + 1` points.
    OneOneTwoA,
    /// `(2, 2, 2)` with 7 points.
    TwoTwoTwo,
    /// `(1, 1, 1, 1)` with 3 points.
    AllOnesR4,
}

impl fmt::Display for ExceptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExceptionFamily::TwoTwoA => "(2,2a)",
            ExceptionFamily::OneOneTwoA => "(1,1,2a)",
            ExceptionFamily::TwoTwoTwo => "(2,2,2)",
            ExceptionFamily::AllOnesR4 => "(1,1,1,1)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub status: Speciality,
    pub dim: i64,
    #[serde(rename = "exception_family", skip_serializing_if = "Option::is_none", default)]
    pub family: Option<ExceptionFamily>,
}

/// One row of the exception table; `a` is symbolic for the first two rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExceptionRow {
    pub family: ExceptionFamily,
    pub virtual_dim: i64,
    pub dim: i64,
}

/// A row of the table at a concrete `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionInstance {
    pub family: ExceptionFamily,
    pub degrees: MultiDegree,
    pub n: usize,
    pub virtual_dim: i64,
    pub dim: i64,
}

impl ExceptionRow {
    pub fn is_parametric(&self) -> bool {
        matches!(self.family, ExceptionFamily::TwoTwoA | ExceptionFamily::OneOneTwoA)
    }

    /// Degrees and point count at parameter `a >= 1` (ignored by the fixed rows).
    pub fn instantiate(&self, a: u32) -> ExceptionInstance {
        assert!(a >= 1, "exception families start at a = 1");
        let (degrees, n) = match self.family {
            ExceptionFamily::TwoTwoA => (vec![2, 2 * a], 2 * a as usize + 1),
            ExceptionFamily::OneOneTwoA => (vec![1, 1, 2 * a], 2 * a as usize + 1),
            ExceptionFamily::TwoTwoTwo => (vec![2, 2, 2], 7),
            ExceptionFamily::AllOnesR4 => (vec![1, 1, 1, 1], 3),
        };
        ExceptionInstance {
            family: self.family,
            degrees: MultiDegree::new(degrees).expect("non-empty"),
            n,
            virtual_dim: self.virtual_dim,
            dim: self.dim,
        }
    }
}

pub fn exception_table() -> [ExceptionRow; 4] {
    [
        ExceptionRow { family: ExceptionFamily::TwoTwoA, virtual_dim: -1, dim: 0 },
        ExceptionRow { family: ExceptionFamily::OneOneTwoA, virtual_dim: -1, dim: 0 },
        ExceptionRow { family: ExceptionFamily::TwoTwoTwo, virtual_dim: -2, dim: 0 },
        ExceptionRow { family: ExceptionFamily::AllOnesR4, virtual_dim: 0, dim: 1 },
    ]
}

/// Every table instance with `1 <= a <= a_max` (fixed rows once each).
pub fn exception_instances(a_max: u32) -> Vec<ExceptionInstance> {
    let mut out = Vec::new();
    for row in exception_table() {
        if row.is_parametric() {
            out.extend((1..=a_max).map(|a| row.instantiate(a)));
        } else {
            out.push(row.instantiate(1));
        }
    }
    out
}

/// The exception family matched by sorted, zero-free degrees and `n`.
pub fn match_exception(sorted: &[u32], n: usize) -> Option<ExceptionFamily> {
    match *sorted {
        [2, d] if d % 2 == 0 && n == d as usize + 1 => Some(ExceptionFamily::TwoTwoA),
        [1, 1, d] if d >= 2 && d % 2 == 0 && n == d as usize + 1 => Some(ExceptionFamily::OneOneTwoA),
        [2, 2, 2] if n == 7 => Some(ExceptionFamily::TwoTwoTwo),
        [1, 1, 1, 1] if n == 3 => Some(ExceptionFamily::AllOnesR4),
        _ => None,
    }
}

/// Dimension of `L_deg(2^n)` at general points. Zero degrees are dropped
/// first: a double point on the smaller product imposes the same conditions.
pub fn classify(deg: &MultiDegree, n: usize) -> Result<Classification> {
    let norm = deg.normalized().ok_or(Error::DegenerateDegrees)?;
    if let Some(family) = match_exception(norm.degrees(), n) {
        let row = exception_table().into_iter().find(|r| r.family == family).expect("table row");
        return Ok(Classification { status: Speciality::Special, dim: row.dim, family: Some(family) });
    }
    let dim = LinearSystem::product(norm, crate::model::FatPoints::doubles(n)).expected_dimension();
    Ok(Classification { status: Speciality::NonSpecial, dim, family: None })
}
