//! Exact coefficient arithmetic: arbitrary-precision rationals and
//! multivariate rational functions in declared time parameters.
//!
//! [`Rational`] is the ground field. [`Scalar`] is a reduced fraction of
//! multivariate polynomials over it, canonicalised so that equality of
//! values is equality of representations: the denominator is monic under
//! the graded-lexicographic monomial order and coprime to the numerator.

mod poly;
mod ratfunc;
mod text;

use std::fmt;

use thiserror::Error;

pub use poly::{MPoly, Monomial};
pub use ratfunc::Scalar;
pub use text::{parse_rational, parse_scalar};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = num::BigRational;

/// Shorthand for a rational from an integer pair. Panics on zero
/// denominator, like integer division.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Identifier of a declared time parameter: its index in the owning
/// [`Parameters`] set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub usize);

/// The declared time parameters of a computation, in a fixed order.
///
/// The order fixes the graded-lexicographic monomial order used for
/// canonical forms, so two sessions declaring the same names in the same
/// order produce identical textual output.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Parameters {
    names: Vec<String>,
}

impl Parameters {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Parameters {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// Empty parameter set (plain rational scalars only).
    pub fn none() -> Self {
        Parameters::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id.0]
    }

    pub fn lookup(&self, name: &str) -> Option<ParamId> {
        self.names.iter().position(|n| n == name).map(ParamId)
    }

    /// Declare a parameter, returning its id; re-declaring a name returns
    /// the existing id.
    pub fn declare(&mut self, name: &str) -> ParamId {
        if let Some(id) = self.lookup(name) {
            return id;
        }
        self.names.push(name.to_owned());
        ParamId(self.names.len() - 1)
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.names.len()).map(ParamId)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown parameter {0}")]
    UnknownParameter(String),
    #[error("evaluation hits a pole of the denominator")]
    EvaluationPole,
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0 + 1)
    }
}
