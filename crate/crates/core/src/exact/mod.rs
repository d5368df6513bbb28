//! Exact scalar algebra: rationals, multivariate polynomials and rational
//! functions, unified behind [`ExactField`].

mod field;
mod poly;
mod ratfn;
mod rational;

pub use field::ExactField;
pub use poly::{poly_arith, Monomial, MultiPoly, PolyOp, SymbolSet, MAX_SYMBOLS};
pub use ratfn::{ratfn_eq, RatFn};
pub use rational::{rat, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands use different symbol sets")]
    SymbolMismatch,
    #[error("denominator vanishes at the given point")]
    DenominatorVanishes,
    #[error("symbol `{0}` has no assigned value")]
    UnassignedSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("{0} symbols requested, at most {MAX_SYMBOLS} supported")]
    TooManySymbols(usize),
    #[error("cannot parse `{0}` as a rational")]
    Parse(String),
}
