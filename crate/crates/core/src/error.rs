use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse number: {0:?}")]
    ParseNumber(String),

    #[error("malformed piecewise-linear data: {0}")]
    MalformedPiecewise(String),

    #[error("diagonal exceeds the bound delta(x) <= x at x = {x} (value {value})")]
    ViolatesBound { x: Rational, value: Rational },

    #[error("segment [{x0}, {x1}] has slope {slope} outside [0, 2]")]
    SlopeOutOfRange {
        x0: Rational,
        x1: Rational,
        slope: Rational,
    },

    #[error("diagonal endpoints must satisfy delta(0) = 0 and delta(1) = 1")]
    EndpointMismatch,

    #[error("point {0} outside [0, 1]")]
    OutOfDomain(Rational),

    #[error("diagonal has no slope-1 segment to perturb")]
    NoSlopeOneSegment,

    #[error("splice requires both operands to share the diagonal; they differ at x = {0}")]
    DiagonalMismatch(Rational),

    #[error("omega set is empty (delta is the identity diagonal)")]
    EmptyOmega,

    #[error("asymmetry routes disagree: {0}")]
    RouteMismatch(String),

    #[error("diagonal is not simple (delta-hat has an interior strict local minimum)")]
    NotSimple,

    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
