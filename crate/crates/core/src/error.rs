use thiserror::Error;

use crate::blocks::BlockTag;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("metric parameters must be strictly positive and finite, got ({a}, {b}, {c})")]
    Domain { a: f64, b: f64, c: f64 },

    #[error("{what} is only available for levels {supported}, got n = {n}")]
    UnsupportedLevel {
        what: &'static str,
        supported: &'static str,
        n: usize,
    },

    #[error(
        "representation operator at level {n} has imaginary residue {residue:e} at ({row}, {col})"
    )]
    ImaginaryResidue {
        n: usize,
        row: usize,
        col: usize,
        residue: f64,
    },

    #[error(
        "representation operator at level {n} couples the A and B subspaces at ({row}, {col})"
    )]
    BlockCoupling { n: usize, row: usize, col: usize },

    #[error("block {tag:?} at level {n} is not symmetrizable at off-diagonal {k}: sub = {sub}, super = {sup}")]
    NotSymmetrizable {
        n: usize,
        tag: BlockTag,
        k: usize,
        sub: f64,
        sup: f64,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("{0}")]
    Precondition(String),

    #[error("scal = {scal:e} is not positive; the smallest |eigenvalue| cannot be certified")]
    Uncertifiable { scal: f64 },

    #[error("certification failed at step '{step}' (n = {n:?}, k = {k:?}): margin {margin:e}")]
    CertificationFailure {
        step: String,
        n: Option<usize>,
        k: Option<usize>,
        margin: f64,
    },

    #[error("base case '{case}' failed at n = {n}: margin {margin:e}")]
    BaseCaseFailure { case: String, n: usize, margin: f64 },

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
