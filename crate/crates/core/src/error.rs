use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("only field constants may appear in a denominator")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent must be a non-negative integer below 2^16")]
    BadExponent,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at offset {position}: {kind}")]
    Parse {
        position: usize,
        kind: ParseErrorKind,
    },
    #[error("the zero polynomial has no initial form")]
    ZeroPolynomial,
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{what} did not stabilize up to truncation level {n_max}")]
    NotStabilized { what: String, n_max: u32 },
    #[error("the ideal is not an ideal of definition for the module")]
    NotIdealOfDefinition,
    #[error("not a system of parameters: {0}")]
    NotSystemOfParameters(String),
    #[error("no lift exists: {0}")]
    Unsolvable(String),
    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),
    #[error("containment violated: basis vector {index} of the smaller space is not in the larger one")]
    Containment { index: usize },
    #[error("element lies in every checked power of the ideal (up to exponent {bound})")]
    InAllPowers { bound: u32 },
}

pub type Result<T> = core::result::Result<T, Error>;
