use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("exhaustive limit exceeded: {what} = {value} > {limit}")]
    ExhaustiveLimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("vertex {vertex} of shell {shell} has {count} neighbours in the previous shell")]
    NotTwoPercolationCompatible { shell: usize, vertex: usize, count: usize },
    #[error("negative weight {value} on edge mask {mask:#b}")]
    NegativeWeight { mask: u32, value: f64 },
    #[error("total mass {total} differs from 1")]
    MassMismatch { total: f64 },
    #[error("target {target} exceeds marginal {marginal} of edge {edge}")]
    TargetAboveMarginal { edge: usize, target: f64, marginal: f64 },
    #[error("state space of size {0} exceeds the enumeration cap")]
    StateSpaceTooLarge(u128),
    #[error("p = {p} lies below the validity threshold {threshold}")]
    BelowValidityThreshold { p: f64, threshold: f64 },
    #[error("p = {p} lies outside the piece [{lo}, {hi}]")]
    OutOfPiece { p: f64, lo: f64, hi: f64 },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("p = {p} is not below {threshold}")]
    AboveThreshold { p: f64, threshold: f64 },
    #[error("pair ({s:#b}, {t:#b}) has two non-singleton sides; the programme is not linear")]
    NonLinearProgramme { s: u32, t: u32 },
    #[error("linear programme is infeasible")]
    Infeasible,
    #[error("linear programme is unbounded")]
    Unbounded,
    #[error("support system is singular: {0}")]
    SingularSystem(String),
    #[error("no sign change on [0, 1]")]
    NoSignChange,
    #[error("fiber too large: {0}")]
    FiberTooLarge(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
